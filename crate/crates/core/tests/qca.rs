mod common;

use common::{random_unitary, rng, sparse_unitary_fixing_zero, C};
use proptest::prelude::*;
use qcalab::amplitude::Tolerance;
use qcalab::matrix::SquareMatrix;
use qcalab::pqca::{as_qca, permute_step, pqca_step, unpermute_step, PqcaSpec};
use qcalab::qca1d::{
    check_local_probability, check_quiescent_stability, check_unitary_window, check_well_formed_window, evolve,
    successors, QcaConfig, QcaSpec, QcaState,
};
use rand::Rng;

fn random_config(r: &mut impl Rng, states: usize, width: i64) -> QcaConfig {
    QcaConfig::from_cells((0..width).map(|i| (i, r.gen_range(0..states) as u32)))
}

fn random_pqca(seed: u64) -> PqcaSpec<f64> {
    let mut r = rng(seed);
    let k = r.gen_range(1..=3);
    let parts: Vec<Vec<String>> =
        (0..k).map(|p| (0..r.gen_range(1..=3)).map(|i| format!("{p}{i}")).collect()).collect();
    let mut offsets = (0..k).map(|_| r.gen_range(-2..=2)).collect::<Vec<i64>>();
    offsets.sort_unstable();
    offsets.dedup();
    let parts = parts[..offsets.len()].to_vec();
    let dim: usize = parts.iter().map(Vec::len).product();
    let u = sparse_unitary_fixing_zero(&mut r, dim);
    PqcaSpec::new(parts, offsets, u).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trivial_unitaries_pass_every_check(seed in any::<u64>(), m in 1usize..4) {
        let mut r = rng(seed);
        let spec = QcaSpec::trivial_from_unitary(&random_unitary(&mut r, m)).unwrap();
        let tol = Tolerance::default();
        prop_assert!(check_local_probability(&spec, &tol).holds);
        prop_assert!(check_quiescent_stability(&spec));
        prop_assert!(check_well_formed_window(&spec, 3, &tol).unwrap().holds);
        prop_assert!(check_unitary_window(&spec, 3, &tol).unwrap().holds);
    }

    #[test]
    fn successor_mass_is_one(seed in any::<u64>(), m in 1usize..4, width in 1i64..5) {
        let mut r = rng(seed);
        let spec = QcaSpec::trivial_from_unitary(&random_unitary(&mut r, m)).unwrap();
        let c = random_config(&mut r, m + 1, width);
        let mass: f64 = successors(&c, &spec).unwrap().iter().map(|(_, a)| a.norm_sqr()).sum();
        prop_assert!((mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evolution_commutes_with_translation(seed in any::<u64>(), by in -10i64..10) {
        let spec = as_qca(&random_pqca(seed)).unwrap();
        let mut r = rng(seed ^ 1);
        let c = random_config(&mut r, spec.num_states(), 3);
        let tol = Tolerance::default();
        let a = evolve(&QcaState::basis(c.shift(by)), &spec, &tol).unwrap();
        let b = evolve(&QcaState::basis(c), &spec, &tol).unwrap().map_labels(|c| c.shift(by)).unwrap();
        prop_assert!(a.distance(&b) < 1e-12);
    }

    #[test]
    fn permutation_is_a_bijection(seed in any::<u64>()) {
        let spec = random_pqca(seed);
        let mut r = rng(seed ^ 2);
        let c = random_config(&mut r, spec.num_states(), 6);
        prop_assert_eq!(unpermute_step(&permute_step(&c, &spec), &spec), c.clone());
        prop_assert_eq!(permute_step(&unpermute_step(&c, &spec), &spec), c);
    }

    #[test]
    fn pqca_matches_flattened_qca(seed in any::<u64>(), steps in 1usize..=5) {
        let spec = random_pqca(seed);
        let flat = as_qca(&spec).unwrap();
        let mut r = rng(seed ^ 3);
        let c = random_config(&mut r, spec.num_states(), 2);
        let tol = Tolerance::default();
        let (mut a, mut b) = (QcaState::basis(c.clone()), QcaState::basis(c));
        for _ in 0..steps {
            a = pqca_step(&a, &spec, &tol).unwrap();
            b = evolve(&b, &flat, &tol).unwrap();
        }
        prop_assert!(a.distance(&b) < 1e-10);
        prop_assert!((a.norm_sq() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn perturbed_trivial_fails_local_probability(seed in any::<u64>(), m in 1usize..4) {
        let mut r = rng(seed);
        let u = random_unitary(&mut r, m);
        let (i, j) = (r.gen_range(1..=m), r.gen_range(1..=m));
        let ext = SquareMatrix::from_fn(m + 1, |a, b| match (a, b) {
            (0, 0) => C::new(1.0, 0.0),
            (0, _) | (_, 0) => C::default(),
            _ => u.get(a - 1, b - 1) + if (a, b) == (i, j) { C::new(1e-3, 0.0) } else { C::default() },
        });
        let spec = QcaSpec::trivial_unchecked(&ext).unwrap();
        prop_assert!(!check_local_probability(&spec, &Tolerance::default()).holds);
    }
}
