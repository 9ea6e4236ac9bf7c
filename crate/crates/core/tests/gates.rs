mod common;

use common::{random_unitary, random_vector, rng, C};
use proptest::prelude::*;
use qcalab::amplitude::{Superposition, Tolerance};
use qcalab::gates::{hadamard_all, is_product_2q, named_gate, Bits, Gate, QubitRegister, NAMED_GATES};

type S = Superposition<Bits, f64>;

fn state(v: &[C]) -> S {
    let n = v.len().trailing_zeros() as usize;
    S::from_terms(v.iter().enumerate().map(|(i, &a)| (Bits::from_index(i, n), a))).unwrap()
}

fn concat(a: &Bits, b: &Bits) -> Bits {
    Bits(a.0.iter().chain(&b.0).copied().collect())
}

fn tensor(a: &S, b: &S) -> S {
    S::from_terms(a.iter().flat_map(|(x, p)| b.iter().map(move |(y, q)| (concat(x, y), p * q)))).unwrap()
}

/// Rank-1 test by explicit factorization through the largest entry.
fn factorizes(v: &[C], eps: f64) -> bool {
    let (p, _) = v.iter().enumerate().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).unwrap();
    let (r, c) = (p / 2, p % 2);
    let pivot = v[p];
    let row = [v[2 * r], v[2 * r + 1]];
    let col = [v[c], v[2 + c]];
    (0..4).all(|i| (v[i] - col[i / 2] * row[i % 2] / pivot).norm() <= eps)
}

#[test]
fn named_gates_are_unitary() {
    for name in NAMED_GATES {
        assert!(named_gate::<f64>(name).unwrap().matrix().is_unitary(1e-12), "{name}");
    }
}

#[test]
fn hadamard_layers() {
    for n in 1..=10 {
        let reg = hadamard_all::<f64>(n).unwrap();
        assert_eq!(reg.state().len(), 1 << n);
        for (_, a) in reg.state().iter() {
            assert!((a.norm_sqr() - 0.5f64.powi(n as i32)).abs() <= 1e-12);
        }
    }
}

#[test]
fn generic_over_f32() {
    let reg = hadamard_all::<f32>(3).unwrap();
    assert_eq!(reg.state().len(), 8);
    assert!((reg.state().norm_sq() - 1.0).abs() < 1e-5);
    let bell = QubitRegister::<f32>::zero(2)
        .apply(&named_gate("H").unwrap(), &[0])
        .and_then(|r| r.apply(&named_gate("CNOT").unwrap(), &[0, 1]))
        .unwrap();
    assert!(!is_product_2q(&bell, &Tolerance::default()).unwrap());
}

proptest! {
    #[test]
    fn inner_product_factors_over_tensor(seed in any::<u64>()) {
        let mut r = rng(seed);
        let [a, b, c, d] = std::array::from_fn(|_| state(&random_vector(&mut r, 2)));
        let lhs = tensor(&a, &b).inner_product(&tensor(&c, &d));
        let rhs = a.inner_product(&c) * b.inner_product(&d);
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn measurement_probabilities_sum_to_one(seed in any::<u64>(), n in 1usize..5, q in 0usize..4) {
        let q = q % n;
        let mut r = rng(seed);
        let s = state(&random_vector(&mut r, 1 << n));
        let outcomes = s.measure_projective(|b| b.0[q], &Tolerance::default()).unwrap();
        let total: f64 = outcomes.iter().map(|o| o.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        for o in outcomes {
            prop_assert!((o.post_state.norm_sq() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gates_preserve_norm(seed in any::<u64>(), n in 2usize..6) {
        let mut r = rng(seed);
        let reg = QubitRegister::from_state(n, state(&random_vector(&mut r, 1 << n)), &Tolerance::default()).unwrap();
        let g = Gate::from_matrix(random_unitary(&mut r, 4)).unwrap();
        let t0 = (seed % n as u64) as usize;
        let t1 = (t0 + 1 + (seed / 7 % (n as u64 - 1)) as usize) % n;
        let out = reg.apply(&g, &[t0, t1]).unwrap();
        prop_assert!((out.state().norm_sq() - 1.0).abs() < 1e-12);
        let back = out.apply(&g.adjoint(), &[t0, t1]).unwrap();
        prop_assert!(back.state().distance(reg.state()) < 1e-12);
    }

    #[test]
    fn tensor_is_associative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let [a, b, c] = std::array::from_fn(|_| Gate::from_matrix(random_unitary(&mut r, 2)).unwrap());
        let left = a.tensor(&b).tensor(&c);
        let right = a.tensor(&b.tensor(&c));
        prop_assert!(left.matrix().max_abs_diff(right.matrix()) < 1e-15);
    }

    #[test]
    fn product_test_matches_factorization(seed in any::<u64>(), product in any::<bool>()) {
        let mut r = rng(seed);
        let v = if product {
            let (a, b) = (random_vector(&mut r, 2), random_vector(&mut r, 2));
            vec![a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
        } else {
            random_vector(&mut r, 4)
        };
        let tol = Tolerance::default();
        let reg = QubitRegister::from_state(2, state(&v), &tol).unwrap();
        prop_assert_eq!(is_product_2q(&reg, &tol).unwrap(), factorizes(&v, 1e-9));
    }
}
