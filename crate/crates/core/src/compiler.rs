//! Compilation of unidirectional QTMs into three-part PQCAs.
//!
//! A cell is `(l, m, r)`: `l ∈ K_l ∪ {#}`, `m ∈ Σ`, `r ∈ K_r ∪ {#}`. Sub-cell
//! `l` travels one cell left per step and `r` one cell right; `m` holds the
//! tape symbol and stays put.
//!
//! Head alignment (0-based cells, PQCA cell `n` = tape square `n`): a head in
//! state `q ∈ K_r` on square `h` sits in the `r` sub-cell of cell `h − 1`, and
//! one in state `q ∈ K_l` sits in the `l` sub-cell of cell `h + 1`. The next
//! permutation brings it onto square `h` before `U` applies the transition.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex;

use crate::amplitude::Tolerance;
use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::pqca::{pqca_step, PqcaSpec};
use crate::qca1d::{QcaConfig, QcaState, StateIndex};
use crate::qtm::{self, entry_directions, Move, QState, QtmSpec, Symbol};
use crate::scalar::Real;

/// Where the head state is placed by [`embed`], as reported alongside results.
pub const HEAD_ALIGNMENT: &str =
    "0-based cells; K_r head on square h in sub-cell r of cell h-1; K_l head on square h in sub-cell l of cell h+1";

/// Partition of the machine's states by entry direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSplit {
    pub k_l: Vec<QState>,
    pub k_r: Vec<QState>,
}

/// States entered moving left go to `K_l`; all others, including states that
/// are never entered, go to `K_r`.
pub fn split_states<R: Real>(spec: &QtmSpec<R>) -> Result<StateSplit> {
    let dirs = entry_directions(spec);
    let mut split = StateSplit { k_l: Vec::new(), k_r: Vec::new() };
    for q in 0..spec.states().len() as QState {
        let name = &spec.states()[q as usize];
        match dirs.get(&q) {
            Some(d) if d.len() > 1 => return Err(Error::NotUnidirectional(name.clone())),
            Some(d) if d.contains(&Move::Stay) => return Err(Error::StayMove(name.clone())),
            Some(d) if d.contains(&Move::Left) => split.k_l.push(q),
            _ => split.k_r.push(q),
        }
    }
    Ok(split)
}

/// Part (`0` for `l`, `2` for `r`) and sub-state index of a head state.
fn head_slot(split: &StateSplit, q: QState) -> (usize, usize) {
    match split.k_l.iter().position(|&s| s == q) {
        Some(i) => (0, i + 1),
        None => (2, split.k_r.iter().position(|&s| s == q).expect("every state is split") + 1),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompiledPqca<R> {
    pub spec: PqcaSpec<R>,
    pub split: StateSplit,
    /// Name of the empty head sub-state.
    pub hash: String,
}

impl<R: Real> CompiledPqca<R> {
    /// `Q_a`: composite states whose middle sub-cell is in `accept`.
    pub fn acceptance_states(&self, accept: &BTreeSet<Symbol>) -> BTreeSet<StateIndex> {
        (0..self.spec.num_states() as StateIndex)
            .filter(|&q| accept.contains(&(self.spec.split(q)[1] as Symbol)))
            .collect()
    }

    /// Mass on configurations whose cell `k` is in `Q_a`.
    pub fn acceptance(&self, state: &QcaState<R>, k: i64, accept: &BTreeSet<Symbol>) -> R {
        let q_a = self.acceptance_states(accept);
        state.probability_where(|c| q_a.contains(&c.get(k)))
    }
}

/// Builds `U` from the transition function and checks that it is unitary.
pub fn compile<R: Real>(spec: &QtmSpec<R>, tol: &Tolerance<R>) -> Result<CompiledPqca<R>> {
    let split = split_states(spec)?;
    let mut hash = "#".to_string();
    while spec.states().contains(&hash) {
        hash.push('\'');
    }
    let names = |ks: &[QState]| {
        let mut part = vec![hash.clone()];
        part.extend(ks.iter().map(|&q| spec.states()[q as usize].clone()));
        part
    };
    let parts = vec![names(&split.k_l), spec.alphabet().to_vec(), names(&split.k_r)];
    let (nl, nm, nr) = (parts[0].len(), parts[1].len(), parts[2].len());
    let dim = nl * nm * nr;
    let index = |l: usize, m: usize, r: usize| (l * nm + m) * nr + r;

    let cell = |q: QState, m: usize| {
        let (side, i) = head_slot(&split, q);
        if side == 0 {
            index(i, m, 0)
        } else {
            index(0, m, i)
        }
    };

    let mut u = SquareMatrix::<R>::identity(dim);
    let mut grouped: BTreeMap<(QState, Symbol), Vec<_>> = BTreeMap::new();
    for (q, read, t) in spec.rules() {
        grouped.entry((q, read)).or_default().push(*t);
    }
    for ((q1, t1), ts) in grouped {
        let col = cell(q1, t1 as usize);
        u.set(col, col, Complex::default());
        for t in ts {
            u.set(cell(t.next, t.write as usize), col, t.amp);
        }
    }

    let pqca = PqcaSpec::new(parts, vec![1, 0, -1], u)?;
    let (deviation, (a, b)) = pqca.u().unitarity_defect();
    if deviation.is_nan() || deviation > tol.eps_unitary {
        return Err(Error::CompiledNotUnitary {
            deviation: deviation.as_f64(),
            columns: (pqca.state_name(a as StateIndex), pqca.state_name(b as StateIndex)),
        });
    }
    Ok(CompiledPqca { spec: pqca, split, hash })
}

/// The mapping from QTM configurations to PQCA configurations.
pub fn embed<R: Real>(c: &qtm::QtmConfig, compiled: &CompiledPqca<R>) -> QcaConfig {
    let mut cells: BTreeMap<i64, [usize; 3]> = BTreeMap::new();
    for (&i, &s) in c.tape() {
        cells.entry(i).or_default()[1] = s as usize;
    }
    let (side, sub) = head_slot(&compiled.split, c.state);
    let at = if side == 0 { c.head + 1 } else { c.head - 1 };
    cells.entry(at).or_default()[side] = sub;
    QcaConfig::from_cells(cells.into_iter().map(|(i, sub)| (i, compiled.spec.join(&sub))))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport<R> {
    pub p_qtm: R,
    pub p_pqca: R,
    pub delta: R,
    pub qtm_steps: usize,
    pub pqca_steps: usize,
}

/// Runs both machines for `steps` steps and compares acceptance at cell `k`.
pub fn equivalence_check<R: Real>(
    spec: &QtmSpec<R>,
    compiled: &CompiledPqca<R>,
    input: &[Symbol],
    steps: usize,
    k: i64,
    accept: &BTreeSet<Symbol>,
    tol: &Tolerance<R>,
) -> Result<EquivalenceReport<R>> {
    let p_qtm = qtm::acceptance_probability(spec, input, steps, k, accept, tol)?;
    let mut state = QcaState::basis(embed(&spec.initial_config(input), compiled));
    for _ in 0..steps {
        state = pqca_step(&state, &compiled.spec, tol)?;
    }
    let p_pqca = compiled.acceptance(&state, k, accept);
    Ok(EquivalenceReport { p_qtm, p_pqca, delta: (p_qtm - p_pqca).abs(), qtm_steps: steps, pqca_steps: steps })
}

/// Small unidirectional machines over `Σ = {b, a}` that compile to unitary PQCAs.
pub mod fixtures {
    use super::*;

    fn amp<R: Real>(re: f64) -> Complex<R> {
        Complex::new(R::of(re), R::zero())
    }

    fn with_halt<R: Real>(spec: QtmSpec<R>) -> QtmSpec<R> {
        spec.with_rule("qf", "b", "b", "qf", Move::Right, amp(1.0))
            .and_then(|s| s.with_rule("qf", "a", "a", "qf", Move::Right, amp(1.0)))
            .expect("fixture is valid")
    }

    /// Moves right forever, flipping every symbol it reads.
    pub fn flip_mover<R: Real>() -> QtmSpec<R> {
        let spec = QtmSpec::new(&["b", "a"], "b", &["q0", "qf"], "q0", "qf")
            .and_then(|s| s.with_rule("q0", "b", "a", "q0", Move::Right, amp(1.0)))
            .and_then(|s| s.with_rule("q0", "a", "b", "q0", Move::Right, amp(1.0)))
            .expect("fixture is valid");
        with_halt(spec)
    }

    /// Branches once into `qA` (writes `a`) and `qB` (writes `b`) at `1/√2`;
    /// `qB` then writes `a` on every blank it passes.
    pub fn coin_machine<R: Real>() -> QtmSpec<R> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let spec = QtmSpec::new(&["b", "a"], "b", &["q0", "qA", "qB", "qf"], "q0", "qf")
            .and_then(|s| s.with_rule("q0", "b", "a", "qA", Move::Right, amp(h)))
            .and_then(|s| s.with_rule("q0", "b", "b", "qB", Move::Right, amp(h)))
            .and_then(|s| s.with_rule("q0", "a", "a", "qA", Move::Right, amp(h)))
            .and_then(|s| s.with_rule("q0", "a", "b", "qB", Move::Right, amp(-h)))
            .and_then(|s| s.with_rule("qA", "b", "b", "qA", Move::Right, amp(1.0)))
            .and_then(|s| s.with_rule("qA", "a", "a", "q0", Move::Right, amp(1.0)))
            .and_then(|s| s.with_rule("qB", "b", "a", "qB", Move::Right, amp(1.0)))
            .and_then(|s| s.with_rule("qB", "a", "b", "q0", Move::Right, amp(1.0)))
            .expect("fixture is valid");
        with_halt(spec)
    }

    /// `R` applies a Hadamard to the symbol under the head and steps left
    /// into `L`; `L` steps back right into `R`. Two visits cancel.
    pub fn interfering_machine<R: Real>() -> QtmSpec<R> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let spec = QtmSpec::new(&["b", "a"], "b", &["R", "L", "qf"], "R", "qf")
            .and_then(|s| s.with_rule("R", "b", "b", "L", Move::Left, amp(h)))
            .and_then(|s| s.with_rule("R", "b", "a", "L", Move::Left, amp(h)))
            .and_then(|s| s.with_rule("R", "a", "b", "L", Move::Left, amp(h)))
            .and_then(|s| s.with_rule("R", "a", "a", "L", Move::Left, amp(-h)))
            .and_then(|s| s.with_rule("L", "b", "b", "R", Move::Right, amp(1.0)))
            .and_then(|s| s.with_rule("L", "a", "a", "R", Move::Right, amp(1.0)))
            .expect("fixture is valid");
        with_halt(spec)
    }

    /// `(name, machine)` for every fixture.
    pub fn all<R: Real>() -> Vec<(&'static str, QtmSpec<R>)> {
        vec![("flip-mover", flip_mover()), ("coin", coin_machine()), ("interfering", interfering_machine())]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance<f64> {
        Tolerance::default()
    }

    #[test]
    fn split_examples() {
        let spec = fixtures::interfering_machine::<f64>();
        let split = split_states(&spec).unwrap();
        assert_eq!(split.k_l, vec![spec.state_id("L").unwrap()]);
        assert_eq!(split.k_r, vec![spec.state_id("R").unwrap(), spec.state_id("qf").unwrap()]);
        let mixed = fixtures::flip_mover::<f64>().with_rule("qf", "b", "b", "q0", Move::Left, Complex::new(1.0, 0.0));
        assert!(matches!(split_states(&mixed.unwrap()), Err(Error::NotUnidirectional(_))));
    }

    #[test]
    fn empty_machine_compiles_to_identity() {
        let spec = QtmSpec::<f64>::new(&["b", "a"], "b", &["q0", "qf"], "q0", "qf").unwrap();
        let compiled = compile(&spec, &tol()).unwrap();
        assert_eq!(compiled.spec.u(), &SquareMatrix::identity(compiled.spec.num_states()));
    }

    #[test]
    fn fixtures_compile_unitary() {
        let strict = Tolerance::default().with_unitary(1e-10).unwrap();
        for (name, spec) in fixtures::all::<f64>() {
            assert!(qtm::is_unidirectional(&spec), "{name}");
            let compiled = compile(&spec, &strict).unwrap();
            assert!(compiled.spec.u().is_unitary(1e-10), "{name}");
            assert_eq!(compiled.spec.state_name(0), "(#,b,#)");
        }
    }

    #[test]
    fn missing_rows_are_rejected() {
        let spec = QtmSpec::<f64>::new(&["b", "a"], "b", &["q0", "qf"], "q0", "qf")
            .unwrap()
            .with_rule("q0", "b", "b", "q0", Move::Right, Complex::new(1.0, 0.0))
            .unwrap()
            .with_rule("q0", "a", "b", "q0", Move::Right, Complex::new(1.0, 0.0))
            .unwrap();
        assert!(matches!(compile(&spec, &tol()), Err(Error::CompiledNotUnitary { .. })));
    }

    #[test]
    fn embed_examples() {
        let spec = fixtures::interfering_machine::<f64>();
        let compiled = compile(&spec, &tol()).unwrap();
        let r = spec.state_id("R").unwrap();
        let l = spec.state_id("L").unwrap();
        let c = qtm::QtmConfig::new(r, 0, []);
        let e = embed(&c, &compiled);
        assert_eq!(compiled.spec.render(&e), "{-1:(#,b,R)}");
        let c = qtm::QtmConfig::new(l, 0, [(3, 1)]);
        assert_eq!(compiled.spec.render(&embed(&c, &compiled)), "{1:(L,b,#),3:(#,a,#)}");
    }

    #[test]
    fn equivalence_on_fixtures() {
        let a = BTreeSet::from([1]);
        for (name, spec) in fixtures::all::<f64>() {
            let compiled = compile(&spec, &tol()).unwrap();
            for steps in 0..=8 {
                for k in 0..3 {
                    let r = equivalence_check(&spec, &compiled, &[0, 1], steps, k, &a, &tol()).unwrap();
                    assert!(r.delta < 1e-12, "{name} steps={steps} k={k}: {r:?}");
                }
            }
        }
    }

    #[test]
    fn known_probabilities() {
        let a = BTreeSet::from([1]);
        let flip = fixtures::flip_mover::<f64>();
        let c = compile(&flip, &tol()).unwrap();
        let r = equivalence_check(&flip, &c, &[0, 0], 2, 1, &a, &tol()).unwrap();
        assert!((r.p_qtm - 1.0).abs() < 1e-12 && (r.p_pqca - 1.0).abs() < 1e-12);

        let coin = fixtures::coin_machine::<f64>();
        let c = compile(&coin, &tol()).unwrap();
        let r = equivalence_check(&coin, &c, &[], 1, 0, &a, &tol()).unwrap();
        assert!((r.p_pqca - 0.5).abs() < 1e-12);

        let inter = fixtures::interfering_machine::<f64>();
        let c = compile(&inter, &tol()).unwrap();
        let expected = [0.0, 0.5, 0.5, 0.0, 0.0, 0.5];
        for (t, p) in expected.iter().enumerate() {
            let r = equivalence_check(&inter, &c, &[], t, 0, &a, &tol()).unwrap();
            assert!((r.p_pqca - p).abs() < 1e-12, "t={t}: {r:?}");
        }
    }
}
