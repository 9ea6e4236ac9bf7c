//! Block-partitioned QCA on an open chain of qubits.
//!
//! At even steps a two-qubit gate acts on pairs `(2i, 2i+1)`, at odd steps on
//! `(2i+1, 2i+2)`. An edge qubit without a partner idles.

use num_complex::Complex;

use crate::amplitude::{Superposition, Tolerance};
use crate::error::{Error, Result};
use crate::gates::{is_unitary, Bits, Gate, QubitRegister};
use crate::scalar::Real;

/// Largest chain handled by the dense [`circuit_oracle`].
pub const DENSE_LIMIT: usize = 12;

pub type ChainState<R> = QubitRegister<R>;

#[derive(Debug, Clone, PartialEq)]
pub enum Schedule<R> {
    /// `gates[t % len]` at step `t`.
    PerStep(Vec<Gate<R>>),
    Repeat(Gate<R>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BqcaSpec<R> {
    n: usize,
    schedule: Schedule<R>,
    steps: usize,
}

fn check_pair_gate<R: Real>(g: &Gate<R>, tol: &Tolerance<R>) -> Result<()> {
    if g.arity() != 2 {
        return Err(Error::ArityMismatch { gate: g.arity(), targets: 2 });
    }
    if !is_unitary(g, tol.eps_unitary) {
        return Err(Error::NotUnitary);
    }
    Ok(())
}

impl<R: Real> BqcaSpec<R> {
    /// One gate per step; runs for `gates.len()` steps.
    pub fn per_step(n: usize, gates: Vec<Gate<R>>) -> Result<Self> {
        let steps = gates.len();
        Self::new(n, Schedule::PerStep(gates), steps)
    }

    pub fn repeated(n: usize, gate: Gate<R>, steps: usize) -> Result<Self> {
        Self::new(n, Schedule::Repeat(gate), steps)
    }

    pub fn new(n: usize, schedule: Schedule<R>, steps: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::RegisterSize { expected: 1, found: 0 });
        }
        let tol = Tolerance::default();
        match &schedule {
            Schedule::PerStep(gates) => {
                if gates.is_empty() && steps > 0 {
                    return Err(Error::EmptySchedule);
                }
                gates.iter().try_for_each(|g| check_pair_gate(g, &tol))?;
            }
            Schedule::Repeat(g) => check_pair_gate(g, &tol)?,
        }
        Ok(Self { n, schedule, steps })
    }

    /// Same schedule, run for a different number of steps.
    pub fn with_steps(self, steps: usize) -> Result<Self> {
        Self::new(self.n, self.schedule, steps)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn schedule(&self) -> &Schedule<R> {
        &self.schedule
    }

    pub fn gate_at(&self, t: usize) -> &Gate<R> {
        match &self.schedule {
            Schedule::PerStep(gates) => &gates[t % gates.len()],
            Schedule::Repeat(g) => g,
        }
    }
}

/// Qubit pairs acted on at step `t`.
pub fn pairs(n: usize, t: usize) -> Vec<(usize, usize)> {
    (t % 2..n.saturating_sub(1)).step_by(2).map(|a| (a, a + 1)).collect()
}

pub fn bqca_step<R: Real>(state: &ChainState<R>, gate: &Gate<R>, t: usize) -> Result<ChainState<R>> {
    if gate.arity() != 2 {
        return Err(Error::ArityMismatch { gate: gate.arity(), targets: 2 });
    }
    pairs(state.n(), t).into_iter().try_fold(state.clone(), |s, (a, b)| s.apply(gate, &[a, b]))
}

/// Runs `spec.steps()` steps. The trace holds the input followed by the state after each step.
pub fn run_schedule<R: Real>(state: &ChainState<R>, spec: &BqcaSpec<R>) -> Result<(ChainState<R>, Vec<ChainState<R>>)> {
    if state.n() != spec.n {
        return Err(Error::RegisterSize { expected: spec.n, found: state.n() });
    }
    let mut trace = Vec::with_capacity(spec.steps + 1);
    trace.push(state.clone());
    for t in 0..spec.steps {
        let next = bqca_step(trace.last().expect("non-empty"), spec.gate_at(t), t)?;
        trace.push(next);
    }
    Ok((trace.last().expect("non-empty").clone(), trace))
}

/// Dense reference for [`run_schedule`]: explicit 4×4 updates on a `2^n` vector.
pub fn circuit_oracle<R: Real>(state: &ChainState<R>, spec: &BqcaSpec<R>) -> Result<ChainState<R>> {
    let n = spec.n;
    if n > DENSE_LIMIT {
        return Err(Error::DenseLimit { n, limit: DENSE_LIMIT });
    }
    if state.n() != n {
        return Err(Error::RegisterSize { expected: n, found: state.n() });
    }
    let mut v = state.to_dense();
    for t in 0..spec.steps {
        let g = spec.gate_at(t).matrix();
        for (a, b) in pairs(n, t) {
            let (ba, bb) = (1usize << (n - 1 - a), 1usize << (n - 1 - b));
            for base in 0..v.len() {
                if base & (ba | bb) != 0 {
                    continue;
                }
                let idx = [base, base | bb, base | ba, base | ba | bb];
                let old = idx.map(|i| v[i]);
                for (row, &i) in idx.iter().enumerate() {
                    v[i] = (0..4).fold(Complex::default(), |acc, col| acc + g.get(row, col) * old[col]);
                }
            }
        }
    }
    let tol = Tolerance::default();
    let terms = v.into_iter().enumerate().map(|(i, a)| (Bits::from_index(i, n), a));
    let state = Superposition::from_terms(terms)?.prune(&tol);
    Ok(QubitRegister::from_state_unchecked(n, state))
}

/// Position-dependent, time-invariant variant: `gates[j]` acts on the pair
/// `(j, j + 1)` whenever that pair is active at step `t`.
pub fn qgca_step<R: Real>(state: &ChainState<R>, gates: &[Gate<R>], t: usize) -> Result<ChainState<R>> {
    let n = state.n();
    let expected = n.saturating_sub(1);
    if gates.len() != expected {
        return Err(Error::SlotMismatch { expected, found: gates.len() });
    }
    let tol = Tolerance::default();
    gates.iter().try_for_each(|g| check_pair_gate(g, &tol))?;
    pairs(n, t).into_iter().try_fold(state.clone(), |s, (a, b)| s.apply(&gates[a], &[a, b]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::named_gate;

    fn g(name: &str) -> Gate<f64> {
        named_gate(name).unwrap()
    }

    #[test]
    fn pair_layout() {
        assert_eq!(pairs(5, 0), vec![(0, 1), (2, 3)]);
        assert_eq!(pairs(5, 1), vec![(1, 2), (3, 4)]);
        assert_eq!(pairs(1, 0), vec![]);
        assert_eq!(pairs(2, 1), vec![]);
    }

    #[test]
    fn cnot_examples() {
        let out = bqca_step(&QubitRegister::from_bits("10").unwrap(), &g("CNOT"), 0).unwrap();
        assert_eq!(out, QubitRegister::from_bits("11").unwrap());
        let out = bqca_step(&QubitRegister::from_bits("110").unwrap(), &g("CNOT"), 1).unwrap();
        assert_eq!(out, QubitRegister::from_bits("111").unwrap());
    }

    #[test]
    fn identity_gate_is_noop() {
        let ii = g("I").tensor(&g("I"));
        let s = crate::gates::hadamard_all::<f64>(4).unwrap();
        assert_eq!(bqca_step(&s, &ii, 0).unwrap(), s);
        assert_eq!(bqca_step(&s, &g("H"), 0), Err(Error::ArityMismatch { gate: 1, targets: 2 }));
    }

    #[test]
    fn empty_schedule() {
        let spec = BqcaSpec::<f64>::per_step(3, vec![]).unwrap();
        let s = QubitRegister::from_bits("101").unwrap();
        let (out, trace) = run_schedule(&s, &spec).unwrap();
        assert_eq!(out, s);
        assert_eq!(trace.len(), 1);
        assert_eq!(circuit_oracle(&s, &spec).unwrap(), s);
        assert_eq!(BqcaSpec::<f64>::per_step(3, vec![]).unwrap().with_steps(2), Err(Error::EmptySchedule));
    }

    #[test]
    fn schedule_matches_oracle_small() {
        let spec = BqcaSpec::per_step(4, vec![g("H").tensor(&g("I")), g("CNOT")]).unwrap();
        let s = QubitRegister::zero(4);
        let (out, _) = run_schedule(&s, &spec).unwrap();
        let oracle = circuit_oracle(&s, &spec).unwrap();
        assert!(out.state().distance(oracle.state()) < 1e-14);
    }

    #[test]
    fn spec_validation() {
        let mut m = g("CNOT").matrix().clone();
        m.set(0, 0, Complex::new(2.0, 0.0));
        let bad = Gate::from_matrix(m).unwrap();
        assert_eq!(BqcaSpec::repeated(3, bad, 1), Err(Error::NotUnitary));
        assert_eq!(BqcaSpec::repeated(3, g("X"), 1), Err(Error::ArityMismatch { gate: 1, targets: 2 }));
        let big = BqcaSpec::repeated(13, g("CNOT"), 1).unwrap();
        assert_eq!(circuit_oracle(&QubitRegister::zero(13), &big), Err(Error::DenseLimit { n: 13, limit: 12 }));
    }

    #[test]
    fn qgca_slots() {
        let ii = g("I").tensor(&g("I"));
        let s = QubitRegister::from_bits("1010").unwrap();
        assert_eq!(qgca_step(&s, &[ii.clone(), ii.clone(), ii.clone()], 0).unwrap(), s);
        assert_eq!(qgca_step(&s, std::slice::from_ref(&ii), 0), Err(Error::SlotMismatch { expected: 3, found: 1 }));
        let cnot = g("CNOT");
        let uniform = [cnot.clone(), cnot.clone(), cnot.clone()];
        for t in 0..2 {
            assert_eq!(qgca_step(&s, &uniform, t).unwrap(), bqca_step(&s, &cnot, t).unwrap());
        }
    }
}
