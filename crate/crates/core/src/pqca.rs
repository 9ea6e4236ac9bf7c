//! Partitioned QCA: a sub-cell permutation followed by a per-cell unitary.
//!
//! A cell state is a tuple of sub-states, one per part. Part `k` of cell `i`
//! after the permutation is part `k` of cell `i + offsets[k]` before it. Each
//! part's sub-state `0` belongs to `λ`, so composite index `0` is quiescent.

use num_complex::Complex;

use crate::amplitude::{Accumulator, Tolerance};
use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::qca1d::{QcaConfig, QcaSpec, QcaState, StateIndex, BRANCH_LIMIT};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct PqcaSpec<R> {
    parts: Vec<Vec<String>>,
    offsets: Vec<i64>,
    u: SquareMatrix<R>,
    columns: Vec<Vec<(StateIndex, Complex<R>)>>,
}

impl<R: Real> PqcaSpec<R> {
    /// `u[q', q]` is the amplitude of `q → q'`; composite indices are mixed
    /// radix over `parts` with part 0 most significant.
    pub fn new(parts: Vec<Vec<String>>, offsets: Vec<i64>, u: SquareMatrix<R>) -> Result<Self> {
        if parts.is_empty() || parts.len() != offsets.len() {
            return Err(Error::InvalidSpec("need one offset per part".into()));
        }
        if parts.iter().any(Vec::is_empty) {
            return Err(Error::InvalidSpec("empty sub-state set".into()));
        }
        let dim: usize = parts.iter().map(Vec::len).product();
        if u.dim() != dim {
            return Err(Error::InvalidSpec(format!("U has dimension {} but |Q| = {dim}", u.dim())));
        }
        let eps = R::of(R::EPS_UNITARY);
        for q in 0..dim {
            let expected = if q == 0 { R::one() } else { R::zero() };
            let e = Complex::new(expected, R::zero());
            if (u.get(q, 0) - e).norm() > eps || (u.get(0, q) - e).norm() > eps {
                return Err(Error::InvalidSpec("U must fix the quiescent state".into()));
            }
        }
        let columns = (0..dim)
            .map(|q| u.column_support(q).into_iter().map(|(row, a)| (row as StateIndex, a)).collect())
            .collect();
        Ok(Self { parts, offsets, u, columns })
    }

    pub fn parts(&self) -> &[Vec<String>] {
        &self.parts
    }

    pub fn offsets(&self) -> &[i64] {
        &self.offsets
    }

    pub fn u(&self) -> &SquareMatrix<R> {
        &self.u
    }

    pub fn num_states(&self) -> usize {
        self.u.dim()
    }

    /// Sub-state indices of a composite state.
    pub fn split(&self, q: StateIndex) -> Vec<usize> {
        let mut rest = q as usize;
        let mut out = vec![0; self.parts.len()];
        for (slot, part) in out.iter_mut().zip(&self.parts).rev() {
            *slot = rest % part.len();
            rest /= part.len();
        }
        out
    }

    pub fn join(&self, sub: &[usize]) -> StateIndex {
        sub.iter().zip(&self.parts).fold(0usize, |acc, (&s, part)| acc * part.len() + s) as StateIndex
    }

    /// Composite index from sub-state names.
    pub fn state(&self, names: &[&str]) -> Option<StateIndex> {
        if names.len() != self.parts.len() {
            return None;
        }
        let sub = names
            .iter()
            .zip(&self.parts)
            .map(|(n, part)| part.iter().position(|p| p == n))
            .collect::<Option<Vec<_>>>()?;
        Some(self.join(&sub))
    }

    /// `(a,b,c)` style name of a composite state.
    pub fn state_name(&self, q: StateIndex) -> String {
        let names: Vec<&str> = self.split(q).iter().zip(&self.parts).map(|(&i, p)| p[i].as_str()).collect();
        format!("({})", names.join(","))
    }

    pub fn state_names(&self) -> Vec<String> {
        (0..self.num_states() as StateIndex).map(|q| self.state_name(q)).collect()
    }

    pub fn render(&self, c: &QcaConfig) -> String {
        let cells: Vec<String> = c.cells().iter().map(|(i, &q)| format!("{i}:{}", self.state_name(q))).collect();
        format!("{{{}}}", cells.join(","))
    }

    fn part_of(&self, q: StateIndex, k: usize) -> usize {
        let below: usize = self.parts[k + 1..].iter().map(Vec::len).product();
        (q as usize / below) % self.parts[k].len()
    }

    fn route(&self, c: &QcaConfig, sign: i64) -> QcaConfig {
        let mut cells = std::collections::BTreeMap::<i64, Vec<usize>>::new();
        for (&s, &q) in c.cells() {
            for (k, &n) in self.offsets.iter().enumerate() {
                let sub = self.part_of(q, k);
                if sub != 0 {
                    cells.entry(s - sign * n).or_insert_with(|| vec![0; self.parts.len()])[k] = sub;
                }
            }
        }
        QcaConfig::from_cells(cells.into_iter().map(|(i, sub)| (i, self.join(&sub))))
    }
}

/// The permutation `δ_c` applied to every cell.
pub fn permute_step<R: Real>(c: &QcaConfig, spec: &PqcaSpec<R>) -> QcaConfig {
    spec.route(c, 1)
}

/// Inverse of [`permute_step`].
pub fn unpermute_step<R: Real>(c: &QcaConfig, spec: &PqcaSpec<R>) -> QcaConfig {
    spec.route(c, -1)
}

/// `δ_c` followed by `U` at every cell.
pub fn pqca_step<R: Real>(state: &QcaState<R>, spec: &PqcaSpec<R>, tol: &Tolerance<R>) -> Result<QcaState<R>> {
    state.check_normalized(tol)?;
    let mut acc = Accumulator::new();
    for (c, amp) in state.iter() {
        let routed = permute_step(c, spec);
        let mut count: u128 = 1;
        let mut partial: crate::qca1d::PartialConfigs<R> = vec![(Vec::new(), *amp)];
        for (&i, &q) in routed.cells() {
            let column = &spec.columns[q as usize];
            count = count.saturating_mul(column.len() as u128);
            if count > BRANCH_LIMIT {
                return Err(Error::BranchLimit { count, limit: BRANCH_LIMIT });
            }
            let mut next = Vec::with_capacity(partial.len() * column.len());
            for (cells, a) in &partial {
                for &(target, u) in column {
                    let mut cells = cells.clone();
                    cells.push((i, target));
                    next.push((cells, *a * u));
                }
            }
            partial = next;
        }
        for (cells, a) in partial {
            acc.add(QcaConfig::from_cells(cells), a);
        }
    }
    acc.finish(tol)
}

/// The equivalent 1d-QCA: `δ(q_1, …, q_r, q) = U[q, (part_1(q_1), …, part_r(q_r))]`.
pub fn as_qca<R: Real>(spec: &PqcaSpec<R>) -> Result<QcaSpec<R>> {
    QcaSpec::from_fn(spec.state_names(), spec.offsets.clone(), |tuple, q| {
        let routed: Vec<usize> = tuple.iter().enumerate().map(|(k, &t)| spec.part_of(t, k)).collect();
        spec.u.get(q as usize, spec.join(&routed) as usize)
    })
}

/// A PQCA is unitary iff its per-cell matrix is.
pub fn check_pqca_unitary<R: Real>(spec: &PqcaSpec<R>, tol: &Tolerance<R>) -> bool {
    spec.u.is_unitary(tol.eps_unitary)
}

/// Sub-states of the EPR automaton's left and right parts.
pub const EPR_SIDES: [&str; 3] = ["0", "+", "-"];

/// The three-part EPR automaton: `Q_l = Q_r = {0, +, −}`, `Q_m = {0}`,
/// `λ = (0,0,0)`. The left sub-cell travels left and the right sub-cell right.
/// `U` is the identity except on `S = {(−,0,+), (+,0,−)}`, where it is
/// `1/√2 · [[−1, 1], [1, 1]]` in the order `(−,0,+), (+,0,−)`.
pub fn epr_spec<R: Real>() -> PqcaSpec<R> {
    let side: Vec<String> = EPR_SIDES.iter().map(|s| s.to_string()).collect();
    let parts = vec![side.clone(), vec!["0".to_string()], side];
    let index = |l: usize, r: usize| l * 3 + r;
    let minus_plus = index(2, 1);
    let plus_minus = index(1, 2);
    let h = R::FRAC_1_SQRT_2();
    let u = SquareMatrix::from_fn(9, |row, col| {
        let in_s = |q| q == minus_plus || q == plus_minus;
        let v = if in_s(row) && in_s(col) {
            if row == minus_plus && col == minus_plus {
                -h
            } else {
                h
            }
        } else if row == col {
            R::one()
        } else {
            R::zero()
        };
        Complex::new(v, R::zero())
    });
    PqcaSpec::new(parts, vec![1, 0, -1], u).expect("EPR spec is well formed")
}

/// `(0,0,−)` at cell −1 and `(+,0,0)` at cell 1.
pub fn epr_initial<R: Real>(spec: &PqcaSpec<R>) -> QcaConfig {
    let neg = spec.state(&["0", "0", "-"]).expect("state exists");
    let pos = spec.state(&["+", "0", "0"]).expect("state exists");
    QcaConfig::from_cells([(-1, neg), (1, pos)])
}
