//! One-dimensional quantum cellular automata over finite configurations.
//!
//! State index `0` of every [`QcaSpec`] is the quiescent state `λ`; a
//! [`QcaConfig`] stores only the cells that differ from it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use num_complex::Complex;

use crate::amplitude::{Accumulator, Superposition, Tolerance};
use crate::classical::CaSpec;
use crate::error::{Error, Result};
use crate::matrix::{SparseGram, SquareMatrix};
use crate::scalar::Real;

/// Branch guard for [`successors`].
pub const BRANCH_LIMIT: u128 = 1 << 24;
/// Enumeration guard for the windowed certificates.
pub const WINDOW_LIMIT: u128 = 1 << 22;
/// Guard on `|Q|^r`, the number of neighborhood tuples a spec tabulates.
pub const TABLE_LIMIT: u128 = 1 << 24;

pub type StateIndex = u32;

/// A finite configuration: cell index to non-quiescent state.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QcaConfig {
    cells: BTreeMap<i64, StateIndex>,
}

impl QcaConfig {
    pub fn quiescent() -> Self {
        Self::default()
    }

    /// Cells holding state `0` are dropped.
    pub fn from_cells<I: IntoIterator<Item = (i64, StateIndex)>>(cells: I) -> Self {
        Self { cells: cells.into_iter().filter(|&(_, s)| s != 0).collect() }
    }

    #[inline]
    pub fn get(&self, i: i64) -> StateIndex {
        self.cells.get(&i).copied().unwrap_or(0)
    }

    pub fn cells(&self) -> &BTreeMap<i64, StateIndex> {
        &self.cells
    }

    pub fn is_quiescent(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn shift(&self, by: i64) -> Self {
        Self { cells: self.cells.iter().map(|(&i, &s)| (i + by, s)).collect() }
    }

    /// Inclusive range of the support.
    pub fn span(&self) -> Option<(i64, i64)> {
        Some((*self.cells.keys().next()?, *self.cells.keys().next_back()?))
    }
}

pub type QcaState<R> = Superposition<QcaConfig, R>;

/// Cells assigned so far, with the product of their amplitudes.
pub(crate) type PartialConfigs<R> = Vec<(Vec<(i64, StateIndex)>, Complex<R>)>;

/// `⟨Q, λ, N, δ⟩` with `δ : Q^r × Q → ℂ`.
#[derive(Debug, Clone, PartialEq)]
pub struct QcaSpec<R> {
    states: Vec<String>,
    neighborhood: Vec<i64>,
    /// Nonzero `(target, δ(tuple, target))` per neighborhood tuple, tuples in
    /// mixed radix with the first neighbor most significant.
    rows: Vec<Vec<(StateIndex, Complex<R>)>>,
    checked: bool,
}

impl<R: Real> QcaSpec<R> {
    /// Tabulates `delta(tuple, target)`. `states[0]` is `λ`. Rejects entries of
    /// modulus above 1 and specs that break quiescent stability.
    pub fn from_fn<F>(states: Vec<String>, neighborhood: Vec<i64>, delta: F) -> Result<Self>
    where
        F: FnMut(&[StateIndex], StateIndex) -> Complex<R>,
    {
        let spec = Self::from_fn_unchecked(states, neighborhood, delta)?;
        let tol = Tolerance::<R>::default();
        for row in &spec.rows {
            if let Some((_, a)) = row.iter().find(|(_, a)| a.norm() > R::one() + tol.eps_unitary) {
                return Err(Error::InvalidSpec(format!("|δ| = {} exceeds 1", a.norm())));
            }
        }
        if !check_quiescent_stability(&spec) {
            return Err(Error::InvalidSpec("quiescent state is not stable".into()));
        }
        Ok(Self { checked: true, ..spec })
    }

    /// Like [`QcaSpec::from_fn`] without the validity checks, for feeding the
    /// checkers negative examples.
    pub fn from_fn_unchecked<F>(states: Vec<String>, neighborhood: Vec<i64>, mut delta: F) -> Result<Self>
    where
        F: FnMut(&[StateIndex], StateIndex) -> Complex<R>,
    {
        if states.is_empty() {
            return Err(Error::InvalidSpec("empty state set".into()));
        }
        if neighborhood.is_empty() {
            return Err(Error::InvalidSpec("empty neighborhood".into()));
        }
        if BTreeSet::from_iter(&neighborhood).len() != neighborhood.len() {
            return Err(Error::InvalidSpec("repeated neighborhood offset".into()));
        }
        let q = states.len();
        let count = (q as u128).checked_pow(neighborhood.len() as u32).unwrap_or(u128::MAX);
        if count > TABLE_LIMIT {
            return Err(Error::EnumerationLimit { count, limit: TABLE_LIMIT });
        }
        let mut rows = Vec::with_capacity(count as usize);
        let mut tuple = vec![0 as StateIndex; neighborhood.len()];
        for _ in 0..count {
            let mut row = Vec::new();
            for target in 0..q as StateIndex {
                let a = delta(&tuple, target);
                if !(a.re.is_finite() && a.im.is_finite()) {
                    return Err(Error::NonFinite);
                }
                if a.re != R::zero() || a.im != R::zero() {
                    row.push((target, a));
                }
            }
            rows.push(row);
            increment(&mut tuple, q as StateIndex);
        }
        Ok(Self { states, neighborhood, rows, checked: false })
    }

    /// Trivial QCA (`N = {0}`) acting on `m` states by `matrix`, extended with a
    /// fresh quiescent state `λ` fixed by the evolution. Column `j` of the matrix
    /// is the image of state `j + 1`.
    pub fn trivial_from_unitary(matrix: &SquareMatrix<R>) -> Result<Self> {
        let mut states = vec!["λ".to_string()];
        states.extend((0..matrix.dim()).map(|i| i.to_string()));
        Self::from_fn(states, vec![0], |t, q| match (t[0], q) {
            (0, 0) => Complex::new(R::one(), R::zero()),
            (0, _) | (_, 0) => Complex::default(),
            (from, to) => matrix.get(to as usize - 1, from as usize - 1),
        })
    }

    /// Trivial QCA with `δ(q1, q) = matrix[q][q1]` and state `0` as `λ`; not validated.
    pub fn trivial_unchecked(matrix: &SquareMatrix<R>) -> Result<Self> {
        let states = (0..matrix.dim()).map(|i| i.to_string()).collect();
        Self::from_fn_unchecked(states, vec![0], |t, q| matrix.get(q as usize, t[0] as usize))
    }

    /// A classical 1-D automaton lifted to 0/1 amplitudes. Its quiescent state becomes `λ`.
    pub fn from_classical(ca: &CaSpec) -> Result<Self> {
        if ca.dim() != 1 {
            return Err(Error::Dimension("only 1-D automata lift to a 1d-QCA".into()));
        }
        let q = ca.quiescent().ok_or_else(|| Error::InvalidSpec("classical spec has no quiescent state".into()))?;
        let mut order = vec![q];
        order.extend(ca.states().iter().copied().filter(|&s| s != q));
        let names = order.iter().map(|s| s.to_string()).collect();
        let neighborhood = ca.neighborhood().iter().map(|o| o[0]).collect();
        let mut err = None;
        let spec = Self::from_fn(names, neighborhood, |t, target| {
            let tuple: Vec<u8> = t.iter().map(|&i| order[i as usize]).collect();
            match ca.delta(&tuple) {
                Ok(out) if out == order[target as usize] => Complex::new(R::one(), R::zero()),
                Ok(_) => Complex::default(),
                Err(e) => {
                    err.get_or_insert(e);
                    Complex::default()
                }
            }
        });
        match err {
            Some(e) => Err(e),
            None => spec,
        }
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn neighborhood(&self) -> &[i64] {
        &self.neighborhood
    }

    pub fn radius(&self) -> i64 {
        self.neighborhood.iter().map(|n| n.abs()).max().unwrap_or(0)
    }

    pub fn is_trivial(&self) -> bool {
        self.neighborhood == [0]
    }

    /// Whether construction validated `|δ| ≤ 1` and quiescent stability.
    pub fn is_checked(&self) -> bool {
        self.checked
    }

    pub fn state_index(&self, name: &str) -> Option<StateIndex> {
        self.states.iter().position(|s| s == name).map(|i| i as StateIndex)
    }

    pub fn tuple_index(&self, tuple: &[StateIndex]) -> usize {
        let q = self.states.len();
        tuple.iter().fold(0usize, |acc, &s| acc * q + s as usize)
    }

    /// Nonzero targets of a neighborhood tuple.
    pub fn targets(&self, tuple: &[StateIndex]) -> &[(StateIndex, Complex<R>)] {
        &self.rows[self.tuple_index(tuple)]
    }

    pub fn delta(&self, tuple: &[StateIndex], target: StateIndex) -> Complex<R> {
        self.targets(tuple).iter().find(|(t, _)| *t == target).map(|(_, a)| *a).unwrap_or_default()
    }

    /// Every `(tuple, target, amplitude)` with nonzero amplitude.
    pub fn entries(&self) -> Vec<(Vec<StateIndex>, StateIndex, Complex<R>)> {
        let mut tuple = vec![0 as StateIndex; self.neighborhood.len()];
        let mut out = Vec::new();
        for row in &self.rows {
            out.extend(row.iter().map(|&(t, a)| (tuple.clone(), t, a)));
            increment(&mut tuple, self.states.len() as StateIndex);
        }
        out
    }

    /// `{i:state,…}` with state names; `{}` for the quiescent configuration.
    pub fn render(&self, c: &QcaConfig) -> String {
        let mut s = String::from("{");
        for (n, (i, q)) in c.cells.iter().enumerate() {
            if n > 0 {
                s.push(',');
            }
            let _ = write!(s, "{i}:{}", self.states[*q as usize]);
        }
        s.push('}');
        s
    }

    fn neighborhood_tuple(&self, c: &QcaConfig, i: i64) -> Vec<StateIndex> {
        self.neighborhood.iter().map(|n| c.get(i + n)).collect()
    }

    /// Cells whose neighborhood meets the support of `c`.
    fn active_cells(&self, c: &QcaConfig) -> BTreeSet<i64> {
        c.cells.keys().flat_map(|s| self.neighborhood.iter().map(move |n| s - n)).collect()
    }
}

fn increment(digits: &mut [StateIndex], radix: StateIndex) {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return;
        }
        *d = 0;
    }
}

/// `α(c1, c2) = Π_i δ(c1(i+n_1), …, c1(i+n_r), c2(i))` over the active window;
/// factors outside it equal 1 by quiescent stability.
pub fn transition_amplitude<R: Real>(c1: &QcaConfig, c2: &QcaConfig, spec: &QcaSpec<R>) -> Complex<R> {
    let mut cells = spec.active_cells(c1);
    cells.extend(c2.cells.keys().copied());
    let mut amp = Complex::new(R::one(), R::zero());
    for i in cells {
        amp *= spec.delta(&spec.neighborhood_tuple(c1, i), c2.get(i));
        if amp.re == R::zero() && amp.im == R::zero() {
            break;
        }
    }
    amp
}

/// All `c2` with `α(c1, c2) ≠ 0`, in no particular order.
pub fn successors<R: Real>(c1: &QcaConfig, spec: &QcaSpec<R>) -> Result<Vec<(QcaConfig, Complex<R>)>> {
    let mut options = Vec::new();
    let mut count: u128 = 1;
    for i in spec.active_cells(c1) {
        let row = spec.targets(&spec.neighborhood_tuple(c1, i));
        if row.is_empty() {
            return Ok(Vec::new());
        }
        count = count.saturating_mul(row.len() as u128);
        if count > BRANCH_LIMIT {
            return Err(Error::BranchLimit { count, limit: BRANCH_LIMIT });
        }
        options.push((i, row));
    }
    let mut partial: PartialConfigs<R> = vec![(Vec::with_capacity(options.len()), Complex::new(R::one(), R::zero()))];
    for (i, row) in options {
        let mut next = Vec::with_capacity(partial.len() * row.len());
        for (cells, amp) in &partial {
            for &(target, a) in row {
                let mut cells = cells.clone();
                cells.push((i, target));
                next.push((cells, *amp * a));
            }
        }
        partial = next;
    }
    Ok(partial.into_iter().map(|(cells, amp)| (QcaConfig::from_cells(cells), amp)).collect())
}

/// One step of the evolution operator `E`: `β_c = Σ_{c'} α_{c'} α(c', c)`.
pub fn evolve<R: Real>(state: &QcaState<R>, spec: &QcaSpec<R>, tol: &Tolerance<R>) -> Result<QcaState<R>> {
    state.check_normalized(tol)?;
    let mut acc = Accumulator::new();
    for (c, amp) in state.iter() {
        for (target, a) in successors(c, spec)? {
            acc.add(target, *amp * a);
        }
    }
    acc.finish(tol)
}

/// Worst neighborhood tuple for the local probability condition.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalProbabilityReport<R> {
    pub holds: bool,
    pub worst_tuple: Vec<StateIndex>,
    /// `|Σ_q |δ(tuple, q)|² − 1|` at `worst_tuple`.
    pub worst_deviation: R,
}

pub fn check_local_probability<R: Real>(spec: &QcaSpec<R>, tol: &Tolerance<R>) -> LocalProbabilityReport<R> {
    let mut tuple = vec![0 as StateIndex; spec.neighborhood.len()];
    let mut worst = (R::zero(), tuple.clone());
    for row in &spec.rows {
        let mass = row.iter().fold(R::zero(), |acc, (_, a)| acc + a.norm_sqr());
        let dev = (mass - R::one()).abs();
        if dev > worst.0 {
            worst = (dev, tuple.clone());
        }
        increment(&mut tuple, spec.states.len() as StateIndex);
    }
    LocalProbabilityReport { holds: worst.0 <= tol.eps_unitary, worst_tuple: worst.1, worst_deviation: worst.0 }
}

/// `δ(λ, …, λ, q) = [q = λ]`, compared exactly.
pub fn check_quiescent_stability<R: Real>(spec: &QcaSpec<R>) -> bool {
    matches!(spec.rows[0].as_slice(), [(0, a)] if a.re == R::one() && a.im == R::zero())
}

/// Where a windowed certificate failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// Two source configurations whose columns are not orthonormal (equal for a norm defect).
    Columns(QcaConfig, QcaConfig),
    /// Two target configurations whose rows are not orthonormal (equal for a norm defect).
    Rows(QcaConfig, QcaConfig),
}

/// Bounded-support certificate. `holds` speaks only for the window it was computed on.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowReport<R> {
    pub window: usize,
    pub holds: bool,
    pub column_deviation: R,
    /// Only computed by the unitarity certificate.
    pub row_deviation: Option<R>,
    pub witness: Option<Witness>,
}

/// All configurations supported in `[lo, lo + len)`.
pub fn window_configs(lo: i64, len: usize, num_states: usize) -> Result<Vec<QcaConfig>> {
    let count = (num_states as u128).checked_pow(len as u32).unwrap_or(u128::MAX);
    if count > WINDOW_LIMIT {
        return Err(Error::EnumerationLimit { count, limit: WINDOW_LIMIT });
    }
    let mut digits = vec![0 as StateIndex; len];
    let mut out = Vec::with_capacity(count as usize);
    for _ in 0..count {
        out.push(QcaConfig::from_cells(digits.iter().enumerate().map(|(k, &s)| (lo + k as i64, s))));
        increment(&mut digits, num_states as StateIndex);
    }
    Ok(out)
}

struct WindowMatrix<R> {
    sources: Vec<QcaConfig>,
    /// Column per source: `(target id, amplitude)`.
    columns: Vec<Vec<(usize, Complex<R>)>>,
    targets: Vec<QcaConfig>,
}

fn window_matrix<R: Real>(spec: &QcaSpec<R>, window_n: usize) -> Result<WindowMatrix<R>> {
    let sources = window_configs(0, window_n, spec.num_states())?;
    let mut target_ids: HashMap<QcaConfig, usize> = HashMap::new();
    let mut targets = Vec::new();
    let mut columns = Vec::with_capacity(sources.len());
    for s in &sources {
        let mut col = Vec::new();
        for (t, a) in successors(s, spec)? {
            let id = *target_ids.entry(t.clone()).or_insert_with(|| {
                targets.push(t);
                targets.len() - 1
            });
            col.push((id, a));
        }
        columns.push(col);
    }
    Ok(WindowMatrix { sources, columns, targets })
}

fn column_check<R: Real>(m: &WindowMatrix<R>) -> (R, Option<Witness>) {
    let mut by_target: Vec<Vec<(usize, Complex<R>)>> = vec![Vec::new(); m.targets.len()];
    for (s, col) in m.columns.iter().enumerate() {
        for &(t, a) in col {
            by_target[t].push((s, a));
        }
    }
    let mut gram = SparseGram::new();
    for row in &by_target {
        gram.add_vector(row);
    }
    let (dev, (a, b)) = gram.worst(m.sources.len());
    (dev, Some(Witness::Columns(m.sources[a].clone(), m.sources[b].clone())))
}

/// Column orthonormality of `α(c1, c2)` for sources supported in
/// `[0, window_n)`. Necessary for well-formedness; not a decision procedure.
pub fn check_well_formed_window<R: Real>(
    spec: &QcaSpec<R>,
    window_n: usize,
    tol: &Tolerance<R>,
) -> Result<WindowReport<R>> {
    let m = window_matrix(spec, window_n)?;
    let (dev, witness) = column_check(&m);
    let holds = dev <= tol.eps_unitary;
    Ok(WindowReport {
        window: window_n,
        holds,
        column_deviation: dev,
        row_deviation: None,
        witness: if holds { None } else { witness },
    })
}

/// Columns and rows of the windowed matrix. Rows range over every
/// configuration supported in the radius-expanded target window, so a map
/// that pushes mass across the window boundary fails here even if it is
/// unitary on the full line.
pub fn check_unitary_window<R: Real>(
    spec: &QcaSpec<R>,
    window_n: usize,
    tol: &Tolerance<R>,
) -> Result<WindowReport<R>> {
    let m = window_matrix(spec, window_n)?;
    let (col_dev, col_witness) = column_check(&m);

    let lo = -spec.neighborhood.iter().copied().max().unwrap_or(0);
    let hi = window_n as i64 - 1 - spec.neighborhood.iter().copied().min().unwrap_or(0);
    let target_len = (hi - lo + 1).max(0) as usize;
    let domain = window_configs(lo, target_len, spec.num_states())?;
    let index: HashMap<&QcaConfig, usize> = domain.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut gram = SparseGram::new();
    for col in &m.columns {
        let v: Vec<(usize, Complex<R>)> = col.iter().map(|&(t, a)| (index[&m.targets[t]], a)).collect();
        gram.add_vector(&v);
    }
    let (row_dev, (a, b)) = gram.worst(domain.len());
    let row_witness = Witness::Rows(domain[a].clone(), domain[b].clone());

    let holds = col_dev <= tol.eps_unitary && row_dev <= tol.eps_unitary;
    let witness = if holds {
        None
    } else if col_dev > tol.eps_unitary {
        col_witness
    } else {
        Some(row_witness)
    };
    Ok(WindowReport { window: window_n, holds, column_deviation: col_dev, row_deviation: Some(row_dev), witness })
}

/// Unitarity of a trivial QCA: `Σ_q δ(q1, q)·conj(δ(q2, q)) = [q1 = q2]`.
pub fn check_trivial_unitary<R: Real>(spec: &QcaSpec<R>, tol: &Tolerance<R>) -> Result<bool> {
    if !spec.is_trivial() {
        return Err(Error::NotTrivial);
    }
    let q = spec.num_states();
    for q1 in 0..q {
        for q2 in q1..q {
            let dot = spec.rows[q1].iter().fold(Complex::<R>::default(), |acc, &(t, a)| {
                acc + a * spec.rows[q2].iter().find(|(u, _)| *u == t).map(|(_, b)| b.conj()).unwrap_or_default()
            });
            let target = if q1 == q2 { R::one() } else { R::zero() };
            if (dot - Complex::new(target, R::zero())).norm() > tol.eps_unitary {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `δ(q1, q)` of a trivial spec arranged as the matrix `[q][q1]`.
pub fn trivial_matrix<R: Real>(spec: &QcaSpec<R>) -> Result<SquareMatrix<R>> {
    if !spec.is_trivial() {
        return Err(Error::NotTrivial);
    }
    Ok(SquareMatrix::from_fn(spec.num_states(), |q, q1| spec.delta(&[q1 as StateIndex], q as StateIndex)))
}
