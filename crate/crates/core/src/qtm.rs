//! Single-tape quantum Turing machines.
//!
//! Symbol `0` is the blank and a [`QtmConfig`] stores only non-blank cells.
//! Configurations in the final state are fixed points of [`qtm_step`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_complex::Complex;

use crate::amplitude::{Accumulator, Superposition, Tolerance};
use crate::error::{Error, Result};
use crate::matrix::SparseGram;
use crate::scalar::Real;

pub type Symbol = u32;
pub type QState = u32;

/// Enumeration guard for [`check_well_formed_window`].
pub const WINDOW_LIMIT: u128 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    Left,
    Stay,
    Right,
}

impl Move {
    pub fn offset(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Stay => 0,
            Move::Right => 1,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "L" | "<" | "←" => Ok(Move::Left),
            "S" | "N" | "↓" => Ok(Move::Stay),
            "R" | ">" | "→" => Ok(Move::Right),
            _ => Err(Error::Format(format!("unknown move `{s}`"))),
        }
    }

    pub fn code(self) -> &'static str {
        match self {
            Move::Left => "L",
            Move::Stay => "S",
            Move::Right => "R",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition<R> {
    pub write: Symbol,
    pub next: QState,
    pub dir: Move,
    pub amp: Complex<R>,
}

/// `⟨Σ, Q, q0, qf, δ⟩` with a sparse `δ`; absent entries are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct QtmSpec<R> {
    alphabet: Vec<String>,
    states: Vec<String>,
    q0: QState,
    qf: QState,
    delta: BTreeMap<(QState, Symbol), Vec<Transition<R>>>,
}

impl<R: Real> QtmSpec<R> {
    /// `blank` becomes symbol `0`; the other symbols keep their relative order.
    pub fn new(alphabet: &[&str], blank: &str, states: &[&str], q0: &str, qf: &str) -> Result<Self> {
        let unique = |v: &[&str]| BTreeSet::from_iter(v).len() == v.len();
        if !unique(alphabet) || !unique(states) {
            return Err(Error::InvalidSpec("duplicate symbol or state".into()));
        }
        if !alphabet.contains(&blank) {
            return Err(Error::InvalidSpec(format!("blank `{blank}` not in the alphabet")));
        }
        let mut symbols = vec![blank.to_string()];
        symbols.extend(alphabet.iter().filter(|&&s| s != blank).map(|s| s.to_string()));
        let states: Vec<String> = states.iter().map(|s| s.to_string()).collect();
        let find = |name: &str| {
            states
                .iter()
                .position(|s| s == name)
                .map(|i| i as QState)
                .ok_or_else(|| Error::InvalidSpec(format!("state `{name}` not in Q")))
        };
        let (q0, qf) = (find(q0)?, find(qf)?);
        Ok(Self { alphabet: symbols, states, q0, qf, delta: BTreeMap::new() })
    }

    /// Adds `δ(q, read, write, next, dir) = amp`, by name.
    pub fn with_rule(
        mut self,
        q: &str,
        read: &str,
        write: &str,
        next: &str,
        dir: Move,
        amp: Complex<R>,
    ) -> Result<Self> {
        let (q, next) = (self.state_id(q)?, self.state_id(next)?);
        let (read, write) = (self.symbol_id(read)?, self.symbol_id(write)?);
        self.add_rule(q, read, Transition { write, next, dir, amp })?;
        Ok(self)
    }

    pub fn add_rule(&mut self, q: QState, read: Symbol, t: Transition<R>) -> Result<()> {
        if !(t.amp.re.is_finite() && t.amp.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        if t.amp.norm() > R::one() + R::of(R::EPS_UNITARY) {
            return Err(Error::InvalidSpec(format!("|δ| = {} exceeds 1", t.amp.norm())));
        }
        let branches = self.delta.entry((q, read)).or_default();
        if branches.iter().any(|b| b.write == t.write && b.next == t.next && b.dir == t.dir) {
            return Err(Error::InvalidSpec("duplicate transition".into()));
        }
        if t.amp.re != R::zero() || t.amp.im != R::zero() {
            branches.push(t);
        }
        Ok(())
    }

    pub fn state_id(&self, name: &str) -> Result<QState> {
        self.states
            .iter()
            .position(|s| s == name)
            .map(|i| i as QState)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown state `{name}`")))
    }

    pub fn symbol_id(&self, name: &str) -> Result<Symbol> {
        self.alphabet
            .iter()
            .position(|s| s == name)
            .map(|i| i as Symbol)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown symbol `{name}`")))
    }

    /// Symbols, blank first.
    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn q0(&self) -> QState {
        self.q0
    }

    pub fn qf(&self) -> QState {
        self.qf
    }

    pub fn transitions(&self, q: QState, read: Symbol) -> &[Transition<R>] {
        self.delta.get(&(q, read)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All nonzero entries as `((q, read), transition)`.
    pub fn rules(&self) -> impl Iterator<Item = (QState, Symbol, &Transition<R>)> {
        self.delta.iter().flat_map(|(&(q, r), ts)| ts.iter().map(move |t| (q, r, t)))
    }

    /// Parses an input word: comma-separated symbol names, or one character
    /// per symbol when there is no comma.
    pub fn parse_word(&self, word: &str) -> Result<Vec<Symbol>> {
        if word.is_empty() {
            return Ok(Vec::new());
        }
        if word.contains(',') {
            word.split(',').map(|s| self.symbol_id(s.trim())).collect()
        } else {
            word.chars().map(|c| self.symbol_id(&c.to_string())).collect()
        }
    }

    /// Input on cells `0..`, head on cell 0, state `q0`.
    pub fn initial_config(&self, input: &[Symbol]) -> QtmConfig {
        QtmConfig::new(self.q0, 0, input.iter().enumerate().map(|(i, &s)| (i as i64, s)))
    }

    /// `q@head[i:sym,…]` with names.
    pub fn render(&self, c: &QtmConfig) -> String {
        let tape: Vec<String> = c.tape.iter().map(|(i, &s)| format!("{i}:{}", self.alphabet[s as usize])).collect();
        format!("{}@{}[{}]", self.states[c.state as usize], c.head, tape.join(","))
    }
}

/// `⟨τ, i, q⟩`: tape contents, head position, state.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QtmConfig {
    pub state: QState,
    pub head: i64,
    tape: BTreeMap<i64, Symbol>,
}

impl QtmConfig {
    /// Blank (`0`) cells are dropped.
    pub fn new<I: IntoIterator<Item = (i64, Symbol)>>(state: QState, head: i64, tape: I) -> Self {
        Self { state, head, tape: tape.into_iter().filter(|&(_, s)| s != 0).collect() }
    }

    pub fn read(&self, i: i64) -> Symbol {
        self.tape.get(&i).copied().unwrap_or(0)
    }

    pub fn tape(&self) -> &BTreeMap<i64, Symbol> {
        &self.tape
    }

    fn written(&self, write: Symbol, next: QState, dir: Move) -> Self {
        let mut tape = self.tape.clone();
        if write == 0 {
            tape.remove(&self.head);
        } else {
            tape.insert(self.head, write);
        }
        Self { state: next, head: self.head + dir.offset(), tape }
    }
}

impl fmt::Display for QtmConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}@{}{:?}", self.state, self.head, self.tape)
    }
}

pub type QtmState<R> = Superposition<QtmConfig, R>;

/// Branches of one basis configuration.
pub fn config_successors<R: Real>(c: &QtmConfig, spec: &QtmSpec<R>) -> Vec<(QtmConfig, Complex<R>)> {
    if c.state == spec.qf {
        return vec![(c.clone(), Complex::new(R::one(), R::zero()))];
    }
    spec.transitions(c.state, c.read(c.head)).iter().map(|t| (c.written(t.write, t.next, t.dir), t.amp)).collect()
}

fn step_raw<R: Real>(state: &QtmState<R>, spec: &QtmSpec<R>, tol: &Tolerance<R>) -> Result<QtmState<R>> {
    let mut acc = Accumulator::new();
    for (c, amp) in state.iter() {
        for (next, a) in config_successors(c, spec) {
            acc.add(next, *amp * a);
        }
    }
    acc.finish(tol)
}

/// One step of the machine on a normalized superposition.
pub fn qtm_step<R: Real>(state: &QtmState<R>, spec: &QtmSpec<R>, tol: &Tolerance<R>) -> Result<QtmState<R>> {
    state.check_normalized(tol)?;
    step_raw(state, spec, tol)
}

/// `[start, step(start), …]`, `steps + 1` states.
pub fn run<R: Real>(
    spec: &QtmSpec<R>,
    start: &QtmState<R>,
    steps: usize,
    tol: &Tolerance<R>,
) -> Result<Vec<QtmState<R>>> {
    let mut trace = vec![start.clone()];
    for _ in 0..steps {
        let next = qtm_step(trace.last().expect("non-empty"), spec, tol)?;
        trace.push(next);
    }
    Ok(trace)
}

/// Mass on configurations whose cell `k` holds a symbol in `accept`.
pub fn tape_acceptance<R: Real>(state: &QtmState<R>, k: i64, accept: &BTreeSet<Symbol>) -> R {
    state.probability_where(|c| accept.contains(&c.read(k)))
}

/// Runs `steps` steps from `q0` on `input` and measures cell `k` against `accept`.
pub fn acceptance_probability<R: Real>(
    spec: &QtmSpec<R>,
    input: &[Symbol],
    steps: usize,
    k: i64,
    accept: &BTreeSet<Symbol>,
    tol: &Tolerance<R>,
) -> Result<R> {
    let mut state = QtmState::basis(spec.initial_config(input));
    for _ in 0..steps {
        state = qtm_step(&state, spec, tol)?;
    }
    Ok(tape_acceptance(&state, k, accept))
}

/// Head-move directions by which each state is entered.
pub fn entry_directions<R: Real>(spec: &QtmSpec<R>) -> BTreeMap<QState, BTreeSet<Move>> {
    let mut dirs: BTreeMap<QState, BTreeSet<Move>> = BTreeMap::new();
    for (_, _, t) in spec.rules() {
        dirs.entry(t.next).or_default().insert(t.dir);
    }
    dirs
}

/// Every state is entered from a single head-move direction.
pub fn is_unidirectional<R: Real>(spec: &QtmSpec<R>) -> bool {
    entry_directions(spec).values().all(|d| d.len() <= 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QtmWindowReport<R> {
    pub holds: bool,
    /// Worst deviation of the windowed step matrix from column orthonormality.
    pub column_deviation: R,
    /// Worst `|‖ψ_t‖² − 1|` over basis starts in the domain and `t ≤ steps`.
    pub norm_drift: R,
    pub domain_size: usize,
    /// Configurations left out because a branch would move the head off the window.
    pub excluded: usize,
    pub witness: Option<(QtmConfig, QtmConfig)>,
}

/// Bounded certificate over configurations with head and tape inside
/// `[0, window)`. Configurations whose head could leave the window in one step
/// are excluded from the domain.
pub fn check_well_formed_window<R: Real>(
    spec: &QtmSpec<R>,
    window: usize,
    steps: usize,
    tol: &Tolerance<R>,
) -> Result<QtmWindowReport<R>> {
    let sigma = spec.alphabet.len() as u128;
    let count = sigma
        .checked_pow(window as u32)
        .and_then(|t| t.checked_mul(window as u128 * spec.states.len() as u128))
        .unwrap_or(u128::MAX);
    if count > WINDOW_LIMIT {
        return Err(Error::EnumerationLimit { count, limit: WINDOW_LIMIT });
    }
    let mut domain = Vec::new();
    let mut excluded = 0;
    let mut digits = vec![0 as Symbol; window];
    for _ in 0..sigma.pow(window as u32) {
        for head in 0..window as i64 {
            for state in 0..spec.states.len() as QState {
                let c = QtmConfig::new(state, head, digits.iter().enumerate().map(|(i, &s)| (i as i64, s)));
                let leaves = config_successors(&c, spec).iter().any(|(n, _)| n.head < 0 || n.head >= window as i64);
                if leaves {
                    excluded += 1;
                } else {
                    domain.push(c);
                }
            }
        }
        for d in digits.iter_mut().rev() {
            *d += 1;
            if (*d as u128) < sigma {
                break;
            }
            *d = 0;
        }
    }

    let mut by_target: HashMap<QtmConfig, Vec<(usize, Complex<R>)>> = HashMap::new();
    for (i, c) in domain.iter().enumerate() {
        for (t, a) in config_successors(c, spec) {
            by_target.entry(t).or_default().push((i, a));
        }
    }
    let mut gram = SparseGram::new();
    let mut targets: Vec<_> = by_target.into_iter().collect();
    targets.sort_by(|a, b| a.0.cmp(&b.0));
    for (_, v) in &targets {
        gram.add_vector(v);
    }
    let (column_deviation, (a, b)) = gram.worst(domain.len());

    let mut norm_drift = R::zero();
    for c in &domain {
        let mut state = QtmState::basis(c.clone());
        for _ in 0..steps {
            state = step_raw(&state, spec, tol)?;
            norm_drift = norm_drift.max((state.norm_sq() - R::one()).abs());
        }
    }

    let holds = column_deviation <= tol.eps_unitary && norm_drift <= tol.eps_norm;
    let witness = (!holds && !domain.is_empty()).then(|| (domain[a].clone(), domain[b].clone()));
    Ok(QtmWindowReport { holds, column_deviation, norm_drift, domain_size: domain.len(), excluded, witness })
}
