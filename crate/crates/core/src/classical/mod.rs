//! Classical cellular automata in one and two dimensions.
//!
//! Coordinates are `[i64; 2]`. One-dimensional automata use `[i, 0]`; in two
//! dimensions `[row, col]`. Neighborhood tuples are passed to the local rule in
//! the order the offsets appear in the `CaSpec` neighborhood.

mod render;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

pub use render::{diagram_rows, pbm, snapshot_rows, text};

pub type State = u8;
pub type Coord = [i64; 2];

/// Upper bound on the number of ring configurations enumerated by
/// [`is_reversible_on_ring`].
pub const RING_ENUMERATION_LIMIT: u128 = 1 << 24;

/// Elementary (radius 1, binary) rule in Wolfram numbering: bit `4l + 2c + r`
/// of the number is the next state of a cell whose neighborhood reads `l c r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EcaRule(u8);

impl EcaRule {
    pub fn new(number: u32) -> Result<Self> {
        u8::try_from(number).map(EcaRule).map_err(|_| Error::RuleOutOfRange(number))
    }

    pub fn number(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn output(self, left: State, center: State, right: State) -> State {
        (self.0 >> ((left << 2) | (center << 1) | right)) & 1
    }

    /// Outputs indexed by pattern value `000..111`.
    pub fn table(self) -> [State; 8] {
        std::array::from_fn(|p| (self.0 >> p) & 1)
    }

    pub fn from_table(table: &[State; 8]) -> Result<Self> {
        let mut n = 0u8;
        for (p, &out) in table.iter().enumerate() {
            if out > 1 {
                return Err(Error::NonBinaryState(out));
            }
            n |= out << p;
        }
        Ok(EcaRule(n))
    }

    /// The same rule as a general spec over `N = (-1, 0, 1)`.
    pub fn to_spec(self) -> CaSpec {
        let quiescent = (self.output(0, 0, 0) == 0).then_some(0);
        CaSpec::from_fn(1, vec![0, 1], vec![[-1, 0], [0, 0], [1, 0]], quiescent, |t| self.output(t[0], t[1], t[2]))
            .expect("elementary spec is well formed")
    }
}

impl fmt::Display for EcaRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule {}", self.0)
    }
}

/// `⟨d, Q, N, δ⟩` with an optional quiescent state.
#[derive(Debug, Clone, PartialEq)]
pub struct CaSpec {
    dim: usize,
    states: Vec<State>,
    neighborhood: Vec<Coord>,
    table: BTreeMap<Vec<State>, State>,
    quiescent: Option<State>,
}

impl CaSpec {
    /// The table need not be total; a missing entry surfaces as
    /// [`Error::MissingTransition`] when it is reached.
    pub fn new(
        dim: usize,
        states: Vec<State>,
        neighborhood: Vec<Coord>,
        table: BTreeMap<Vec<State>, State>,
        quiescent: Option<State>,
    ) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::Dimension(format!("unsupported dimension {dim}")));
        }
        if neighborhood.is_empty() {
            return Err(Error::InvalidSpec("empty neighborhood".into()));
        }
        if dim == 1 && neighborhood.iter().any(|n| n[1] != 0) {
            return Err(Error::Dimension("1-D offsets must have a zero second coordinate".into()));
        }
        let mut sorted = states.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != states.len() || states.is_empty() {
            return Err(Error::InvalidSpec("state set must be non-empty and distinct".into()));
        }
        let known: BTreeSet<State> = states.iter().copied().collect();
        for (key, out) in &table {
            if key.len() != neighborhood.len() {
                return Err(Error::InvalidSpec(format!("tuple {key:?} has the wrong length")));
            }
            if let Some(bad) = key.iter().chain(std::iter::once(out)).find(|s| !known.contains(s)) {
                return Err(Error::InvalidSpec(format!("state {bad} not in Q")));
            }
        }
        if let Some(q) = quiescent {
            if !known.contains(&q) {
                return Err(Error::InvalidSpec(format!("quiescent state {q} not in Q")));
            }
            if let Some(&out) = table.get(&vec![q; neighborhood.len()]) {
                if out != q {
                    return Err(Error::QuiescentNotFixed);
                }
            }
        }
        Ok(Self { dim, states, neighborhood, table, quiescent })
    }

    /// Tabulates `rule` over every tuple in `Q^|N|`.
    pub fn from_fn<F>(
        dim: usize,
        states: Vec<State>,
        neighborhood: Vec<Coord>,
        quiescent: Option<State>,
        rule: F,
    ) -> Result<Self>
    where
        F: Fn(&[State]) -> State,
    {
        let mut table = BTreeMap::new();
        let r = neighborhood.len();
        let total = (states.len() as u128).checked_pow(r as u32).unwrap_or(u128::MAX);
        if total > RING_ENUMERATION_LIMIT {
            return Err(Error::EnumerationLimit { count: total, limit: RING_ENUMERATION_LIMIT });
        }
        let mut tuple = vec![0usize; r];
        loop {
            let key: Vec<State> = tuple.iter().map(|&i| states[i]).collect();
            let out = rule(&key);
            table.insert(key, out);
            if !advance(&mut tuple, states.len()) {
                break;
            }
        }
        Self::new(dim, states, neighborhood, table, quiescent)
    }

    /// Conway's Game of Life on the Moore neighborhood, offsets in row-major order.
    pub fn game_of_life() -> Self {
        let mut offsets = Vec::new();
        for dr in -1..=1 {
            for dc in -1..=1 {
                offsets.push([dr, dc]);
            }
        }
        Self::from_fn(2, vec![0, 1], offsets, Some(0), |t| {
            let alive = t[4] == 1;
            let neighbors = t.iter().enumerate().filter(|&(i, &s)| i != 4 && s == 1).count();
            match (alive, neighbors) {
                (true, 2) | (true, 3) | (false, 3) => 1,
                _ => 0,
            }
        })
        .expect("life spec is well formed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn neighborhood(&self) -> &[Coord] {
        &self.neighborhood
    }

    pub fn quiescent(&self) -> Option<State> {
        self.quiescent
    }

    pub fn table(&self) -> &BTreeMap<Vec<State>, State> {
        &self.table
    }

    /// Largest offset magnitude along any axis.
    pub fn radius(&self) -> i64 {
        self.neighborhood.iter().flat_map(|o| o.iter().map(|x| x.abs())).max().unwrap_or(0)
    }

    pub fn delta(&self, tuple: &[State]) -> Result<State> {
        self.table.get(tuple).copied().ok_or_else(|| Error::MissingTransition(tuple.to_vec()))
    }

    /// True iff `δ` is defined on all of `Q^|N|`.
    pub fn is_total(&self) -> bool {
        (self.states.len() as u128).checked_pow(self.neighborhood.len() as u32) == Some(self.table.len() as u128)
    }
}

/// von Neumann offsets in the canonical order `(-1,0), (0,-1), (0,0), (0,1), (1,0)`.
pub const VON_NEUMANN: [Coord; 5] = [[-1, 0], [0, -1], [0, 0], [0, 1], [1, 0]];

fn advance(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// A configuration that equals the quiescent state outside a finite support.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteConfig {
    dim: usize,
    quiescent: State,
    support: BTreeMap<Coord, State>,
}

impl FiniteConfig {
    pub fn new(dim: usize, quiescent: State) -> Self {
        Self { dim, quiescent, support: BTreeMap::new() }
    }

    pub fn from_cells<I: IntoIterator<Item = (Coord, State)>>(dim: usize, quiescent: State, cells: I) -> Self {
        let mut c = Self::new(dim, quiescent);
        for (z, s) in cells {
            c.set(z, s);
        }
        c
    }

    /// A 1-D binary row: `'#'` or `'1'` is state 1, anything else 0; the first
    /// character sits at cell `origin`.
    pub fn from_row(row: &str, origin: i64) -> Self {
        Self::from_cells(
            1,
            0,
            row.chars()
                .enumerate()
                .filter(|(_, ch)| *ch == '#' || *ch == '1')
                .map(|(i, _)| ([origin + i as i64, 0], 1)),
        )
    }

    /// A 2-D binary grid, one text line per row, top-left cell at `[0, 0]`.
    pub fn from_grid(grid: &str) -> Self {
        let mut cells = Vec::new();
        for (r, line) in grid.lines().enumerate() {
            for (col, ch) in line.chars().enumerate() {
                if ch == '#' || ch == '1' || ch == 'O' {
                    cells.push(([r as i64, col as i64], 1));
                }
            }
        }
        Self::from_cells(2, 0, cells)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn quiescent(&self) -> State {
        self.quiescent
    }

    pub fn support(&self) -> &BTreeMap<Coord, State> {
        &self.support
    }

    pub fn get(&self, z: Coord) -> State {
        self.support.get(&z).copied().unwrap_or(self.quiescent)
    }

    pub fn set(&mut self, z: Coord, s: State) {
        if s == self.quiescent {
            self.support.remove(&z);
        } else {
            self.support.insert(z, s);
        }
    }

    pub fn translate(&self, by: Coord) -> Self {
        Self {
            dim: self.dim,
            quiescent: self.quiescent,
            support: self.support.iter().map(|(z, &s)| ([z[0] + by[0], z[1] + by[1]], s)).collect(),
        }
    }

    /// Componentwise bounding box of the support, inclusive.
    pub fn hull(&self) -> Option<(Coord, Coord)> {
        let mut it = self.support.keys();
        let first = *it.next()?;
        Some(it.fold((first, first), |(lo, hi), z| {
            ([lo[0].min(z[0]), lo[1].min(z[1])], [hi[0].max(z[0]), hi[1].max(z[1])])
        }))
    }
}

/// A configuration with `c(z + p) = c(z)`, stored densely over one period.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PeriodicConfig {
    shape: Vec<usize>,
    cells: Vec<State>,
}

impl PeriodicConfig {
    pub fn new(shape: Vec<usize>, cells: Vec<State>) -> Result<Self> {
        if shape.is_empty() || shape.len() > 2 || shape.contains(&0) {
            return Err(Error::Dimension(format!("bad period {shape:?}")));
        }
        if shape.iter().product::<usize>() != cells.len() {
            return Err(Error::Dimension("cell count does not match the period".into()));
        }
        Ok(Self { shape, cells })
    }

    pub fn ring(cells: Vec<State>) -> Result<Self> {
        Self::new(vec![cells.len()], cells)
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn cells(&self) -> &[State] {
        &self.cells
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    fn index(&self, z: Coord) -> usize {
        let wrap = |x: i64, n: usize| x.rem_euclid(n as i64) as usize;
        match self.shape.as_slice() {
            [n] => wrap(z[0], *n),
            [rows, cols] => wrap(z[0], *rows) * cols + wrap(z[1], *cols),
            _ => unreachable!("validated at construction"),
        }
    }

    pub fn get(&self, z: Coord) -> State {
        self.cells[self.index(z)]
    }

    fn coords(&self) -> impl Iterator<Item = Coord> + '_ {
        (0..self.cells.len()).map(move |i| match self.shape.as_slice() {
            [_] => [i as i64, 0],
            [_, cols] => [(i / cols) as i64, (i % cols) as i64],
            _ => unreachable!(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Config {
    Finite(FiniteConfig),
    Periodic(PeriodicConfig),
}

impl From<FiniteConfig> for Config {
    fn from(c: FiniteConfig) -> Self {
        Config::Finite(c)
    }
}

impl From<PeriodicConfig> for Config {
    fn from(c: PeriodicConfig) -> Self {
        Config::Periodic(c)
    }
}

impl Config {
    pub fn dim(&self) -> usize {
        match self {
            Config::Finite(c) => c.dim,
            Config::Periodic(c) => c.dim(),
        }
    }

    pub fn get(&self, z: Coord) -> State {
        match self {
            Config::Finite(c) => c.get(z),
            Config::Periodic(c) => c.get(z),
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteConfig> {
        match self {
            Config::Finite(c) => Some(c),
            Config::Periodic(_) => None,
        }
    }

    pub fn as_periodic(&self) -> Option<&PeriodicConfig> {
        match self {
            Config::Periodic(c) => Some(c),
            Config::Finite(_) => None,
        }
    }
}

/// A synchronous local rule over a list of neighborhood offsets.
pub trait LocalRule {
    fn dim(&self) -> usize;
    fn offsets(&self) -> Vec<Coord>;
    fn states(&self) -> Vec<State>;
    fn next(&self, tuple: &[State]) -> Result<State>;
}

impl LocalRule for CaSpec {
    fn dim(&self) -> usize {
        self.dim
    }

    fn offsets(&self) -> Vec<Coord> {
        self.neighborhood.clone()
    }

    fn states(&self) -> Vec<State> {
        self.states.clone()
    }

    fn next(&self, tuple: &[State]) -> Result<State> {
        self.delta(tuple)
    }
}

impl LocalRule for EcaRule {
    fn dim(&self) -> usize {
        1
    }

    fn offsets(&self) -> Vec<Coord> {
        vec![[-1, 0], [0, 0], [1, 0]]
    }

    fn states(&self) -> Vec<State> {
        vec![0, 1]
    }

    fn next(&self, t: &[State]) -> Result<State> {
        if let Some(&bad) = t.iter().find(|&&s| s > 1) {
            return Err(Error::NonBinaryState(bad));
        }
        Ok(self.output(t[0], t[1], t[2]))
    }
}

/// One application of the global transition function `G_δ`.
pub fn step<L: LocalRule + ?Sized>(c: &Config, rule: &L) -> Result<Config> {
    if c.dim() != rule.dim() {
        return Err(Error::Dimension(format!("config is {}-D, rule is {}-D", c.dim(), rule.dim())));
    }
    let offsets = rule.offsets();
    let mut tuple = vec![0; offsets.len()];
    let mut fill = |z: Coord, c: &Config| -> Result<State> {
        for (slot, n) in tuple.iter_mut().zip(&offsets) {
            *slot = c.get([z[0] + n[0], z[1] + n[1]]);
        }
        rule.next(&tuple)
    };
    match c {
        Config::Finite(f) => {
            let q = f.quiescent;
            if rule.next(&vec![q; offsets.len()])? != q {
                return Err(Error::QuiescentNotFixed);
            }
            let candidates: BTreeSet<Coord> =
                f.support.keys().flat_map(|s| offsets.iter().map(move |n| [s[0] - n[0], s[1] - n[1]])).collect();
            let mut next = FiniteConfig::new(f.dim, q);
            for z in candidates {
                let s = fill(z, c)?;
                next.set(z, s);
            }
            Ok(Config::Finite(next))
        }
        Config::Periodic(p) => {
            let cells = p.coords().map(|z| fill(z, c)).collect::<Result<Vec<_>>>()?;
            Ok(Config::Periodic(PeriodicConfig { shape: p.shape.clone(), cells }))
        }
    }
}

pub fn ca_step(c: &Config, spec: &CaSpec) -> Result<Config> {
    step(c, spec)
}

pub fn eca_step(c: &Config, rule: EcaRule) -> Result<Config> {
    step(c, &rule)
}

/// `[c, G(c), G²(c), …]`, `steps + 1` entries.
pub fn run_trace<L: LocalRule + ?Sized>(c: &Config, rule: &L, steps: usize) -> Result<Vec<Config>> {
    let mut trace = Vec::with_capacity(steps + 1);
    trace.push(c.clone());
    for _ in 0..steps {
        let next = step(trace.last().expect("non-empty"), rule)?;
        trace.push(next);
    }
    Ok(trace)
}

/// Outcome of the ring bijectivity check. `bijective` only certifies the ring
/// of the given size; it is a necessary condition for reversibility on `Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingReport {
    pub ring_size: usize,
    pub bijective: bool,
    /// Two distinct ring configurations with the same image.
    pub witness: Option<(Vec<State>, Vec<State>)>,
}

/// Enumerates all `|Q|^ring_size` ring configurations and checks injectivity
/// of the global map.
pub fn is_reversible_on_ring<L: LocalRule + ?Sized>(rule: &L, ring_size: usize) -> Result<RingReport> {
    if rule.dim() != 1 {
        return Err(Error::Dimension("ring check needs a 1-D rule".into()));
    }
    if ring_size == 0 {
        return Err(Error::Dimension("ring size must be positive".into()));
    }
    let states = rule.states();
    let q = states.len();
    let count = (q as u128).checked_pow(ring_size as u32).unwrap_or(u128::MAX);
    if count > RING_ENUMERATION_LIMIT {
        return Err(Error::EnumerationLimit { count, limit: RING_ENUMERATION_LIMIT });
    }
    let position: BTreeMap<State, usize> = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut first_preimage = vec![u32::MAX; count as usize];
    let mut digits = vec![0usize; ring_size];
    for index in 0..count as u32 {
        let cells: Vec<State> = digits.iter().map(|&d| states[d]).collect();
        let image = step(&Config::Periodic(PeriodicConfig::ring(cells.clone())?), rule)?;
        let image_index =
            image.as_periodic().expect("ring maps to ring").cells.iter().fold(0usize, |acc, s| acc * q + position[s]);
        let slot = &mut first_preimage[image_index];
        if *slot != u32::MAX {
            let other = decode(*slot as usize, q, ring_size).into_iter().map(|d| states[d]).collect();
            return Ok(RingReport { ring_size, bijective: false, witness: Some((other, cells)) });
        }
        *slot = index;
        advance(&mut digits, q);
    }
    Ok(RingReport { ring_size, bijective: true, witness: None })
}

fn decode(mut index: usize, radix: usize, len: usize) -> Vec<usize> {
    let mut digits = vec![0; len];
    for d in digits.iter_mut().rev() {
        *d = index % radix;
        index /= radix;
    }
    digits
}

/// Wolfram's four behavioural classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WolframClass {
    Class1,
    Class2,
    Class3,
    Class4,
}

impl fmt::Display for WolframClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            WolframClass::Class1 => 1,
            WolframClass::Class2 => 2,
            WolframClass::Class3 => 3,
            WolframClass::Class4 => 4,
        };
        write!(f, "Class {n}")
    }
}

/// Fixed lookup for the textbook example of each class; not a classifier.
pub fn classify_demo(rule: EcaRule) -> Result<WolframClass> {
    match rule.number() {
        254 => Ok(WolframClass::Class1),
        170 => Ok(WolframClass::Class2),
        30 => Ok(WolframClass::Class3),
        110 => Ok(WolframClass::Class4),
        other => Err(Error::NotInDemoSet(other)),
    }
}
