//! Qubit registers and the standard gate set.
//!
//! Qubit `0` is the leftmost character of a register label, so `|10⟩` has
//! qubit 0 set. A gate applied to targets `[t0, t1, ...]` sees `t0` as its
//! most significant input bit; this makes `CNOT` on `[0, 1]` use qubit 0 as
//! control.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_complex::Complex;

use crate::amplitude::{Accumulator, Superposition, Tolerance};
use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::scalar::Real;

/// Basis label of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bits(pub Vec<bool>);

impl Bits {
    pub fn zeros(n: usize) -> Self {
        Bits(vec![false; n])
    }

    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Format(format!("invalid bit string `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Bits)
    }

    pub fn from_index(index: usize, n: usize) -> Self {
        Bits((0..n).map(|q| (index >> (n - 1 - q)) & 1 == 1).collect())
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A `k`-qubit operator as a `2^k × 2^k` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate<R> {
    arity: usize,
    matrix: SquareMatrix<R>,
}

impl<R: Real> Gate<R> {
    pub fn new(arity: usize, matrix: SquareMatrix<R>) -> Result<Self> {
        if arity == 0 || matrix.dim() != 1 << arity {
            return Err(Error::BadMatrixShape(matrix.dim()));
        }
        Ok(Self { arity, matrix })
    }

    /// Infers the arity from a `2^k`-dimensional matrix.
    pub fn from_matrix(matrix: SquareMatrix<R>) -> Result<Self> {
        let dim = matrix.dim();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::BadMatrixShape(dim));
        }
        Self::new(dim.trailing_zeros() as usize, matrix)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn matrix(&self) -> &SquareMatrix<R> {
        &self.matrix
    }

    pub fn identity(arity: usize) -> Self {
        Self { arity, matrix: SquareMatrix::identity(1 << arity) }
    }

    /// `self ⊗ other`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &Self) -> Self {
        Self { arity: self.arity + other.arity, matrix: self.matrix.kron(&other.matrix) }
    }

    /// Matrix product `self · other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { gate: self.arity, targets: other.arity });
        }
        Ok(Self { arity: self.arity, matrix: self.matrix.mul(&other.matrix) })
    }

    pub fn adjoint(&self) -> Self {
        Self { arity: self.arity, matrix: self.matrix.adjoint() }
    }
}

/// Named gates: `I`, `X`, `Y`, `Z`, `H`, `T`, `CNOT`.
pub fn named_gate<R: Real>(name: &str) -> Result<Gate<R>> {
    let z = Complex::new(R::zero(), R::zero());
    let o = Complex::new(R::one(), R::zero());
    let m = |v: Complex<R>| -v;
    let h = Complex::new(R::FRAC_1_SQRT_2(), R::zero());
    let rows = match name.to_ascii_uppercase().as_str() {
        "I" | "ID" => vec![vec![o, z], vec![z, o]],
        "X" | "NOT" => vec![vec![z, o], vec![o, z]],
        // columns (0, 1) and (-1, 0)
        "Y" => vec![vec![z, m(o)], vec![o, z]],
        "Z" => vec![vec![o, z], vec![z, m(o)]],
        "H" => vec![vec![h, h], vec![h, m(h)]],
        "T" => vec![vec![o, z], vec![z, Complex::from_polar(R::one(), R::FRAC_PI_4())]],
        "CNOT" | "CX" => vec![vec![o, z, z, z], vec![z, o, z, z], vec![z, z, z, o], vec![z, z, o, z]],
        _ => return Err(Error::UnknownGate(name.to_string())),
    };
    Gate::from_matrix(SquareMatrix::from_rows(rows).expect("square literal"))
}

pub const NAMED_GATES: [&str; 7] = ["I", "X", "Y", "Z", "H", "T", "CNOT"];

pub fn tensor<R: Real>(a: &Gate<R>, b: &Gate<R>) -> Gate<R> {
    a.tensor(b)
}

/// True iff every entry of `G†G − I` is within `eps` in modulus.
pub fn is_unitary<R: Real>(g: &Gate<R>, eps: R) -> bool {
    g.matrix.is_unitary(eps)
}

/// State of `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitRegister<R> {
    n: usize,
    state: Superposition<Bits, R>,
}

impl<R: Real> QubitRegister<R> {
    /// `|0…0⟩`.
    pub fn zero(n: usize) -> Self {
        Self { n, state: Superposition::basis(Bits::zeros(n)) }
    }

    pub fn basis(bits: Bits) -> Self {
        Self { n: bits.len(), state: Superposition::basis(bits) }
    }

    /// Parses a bit string such as `"0110"` into a basis register.
    pub fn from_bits(s: &str) -> Result<Self> {
        Ok(Self::basis(Bits::parse(s)?))
    }

    pub fn from_state(n: usize, state: Superposition<Bits, R>, tol: &Tolerance<R>) -> Result<Self> {
        if let Some(bad) = state.labels().find(|b| b.len() != n) {
            return Err(Error::RegisterSize { expected: n, found: bad.len() });
        }
        state.check_normalized(tol)?;
        Ok(Self { n, state })
    }

    pub(crate) fn from_state_unchecked(n: usize, state: Superposition<Bits, R>) -> Self {
        Self { n, state }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn state(&self) -> &Superposition<Bits, R> {
        &self.state
    }

    pub fn amplitude(&self, bits: &str) -> Complex<R> {
        Bits::parse(bits).map(|b| self.state.amplitude(&b)).unwrap_or_default()
    }

    /// Dense amplitude vector indexed by the big-endian register value.
    pub fn to_dense(&self) -> Vec<Complex<R>> {
        let mut v = vec![Complex::default(); 1 << self.n];
        for (bits, a) in self.state.iter() {
            v[bits.index()] = *a;
        }
        v
    }

    pub fn apply(&self, gate: &Gate<R>, targets: &[usize]) -> Result<Self> {
        self.apply_with(gate, targets, &Tolerance::default())
    }

    pub fn apply_with(&self, gate: &Gate<R>, targets: &[usize], tol: &Tolerance<R>) -> Result<Self> {
        if targets.len() != gate.arity {
            return Err(Error::ArityMismatch { gate: gate.arity, targets: targets.len() });
        }
        let mut seen = HashSet::new();
        for &t in targets {
            if t >= self.n {
                return Err(Error::QubitOutOfRange { index: t, n: self.n });
            }
            if !seen.insert(t) {
                return Err(Error::DuplicateTarget(t));
            }
        }
        let k = gate.arity;
        let columns: Vec<Vec<(usize, Complex<R>)>> = (0..1 << k).map(|j| gate.matrix.column_support(j)).collect();
        let mut acc = Accumulator::new();
        for (bits, amp) in self.state.iter() {
            let local = targets.iter().fold(0usize, |acc, &t| (acc << 1) | bits.0[t] as usize);
            for &(row, g) in &columns[local] {
                let mut out = bits.clone();
                for (pos, &t) in targets.iter().enumerate() {
                    out.0[t] = (row >> (k - 1 - pos)) & 1 == 1;
                }
                acc.add(out, g * amp);
            }
        }
        Ok(Self { n: self.n, state: acc.finish(tol)? })
    }
}

/// `H^⊗n |0…0⟩`, the uniform superposition over all `2^n` bit strings.
pub fn hadamard_all<R: Real>(n: usize) -> Result<QubitRegister<R>> {
    if n == 0 {
        return Err(Error::RegisterSize { expected: 1, found: 0 });
    }
    let h = named_gate("H")?;
    (0..n).try_fold(QubitRegister::zero(n), |reg, q| reg.apply(&h, &[q]))
}

/// Two-qubit product-state test: `|α00·α11 − α01·α10| ≤ eps_unitary`.
pub fn is_product_2q<R: Real>(reg: &QubitRegister<R>, tol: &Tolerance<R>) -> Result<bool> {
    if reg.n != 2 {
        return Err(Error::RegisterSize { expected: 2, found: reg.n });
    }
    let a = |s: &str| reg.amplitude(s);
    let det = a("00") * a("11") - a("01") * a("10");
    Ok(det.norm() <= tol.eps_unitary)
}

/// Photon detectors of the beam-splitter experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Detector {
    /// Reached by the path state `|1⟩`.
    A,
    /// Reached by the path state `|0⟩`.
    B,
}

/// Beam-splitter setups.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interferometer {
    /// A single half-silvered mirror in front of the detectors.
    SingleSplitter,
    /// Two half-silvered mirrors; `obstacle` blocks the lower (`|1⟩`) arm between them.
    MachZehnder { obstacle: bool },
}

/// Detection probabilities for `setup`, conditioned on the photon not being absorbed.
///
/// Each half-silvered mirror is a Hadamard on a one-qubit path register
/// starting in `|0⟩`; full mirrors only relabel paths.
pub fn interferometer<R: Real>(setup: Interferometer) -> Result<BTreeMap<Detector, R>> {
    interferometer_with(setup, &named_gate("H")?)
}

/// [`interferometer`] with every half-silvered mirror replaced by `splitter`.
pub fn interferometer_with<R: Real>(setup: Interferometer, splitter: &Gate<R>) -> Result<BTreeMap<Detector, R>> {
    let tol = Tolerance::default();
    if splitter.arity() != 1 {
        return Err(Error::ArityMismatch { gate: splitter.arity(), targets: 1 });
    }
    if !is_unitary(splitter, tol.eps_unitary) {
        return Err(Error::NotUnitary);
    }
    let mut path = QubitRegister::<R>::zero(1).apply(splitter, &[0])?;
    if let Interferometer::MachZehnder { obstacle } = setup {
        if obstacle {
            let outcomes = path.state.measure_projective(|b| b.0[0], &tol)?;
            let open = outcomes
                .into_iter()
                .find(|o| !o.tag)
                // the obstacle absorbs every photon
                .ok_or(Error::NotNormalized { norm_sq: 0.0 })?;
            path = QubitRegister::from_state_unchecked(1, open.post_state);
        }
        path = path.apply(splitter, &[0])?;
    }
    let a = path.state.amplitude(&Bits(vec![true])).norm_sqr();
    let b = path.state.amplitude(&Bits(vec![false])).norm_sqr();
    let total = a + b;
    Ok(BTreeMap::from([(Detector::A, a / total), (Detector::B, b / total)]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn reg(terms: &[(&str, Complex<f64>)]) -> QubitRegister<f64> {
        let n = terms[0].0.len();
        let s = Superposition::from_terms(terms.iter().map(|(b, a)| (Bits::parse(b).unwrap(), *a))).unwrap();
        QubitRegister::from_state(n, s, &Tolerance::default()).unwrap()
    }

    #[test]
    fn x_swaps_amplitudes() {
        let r = reg(&[("0", c(0.6, 0.0)), ("1", c(0.0, 0.8))]);
        let out = r.apply(&named_gate("X").unwrap(), &[0]).unwrap();
        assert_eq!(out.amplitude("0"), c(0.0, 0.8));
        assert_eq!(out.amplitude("1"), c(0.6, 0.0));
    }

    #[test]
    fn cnot_table() {
        let cnot = named_gate::<f64>("CNOT").unwrap();
        for (input, output) in [("00", "00"), ("01", "01"), ("10", "11"), ("11", "10")] {
            let out = QubitRegister::from_bits(input).unwrap().apply(&cnot, &[0, 1]).unwrap();
            assert_eq!(out.state().len(), 1);
            assert_eq!(out.amplitude(output), c(1.0, 0.0), "{input}");
        }
    }

    #[test]
    fn z_and_y_on_one() {
        let one = QubitRegister::<f64>::from_bits("1").unwrap();
        assert_eq!(one.apply(&named_gate("Z").unwrap(), &[0]).unwrap().amplitude("1"), c(-1.0, 0.0));
        let y1 = one.apply(&named_gate("Y").unwrap(), &[0]).unwrap();
        assert_eq!(y1.amplitude("0"), c(-1.0, 0.0));
        let y0 = QubitRegister::<f64>::zero(1).apply(&named_gate("Y").unwrap(), &[0]).unwrap();
        assert_eq!(y0.amplitude("1"), c(1.0, 0.0));
    }

    #[test]
    fn bell_circuit() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let r = QubitRegister::<f64>::zero(2)
            .apply(&named_gate("H").unwrap(), &[0])
            .unwrap()
            .apply(&named_gate("CNOT").unwrap(), &[0, 1])
            .unwrap();
        assert!((r.amplitude("00") - c(h, 0.0)).norm() < 1e-15);
        assert!((r.amplitude("11") - c(h, 0.0)).norm() < 1e-15);
        assert_eq!(r.state().len(), 2);
    }

    #[test]
    fn hh_is_identity_on_zero() {
        let hgate = named_gate::<f64>("H").unwrap();
        let r = QubitRegister::zero(1).apply(&hgate, &[0]).unwrap().apply(&hgate, &[0]).unwrap();
        assert_eq!(r.state().len(), 1);
        assert!((r.amplitude("0") - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn apply_errors() {
        let r = QubitRegister::<f64>::zero(2);
        let cnot = named_gate::<f64>("CNOT").unwrap();
        assert_eq!(r.apply(&cnot, &[0]), Err(Error::ArityMismatch { gate: 2, targets: 1 }));
        assert_eq!(r.apply(&cnot, &[0, 2]), Err(Error::QubitOutOfRange { index: 2, n: 2 }));
        assert_eq!(r.apply(&cnot, &[1, 1]), Err(Error::DuplicateTarget(1)));
        assert!(matches!(named_gate::<f64>("SWAP"), Err(Error::UnknownGate(_))));
    }

    #[test]
    fn tensor_block_formula() {
        let x = named_gate::<f64>("X").unwrap();
        let i = named_gate::<f64>("I").unwrap();
        assert_eq!(i.tensor(&i), Gate::identity(2));
        let out = QubitRegister::zero(2).apply(&x.tensor(&i), &[0, 1]).unwrap();
        assert_eq!(out.amplitude("10"), c(1.0, 0.0));
    }

    #[test]
    fn unitarity_examples() {
        assert!(is_unitary(&named_gate::<f64>("Y").unwrap(), 1e-12));
        let half =
            SquareMatrix::from_rows(vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.5, 0.0)]]).unwrap();
        assert!(!is_unitary(&Gate::from_matrix(half).unwrap(), 1e-12));
    }

    #[test]
    fn product_test_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let tol = Tolerance::default();
        assert!(!is_product_2q(&reg(&[("00", c(h, 0.0)), ("11", c(h, 0.0))]), &tol).unwrap());
        assert!(is_product_2q(&reg(&[("00", c(h, 0.0)), ("01", c(h, 0.0))]), &tol).unwrap());
        assert!(is_product_2q(&QubitRegister::from_bits("10").unwrap(), &tol).unwrap());
        assert!(is_product_2q(&QubitRegister::<f64>::zero(3), &tol).is_err());
    }

    #[test]
    fn hadamard_all_small() {
        let r = hadamard_all::<f64>(3).unwrap();
        assert_eq!(r.state().len(), 8);
        for (_, a) in r.state().iter() {
            assert!((a.norm_sqr() - 0.125).abs() < 1e-15);
        }
        assert!(hadamard_all::<f64>(0).is_err());
    }

    #[test]
    fn interferometer_outcomes() {
        let p = interferometer::<f64>(Interferometer::MachZehnder { obstacle: false }).unwrap();
        assert!(p[&Detector::A].abs() < 1e-15 && (p[&Detector::B] - 1.0).abs() < 1e-15);
        let p = interferometer::<f64>(Interferometer::MachZehnder { obstacle: true }).unwrap();
        assert!((p[&Detector::A] - 0.5).abs() < 1e-15 && (p[&Detector::B] - 0.5).abs() < 1e-15);
        let p = interferometer::<f64>(Interferometer::SingleSplitter).unwrap();
        assert!((p[&Detector::A] - 0.5).abs() < 1e-15 && (p[&Detector::B] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn bits_index_roundtrip() {
        for i in 0..16 {
            assert_eq!(Bits::from_index(i, 4).index(), i);
        }
        assert_eq!(Bits::from_index(2, 3).to_string(), "010");
    }
}
