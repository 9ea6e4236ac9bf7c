//! Dense square complex matrices, row-major.

use std::collections::HashMap;

use num_complex::Complex;

use crate::scalar::Real;

/// `entries[i * dim + j]` is row `i`, column `j`; column `j` is the image of basis state `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix<R> {
    dim: usize,
    entries: Vec<Complex<R>>,
}

impl<R: Real> SquareMatrix<R> {
    /// Returns `None` unless `entries.len() == dim * dim`.
    pub fn from_entries(dim: usize, entries: Vec<Complex<R>>) -> Option<Self> {
        (entries.len() == dim * dim).then_some(Self { dim, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Complex<R>>>) -> Option<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        Some(Self { dim, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Complex<R>>(dim: usize, mut f: F) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: vec![Complex::default(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| if i == j { Complex::new(R::one(), R::zero()) } else { Complex::default() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<R> {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex<R>) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex<R>]> {
        self.entries.chunks(self.dim.max(1))
    }

    pub fn entries(&self) -> &[Complex<R>] {
        &self.entries
    }

    /// Nonzero entries of column `col` as `(row, value)`.
    pub fn column_support(&self, col: usize) -> Vec<(usize, Complex<R>)> {
        (0..self.dim).map(|i| (i, self.get(i, col))).filter(|(_, v)| v.re != R::zero() || v.im != R::zero()).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Self::from_fn(self.dim, |i, j| {
            (0..self.dim).fold(Complex::default(), |acc, k| acc + self.get(i, k) * rhs.get(k, j))
        })
    }

    /// Kronecker product; `self` acts on the more significant index.
    pub fn kron(&self, rhs: &Self) -> Self {
        let d = rhs.dim;
        Self::from_fn(self.dim * d, |i, j| self.get(i / d, j / d) * rhs.get(i % d, j % d))
    }

    pub fn max_abs_diff(&self, other: &Self) -> R {
        self.entries.iter().zip(&other.entries).fold(R::zero(), |m, (a, b)| m.max((*a - *b).norm()))
    }

    /// Largest entry of `|M†M − I|`, together with the column pair where it occurs.
    pub fn unitarity_defect(&self) -> (R, (usize, usize)) {
        let mut worst = (R::zero(), (0, 0));
        for a in 0..self.dim {
            for b in a..self.dim {
                let mut dot = Complex::<R>::default();
                for i in 0..self.dim {
                    dot += self.get(i, a).conj() * self.get(i, b);
                }
                let target = if a == b { R::one() } else { R::zero() };
                let dev = (dot - Complex::new(target, R::zero())).norm();
                if dev > worst.0 || dev.is_nan() {
                    worst = (dev, (a, b));
                }
            }
        }
        worst
    }

    pub fn is_unitary(&self, eps: R) -> bool {
        let (dev, _) = self.unitarity_defect();
        dev <= eps
    }
}

/// Sparse Gram matrix accumulated from shared entries.
pub(crate) struct SparseGram<R> {
    entries: HashMap<(usize, usize), Complex<R>>,
}

impl<R: Real> SparseGram<R> {
    pub(crate) fn new() -> Self {
        Self { entries: HashMap::new() }
    }

    /// Adds the outer products of one sparse vector `(index, value)`.
    pub(crate) fn add_vector(&mut self, v: &[(usize, Complex<R>)]) {
        for &(a, x) in v {
            for &(b, y) in v {
                if a <= b {
                    *self.entries.entry((a, b)).or_default() += x.conj() * y;
                }
            }
        }
    }

    /// Worst deviation from the identity over `0..n`, with its index pair.
    pub(crate) fn worst(&self, n: usize) -> (R, (usize, usize)) {
        let mut worst = (R::zero(), (0, 0));
        for i in 0..n {
            let d = self.entries.get(&(i, i)).copied().unwrap_or_default();
            let dev = (d - Complex::new(R::one(), R::zero())).norm();
            if dev > worst.0 {
                worst = (dev, (i, i));
            }
        }
        let mut keys: Vec<_> = self.entries.keys().filter(|(a, b)| a != b).copied().collect();
        keys.sort_unstable();
        for key in keys {
            let dev = self.entries[&key].norm();
            if dev > worst.0 {
                worst = (dev, key);
            }
        }
        worst
    }
}
