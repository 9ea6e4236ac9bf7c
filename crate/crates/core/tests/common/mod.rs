#![allow(dead_code)]

use num_complex::Complex;
use qcalab::matrix::SquareMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type C = Complex<f64>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> C {
    C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random unit vector of length `n`.
pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<C> {
    let v: Vec<C> = (0..n).map(|_| random_complex(rng)).collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}

/// Gram-Schmidt on random columns.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> SquareMatrix<f64> {
    let mut cols: Vec<Vec<C>> = Vec::new();
    while cols.len() < n {
        let mut v: Vec<C> = (0..n).map(|_| random_complex(rng)).collect();
        for u in &cols {
            let dot: C = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(u) {
                *x -= dot * y;
            }
        }
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.into_iter().map(|a| a / norm).collect());
        }
    }
    SquareMatrix::from_fn(n, |i, j| cols[j][i])
}

/// `1 ⊕ V` for a random unitary `V` of size `n - 1`.
pub fn random_unitary_fixing_zero(rng: &mut ChaCha8Rng, n: usize) -> SquareMatrix<f64> {
    let v = random_unitary(rng, n - 1);
    SquareMatrix::from_fn(n, |i, j| match (i, j) {
        (0, 0) => C::new(1.0, 0.0),
        (0, _) | (_, 0) => C::default(),
        _ => v.get(i - 1, j - 1),
    })
}

/// `1 ⊕ V` where `V` is a random phased permutation of the remaining states
/// followed by one random 2×2 mixing block, so branching stays small.
pub fn sparse_unitary_fixing_zero(rng: &mut ChaCha8Rng, n: usize) -> SquareMatrix<f64> {
    use rand::seq::SliceRandom;
    let mut perm: Vec<usize> = (1..n).collect();
    perm.shuffle(rng);
    let mut p = SquareMatrix::identity(n);
    for (j, &i) in perm.iter().enumerate() {
        p.set(j + 1, j + 1, C::default());
        p.set(i, j + 1, C::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)));
    }
    let mut mix = SquareMatrix::identity(n);
    if n > 2 {
        let pair = rand::seq::index::sample(rng, n - 1, 2);
        let (a, b) = (pair.index(0) + 1, pair.index(1) + 1);
        let block = random_unitary(rng, 2);
        for (x, &i) in [a, b].iter().enumerate() {
            for (y, &j) in [a, b].iter().enumerate() {
                mix.set(i, j, block.get(x, y));
            }
        }
    }
    p.mul(&mix)
}
