//! Sparse superpositions over arbitrary basis labels.
//!
//! A [`Superposition`] maps basis labels to complex amplitudes. Labels are
//! opaque to this module: every model (qubit registers, QCA configurations,
//! QTM configurations) brings its own label type. Iteration is ordered by
//! label so traces are byte-stable.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub type Amplitude<R> = Complex<R>;

/// Numerical tolerances used by evolution and the checkers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<R> {
    /// Allowed deviation of a norm from 1.
    pub eps_norm: R,
    /// Allowed entrywise deviation of `G†G` from the identity.
    pub eps_unitary: R,
    /// Terms with `|α|²` below this are dropped.
    pub eps_drop: R,
}

impl<R: Real> Default for Tolerance<R> {
    fn default() -> Self {
        Self { eps_norm: R::of(R::EPS_NORM), eps_unitary: R::of(R::EPS_UNITARY), eps_drop: R::of(R::EPS_DROP) }
    }
}

impl<R: Real> Tolerance<R> {
    pub fn new(eps_norm: R, eps_unitary: R, eps_drop: R) -> Result<Self> {
        let tol = Self { eps_norm, eps_unitary, eps_drop };
        tol.validate()?;
        Ok(tol)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: R| x > R::zero() && x.is_finite();
        if !(positive(self.eps_norm) && positive(self.eps_unitary) && positive(self.eps_drop)) {
            return Err(Error::InvalidTolerance("all tolerances must be positive".into()));
        }
        if self.eps_drop >= self.eps_norm {
            return Err(Error::InvalidTolerance("eps_drop must be below eps_norm".into()));
        }
        Ok(())
    }

    pub fn with_norm(self, eps_norm: R) -> Result<Self> {
        Self::new(eps_norm, self.eps_unitary, self.eps_drop)
    }

    pub fn with_unitary(self, eps_unitary: R) -> Result<Self> {
        Self::new(self.eps_norm, eps_unitary, self.eps_drop)
    }
}

/// A finite linear combination of basis labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Superposition<K: Ord, R> {
    terms: BTreeMap<K, Complex<R>>,
}

impl<K: Ord, R> Default for Superposition<K, R> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

/// One outcome of a projective measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<T, K: Ord, R> {
    pub tag: T,
    pub probability: R,
    pub post_state: Superposition<K, R>,
}

impl<K: Ord + Clone, R: Real> Superposition<K, R> {
    /// The zero vector.
    pub fn new() -> Self {
        Self::default()
    }

    /// `|label⟩` with amplitude 1.
    pub fn basis(label: K) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(label, Complex::new(R::one(), R::zero()));
        Self { terms }
    }

    /// Builds a superposition, summing repeated labels. Exact zeros are not
    /// stored; other small terms are kept until [`Superposition::prune`].
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (K, Complex<R>)>,
    {
        let mut map: BTreeMap<K, Complex<R>> = BTreeMap::new();
        for (label, amp) in terms {
            if !(amp.re.is_finite() && amp.im.is_finite()) {
                return Err(Error::NonFinite);
            }
            *map.entry(label).or_default() += amp;
        }
        map.retain(|_, a| a.re != R::zero() || a.im != R::zero());
        Ok(Self { terms: map })
    }

    pub(crate) fn from_map(terms: BTreeMap<K, Complex<R>>) -> Self {
        Self { terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Complex<R>)> {
        self.terms.iter()
    }

    pub fn labels(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    /// Amplitude of `label`; zero when absent.
    pub fn amplitude(&self, label: &K) -> Complex<R> {
        self.terms.get(label).copied().unwrap_or_default()
    }

    pub fn norm_sq(&self) -> R {
        self.terms.values().fold(R::zero(), |acc, a| acc + a.norm_sqr())
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &Self) -> Complex<R> {
        let (small, large, conj_small) =
            if self.len() <= other.len() { (self, other, true) } else { (other, self, false) };
        small.terms.iter().fold(Complex::default(), |acc, (label, a)| match large.terms.get(label) {
            Some(b) if conj_small => acc + a.conj() * b,
            Some(b) => acc + b.conj() * a,
            None => acc,
        })
    }

    /// Euclidean distance `‖self − other‖`.
    pub fn distance(&self, other: &Self) -> R {
        let mut total = R::zero();
        for (label, a) in &self.terms {
            total += (*a - other.amplitude(label)).norm_sqr();
        }
        for (label, b) in &other.terms {
            if !self.terms.contains_key(label) {
                total += b.norm_sqr();
            }
        }
        total.sqrt()
    }

    pub fn scaled(&self, factor: Complex<R>) -> Self {
        Self { terms: self.terms.iter().map(|(k, a)| (k.clone(), *a * factor)).collect() }
    }

    /// Rescales to unit norm. The zero vector is rejected.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sq();
        if n <= R::zero() {
            return Err(Error::NotNormalized { norm_sq: 0.0 });
        }
        Ok(self.scaled(Complex::new(R::one() / n.sqrt(), R::zero())))
    }

    /// Drops every term with `|α|² < eps_drop`.
    pub fn prune(&self, tol: &Tolerance<R>) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(_, a)| a.norm_sqr() >= tol.eps_drop)
                .map(|(k, a)| (k.clone(), *a))
                .collect(),
        }
    }

    pub fn check_normalized(&self, tol: &Tolerance<R>) -> Result<()> {
        let n = self.norm_sq();
        if (n - R::one()).abs() > tol.eps_norm {
            return Err(Error::NotNormalized { norm_sq: n.as_f64() });
        }
        Ok(())
    }

    /// Projective measurement whose projectors are the label classes of
    /// `partition`. Outcomes are returned in tag order; tags with zero
    /// probability do not appear.
    pub fn measure_projective<T, F>(&self, partition: F, tol: &Tolerance<R>) -> Result<Vec<Outcome<T, K, R>>>
    where
        T: Ord + Clone,
        F: Fn(&K) -> T,
    {
        self.check_normalized(tol)?;
        let mut classes: BTreeMap<T, BTreeMap<K, Complex<R>>> = BTreeMap::new();
        for (label, amp) in &self.terms {
            classes.entry(partition(label)).or_default().insert(label.clone(), *amp);
        }
        let total = self.norm_sq();
        Ok(classes
            .into_iter()
            .map(|(tag, terms)| {
                let mass = terms.values().fold(R::zero(), |acc, a| acc + a.norm_sqr());
                let scale = Complex::new(R::one() / mass.sqrt(), R::zero());
                let post_state = Self { terms: terms.into_iter().map(|(k, a)| (k, a * scale)).collect() };
                Outcome { tag, probability: mass / total, post_state }
            })
            .collect())
    }

    /// Total `|α|²` of the labels selected by `pred`.
    pub fn probability_where<F: Fn(&K) -> bool>(&self, pred: F) -> R {
        self.terms.iter().filter(|(k, _)| pred(k)).fold(R::zero(), |acc, (_, a)| acc + a.norm_sqr())
    }

    pub fn map_labels<K2: Ord + Clone, F: Fn(&K) -> K2>(&self, f: F) -> Result<Superposition<K2, R>> {
        Superposition::from_terms(self.terms.iter().map(|(k, a)| (f(k), *a)))
    }

    /// Serializable entries sorted by rendered label.
    pub fn entries<F: Fn(&K) -> String>(&self, render: F) -> Vec<SuperpositionEntry> {
        let mut out: Vec<SuperpositionEntry> = self
            .terms
            .iter()
            .map(|(k, a)| SuperpositionEntry { label: render(k), re: a.re.as_f64(), im: a.im.as_f64() })
            .collect();
        out.sort_by(|a, b| a.label.cmp(&b.label));
        out
    }

    pub fn to_json<F: Fn(&K) -> String>(&self, render: F) -> serde_json::Value {
        serde_json::to_value(self.entries(render)).expect("entries serialize")
    }

    pub fn from_entries<F>(entries: &[SuperpositionEntry], parse: F) -> Result<Self>
    where
        F: Fn(&str) -> Result<K>,
    {
        let terms = entries
            .iter()
            .map(|e| Ok((parse(&e.label)?, Complex::new(R::of(e.re), R::of(e.im)))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(terms)
    }
}

/// JSON form of one superposition term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperpositionEntry {
    pub label: String,
    pub re: f64,
    pub im: f64,
}

/// Sums amplitudes by target label. Pruning happens once, in [`Accumulator::finish`],
/// so that cancelling pairs are not lost to early truncation.
#[derive(Debug, Clone)]
pub struct Accumulator<K, R> {
    terms: HashMap<K, Complex<R>>,
}

impl<K: Ord + Clone + Hash, R: Real> Default for Accumulator<K, R> {
    fn default() -> Self {
        Self { terms: HashMap::new() }
    }
}

impl<K: Ord + Clone + Hash, R: Real> Accumulator<K, R> {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, label: K, amp: Complex<R>) {
        *self.terms.entry(label).or_default() += amp;
    }

    pub fn finish(self, tol: &Tolerance<R>) -> Result<Superposition<K, R>> {
        let mut terms = BTreeMap::new();
        for (label, amp) in self.terms {
            if !(amp.re.is_finite() && amp.im.is_finite()) {
                return Err(Error::NonFinite);
            }
            if amp.norm_sqr() >= tol.eps_drop {
                terms.insert(label, amp);
            }
        }
        Ok(Superposition::from_map(terms))
    }
}
