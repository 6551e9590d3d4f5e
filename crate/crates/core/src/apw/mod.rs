//! Sparse trigonometric polynomials `Σ c_j e^{iλ_j x}` with real frequencies.
//!
//! An [`ApwElement`] is always kept in canonical form: terms sorted by
//! ascending frequency, frequencies closer than [`FREQ_MERGE_TOL`] merged,
//! coefficients smaller than [`COEFF_PRUNE_TOL`] dropped. All operations are
//! pure and return new canonical elements.

mod membership;
mod series;
mod winding;

pub use membership::{membership, membership_with, modulus_lower_bound, MembershipReport};
pub use winding::{mean_motion_of, unwrap_phase, MeanMotionConfig};

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::pointwise::{DomainError, PointwiseSymbol};

/// Frequencies closer than this are treated as equal.
pub const FREQ_MERGE_TOL: f64 = 1e-9;
/// Coefficients below this magnitude are pruned from canonical forms.
pub const COEFF_PRUNE_TOL: f64 = 1e-14;
/// Target accuracy (Wiener norm) of truncated exp/log/inverse series.
pub const SERIES_TOL: f64 = 1e-10;
/// Maximum number of terms a series computation may produce.
pub const TERM_CAP: usize = 100_000;
/// Moduli below this are treated as zeros of a symbol.
pub const ZERO_MODULUS: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ApwError {
    #[error("frequency must be finite, got {0}")]
    NonFiniteFrequency(f64),
    #[error("element is not invertible by any supported series expansion")]
    NotInvertibleInSeries,
    #[error("series exceeded {cap} terms before reaching tolerance")]
    SeriesBlowup { cap: usize },
    #[error("logarithm is not representable: {0}")]
    LogNotAmenable(&'static str),
    #[error("continuous argument undefined: |φ| = {min_modulus:e} on the sample grid")]
    WindingUndefined { min_modulus: f64 },
    #[error("phase step {step:.3} rad exceeds π/2; sample grid too coarse")]
    AliasRisk { step: f64 },
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// One term `coeff · e^{i freq x}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub freq: f64,
    #[serde(flatten, with = "complex_parts")]
    pub coeff: Complex64,
}

impl Term {
    pub fn new(freq: f64, coeff: Complex64) -> Self {
        Self { freq, coeff }
    }
}

mod complex_parts {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Parts {
        re: f64,
        im: f64,
    }

    pub fn serialize<S: Serializer>(c: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        Parts { re: c.re, im: c.im }.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let p = Parts::deserialize(d)?;
        Ok(Complex64::new(p.re, p.im))
    }
}

/// A finite almost-periodic polynomial in canonical form.
#[derive(Clone, Default, PartialEq)]
pub struct ApwElement {
    terms: Vec<Term>,
}

impl fmt::Debug for ApwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.terms.iter().map(|t| (t.freq, t.coeff)))
            .finish()
    }
}

impl ApwElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_terms(vec![Term::new(0.0, c)])
    }

    /// `e_λ(x) = e^{iλx}`.
    pub fn exponential(freq: f64) -> Result<Self, ApwError> {
        if !freq.is_finite() {
            return Err(ApwError::NonFiniteFrequency(freq));
        }
        Ok(Self::from_terms(vec![Term::new(freq, Complex64::new(1.0, 0.0))]))
    }

    /// `c · e_λ`.
    pub fn monomial(freq: f64, c: Complex64) -> Result<Self, ApwError> {
        if !freq.is_finite() {
            return Err(ApwError::NonFiniteFrequency(freq));
        }
        Ok(Self::from_terms(vec![Term::new(freq, c)]))
    }

    /// Builds the canonical form of an arbitrary term list.
    pub fn from_terms(mut terms: Vec<Term>) -> Self {
        terms.retain(|t| t.freq.is_finite());
        terms.sort_unstable_by(|a, b| a.freq.total_cmp(&b.freq));
        Self {
            terms: merge_sorted(terms),
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (f64, Complex64)>>(pairs: I) -> Self {
        Self::from_terms(pairs.into_iter().map(|(f, c)| Term::new(f, c)).collect())
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The Bohr–Fourier spectrum of the canonical form.
    pub fn spectrum(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.freq).collect()
    }

    /// `Σ |c_j|`.
    pub fn wiener_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).sum()
    }

    /// Coefficient at `freq`, i.e. the Bohr mean value `M(φ e_{-λ})`.
    pub fn mean_value(&self, freq: f64) -> Complex64 {
        self.term_index(freq).map(|i| self.terms[i].coeff).unwrap_or_default()
    }

    fn term_index(&self, freq: f64) -> Option<usize> {
        let i = self.terms.partition_point(|t| t.freq < freq - FREQ_MERGE_TOL);
        (i < self.terms.len() && (self.terms[i].freq - freq).abs() <= FREQ_MERGE_TOL).then_some(i)
    }

    pub fn min_freq(&self) -> Option<f64> {
        self.terms.first().map(|t| t.freq)
    }

    pub fn max_freq(&self) -> Option<f64> {
        self.terms.last().map(|t| t.freq)
    }

    /// Largest `|λ|` among terms carrying at least `rel` of the Wiener norm.
    pub fn effective_bandwidth(&self, rel: f64) -> f64 {
        let cut = rel * self.wiener_norm();
        self.terms
            .iter()
            .filter(|t| t.coeff.norm() >= cut)
            .map(|t| t.freq.abs())
            .fold(0.0, f64::max)
    }

    /// Term with the largest modulus; ties go to the higher frequency.
    pub fn dominant_term(&self) -> Option<Term> {
        self.terms
            .iter()
            .copied()
            .reduce(|best, t| if t.coeff.norm() >= best.coeff.norm() { t } else { best })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.terms.iter().map(|t| Term::new(t.freq, t.coeff * c)).collect())
    }

    /// Multiplication by `e_μ`.
    pub fn shift(&self, mu: f64) -> Self {
        Self::from_terms(self.terms.iter().map(|t| Term::new(t.freq + mu, t.coeff)).collect())
    }

    /// `φ̃(x) = φ(-x)`.
    pub fn reflect(&self) -> Self {
        Self {
            terms: self.terms.iter().rev().map(|t| Term::new(-t.freq, t.coeff)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.len() || j < other.len() {
            let take_left = j >= other.len() || (i < self.len() && self.terms[i].freq <= other.terms[j].freq);
            if take_left {
                terms.push(self.terms[i]);
                i += 1;
            } else {
                terms.push(other.terms[j]);
                j += 1;
            }
        }
        Self {
            terms: merge_sorted(terms),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    /// Coefficient convolution.
    pub fn mul(&self, other: &Self) -> Self {
        self.mul_filtered(other, |_| true)
    }

    /// Product keeping only frequencies accepted by `keep`. The filter is
    /// applied before merging, so it must be a union of whole frequency bands.
    pub(crate) fn mul_filtered(&self, other: &Self, keep: impl Fn(f64) -> bool) -> Self {
        if self.is_empty() || other.is_empty() {
            return Self::zero();
        }
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                let f = a.freq + b.freq;
                if keep(f) {
                    terms.push(Term::new(f, a.coeff * b.coeff));
                }
            }
        }
        Self::from_terms(terms)
    }

    /// Terms with frequency in the closed band `[lo, hi]`.
    pub fn restrict_band(&self, lo: f64, hi: f64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .copied()
                .filter(|t| t.freq >= lo && t.freq <= hi)
                .collect(),
        }
    }

    /// Part with frequencies `< -τ_f`.
    pub fn negative_part(&self) -> Self {
        self.restrict_band(f64::NEG_INFINITY, -FREQ_MERGE_TOL * 0.5)
            .without_freq(0.0)
    }

    /// Part with frequencies `> τ_f`.
    pub fn positive_part(&self) -> Self {
        self.restrict_band(FREQ_MERGE_TOL * 0.5, f64::INFINITY)
            .without_freq(0.0)
    }

    fn without_freq(mut self, freq: f64) -> Self {
        if let Some(i) = self.term_index(freq) {
            self.terms.remove(i);
        }
        self
    }

    /// True when every frequency is `≤ 0` (membership in AP⁻).
    pub fn is_minus_type(&self) -> bool {
        self.terms.iter().all(|t| t.freq <= FREQ_MERGE_TOL)
    }

    /// True when every frequency is `≥ 0` (membership in AP⁺).
    pub fn is_plus_type(&self) -> bool {
        self.terms.iter().all(|t| t.freq >= -FREQ_MERGE_TOL)
    }

    /// Coefficient-wise distance to `φ̃`, relative to the prune threshold.
    pub fn is_even(&self) -> bool {
        let refl = self.reflect();
        self.sub(&refl)
            .terms
            .iter()
            .all(|t| t.coeff.norm() <= COEFF_PRUNE_TOL * (1.0 + self.wiener_norm()))
    }

    /// Wiener-norm distance `‖a − b‖_W`.
    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).wiener_norm()
    }

    /// Largest coefficient-wise deviation.
    pub fn max_coeff_deviation(&self, other: &Self) -> f64 {
        self.sub(other).terms.iter().map(|t| t.coeff.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.terms.iter().map(|t| t.coeff * Complex64::cis(t.freq * x)).sum()
    }

    /// Evaluates on `x0 + k·dx`, `k < n`, by phasor stepping with periodic
    /// re-synchronization.
    pub fn eval_uniform(&self, x0: f64, dx: f64, n: usize) -> Vec<Complex64> {
        const RESYNC: usize = 256;
        let mut out = vec![Complex64::default(); n];
        for t in &self.terms {
            let step = Complex64::cis(t.freq * dx);
            let mut k = 0;
            while k < n {
                let mut ph = t.coeff * Complex64::cis(t.freq * (x0 + k as f64 * dx));
                let end = (k + RESYNC).min(n);
                for v in &mut out[k..end] {
                    *v += ph;
                    ph *= step;
                }
                k = end;
            }
        }
        out
    }

    /// Multiplicative inverse; see [`series`] for the supported classes.
    pub fn invert(&self) -> Result<Self, ApwError> {
        series::invert(self)
    }

    pub fn exp(&self) -> Result<Self, ApwError> {
        series::exp(self)
    }

    pub fn log(&self) -> Result<Self, ApwError> {
        series::log(self)
    }

    /// Mean motion `κ(φ)` estimated by phase unwrapping over `[-T, T]` and
    /// `[-2T, 2T]`.
    pub fn mean_motion(&self, horizon: f64, samples: usize) -> Result<f64, ApwError> {
        let cfg = MeanMotionConfig {
            horizon,
            min_samples: samples,
        };
        winding::mean_motion_apw(self, &cfg)
    }
}

fn merge_sorted(sorted: Vec<Term>) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::with_capacity(sorted.len());
    let mut anchor = f64::NAN;
    for t in sorted {
        match out.last_mut() {
            Some(last) if (t.freq - anchor).abs() <= FREQ_MERGE_TOL => {
                last.coeff += t.coeff;
            }
            _ => {
                anchor = t.freq;
                out.push(t);
            }
        }
    }
    out.retain(|t| t.coeff.norm() >= COEFF_PRUNE_TOL);
    out
}

impl PointwiseSymbol for ApwElement {
    fn value_at(&self, x: f64) -> Result<Complex64, DomainError> {
        Ok(self.eval(x))
    }

    fn sample_uniform(&self, x0: f64, dx: f64, n: usize) -> Result<Vec<Complex64>, DomainError> {
        Ok(self.eval_uniform(x0, dx, n))
    }
}

impl Serialize for ApwElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ApwElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let terms = Vec::<Term>::deserialize(d)?;
        if let Some(t) = terms.iter().find(|t| !t.freq.is_finite()) {
            return Err(serde::de::Error::custom(format!("non-finite frequency {}", t.freq)));
        }
        Ok(Self::from_terms(terms))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&ApwElement> for &ApwElement {
            type Output = ApwElement;
            fn $method(self, rhs: &ApwElement) -> ApwElement {
                ApwElement::$method(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for &ApwElement {
    type Output = ApwElement;
    fn neg(self) -> ApwElement {
        ApwElement::neg(self)
    }
}

impl From<Complex64> for ApwElement {
    fn from(c: Complex64) -> Self {
        Self::constant(c)
    }
}
