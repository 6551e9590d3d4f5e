use std::fmt;

use num_complex::Complex64;

use super::{fft, GridSpec, OperatorError, Signal, Support};
use crate::apw::{ApwElement, ZERO_MODULUS};
use crate::factorization::{sampled_evenness_defect, EVENNESS_TOL};
use crate::pointwise::PointwiseSymbol;
use crate::symbol::{LoweredSymbol, SymbolExpr};

/// Share of the Wiener norm below which a term is ignored by the window check.
const SIGNIFICANT_TERM: f64 = 1e-12;

/// A Fourier symbol as supplied by the caller.
#[derive(Debug, Clone, PartialEq)]
pub enum MultiplierSpec {
    Apw(ApwElement),
    Symbol(LoweredSymbol),
    /// Values at the frequency nodes in FFT bin order, see
    /// [`GridSpec::frequency`].
    Sampled(Vec<Complex64>),
}

impl From<ApwElement> for MultiplierSpec {
    fn from(a: ApwElement) -> Self {
        MultiplierSpec::Apw(a)
    }
}

impl From<LoweredSymbol> for MultiplierSpec {
    fn from(s: LoweredSymbol) -> Self {
        match s.as_apw() {
            Some(a) => MultiplierSpec::Apw(a.clone()),
            None => MultiplierSpec::Symbol(s),
        }
    }
}

impl From<SymbolExpr> for MultiplierSpec {
    fn from(e: SymbolExpr) -> Self {
        MultiplierSpec::Symbol(LoweredSymbol::from_pointwise(e))
    }
}

impl MultiplierSpec {
    /// Spectrum in `(-∞, 0]`, i.e. the symbol extends into the lower half
    /// plane. Only decidable for APW symbols.
    pub fn is_minus_type(&self) -> bool {
        match self {
            MultiplierSpec::Apw(a) => a.is_minus_type(),
            MultiplierSpec::Symbol(s) => s.as_apw().is_some_and(|a| a.is_minus_type()),
            MultiplierSpec::Sampled(_) => false,
        }
    }

    pub fn is_even(&self) -> bool {
        match self {
            MultiplierSpec::Apw(a) => a.is_even(),
            MultiplierSpec::Symbol(s) => sampled_evenness_defect(s).is_ok_and(|d| d <= EVENNESS_TOL),
            MultiplierSpec::Sampled(v) => {
                let n = v.len();
                (1..n).all(|k| (v[k] - v[n - k]).norm() <= EVENNESS_TOL * (1.0 + v[k].norm()))
            }
        }
    }

    fn apw_part(&self) -> Option<&ApwElement> {
        match self {
            MultiplierSpec::Apw(a) => Some(a),
            MultiplierSpec::Symbol(s) => s.apw_part(),
            MultiplierSpec::Sampled(_) => None,
        }
    }

    /// Samples the symbol on the frequency grid.
    ///
    /// The Nyquist bin takes `(m(π/h) + m(−π/h))/2` so that sampling
    /// commutes with `ξ ↦ −ξ`.
    pub fn prepare(&self, grid: &GridSpec) -> Result<Multiplier, OperatorError> {
        if let Some(a) = self.apw_part() {
            grid.check_shift(a.effective_bandwidth(SIGNIFICANT_TERM))?;
        }
        let n = grid.points();
        let values = match self {
            MultiplierSpec::Sampled(v) => {
                if v.len() != n {
                    return Err(OperatorError::GridMismatch);
                }
                v.clone()
            }
            MultiplierSpec::Apw(a) => fft_order(grid, a.eval_uniform(xi0(grid), xi_step(grid), n + 1)),
            MultiplierSpec::Symbol(s) => fft_order(grid, s.sample_uniform(xi0(grid), xi_step(grid), n + 1)?),
        };
        Ok(Multiplier { grid: *grid, values })
    }
}

fn xi_step(grid: &GridSpec) -> f64 {
    std::f64::consts::PI / grid.half_length()
}

fn xi0(grid: &GridSpec) -> f64 {
    -(grid.points() as f64 / 2.0) * xi_step(grid)
}

/// `ascending[j]` is the value at `ξ = (j − N/2)π/T`, `j = 0..=N`.
fn fft_order(grid: &GridSpec, ascending: Vec<Complex64>) -> Vec<Complex64> {
    let n = grid.points();
    let half = n / 2;
    let mut out = vec![Complex64::default(); n];
    for (k, v) in out.iter_mut().enumerate() {
        *v = if k == half {
            0.5 * (ascending[0] + ascending[n])
        } else if k < half {
            ascending[half + k]
        } else {
            ascending[k - half]
        };
    }
    out
}

impl fmt::Display for MultiplierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultiplierSpec::Apw(a) => write!(f, "{}", SymbolExpr::from_apw(a)),
            MultiplierSpec::Symbol(s) => write!(f, "{s}"),
            MultiplierSpec::Sampled(v) => write!(f, "<{} sampled values>", v.len()),
        }
    }
}

/// A symbol sampled on the frequency grid of a [`GridSpec`].
///
/// Products, reflections and inverses act on the samples, so the discrete
/// operators satisfy `A_{ab} = A_a A_b`, `J A_a J = A_{ã}` exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Multiplier {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl Multiplier {
    pub fn one(grid: &GridSpec) -> Self {
        Self {
            grid: *grid,
            values: vec![Complex64::new(1.0, 0.0); grid.points()],
        }
    }

    pub fn exponential(grid: &GridSpec, freq: f64) -> Result<Self, OperatorError> {
        let e = ApwElement::exponential(freq).map_err(|_| OperatorError::AliasRisk {
            max_freq: freq,
            limit: grid.half_length(),
        })?;
        MultiplierSpec::Apw(e).prepare(grid)
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn min_modulus(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a * b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.grid, other.grid, "multipliers on different grids");
        Self {
            grid: self.grid,
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    /// `ξ ↦ m(−ξ)`: bin `k` ↦ bin `−k mod N`.
    pub fn reflect(&self) -> Self {
        let n = self.values.len();
        Self {
            grid: self.grid,
            values: (0..n).map(|k| self.values[(n - k) % n]).collect(),
        }
    }

    pub fn inverse(&self) -> Result<Self, OperatorError> {
        let min_modulus = self.min_modulus();
        if !(min_modulus >= ZERO_MODULUS) {
            return Err(OperatorError::MultiplierNotInvertible { min_modulus });
        }
        Ok(Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v.inv()).collect(),
        })
    }

    /// `F⁻¹ m F f` on the periodic window.
    pub fn apply(&self, f: &Signal) -> Result<Signal, OperatorError> {
        if *f.grid() != self.grid {
            return Err(OperatorError::GridMismatch);
        }
        let mut buf = f.values().to_vec();
        fft::analyze(&mut buf);
        for (b, m) in buf.iter_mut().zip(&self.values) {
            *b *= m;
        }
        fft::synthesize(&mut buf);
        Ok(f.with_values(buf, Support::FullLine))
    }

    /// Convolution kernel `a(d) = (A δ_0)(d)` for node offsets `d`, indexed
    /// cyclically (`a[N + d]` for `d < 0`).
    pub fn kernel(&self) -> Vec<Complex64> {
        let mut buf = self.values.clone();
        fft::synthesize(&mut buf);
        buf
    }
}
