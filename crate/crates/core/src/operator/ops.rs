//! Extensions, restriction, reflection and the operators built from them.
//!
//! With plus signals stored as zero-padded full arrays:
//!
//! * `W_φ = r₊ A_φ ℓ₀`
//! * `H_φ = r₊ A_φ J ℓ₀`
//! * `WH_φ = r₊ A_φ ℓ^e = W_φ + H_φ`

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{GridSpec, Multiplier, MultiplierSpec, OperatorError, Signal, Support};
use crate::factorization::AsymmetricFactorization;

/// `ℓ₀: L²(ℝ₊) → L²₊(ℝ)`.
pub fn zero_extend(f: &Signal) -> Result<Signal, OperatorError> {
    f.expect_plus()?;
    Ok(f.with_values(f.values().to_vec(), Support::FullLine))
}

/// `r₊`: keeps `x > 0`.
pub fn restrict(f: &Signal) -> Signal {
    let mut v = f.values().to_vec();
    v[..f.grid().plus_start()].fill(Complex64::default());
    f.with_values(v, Support::PlusHalfLine)
}

/// `ℓ^e`: `f(−x) := f(x)`.
pub fn even_extend(f: &Signal) -> Result<Signal, OperatorError> {
    f.expect_plus()?;
    let n = f.grid().points();
    let mut v = f.values().to_vec();
    for k in 0..f.grid().plus_start() {
        v[k] = v[n - 1 - k];
    }
    Ok(f.with_values(v, Support::FullLine))
}

/// `J f(x) = f(−x)`.
pub fn reflect_signal(f: &Signal) -> Signal {
    let mut v = f.values().to_vec();
    v.reverse();
    f.with_values(v, Support::FullLine)
}

/// `P₊ = ℓ₀ r₊`.
pub fn project_plus(f: &Signal) -> Signal {
    let r = restrict(f);
    r.with_values(r.values().to_vec(), Support::FullLine)
}

pub fn apply_multiplier(m: &Multiplier, f: &Signal) -> Result<Signal, OperatorError> {
    m.apply(f)
}

pub fn apply_wiener_hopf(m: &Multiplier, f: &Signal) -> Result<Signal, OperatorError> {
    Ok(restrict(&m.apply(&zero_extend(f)?)?))
}

pub fn apply_hankel(m: &Multiplier, f: &Signal) -> Result<Signal, OperatorError> {
    Ok(restrict(&m.apply(&reflect_signal(&zero_extend(f)?))?))
}

pub fn apply_whh(m: &Multiplier, f: &Signal) -> Result<Signal, OperatorError> {
    Ok(restrict(&m.apply(&even_extend(f)?)?))
}

/// The extension `ℓ` applied first by the reflexive inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ExtensionMode {
    #[default]
    Zero,
    Even,
}

/// `WH_φ⁻ = ℓ₀ r₊ A_{φ_e⁻¹} ℓ^e r₊ A_{e_{−λ}} ℓ^e r₊ A_{φ₋⁻¹} ℓ` for
/// `φ = φ₋ e_λ φ_e`, with the three multipliers prepared once.
#[derive(Debug, Clone)]
pub struct ReflexiveInverse {
    minus_inv: Multiplier,
    shift: Multiplier,
    even_inv: Multiplier,
}

impl ReflexiveInverse {
    pub fn new(af: &AsymmetricFactorization, grid: &GridSpec) -> Result<Self, OperatorError> {
        Ok(Self {
            minus_inv: MultiplierSpec::Apw(af.minus().clone()).prepare(grid)?.inverse()?,
            shift: Multiplier::exponential(grid, -af.index())?,
            even_inv: MultiplierSpec::from(af.even().clone()).prepare(grid)?.inverse()?,
        })
    }

    pub fn apply(&self, g: &Signal, mode: ExtensionMode) -> Result<Signal, OperatorError> {
        let extended = match mode {
            ExtensionMode::Zero => zero_extend(g)?,
            ExtensionMode::Even => even_extend(g)?,
        };
        let u = restrict(&self.minus_inv.apply(&extended)?);
        let u = apply_whh(&self.shift, &u)?;
        apply_whh(&self.even_inv, &u)
    }
}

pub fn apply_reflexive_inverse(
    af: &AsymmetricFactorization,
    g: &Signal,
    mode: ExtensionMode,
) -> Result<Signal, OperatorError> {
    ReflexiveInverse::new(af, g.grid())?.apply(g, mode)
}
