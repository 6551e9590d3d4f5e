//! Discretized operators on `L²(ℝ)` and `L²(ℝ₊)`.
//!
//! Signals are sampled on the staggered grid of a [`GridSpec`]; a Fourier
//! multiplier `φ` acts as `F⁻¹ φ F` with `F f(ξ) = ∫ f(x) e^{iξx} dx`, so
//! `e_λ(ξ) = e^{iλξ}` translates by `λ` (`f ↦ f(· − λ)`). The transform is
//! periodic on `[-T, T)`; identities are therefore measured on test signals
//! supported well inside the half-line window, see [`checks`].

pub mod checks;
mod fft;
pub mod finite_section;
mod grid;
mod multiplier;
pub mod ops;
mod signal;

pub use checks::{battery, identity_residual, CheckKind, Identity, ResidualReport, DEFAULT_SEED, IDENTITY_THRESHOLD};
pub use finite_section::{finite_section_matrix, DenseMatrix, FINITE_SECTION_CAP};
pub use grid::{GridSpec, ALIAS_SAFETY};
pub use multiplier::{Multiplier, MultiplierSpec};
pub use ops::{
    apply_hankel, apply_multiplier, apply_reflexive_inverse, apply_whh, apply_wiener_hopf, even_extend, project_plus,
    reflect_signal, restrict, zero_extend, ExtensionMode, ReflexiveInverse,
};
pub use signal::{Signal, Support, PLUS_SUPPORT_TOL};

use thiserror::Error;

use crate::pointwise::DomainError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("signals live on different grids")]
    GridMismatch,
    #[error("multiplier shifts by up to {max_freq}, window allows {limit}")]
    AliasRisk { max_freq: f64, limit: f64 },
    #[error("multiplier is not invertible on the grid (min |m| = {min_modulus:e})")]
    MultiplierNotInvertible { min_modulus: f64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("finite section of size {n} exceeds the cap {cap}")]
    SizeCap { n: usize, cap: usize },
    #[error("signal is not supported on the half-line (|f| = {magnitude:e} at x = {x})")]
    NotPlusSupported { x: f64, magnitude: f64 },
    #[error("malformed signal data: {0}")]
    Csv(String),
    #[error(transparent)]
    Domain(#[from] DomainError),
}
