//! Factorization calculus for almost-periodic Fourier symbols of Wiener-Hopf
//! plus Hankel operators.
//!
//! The crate is organized bottom-up:
//!
//! * [`apw`] holds exact sparse arithmetic for trigonometric polynomials with
//!   real frequencies (the computable core of the APW algebra), including
//!   exp/log/inverse series and a numeric mean-motion estimator.
//! * [`symbol`] parses a small expression language for symbols, evaluates
//!   expression trees pointwise and splits them into an APW part and a
//!   pointwise remainder.
//! * [`factorization`] implements right, asymmetric and antisymmetric AP
//!   factorizations, the transforms between them, normalization, the
//!   constructive factorizer for log-amenable symbols and the invertibility
//!   trichotomy.
//! * [`operator`] discretizes `L²(ℝ)` on a symmetric window and applies
//!   Fourier multipliers, Wiener-Hopf, Hankel and Wiener-Hopf plus Hankel
//!   operators, the reflexive generalized inverse, identity residual checks
//!   and a dense finite-section oracle.

pub mod apw;
pub mod factorization;
pub mod operator;
pub mod pointwise;
pub mod symbol;

pub use apw::{ApwElement, ApwError, MeanMotionConfig, MembershipReport, Term};
pub use factorization::{
    AntisymmetricFactorization, AsymmetricFactorization, ClassificationReport, Factorization, FactorizationError,
    RightApFactorization, Verdict,
};
pub use operator::{GridSpec, OperatorError};
pub use symbol::{lower, parse, LoweredSymbol, ParseError, SymbolExpr};

pub use num_complex::Complex64;

pub use pointwise::{DomainError, PointwiseSymbol};
