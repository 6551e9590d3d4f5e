//! Pointwise evaluation shared by every symbol representation.

use num_complex::Complex64;
use thiserror::Error;

/// A symbol value could not be computed at a point.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("logarithm of zero at x = {x}")]
    LogOfZero { x: f64 },
    #[error("division by zero at x = {x}")]
    DivisionByZero { x: f64 },
    #[error("non-finite value at x = {x}")]
    NonFinite { x: f64 },
}

/// Anything that can be sampled as a complex function of one real variable.
pub trait PointwiseSymbol: Sync {
    fn value_at(&self, x: f64) -> Result<Complex64, DomainError>;

    /// Samples `n` points starting at `x0` with spacing `dx`.
    fn sample_uniform(&self, x0: f64, dx: f64, n: usize) -> Result<Vec<Complex64>, DomainError> {
        (0..n).map(|k| self.value_at(x0 + k as f64 * dx)).collect()
    }
}

impl<T: PointwiseSymbol + ?Sized> PointwiseSymbol for &T {
    fn value_at(&self, x: f64) -> Result<Complex64, DomainError> {
        (**self).value_at(x)
    }

    fn sample_uniform(&self, x0: f64, dx: f64, n: usize) -> Result<Vec<Complex64>, DomainError> {
        (**self).sample_uniform(x0, dx, n)
    }
}

/// Pointwise product of two symbols.
#[derive(Debug, Clone, Copy)]
pub struct Product<A, B>(pub A, pub B);

impl<A: PointwiseSymbol, B: PointwiseSymbol> PointwiseSymbol for Product<A, B> {
    fn value_at(&self, x: f64) -> Result<Complex64, DomainError> {
        Ok(self.0.value_at(x)? * self.1.value_at(x)?)
    }
}

/// `x ↦ f(x) / f(-x)`, the quotient `φ·φ̃⁻¹` used by the antisymmetric
/// factorization and the mean-motion cross-check.
#[derive(Debug, Clone, Copy)]
pub struct ReflectionQuotient<F>(pub F);

impl<F: PointwiseSymbol> PointwiseSymbol for ReflectionQuotient<F> {
    fn value_at(&self, x: f64) -> Result<Complex64, DomainError> {
        let num = self.0.value_at(x)?;
        let den = self.0.value_at(-x)?;
        if den == Complex64::new(0.0, 0.0) {
            return Err(DomainError::DivisionByZero { x });
        }
        Ok(num / den)
    }
}

/// Largest relative deviation `|f(x) - f(-x)| / (1 + |f(x)|)` over the points.
pub fn evenness_defect<F: PointwiseSymbol>(f: &F, points: &[f64]) -> Result<f64, DomainError> {
    let mut worst = 0.0f64;
    for &x in points {
        let a = f.value_at(x)?;
        let b = f.value_at(-x)?;
        worst = worst.max((a - b).norm() / (1.0 + a.norm()));
    }
    Ok(worst)
}
