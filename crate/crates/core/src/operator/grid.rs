use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::OperatorError;

/// Safety factor between the window half-length and the largest shift a
/// multiplier may apply.
pub const ALIAS_SAFETY: f64 = 4.0;

/// Staggered grid on `[-T, T)`: `x_n = -T + (n + ½)h`, `h = 2T/N`.
///
/// There is no node at `x = 0`, so `x ↦ -x` is the index map `n ↦ N-1-n`
/// and the half-line `x > 0` is exactly the upper half of the indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr")]
pub struct GridSpec {
    half_length: f64,
    points: usize,
}

#[derive(Deserialize)]
struct GridRepr {
    half_length: f64,
    points: usize,
}

impl TryFrom<GridRepr> for GridSpec {
    type Error = OperatorError;

    fn try_from(r: GridRepr) -> Result<Self, Self::Error> {
        GridSpec::new(r.half_length, r.points)
    }
}

impl GridSpec {
    pub fn new(half_length: f64, points: usize) -> Result<Self, OperatorError> {
        if !(half_length.is_finite() && half_length > 0.0) {
            return Err(OperatorError::InvalidGrid("half-length must be positive and finite"));
        }
        if points < 2 || !points.is_power_of_two() {
            return Err(OperatorError::InvalidGrid("point count must be a power of two ≥ 2"));
        }
        Ok(Self { half_length, points })
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.points as f64
    }

    pub fn x(&self, n: usize) -> f64 {
        -self.half_length + (n as f64 + 0.5) * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.points).map(|n| self.x(n)).collect()
    }

    /// Index of the first node with `x > 0`.
    pub fn plus_start(&self) -> usize {
        self.points / 2
    }

    /// Frequency `ξ_k = πk/T` of DFT bin `k` in FFT order, `k ∈ [-N/2, N/2)`.
    pub fn frequency(&self, bin: usize) -> f64 {
        let n = self.points as isize;
        let k = bin as isize;
        let k = if k >= n / 2 { k - n } else { k };
        PI * k as f64 / self.half_length
    }

    /// Nyquist frequency `π/h`.
    pub fn nyquist(&self) -> f64 {
        PI / self.spacing()
    }

    /// A multiplier `e^{iλξ}` shifts by `λ`; shifts must stay well inside the
    /// periodic window.
    pub fn check_shift(&self, max_abs_freq: f64) -> Result<(), OperatorError> {
        if ALIAS_SAFETY * max_abs_freq < self.half_length {
            Ok(())
        } else {
            Err(OperatorError::AliasRisk {
                max_freq: max_abs_freq,
                limit: self.half_length / ALIAS_SAFETY,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn staggered_nodes_are_symmetric() {
        let g = GridSpec::new(10.0, 16).unwrap();
        assert_eq!(g.spacing(), 1.25);
        for n in 0..16 {
            assert_eq!(g.x(n), -g.x(15 - n));
        }
        assert!(g.x(g.plus_start()) > 0.0 && g.x(g.plus_start() - 1) < 0.0);
    }

    #[test]
    fn frequencies_in_fft_order() {
        let g = GridSpec::new(PI, 8).unwrap();
        let f: Vec<f64> = (0..8).map(|k| g.frequency(k)).collect();
        assert_eq!(f, [0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]);
        assert_eq!(g.nyquist(), 4.0);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(GridSpec::new(1.0, 12).is_err());
        assert!(GridSpec::new(0.0, 16).is_err());
        assert!(GridSpec::new(f64::NAN, 16).is_err());
        assert!(serde_json::from_str::<GridSpec>(r#"{"half_length": 1, "points": 3}"#).is_err());
    }

    #[test]
    fn shift_limit() {
        let g = GridSpec::new(200.0, 1024).unwrap();
        assert!(g.check_shift(49.0).is_ok());
        assert!(matches!(g.check_shift(50.0), Err(OperatorError::AliasRisk { .. })));
    }
}
