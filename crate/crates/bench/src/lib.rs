//! Shared fixtures for the benchmarks.

use std::f64::consts::PI;

use whap_core::operator::{battery, Signal, DEFAULT_SEED};
use whap_core::{lower, parse, ApwElement, AsymmetricFactorization, Complex64, GridSpec};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A ten-term element with incommensurate frequencies in [-5, 5].
pub fn dense_apw() -> ApwElement {
    ApwElement::from_pairs((0..10).map(|k| {
        let f = -5.0 + k as f64 * (1.0 + (2.0f64).sqrt() / 10.0);
        (f.min(5.0), c(1.0 / (k + 1) as f64, 0.1 * k as f64))
    }))
}

/// Minus-type element with lattice spectrum, inside the exp/log radius.
pub fn minus_apw() -> ApwElement {
    ApwElement::from_pairs([(-0.5, c(0.3, 0.1)), (-1.25, c(-0.2, 0.0)), (-2.0, c(0.0, 0.15))])
}

/// `1 + small` with mixed spectrum, invertible by series.
pub fn near_one() -> ApwElement {
    ApwElement::one().add(&ApwElement::from_pairs([(-1.0, c(0.2, 0.0)), (0.75, c(0.0, 0.1))]))
}

/// The worked example φ = exp(e_{-π}) e_{-2} ln(atan(100x²) + π/2).
pub fn example_factorization() -> AsymmetricFactorization {
    AsymmetricFactorization::new(
        ApwElement::exponential(-PI).unwrap().exp().unwrap(),
        -2.0,
        lower(&parse("ln(atan(100*x^2)+pi/2)").unwrap()),
    )
    .unwrap()
}

pub fn default_grid() -> GridSpec {
    GridSpec::new(200.0, 1 << 14).unwrap()
}

pub fn test_signal(grid: &GridSpec) -> Signal {
    battery(grid, DEFAULT_SEED).swap_remove(8)
}
