use serde::{Deserialize, Serialize};

use super::{ApwElement, ZERO_MODULUS};

/// Class-membership summary for an element. Never fails; numeric parts are
/// estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub in_ap_minus: bool,
    pub in_ap_plus: bool,
    pub is_even: bool,
    pub is_invertible: bool,
    /// Grid minimum of `|φ(x)|` (an upper bound for the true infimum).
    pub min_modulus_estimate: f64,
    pub wiener_norm: f64,
    /// `|c_dom| − Σ_{others} |c_j|` when positive: a certified lower bound.
    pub dominant_term_bound: f64,
    /// Whether [`ApwElement::invert`] succeeded.
    pub series_certified: bool,
}

pub fn membership(a: &ApwElement) -> MembershipReport {
    membership_with(a, 200.0)
}

/// Membership with the modulus scanned over `[-window, window]`.
pub fn membership_with(a: &ApwElement, window: f64) -> MembershipReport {
    let norm = a.wiener_norm();
    let dominant = a.dominant_term().map_or(0.0, |t| t.coeff.norm());
    let bound = (2.0 * dominant - norm).max(0.0);

    let bw = a.effective_bandwidth(1e-12).max(1.0);
    // 16 samples per shortest period
    let n = ((16.0 * bw * 2.0 * window / std::f64::consts::TAU).ceil() as usize).clamp(4096, 1 << 22);
    let dx = 2.0 * window / n as f64;
    let min_modulus = if a.is_empty() {
        0.0
    } else {
        a.eval_uniform(-window, dx, n + 1)
            .iter()
            .map(|z| z.norm())
            .fold(f64::INFINITY, f64::min)
    };
    let series_certified = a.invert().is_ok();

    MembershipReport {
        in_ap_minus: a.is_minus_type(),
        in_ap_plus: a.is_plus_type(),
        is_even: a.is_even(),
        is_invertible: series_certified || (bound > ZERO_MODULUS && min_modulus > ZERO_MODULUS),
        min_modulus_estimate: min_modulus,
        wiener_norm: norm,
        dominant_term_bound: bound,
        series_certified,
    }
}

/// Certified lower bound for `inf |a|` over `[-window, window]`.
///
/// `|a'| ≤ L = Σ |λ_j c_j|`, so the grid minimum `m` at spacing `δ` gives
/// `inf |a| ≥ m − Lδ/2`. The grid is refined until the bound exceeds
/// [`ZERO_MODULUS`] or the sample budget runs out; the last bound (possibly
/// negative) is returned.
pub fn modulus_lower_bound(a: &ApwElement, window: f64) -> f64 {
    const MAX_SAMPLES: usize = 1 << 23;
    if a.is_empty() {
        return 0.0;
    }
    let lipschitz: f64 = a.terms().iter().map(|t| t.freq.abs() * t.coeff.norm()).sum();
    let mut n = 4096usize;
    loop {
        let dx = 2.0 * window / n as f64;
        let m = a
            .eval_uniform(-window, dx, n + 1)
            .iter()
            .map(|z| z.norm())
            .fold(f64::INFINITY, f64::min);
        let bound = m - 0.5 * lipschitz * dx;
        if bound > ZERO_MODULUS || n >= MAX_SAMPLES {
            return bound;
        }
        // aim for Lδ/2 ≈ m/4
        let wanted = (4.0 * lipschitz * window / m.max(ZERO_MODULUS)).ceil() as usize;
        n = wanted.next_power_of_two().max(4 * n).min(MAX_SAMPLES);
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::phi2;
    use super::*;
    use std::f64::consts::SQRT_2;

    fn e(f: f64) -> ApwElement {
        ApwElement::exponential(f).unwrap()
    }

    #[test]
    fn single_negative_exponential() {
        let r = membership(&e(-3.0));
        assert!(r.in_ap_minus);
        assert!(!r.in_ap_plus);
        assert!(!r.is_even);
        assert!(r.is_invertible);
    }

    #[test]
    fn cosine_is_even() {
        let r = membership(&e(-2.0).add(&e(2.0)));
        assert!(r.is_even);
        assert!(!r.in_ap_minus && !r.in_ap_plus);
        assert!(!r.is_invertible);
    }

    #[test]
    fn phi2_invertible_with_bound() {
        let r = membership(&phi2());
        let lower = 10.0 - (SQRT_2 + 1.0);
        assert!(r.is_invertible && r.series_certified);
        assert!(r.min_modulus_estimate >= lower);
        assert!((r.dominant_term_bound - lower).abs() < 1e-12);
        assert!((r.wiener_norm - (11.0 + SQRT_2)).abs() < 1e-12);
    }

    #[test]
    fn lipschitz_bound() {
        let cos = e(-1.0).add(&e(1.0));
        assert!(modulus_lower_bound(&cos, 50.0) <= 0.0);
        let ex = e(-2.0).add(&e(2.0)).exp().unwrap();
        let b = modulus_lower_bound(&ex, 200.0);
        let inf = (-2.0f64).exp();
        assert!(b > 0.5 * inf && b <= inf + 1e-9, "{b}");
    }

    #[test]
    fn zero_element() {
        let r = membership(&ApwElement::zero());
        assert!(!r.is_invertible);
        assert_eq!(r.min_modulus_estimate, 0.0);
        assert!(r.in_ap_minus && r.in_ap_plus && r.is_even);
    }
}
