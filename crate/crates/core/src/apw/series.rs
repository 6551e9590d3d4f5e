//! Power-series functional calculus: `exp`, `log` and the multiplicative
//! inverse.
//!
//! Two expansions are used around an anchor term `c·e_μ`, writing the element
//! as `c·e_μ·(1 + h)`:
//!
//! * **Wiener series** when `‖h‖_W < 1`: the ordinary Neumann / Mercator
//!   series converges absolutely and is truncated by its geometric tail bound.
//! * **Graded series** when the spectrum of `h` lies strictly on one side of
//!   zero (anchor at the top or bottom of the spectrum). Every power `h^k`
//!   then lives at distance `≥ k·gap` from the origin, so each coefficient of
//!   the formal series is a finite sum, computed by a stable coefficient
//!   recursion inside a frequency window `|ν| ≤ F`; `F` is doubled until the
//!   outer half of the window carries less than the tolerance. This is what makes
//!   elements such as `exp(e_{-π})` invertible and log-able even though
//!   `‖h‖_W = e − 1 > 1`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use super::{ApwElement, ApwError, Term, FREQ_MERGE_TOL, SERIES_TOL, TERM_CAP};

const MAX_WIENER_ITERATIONS: usize = 20_000;
const MAX_WINDOW_DOUBLINGS: usize = 12;
const INITIAL_WINDOW_GAPS: f64 = 24.0;

pub(super) fn exp(a: &ApwElement) -> Result<ApwElement, ApwError> {
    if a.is_empty() {
        return Ok(ApwElement::one());
    }
    // exp(c0 + rest) = e^{c0} exp(rest)
    let c0 = a.mean_value(0.0);
    let rest = a.sub(&ApwElement::constant(c0));
    let norm = rest.wiener_norm();
    let mut sum = ApwElement::one();
    let mut term = ApwElement::one();
    // ‖rest‖^{k+1}/(k+1)! · e^{‖rest‖}, tracked in log space
    let mut log_tail = norm.ln() + norm;
    let mut k = 0usize;
    while !rest.is_empty() {
        k += 1;
        term = term.mul(&rest).scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
        if sum.len() > TERM_CAP {
            return Err(ApwError::SeriesBlowup { cap: TERM_CAP });
        }
        log_tail += norm.ln() - ((k + 1) as f64).ln();
        if log_tail <= SERIES_TOL.ln() || term.is_empty() {
            break;
        }
        if k > MAX_WIENER_ITERATIONS {
            return Err(ApwError::SeriesBlowup { cap: TERM_CAP });
        }
    }
    Ok(sum.scale(c0.exp()))
}

pub(super) fn log(a: &ApwElement) -> Result<ApwElement, ApwError> {
    let c = a.mean_value(0.0);
    if c == Complex64::default() {
        return Err(ApwError::LogNotAmenable("no frequency-0 term to factor out"));
    }
    let constant = ApwElement::constant(c.ln());
    let h = a.scale(c.inv()).sub(&ApwElement::one());
    if h.is_empty() {
        return Ok(constant);
    }
    let mercator = |k: usize| {
        if k == 0 {
            0.0
        } else if k % 2 == 1 {
            1.0 / k as f64
        } else {
            -1.0 / k as f64
        }
    };
    let series = if is_strictly_one_sided(&h) {
        graded_series(&h, Graded::Log).map_err(|e| match e {
            ApwError::NotInvertibleInSeries => ApwError::LogNotAmenable("graded logarithm series does not converge"),
            other => other,
        })?
    } else if h.wiener_norm() < 1.0 {
        wiener_series(&h, mercator)?
    } else {
        return Err(ApwError::LogNotAmenable(
            "‖φ/φ₀ − 1‖_W ≥ 1 and the spectrum is two-sided",
        ));
    };
    Ok(constant.add(&series))
}

pub(super) fn invert(a: &ApwElement) -> Result<ApwElement, ApwError> {
    match a.terms() {
        [] => return Err(ApwError::NotInvertibleInSeries),
        [t] => return ApwElement::monomial(-t.freq, t.coeff.inv()),
        _ => {}
    }
    let terms = a.terms();
    let mut anchors = vec![
        a.dominant_term().expect("non-empty"),
        *terms.last().expect("non-empty"),
        terms[0],
    ];
    anchors.dedup_by(|x, y| (x.freq - y.freq).abs() <= FREQ_MERGE_TOL);
    let neumann = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let one = ApwElement::one();
    for anchor in anchors {
        let unit = anchor.coeff.inv();
        let h = a.scale(unit).shift(-anchor.freq).sub(&one);
        let candidate = if is_strictly_one_sided(&h) {
            graded_series(&h, Graded::Inverse)
        } else if h.wiener_norm() < 1.0 {
            wiener_series(&h, neumann)
        } else {
            continue;
        };
        if let Ok(s) = candidate {
            let inv = s.scale(unit).shift(-anchor.freq);
            if a.mul(&inv).sub(&one).wiener_norm() <= SERIES_TOL {
                return Ok(inv);
            }
        }
    }
    Err(ApwError::NotInvertibleInSeries)
}

fn is_strictly_one_sided(h: &ApwElement) -> bool {
    match (h.min_freq(), h.max_freq()) {
        (Some(lo), Some(hi)) => hi < -FREQ_MERGE_TOL || lo > FREQ_MERGE_TOL,
        _ => false,
    }
}

/// `Σ_k coeff(k) h^k` for `‖h‖_W < 1`, truncated by the geometric tail bound.
fn wiener_series(h: &ApwElement, coeff: impl Fn(usize) -> f64) -> Result<ApwElement, ApwError> {
    let r = h.wiener_norm();
    debug_assert!(r < 1.0);
    let mut sum = ApwElement::constant(Complex64::new(coeff(0), 0.0));
    let mut power = ApwElement::one();
    let mut tail = r / (1.0 - r);
    for k in 1..=MAX_WIENER_ITERATIONS {
        power = power.mul(h);
        sum = sum.add(&power.scale(Complex64::new(coeff(k), 0.0)));
        if sum.len() > TERM_CAP {
            return Err(ApwError::SeriesBlowup { cap: TERM_CAP });
        }
        tail *= r;
        if tail <= SERIES_TOL || power.is_empty() {
            return Ok(sum);
        }
    }
    Err(ApwError::SeriesBlowup { cap: TERM_CAP })
}

/// Which power series a graded recursion computes.
#[derive(Clone, Copy)]
enum Graded {
    /// `(1 + h)⁻¹`
    Inverse,
    /// `log(1 + h)`
    Log,
}

/// One-sided `h`: computes `(1 + h)⁻¹` or `log(1 + h)` coefficient by
/// coefficient in order of increasing `|ν|`, inside a window `|ν| ≤ F` that
/// doubles until its outer half carries less than the tolerance.
///
/// The recursions are the frequency-graded analogues of power-series
/// division and of `ψ' = g'/g`:
///
/// * `b_s = −Σ_j h_j b_{s−p_j}`
/// * `ψ_s = h_s − (1/s) Σ_j (s − p_j) ψ_{s−p_j} h_j`
///
/// where `p_j = |λ_j|` runs over the spectrum of `h` and `s > 0` over the
/// additive semigroup it generates.
fn graded_series(h: &ApwElement, kind: Graded) -> Result<ApwElement, ApwError> {
    let sign = if h.max_freq().is_some_and(|f| f < 0.0) {
        -1.0
    } else {
        1.0
    };
    // (p_j, h_j) with p_j > 0 ascending
    let mut steps: Vec<(f64, Complex64)> = h.terms().iter().map(|t| (t.freq.abs(), t.coeff)).collect();
    steps.sort_by(|a, b| a.0.total_cmp(&b.0));
    let gap = steps[0].0;
    let span = steps.last().map_or(gap, |s| s.0);
    let mut window = (INITIAL_WINDOW_GAPS * gap).max(2.0 * span);
    let mut last_tail = f64::INFINITY;
    let mut rising = 0;
    for _ in 0..MAX_WINDOW_DOUBLINGS {
        let nodes = semigroup_nodes(&steps, window)?;
        let coeffs = graded_recursion(&nodes, &steps, kind);
        let tail: f64 = nodes
            .iter()
            .zip(&coeffs)
            .filter(|(s, _)| **s > 0.5 * window)
            .map(|(_, c)| c.norm())
            .sum();
        if tail <= 0.1 * SERIES_TOL {
            return Ok(ApwElement::from_terms(
                nodes.iter().zip(coeffs).map(|(s, c)| Term::new(sign * s, c)).collect(),
            ));
        }
        if !tail.is_finite() || tail > 1e12 {
            break;
        }
        if tail >= last_tail {
            rising += 1;
            if rising >= 2 {
                break;
            }
        } else {
            rising = 0;
        }
        last_tail = tail;
        window *= 2.0;
    }
    Err(ApwError::NotInvertibleInSeries)
}

/// Sorted, merged set `{Σ n_j p_j ≤ window}` including 0.
fn semigroup_nodes(steps: &[(f64, Complex64)], window: f64) -> Result<Vec<f64>, ApwError> {
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(OrderedF64(0.0)));
    let mut nodes: Vec<f64> = Vec::new();
    while let Some(Reverse(OrderedF64(s))) = heap.pop() {
        if nodes.last().is_some_and(|&l| s - l <= FREQ_MERGE_TOL) {
            continue;
        }
        nodes.push(s);
        if nodes.len() > TERM_CAP {
            return Err(ApwError::SeriesBlowup { cap: TERM_CAP });
        }
        for &(p, _) in steps {
            let next = s + p;
            if next <= window + FREQ_MERGE_TOL {
                heap.push(Reverse(OrderedF64(next)));
            }
        }
    }
    Ok(nodes)
}

fn graded_recursion(nodes: &[f64], steps: &[(f64, Complex64)], kind: Graded) -> Vec<Complex64> {
    let lookup = |s: f64| -> Option<usize> {
        let i = nodes.partition_point(|&n| n < s - FREQ_MERGE_TOL);
        (i < nodes.len() && (nodes[i] - s).abs() <= FREQ_MERGE_TOL).then_some(i)
    };
    let h_at = |s: f64| -> Complex64 {
        steps
            .iter()
            .find(|(p, _)| (p - s).abs() <= FREQ_MERGE_TOL)
            .map_or(Complex64::default(), |&(_, c)| c)
    };
    let mut out = vec![Complex64::default(); nodes.len()];
    out[0] = match kind {
        Graded::Inverse => Complex64::new(1.0, 0.0),
        Graded::Log => Complex64::default(),
    };
    for i in 1..nodes.len() {
        let s = nodes[i];
        let mut acc = Complex64::default();
        for &(p, hj) in steps {
            if p > s + FREQ_MERGE_TOL {
                break;
            }
            let Some(k) = lookup(s - p) else { continue };
            match kind {
                Graded::Inverse => acc += hj * out[k],
                Graded::Log => acc += hj * out[k] * nodes[k],
            }
        }
        out[i] = match kind {
            Graded::Inverse => -acc,
            Graded::Log => h_at(s) - acc / s,
        };
    }
    out
}

#[derive(Clone, Copy, PartialEq)]
struct OrderedF64(f64);

impl Eq for OrderedF64 {}

impl PartialOrd for OrderedF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrderedF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}
