//! Mean motion by phase unwrapping.
//!
//! `κ(φ) = lim (arg φ(T) − arg φ(−T)) / 2T` for any continuous argument. The
//! estimate averages the quotients at `T` and `2T`; the bounded oscillating
//! part of the argument contributes `O(1/T)` to each.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use super::{ApwElement, ApwError, ZERO_MODULUS};
use crate::pointwise::PointwiseSymbol;

/// Hard ceiling on sample count.
const MAX_SAMPLES: usize = 1 << 24;
/// Samples per unit length per unit of bandwidth, relative to π.
const OVERSAMPLING: f64 = 64.0;

#[derive(Debug, Clone, Copy)]
pub struct MeanMotionConfig {
    pub horizon: f64,
    pub min_samples: usize,
}

impl Default for MeanMotionConfig {
    fn default() -> Self {
        Self {
            horizon: 200.0,
            min_samples: 1 << 14,
        }
    }
}

impl MeanMotionConfig {
    /// Sample count over `[-2T, 2T]`, of the form `4m + 1` so that `±T` are
    /// grid nodes.
    fn sample_count(&self, bandwidth: f64) -> usize {
        // 64·bw·T/π on [−T, T], hence twice that on [−2T, 2T]
        let needed = (2.0 * OVERSAMPLING * bandwidth * self.horizon / PI).ceil() as usize;
        let n = needed.max(self.min_samples).clamp(64, MAX_SAMPLES);
        4 * n.div_ceil(4) + 1
    }
}

pub(super) fn mean_motion_apw(a: &ApwElement, cfg: &MeanMotionConfig) -> Result<f64, ApwError> {
    if a.is_empty() {
        return Err(ApwError::WindingUndefined { min_modulus: 0.0 });
    }
    mean_motion_of(a, a.effective_bandwidth(1e-12), cfg)
}

/// Mean motion of an arbitrary sampled symbol whose phase varies no faster
/// than `bandwidth` radians per unit length (up to the modulus floor).
pub fn mean_motion_of<F: PointwiseSymbol>(f: &F, bandwidth: f64, cfg: &MeanMotionConfig) -> Result<f64, ApwError> {
    let t = cfg.horizon;
    let n = cfg.sample_count(bandwidth.max(1.0));
    let dx = 4.0 * t / (n - 1) as f64;
    let values = sample_parallel(f, -2.0 * t, dx, n)?;
    let phase = unwrap_phase(&values)?;
    let m = (n - 1) / 4;
    let k_t = (phase[3 * m] - phase[m]) / (2.0 * t);
    let k_2t = (phase[4 * m] - phase[0]) / (4.0 * t);
    Ok(0.5 * (k_t + k_2t))
}

fn sample_parallel<F: PointwiseSymbol>(f: &F, x0: f64, dx: f64, n: usize) -> Result<Vec<Complex64>, ApwError> {
    const CHUNK: usize = 1 << 14;
    let chunks: Vec<_> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let len = CHUNK.min(n - start);
            f.sample_uniform(x0 + start as f64 * dx, dx, len)
        })
        .collect::<Result<_, _>>()?;
    Ok(chunks.concat())
}

/// Continuous argument along the samples. Fails when a sample is (numerically)
/// zero or when consecutive samples differ in phase by more than π/2.
pub fn unwrap_phase(values: &[Complex64]) -> Result<Vec<f64>, ApwError> {
    let min_modulus = values.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    if !(min_modulus > ZERO_MODULUS) {
        return Err(ApwError::WindingUndefined { min_modulus });
    }
    let mut out = Vec::with_capacity(values.len());
    let mut acc = values.first().map_or(0.0, |z| z.arg());
    out.push(acc);
    for w in values.windows(2) {
        let step = (w[1] / w[0]).arg();
        if step.abs() > FRAC_PI_2 {
            return Err(ApwError::AliasRisk { step });
        }
        acc += step;
        out.push(acc);
    }
    Ok(out)
}
