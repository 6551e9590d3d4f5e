//! Operator identities measured on a battery of interior test signals.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ops::{apply_hankel, apply_whh, apply_wiener_hopf, ExtensionMode, ReflexiveInverse};
use super::{GridSpec, MultiplierSpec, OperatorError, Signal};
use crate::factorization::AsymmetricFactorization;

/// Default pass threshold for identity residuals.
pub const IDENTITY_THRESHOLD: f64 = 1e-5;
/// Default battery seed.
pub const DEFAULT_SEED: u64 = 42;

const DETERMINISTIC: usize = 8;
const RANDOM: usize = 8;
/// Positions below are given for `T = 200` and scaled with `T`.
const REFERENCE_T: f64 = 200.0;

fn gauss(c: f64, s: f64) -> impl Fn(f64) -> f64 {
    move |x| (-0.5 * ((x - c) / s).powi(2)).exp()
}

/// Deterministic plus the seeded random test signals. All are supported in
/// `[0, T/4]` and negligible (< 1e-13) near both ends of that interval.
pub fn battery(grid: &GridSpec, seed: u64) -> Vec<Signal> {
    let s = grid.half_length() / REFERENCE_T;
    let g = |c: f64, w: f64| gauss(c * s, w * s);
    let raised_cosine = move |c: f64, w: f64| {
        move |x: f64| {
            let u = (x - c * s) / (w * s);
            if u.abs() < 1.0 {
                (0.5 * (1.0 + (PI * u).cos())).powi(4)
            } else {
                0.0
            }
        }
    };
    let poly_bump = move |c: f64, w: f64| {
        move |x: f64| {
            let u = (x - c * s) / (w * s);
            if u.abs() < 1.0 {
                (1.0 - u * u).powi(6)
            } else {
                0.0
            }
        }
    };
    let re = |v: f64| Complex64::new(v, 0.0);

    let mut out: Vec<Signal> = Vec::with_capacity(DETERMINISTIC + RANDOM);
    let plus = |f: &dyn Fn(f64) -> Complex64| Signal::plus_from_fn(*grid, f);
    out.push(plus(&|x| re(g(25.0, 2.0)(x))));
    out.push(plus(&|x| re(g(30.0, 2.25)(x))));
    out.push(plus(&|x| re(g(20.0, 1.25)(x))));
    out.push(plus(&|x| g(28.0, 2.5)(x) * Complex64::cis(1.3 * x / s)));
    out.push(plus(&|x| re(raised_cosine(25.0, 10.0)(x))));
    out.push(plus(&|x| re(poly_bump(30.0, 12.0)(x))));
    out.push(plus(&|x| {
        re(g(18.0, 1.5)(x)) - Complex64::new(0.0, 0.6) * g(36.0, 1.5)(x)
    }));
    out.push(plus(&|x| re((x / s - 30.0) / 2.0 * g(30.0, 2.0)(x))));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM {
        let bumps: Vec<(f64, f64, Complex64)> = (0..3)
            .map(|_| {
                let c: f64 = rng.random_range(15.0..35.0);
                let wmax = (c / 8.0).min((50.0 - c) / 8.0).min(2.5);
                let w = rng.random_range(1.0..wmax);
                let a = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                (c, w, a)
            })
            .collect();
        out.push(plus(&|x| bumps.iter().map(|&(c, w, a)| a * g(c, w)(x)).sum()));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CheckKind {
    /// `WH_{φψ} = WH_φ ℓ₀ WH_ψ + H_φ ℓ₀ WH_{ψ̃−ψ}`
    EqSeg,
    /// `WH_{φψ} = WH_φ ℓ₀ WH_ψ` for `φ ∈ H∞₋` or `ψ` even
    Eq6,
    /// `WH_{φψχ} = WH_φ ℓ₀ WH_ψ ℓ₀ WH_χ = W_φ ℓ₀ WH_ψ ℓ₀ WH_χ`
    Prop31,
    /// `WH_{φe} ℓ₀ WH_{φe⁻¹} ℓ₀ = I` and the reverse product
    Prop32,
    /// `WH_φ WH_φ⁻ = I` for `λ ≤ 0`
    Thm52Right,
    /// `WH_φ⁻ WH_φ = I` for `λ ≥ 0`
    Thm52Left,
    /// both, for `λ = 0`
    Thm52TwoSided,
    /// `H_φ = 0` for spectrum in `(-∞, 0]`
    HankelVanishing,
    /// `WH_φ⁻` is the same for `ℓ = ℓ₀` and `ℓ = ℓ^e`
    ExtensionIndependence,
}

impl CheckKind {
    pub const ALL: [CheckKind; 9] = [
        CheckKind::EqSeg,
        CheckKind::Eq6,
        CheckKind::Prop31,
        CheckKind::Prop32,
        CheckKind::Thm52Right,
        CheckKind::Thm52Left,
        CheckKind::Thm52TwoSided,
        CheckKind::HankelVanishing,
        CheckKind::ExtensionIndependence,
    ];
}

/// Inputs of a check.
#[derive(Debug, Clone)]
pub enum Identity {
    EqSeg {
        phi: MultiplierSpec,
        psi: MultiplierSpec,
    },
    Eq6 {
        phi: MultiplierSpec,
        psi: MultiplierSpec,
    },
    Prop31 {
        phi: MultiplierSpec,
        psi: MultiplierSpec,
        chi: MultiplierSpec,
    },
    Prop32 {
        even: MultiplierSpec,
    },
    Thm52Right(AsymmetricFactorization),
    Thm52Left(AsymmetricFactorization),
    Thm52TwoSided(AsymmetricFactorization),
    HankelVanishing {
        m: MultiplierSpec,
    },
    ExtensionIndependence(AsymmetricFactorization),
}

impl Identity {
    pub fn kind(&self) -> CheckKind {
        match self {
            Identity::EqSeg { .. } => CheckKind::EqSeg,
            Identity::Eq6 { .. } => CheckKind::Eq6,
            Identity::Prop31 { .. } => CheckKind::Prop31,
            Identity::Prop32 { .. } => CheckKind::Prop32,
            Identity::Thm52Right(_) => CheckKind::Thm52Right,
            Identity::Thm52Left(_) => CheckKind::Thm52Left,
            Identity::Thm52TwoSided(_) => CheckKind::Thm52TwoSided,
            Identity::HankelVanishing { .. } => CheckKind::HankelVanishing,
            Identity::ExtensionIndependence(_) => CheckKind::ExtensionIndependence,
        }
    }

    pub fn symbols(&self) -> Vec<String> {
        let af_text = |af: &AsymmetricFactorization| {
            vec![
                format!("minus = {}", MultiplierSpec::Apw(af.minus().clone())),
                format!("index = {}", af.index()),
                format!("even = {}", af.even()),
            ]
        };
        match self {
            Identity::EqSeg { phi, psi } | Identity::Eq6 { phi, psi } => vec![phi.to_string(), psi.to_string()],
            Identity::Prop31 { phi, psi, chi } => vec![phi.to_string(), psi.to_string(), chi.to_string()],
            Identity::Prop32 { even } => vec![even.to_string()],
            Identity::HankelVanishing { m } => vec![m.to_string()],
            Identity::Thm52Right(af)
            | Identity::Thm52Left(af)
            | Identity::Thm52TwoSided(af)
            | Identity::ExtensionIndependence(af) => af_text(af),
        }
    }

    fn check_hypotheses(&self) -> Result<(), OperatorError> {
        let fail = |msg: &str| Err(OperatorError::HypothesisViolated(msg.to_string()));
        match self {
            Identity::EqSeg { .. } | Identity::ExtensionIndependence(_) => Ok(()),
            Identity::Eq6 { phi, psi } => {
                if phi.is_minus_type() || psi.is_even() {
                    Ok(())
                } else {
                    fail("Eq6 needs a left factor with spectrum in (-∞, 0] or an even right factor")
                }
            }
            Identity::Prop31 { phi, chi, .. } => {
                if !phi.is_minus_type() {
                    fail("Prop31 needs a left factor with spectrum in (-∞, 0]")
                } else if !chi.is_even() {
                    fail("Prop31 needs an even right factor")
                } else {
                    Ok(())
                }
            }
            Identity::Prop32 { even } => {
                if even.is_even() {
                    Ok(())
                } else {
                    fail("Prop32 needs an even symbol")
                }
            }
            Identity::HankelVanishing { m } => {
                if m.is_minus_type() {
                    Ok(())
                } else {
                    fail("Hankel vanishing needs spectrum in (-∞, 0]")
                }
            }
            Identity::Thm52Right(af) if af.index() > 0.0 => fail("right inverse needs index ≤ 0"),
            Identity::Thm52Left(af) if af.index() < 0.0 => fail("left inverse needs index ≥ 0"),
            Identity::Thm52TwoSided(af) if af.index() != 0.0 => fail("two-sided inverse needs index 0"),
            _ => Ok(()),
        }
    }
}

/// Per-signal residual map `g ↦ ‖LHS g − RHS g‖ / ‖g‖` on the window.
type Residual<'a> = Box<dyn Fn(&Signal) -> Result<f64, OperatorError> + Sync + 'a>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub check: CheckKind,
    pub symbols: Vec<String>,
    pub grid: GridSpec,
    /// Worst relative residual over the battery.
    pub residual: f64,
    pub per_signal: Vec<f64>,
    pub threshold: f64,
    pub passed: bool,
}

/// Runs `identity` over `battery`, measuring residuals on `(0, T/2]`.
pub fn identity_residual(
    identity: &Identity,
    grid: &GridSpec,
    battery: &[Signal],
    threshold: f64,
) -> Result<ResidualReport, OperatorError> {
    identity.check_hypotheses()?;
    let window = 0.5 * grid.half_length();
    let rel = move |diff: Signal, g: &Signal| diff.window_norm(0.0, window) / g.window_norm(0.0, window);
    let prep = |m: &MultiplierSpec| m.prepare(grid);

    let residual: Residual = match identity {
        Identity::EqSeg { phi, psi } => {
            let (a, b) = (prep(phi)?, prep(psi)?);
            let ab = a.mul(&b);
            let odd = b.reflect().sub(&b);
            Box::new(move |g| {
                let lhs = apply_whh(&ab, g)?;
                let rhs = apply_whh(&a, &apply_whh(&b, g)?)?.add(&apply_hankel(&a, &apply_whh(&odd, g)?)?)?;
                Ok(rel(lhs.sub(&rhs)?, g))
            })
        }
        Identity::Eq6 { phi, psi } => {
            let (a, b) = (prep(phi)?, prep(psi)?);
            let ab = a.mul(&b);
            Box::new(move |g| {
                let lhs = apply_whh(&ab, g)?;
                let rhs = apply_whh(&a, &apply_whh(&b, g)?)?;
                Ok(rel(lhs.sub(&rhs)?, g))
            })
        }
        Identity::Prop31 { phi, psi, chi } => {
            let (a, b, c) = (prep(phi)?, prep(psi)?, prep(chi)?);
            let abc = a.mul(&b).mul(&c);
            Box::new(move |g| {
                let lhs = apply_whh(&abc, g)?;
                let inner = apply_whh(&b, &apply_whh(&c, g)?)?;
                let r1 = apply_whh(&a, &inner)?;
                let r2 = apply_wiener_hopf(&a, &inner)?;
                Ok(rel(lhs.sub(&r1)?, g).max(rel(lhs.sub(&r2)?, g)))
            })
        }
        Identity::Prop32 { even } => {
            let e = prep(even)?;
            let inv = e.inverse()?;
            Box::new(move |g| {
                let right = apply_whh(&e, &apply_whh(&inv, g)?)?;
                let left = apply_whh(&inv, &apply_whh(&e, g)?)?;
                Ok(rel(right.sub(g)?, g).max(rel(left.sub(g)?, g)))
            })
        }
        Identity::HankelVanishing { m } => {
            let a = prep(m)?;
            Box::new(move |g| Ok(rel(apply_hankel(&a, g)?, g)))
        }
        Identity::Thm52Right(af) | Identity::Thm52Left(af) | Identity::Thm52TwoSided(af) => {
            let op = prep(&MultiplierSpec::from(af.symbol()))?;
            let inv = ReflexiveInverse::new(af, grid)?;
            let (right, left) = match identity.kind() {
                CheckKind::Thm52Right => (true, false),
                CheckKind::Thm52Left => (false, true),
                _ => (true, true),
            };
            Box::new(move |g| {
                let mut worst: f64 = 0.0;
                if right {
                    let out = apply_whh(&op, &inv.apply(g, ExtensionMode::Zero)?)?;
                    worst = worst.max(rel(out.sub(g)?, g));
                }
                if left {
                    let out = inv.apply(&apply_whh(&op, g)?, ExtensionMode::Zero)?;
                    worst = worst.max(rel(out.sub(g)?, g));
                }
                Ok(worst)
            })
        }
        Identity::ExtensionIndependence(af) => {
            let inv = ReflexiveInverse::new(af, grid)?;
            Box::new(move |g| {
                let zero = inv.apply(g, ExtensionMode::Zero)?;
                let even = inv.apply(g, ExtensionMode::Even)?;
                Ok(rel(zero.sub(&even)?, g))
            })
        }
    };

    let per_signal = battery
        .par_iter()
        .map(|g| {
            g.expect_plus()?;
            if g.grid() != grid {
                return Err(OperatorError::GridMismatch);
            }
            residual(g)
        })
        .collect::<Result<Vec<f64>, _>>()?;
    let worst = per_signal.iter().copied().fold(0.0, f64::max);
    Ok(ResidualReport {
        check: identity.kind(),
        symbols: identity.symbols(),
        grid: *grid,
        residual: worst,
        per_signal,
        threshold,
        passed: worst <= threshold,
    })
}
