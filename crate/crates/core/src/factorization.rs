//! Right, asymmetric and antisymmetric AP factorizations.
//!
//! * right: `φ = φ₋ e_λ φ₊` with `φ₋ ∈ 𝒢AP⁻`, `φ₊ ∈ 𝒢AP⁺`;
//! * asymmetric: `φ = φ₋ e_λ φ_e` with `φ_e` even and invertible;
//! * antisymmetric: `φφ̃⁻¹ = φ₋ e_{2λ} φ̃₋⁻¹`.
//!
//! Class memberships are certified numerically: spectrum sign for AP^±,
//! series inversion or a modulus/mean-motion test for invertibility, and
//! sampled symmetry for evenness. The index is always an exact real taken
//! from a construction; mean motion is only ever a cross-check.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::apw::{mean_motion_of, modulus_lower_bound, ApwElement, ApwError, MeanMotionConfig, ZERO_MODULUS};
use crate::operator::GridSpec;
use crate::pointwise::{evenness_defect, DomainError, PointwiseSymbol, ReflectionQuotient};
use crate::symbol::LoweredSymbol;

/// Mean-motion agreement required for index resolution and cross-checks.
pub const MEAN_MOTION_TOL: f64 = 0.05;
/// Relative tolerance of the sampled evenness certificate.
pub const EVENNESS_TOL: f64 = 1e-9;
/// Residual a constructed factorization must reach on its check grid.
pub const FACTORIZE_TOL: f64 = 1e-8;

/// Symmetric sample points `x_k`, the certificate compares `f(x_k)` with
/// `f(-x_k)`.
const EVENNESS_POINTS: usize = 100;
const EVENNESS_RANGE: f64 = 50.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FactorizationError {
    #[error("{factor} factor is not of {class} type")]
    WrongClass { factor: &'static str, class: &'static str },
    #[error("recovering the even factor of an antisymmetric factorization needs the symbol")]
    SymbolRequired,
    #[error("{0} factor is not invertible")]
    NotInvertible(&'static str),
    #[error("index must be finite, got {0}")]
    InvalidIndex(f64),
    #[error("factorization is not canonical (index {index})")]
    NotCanonical { index: f64 },
    #[error("even factor fails the evenness certificate (defect {defect:e})")]
    EvennessViolated { defect: f64 },
    #[error("mean motion {estimate:.4} does not resolve to a spectral frequency")]
    NonRepresentableIndex { estimate: f64 },
    #[error("symbol is not log-amenable: {0}")]
    LogNotAmenable(String),
    #[error("factorization residual {residual:e} exceeds {tolerance:e}")]
    ResidualTooLarge { residual: f64, tolerance: f64 },
    #[error("mean-motion cross-check {estimate:.4} disagrees with index {index}")]
    CrossCheckFailed { estimate: f64, index: f64 },
    #[error(transparent)]
    Apw(ApwError),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

impl From<ApwError> for FactorizationError {
    fn from(e: ApwError) -> Self {
        match e {
            ApwError::LogNotAmenable(why) => FactorizationError::LogNotAmenable(why.to_string()),
            ApwError::Domain(d) => FactorizationError::Domain(d),
            other => FactorizationError::Apw(other),
        }
    }
}

type Result<T> = std::result::Result<T, FactorizationError>;

fn check_index(index: f64) -> Result<()> {
    if index.is_finite() {
        Ok(())
    } else {
        Err(FactorizationError::InvalidIndex(index))
    }
}

/// `φ₋ ∈ 𝒢AP⁻`: spectrum in `(-∞, 0]` and invertible within AP⁻.
///
/// A series inverse that itself lies in AP⁻ settles it. Failing that, an element of AP⁻ whose
/// top frequency is 0, whose modulus stays away from zero and whose mean
/// motion vanishes is invertible in AP⁻.
fn certify_minus(minus: &ApwElement, factor: &'static str) -> Result<()> {
    if !minus.is_minus_type() {
        return Err(FactorizationError::WrongClass { factor, class: "AP⁻" });
    }
    if minus.invert().is_ok_and(|inv| inv.is_minus_type()) {
        return Ok(());
    }
    let top_at_zero = minus.max_freq().is_some_and(|f| f.abs() <= crate::apw::FREQ_MERGE_TOL);
    let kappa = minus.mean_motion(200.0, 1 << 14);
    match kappa {
        Ok(k) if top_at_zero && k.abs() <= MEAN_MOTION_TOL => Ok(()),
        _ => Err(FactorizationError::NotInvertible(factor)),
    }
}

fn certify_plus(plus: &ApwElement) -> Result<()> {
    certify_minus(&plus.reflect(), "plus").map_err(|e| match e {
        FactorizationError::WrongClass { .. } => FactorizationError::WrongClass {
            factor: "plus",
            class: "AP⁺",
        },
        other => other,
    })
}

fn evenness_points() -> Vec<f64> {
    (0..EVENNESS_POINTS)
        .map(|k| EVENNESS_RANGE * (k as f64 + 0.5) / EVENNESS_POINTS as f64)
        .collect()
}

/// Sampled evenness defect `max |f(x) − f(−x)| / (1 + |f(x)|)`.
pub fn sampled_evenness_defect<F: PointwiseSymbol>(f: &F) -> std::result::Result<f64, DomainError> {
    evenness_defect(f, &evenness_points())
}

/// Smallest `|f|` over the window of `grid`.
///
/// Samples at the nodes, then refines every local minimum by golden-section
/// search between its neighbours, so that smooth zeros falling between
/// nodes are not missed.
pub fn grid_min_modulus<F: PointwiseSymbol>(f: &F, grid: &GridSpec) -> std::result::Result<f64, DomainError> {
    let (x0, h) = (grid.x(0), grid.spacing());
    let vals: Vec<f64> = f
        .sample_uniform(x0, h, grid.points())?
        .iter()
        .map(|z| z.norm())
        .collect();
    let mut best = vals.iter().copied().fold(f64::INFINITY, f64::min);
    for k in 1..vals.len().saturating_sub(1) {
        if vals[k] <= vals[k - 1] && vals[k] <= vals[k + 1] {
            let x = x0 + k as f64 * h;
            best = best.min(golden_min(|t| f.value_at(t).map(|z| z.norm()), x - h, x + h)?);
        }
    }
    Ok(best)
}

fn golden_min(
    g: impl Fn(f64) -> std::result::Result<f64, DomainError>,
    mut a: f64,
    mut b: f64,
) -> std::result::Result<f64, DomainError> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut gc, mut gd) = (g(c)?, g(d)?);
    for _ in 0..60 {
        if gc < gd {
            (b, d, gd) = (d, c, gc);
            c = b - INV_PHI * (b - a);
            gc = g(c)?;
        } else {
            (a, c, gc) = (c, d, gd);
            d = a + INV_PHI * (b - a);
            gd = g(d)?;
        }
    }
    Ok(gc.min(gd))
}

fn default_check_grid() -> GridSpec {
    GridSpec::new(200.0, 1 << 13).expect("valid constant grid")
}

fn certify_even(even: &LoweredSymbol) -> Result<()> {
    let defect = sampled_evenness_defect(even)?;
    if !(defect <= EVENNESS_TOL) {
        return Err(FactorizationError::EvennessViolated { defect });
    }
    // plain sampling cannot see isolated zeros of the APW part
    let apw_ok = even
        .apw_part()
        .is_none_or(|a| modulus_lower_bound(a, 200.0) > ZERO_MODULUS || a.invert().is_ok());
    if !apw_ok || !(grid_min_modulus(even, &default_check_grid())? >= ZERO_MODULUS) {
        return Err(FactorizationError::NotInvertible("even"));
    }
    Ok(())
}

/// `φ = φ₋ e_λ φ₊`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RightRepr")]
pub struct RightApFactorization {
    index: f64,
    minus: ApwElement,
    plus: ApwElement,
}

#[derive(Deserialize)]
struct RightRepr {
    index: f64,
    minus: ApwElement,
    plus: ApwElement,
}

impl TryFrom<RightRepr> for RightApFactorization {
    type Error = FactorizationError;
    fn try_from(r: RightRepr) -> Result<Self> {
        Self::new(r.minus, r.index, r.plus)
    }
}

impl RightApFactorization {
    pub fn new(minus: ApwElement, index: f64, plus: ApwElement) -> Result<Self> {
        check_index(index)?;
        certify_minus(&minus, "minus")?;
        certify_plus(&plus)?;
        Ok(Self { index, minus, plus })
    }

    pub fn minus(&self) -> &ApwElement {
        &self.minus
    }

    pub fn index(&self) -> f64 {
        self.index
    }

    pub fn plus(&self) -> &ApwElement {
        &self.plus
    }

    /// `φ₋ e_λ φ₊`.
    pub fn symbol(&self) -> ApwElement {
        self.minus.mul(&self.plus).shift(self.index)
    }
}

/// `φ = φ₋ e_λ φ_e`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AsymmetricRepr")]
pub struct AsymmetricFactorization {
    index: f64,
    minus: ApwElement,
    even: LoweredSymbol,
}

#[derive(Deserialize)]
struct AsymmetricRepr {
    index: f64,
    minus: ApwElement,
    even: LoweredSymbol,
}

impl TryFrom<AsymmetricRepr> for AsymmetricFactorization {
    type Error = FactorizationError;
    fn try_from(r: AsymmetricRepr) -> Result<Self> {
        Self::new(r.minus, r.index, r.even)
    }
}

impl AsymmetricFactorization {
    pub fn new(minus: ApwElement, index: f64, even: LoweredSymbol) -> Result<Self> {
        check_index(index)?;
        certify_minus(&minus, "minus")?;
        certify_even(&even)?;
        Ok(Self { index, minus, even })
    }

    pub fn minus(&self) -> &ApwElement {
        &self.minus
    }

    pub fn index(&self) -> f64 {
        self.index
    }

    pub fn even(&self) -> &LoweredSymbol {
        &self.even
    }

    /// `φ₋ e_λ φ_e` as a lowered symbol.
    pub fn symbol(&self) -> LoweredSymbol {
        self.even.mul_apw(&self.minus.shift(self.index))
    }
}

/// `φφ̃⁻¹ = φ₋ e_{2λ} φ̃₋⁻¹`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AntisymmetricRepr")]
pub struct AntisymmetricFactorization {
    index: f64,
    minus: ApwElement,
}

#[derive(Deserialize)]
struct AntisymmetricRepr {
    index: f64,
    minus: ApwElement,
}

impl TryFrom<AntisymmetricRepr> for AntisymmetricFactorization {
    type Error = FactorizationError;
    fn try_from(r: AntisymmetricRepr) -> Result<Self> {
        Self::new(r.minus, r.index)
    }
}

impl AntisymmetricFactorization {
    pub fn new(minus: ApwElement, index: f64) -> Result<Self> {
        check_index(index)?;
        certify_minus(&minus, "minus")?;
        Ok(Self { index, minus })
    }

    pub fn minus(&self) -> &ApwElement {
        &self.minus
    }

    pub fn index(&self) -> f64 {
        self.index
    }

    /// Value of `φ₋(x) e^{2iλx} / φ₋(−x)`.
    pub fn quotient_at(&self, x: f64) -> Complex64 {
        self.minus.eval(x) * Complex64::cis(2.0 * self.index * x) / self.minus.eval(-x)
    }
}

/// Any of the three kinds, tagged by `"kind"` in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Factorization {
    Right(RightApFactorization),
    Asymmetric(AsymmetricFactorization),
    Antisymmetric(AntisymmetricFactorization),
}

impl Factorization {
    pub fn index(&self) -> f64 {
        match self {
            Factorization::Right(f) => f.index,
            Factorization::Asymmetric(f) => f.index,
            Factorization::Antisymmetric(f) => f.index,
        }
    }

    /// The asymmetric form, converting right factorizations. Antisymmetric
    /// ones need the symbol itself, see [`asymmetric_from_antisymmetric`].
    pub fn to_asymmetric(&self, symbol: Option<&LoweredSymbol>) -> Result<AsymmetricFactorization> {
        match self {
            Factorization::Right(rf) => asymmetric_from_right(rf),
            Factorization::Asymmetric(af) => Ok(af.clone()),
            Factorization::Antisymmetric(anf) => match symbol {
                Some(phi) => asymmetric_from_antisymmetric(anf, phi),
                None => Err(FactorizationError::SymbolRequired),
            },
        }
    }
}

/// `φ₋ = φ₋' φ̃₊⁻¹`, `φ_e = φ̃₊ φ₊`.
pub fn asymmetric_from_right(rf: &RightApFactorization) -> Result<AsymmetricFactorization> {
    let plus_inv = rf.plus.invert()?;
    let minus = rf.minus.mul(&plus_inv.reflect());
    let even = rf.plus.reflect().mul(&rf.plus);
    AsymmetricFactorization::new(minus, rf.index, LoweredSymbol::from_apw(even))
}

/// The quotient `φφ̃⁻¹` factors with the same minus factor and index.
pub fn antisymmetric_of_quotient(af: &AsymmetricFactorization) -> AntisymmetricFactorization {
    AntisymmetricFactorization {
        index: af.index,
        minus: af.minus.clone(),
    }
}

/// Residual of `anf` as a factorization of `φφ̃⁻¹`: the Wiener norm of the
/// difference when `φ` is an APW element with a series inverse, otherwise
/// the relative sup over `grid`.
pub fn antisymmetric_residual(anf: &AntisymmetricFactorization, phi: &LoweredSymbol, grid: &GridSpec) -> Result<f64> {
    if let Some(a) = phi.as_apw() {
        if let (Ok(a_inv), Ok(m_inv)) = (a.reflect().invert(), anf.minus.reflect().invert()) {
            let lhs = a.mul(&a_inv);
            let rhs = anf.minus.mul(&m_inv).shift(2.0 * anf.index);
            return Ok(lhs.distance(&rhs));
        }
    }
    let quotient = ReflectionQuotient(phi);
    let mut worst: f64 = 0.0;
    for x in grid.nodes() {
        let q = quotient.value_at(x)?;
        worst = worst.max((q - anf.quotient_at(x)).norm() / (1.0 + q.norm()));
    }
    Ok(worst)
}

/// `φ_e = e_{−λ} ψ₋⁻¹ φ`, checked to be even.
pub fn asymmetric_from_antisymmetric(
    anf: &AntisymmetricFactorization,
    phi: &LoweredSymbol,
) -> Result<AsymmetricFactorization> {
    let minus_inv = anf.minus.invert()?;
    let even = phi.mul_apw(&minus_inv.shift(-anf.index));
    let even = match (even.apw_part(), even.pointwise_part()) {
        // drop series round-off from a part that cancelled to a constant
        (Some(a), Some(p)) if a.distance(&ApwElement::constant(a.mean_value(0.0))) <= FACTORIZE_TOL => {
            LoweredSymbol::new(Some(ApwElement::constant(a.mean_value(0.0))), Some(p.clone()))
        }
        _ => even,
    };
    AsymmetricFactorization::new(anf.minus.clone(), anf.index, even)
}

/// Rescales so that `log φ₋` has no constant term; `γ = exp` of that term
/// moves into the even factor.
pub fn normalize(af: &AsymmetricFactorization) -> Result<AsymmetricFactorization> {
    let log = af.minus.log()?;
    let gamma = log.mean_value(0.0).exp();
    Ok(AsymmetricFactorization {
        index: af.index,
        minus: af.minus.scale(gamma.inv()),
        even: af.even.scale(gamma),
    })
}

/// Outcome of [`verify`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    /// `max |φ − φ₋ e_λ φ_e| / (1 + |φ|)` over the grid; infinite when a
    /// sample could not be evaluated.
    pub residual: f64,
    pub minus_certified: bool,
    pub even_defect: f64,
    pub even_min_modulus: f64,
}

impl Verification {
    pub fn passed(&self, tolerance: f64) -> bool {
        self.residual <= tolerance
            && self.minus_certified
            && self.even_defect <= EVENNESS_TOL
            && self.even_min_modulus >= ZERO_MODULUS
    }
}

/// Checks `φ = φ₋ e_λ φ_e` on the nodes of `grid` and re-certifies the
/// factor classes.
pub fn verify(phi: &LoweredSymbol, af: &AsymmetricFactorization, grid: &GridSpec) -> Verification {
    let rebuilt = af.symbol();
    let (x0, dx, n) = (grid.x(0), grid.spacing(), grid.points());
    let residual = match (phi.sample_uniform(x0, dx, n), rebuilt.sample_uniform(x0, dx, n)) {
        (Ok(a), Ok(b)) => a
            .iter()
            .zip(&b)
            .map(|(p, q)| (p - q).norm() / (1.0 + p.norm()))
            .fold(0.0, f64::max),
        _ => f64::INFINITY,
    };
    Verification {
        residual,
        minus_certified: certify_minus(&af.minus, "minus").is_ok(),
        even_defect: sampled_evenness_defect(&af.even).unwrap_or(f64::INFINITY),
        even_min_modulus: grid_min_modulus(&af.even, grid).unwrap_or(0.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    RightInvertibleProperlyRightFredholm,
    LeftInvertibleProperlyLeftFredholm,
    Invertible,
}

impl Verdict {
    pub fn from_index(index: f64) -> Self {
        if index < 0.0 {
            Verdict::RightInvertibleProperlyRightFredholm
        } else if index > 0.0 {
            Verdict::LeftInvertibleProperlyLeftFredholm
        } else {
            Verdict::Invertible
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub index: f64,
    pub verdict: Verdict,
    /// `κ(φφ̃⁻¹)/2` when computed.
    pub mean_motion_crosscheck: Option<f64>,
}

/// Trichotomy for `WH_φ` by the sign of the exact index.
pub fn classify(af: &AsymmetricFactorization) -> ClassificationReport {
    ClassificationReport {
        index: af.index,
        verdict: Verdict::from_index(af.index),
        mean_motion_crosscheck: None,
    }
}

/// [`classify`] plus `κ(φφ̃⁻¹)/2` of the reconstructed symbol, which must
/// match the index within [`MEAN_MOTION_TOL`].
pub fn classify_with_crosscheck(af: &AsymmetricFactorization, cfg: &MeanMotionConfig) -> Result<ClassificationReport> {
    let kappa = quotient_mean_motion(&af.symbol(), af.bandwidth(), cfg)?;
    if (kappa - af.index).abs() > MEAN_MOTION_TOL {
        return Err(FactorizationError::CrossCheckFailed {
            estimate: kappa,
            index: af.index,
        });
    }
    Ok(ClassificationReport {
        mean_motion_crosscheck: Some(kappa),
        ..classify(af)
    })
}

/// `κ(φφ̃⁻¹)/2` by sampling the quotient pointwise.
pub fn quotient_mean_motion(phi: &LoweredSymbol, bandwidth: f64, cfg: &MeanMotionConfig) -> Result<f64> {
    Ok(0.5 * mean_motion_of(&ReflectionQuotient(phi), 2.0 * bandwidth, cfg)?)
}

impl AsymmetricFactorization {
    /// Phase bandwidth estimate of `φ₋ e_λ` and of the APW part of `φ_e`.
    fn bandwidth(&self) -> f64 {
        let even = self.even.apw_part().map_or(0.0, |a| a.effective_bandwidth(1e-12));
        self.minus.effective_bandwidth(1e-12) + self.index.abs() + even
    }
}

/// Coburn–Douglas trichotomy for `W_φ` by the sign of `κ(φ)`.
pub fn classify_wiener_hopf(phi: &ApwElement, cfg: &MeanMotionConfig) -> Result<ClassificationReport> {
    let kappa = phi.mean_motion(cfg.horizon, cfg.min_samples)?;
    let index = if kappa.abs() <= MEAN_MOTION_TOL { 0.0 } else { kappa };
    Ok(ClassificationReport {
        index,
        verdict: Verdict::from_index(index),
        mean_motion_crosscheck: Some(kappa),
    })
}

/// A canonical right factorization yields an invertible `WH_φ`.
pub fn transfer_invertibility(rf: &RightApFactorization) -> Result<ClassificationReport> {
    if rf.index != 0.0 {
        return Err(FactorizationError::NotCanonical { index: rf.index });
    }
    Ok(classify(&asymmetric_from_right(rf)?))
}

/// Frequency of the spectrum nearest to the mean motion of `phi`.
fn resolve_index(phi: &ApwElement, cfg: &MeanMotionConfig) -> Result<f64> {
    let kappa = phi.mean_motion(cfg.horizon, cfg.min_samples)?;
    phi.spectrum()
        .into_iter()
        .min_by(|a, b| (a - kappa).abs().total_cmp(&(b - kappa).abs()))
        .filter(|f| (f - kappa).abs() <= MEAN_MOTION_TOL)
        .ok_or(FactorizationError::NonRepresentableIndex { estimate: kappa })
}

/// Factorizes `φ = e_κ e^ψ` with `ψ` a convergent logarithm.
///
/// `ψ = ψ₋ + ψ₀ + ψ₊` by spectrum sign gives the right factorization
/// `(e^{ψ₋}, κ, e^{ψ₀+ψ₊})`; its asymmetric form is computed directly in
/// the exponent, `φ₋ = e^{ψ₋ − ψ₀ − ψ̃₊}`, `φ_e = e^{ψ̃₊ + 2ψ₀ + ψ₊}`.
pub fn factorize_log_amenable(phi: &ApwElement) -> Result<AsymmetricFactorization> {
    factorize_log_amenable_with(phi, &MeanMotionConfig::default())
}

pub fn factorize_log_amenable_with(phi: &ApwElement, cfg: &MeanMotionConfig) -> Result<AsymmetricFactorization> {
    let (index, psi) = log_split(phi, cfg)?;
    let (minus_exp, plus_exp) = (psi.negative_part(), psi.positive_part());
    let psi0 = ApwElement::constant(psi.mean_value(0.0));
    let minus = minus_exp.sub(&psi0).sub(&plus_exp.reflect()).exp()?;
    let even = plus_exp
        .reflect()
        .add(&psi0.scale(Complex64::new(2.0, 0.0)))
        .add(&plus_exp)
        .exp()?;
    let af = AsymmetricFactorization::new(minus, index, LoweredSymbol::from_apw(even))?;
    check_residual(&LoweredSymbol::from_apw(phi.clone()), &af)?;
    Ok(af)
}

/// The right factorization produced by the same logarithm split.
pub fn right_factorize_log_amenable(phi: &ApwElement) -> Result<RightApFactorization> {
    let (index, psi) = log_split(phi, &MeanMotionConfig::default())?;
    let psi0 = ApwElement::constant(psi.mean_value(0.0));
    RightApFactorization::new(psi.negative_part().exp()?, index, psi.positive_part().add(&psi0).exp()?)
}

fn log_split(phi: &ApwElement, cfg: &MeanMotionConfig) -> Result<(f64, ApwElement)> {
    let index = resolve_index(phi, cfg)?;
    let psi = phi.shift(-index).log()?;
    Ok((index, psi))
}

/// Factorizes a lowered symbol whose pointwise part is even and invertible:
/// that part is carried into the even factor unchanged.
pub fn factorize_lowered(phi: &LoweredSymbol) -> Result<AsymmetricFactorization> {
    let apw = phi.apw_part().cloned().unwrap_or_else(ApwElement::one);
    let af = factorize_log_amenable(&apw)?;
    let Some(pointwise) = phi.pointwise_part() else {
        return Ok(af);
    };
    let rest = LoweredSymbol::from_pointwise(pointwise.clone());
    certify_even(&rest)?;
    let even = match af.even.as_apw() {
        Some(e) => rest.mul_apw(e),
        None => unreachable!("log-amenable factorization has an APW even factor"),
    };
    let af = AsymmetricFactorization::new(af.minus, af.index, even)?;
    check_residual(phi, &af)?;
    Ok(af)
}

fn check_residual(phi: &LoweredSymbol, af: &AsymmetricFactorization) -> Result<()> {
    let residual = verify(phi, af, &default_check_grid()).residual;
    if residual <= FACTORIZE_TOL {
        Ok(())
    } else {
        Err(FactorizationError::ResidualTooLarge {
            residual,
            tolerance: FACTORIZE_TOL,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{lower, parse};
    use std::f64::consts::PI;

    fn e(f: f64) -> ApwElement {
        ApwElement::exponential(f).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn lin(pairs: &[(f64, f64)]) -> ApwElement {
        ApwElement::from_pairs(pairs.iter().map(|&(f, a)| (f, c(a, 0.0))))
    }

    fn grid() -> GridSpec {
        GridSpec::new(300.0, 1 << 15).unwrap()
    }

    #[test]
    fn asymmetric_from_right_examples() {
        let af = asymmetric_from_right(&RightApFactorization::new(e(0.0), 1.5, e(0.0)).unwrap()).unwrap();
        assert_eq!(af.minus(), &ApwElement::one());
        assert_eq!(af.even().as_apw(), Some(&ApwElement::one()));

        let rf = RightApFactorization::new(e(-PI).exp().unwrap(), -2.0, e(2.0).exp().unwrap()).unwrap();
        let af = asymmetric_from_right(&rf).unwrap();
        let minus = lin(&[(-PI, 1.0), (-2.0, -1.0)]).exp().unwrap();
        let even = lin(&[(-2.0, 1.0), (2.0, 1.0)]).exp().unwrap();
        assert!(af.minus().distance(&minus) < 1e-9);
        assert!(af.even().as_apw().unwrap().distance(&even) < 1e-9);
        let phi = LoweredSymbol::from_apw(rf.symbol());
        assert!(verify(&phi, &af, &grid()).passed(1e-9));

        let rf = RightApFactorization::new(e(-1.0).exp().unwrap(), 0.0, e(0.0)).unwrap();
        let af = asymmetric_from_right(&rf).unwrap();
        assert_eq!(classify(&af).verdict, Verdict::Invertible);
    }

    #[test]
    fn rejects_wrong_classes() {
        let err = RightApFactorization::new(e(1.0), 0.0, e(0.0)).unwrap_err();
        assert!(matches!(err, FactorizationError::WrongClass { factor: "minus", .. }));
        let err = RightApFactorization::new(e(0.0), 0.0, e(-1.0)).unwrap_err();
        assert!(matches!(err, FactorizationError::WrongClass { factor: "plus", .. }));
        // 1 + 2e_{-1} has mean motion −1 and no AP⁻ inverse
        let err = RightApFactorization::new(lin(&[(-1.0, 2.0), (0.0, 1.0)]), 0.0, e(0.0)).unwrap_err();
        assert_eq!(err, FactorizationError::NotInvertible("minus"));
        let err = AsymmetricFactorization::new(e(0.0), 0.0, LoweredSymbol::from_apw(e(1.0))).unwrap_err();
        assert!(matches!(err, FactorizationError::EvennessViolated { .. }));
        let cos = LoweredSymbol::from_apw(lin(&[(-1.0, 1.0), (1.0, 1.0)]));
        let err = AsymmetricFactorization::new(e(0.0), 0.0, cos).unwrap_err();
        assert_eq!(err, FactorizationError::NotInvertible("even"));
        // same zeros, but pointwise: the nodes straddle them
        let cos = LoweredSymbol::from_pointwise(parse("2*cos(x)").unwrap());
        let err = AsymmetricFactorization::new(e(0.0), 0.0, cos).unwrap_err();
        assert_eq!(err, FactorizationError::NotInvertible("even"));
        assert!(AntisymmetricFactorization::new(e(0.0), f64::NAN).is_err());
    }

    fn example_symbol() -> LoweredSymbol {
        lower(&parse("e(-2)*exp(e(-pi))*ln(atan(100*x^2)+pi/2)").unwrap())
    }

    fn example_factors() -> AsymmetricFactorization {
        AsymmetricFactorization::new(
            e(-PI).exp().unwrap(),
            -2.0,
            LoweredSymbol::from_pointwise(parse("ln(atan(100*x^2)+pi/2)").unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn example_verifies_and_classifies() {
        let v = verify(&example_symbol(), &example_factors(), &grid());
        assert!(v.residual <= 1e-9 && v.passed(1e-9), "{v:?}");
        let af = example_factors();
        let r = classify_with_crosscheck(&af, &MeanMotionConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::RightInvertibleProperlyRightFredholm);
        assert!((r.mean_motion_crosscheck.unwrap() + 2.0).abs() <= MEAN_MOTION_TOL);

        let wrong = AsymmetricFactorization::new(af.minus().clone(), -1.0, af.even().clone()).unwrap();
        assert!(verify(&example_symbol(), &wrong, &grid()).residual >= 0.1);
    }

    #[test]
    fn exact_exponential_verifies() {
        let af = AsymmetricFactorization::new(e(0.0), 2.5, LoweredSymbol::from_apw(e(0.0))).unwrap();
        assert!(verify(&LoweredSymbol::from_apw(e(2.5)), &af, &grid()).residual <= 1e-12);
    }

    #[test]
    fn antisymmetric_examples() {
        let af = example_factors();
        let anf = antisymmetric_of_quotient(&af);
        assert_eq!((anf.index(), anf.minus()), (-2.0, af.minus()));
        let phi = example_symbol();
        assert!(antisymmetric_residual(&anf, &phi, &grid()).unwrap() <= 1e-9);

        let back = asymmetric_from_antisymmetric(&anf, &phi).unwrap();
        let want = af.even();
        for k in 0..100 {
            let x = -300.0 + 6.0 * k as f64 + 0.1;
            let (a, b) = (back.even().value_at(x).unwrap(), want.value_at(x).unwrap());
            assert!((a - b).norm() <= 1e-8 * (1.0 + b.norm()));
        }

        let simple = AntisymmetricFactorization::new(e(0.0), 1.0).unwrap();
        let phi = LoweredSymbol::from_apw(e(1.0));
        assert!(antisymmetric_residual(&simple, &phi, &grid()).unwrap() <= 1e-15);
        let af = asymmetric_from_antisymmetric(&simple, &phi).unwrap();
        assert_eq!(af.even().as_apw(), Some(&ApwElement::one()));
    }

    #[test]
    fn wrong_antisymmetric_input_is_not_even() {
        let anf = AntisymmetricFactorization::new(e(0.0), 0.0).unwrap();
        let phi = LoweredSymbol::from_apw(lin(&[(0.0, 3.0), (1.0, 1.0)]));
        let err = asymmetric_from_antisymmetric(&anf, &phi).unwrap_err();
        assert!(matches!(err, FactorizationError::EvennessViolated { .. }));
    }

    #[test]
    fn normalize_extracts_gamma() {
        let one = AsymmetricFactorization::new(e(0.0), 0.0, LoweredSymbol::from_apw(e(0.0))).unwrap();
        assert_eq!(normalize(&one).unwrap(), one);

        let m = e(-PI).exp().unwrap();
        let even = LoweredSymbol::from_apw(lin(&[(-1.0, 0.25), (0.0, 2.0), (1.0, 0.25)]));
        let af = AsymmetricFactorization::new(m.scale(c(3.0, 0.0)), -1.0, even.clone()).unwrap();
        let n = normalize(&af).unwrap();
        assert!(n.minus().max_coeff_deviation(&m) <= 1e-12);
        assert!(
            n.even()
                .as_apw()
                .unwrap()
                .max_coeff_deviation(&even.as_apw().unwrap().scale(c(3.0, 0.0)))
                <= 1e-12
        );
        assert_eq!(normalize(&n).unwrap(), n);
    }

    #[test]
    fn wiener_hopf_trichotomy() {
        let cfg = MeanMotionConfig::default();
        let v = |p: &ApwElement| classify_wiener_hopf(p, &cfg).unwrap().verdict;
        assert_eq!(v(&e(-1.0)), Verdict::RightInvertibleProperlyRightFredholm);
        assert_eq!(v(&e(-PI).exp().unwrap()), Verdict::Invertible);
        assert_eq!(v(&e(5.0)), Verdict::LeftInvertibleProperlyLeftFredholm);
    }

    #[test]
    fn transfer_requires_canonical() {
        let ok = |rf: RightApFactorization| transfer_invertibility(&rf).unwrap().verdict;
        assert_eq!(
            ok(RightApFactorization::new(e(0.0), 0.0, e(0.0)).unwrap()),
            Verdict::Invertible
        );
        let rf = RightApFactorization::new(e(-PI).exp().unwrap(), 0.0, e(2.0).exp().unwrap()).unwrap();
        assert_eq!(ok(rf), Verdict::Invertible);
        let rf = RightApFactorization::new(e(-PI).exp().unwrap(), -2.0, e(0.0)).unwrap();
        assert_eq!(
            transfer_invertibility(&rf).unwrap_err(),
            FactorizationError::NotCanonical { index: -2.0 }
        );
    }

    #[test]
    fn factorize_examples() {
        let af = factorize_log_amenable(&e(1.75)).unwrap();
        assert_eq!((af.minus(), af.index()), (&ApwElement::one(), 1.75));
        assert_eq!(af.even().as_apw(), Some(&ApwElement::one()));

        let phi = lin(&[(-1.0, 0.3), (2.0, 0.2)]).exp().unwrap();
        let af = factorize_log_amenable(&phi).unwrap();
        assert_eq!(af.index(), 0.0);
        let minus = lin(&[(-2.0, -0.2), (-1.0, 0.3)]).exp().unwrap();
        let even = lin(&[(-2.0, 0.2), (2.0, 0.2)]).exp().unwrap();
        assert!(af.minus().distance(&minus) <= 1e-9);
        assert!(af.even().as_apw().unwrap().distance(&even) <= 1e-9);

        // same result through the right factorization and its conversion
        let via_right = asymmetric_from_right(&right_factorize_log_amenable(&phi).unwrap()).unwrap();
        assert!(via_right.minus().distance(af.minus()) <= 1e-9);

        let phi = e(-2.0).mul(&e(-PI).exp().unwrap());
        let af = factorize_log_amenable(&phi).unwrap();
        assert_eq!(af.index(), -2.0);
        assert!(af.minus().distance(&e(-PI).exp().unwrap()) <= 1e-9);
        assert!(af.even().as_apw().unwrap().distance(&ApwElement::one()) <= 1e-9);
    }

    #[test]
    fn factorize_rejects_non_amenable() {
        // cos x vanishes on the real line
        let err = factorize_log_amenable(&lin(&[(-1.0, 1.0), (1.0, 1.0)])).unwrap_err();
        assert!(
            matches!(
                err,
                FactorizationError::Apw(ApwError::WindingUndefined { .. } | ApwError::AliasRisk { .. })
            ),
            "{err}"
        );
        // exp(1.4 cos x): two-sided with ‖φ/φ₀ − 1‖_W ≈ 1.6, outside the series
        let phi = lin(&[(-1.0, 0.7), (1.0, 0.7)]).exp().unwrap();
        let err = factorize_log_amenable(&phi).unwrap_err();
        assert!(matches!(err, FactorizationError::LogNotAmenable(_)), "{err}");
    }

    #[test]
    fn factorize_lowered_example() {
        let af = factorize_lowered(&example_symbol()).unwrap();
        assert_eq!(af.index(), -2.0);
        assert!(af.minus().distance(&e(-PI).exp().unwrap()) <= 1e-9);
        assert!(verify(&example_symbol(), &af, &grid()).passed(1e-9));

        let odd = lower(&parse("e(-1)*(2 + sin(x))").unwrap());
        assert!(matches!(
            factorize_lowered(&odd),
            Err(FactorizationError::EvennessViolated { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let f = Factorization::Asymmetric(example_factors());
        let text = serde_json::to_string(&f).unwrap();
        assert!(text.contains(r#""kind":"asymmetric""#) && text.contains(r#""pointwise""#));
        assert_eq!(serde_json::from_str::<Factorization>(&text).unwrap(), f);

        let rf = RightApFactorization::new(e(-1.0).exp().unwrap(), -2.0, e(0.0)).unwrap();
        let f = Factorization::Right(rf);
        let text = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<Factorization>(&text).unwrap(), f);

        let bad = r#"{"kind":"antisymmetric","index":1,"minus":[{"freq":1,"re":1,"im":0}]}"#;
        assert!(serde_json::from_str::<Factorization>(bad).is_err());
    }
}
