use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{parse, Func, SymbolExpr};
use crate::apw::ApwElement;
use crate::pointwise::{DomainError, PointwiseSymbol};

/// Largest integer power expanded exactly inside the APW algebra.
const MAX_EXPANDED_POWER: f64 = 32.0;

/// A symbol split as `apw_part · pointwise_part`. A missing part stands for
/// the constant 1, and at least one part is always present.
#[derive(Debug, Clone, PartialEq)]
pub struct LoweredSymbol {
    apw_part: Option<ApwElement>,
    pointwise_part: Option<SymbolExpr>,
}

impl LoweredSymbol {
    pub fn new(apw_part: Option<ApwElement>, pointwise_part: Option<SymbolExpr>) -> Self {
        match (apw_part, pointwise_part) {
            (None, None) => Self::from_apw(ApwElement::one()),
            (apw_part, pointwise_part) => Self {
                apw_part,
                pointwise_part,
            },
        }
    }

    pub fn from_apw(a: ApwElement) -> Self {
        Self {
            apw_part: Some(a),
            pointwise_part: None,
        }
    }

    pub fn from_pointwise(e: SymbolExpr) -> Self {
        Self {
            apw_part: None,
            pointwise_part: Some(e),
        }
    }

    pub fn apw_part(&self) -> Option<&ApwElement> {
        self.apw_part.as_ref()
    }

    pub fn pointwise_part(&self) -> Option<&SymbolExpr> {
        self.pointwise_part.as_ref()
    }

    /// The APW element when there is no pointwise remainder.
    pub fn as_apw(&self) -> Option<&ApwElement> {
        match self.pointwise_part {
            None => self.apw_part.as_ref(),
            Some(_) => None,
        }
    }

    /// `a · self`, absorbed into the APW part.
    pub fn mul_apw(&self, a: &ApwElement) -> Self {
        let apw = match &self.apw_part {
            Some(p) => p.mul(a),
            None => a.clone(),
        };
        Self::new(Some(apw), self.pointwise_part.clone())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.mul_apw(&ApwElement::constant(c))
    }
}

impl PointwiseSymbol for LoweredSymbol {
    fn value_at(&self, x: f64) -> Result<Complex64, DomainError> {
        let mut v = Complex64::new(1.0, 0.0);
        if let Some(a) = &self.apw_part {
            v *= a.eval(x);
        }
        if let Some(p) = &self.pointwise_part {
            v *= p.eval(x)?;
        }
        Ok(v)
    }

    fn sample_uniform(&self, x0: f64, dx: f64, n: usize) -> Result<Vec<Complex64>, DomainError> {
        let mut out = match &self.apw_part {
            Some(a) => a.eval_uniform(x0, dx, n),
            None => vec![Complex64::new(1.0, 0.0); n],
        };
        if let Some(p) = &self.pointwise_part {
            for (k, v) in out.iter_mut().enumerate() {
                *v *= p.eval(x0 + k as f64 * dx)?;
            }
        }
        Ok(out)
    }
}

/// JSON form: a bare APW term array, or `{"apw": [...], "pointwise": "<text>"}`
/// with either key optional.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum LoweredRepr {
    Apw(ApwElement),
    Parts {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        apw: Option<ApwElement>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        pointwise: Option<String>,
    },
}

impl Serialize for LoweredSymbol {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = match (&self.apw_part, &self.pointwise_part) {
            (Some(a), None) => LoweredRepr::Apw(a.clone()),
            (apw, pw) => LoweredRepr::Parts {
                apw: apw.clone(),
                pointwise: pw.as_ref().map(|e| e.to_string()),
            },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LoweredSymbol {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(match LoweredRepr::deserialize(d)? {
            LoweredRepr::Apw(a) => Self::from_apw(a),
            LoweredRepr::Parts { apw, pointwise } => {
                let pw = pointwise
                    .map(|t| parse(&t).map_err(serde::de::Error::custom))
                    .transpose()?;
                Self::new(apw, pw)
            }
        })
    }
}

/// Splits a product into factors that lower to the APW algebra and a
/// pointwise remainder. Never fails: unlowerable factors stay pointwise.
pub fn lower(expr: &SymbolExpr) -> LoweredSymbol {
    let mut numer = Vec::new();
    let mut denom = Vec::new();
    let mut negate = false;
    flatten(expr, false, &mut numer, &mut denom, &mut negate);

    let mut apw: Option<ApwElement> = None;
    let mut absorb = |a: ApwElement| {
        apw = Some(match apw.take() {
            Some(p) => p.mul(&a),
            None => a,
        });
    };
    if negate {
        absorb(ApwElement::constant(Complex64::new(-1.0, 0.0)));
    }
    let mut rest_num = Vec::new();
    for f in numer {
        match to_apw(f) {
            Some(a) => absorb(a),
            None => rest_num.push(f.clone()),
        }
    }
    let mut rest_den = Vec::new();
    for f in denom {
        match to_apw(f).and_then(|a| a.invert().ok()) {
            Some(a) => absorb(a),
            None => rest_den.push(f.clone()),
        }
    }

    let product = |fs: Vec<SymbolExpr>| fs.into_iter().reduce(SymbolExpr::mul);
    let pointwise = match (product(rest_num), product(rest_den)) {
        (n, None) => n,
        (n, Some(d)) => Some(SymbolExpr::Div(
            Box::new(n.unwrap_or(SymbolExpr::real(1.0))),
            Box::new(d),
        )),
    };
    if pointwise.is_some() && apw.as_ref() == Some(&ApwElement::one()) {
        apw = None;
    }
    LoweredSymbol::new(apw, pointwise)
}

fn flatten<'a>(
    e: &'a SymbolExpr,
    inverted: bool,
    numer: &mut Vec<&'a SymbolExpr>,
    denom: &mut Vec<&'a SymbolExpr>,
    negate: &mut bool,
) {
    match e {
        SymbolExpr::Mul(a, b) => {
            flatten(a, inverted, numer, denom, negate);
            flatten(b, inverted, numer, denom, negate);
        }
        SymbolExpr::Div(a, b) => {
            flatten(a, inverted, numer, denom, negate);
            flatten(b, !inverted, numer, denom, negate);
        }
        SymbolExpr::Neg(a) => {
            *negate = !*negate;
            flatten(a, inverted, numer, denom, negate);
        }
        _ if inverted => denom.push(e),
        _ => numer.push(e),
    }
}

/// Exact conversion of an x-free-outside-exponentials subtree.
fn to_apw(e: &SymbolExpr) -> Option<ApwElement> {
    use SymbolExpr::*;
    if !e.depends_on_x() {
        return e.eval(0.0).ok().map(ApwElement::constant);
    }
    match e {
        Const(c) => Some(ApwElement::constant(*c)),
        Var => None,
        Exponential(f) => ApwElement::exponential(*f).ok(),
        Add(a, b) => Some(to_apw(a)?.add(&to_apw(b)?)),
        Sub(a, b) => Some(to_apw(a)?.sub(&to_apw(b)?)),
        Mul(a, b) => Some(to_apw(a)?.mul(&to_apw(b)?)),
        Div(a, b) => Some(to_apw(a)?.mul(&to_apw(b)?.invert().ok()?)),
        Neg(a) => Some(to_apw(a)?.neg()),
        Pow(a, n) => {
            if n.depends_on_x() {
                return None;
            }
            let n = n.eval(0.0).ok()?;
            if n.im != 0.0 || n.re.fract() != 0.0 || n.re.abs() > MAX_EXPANDED_POWER {
                return None;
            }
            let base = to_apw(a)?;
            let base = if n.re < 0.0 { base.invert().ok()? } else { base };
            Some(int_pow(&base, n.re.abs() as u32))
        }
        Call(Func::Exp, a) => to_apw(a)?.exp().ok(),
        Call(Func::Reflect, a) => Some(to_apw(a)?.reflect()),
        Call(f @ (Func::Sin | Func::Cos), a) => {
            // sin z = (e^{iz} − e^{−iz})/2i, cos z = (e^{iz} + e^{−iz})/2
            let iz = to_apw(a)?.scale(Complex64::i());
            let p = iz.exp().ok()?;
            let m = iz.neg().exp().ok()?;
            Some(match f {
                Func::Sin => p.sub(&m).scale(Complex64::new(0.0, -0.5)),
                _ => p.add(&m).scale(Complex64::new(0.5, 0.0)),
            })
        }
        Call(..) => None,
    }
}

fn int_pow(base: &ApwElement, mut n: u32) -> ApwElement {
    let mut acc = ApwElement::one();
    let mut sq = base.clone();
    while n > 0 {
        if n & 1 == 1 {
            acc = acc.mul(&sq);
        }
        n >>= 1;
        if n > 0 {
            sq = sq.mul(&sq);
        }
    }
    acc
}
