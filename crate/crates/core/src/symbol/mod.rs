//! Textual symbol language.
//!
//! ```text
//! expr    := term (('+'|'-') term)*
//! term    := factor (('*'|'/') factor)*
//! factor  := unary | unary '^' factor
//! unary   := '-' unary | primary
//! primary := number | 'i' | 'pi' | 'sqrt2' | 'x' | 'e' '(' expr ')'
//!          | func '(' expr ')' | '(' expr ')'
//! func    := exp | ln | log | sin | cos | atan | sqrt | reflect
//! ```
//!
//! `e(λ)` is the exponential `x ↦ e^{iλx}`; its argument must be a constant
//! real expression and is folded to a number at parse time. `reflect(f)` is
//! `x ↦ f(−x)`.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use num_complex::Complex64;

use crate::apw::{ApwElement, Term};
use crate::pointwise::{DomainError, PointwiseSymbol};

mod lower;
mod parser;

pub use lower::{lower, LoweredSymbol};
pub use parser::{parse, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Ln,
    /// Natural logarithm, alias of `ln` kept distinct for round trips.
    Log,
    Sin,
    Cos,
    Atan,
    Sqrt,
    Reflect,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Exp,
        Func::Ln,
        Func::Log,
        Func::Sin,
        Func::Cos,
        Func::Atan,
        Func::Sqrt,
        Func::Reflect,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Atan => "atan",
            Func::Sqrt => "sqrt",
            Func::Reflect => "reflect",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Expression tree of a symbol.
#[derive(Debug, Clone, PartialEq)]
pub enum SymbolExpr {
    Const(Complex64),
    Var,
    /// `e^{iλx}` with finite real `λ`.
    Exponential(f64),
    Add(Box<SymbolExpr>, Box<SymbolExpr>),
    Sub(Box<SymbolExpr>, Box<SymbolExpr>),
    Mul(Box<SymbolExpr>, Box<SymbolExpr>),
    Div(Box<SymbolExpr>, Box<SymbolExpr>),
    Neg(Box<SymbolExpr>),
    Pow(Box<SymbolExpr>, Box<SymbolExpr>),
    Call(Func, Box<SymbolExpr>),
}

use SymbolExpr::*;

impl SymbolExpr {
    pub fn real(v: f64) -> Self {
        Const(Complex64::new(v, 0.0))
    }

    pub fn mul(a: SymbolExpr, b: SymbolExpr) -> Self {
        Mul(Box::new(a), Box::new(b))
    }

    pub fn call(f: Func, a: SymbolExpr) -> Self {
        Call(f, Box::new(a))
    }

    /// `Σ c_j e(λ_j)` as a tree.
    pub fn from_apw(a: &ApwElement) -> Self {
        let term = |t: &Term| {
            let e = Exponential(t.freq);
            let one = Complex64::new(1.0, 0.0);
            match (t.freq == 0.0, t.coeff) {
                (true, c) => Const(c),
                (false, c) if c == one => e,
                (false, c) if c == -one => Neg(Box::new(e)),
                (false, c) => SymbolExpr::mul(Const(c), e),
            }
        };
        a.terms()
            .iter()
            .map(term)
            .reduce(|acc, t| Add(Box::new(acc), Box::new(t)))
            .unwrap_or(SymbolExpr::real(0.0))
    }

    /// Whether `x` occurs anywhere in the tree.
    pub fn depends_on_x(&self) -> bool {
        match self {
            Var => true,
            Const(_) => false,
            // e(λ) is a function of x
            Exponential(f) => *f != 0.0,
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Pow(a, b) => a.depends_on_x() || b.depends_on_x(),
            Neg(a) | Call(_, a) => a.depends_on_x(),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Var | Const(_) | Exponential(_) => 1,
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Pow(a, b) => 1 + a.node_count() + b.node_count(),
            Neg(a) | Call(_, a) => 1 + a.node_count(),
        }
    }

    pub fn eval(&self, x: f64) -> Result<Complex64, DomainError> {
        let v = self.eval_raw(x)?;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(DomainError::NonFinite { x })
        }
    }

    fn eval_raw(&self, x: f64) -> Result<Complex64, DomainError> {
        Ok(match self {
            Const(c) => *c,
            Var => Complex64::new(x, 0.0),
            Exponential(f) => Complex64::cis(f * x),
            Add(a, b) => a.eval_raw(x)? + b.eval_raw(x)?,
            Sub(a, b) => a.eval_raw(x)? - b.eval_raw(x)?,
            Mul(a, b) => a.eval_raw(x)? * b.eval_raw(x)?,
            Div(a, b) => {
                let d = b.eval_raw(x)?;
                if d == Complex64::default() {
                    return Err(DomainError::DivisionByZero { x });
                }
                a.eval_raw(x)? / d
            }
            Neg(a) => -a.eval_raw(x)?,
            Pow(a, b) => power(a.eval_raw(x)?, b.eval_raw(x)?, x)?,
            Call(f, a) => {
                if *f == Func::Reflect {
                    return a.eval_raw(-x);
                }
                let z = a.eval_raw(x)?;
                match f {
                    Func::Exp => z.exp(),
                    Func::Ln | Func::Log => {
                        if z == Complex64::default() {
                            return Err(DomainError::LogOfZero { x });
                        }
                        z.ln()
                    }
                    Func::Sin => z.sin(),
                    Func::Cos => z.cos(),
                    Func::Atan => z.atan(),
                    Func::Sqrt => z.sqrt(),
                    Func::Reflect => unreachable!(),
                }
            }
        })
    }
}

fn power(base: Complex64, exponent: Complex64, x: f64) -> Result<Complex64, DomainError> {
    let zero = Complex64::default();
    if exponent.im == 0.0 && exponent.re.fract() == 0.0 && exponent.re.abs() <= 1024.0 {
        let n = exponent.re as i32;
        if n < 0 && base == zero {
            return Err(DomainError::DivisionByZero { x });
        }
        return Ok(base.powi(n));
    }
    if base == zero {
        return if exponent.re > 0.0 {
            Ok(zero)
        } else {
            Err(DomainError::DivisionByZero { x })
        };
    }
    Ok(base.powc(exponent))
}

impl PointwiseSymbol for SymbolExpr {
    fn value_at(&self, x: f64) -> Result<Complex64, DomainError> {
        self.eval(x)
    }
}

// Binding strength of each printed form, loosest first. Operands are
// parenthesized when weaker than their slot requires.
const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const POWER: u8 = 3;
const UNARY: u8 = 4;
const ATOM: u8 = 5;

impl SymbolExpr {
    fn strength(&self) -> u8 {
        match self {
            Add(..) | Sub(..) => SUM,
            Mul(..) | Div(..) => PRODUCT,
            Pow(..) => POWER,
            Neg(_) => UNARY,
            _ => ATOM,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.strength() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Const(c) => write_const(f, *c),
            Var => write!(f, "x"),
            Exponential(l) => write!(f, "e({l:?})"),
            Add(a, b) => binary(f, a, " + ", b, SUM),
            Sub(a, b) => binary(f, a, " - ", b, SUM),
            Mul(a, b) => binary(f, a, "*", b, PRODUCT),
            Div(a, b) => binary(f, a, "/", b, PRODUCT),
            Neg(a) => {
                write!(f, "-")?;
                a.write_at(f, UNARY)
            }
            Pow(a, b) => {
                a.write_at(f, UNARY)?;
                write!(f, "^")?;
                b.write_at(f, POWER)
            }
            Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write_at(f, 0)?;
                write!(f, ")")
            }
        }
    }
}

/// Left-associative: the right operand must bind strictly tighter.
fn binary(f: &mut fmt::Formatter<'_>, a: &SymbolExpr, op: &str, b: &SymbolExpr, level: u8) -> fmt::Result {
    a.write_at(f, level)?;
    write!(f, "{op}")?;
    b.write_at(f, level + 1)
}

fn const_name(c: Complex64) -> Option<&'static str> {
    match (c.re, c.im) {
        (0.0, 1.0) => Some("i"),
        (re, 0.0) if re == PI => Some("pi"),
        (re, 0.0) if re == SQRT_2 => Some("sqrt2"),
        _ => None,
    }
}

fn write_const(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    if let Some(name) = const_name(c) {
        return write!(f, "{name}");
    }
    match (c.re, c.im) {
        (re, 0.0) if re >= 0.0 => write!(f, "{re:?}"),
        (re, 0.0) => write!(f, "(-{:?})", -re),
        (0.0, im) if im >= 0.0 => write!(f, "({im:?}*i)"),
        (re, im) => {
            let sign = if im < 0.0 { '-' } else { '+' };
            write!(f, "({re:?} {sign} {:?}*i)", im.abs())
        }
    }
}

impl fmt::Display for SymbolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

impl fmt::Display for LoweredSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.apw_part(), self.pointwise_part()) {
            (Some(a), Some(p)) => write!(f, "{}", SymbolExpr::mul(SymbolExpr::from_apw(a), p.clone())),
            (Some(a), None) => write!(f, "{}", SymbolExpr::from_apw(a)),
            (None, Some(p)) => write!(f, "{p}"),
            (None, None) => write!(f, "1.0"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(text: &str, x: f64) -> Complex64 {
        parse(text).unwrap().eval(x).unwrap()
    }

    #[test]
    fn exponential_at_two() {
        let z = ev("e(pi)", 2.0);
        assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn phi1_at_zero() {
        let z = ev("-e(pi) - pi*e(-1/2)", 0.0);
        assert!((z - Complex64::new(-1.0 - PI, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn phi2_at_zero() {
        let z = ev("10*e(-1) + (1+i)*e(sqrt2) - i*e(5)", 0.0);
        assert!((z - Complex64::new(11.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        let e = parse("ln(x)").unwrap().eval(0.0).unwrap_err();
        assert_eq!(e, DomainError::LogOfZero { x: 0.0 });
        let e = parse("1/x").unwrap().eval(0.0).unwrap_err();
        assert_eq!(e, DomainError::DivisionByZero { x: 0.0 });
        let e = parse("exp(exp(x))").unwrap().eval(10.0).unwrap_err();
        assert!(matches!(e, DomainError::NonFinite { .. }));
    }

    #[test]
    fn reflect_evaluates_at_minus_x() {
        let z = ev("reflect(e(2)*x)", 0.7);
        let w = ev("e(-2)*(-x)", 0.7);
        assert!((z - w).norm() < 1e-15);
    }

    #[test]
    fn printed_example_exponent_needs_i() {
        let rewritten = parse("e(-2)*exp(e(-pi))*ln(atan(100*x^2)+pi/2)").unwrap();
        let corrected = parse("exp(-2*i*x + e(pi))*ln((atan(100*x^2) + pi/2)^exp(-2*i*sin(pi*x)))").unwrap();
        let literal = parse("exp(-2*i*x + e(pi))*ln((atan(100*x^2) + pi/2)^exp(-2*sin(pi*x)))").unwrap();
        let mut worst_literal: f64 = 0.0;
        for k in 0..=200 {
            let x = -10.0 + 0.1 * k as f64 + 0.013;
            let r = rewritten.eval(x).unwrap();
            assert!(
                (corrected.eval(x).unwrap() - r).norm() <= 1e-12 * (1.0 + r.norm()),
                "x={x}"
            );
            worst_literal = worst_literal.max((literal.eval(x).unwrap() - r).norm());
        }
        assert!(worst_literal > 0.1);
    }

    #[test]
    fn format_minimal_parens() {
        let cases = [
            ("a", "1 - (2 - 3)", "1.0 - (2.0 - 3.0)"),
            ("b", "(1 - 2) - 3", "1.0 - 2.0 - 3.0"),
            ("c", "2^3^4", "2.0^3.0^4.0"),
            ("d", "(2^3)^4", "(2.0^3.0)^4.0"),
            ("e", "-x^2", "-x^2.0"),
            ("f", "-(x^2)", "-(x^2.0)"),
            ("g", "x/(2*x)", "x/(2.0*x)"),
            ("h", "e(-1/2)", "e(-0.5)"),
        ];
        for (tag, src, want) in cases {
            assert_eq!(parse(src).unwrap().to_string(), want, "{tag}");
        }
    }

    #[test]
    fn apw_text_round_trip() {
        let a = ApwElement::from_pairs([
            (-0.5, Complex64::new(-PI, 0.0)),
            (0.0, Complex64::new(2.0, 0.0)),
            (SQRT_2, Complex64::new(1.0, 1.0)),
            (3.0, Complex64::new(1.0, 0.0)),
            (4.0, Complex64::new(-1.0, 0.0)),
        ]);
        let text = SymbolExpr::from_apw(&a).to_string();
        let back = lower(&parse(&text).unwrap());
        assert!(back.as_apw().unwrap().distance(&a) < 1e-15, "{text}");
    }

    #[test]
    fn format_general_constants() {
        for c in [
            Complex64::new(-2.0, 0.0),
            Complex64::new(0.0, 3.0),
            Complex64::new(1.5, -0.25),
        ] {
            let text = Const(c).to_string();
            let back = parse(&text).unwrap().eval(0.0).unwrap();
            assert_eq!(back, c, "{text}");
        }
    }
}
