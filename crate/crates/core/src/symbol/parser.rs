use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use thiserror::Error;

use super::{Func, SymbolExpr};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {}", expected.join(" or "))]
    Syntax { offset: usize, expected: Vec<&'static str> },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("invalid frequency at byte {offset}: {reason}")]
    InvalidFrequency { offset: usize, reason: &'static str },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::InvalidFrequency { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    /// Next token and its byte offset.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok((Tok::End, start));
        };
        if c.is_ascii_digit() || (c == '.' && rest[1..].starts_with(|d: char| d.is_ascii_digit())) {
            let len = number_len(rest.as_bytes());
            self.pos += len;
            let v: f64 = rest[..len].parse().map_err(|_| ParseError::Syntax {
                offset: start,
                expected: vec!["number"],
            })?;
            return Ok((Tok::Num(v), start));
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let len = rest
                .find(|d: char| !(d.is_ascii_alphanumeric() || d == '_'))
                .unwrap_or(rest.len());
            self.pos += len;
            return Ok((Tok::Ident(rest[..len].to_string()), start));
        }
        if "+-*/^()".contains(c) {
            self.pos += 1;
            return Ok((Tok::Sym(c), start));
        }
        Err(ParseError::Syntax {
            offset: start,
            expected: vec!["operator", "operand"],
        })
    }
}

/// `digits [. digits] [(e|E) [+|-] digits]`; the exponent is only taken when
/// digits follow, so `2e(1)` lexes as `2` then `e`.
fn number_len(b: &[u8]) -> usize {
    let digits = |mut i: usize| {
        while i < b.len() && b[i].is_ascii_digit() {
            i += 1;
        }
        i
    };
    let mut i = digits(0);
    if i < b.len() && b[i] == b'.' {
        i = digits(i + 1);
    }
    if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
        let mut j = i + 1;
        if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
            j += 1;
        }
        if j < b.len() && b[j].is_ascii_digit() {
            i = digits(j);
        }
    }
    i
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
}

/// Parses symbol text into an expression tree.
pub fn parse(text: &str) -> Result<SymbolExpr, ParseError> {
    let mut lexer = Lexer { src: text, pos: 0 };
    let (tok, at) = lexer.next()?;
    let mut p = Parser { lexer, tok, at };
    let e = p.expr()?;
    if p.tok != Tok::End {
        return Err(p.syntax(&["operator", "end of input"]));
    }
    Ok(e)
}

impl Parser<'_> {
    fn bump(&mut self) -> Result<(), ParseError> {
        (self.tok, self.at) = self.lexer.next()?;
        Ok(())
    }

    fn syntax(&self, expected: &[&'static str]) -> ParseError {
        ParseError::Syntax {
            offset: self.at,
            expected: expected.to_vec(),
        }
    }

    fn eat(&mut self, c: char) -> Result<bool, ParseError> {
        if self.tok == Tok::Sym(c) {
            self.bump()?;
            Ok(true)
        } else {
            Ok(false)
        }
    }

    fn expect_close(&mut self) -> Result<(), ParseError> {
        if self.eat(')')? {
            Ok(())
        } else {
            Err(self.syntax(&["`)`", "operator"]))
        }
    }

    fn expr(&mut self) -> Result<SymbolExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+')? {
                lhs = SymbolExpr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-')? {
                lhs = SymbolExpr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<SymbolExpr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*')? {
                lhs = SymbolExpr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat('/')? {
                lhs = SymbolExpr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<SymbolExpr, ParseError> {
        let base = self.unary()?;
        if self.eat('^')? {
            Ok(SymbolExpr::Pow(Box::new(base), Box::new(self.factor()?)))
        } else {
            Ok(base)
        }
    }

    fn unary(&mut self) -> Result<SymbolExpr, ParseError> {
        if self.eat('-')? {
            Ok(SymbolExpr::Neg(Box::new(self.unary()?)))
        } else {
            self.primary()
        }
    }

    fn primary(&mut self) -> Result<SymbolExpr, ParseError> {
        let at = self.at;
        match std::mem::replace(&mut self.tok, Tok::End) {
            Tok::Num(v) => {
                self.bump()?;
                Ok(SymbolExpr::real(v))
            }
            Tok::Sym('(') => {
                self.bump()?;
                let e = self.expr()?;
                self.expect_close()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump()?;
                match name.as_str() {
                    "i" => Ok(SymbolExpr::Const(Complex64::i())),
                    "pi" => Ok(SymbolExpr::real(PI)),
                    "sqrt2" => Ok(SymbolExpr::real(SQRT_2)),
                    "x" => Ok(SymbolExpr::Var),
                    "e" => {
                        let arg_at = self.open_paren()?;
                        let arg = self.expr()?;
                        self.expect_close()?;
                        Ok(SymbolExpr::Exponential(fold_frequency(&arg, arg_at)?))
                    }
                    _ => match Func::from_name(&name) {
                        Some(f) => {
                            self.open_paren()?;
                            let arg = self.expr()?;
                            self.expect_close()?;
                            Ok(SymbolExpr::call(f, arg))
                        }
                        None => Err(ParseError::UnknownIdentifier { offset: at, name }),
                    },
                }
            }
            other => {
                self.tok = other;
                Err(self.syntax(&["number", "identifier", "`(`", "`-`"]))
            }
        }
    }

    /// Consumes `(` and returns the offset of what follows it.
    fn open_paren(&mut self) -> Result<usize, ParseError> {
        if !self.eat('(')? {
            return Err(self.syntax(&["`(`"]));
        }
        Ok(self.at)
    }
}

fn fold_frequency(arg: &SymbolExpr, offset: usize) -> Result<f64, ParseError> {
    if arg.depends_on_x() {
        return Err(ParseError::InvalidFrequency {
            offset,
            reason: "frequency must not depend on x",
        });
    }
    let v = arg.eval(0.0).map_err(|_| ParseError::InvalidFrequency {
        offset,
        reason: "frequency is not finite",
    })?;
    if v.im != 0.0 {
        return Err(ParseError::InvalidFrequency {
            offset,
            reason: "frequency must be real",
        });
    }
    Ok(v.re)
}
