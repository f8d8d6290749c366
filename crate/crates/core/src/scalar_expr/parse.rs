use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::{Atom, Chart, CoordKind, Expr};
use crate::linalg::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message} at offset {offset} in `{source_text}`")]
pub struct ParseError {
    pub message: String,
    pub offset: usize,
    pub source_text: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, (usize, String)> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i] as char;
        let start = i;
        match ch {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '/' => out.push((start, Tok::Slash)),
            '^' => out.push((start, Tok::Caret)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            c if c.is_ascii_digit() => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("digits");
                out.push((start, Tok::Num(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            other => return Err((start, format!("unexpected character `{other}`"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    chart: &'a Arc<Chart>,
    params: &'a BTreeMap<String, Rational>,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

type PResult<T> = Result<T, (usize, String)>;

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        let off = self.offset();
        match self.bump() {
            Some(t) if t == tok => Ok(()),
            Some(t) => Err((off, format!("expected {tok:?}, found {t:?}"))),
            None => Err((off, format!("expected {tok:?}, found end of input"))),
        }
    }

    fn sum(&mut self) -> PResult<Expr> {
        let mut acc = self.product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.product()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> PResult<Expr> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let off = self.offset();
                    let rhs = self.unary()?;
                    let inv = rhs
                        .unit_inverse()
                        .ok_or((off, "divisor must be a nonzero constant or exponential".to_string()))?;
                    acc = &acc * &inv;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = self.primary()?;
        if self.peek() == Some(&Tok::Caret) {
            self.bump();
            let off = self.offset();
            match self.bump() {
                Some(Tok::Num(n)) => {
                    let e = n
                        .to_u32()
                        .filter(|e| *e <= 64)
                        .ok_or((off, "exponent out of range".to_string()))?;
                    Ok(base.pow(e))
                }
                _ => Err((off, "exponent must be a nonnegative integer literal".to_string())),
            }
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        let off = self.offset();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(Expr::constant(self.chart, Rational::from_integer(n))),
            Some(Tok::LParen) => {
                let e = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                if matches!(name.as_str(), "sin" | "cos" | "exp")
                    && self.peek() == Some(&Tok::LParen)
                {
                    self.bump();
                    let arg_off = self.offset();
                    let arg = self.sum()?;
                    self.expect(Tok::RParen)?;
                    return self.function(&name, arg, arg_off);
                }
                if let Some(idx) = self.chart.index_of(&name) {
                    return Ok(Expr::atom(self.chart, idx, Atom { pow: 1, ..Atom::default() }));
                }
                if let Some(v) = self.params.get(&name) {
                    return Ok(Expr::constant(self.chart, v.clone()));
                }
                Err((off, format!("unknown identifier `{name}`")))
            }
            Some(t) => Err((off, format!("unexpected token {t:?}"))),
            None => Err((off, "unexpected end of input".to_string())),
        }
    }

    fn function(&self, name: &str, arg: Expr, off: usize) -> PResult<Expr> {
        let coeffs = arg
            .linear_coefficients()
            .ok_or((off, format!("argument of {name} must be linear in one coordinate")))?;
        let nonzero: Vec<usize> = (0..coeffs.len()).filter(|&i| !coeffs[i].is_zero()).collect();
        if nonzero.is_empty() {
            // sin(0) = 0, cos(0) = exp(0) = 1
            return Ok(if name == "sin" {
                Expr::zero(self.chart)
            } else {
                Expr::one(self.chart)
            });
        }
        if nonzero.len() != 1 {
            return Err((off, format!("argument of {name} must involve a single coordinate")));
        }
        let idx = nonzero[0];
        let k = &coeffs[idx];
        let coord = self.chart.name(idx);
        match name {
            "sin" | "cos" => {
                if self.chart.kind(idx) != CoordKind::Trig {
                    return Err((off, format!("`{coord}` is not declared as a trig coordinate")));
                }
                if !k.is_one() {
                    return Err((off, format!("{name} takes the bare coordinate `{coord}`")));
                }
                let atom = if name == "sin" {
                    Atom { sin: 1, ..Atom::default() }
                } else {
                    Atom { cos: 1, ..Atom::default() }
                };
                Ok(Expr::atom(self.chart, idx, atom))
            }
            _ => {
                if self.chart.kind(idx) != CoordKind::Exp {
                    return Err((off, format!("`{coord}` is not declared as an exp coordinate")));
                }
                let exp = k
                    .is_integer()
                    .then(|| k.to_integer().to_i32())
                    .flatten()
                    .ok_or((off, "exponential rate must be an integer".to_string()))?;
                Ok(Expr::atom(self.chart, idx, Atom { exp, ..Atom::default() }))
            }
        }
    }
}

pub(super) fn parse(
    chart: &Arc<Chart>,
    src: &str,
    params: &BTreeMap<String, Rational>,
) -> Result<Expr, ParseError> {
    let err = |(offset, message): (usize, String)| ParseError {
        message,
        offset,
        source_text: src.to_string(),
    };
    let toks = lex(src).map_err(err)?;
    if toks.is_empty() {
        return Err(err((0, "empty expression".to_string())));
    }
    let mut p = Parser {
        chart,
        params,
        toks,
        pos: 0,
        end: src.len(),
    };
    let e = p.sum().map_err(err)?;
    if p.pos < p.toks.len() {
        let off = p.offset();
        return Err(err((off, "trailing input".to_string())));
    }
    Ok(e)
}

/// Parses a rational literal such as `-3/4`, `2`, or `1/2`.
pub fn parse_rational(src: &str) -> Option<Rational> {
    let chart = Chart::new(Vec::new()).ok()?;
    parse(&chart, src, &BTreeMap::new()).ok()?.as_constant()
}
