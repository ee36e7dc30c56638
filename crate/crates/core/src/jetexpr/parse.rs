//! Recursive-descent parser for the expression grammar.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::atom::{Coordinate, GenericId, JetAtom, Var};
use super::expr::Expr;
use crate::algebra::GaussianRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier `{name}` at {pos}")]
    UnknownIdentifier { pos: usize, name: String },
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.sum()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ParseError {
        ParseError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<(), ParseError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", b as char)))
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    terms.push(self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    terms.push(negate(t));
                }
                _ => break,
            }
        }
        if terms.len() == 1 {
            return Ok(terms.pop().expect("one term"));
        }
        if terms.iter().all(|t| t.as_literal().is_some()) {
            let mut acc = GaussianRational::zero();
            for t in &terms {
                acc += &t.as_literal().expect("literal");
            }
            return Ok(Expr::scalar(acc));
        }
        Ok(Expr::Sum(terms))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut sign = false;
        while self.peek() == Some(b'-') {
            self.pos += 1;
            sign = !sign;
        }
        let mut coef = GaussianRational::one();
        let mut saw_literal = false;
        let mut factors = Vec::new();
        loop {
            let f = self.factor()?;
            match literal_of(&f) {
                Some(c) => {
                    coef = &coef * &c;
                    saw_literal = true;
                }
                None => factors.push(f),
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        if sign {
            coef = -coef;
            saw_literal = true;
        }
        if factors.is_empty() {
            return Ok(Expr::scalar(coef));
        }
        let body = if factors.len() == 1 { factors.pop().expect("one factor") } else { Expr::Prod(factors) };
        if coef.is_zero() {
            return Ok(Expr::Zero);
        }
        if saw_literal && !coef.is_one() {
            Ok(Expr::ScalarMul(coef, Box::new(body)))
        } else {
            Ok(body)
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let num = self.digits();
        let mut val = BigRational::from_integer(num);
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            if !self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
                return Err(self.err("expected denominator"));
            }
            let den = self.digits();
            if den.is_zero() {
                return Err(self.err("zero denominator"));
            }
            val /= BigRational::from_integer(den);
        }
        Ok(Expr::scalar(GaussianRational::new(val, BigRational::zero())))
    }

    fn digits(&mut self) -> BigInt {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii").parse().expect("digits")
    }

    fn ident(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii").to_string();
        let mut index = [0u8; 4];
        let mut has_suffix = false;
        if self.src.get(self.pos) == Some(&b'_') {
            self.pos += 1;
            has_suffix = true;
            let s = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_lowercase() {
                self.pos += 1;
            }
            let suffix = &self.src[s..self.pos];
            if suffix.is_empty() {
                return Err(self.err("empty jet suffix"));
            }
            let mut k = 0;
            while k < suffix.len() {
                let c = match suffix[k] {
                    b'y' => Coordinate::Y,
                    b'z' => Coordinate::Z,
                    _ => {
                        return Err(ParseError::Syntax {
                            pos: s + k,
                            msg: "jet suffix letters are y, z, yb, zb".into(),
                        })
                    }
                };
                k += 1;
                let c = if suffix.get(k) == Some(&b'b') {
                    k += 1;
                    if c == Coordinate::Y {
                        Coordinate::Yb
                    } else {
                        Coordinate::Zb
                    }
                } else {
                    c
                };
                index[c.index()] = index[c.index()].saturating_add(1);
            }
        }
        if self.peek() == Some(b'(') && !has_suffix {
            if let Some(e) = self.call(&name, start)? {
                return Ok(e);
            }
        }
        let unknown = || ParseError::UnknownIdentifier { pos: start, name: name.clone() };
        let scalar_like = |e: Expr| -> Result<Expr, ParseError> {
            if has_suffix {
                // jets of constants vanish
                Ok(Expr::Zero)
            } else {
                Ok(e)
            }
        };
        let var = match name.as_str() {
            "I" => return scalar_like(Expr::IdentityMatrix),
            "i" => return scalar_like(Expr::scalar(GaussianRational::i())),
            "y" | "z" | "yb" | "zb" => {
                let c = Coordinate::from_name(&name).expect("coordinate");
                if has_suffix {
                    return Err(ParseError::Syntax { pos: start, msg: "coordinates take no jet suffix".into() });
                }
                return Ok(Expr::Coord(c));
            }
            "J" => Var::J,
            "Jinv" => Var::Jinv,
            "X" => Var::X,
            "M" => Var::Const("M".into()),
            "Q" | "Phi" | "F" => Var::Generic(GenericId::free(&name)),
            _ => {
                if let Some(k) = numbered(&name, "tau") {
                    let dim = crate::config::lie_basis().dim();
                    if k == 0 || k > dim {
                        return Err(unknown());
                    }
                    Var::Tau((k - 1) as u8)
                } else if let Some(k) = numbered(&name, "W") {
                    if k == 0 || crate::recursion::nonlocal::try_get(k as u32).is_none() {
                        return Err(unknown());
                    }
                    Var::Nonlocal(k as u32)
                } else if numbered(&name, "P").is_some() {
                    Var::Generic(GenericId::free(&name))
                } else {
                    return Err(unknown());
                }
            }
        };
        if var.is_constant() && has_suffix {
            return Ok(Expr::Zero);
        }
        Ok(Expr::Atom(JetAtom::with_index(var, index)))
    }

    fn call(&mut self, name: &str, start: usize) -> Result<Option<Expr>, ParseError> {
        let deriv = match name {
            "Dy" => Some(Coordinate::Y),
            "Dz" => Some(Coordinate::Z),
            "Dyb" => Some(Coordinate::Yb),
            "Dzb" => Some(Coordinate::Zb),
            _ => None,
        };
        if !matches!(name, "Dy" | "Dz" | "Dyb" | "Dzb" | "IDzb" | "comm" | "tr") {
            if name.is_empty() {
                return Err(ParseError::Syntax { pos: start, msg: "expected identifier".into() });
            }
            return Ok(None);
        }
        self.expect(b'(')?;
        let a = self.sum()?;
        let e = if let Some(c) = deriv {
            Expr::deriv(c, a)
        } else if name == "IDzb" {
            Expr::inv_dzbar(a)
        } else if name == "tr" {
            Expr::trace(a)
        } else {
            self.expect(b',')?;
            let b = self.sum()?;
            Expr::comm(a, b)
        };
        self.expect(b')')?;
        Ok(Some(e))
    }
}

fn numbered(name: &str, prefix: &str) -> Option<usize> {
    let rest = name.strip_prefix(prefix)?;
    if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) || rest.starts_with('0') {
        return None;
    }
    rest.parse().ok()
}

fn literal_of(e: &Expr) -> Option<GaussianRational> {
    match e {
        Expr::IdentityMatrix | Expr::Zero | Expr::ScalarMul(..) | Expr::Sum(_) => e.as_literal(),
        _ => None,
    }
}

fn negate(e: Expr) -> Expr {
    match e {
        Expr::Zero => Expr::Zero,
        Expr::ScalarMul(c, b) => {
            let n = -c;
            if n.is_one() {
                *b
            } else {
                Expr::ScalarMul(n, b)
            }
        }
        other => -other,
    }
}
