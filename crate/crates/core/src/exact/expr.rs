//! Parser for polynomial expressions over derivative symbols.
//!
//! Accepts the canonical rendering (`f1_1^2*f1_5 - f1_2*f1_3`) as well as
//! looser hand-written forms: implicit multiplication, parentheses, braces
//! around indices (`f{1}_{2}`), unicode minus, middle dot and superscript
//! exponents.

use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use super::{DerivSymbol, Poly, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("expression parse error at offset {offset}: {message}")]
pub struct ExprError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Sym(DerivSymbol),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Sup(u32),
    LParen,
    RParen,
}

fn superscript_digit(c: char) -> Option<u32> {
    match c {
        '⁰' => Some(0),
        '¹' => Some(1),
        '²' => Some(2),
        '³' => Some(3),
        '⁴' => Some(4),
        '⁵' => Some(5),
        '⁶' => Some(6),
        '⁷' => Some(7),
        '⁸' => Some(8),
        '⁹' => Some(9),
        _ => None,
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |offset: usize, message: String| ExprError { offset, message };

    let read_index = |i: &mut usize| -> Result<usize, ExprError> {
        let start = chars.get(*i).map(|c| c.0).unwrap_or(src.len());
        let braced = chars.get(*i).is_some_and(|c| c.1 == '{');
        if braced {
            *i += 1;
        }
        let mut digits = String::new();
        while let Some(&(_, c)) = chars.get(*i) {
            if c.is_ascii_digit() {
                digits.push(c);
                *i += 1;
            } else {
                break;
            }
        }
        if braced {
            if chars.get(*i).is_some_and(|c| c.1 == '}') {
                *i += 1;
            } else {
                return Err(err(start, "unclosed '{' in symbol index".into()));
            }
        }
        let v: usize = digits
            .parse()
            .map_err(|_| err(start, "expected a numeric index".into()))?;
        if v == 0 {
            return Err(err(start, "indices are 1-based".into()));
        }
        Ok(v)
    };

    while i < chars.len() {
        let (off, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push((off, Tok::Plus));
                i += 1;
            }
            '-' | '−' => {
                out.push((off, Tok::Minus));
                i += 1;
            }
            '*' | '·' | '×' => {
                out.push((off, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((off, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((off, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((off, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((off, Tok::RParen));
                i += 1;
            }
            c if superscript_digit(c).is_some() => {
                let mut e = 0u32;
                while let Some(d) = chars.get(i).and_then(|c| superscript_digit(c.1)) {
                    e = e * 10 + d;
                    i += 1;
                }
                out.push((off, Tok::Sup(e)));
            }
            c if c.is_ascii_digit() => {
                let mut digits = String::new();
                while let Some(&(_, c)) = chars.get(i) {
                    if c.is_ascii_digit() {
                        digits.push(c);
                        i += 1;
                    } else {
                        break;
                    }
                }
                out.push((off, Tok::Num(digits.parse().expect("ascii digits"))));
            }
            'f' => {
                i += 1;
                let color = read_index(&mut i)?;
                if !chars.get(i).is_some_and(|c| c.1 == '_') {
                    return Err(err(off, "expected '_' between color and position".into()));
                }
                i += 1;
                let position = read_index(&mut i)?;
                out.push((off, Tok::Sym(DerivSymbol::new(color, position))));
            }
            other => return Err(err(off, format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn fail<T>(&self, message: &str) -> Result<T, ExprError> {
        Err(ExprError {
            offset: self.offset(),
            message: message.to_string(),
        })
    }

    fn expr(&mut self) -> Result<Poly, ExprError> {
        let mut acc = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -self.term()?
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ExprError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.power()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let d = self.power()?;
                    let c = match d.terms().next() {
                        Some((m, c)) if d.num_terms() == 1 && m.is_one() => c.clone(),
                        _ => return self.fail("division only by nonzero constants"),
                    };
                    acc = acc.scale(&(Rational::from_integer(1.into()) / c));
                }
                Some(Tok::Num(_)) | Some(Tok::Sym(_)) | Some(Tok::LParen) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly, ExprError> {
        let mut base = self.primary()?;
        loop {
            match self.peek() {
                Some(Tok::Caret) => {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Num(n)) => {
                            self.pos += 1;
                            let e: u32 = n.try_into().map_err(|_| ExprError {
                                offset: self.offset(),
                                message: "exponent out of range".into(),
                            })?;
                            base = base.pow(e);
                        }
                        _ => return self.fail("expected an integer exponent after '^'"),
                    }
                }
                Some(Tok::Sup(e)) => {
                    let e = *e;
                    self.pos += 1;
                    base = base.pow(e);
                }
                _ => return Ok(base),
            }
        }
    }

    fn primary(&mut self) -> Result<Poly, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Poly::constant(Rational::from_integer(n)))
            }
            Some(Tok::Sym(s)) => {
                self.pos += 1;
                Ok(Poly::symbol(s))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.fail("expected ')'");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            _ => self.fail("expected a number, symbol or '('"),
        }
    }
}

/// Parses a polynomial expression.
pub fn parse_poly(src: &str) -> Result<Poly, ExprError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(ExprError {
            offset: 0,
            message: "empty expression".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.len(),
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.fail("unexpected trailing input");
    }
    Ok(out)
}

impl FromStr for Poly {
    type Err = ExprError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_poly(s)
    }
}
