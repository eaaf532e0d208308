//! Infix polynomial syntax.
//!
//! ```text
//! sum     := signed (('+' | '-') signed)*
//! signed  := '-' signed | product
//! product := power ('*' power)*
//! power   := atom ('^' INT)?
//! atom    := INT ('/' INT)? | IDENT | '(' sum ')'
//! ```
//!
//! `*` is mandatory between factors and `/` only appears inside rational
//! literals, so every canonical string has exactly one parse.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{MultiPoly, Rational, VarSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("at offset {pos}: unknown variable `{name}`")]
    UnknownVariable { pos: usize, name: String },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Int(text[start..i].parse().unwrap())));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(ParseError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{ch}`"),
                });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    vars: &'a VarSet,
    lets: &'a BTreeMap<String, MultiPoly>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn sum(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.signed()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.signed()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.signed()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn signed(&mut self) -> Result<MultiPoly, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(-self.signed()?);
        }
        self.product()
    }

    fn product(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.power()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MultiPoly, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            Some(Tok::Int(n)) => match u32::try_from(&n) {
                Ok(e) => Ok(base.pow(e)),
                Err(_) => {
                    self.at -= 1;
                    self.err("exponent too large")
                }
            },
            _ => {
                self.at -= 1;
                self.err("expected a non-negative integer exponent")
            }
        }
    }

    fn atom(&mut self) -> Result<MultiPoly, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.bump();
                    match self.bump() {
                        Some(Tok::Int(d)) if !d.is_zero() => {
                            Ok(MultiPoly::constant(self.vars, Rational::new(n, d)))
                        }
                        Some(Tok::Int(_)) => {
                            self.at -= 1;
                            self.err("zero denominator")
                        }
                        _ => {
                            self.at -= 1;
                            self.err("expected an integer denominator")
                        }
                    }
                } else {
                    Ok(MultiPoly::constant(self.vars, Rational::from_integer(n)))
                }
            }
            Some(Tok::Ident(name)) => {
                if let Some(p) = self.lets.get(&name) {
                    Ok(p.clone())
                } else {
                    MultiPoly::var(self.vars, &name)
                        .map_err(|_| ParseError::UnknownVariable { pos, name })
                }
            }
            Some(Tok::LParen) => {
                let inner = self.sum()?;
                if self.bump() != Some(Tok::RParen) {
                    self.at -= 1;
                    return self.err("expected `)`");
                }
                Ok(inner)
            }
            Some(_) => {
                self.at -= 1;
                self.err("expected a number, a name or `(`")
            }
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses `text` as a polynomial in `vars`.
pub fn parse(text: &str, vars: &VarSet) -> Result<MultiPoly, ParseError> {
    parse_with(text, vars, &BTreeMap::new())
}

/// Like [`parse`], but identifiers bound in `lets` expand to the given
/// polynomials. Bindings shadow variables of the same name.
pub fn parse_with(
    text: &str,
    vars: &VarSet,
    lets: &BTreeMap<String, MultiPoly>,
) -> Result<MultiPoly, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        vars,
        lets,
    };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let out = p.sum()?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(out)
}

/// Parses an integer or `a/b` literal, with optional leading `-`.
pub fn parse_rational(text: &str) -> Result<Rational, ParseError> {
    let empty = VarSet::new(Vec::<String>::new()).unwrap();
    let p = parse(text, &empty)?;
    p.constant_value().ok_or(ParseError::Syntax {
        pos: 0,
        msg: "not a rational constant".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{int, rat};
    use proptest::prelude::*;

    fn xyz() -> VarSet {
        VarSet::new(["x", "y", "z"]).unwrap()
    }

    #[test]
    fn zero_and_square() {
        assert!(parse("0", &xyz()).unwrap().is_zero());
        let sq = parse("(x*z - y^2)^2", &xyz()).unwrap();
        assert_eq!(sq.to_string(), "x^2*z^2 - 2*x*y^2*z + y^4");
    }

    #[test]
    fn surface_quartic() {
        let q = parse("x*(x*z^2 - 2*y^2*z + 5*z) + y^4 - 5*y^2 + 4", &xyz()).unwrap();
        assert_eq!(q.to_string(), "x^2*z^2 - 2*x*y^2*z + y^4 + 5*x*z - 5*y^2 + 4");
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse("x + w", &xyz()),
            Err(ParseError::UnknownVariable {
                pos: 4,
                name: "w".into()
            })
        );
        assert!(matches!(parse("x y", &xyz()), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse("x^y", &xyz()), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse("(x", &xyz()), Err(ParseError::Syntax { pos: 2, .. })));
        assert!(matches!(parse("1/0", &xyz()), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("", &xyz()), Err(ParseError::Syntax { pos: 0, .. })));
        assert!(matches!(parse("x $ y", &xyz()), Err(ParseError::Syntax { pos: 2, .. })));
    }

    #[test]
    fn lets_expand() {
        let v = xyz();
        let mut lets = BTreeMap::new();
        lets.insert("f".to_string(), parse("x*z - y^2", &v).unwrap());
        let p = parse_with("2*f + 5", &v, &lets).unwrap();
        assert_eq!(p, parse("2*x*z - 2*y^2 + 5", &v).unwrap());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/6").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("x").is_err());
    }

    fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        let term = (
            prop::collection::vec(0u32..4, 3),
            -20i64..20,
            1i64..6,
        );
        prop::collection::vec(term, 0..6).prop_map(|ts| {
            MultiPoly::from_terms(&xyz(), ts.into_iter().map(|(e, n, d)| (e, rat(n, d))))
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(p in arb_poly()) {
            let s = p.to_string();
            let back = parse(&s, &xyz()).unwrap();
            prop_assert_eq!(&back, &p);
            prop_assert_eq!(back.to_string(), s);
        }
    }
}
