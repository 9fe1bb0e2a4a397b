//! Expression parser for polynomials, derivations and endomorphisms.
//!
//! Grammar (whitespace insignificant, variables indexed from 1):
//!
//! ```text
//! poly     := ['+'|'-'] term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := primary ('^' nat)*
//! primary  := rational | var | '(' poly ')'
//! var      := 'x' nat
//! rational := nat ('/' nat)?
//! deriv    := ['+'|'-'] dterm (('+'|'-') dterm)*   |   '0'
//! dterm    := (factor '*')* 'd' nat
//! endo     := assign (';' assign)*
//! assign   := 'x' nat '->' poly
//! ```
//!
//! `H_i` is written `x<i>*d<i>`. Endomorphism assignments may omit
//! variables, which then map to themselves; assigning one twice is an error.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::endomorph::PolyEndo;
use crate::liederiv::Derivation;
use crate::polyalg::{Polynomial, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("parse error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        position,
        message: message.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Nat(BigInt),
    Var(usize),
    Dvar(usize),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    Semi,
    Arrow,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Nat(n) => write!(f, "number {n}"),
            Tok::Var(i) => write!(f, "x{i}"),
            Tok::Dvar(i) => write!(f, "d{i}"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Semi => write!(f, "';'"),
            Tok::Arrow => write!(f, "'->'"),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokenize(text: &'a str) -> Result<Vec<(usize, Tok)>, ParseError> {
        let mut lx = Lexer {
            src: text.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        loop {
            lx.skip_ws();
            if lx.pos >= lx.src.len() {
                return Ok(out);
            }
            let start = lx.pos;
            let c = lx.src[lx.pos];
            let tok = match c {
                b'+' => {
                    lx.pos += 1;
                    Tok::Plus
                }
                b'-' => {
                    lx.pos += 1;
                    if lx.pos < lx.src.len() && lx.src[lx.pos] == b'>' {
                        lx.pos += 1;
                        Tok::Arrow
                    } else {
                        Tok::Minus
                    }
                }
                b'*' => {
                    lx.pos += 1;
                    Tok::Star
                }
                b'^' => {
                    lx.pos += 1;
                    Tok::Caret
                }
                b'/' => {
                    lx.pos += 1;
                    Tok::Slash
                }
                b'(' => {
                    lx.pos += 1;
                    Tok::LParen
                }
                b')' => {
                    lx.pos += 1;
                    Tok::RParen
                }
                b';' => {
                    lx.pos += 1;
                    Tok::Semi
                }
                b'0'..=b'9' => Tok::Nat(lx.number()),
                b'x' => {
                    lx.pos += 1;
                    Tok::Var(lx.index(start)?)
                }
                b'd' => {
                    lx.pos += 1;
                    Tok::Dvar(lx.index(start)?)
                }
                other => {
                    return err(start, format!("unexpected character '{}'", other as char));
                }
            };
            out.push((start, tok));
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn number(&mut self) -> BigInt {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .unwrap()
    }

    fn index(&mut self, start: usize) -> Result<usize, ParseError> {
        if self.pos >= self.src.len() || !self.src[self.pos].is_ascii_digit() {
            return err(start, "expected a variable index after 'x' or 'd'");
        }
        let n = self.number();
        match usize::try_from(&n) {
            Ok(v) if v >= 1 => Ok(v),
            _ => err(start, format!("invalid variable index {n}")),
        }
    }
}

struct Parser {
    tokens: Vec<(usize, Tok)>,
    cursor: usize,
    nvars: usize,
    end: usize,
}

impl Parser {
    fn new(text: &str, nvars: usize) -> Result<Self, ParseError> {
        assert!(nvars >= 1, "need at least one variable");
        Ok(Parser {
            tokens: Lexer::tokenize(text)?,
            cursor: 0,
            nvars,
            end: text.len(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.cursor).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.tokens
            .get(self.cursor)
            .map(|(p, _)| *p)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.cursor).map(|(_, t)| t.clone());
        if t.is_some() {
            self.cursor += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<(), ParseError> {
        match self.bump() {
            Some(t) if &t == want => Ok(()),
            Some(t) => err(self.tokens[self.cursor - 1].0, format!("expected {want}, found {t}")),
            None => err(self.end, format!("expected {want}, found end of input")),
        }
    }

    fn expect_done(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => err(self.pos(), format!("unexpected {t}")),
        }
    }

    fn check_var(&self, idx: usize, at: usize) -> Result<usize, ParseError> {
        if idx > self.nvars {
            return err(
                at,
                format!("variable index {idx} exceeds the declared count {}", self.nvars),
            );
        }
        Ok(idx - 1)
    }

    // sign handling shared by poly and deriv sums
    fn take_sign(&mut self) -> bool {
        match self.peek() {
            Some(Tok::Minus) => {
                self.cursor += 1;
                true
            }
            Some(Tok::Plus) => {
                self.cursor += 1;
                false
            }
            _ => false,
        }
    }

    fn poly(&mut self) -> Result<Polynomial, ParseError> {
        let mut negative = self.take_sign();
        let mut acc = Polynomial::zero(self.nvars);
        loop {
            let t = self.term()?;
            acc = if negative { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(Tok::Plus) => {
                    self.cursor += 1;
                    negative = false;
                }
                Some(Tok::Minus) => {
                    self.cursor += 1;
                    negative = true;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.cursor += 1;
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let mut base = self.primary()?;
        while self.peek() == Some(&Tok::Caret) {
            self.cursor += 1;
            let at = self.pos();
            match self.bump() {
                Some(Tok::Nat(n)) => match u32::try_from(&n) {
                    Ok(e) => base = base.pow(e),
                    Err(_) => return err(at, format!("exponent {n} is too large")),
                },
                Some(t) => return err(at, format!("expected an exponent, found {t}")),
                None => return err(self.end, "expected an exponent, found end of input"),
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Polynomial, ParseError> {
        let at = self.pos();
        match self.bump() {
            Some(Tok::Nat(num)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.cursor += 1;
                    let dat = self.pos();
                    match self.bump() {
                        Some(Tok::Nat(den)) => {
                            if den.is_zero() {
                                return err(dat, "malformed rational: zero denominator");
                            }
                            Ok(Polynomial::constant(self.nvars, Rational::new(num, den)))
                        }
                        Some(t) => err(dat, format!("malformed rational: expected denominator, found {t}")),
                        None => err(self.end, "malformed rational: expected denominator"),
                    }
                } else {
                    Ok(Polynomial::constant(self.nvars, Rational::from_integer(num)))
                }
            }
            Some(Tok::Var(i)) => {
                let var = self.check_var(i, at)?;
                Ok(Polynomial::variable(self.nvars, var))
            }
            Some(Tok::LParen) => {
                let inner = self.poly()?;
                self.expect(&Tok::RParen)?;
                Ok(inner)
            }
            Some(t) => err(at, format!("expected a number, variable or '(', found {t}")),
            None => err(self.end, "expected a number, variable or '(', found end of input"),
        }
    }

    fn deriv(&mut self) -> Result<Derivation, ParseError> {
        // a bare "0" denotes the zero derivation
        if self.tokens.len() == 1 {
            if let Some(Tok::Nat(n)) = self.peek() {
                if n.is_zero() {
                    self.cursor += 1;
                    return Ok(Derivation::zero(self.nvars));
                }
            }
        }
        let mut negative = self.take_sign();
        let mut acc = Derivation::zero(self.nvars);
        loop {
            let t = self.dterm()?;
            acc = if negative { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(Tok::Plus) => {
                    self.cursor += 1;
                    negative = false;
                }
                Some(Tok::Minus) => {
                    self.cursor += 1;
                    negative = true;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn dterm(&mut self) -> Result<Derivation, ParseError> {
        let mut coeff = Polynomial::one(self.nvars);
        loop {
            let at = self.pos();
            if let Some(Tok::Dvar(i)) = self.peek() {
                let var = self.check_var(*i, at)?;
                self.cursor += 1;
                let mut coeffs = vec![Polynomial::zero(self.nvars); self.nvars];
                coeffs[var] = coeff;
                return Ok(Derivation::new(coeffs));
            }
            coeff = coeff.mul(&self.factor()?);
            self.expect(&Tok::Star)?;
        }
    }

    fn endo(&mut self) -> Result<PolyEndo, ParseError> {
        let mut images: Vec<Option<Polynomial>> = vec![None; self.nvars];
        loop {
            let at = self.pos();
            let var = match self.bump() {
                Some(Tok::Var(i)) => self.check_var(i, at)?,
                Some(t) => return err(at, format!("expected x<k> on the left of '->', found {t}")),
                None => return err(self.end, "expected an assignment 'x<k> -> <poly>'"),
            };
            self.expect(&Tok::Arrow)?;
            let image = self.poly()?;
            if images[var].is_some() {
                return err(at, format!("variable x{} assigned twice", var + 1));
            }
            images[var] = Some(image);
            match self.peek() {
                Some(Tok::Semi) => {
                    self.cursor += 1;
                }
                _ => break,
            }
        }
        Ok(PolyEndo::new(
            images
                .into_iter()
                .enumerate()
                .map(|(i, im)| im.unwrap_or_else(|| Polynomial::variable(self.nvars, i)))
                .collect(),
        ))
    }
}

/// Parses a polynomial in `nvars` variables.
pub fn parse_polynomial(text: &str, nvars: usize) -> Result<Polynomial, ParseError> {
    let mut p = Parser::new(text, nvars)?;
    let out = p.poly()?;
    p.expect_done()?;
    Ok(out)
}

/// Parses a derivation such as `d1 + x1*d2` or `-2*x2*d1 + d2`.
pub fn parse_derivation(text: &str, nvars: usize) -> Result<Derivation, ParseError> {
    let mut p = Parser::new(text, nvars)?;
    let out = p.deriv()?;
    p.expect_done()?;
    Ok(out)
}

/// Parses an endomorphism such as `x1 -> x1 + x2^2; x2 -> x2`; unmentioned
/// variables map to themselves.
pub fn parse_endo(text: &str, nvars: usize) -> Result<PolyEndo, ParseError> {
    let mut p = Parser::new(text, nvars)?;
    let out = p.endo()?;
    p.expect_done()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{rat, ratio};

    fn x(nvars: usize, i: usize) -> Polynomial {
        Polynomial::variable(nvars, i)
    }

    #[test]
    fn poly_examples() {
        let p = parse_polynomial("x1^2*x2 - 1/2", 2).unwrap();
        let expect = &(&x(2, 0).pow(2) * &x(2, 1)) - &Polynomial::constant(2, ratio(1, 2));
        assert_eq!(p, expect);
        assert_eq!(parse_polynomial("-x1", 2).unwrap(), x(2, 0).neg());
        assert_eq!(
            parse_polynomial("(x1+1)*(x1-1)", 1).unwrap(),
            &x(1, 0).pow(2) - &Polynomial::one(1)
        );
        assert_eq!(parse_polynomial("3/2*x1", 1).unwrap(), x(1, 0).scale(&ratio(3, 2)));
        assert_eq!(parse_polynomial("0", 3).unwrap(), Polynomial::zero(3));
        // postfix powers apply leftmost-first
        assert_eq!(parse_polynomial("x1^2^3", 1).unwrap(), x(1, 0).pow(6));
    }

    #[test]
    fn deriv_examples() {
        let d = parse_derivation("d1 + x1*d2", 2).unwrap();
        let expect = Derivation::new(vec![Polynomial::one(2), x(2, 0)]);
        assert_eq!(d, expect);
        let d = parse_derivation("-2*x2*d1 + d2", 2).unwrap();
        let expect = Derivation::new(vec![x(2, 1).scale(&rat(-2)), Polynomial::one(2)]);
        assert_eq!(d, expect);
        // H_1 is spelled x1*d1
        assert_eq!(parse_derivation("x1*d1", 2).unwrap(), Derivation::euler(2, 0));
        assert_eq!(
            parse_derivation("(x1 + x2)*d1", 2).unwrap(),
            Derivation::new(vec![&x(2, 0) + &x(2, 1), Polynomial::zero(2)])
        );
        assert_eq!(parse_derivation("0", 2).unwrap(), Derivation::zero(2));
        assert_eq!(
            parse_derivation("-d2", 2).unwrap(),
            Derivation::partial(2, 1).neg()
        );
    }

    #[test]
    fn endo_examples() {
        let s = parse_endo("x1 -> x1 + x2^2", 2).unwrap();
        assert_eq!(s, PolyEndo::new(vec![&x(2, 0) + &x(2, 1).pow(2), x(2, 1)]));
        let id = parse_endo("x2 -> x2", 2).unwrap();
        assert_eq!(id, PolyEndo::identity(2));
        let swapped = parse_endo("x1 -> x2; x2 -> x1", 2).unwrap();
        assert_eq!(swapped, PolyEndo::new(vec![x(2, 1), x(2, 0)]));
    }

    #[test]
    fn error_positions_and_messages() {
        let e = parse_polynomial("x1 + ", 2).unwrap_err();
        assert_eq!(e.position, 5);
        let e = parse_polynomial("x3", 2).unwrap_err();
        assert!(e.message.contains("exceeds the declared count 2"));
        let e = parse_polynomial("1/0", 2).unwrap_err();
        assert!(e.message.contains("zero denominator"));
        let e = parse_polynomial("x1 $ x2", 2).unwrap_err();
        assert!(e.message.contains("unexpected character"));
        let e = parse_derivation("x1*x2", 2).unwrap_err();
        assert!(e.position > 0);
        let e = parse_endo("x1 -> x1; x1 -> x2", 2).unwrap_err();
        assert!(e.message.contains("assigned twice"));
        let e = parse_polynomial("x1 x2", 2).unwrap_err();
        assert!(e.message.contains("unexpected x2"));
    }

    #[test]
    fn display_reparses_to_equal_values() {
        let mut rng = crate::sample::SampleRng::new(11);
        for _ in 0..200 {
            let nvars = rng.below(3) + 1;
            let p = crate::sample::polynomial(&mut rng, nvars, 5, 5);
            assert_eq!(parse_polynomial(&p.to_string(), nvars).unwrap(), p);
            let d = crate::sample::derivation(&mut rng, nvars, 4);
            assert_eq!(parse_derivation(&d.to_string(), nvars).unwrap(), d);
            let t = crate::sample::tame(&mut rng, nvars, 3, 3, 9).endo();
            assert_eq!(parse_endo(&t.to_string(), nvars).unwrap(), t);
        }
    }
}
