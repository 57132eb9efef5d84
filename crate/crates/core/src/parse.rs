//! Recursive-descent parser for polynomial state expressions such as `x*(L-x)`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' uint)?
//! atom   := number | 'x' | 'L' | '(' expr ')'
//! ```
//!
//! Numbers may be decimals (`0.25` reads as exactly `1/4`). `L` is the box length and
//! expands to 1 in the dimensionless coordinate. Division is only allowed by nonzero
//! constants; implicit multiplication (`2x`) is rejected.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::ParseError;
use crate::poly::{Rational, RationalPoly};

const MAX_EXPONENT: u32 = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Number(Rational),
    X,
    Length,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Position of the `/` is kept for error reporting during expansion.
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, u32),
}

impl Expr {
    /// Expands to a polynomial in `x` with `L = 1`.
    pub fn expand(&self) -> Result<RationalPoly, ParseError> {
        Ok(match self {
            Expr::Number(r) => RationalPoly::constant(r.clone()),
            Expr::X => RationalPoly::x(),
            Expr::Length => RationalPoly::one(),
            Expr::Neg(e) => -e.expand()?,
            Expr::Add(a, b) => &a.expand()? + &b.expand()?,
            Expr::Sub(a, b) => &a.expand()? - &b.expand()?,
            Expr::Mul(a, b) => &a.expand()? * &b.expand()?,
            Expr::Div(a, b, pos) => {
                let divisor = b.expand()?;
                match divisor.as_constant() {
                    None => {
                        return Err(ParseError::NonPolynomial {
                            pos: *pos,
                            message: "division by a non-constant expression".into(),
                        })
                    }
                    Some(c) if c.is_zero() => {
                        return Err(ParseError::Syntax { pos: *pos, message: "division by zero".into() })
                    }
                    Some(c) => a.expand()?.scale(&c.recip()),
                }
            }
            Expr::Pow(base, exp) => base.expand()?.pow(*exp),
        })
    }
}

/// A parsed state description together with its source text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateExpr {
    pub source: String,
    pub ast: Expr,
}

impl StateExpr {
    pub fn expand(&self) -> Result<RationalPoly, ParseError> {
        self.ast.expand()
    }
}

impl fmt::Display for StateExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Decimal(Rational),
    X,
    L,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => n.to_string(),
        Tok::Decimal(r) => r.to_string(),
        Tok::X => "x".into(),
        Tok::L => "L".into(),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let int_part = &src[start..i];
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    let frac_start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if frac_start == i {
                        return Err(ParseError::Syntax { pos: i, message: "expected digits after '.'".into() });
                    }
                    let digits: BigInt = format!("{int_part}{}", &src[frac_start..i]).parse().expect("digits");
                    let scale = BigInt::from(10).pow((i - frac_start) as u32);
                    Tok::Decimal(Rational::new(digits, scale))
                } else {
                    Tok::Int(int_part.parse().expect("digits"))
                }
            }
            _ => {
                i += 1;
                match c {
                    b'x' => Tok::X,
                    b'L' => Tok::L,
                    b'+' => Tok::Plus,
                    b'-' => Tok::Minus,
                    b'*' => Tok::Star,
                    b'/' => Tok::Slash,
                    b'^' => Tok::Caret,
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    _ => {
                        let ch = src[start..].chars().next().unwrap_or('?');
                        return Err(ParseError::Syntax { pos: start, message: format!("unexpected character '{ch}'") });
                    }
                }
            }
        };
        out.push((tok, start));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        self.at += 1;
        t
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos(), message: message.into() })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    let pos = self.pos();
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?), pos);
                }
                Some(Tok::X | Tok::L | Tok::LParen | Tok::Int(_) | Tok::Decimal(_)) => {
                    return self.syntax("implicit multiplication is not supported; use '*'");
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => match u32::try_from(&n) {
                Ok(e) if e <= MAX_EXPONENT => Ok(Expr::Pow(Box::new(base), e)),
                _ => Err(ParseError::Syntax { pos, message: format!("exponent {n} exceeds {MAX_EXPONENT}") }),
            },
            Some(Tok::Minus) => Err(ParseError::NonPolynomial { pos, message: "negative exponent".into() }),
            Some(Tok::Decimal(_)) => Err(ParseError::NonPolynomial { pos, message: "non-integer exponent".into() }),
            Some(t) => Err(ParseError::Syntax {
                pos,
                message: format!("expected a nonnegative integer exponent, found {}", describe(&t)),
            }),
            None => Err(ParseError::Syntax { pos, message: "expected an exponent".into() }),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(Expr::Number(Rational::from_integer(n))),
            Some(Tok::Decimal(r)) => Ok(Expr::Number(r)),
            Some(Tok::X) => Ok(Expr::X),
            Some(Tok::L) => Ok(Expr::Length),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(ParseError::Syntax { pos: self.pos_before(), message: "expected ')'".into() }),
                }
            }
            Some(t) => Err(ParseError::Syntax { pos, message: format!("unexpected {}", describe(&t)) }),
            None => Err(ParseError::Syntax { pos, message: "unexpected end of input".into() }),
        }
    }

    fn pos_before(&self) -> usize {
        self.toks.get(self.at.saturating_sub(1)).map_or(self.end, |(_, p)| *p)
    }
}

/// Parses a state expression; the AST is checked to expand to a polynomial.
pub fn parse_state(source: &str) -> Result<StateExpr, ParseError> {
    let toks = tokenize(source)?;
    let mut parser = Parser { toks, at: 0, end: source.len() };
    let ast = parser.expr()?;
    if let Some(t) = parser.peek() {
        let message = format!("unexpected {} after expression", describe(t));
        return parser.syntax(message);
    }
    ast.expand()?;
    Ok(StateExpr { source: source.to_string(), ast })
}

/// Parses and expands in one step.
pub fn parse_poly(source: &str) -> Result<RationalPoly, ParseError> {
    parse_state(source)?.expand()
}
