//! Recursive-descent parser for polynomial strings.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*      divisor must be a nonzero constant
//! unary := ('+' | '-') unary | power
//! power := atom ('^' integer)?
//! atom  := integer | variable | '(' expr ')'
//! ```
//!
//! Variables are `x1..xn`, with `x, y, z` accepted as aliases when `n <= 3`.

use num_bigint::BigInt;
use thiserror::Error;

use super::{Polynomial, Ring};

/// Parse failure with the 1-based column of the offending character.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at column {column} in {input:?}: {message}")]
pub struct ParseError {
    pub input: String,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

struct Parser<'a> {
    ring: Ring,
    input: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

pub(super) fn parse(ring: Ring, input: &str) -> Result<Polynomial, ParseError> {
    let toks = tokenize(ring, input)?;
    let mut p = Parser { ring, input, toks, pos: 0 };
    let f = p.expr()?;
    match p.peek() {
        Tok::End => Ok(f),
        t => Err(p.error(format!("unexpected {}", describe(t)))),
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(v) => format!("number {v}"),
        Tok::Var(_) => "variable".into(),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
        Tok::End => "end of input".into(),
    }
}

fn tokenize(ring: Ring, input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let err = |column: usize, message: String| ParseError { input: input.to_string(), column, message };
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = simple {
            out.push((t, col));
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((Tok::Int(digits.parse().expect("digits")), col));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let name: String = chars[start..i].iter().collect();
            let index = match name.as_str() {
                "x" | "y" | "z" if ring.nvars <= 3 => Some((c as u8 - b'x') as usize),
                _ if c == 'x' && name.len() > 1 => name[1..].parse::<usize>().ok().filter(|&k| k >= 1).map(|k| k - 1),
                _ => None,
            };
            match index {
                Some(k) if k < ring.nvars => out.push((Tok::Var(k), col)),
                _ => return Err(err(col, format!("unknown variable {name:?} in a ring with {} variables", ring.nvars))),
            }
            continue;
        }
        return Err(err(col, format!("unexpected character {c:?}")));
    }
    out.push((Tok::End, input.chars().count() + 1));
    Ok(out)
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: String) -> ParseError {
        ParseError { input: self.input.to_string(), column: self.toks[self.pos].1, message }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    self.bump();
                    let divisor_at = self.pos;
                    let d = self.unary()?;
                    let constant = match (d.degree(), d.num_terms()) {
                        (Some(0), 1) => d.terms().next().map(|(_, c)| c.clone()),
                        _ => None,
                    };
                    let inv = constant.and_then(|c| c.inv().ok()).ok_or_else(|| ParseError {
                        input: self.input.to_string(),
                        column: self.toks[divisor_at].1,
                        message: "divisor must be a nonzero constant".into(),
                    })?;
                    acc = acc.scale(&inv);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.peek().clone() {
            Tok::Int(e) => {
                let e: u32 = e.try_into().map_err(|_| self.error("exponent too large".into()))?;
                self.bump();
                Ok(base.pow(e))
            }
            t => Err(self.error(format!("expected a non-negative integer exponent, found {}", describe(&t)))),
        }
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(self.ring.constant(self.ring.field.from_bigint(&v)))
            }
            Tok::Var(k) => {
                self.bump();
                Ok(self.ring.var(k))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(format!("expected ')', found {}", describe(self.peek()))));
                }
                self.bump();
                Ok(inner)
            }
            t => Err(self.error(format!("expected a number, variable or '(', found {}", describe(&t)))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Field;

    #[test]
    fn grammar_features() {
        let r = Ring::new(2, Field::Rationals);
        let f = r.parse(" (x + y)^2 - 1/2*x1*x2 ").unwrap();
        assert_eq!(f, r.parse("x^2 + 3/2*x*y + y^2").unwrap());
        assert_eq!(r.parse("-(-x)").unwrap(), r.var(0));
        assert_eq!(r.parse("x/2").unwrap(), r.parse("1/2*x").unwrap());
        let r5 = Ring::new(5, Field::Prime(7));
        assert_eq!(r5.parse("x5 * x1").unwrap().degree(), Some(2));
    }

    #[test]
    fn errors_carry_columns() {
        let r = Ring::new(2, Field::Rationals);
        let e = r.parse("x^^2").unwrap_err();
        assert_eq!(e.column, 3);
        assert_eq!(r.parse("x + z").unwrap_err().column, 5);
        assert_eq!(r.parse("(x + y").unwrap_err().column, 7);
        assert_eq!(r.parse("x / y").unwrap_err().column, 5);
        assert_eq!(r.parse("x / 0").unwrap_err().column, 5);
        assert_eq!(r.parse("x $ y").unwrap_err().column, 3);
        assert_eq!(r.parse("").unwrap_err().column, 1);
        let r4 = Ring::new(4, Field::Rationals);
        assert!(r4.parse("x").is_err());
        assert!(r4.parse("x0").is_err());
    }
}
