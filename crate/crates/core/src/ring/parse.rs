//! Text syntax for ring elements.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power ('*' power)*
//! power  := atom ['^' digits]
//! atom   := digits ['/' digits] | 'x' | '(' expr ')'
//! ```
//!
//! Multiplication must be explicit (`2*x`, never `2x`). Rational literals
//! are only accepted for polynomial rings, and over GF(p) the denominator
//! must be invertible.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::PrimeField;
use super::{RingElem, RingError, RingSpec};

const MAX_EXPONENT: u32 = 4096;

pub fn parse_elem(ring: RingSpec, text: &str) -> Result<RingElem, RingError> {
    let mut p = Parser {
        ring,
        src: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(p.err("empty expression"));
    }
    let v = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        let msg = match p.peek() {
            Some(b'x') | Some(b'(') => "implicit multiplication is not allowed; use `*`",
            _ => "unexpected character",
        };
        return Err(p.err(msg));
    }
    Ok(v)
}

struct Parser<'a> {
    ring: RingSpec,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: &str) -> RingError {
        RingError::Parse {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RingElem, RingError> {
        let negate = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            if self.eat(b'+') {
                acc = acc + self.term()?;
            } else if self.eat(b'-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RingElem, RingError> {
        let mut acc = self.power()?;
        while self.eat(b'*') {
            acc = acc * self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<RingElem, RingError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits().ok_or_else(|| self.err("expected exponent"))?;
            let exp: u32 = digits
                .parse()
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| RingError::Parse {
                    position: start,
                    message: format!("exponent must be at most {MAX_EXPONENT}"),
                })?;
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn atom(&mut self) -> Result<RingElem, RingError> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => self.literal(),
            Some(b'x') => {
                let v = self
                    .ring
                    .var()
                    .ok_or_else(|| self.err("variable `x` is not allowed over Z"))?;
                self.pos += 1;
                Ok(v)
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(v)
            }
            Some(_) => Err(self.err("expected a number, `x` or `(`")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn literal(&mut self) -> Result<RingElem, RingError> {
        let start = self.pos;
        let numer: BigInt = self.digits().unwrap().parse().unwrap();
        self.skip_ws();
        if self.peek() != Some(b'/') {
            return Ok(self.ring.from_bigint(&numer));
        }
        let slash = self.pos;
        self.pos += 1;
        self.skip_ws();
        let denom: BigInt = self
            .digits()
            .ok_or_else(|| self.err("expected denominator"))?
            .parse()
            .unwrap();
        let bad = |message: String| RingError::Parse {
            position: start,
            message,
        };
        match self.ring {
            RingSpec::Integers => Err(RingError::Parse {
                position: slash,
                message: "rational literals are not allowed over Z".into(),
            }),
            _ if denom.is_zero() => Err(bad("zero denominator".into())),
            RingSpec::RationalPoly => Ok(RingSpec::rational_poly(vec![BigRational::new(
                numer, denom,
            )])),
            RingSpec::PrimeFieldPoly(p) => {
                let f = PrimeField(p.get());
                let d = f.reduce_big(&denom);
                if d == 0 {
                    return Err(bad(format!(
                        "denominator {denom} is not invertible in GF({})",
                        p.get()
                    )));
                }
                let n = self.ring.from_bigint(&numer);
                Ok(n * self
                    .ring
                    .from_bigint(&BigInt::from(super::poly::Field::inv(&f, &d))))
            }
        }
    }
}

/// Writes ascending `(numerator, denominator)` coefficients in the syntax
/// accepted by [`parse_elem`], highest degree first.
pub(super) fn write_poly(f: &mut fmt::Formatter<'_>, coeffs: &[(BigInt, BigInt)]) -> fmt::Result {
    if coeffs.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (k, (n, d)) in coeffs.iter().enumerate().rev() {
        if n.is_zero() {
            continue;
        }
        let neg = n.is_negative();
        if neg {
            write!(f, "-")?;
        } else if !first {
            write!(f, "+")?;
        }
        first = false;
        let mag = n.abs();
        let unit = mag.is_one() && d.is_one();
        if k == 0 || !unit {
            write!(f, "{mag}")?;
            if !d.is_one() {
                write!(f, "/{d}")?;
            }
            if k > 0 {
                write!(f, "*")?;
            }
        }
        match k {
            0 => {}
            1 => write!(f, "x")?,
            _ => write!(f, "x^{k}")?,
        }
    }
    Ok(())
}
