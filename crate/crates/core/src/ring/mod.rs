//! Exact arithmetic in the supported principal ideal domains: the integers
//! and univariate polynomials over the rationals or a prime field.
//!
//! Every [`RingElem`] carries the [`RingSpec`] it belongs to. The arithmetic
//! operators panic when the operands come from different rings (graph and
//! spline loading guarantee a single ring, so algorithm code never trips
//! this); the number-theoretic entry points ([`gcd`], [`lcm`], [`egcd`],
//! [`crt_solve`]) report the mismatch as [`RingError::MixedRings`] instead.
//!
//! Outputs are canonical associates: `|a|` over ℤ and the monic associate
//! for polynomials.

mod crt;
mod parse;
pub(crate) mod poly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use crt::{crt_solve, Congruence, CongruenceSystem};
pub use parse::parse_elem;

use poly::{Field, PrimeField, Rationals};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("operands belong to different rings ({left} and {right})")]
    MixedRings { left: RingSpec, right: RingSpec },
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible congruences: conditions {first} and {second} cannot hold together")]
    IncompatibleSystem { first: usize, second: usize },
    #[error("parse error at column {}: {message}", .position + 1)]
    Parse { position: usize, message: String },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unknown ring `{0}` (expected Z, Q[x] or GF(p)[x])")]
    UnknownRing(String),
}

/// A prime characteristic, validated on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, RingError> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(RingError::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

/// Deterministic Miller-Rabin for 64-bit inputs.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The base ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Integers,
    RationalPoly,
    PrimeFieldPoly(Prime),
}

impl RingSpec {
    pub fn prime_field_poly(p: u64) -> Result<Self, RingError> {
        Ok(RingSpec::PrimeFieldPoly(Prime::new(p)?))
    }

    pub fn is_polynomial(self) -> bool {
        !matches!(self, RingSpec::Integers)
    }

    pub fn zero(self) -> RingElem {
        self.int(0)
    }

    pub fn one(self) -> RingElem {
        self.int(1)
    }

    pub fn int(self, v: i64) -> RingElem {
        self.from_bigint(&BigInt::from(v))
    }

    /// Embeds an integer (as a constant polynomial for polynomial rings).
    pub fn from_bigint(self, v: &BigInt) -> RingElem {
        let value = match self {
            RingSpec::Integers => Value::Int(v.clone()),
            RingSpec::RationalPoly => Value::Rat(poly::trim(
                &Rationals,
                vec![BigRational::from_integer(v.clone())],
            )),
            RingSpec::PrimeFieldPoly(p) => {
                let f = PrimeField(p.0);
                Value::Fp(poly::trim(&f, vec![f.reduce_big(v)]))
            }
        };
        RingElem { ring: self, value }
    }

    /// The indeterminate `x`; `None` over ℤ.
    pub fn var(self) -> Option<RingElem> {
        let value = match self {
            RingSpec::Integers => return None,
            RingSpec::RationalPoly => Value::Rat(vec![BigRational::zero(), BigRational::one()]),
            RingSpec::PrimeFieldPoly(_) => Value::Fp(vec![0, 1]),
        };
        Some(RingElem { ring: self, value })
    }

    /// Builds a polynomial from ascending rational coefficients.
    pub fn rational_poly(coeffs: Vec<BigRational>) -> RingElem {
        RingElem {
            ring: RingSpec::RationalPoly,
            value: Value::Rat(poly::trim(&Rationals, coeffs)),
        }
    }

    /// Builds a polynomial from ascending integer coefficients, reduced into
    /// the coefficient field. Over ℤ only constant inputs make sense; higher
    /// coefficients are rejected with `None`.
    pub fn poly_from_ints(self, coeffs: &[i64]) -> Option<RingElem> {
        match self {
            RingSpec::Integers => match coeffs {
                [] => Some(self.zero()),
                [c] => Some(self.int(*c)),
                _ => None,
            },
            RingSpec::RationalPoly => Some(RingSpec::rational_poly(
                coeffs
                    .iter()
                    .map(|&c| BigRational::from_integer(c.into()))
                    .collect(),
            )),
            RingSpec::PrimeFieldPoly(p) => {
                let f = PrimeField(p.0);
                let c = coeffs.iter().map(|&c| f.reduce_big(&c.into())).collect();
                Some(RingElem {
                    ring: self,
                    value: Value::Fp(poly::trim(&f, c)),
                })
            }
        }
    }

    pub fn parse(self, text: &str) -> Result<RingElem, RingError> {
        parse_elem(self, text)
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::RationalPoly => write!(f, "Q[x]"),
            RingSpec::PrimeFieldPoly(p) => write!(f, "GF({})[x]", p.0),
        }
    }
}

impl FromStr for RingSpec {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, RingError> {
        let t = s.trim();
        match t {
            "Z" => return Ok(RingSpec::Integers),
            "Q[x]" => return Ok(RingSpec::RationalPoly),
            _ => {}
        }
        let p = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(")[x]"))
            .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
            .and_then(|d| d.parse::<u64>().ok())
            .ok_or_else(|| RingError::UnknownRing(s.to_string()))?;
        RingSpec::prime_field_poly(p)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Value {
    Int(BigInt),
    Rat(Vec<BigRational>),
    Fp(Vec<u64>),
}

/// An element of a [`RingSpec`]. Immutable; polynomial payloads are kept
/// without trailing zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElem {
    ring: RingSpec,
    value: Value,
}

fn prime(ring: RingSpec) -> PrimeField {
    match ring {
        RingSpec::PrimeFieldPoly(p) => PrimeField(p.0),
        _ => unreachable!("not a prime field ring"),
    }
}

impl RingElem {
    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Int(v) => v.is_zero(),
            Value::Rat(c) => c.is_empty(),
            Value::Fp(c) => c.is_empty(),
        }
    }

    pub fn is_unit(&self) -> bool {
        match &self.value {
            Value::Int(v) => v.abs().is_one(),
            Value::Rat(c) => c.len() == 1,
            Value::Fp(c) => c.len() == 1,
        }
    }

    /// Polynomial degree (`None` for zero and for integers).
    pub fn degree(&self) -> Option<usize> {
        match &self.value {
            Value::Int(_) => None,
            Value::Rat(c) => c.len().checked_sub(1),
            Value::Fp(c) => c.len().checked_sub(1),
        }
    }

    pub fn as_bigint(&self) -> Option<&BigInt> {
        match &self.value {
            Value::Int(v) => Some(v),
            _ => None,
        }
    }

    /// Ascending rational coefficients, for `Q[x]` elements.
    pub fn rational_coeffs(&self) -> Option<&[BigRational]> {
        match &self.value {
            Value::Rat(c) => Some(c),
            _ => None,
        }
    }

    /// Ascending residues in `0..p`, for `GF(p)[x]` elements.
    pub fn prime_field_coeffs(&self) -> Option<&[u64]> {
        match &self.value {
            Value::Fp(c) => Some(c),
            _ => None,
        }
    }

    pub(crate) fn same_ring(&self, other: &RingElem) -> Result<(), RingError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(RingError::MixedRings {
                left: self.ring,
                right: other.ring,
            })
        }
    }

    fn expect_same(&self, other: &RingElem) {
        if let Err(e) = self.same_ring(other) {
            panic!("{e}");
        }
    }

    fn with(&self, value: Value) -> RingElem {
        RingElem {
            ring: self.ring,
            value,
        }
    }

    /// Canonical associate: `|a|` for integers, the monic associate (or
    /// zero) for polynomials.
    pub fn normalize(&self) -> RingElem {
        match &self.value {
            Value::Int(v) => self.with(Value::Int(v.abs())),
            Value::Rat(c) => self.with(Value::Rat(poly::monic(&Rationals, c))),
            Value::Fp(c) => self.with(Value::Fp(poly::monic(&prime(self.ring), c))),
        }
    }

    pub fn is_associate(&self, other: &RingElem) -> bool {
        self.ring == other.ring && self.normalize() == other.normalize()
    }

    /// Euclidean division. Over ℤ the remainder lies in `0..|b|`; for
    /// polynomials `deg r < deg b`.
    pub fn div_rem(&self, b: &RingElem) -> Result<(RingElem, RingElem), RingError> {
        self.same_ring(b)?;
        if b.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        Ok(match (&self.value, &b.value) {
            (Value::Int(x), Value::Int(y)) => {
                let r = x.mod_floor(&y.abs());
                let q = (x - &r) / y;
                (self.with(Value::Int(q)), self.with(Value::Int(r)))
            }
            (Value::Rat(x), Value::Rat(y)) => {
                let (q, r) = poly::div_rem(&Rationals, x, y);
                (self.with(Value::Rat(q)), self.with(Value::Rat(r)))
            }
            (Value::Fp(x), Value::Fp(y)) => {
                let (q, r) = poly::div_rem(&prime(self.ring), x, y);
                (self.with(Value::Fp(q)), self.with(Value::Fp(r)))
            }
            _ => unreachable!(),
        })
    }

    /// `self / b` when `b` divides `self` exactly.
    pub fn div_exact(&self, b: &RingElem) -> Option<RingElem> {
        if b.is_zero() {
            return self.is_zero().then(|| self.clone());
        }
        let (q, r) = self.div_rem(b).ok()?;
        r.is_zero().then_some(q)
    }

    /// True iff `self` divides `x` (zero divides only zero).
    pub fn divides(&self, x: &RingElem) -> bool {
        self.expect_same(x);
        if self.is_zero() {
            return x.is_zero();
        }
        x.div_rem(self).map(|(_, r)| r.is_zero()).unwrap_or(false)
    }

    /// Canonical representative of `self` modulo `m`: the least
    /// non-negative residue over ℤ, the remainder for polynomials. A zero
    /// modulus leaves `self` unchanged; a unit modulus gives zero.
    pub fn reduce_mod(&self, m: &RingElem) -> RingElem {
        self.expect_same(m);
        if m.is_zero() {
            return self.clone();
        }
        self.div_rem(m).expect("nonzero modulus").1
    }

    pub fn pow(&self, mut exp: u32) -> RingElem {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Unit `u` with `self = u * normalize(self)`; one for zero.
    fn unit_part(&self) -> RingElem {
        match &self.value {
            Value::Int(v) if v.is_negative() => self.ring.int(-1),
            Value::Rat(c) if !c.is_empty() => {
                self.with(Value::Rat(vec![c.last().unwrap().clone()]))
            }
            Value::Fp(c) if !c.is_empty() => self.with(Value::Fp(vec![*c.last().unwrap()])),
            _ => self.ring.one(),
        }
    }

    /// Inverse of a unit.
    fn unit_inverse(&self) -> RingElem {
        match &self.value {
            Value::Int(_) => self.clone(),
            Value::Rat(c) => self.with(Value::Rat(vec![c[0].recip()])),
            Value::Fp(c) => self.with(Value::Fp(vec![prime(self.ring).inv(&c[0])])),
        }
    }

    fn add_ref(&self, o: &RingElem) -> RingElem {
        self.expect_same(o);
        match (&self.value, &o.value) {
            (Value::Int(x), Value::Int(y)) => self.with(Value::Int(x + y)),
            (Value::Rat(x), Value::Rat(y)) => self.with(Value::Rat(poly::add(&Rationals, x, y))),
            (Value::Fp(x), Value::Fp(y)) => {
                self.with(Value::Fp(poly::add(&prime(self.ring), x, y)))
            }
            _ => unreachable!(),
        }
    }

    fn sub_ref(&self, o: &RingElem) -> RingElem {
        self.expect_same(o);
        match (&self.value, &o.value) {
            (Value::Int(x), Value::Int(y)) => self.with(Value::Int(x - y)),
            (Value::Rat(x), Value::Rat(y)) => self.with(Value::Rat(poly::sub(&Rationals, x, y))),
            (Value::Fp(x), Value::Fp(y)) => {
                self.with(Value::Fp(poly::sub(&prime(self.ring), x, y)))
            }
            _ => unreachable!(),
        }
    }

    fn mul_ref(&self, o: &RingElem) -> RingElem {
        self.expect_same(o);
        match (&self.value, &o.value) {
            (Value::Int(x), Value::Int(y)) => self.with(Value::Int(x * y)),
            (Value::Rat(x), Value::Rat(y)) => self.with(Value::Rat(poly::mul(&Rationals, x, y))),
            (Value::Fp(x), Value::Fp(y)) => {
                self.with(Value::Fp(poly::mul(&prime(self.ring), x, y)))
            }
            _ => unreachable!(),
        }
    }

    fn neg_ref(&self) -> RingElem {
        match &self.value {
            Value::Int(x) => self.with(Value::Int(-x)),
            Value::Rat(x) => self.with(Value::Rat(poly::neg(&Rationals, x))),
            Value::Fp(x) => self.with(Value::Fp(poly::neg(&prime(self.ring), x))),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $imp:ident) => {
        impl $trait<&RingElem> for &RingElem {
            type Output = RingElem;
            fn $method(self, rhs: &RingElem) -> RingElem {
                self.$imp(rhs)
            }
        }
        impl $trait<RingElem> for RingElem {
            type Output = RingElem;
            fn $method(self, rhs: RingElem) -> RingElem {
                (&self).$imp(&rhs)
            }
        }
        impl $trait<&RingElem> for RingElem {
            type Output = RingElem;
            fn $method(self, rhs: &RingElem) -> RingElem {
                (&self).$imp(rhs)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        self.neg_ref()
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        self.neg_ref()
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Int(v) => write!(f, "{v}"),
            Value::Rat(c) => {
                let terms: Vec<(BigInt, BigInt)> = c
                    .iter()
                    .map(|q| (q.numer().clone(), q.denom().clone()))
                    .collect();
                parse::write_poly(f, &terms)
            }
            Value::Fp(c) => {
                let terms: Vec<(BigInt, BigInt)> = c
                    .iter()
                    .map(|&v| (BigInt::from(v), BigInt::one()))
                    .collect();
                parse::write_poly(f, &terms)
            }
        }
    }
}

/// Normalized greatest common divisor; `gcd(0, a) = normalize(a)`.
pub fn gcd(a: &RingElem, b: &RingElem) -> Result<RingElem, RingError> {
    a.same_ring(b)?;
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = x.reduce_mod(&y);
        x = y;
        y = r;
    }
    Ok(x.normalize())
}

/// Normalized least common multiple; zero if either operand is zero.
pub fn lcm(a: &RingElem, b: &RingElem) -> Result<RingElem, RingError> {
    let g = gcd(a, b)?;
    if g.is_zero() {
        return Ok(g);
    }
    let q = a.div_exact(&g).expect("gcd divides its operand");
    Ok((q * b).normalize())
}

/// gcd of a list; the empty gcd is zero.
pub fn gcd_all<'a>(
    ring: RingSpec,
    items: impl IntoIterator<Item = &'a RingElem>,
) -> Result<RingElem, RingError> {
    items
        .into_iter()
        .try_fold(ring.zero(), |acc, x| gcd(&acc, x))
}

/// lcm of a list; the empty lcm is one.
pub fn lcm_all<'a>(
    ring: RingSpec,
    items: impl IntoIterator<Item = &'a RingElem>,
) -> Result<RingElem, RingError> {
    items
        .into_iter()
        .try_fold(ring.one(), |acc, x| lcm(&acc, x))
}

/// Extended Euclid: `(g, s, t)` with `g = gcd(a, b)` normalized and
/// `s*a + t*b = g`.
pub fn egcd(a: &RingElem, b: &RingElem) -> Result<(RingElem, RingElem, RingElem), RingError> {
    a.same_ring(b)?;
    let ring = a.ring();
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (ring.one(), ring.zero());
    let (mut t0, mut t1) = (ring.zero(), ring.one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1)?;
        let s = &s0 - &(&q * &s1);
        let t = &t0 - &(&q * &t1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = r0.unit_part().unit_inverse();
    Ok((&r0 * &inv, &s0 * &inv, &t0 * &inv))
}

/// Inverse of `a` modulo `m`, reduced to its canonical representative.
/// `None` when `a` and `m` are not coprime.
pub fn inverse_mod(a: &RingElem, m: &RingElem) -> Result<Option<RingElem>, RingError> {
    let (g, s, _) = egcd(a, m)?;
    if !g.is_unit() {
        return Ok(None);
    }
    Ok(Some(s.reduce_mod(m)))
}
