//! Dense univariate polynomial arithmetic over the two supported coefficient
//! fields. Coefficient vectors are little-endian (`c[k]` is the coefficient of
//! `x^k`) and never carry trailing zeros; the zero polynomial is `[]`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Coefficient field operations. Implementors carry whatever context the
/// field needs (the characteristic, for prime fields).
pub(crate) trait Field {
    type E: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E;
    /// Multiplicative inverse; `a` must be nonzero.
    fn inv(&self, a: &Self::E) -> Self::E;
}

pub(crate) struct Rationals;

impl Field for Rationals {
    type E = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
}

/// GF(p) with canonical residues in `0..p`.
pub(crate) struct PrimeField(pub u64);

impl PrimeField {
    pub(crate) fn reduce_big(&self, v: &BigInt) -> u64 {
        let p = BigInt::from(self.0);
        let r = ((v % &p) + &p) % &p;
        r.try_into().expect("residue fits in u64")
    }
}

impl Field for PrimeField {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.0 as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.0 as u128 - *b as u128) % self.0 as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.0 - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero in GF({})", self.0);
        // Fermat: a^(p-2)
        let mut base = *a;
        let mut exp = self.0 - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }
}

pub(crate) fn trim<F: Field>(f: &F, mut c: Vec<F::E>) -> Vec<F::E> {
    while c.last().is_some_and(|x| f.is_zero(x)) {
        c.pop();
    }
    c
}

pub(crate) fn add<F: Field>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|k| match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) => f.add(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect();
    trim(f, out)
}

pub(crate) fn neg<F: Field>(f: &F, a: &[F::E]) -> Vec<F::E> {
    a.iter().map(|x| f.neg(x)).collect()
}

pub(crate) fn sub<F: Field>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    add(f, a, &neg(f, b))
}

pub(crate) fn mul<F: Field>(f: &F, a: &[F::E], b: &[F::E]) -> Vec<F::E> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if f.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    trim(f, out)
}

pub(crate) fn scale<F: Field>(f: &F, a: &[F::E], s: &F::E) -> Vec<F::E> {
    trim(f, a.iter().map(|x| f.mul(x, s)).collect())
}

/// Long division. Panics if `b` is zero.
pub(crate) fn div_rem<F: Field>(f: &F, a: &[F::E], b: &[F::E]) -> (Vec<F::E>, Vec<F::E>) {
    assert!(!b.is_empty(), "polynomial division by zero");
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let lead_inv = f.inv(b.last().unwrap());
    let mut rem = a.to_vec();
    let mut quot = vec![f.zero(); a.len() - b.len() + 1];
    for k in (0..quot.len()).rev() {
        let c = f.mul(&rem[k + b.len() - 1], &lead_inv);
        if f.is_zero(&c) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            rem[k + j] = f.sub(&rem[k + j], &f.mul(&c, y));
        }
        quot[k] = c;
    }
    (trim(f, quot), trim(f, rem))
}

/// Monic associate; zero stays zero.
pub(crate) fn monic<F: Field>(f: &F, a: &[F::E]) -> Vec<F::E> {
    match a.last() {
        None => Vec::new(),
        Some(lc) => scale(f, a, &f.inv(lc)),
    }
}
