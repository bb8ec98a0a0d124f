//! Exact coefficient rings: the integers, the rationals, and Z/m.
//!
//! Every ring here is a value (so Z/m can carry its modulus at runtime) and
//! arithmetic is exact; integer and rational coefficients use arbitrary
//! precision.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// A commutative coefficient ring with exact arithmetic.
pub trait Ring: Clone + fmt::Debug + PartialEq + 'static {
    type Elem: Clone + PartialEq + Eq + Ord + std::hash::Hash + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;
    /// Multiplicative inverse when `a` is a unit.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_field(&self) -> bool;
    fn name(&self) -> String;
    fn show(&self, a: &Self::Elem) -> String;
    /// Parse an integer or `p/q` literal.
    fn parse(&self, s: &str) -> Option<Self::Elem>;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    /// Multiply by (-1)^k.
    fn signed(&self, a: &Self::Elem, k: i64) -> Self::Elem {
        if k.rem_euclid(2) == 0 {
            a.clone()
        } else {
            self.neg(a)
        }
    }
    fn sign_one(&self, k: i64) -> Self::Elem {
        self.signed(&self.one(), k)
    }
}

/// The ring of integers with arbitrary-precision arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZZ;

impl Ring for ZZ {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn from_int(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }
    fn inv(&self, a: &BigInt) -> Option<BigInt> {
        if a.abs().is_one() {
            Some(a.clone())
        } else {
            None
        }
    }
    fn is_field(&self) -> bool {
        false
    }
    fn name(&self) -> String {
        "Z".into()
    }
    fn show(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Option<BigInt> {
        s.parse().ok()
    }
}

/// The field of rational numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QQ;

impl Ring for QQ {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_field(&self) -> bool {
        true
    }
    fn name(&self) -> String {
        "Q".into()
    }
    fn show(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Option<BigRational> {
        if let Some((p, q)) = s.split_once('/') {
            let p: BigInt = p.parse().ok()?;
            let q: BigInt = q.parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        } else {
            let p: BigInt = s.parse().ok()?;
            Some(BigRational::from_integer(p))
        }
    }
}

/// Z/m with canonical representatives in `0..m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZMod(pub u64);

impl ZMod {
    pub fn new(m: u64) -> Self {
        assert!(m >= 2, "modulus must be at least 2");
        ZMod(m)
    }
    pub fn modulus(&self) -> u64 {
        self.0
    }
    fn red(&self, a: i128) -> u64 {
        a.rem_euclid(self.0 as i128) as u64
    }
}

impl Ring for ZMod {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        self.red(*a as i128 + *b as i128)
    }
    fn neg(&self, a: &u64) -> u64 {
        self.red(-(*a as i128))
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.red(*a as i128 * *b as i128)
    }
    fn from_int(&self, n: i64) -> u64 {
        self.red(n as i128)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        // extended euclid over i128
        let (mut r0, mut r1) = (self.0 as i128, *a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        if r0 == 1 {
            Some(self.red(s0))
        } else {
            None
        }
    }
    fn is_field(&self) -> bool {
        let m = self.0;
        if m < 2 {
            return false;
        }
        let mut k = 2u64;
        while k * k <= m {
            if m % k == 0 {
                return false;
            }
            k += 1;
        }
        true
    }
    fn name(&self) -> String {
        format!("Z/{}", self.0)
    }
    fn show(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Option<u64> {
        let n: i64 = s.parse().ok()?;
        Some(self.from_int(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod_canonical_range() {
        let r = ZMod::new(5);
        assert_eq!(r.from_int(-1), 4);
        assert_eq!(r.add(&3, &4), 2);
        assert_eq!(r.neg(&0), 0);
    }

    #[test]
    fn zmod_inverses() {
        let r = ZMod::new(7);
        for a in 1..7u64 {
            let b = r.inv(&a).unwrap();
            assert_eq!(r.mul(&a, &b), 1);
        }
        let r6 = ZMod::new(6);
        assert!(r6.inv(&2).is_none());
        assert!(r6.inv(&5).is_some());
        assert!(!r6.is_field());
        assert!(ZMod::new(2).is_field());
    }

    #[test]
    fn rational_parse() {
        let q = QQ;
        let x = q.parse("-3/4").unwrap();
        assert_eq!(q.show(&x), "-3/4");
        assert!(q.parse("1/0").is_none());
    }
}
