//! Minimal coefficient-ring abstraction: arbitrary-precision integers and
//! prime fields GF(p) with p < 2^63, enough for relation expansion and
//! nilpotent quotient arithmetic to share one code path.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub trait Ring {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_bigint(&self, a: &BigInt) -> Self::Elem;
    fn from_i64(&self, a: i64) -> Self::Elem {
        self.from_bigint(&BigInt::from(a))
    }
}

/// The ring of integers with `BigInt` elements.
#[derive(Clone, Copy, Debug, Default)]
pub struct ZZ;

impl Ring for ZZ {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::from(1)
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn from_bigint(&self, a: &BigInt) -> BigInt {
        a.clone()
    }
}

/// GF(p) for a word-size prime, elements stored as canonical residues.
#[derive(Clone, Copy, Debug)]
pub struct GFp {
    p: u64,
}

impl GFp {
    pub fn new(p: u64) -> Self {
        assert!(p >= 2, "modulus must be at least 2");
        GFp { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn inv(&self, a: u64) -> u64 {
        // extended Euclid; p prime, a != 0
        assert!(!a.is_multiple_of(self.p), "division by zero mod {}", self.p);
        let (mut t, mut new_t) = (0i128, 1i128);
        let (mut r, mut new_r) = (self.p as i128, (a % self.p) as i128);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        debug_assert_eq!(r, 1);
        (t.rem_euclid(self.p as i128)) as u64
    }
}

impl Ring for GFp {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = (*a as u128 + *b as u128) % self.p as u128;
        s as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn from_bigint(&self, a: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let mut r = a % &m;
        if r.is_negative() {
            r += &m;
        }
        let digits = r.to_u64_digits().1;
        digits.first().copied().unwrap_or(0)
    }
}
