//! Coefficient fields: the rationals (certification mode) and prime fields
//! of odd characteristic (search mode). Characteristic 2 is rejected
//! everywhere because the Gram-matrix view of a quadric needs 1/2.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Runtime selection of the coefficient field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldSpec {
    Rationals,
    Prime(u64),
}

impl FieldSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            FieldSpec::Rationals => Ok(()),
            FieldSpec::Prime(p) => {
                if *p < 3 || *p % 2 == 0 || !is_prime(*p) {
                    Err(Error::invalid(format!(
                        "characteristic must be an odd prime >= 3, got {p}"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    pub fn label(&self) -> String {
        match self {
            FieldSpec::Rationals => "QQ".to_string(),
            FieldSpec::Prime(p) => format!("GF({p})"),
        }
    }
}

/// Default prime for search mode: a conventional word-sized odd prime.
pub const DEFAULT_PRIME: u64 = 32003;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field with the handful of operations the toolkit needs.
/// Implementations carry their own parameters (e.g. the prime p), so a
/// field value doubles as an arithmetic context.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + std::hash::Hash + fmt::Debug + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    /// a/b with arbitrary-precision integers; errors when b vanishes in
    /// the field (b == 0, or p | b over GF(p)).
    fn from_big_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Self::Elem>;
    /// 0 for the rationals, p for GF(p).
    fn characteristic(&self) -> u64;
    fn label(&self) -> String;
    /// A square root when one exists in the field.
    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let bi = self.inv(b).expect("division by zero");
        self.mul(a, &bi)
    }

    /// Rank of a dense matrix. Default is plain Gaussian elimination;
    /// the rationals override it with fraction-free elimination.
    fn mat_rank(&self, mat: Vec<Vec<Self::Elem>>) -> usize {
        crate::linalg::rank_generic(self, mat)
    }
}

/// The field of rational numbers, always in lowest terms with positive
/// denominator (BigRational's canonical form).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
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
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn from_big_ratio(&self, num: &BigInt, den: &BigInt) -> Result<BigRational> {
        if den.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        Ok(BigRational::new(num.clone(), den.clone()))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn label(&self) -> String {
        "QQ".to_string()
    }
    fn sqrt(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_negative() {
            return None;
        }
        let n = a.numer();
        let d = a.denom();
        let sn = n.sqrt();
        let sd = d.sqrt();
        if &(&sn * &sn) == n && &(&sd * &sd) == d {
            Some(BigRational::new(sn, sd))
        } else {
            None
        }
    }
    fn fmt_elem(&self, a: &BigRational) -> String {
        if a.denom().is_one() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn mat_rank(&self, mat: Vec<Vec<BigRational>>) -> usize {
        crate::linalg::rank_bareiss(mat)
    }
}

/// GF(p) for an odd prime p, with elements reduced to 0..p-1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        FieldSpec::Prime(p).validate()?;
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn mul_mod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn pow_mod(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_mod(acc, base);
            }
            base = self.mul_mod(base, base);
            exp >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mul_mod(*a, *b)
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow_mod(*a, self.p - 2))
        }
    }
    fn from_i64(&self, n: i64) -> u64 {
        let r = n.rem_euclid(self.p as i64);
        r as u64
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        let m = n % BigInt::from(self.p);
        let m = if m.is_negative() { m + BigInt::from(self.p) } else { m };
        let (_, digits) = m.to_u64_digits();
        *digits.first().unwrap_or(&0)
    }
    fn from_big_ratio(&self, num: &BigInt, den: &BigInt) -> Result<u64> {
        let d = self.from_bigint(den);
        let di = self.inv(&d).ok_or_else(|| {
            Error::invalid(format!("denominator {den} vanishes mod {}", self.p))
        })?;
        Ok(self.mul(&self.from_bigint(num), &di))
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn label(&self) -> String {
        format!("GF({})", self.p)
    }
    fn sqrt(&self, a: &u64) -> Option<u64> {
        // Tonelli-Shanks.
        let p = self.p;
        if *a == 0 {
            return Some(0);
        }
        if self.pow_mod(*a, (p - 1) / 2) != 1 {
            return None;
        }
        if p % 4 == 3 {
            return Some(self.pow_mod(*a, (p + 1) / 4));
        }
        // p = q * 2^s + 1 with q odd
        let mut q = p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        // find a quadratic non-residue
        let mut z = 2u64;
        while self.pow_mod(z, (p - 1) / 2) != p - 1 {
            z += 1;
        }
        let mut m = s;
        let mut c = self.pow_mod(z, q);
        let mut t = self.pow_mod(*a, q);
        let mut r = self.pow_mod(*a, (q + 1) / 2);
        while t != 1 {
            let mut i = 0u32;
            let mut tt = t;
            while tt != 1 {
                tt = self.mul_mod(tt, tt);
                i += 1;
            }
            let b = self.pow_mod(c, 1u64 << (m - i - 1));
            m = i;
            c = self.mul_mod(b, b);
            t = self.mul_mod(t, c);
            r = self.mul_mod(r, b);
        }
        Some(r)
    }
    fn fmt_elem(&self, a: &u64) -> String {
        a.to_string()
    }
}
