use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::rational::Rat;

use crate::error::{Error, Result};

/// The exact base ring underneath the nilpotent generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseRing {
    Rationals,
    /// Integers modulo a prime power `p^k`.
    IntegersMod {
        modulus: u64,
        prime: u64,
        exponent: u32,
    },
}

/// An element of a [`BaseRing`]. Residues are kept reduced to `[0, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(Rat),
    Residue(u64),
}

/// Largest modulus accepted; products are formed in `u128`.
pub const MAX_MODULUS: u64 = 1 << 62;

impl BaseRing {
    /// Builds `Z/m`, rejecting moduli that are not prime powers: those rings
    /// split into products and carry nontrivial idempotents.
    pub fn integers_mod(modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::Descriptor(format!("modulus {modulus} must be at least 2")));
        }
        if modulus > MAX_MODULUS {
            return Err(Error::Descriptor(format!("modulus {modulus} exceeds 2^62")));
        }
        let (prime, exponent) = prime_power(modulus).ok_or_else(|| {
            Error::Descriptor(format!(
                "modulus {modulus} is not a prime power; rings with nontrivial idempotents are not supported"
            ))
        })?;
        Ok(BaseRing::IntegersMod { modulus, prime, exponent })
    }

    pub fn is_rationals(&self) -> bool {
        matches!(self, BaseRing::Rationals)
    }

    /// Smallest `k` with `Nil(base)^k = 0`.
    pub fn nil_index(&self) -> u32 {
        match self {
            BaseRing::Rationals => 1,
            BaseRing::IntegersMod { exponent, .. } => *exponent,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            BaseRing::Rationals => Scalar::Rational(Rat::zero()),
            BaseRing::IntegersMod { .. } => Scalar::Residue(0),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            BaseRing::Rationals => Scalar::Rational(Rat::from_i64(n)),
            BaseRing::IntegersMod { modulus, .. } => Scalar::Residue(n.rem_euclid(*modulus as i64) as u64),
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            BaseRing::Rationals => Scalar::Rational(Rat::from_big(BigRational::from_integer(n.clone()))),
            BaseRing::IntegersMod { modulus, .. } => {
                let r = n.mod_floor(&BigInt::from(*modulus));
                Scalar::Residue(r.to_u64().expect("reduced residue fits in u64"))
            }
        }
    }

    /// Embeds a rational; over `Z/m` the denominator must be invertible.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match self {
            BaseRing::Rationals => Ok(Scalar::Rational(Rat::from_big(q.clone()))),
            BaseRing::IntegersMod { .. } => {
                let num = self.from_bigint(q.numer());
                let den = self.from_bigint(q.denom());
                let inv = self.inv(&den).ok_or_else(|| {
                    Error::NotAUnit(format!("denominator {} is not invertible in {}", q.denom(), self))
                })?;
                Ok(self.mul(&num, &inv))
            }
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (BaseRing::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x.add(y)),
            (BaseRing::IntegersMod { modulus, .. }, Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue(((*x as u128 + *y as u128) % *modulus as u128) as u64)
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (BaseRing::Rationals, Scalar::Rational(x)) => Scalar::Rational(x.neg()),
            (BaseRing::IntegersMod { modulus, .. }, Scalar::Residue(x)) => {
                Scalar::Residue(if *x == 0 { 0 } else { modulus - x })
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (BaseRing::Rationals, Scalar::Rational(x), Scalar::Rational(y)) => Scalar::Rational(x.mul(y)),
            (BaseRing::IntegersMod { modulus, .. }, Scalar::Residue(x), Scalar::Residue(y)) => {
                Scalar::Residue(((*x as u128 * *y as u128) % *modulus as u128) as u64)
            }
            _ => panic!("scalar does not belong to {self}"),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rational(x) => x.is_zero(),
            Scalar::Residue(x) => *x == 0,
        }
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        match (self, a) {
            (BaseRing::Rationals, Scalar::Rational(x)) => !x.is_zero(),
            (BaseRing::IntegersMod { prime, .. }, Scalar::Residue(x)) => x % prime != 0,
            _ => false,
        }
    }

    pub fn is_nilpotent(&self, a: &Scalar) -> bool {
        match (self, a) {
            (BaseRing::Rationals, Scalar::Rational(x)) => x.is_zero(),
            (BaseRing::IntegersMod { prime, .. }, Scalar::Residue(x)) => x % prime == 0,
            _ => false,
        }
    }

    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        match (self, a) {
            (BaseRing::Rationals, Scalar::Rational(x)) => x.recip().map(Scalar::Rational),
            (BaseRing::IntegersMod { modulus, .. }, Scalar::Residue(x)) => {
                let e = BigInt::from(*x).extended_gcd(&BigInt::from(*modulus));
                if !e.gcd.is_one() {
                    return None;
                }
                Some(self.from_bigint(&e.x))
            }
            _ => None,
        }
    }

    /// Exact division by a nonzero integer, available when `n` is a unit.
    pub fn div_int(&self, a: &Scalar, n: i64) -> Option<Scalar> {
        let inv = self.inv(&self.from_i64(n))?;
        Some(self.mul(a, &inv))
    }

    pub fn render(&self, a: &Scalar) -> String {
        match a {
            Scalar::Rational(x) => {
                if x.is_integer() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
            Scalar::Residue(x) => x.to_string(),
        }
    }

    /// Splits off a sign for rendering; residues are always nonnegative.
    pub(crate) fn sign_and_abs(&self, a: &Scalar) -> (bool, Scalar) {
        match a {
            Scalar::Rational(x) if x.is_negative() => (true, Scalar::Rational(x.neg())),
            _ => (false, a.clone()),
        }
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::Rationals => write!(f, "Q"),
            BaseRing::IntegersMod { modulus, .. } => write!(f, "Z/{modulus}"),
        }
    }
}

fn prime_power(m: u64) -> Option<(u64, u32)> {
    let mut p = 2u64;
    let mut n = m;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            return if n == 1 { Some((p, k)) } else { None };
        }
        p += 1;
    }
    Some((n, 1))
}
