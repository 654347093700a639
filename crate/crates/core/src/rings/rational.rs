//! Rationals with an inline fast path: `Small` while numerator and
//! denominator fit in `i64`, `Big` otherwise. The form is canonical (reduced,
//! positive denominator, `Small` whenever it fits), so derived equality and
//! hashing are exact.

use std::borrow::Cow;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rat {
    Small(i64, i64),
    Big(BigRational),
}

impl Rat {
    pub fn zero() -> Rat {
        Rat::Small(0, 1)
    }

    pub fn from_i64(n: i64) -> Rat {
        if n == i64::MIN {
            Rat::Big(BigRational::from_integer(n.into()))
        } else {
            Rat::Small(n, 1)
        }
    }

    pub fn from_big(q: BigRational) -> Rat {
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Rat::Small(n, d),
            _ => Rat::Big(q),
        }
    }

    fn from_int(n: BigInt) -> Rat {
        match n.to_i64() {
            Some(k) if k != i64::MIN => Rat::Small(k, 1),
            _ => Rat::Big(BigRational::from_integer(n)),
        }
    }

    /// The value of an integer, borrowed when it is already big.
    fn int_ref(&self) -> Cow<'_, BigInt> {
        match self {
            Rat::Small(n, _) => Cow::Owned(BigInt::from(*n)),
            Rat::Big(q) => Cow::Borrowed(q.numer()),
        }
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rat::Big(q) => q.clone(),
        }
    }

    /// `n / d` from `i128` parts with `d > 0` and `gcd(n, d) = 1`.
    fn from_reduced(n: i128, d: i128) -> Rat {
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) if n != i64::MIN => Rat::Small(n, d),
            _ => Rat::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n == 0,
            Rat::Big(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rat::Small(1, 1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rat::Small(n, _) => *n < 0,
            Rat::Big(q) => q.is_negative(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Rat::Small(_, d) => *d == 1,
            Rat::Big(q) => q.is_integer(),
        }
    }

    pub fn add(&self, other: &Rat) -> Rat {
        match (self, other) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                let (n, den) = if b == d { (a + c, b) } else { (a * d + c * b, b * d) };
                if n == 0 {
                    return Rat::zero();
                }
                let g = n.gcd(&den);
                Rat::from_reduced(n / g, den / g)
            }
            _ if self.is_integer() && other.is_integer() => Rat::from_int(&*self.int_ref() + &*other.int_ref()),
            (Rat::Big(a), Rat::Big(b)) => Rat::from_big(a + b),
            _ => Rat::from_big(&self.to_big() + &other.to_big()),
        }
    }

    pub fn neg(&self) -> Rat {
        match self {
            Rat::Small(n, d) => Rat::Small(-n, *d),
            Rat::Big(q) => Rat::from_big(-q),
        }
    }

    pub fn mul(&self, other: &Rat) -> Rat {
        match (self, other) {
            (Rat::Small(a, b), Rat::Small(c, d)) => {
                if *a == 0 || *c == 0 {
                    return Rat::zero();
                }
                let g1 = a.gcd(d);
                let g2 = c.gcd(b);
                let n = (*a / g1) as i128 * (*c / g2) as i128;
                let den = (*b / g2) as i128 * (*d / g1) as i128;
                Rat::from_reduced(n, den)
            }
            _ if self.is_integer() && other.is_integer() => Rat::from_int(&*self.int_ref() * &*other.int_ref()),
            (Rat::Big(a), Rat::Big(b)) => Rat::from_big(a * b),
            _ => Rat::from_big(&self.to_big() * &other.to_big()),
        }
    }

    pub fn recip(&self) -> Option<Rat> {
        match self {
            Rat::Small(0, _) => None,
            Rat::Small(n, d) => Some(if *n < 0 { Rat::Small(-d, -n) } else { Rat::Small(*d, *n) }),
            Rat::Big(q) => Some(Rat::from_big(q.recip())),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rat::Small(n, _) => BigInt::from(*n),
            Rat::Big(q) => q.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rat::Small(_, d) => BigInt::from(*d),
            Rat::Big(q) => q.denom().clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    proptest! {
        #[test]
        fn agrees_with_big_rationals(a in any::<i64>(), b in 1..i64::MAX, c in any::<i64>(), d in 1..i64::MAX) {
            let (x, y) = (Rat::from_big(big(a, b)), Rat::from_big(big(c, d)));
            prop_assert_eq!(x.add(&y), Rat::from_big(big(a, b) + big(c, d)));
            prop_assert_eq!(x.mul(&y), Rat::from_big(big(a, b) * big(c, d)));
            prop_assert_eq!(x.neg(), Rat::from_big(-big(a, b)));
            if a != 0 {
                prop_assert_eq!(x.recip().unwrap(), Rat::from_big(big(a, b).recip()));
            }
        }
    }

    proptest! {
        #[test]
        fn big_integers_agree(a in any::<i64>(), c in any::<i64>(), n in any::<i64>(), d in 1..1000i64) {
            let p = big(a, 1) * big(c, 1);
            let q = big(n, d);
            let (x, y) = (Rat::from_big(p.clone()), Rat::from_big(q.clone()));
            prop_assert_eq!(x.add(&y), Rat::from_big(&p + &q));
            prop_assert_eq!(x.mul(&y), Rat::from_big(&p * &q));
            prop_assert_eq!(x.add(&x), Rat::from_big(&p + &p));
            prop_assert_eq!(x.mul(&x), Rat::from_big(&p * &p));
            prop_assert_eq!(x.add(&x.neg()), Rat::zero());
        }
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let m = Rat::from_i64(i64::MAX);
        let sq = m.mul(&m);
        assert!(matches!(sq, Rat::Big(_)));
        let back = sq.mul(&m.recip().unwrap());
        assert_eq!(back, m);
        assert_eq!(Rat::from_i64(i64::MIN).neg().neg(), Rat::from_i64(i64::MIN));
        assert_eq!(Rat::Small(1, 2).add(&Rat::Small(-1, 2)), Rat::zero());
    }
}
