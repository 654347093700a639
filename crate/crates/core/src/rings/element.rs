use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Ring, Scalar, NO_MONOMIAL};
use crate::error::{Error, Result};

/// An element of a [`Ring`], as a sorted list of nonzero `(monomial, scalar)`
/// terms.
#[derive(Clone)]
pub struct RingElement {
    ring: Ring,
    terms: Vec<(u32, Scalar)>,
}

impl RingElement {
    /// Builds an element from terms in any order, merging repeats and
    /// dropping zeros.
    pub(crate) fn from_terms(ring: Ring, mut terms: Vec<(u32, Scalar)>) -> Self {
        terms.sort_by_key(|(m, _)| *m);
        let base = ring.base().clone();
        let mut out: Vec<(u32, Scalar)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = base.add(lc, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !base.is_zero(c));
        RingElement { ring, terms: out }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub(crate) fn terms(&self) -> &[(u32, Scalar)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1 == self.ring.base().one()
    }

    /// The coefficient of the empty monomial.
    pub fn constant(&self) -> Scalar {
        match self.terms.first() {
            Some((0, c)) => c.clone(),
            _ => self.ring.base().zero(),
        }
    }

    /// The coefficient of the monomial with the given generator exponents.
    pub fn coefficient(&self, exps: &[u32]) -> Scalar {
        let base = self.ring.base();
        match self.ring.monomial_index(exps) {
            Some(k) => self.terms.iter().find(|(m, _)| *m == k).map(|(_, c)| c.clone()).unwrap_or_else(|| base.zero()),
            None => base.zero(),
        }
    }

    /// True when the element lies in the base ring.
    pub fn is_scalar(&self) -> bool {
        self.terms.iter().all(|(m, _)| *m == 0)
    }

    pub fn is_unit(&self) -> bool {
        self.ring.base().is_unit(&self.constant())
    }

    pub fn is_nilpotent(&self) -> bool {
        self.ring.base().is_nilpotent(&self.constant())
    }

    /// Smallest `k >= 1` with `self^k = 0`, or `None` for non-nilpotents.
    pub fn nilpotency_order(&self) -> Option<u32> {
        if !self.is_nilpotent() {
            return None;
        }
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_zero() {
            p = &p * self;
            k += 1;
        }
        Some(k)
    }

    pub fn scale(&self, s: &Scalar) -> RingElement {
        let base = self.ring.base();
        RingElement::from_terms(self.ring.clone(), self.terms.iter().map(|(m, c)| (*m, base.mul(c, s))).collect())
    }

    pub fn scale_i64(&self, n: i64) -> RingElement {
        self.scale(&self.ring.base().from_i64(n))
    }

    /// Inverse of a unit `c + n` as `c^{-1} sum_k (-c^{-1} n)^k`.
    pub fn invert(&self) -> Result<RingElement> {
        let base = self.ring.base();
        let c = self.constant();
        let ci = base.inv(&c).ok_or_else(|| Error::NotAUnit(format!("{self} in {}", self.ring)))?;
        let ci_el = self.ring.scalar(ci.clone());
        let w = &self.scale(&ci) - &self.ring.one();
        let minus_w = -&w;
        let mut acc = self.ring.one();
        let mut p = self.ring.one();
        loop {
            p = &p * &minus_w;
            if p.is_zero() {
                break;
            }
            acc = &acc + &p;
        }
        Ok(&acc * &ci_el)
    }

    pub fn pow(&self, mut k: u64) -> RingElement {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; negative exponents require a unit.
    pub fn pow_i64(&self, k: i64) -> Result<RingElement> {
        if k >= 0 {
            Ok(self.pow(k as u64))
        } else {
            Ok(self.invert()?.pow(k.unsigned_abs()))
        }
    }

    fn check_ring(&self, other: &RingElement) {
        assert!(self.ring == other.ring, "ring mismatch: {} vs {}", self.ring, other.ring);
    }

    fn render_monomial(&self, m: u32) -> String {
        let names = &self.ring.descriptor().generators;
        let mut parts = Vec::new();
        for (g, &e) in self.ring.monomial_exponents(m).iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names[g].name.clone()),
                _ => parts.push(format!("{}^{}", names[g].name, e)),
            }
        }
        parts.join("*")
    }

    /// True if rendering needs parentheses when used as a factor.
    pub(crate) fn is_compound(&self) -> bool {
        if self.terms.len() > 1 {
            return true;
        }
        let (neg, _) = match self.terms.first() {
            Some((_, c)) => self.ring.base().sign_and_abs(c),
            None => return false,
        };
        neg
    }
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl Eq for RingElement {}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let base = self.ring.base();
        let mut order: Vec<&(u32, Scalar)> = self.terms.iter().collect();
        order.sort_by_key(|(m, _)| (self.ring.monomial_degree(*m), *m));
        for (i, (m, c)) in order.into_iter().enumerate() {
            let (neg, abs) = base.sign_and_abs(c);
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let coef = base.render(&abs);
            if *m == 0 {
                write!(f, "{coef}")?;
            } else if abs == base.one() {
                write!(f, "{}", self.render_monomial(*m))?;
            } else {
                write!(f, "{coef}*{}", self.render_monomial(*m))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &RingElement {
    type Output = RingElement;

    fn add(self, other: &RingElement) -> RingElement {
        self.check_ring(other);
        let base = self.ring.base();
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = base.add(&a[i].1, &b[j].1);
                    if !base.is_zero(&s) {
                        out.push((a[i].0, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        RingElement { ring: self.ring.clone(), terms: out }
    }
}

impl Neg for &RingElement {
    type Output = RingElement;

    fn neg(self) -> RingElement {
        let base = self.ring.base();
        RingElement { ring: self.ring.clone(), terms: self.terms.iter().map(|(m, c)| (*m, base.neg(c))).collect() }
    }
}

impl Sub for &RingElement {
    type Output = RingElement;

    fn sub(self, other: &RingElement) -> RingElement {
        self + &(-other)
    }
}

impl Mul for &RingElement {
    type Output = RingElement;

    fn mul(self, other: &RingElement) -> RingElement {
        self.check_ring(other);
        if self.terms.is_empty() || other.terms.is_empty() {
            return self.ring.zero();
        }
        if self.terms.len() == 1 && self.terms[0].0 == 0 {
            return other.scale(&self.terms[0].1);
        }
        if other.terms.len() == 1 && other.terms[0].0 == 0 {
            return self.scale(&other.terms[0].1);
        }
        let mut acc = Accumulator::new(&self.ring);
        acc.add_product(self, other);
        acc.finish()
    }
}

/// Dense sum of products indexed by monomial, avoiding the sort and the
/// intermediate elements of repeated `a * b + c`.
pub(crate) struct Accumulator {
    ring: Ring,
    slots: Vec<Scalar>,
}

impl Accumulator {
    pub(crate) fn new(ring: &Ring) -> Self {
        Accumulator { ring: ring.clone(), slots: vec![ring.base().zero(); ring.dim()] }
    }

    /// `self += a * b`.
    pub(crate) fn add_product(&mut self, a: &RingElement, b: &RingElement) {
        let base = self.ring.base();
        for (i, x) in &a.terms {
            for (j, y) in &b.terms {
                let k = self.ring.product_monomial(*i, *j);
                if k != NO_MONOMIAL {
                    let slot = &mut self.slots[k as usize];
                    *slot = base.add(slot, &base.mul(x, y));
                }
            }
        }
    }

    pub(crate) fn finish(self) -> RingElement {
        let base = self.ring.base().clone();
        let terms =
            self.slots.into_iter().enumerate().filter(|(_, c)| !base.is_zero(c)).map(|(m, c)| (m as u32, c)).collect();
        RingElement { ring: self.ring, terms }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RingElement {
            type Output = RingElement;
            fn $m(self, other: RingElement) -> RingElement {
                (&self).$m(&other)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering() {
        let r = Ring::parse("Q[e;2]").unwrap();
        let e = r.generator("e").unwrap();
        assert_eq!((&r.one() + &e.scale_i64(4)).to_string(), "1 + 4*e");
        assert_eq!((&r.one() - &e.scale_i64(8)).to_string(), "1 - 8*e");
        assert_eq!(r.zero().to_string(), "0");
        let half = r.from_rational(&num_rational::BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!((&half * &e).to_string(), "1/2*e");
    }

    #[test]
    fn inverse_in_z4_eps() {
        let r = Ring::parse("Z/4[e;2]").unwrap();
        let e = r.generator("e").unwrap();
        let x = &(&r.from_i64(3) + &r.from_i64(2).scale(&r.base().one())) + &e;
        let y = x.invert().unwrap();
        assert!((&x * &y).is_one());
        assert!(r.from_i64(2).invert().is_err());
    }
}
