//! Coefficient rings: an exact base (`Q` or `Z/p^k`) with adjoined nilpotent
//! generators `e` satisfying `e^order = 0`.
//!
//! Elements are stored as sparse sorted lists of `(monomial, scalar)` pairs with
//! no zero scalars, so structural equality is ring equality.

mod descriptor;
mod element;
mod rational;
mod sampler;
mod scalar;

use std::fmt;
use std::sync::Arc;

pub use descriptor::{BaseSpec, Generator, RingDescriptor};
pub(crate) use element::Accumulator;
pub use element::RingElement;
pub use rational::Rat;
pub use sampler::ElementSampler;
pub use scalar::{BaseRing, Scalar};

use crate::error::{Error, Result};

/// Upper bound on the number of monomials in the nilpotent part.
const MAX_MONOMIALS: usize = 1 << 12;

pub(crate) const NO_MONOMIAL: u32 = u32::MAX;

/// Shared handle to a configured coefficient ring.
#[derive(Clone)]
pub struct Ring(Arc<RingInner>);

struct RingInner {
    descriptor: RingDescriptor,
    base: BaseRing,
    orders: Vec<u32>,
    strides: Vec<u32>,
    exponents: Vec<Vec<u32>>,
    degrees: Vec<u32>,
    table: Vec<u32>,
    nil_index: u32,
}

/// Validates a descriptor and builds the ring it describes.
pub fn make_ring(descriptor: &RingDescriptor) -> Result<Ring> {
    Ring::new(descriptor.clone())
}

impl Ring {
    pub fn new(descriptor: RingDescriptor) -> Result<Self> {
        descriptor.validate()?;
        let base = match descriptor.base {
            BaseSpec::Rationals => BaseRing::Rationals,
            BaseSpec::IntegersMod(m) => BaseRing::integers_mod(m)?,
        };
        let orders: Vec<u32> = descriptor.generators.iter().map(|g| g.order).collect();
        let mut dim: usize = 1;
        for &o in &orders {
            dim = dim
                .checked_mul(o as usize)
                .filter(|&d| d <= MAX_MONOMIALS)
                .ok_or_else(|| Error::Descriptor(format!("more than {MAX_MONOMIALS} monomials")))?;
        }
        let mut strides = Vec::with_capacity(orders.len());
        let mut s = 1u32;
        for &o in &orders {
            strides.push(s);
            s *= o;
        }
        let exponents: Vec<Vec<u32>> =
            (0..dim as u32).map(|idx| orders.iter().zip(&strides).map(|(&o, &st)| (idx / st) % o).collect()).collect();
        let degrees = exponents.iter().map(|e| e.iter().sum()).collect();
        let mut table = vec![NO_MONOMIAL; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let mut k = 0u32;
                let mut ok = true;
                for g in 0..orders.len() {
                    let e = exponents[i][g] + exponents[j][g];
                    if e >= orders[g] {
                        ok = false;
                        break;
                    }
                    k += e * strides[g];
                }
                if ok {
                    table[i * dim + j] = k;
                }
            }
        }
        let nil_index = orders.iter().map(|o| o - 1).sum::<u32>() + base.nil_index() - 1 + 1;
        Ok(Ring(Arc::new(RingInner { descriptor, base, orders, strides, exponents, degrees, table, nil_index })))
    }

    /// Parses the descriptor grammar (`Q`, `Z/4[e;2]`, ...) and builds the ring.
    pub fn parse(text: &str) -> Result<Self> {
        Ring::new(text.parse()?)
    }

    pub fn rationals() -> Self {
        Ring::new(RingDescriptor::rationals()).expect("Q is a valid ring")
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.0.descriptor
    }

    pub fn base(&self) -> &BaseRing {
        &self.0.base
    }

    pub fn is_q_algebra(&self) -> bool {
        self.0.base.is_rationals()
    }

    /// True when the nilradical is zero.
    pub fn is_reduced(&self) -> bool {
        self.0.nil_index == 1
    }

    /// Smallest `e` with `Nil(A)^e = 0`.
    pub fn nil_index(&self) -> u32 {
        self.0.nil_index
    }

    pub fn generator_count(&self) -> usize {
        self.0.orders.len()
    }

    pub(crate) fn dim(&self) -> usize {
        self.0.exponents.len()
    }

    pub(crate) fn product_monomial(&self, i: u32, j: u32) -> u32 {
        self.0.table[i as usize * self.dim() + j as usize]
    }

    pub(crate) fn monomial_exponents(&self, m: u32) -> &[u32] {
        &self.0.exponents[m as usize]
    }

    pub(crate) fn monomial_degree(&self, m: u32) -> u32 {
        self.0.degrees[m as usize]
    }

    pub(crate) fn monomial_index(&self, exps: &[u32]) -> Option<u32> {
        let mut k = 0;
        for ((&e, &o), &s) in exps.iter().zip(&self.0.orders).zip(&self.0.strides) {
            if e >= o {
                return None;
            }
            k += e * s;
        }
        Some(k)
    }

    pub fn zero(&self) -> RingElement {
        RingElement::from_terms(self.clone(), Vec::new())
    }

    pub fn one(&self) -> RingElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> RingElement {
        self.scalar(self.0.base.from_i64(n))
    }

    pub fn from_bigint(&self, n: &num_bigint::BigInt) -> RingElement {
        self.scalar(self.0.base.from_bigint(n))
    }

    pub fn from_rational(&self, q: &num_rational::BigRational) -> Result<RingElement> {
        Ok(self.scalar(self.0.base.from_rational(q)?))
    }

    pub fn scalar(&self, s: Scalar) -> RingElement {
        RingElement::from_terms(self.clone(), vec![(0, s)])
    }

    /// The named nilpotent generator.
    pub fn generator(&self, name: &str) -> Result<RingElement> {
        let idx = self
            .0
            .descriptor
            .generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::Descriptor(format!("no generator named `{name}` in {self}")))?;
        let mut exps = vec![0; self.generator_count()];
        exps[idx] = 1;
        Ok(self.monomial(&exps, self.0.base.one()))
    }

    /// `coef * prod(gen_i^exps_i)`, zero when an exponent reaches its order.
    pub fn monomial(&self, exps: &[u32], coef: Scalar) -> RingElement {
        match self.monomial_index(exps) {
            Some(k) => RingElement::from_terms(self.clone(), vec![(k, coef)]),
            None => self.zero(),
        }
    }

    /// Adjoins further nilpotent generators, failing on a name collision.
    pub fn extend(&self, generators: &[(&str, u32)]) -> Result<Ring> {
        let mut desc = self.0.descriptor.clone();
        for (name, order) in generators {
            desc.generators.push(Generator { name: (*name).to_string(), order: *order });
        }
        Ring::new(desc)
    }

    /// The ring map sending each generator to the generator of the same name
    /// in `self` (`e ↦ e`, with exponents at or beyond the target order
    /// vanishing). Generators missing from `self` must not occur in `x`.
    pub fn coerce(&self, x: &RingElement) -> Result<RingElement> {
        let src = x.ring();
        if src == self {
            return Ok(x.clone());
        }
        if src.base() != self.base() {
            return Err(Error::RingMismatch(format!("cannot map {src} into {self}")));
        }
        let positions: Vec<Option<usize>> = src
            .descriptor()
            .generators
            .iter()
            .map(|g| self.descriptor().generators.iter().position(|h| h.name == g.name))
            .collect();
        let mut out = self.zero();
        for (m, c) in x.terms() {
            let mut exps = vec![0u32; self.generator_count()];
            for (g, &e) in src.monomial_exponents(*m).iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match positions[g] {
                    Some(p) => exps[p] = e,
                    None => {
                        return Err(Error::RingMismatch(format!(
                            "generator `{}` has no image in {self}",
                            src.descriptor().generators[g].name
                        )))
                    }
                }
            }
            out = &out + &self.monomial(&exps, c.clone());
        }
        Ok(out)
    }

    /// For `x` in an extension of `self` by the generators in `named`, the
    /// coefficient of `prod(name^exp)` as an element of `self`.
    pub fn coefficient_of(&self, x: &RingElement, named: &[(&str, u32)]) -> Result<RingElement> {
        let src = x.ring();
        let gens = &src.descriptor().generators;
        let mut out = self.zero();
        'terms: for (m, c) in x.terms() {
            let src_exps = src.monomial_exponents(*m);
            let mut exps = vec![0u32; self.generator_count()];
            for (g, &e) in src_exps.iter().enumerate() {
                let name = gens[g].name.as_str();
                if let Some((_, want)) = named.iter().find(|(n, _)| *n == name) {
                    if e != *want {
                        continue 'terms;
                    }
                } else if e > 0 {
                    let p = self.descriptor().generators.iter().position(|h| h.name == name).ok_or_else(|| {
                        Error::RingMismatch(format!("generator `{name}` of {src} has no image in {self}"))
                    })?;
                    exps[p] = e;
                }
            }
            out = &out + &self.monomial(&exps, c.clone());
        }
        Ok(out)
    }

    pub(crate) fn same(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.descriptor == other.0.descriptor
    }
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for Ring {}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.descriptor)
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.0.descriptor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptor_examples() {
        let q = Ring::parse("Q").unwrap();
        assert!(q.is_reduced());
        assert_eq!(q.nil_index(), 1);

        let z4 = Ring::parse("Z/4").unwrap();
        let two = z4.from_i64(2);
        assert!((&two * &two).is_zero());
        assert_eq!(two.nilpotency_order(), Some(2));

        let r = Ring::parse("Q[e;2,d;3]").unwrap();
        let e = r.generator("e").unwrap();
        let d = r.generator("d").unwrap();
        assert!((&e * &e).is_zero());
        assert!((&(&d * &d) * &d).is_zero());
        assert!(!(&e * &(&d * &d)).is_zero());
        assert_eq!(r.nil_index(), 4);
    }

    #[test]
    fn nil_index_mixes_base_and_generators() {
        assert_eq!(Ring::parse("Z/8").unwrap().nil_index(), 3);
        assert_eq!(Ring::parse("Z/4[e;2]").unwrap().nil_index(), 3);
        assert_eq!(Ring::parse("Q[e1;2,e2;3]").unwrap().nil_index(), 4);
    }

    #[test]
    fn invalid_descriptors() {
        assert!(matches!(Ring::parse("Z/1"), Err(Error::Descriptor(_))));
        assert!(matches!(Ring::parse("Q[e;1]"), Err(Error::Descriptor(_))));
        assert!(matches!(Ring::parse("Q[e;2,e;3]"), Err(Error::Descriptor(_))));
        assert!(matches!(Ring::parse("Q[t;2]"), Err(Error::Descriptor(_))));
        assert!(matches!(Ring::parse("Z/6"), Err(Error::Descriptor(_))));
    }

    #[test]
    fn coerce_truncates_and_embeds() {
        let big = Ring::parse("Q[e;3]").unwrap();
        let small = Ring::parse("Q[e;2]").unwrap();
        let e = big.generator("e").unwrap();
        let x = &big.one() + &(&e * &e);
        assert_eq!(small.coerce(&x).unwrap(), small.one());
        let ext = small.extend(&[("d1", 2)]).unwrap();
        let y = ext.coerce(&small.generator("e").unwrap()).unwrap();
        assert_eq!(y, ext.generator("e").unwrap());
        assert!(small.extend(&[("e", 2)]).is_err());
    }
}
