use rand::Rng as _;
use rand_chacha::ChaCha8Rng;

use super::LaurentSeries;
use crate::rings::{ElementSampler, Ring, RingElement};

/// Seeded sampler for exact Laurent polynomials of bounded shape.
pub struct SeriesSampler<'a> {
    ring: &'a Ring,
    elements: ElementSampler<'a>,
    /// Lowest index used for principal parts.
    pub depth: i64,
    /// Highest index used.
    pub degree: i64,
    /// Probability that an optional term is present.
    pub density: f64,
}

impl<'a> SeriesSampler<'a> {
    pub fn new(ring: &'a Ring) -> Self {
        SeriesSampler { ring, elements: ElementSampler::new(ring), depth: 2, degree: 3, density: 0.6 }
    }

    pub fn with_shape(mut self, depth: i64, degree: i64) -> Self {
        self.depth = depth;
        self.degree = degree;
        self
    }

    pub fn with_bound(mut self, bound: i64) -> Self {
        self.elements.bound = bound;
        self
    }

    fn maybe(&self, rng: &mut ChaCha8Rng, f: impl FnOnce(&mut ChaCha8Rng) -> RingElement) -> RingElement {
        if rng.gen_bool(self.density) {
            f(rng)
        } else {
            self.ring.zero()
        }
    }

    /// Any Laurent polynomial on `[-depth, degree]`.
    pub fn laurent_polynomial(&self, rng: &mut ChaCha8Rng) -> LaurentSeries {
        let terms: Vec<(i64, RingElement)> =
            (-self.depth..=self.degree).map(|i| (i, self.maybe(rng, |r| self.elements.element(r)))).collect();
        LaurentSeries::from_terms(self.ring, &terms, None)
    }

    /// A unit `t^nu (u + nilpotent principal part + higher terms)`.
    pub fn unit(&self, rng: &mut ChaCha8Rng) -> LaurentSeries {
        let nu = rng.gen_range(-2..=2);
        let mut terms = vec![(nu, self.elements.unit(rng))];
        for i in 1..=self.depth {
            terms.push((nu - i, self.maybe(rng, |r| self.elements.nilpotent(r))));
        }
        for i in 1..=self.degree {
            terms.push((nu + i, self.maybe(rng, |r| self.elements.element(r))));
        }
        LaurentSeries::from_terms(self.ring, &terms, None)
    }

    /// An element of `1 + Nil + t^-1 Nil[t^-1] + tA[t]`.
    pub fn sharp(&self, rng: &mut ChaCha8Rng) -> LaurentSeries {
        let mut terms = vec![(0, &self.ring.one() + &self.elements.nilpotent(rng))];
        for i in 1..=self.depth {
            terms.push((-i, self.maybe(rng, |r| self.elements.nilpotent(r))));
        }
        for i in 1..=self.degree {
            terms.push((i, self.maybe(rng, |r| self.elements.element(r))));
        }
        LaurentSeries::from_terms(self.ring, &terms, None)
    }

    /// A series of automorphism shape: nilpotent at indices `<= 0`, a unit
    /// at `t`, anything above.
    pub fn automorphism(&self, rng: &mut ChaCha8Rng) -> LaurentSeries {
        let mut terms = vec![(1, self.elements.unit(rng))];
        for i in 0..=self.depth {
            terms.push((-i, self.maybe(rng, |r| self.elements.nilpotent(r))));
        }
        for i in 2..=self.degree {
            terms.push((i, self.maybe(rng, |r| self.elements.element(r))));
        }
        LaurentSeries::from_terms(self.ring, &terms, None)
    }

    /// An automorphism-shaped power series `a1 t + ...` with no nilpotent
    /// low part.
    pub fn power_series_automorphism(&self, rng: &mut ChaCha8Rng) -> LaurentSeries {
        let mut terms = vec![(1, self.elements.unit(rng))];
        for i in 2..=self.degree {
            terms.push((i, self.maybe(rng, |r| self.elements.element(r))));
        }
        LaurentSeries::from_terms(self.ring, &terms, None)
    }

    pub fn elements(&self) -> &ElementSampler<'a> {
        &self.elements
    }
}
