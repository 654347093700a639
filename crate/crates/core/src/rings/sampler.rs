use rand::Rng as _;
use rand_chacha::ChaCha8Rng;

use super::{Ring, RingElement};

/// Seeded sampler for ring elements with small coefficients.
pub struct ElementSampler<'a> {
    ring: &'a Ring,
    /// Coefficients are drawn from `[-bound, bound]`.
    pub bound: i64,
}

impl<'a> ElementSampler<'a> {
    pub fn new(ring: &'a Ring) -> Self {
        ElementSampler { ring, bound: 3 }
    }

    pub fn element(&self, rng: &mut ChaCha8Rng) -> RingElement {
        let mut x = self.ring.from_i64(rng.gen_range(-self.bound..=self.bound));
        x = &x + &self.nilpotent(rng);
        x
    }

    /// A unit: unit scalar plus a nilpotent.
    pub fn unit(&self, rng: &mut ChaCha8Rng) -> RingElement {
        loop {
            let c = self.ring.from_i64(rng.gen_range(-self.bound..=self.bound));
            if c.is_unit() {
                return &c + &self.nilpotent(rng);
            }
        }
    }

    /// A random element of the nilradical. Zero over a reduced ring.
    pub fn nilpotent(&self, rng: &mut ChaCha8Rng) -> RingElement {
        let r = self.ring;
        let mut x = r.zero();
        if let super::BaseRing::IntegersMod { prime, exponent, .. } = r.base() {
            if *exponent > 1 {
                let k = rng.gen_range(-self.bound..=self.bound);
                x = &x + &r.from_i64(k * *prime as i64);
            }
        }
        for m in 1..r.dim() as u32 {
            let k = rng.gen_range(-self.bound..=self.bound);
            if k != 0 {
                let exps = r.monomial_exponents(m).to_vec();
                x = &x + &r.monomial(&exps, r.base().from_i64(k));
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn samples_have_expected_kind() {
        for d in ["Q[e;2]", "Z/8", "Z/9[e;3]", "Q"] {
            let r = Ring::parse(d).unwrap();
            let s = ElementSampler::new(&r);
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            for _ in 0..20 {
                assert!(s.unit(&mut rng).is_unit());
                assert!(s.nilpotent(&mut rng).is_nilpotent());
                let _ = s.element(&mut rng);
            }
        }
    }
}
