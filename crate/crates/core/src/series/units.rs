use super::LaurentSeries;
use crate::error::{Error, Result};
use crate::rings::RingElement;

/// `f = prod_{i<0} (1 - a_i t^i) * a0 * t^nu * prod_{0<i<=bound} (1 - a_i t^i)`
/// up to the precision of `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitFactorization {
    /// Nonzero `(i, a_i)` for `i < 0`, in decreasing `i`; all `a_i` nilpotent.
    pub negative: Vec<(i64, RingElement)>,
    pub a0: RingElement,
    pub nu: i64,
    /// Nonzero `(i, a_i)` for `0 < i <= positive_bound`, in increasing `i`.
    pub positive: Vec<(i64, RingElement)>,
    pub positive_bound: i64,
}

impl UnitFactorization {
    /// Multiplies the factors back together. The positive product is known
    /// below `t^(positive_bound + 1)`.
    pub fn reassemble(&self) -> LaurentSeries {
        let ring = self.a0.ring();
        let mut neg = LaurentSeries::one(ring);
        for (i, a) in &self.negative {
            neg = &neg * &one_minus(a, *i);
        }
        let cap = self.positive_bound + 1;
        let mut pos = LaurentSeries::one(ring);
        for (i, a) in &self.positive {
            pos = pos.mul_capped(&one_minus(a, *i), Some(cap));
        }
        let pos = pos.truncate(cap);
        let mid = LaurentSeries::monomial(self.a0.clone(), self.nu);
        &(&neg * &mid) * &pos
    }

    /// The `(1 - a t^i)` factor for a given index, exact.
    pub fn factor(a: &RingElement, i: i64) -> LaurentSeries {
        one_minus(a, i)
    }
}

fn one_minus(a: &RingElement, i: i64) -> LaurentSeries {
    let ring = a.ring();
    &LaurentSeries::one(ring) - &LaurentSeries::monomial(a.clone(), i)
}

impl LaurentSeries {
    /// The index `nu` of the first unit coefficient; all lower coefficients
    /// are nilpotent.
    pub fn unit_order(&self) -> Result<i64> {
        for (i, c) in self.terms() {
            if c.is_unit() {
                return Ok(i);
            }
            if !c.is_nilpotent() {
                return Err(Error::NotAUnit(format!("coefficient {c} at t^{i} is neither a unit nor nilpotent")));
            }
        }
        match self.precision() {
            None => Err(Error::NotAUnit(format!("{self} has no unit coefficient"))),
            Some(n) => Err(Error::Precision(format!(
                "no unit coefficient below t^{n}; cannot decide whether {self} is a unit"
            ))),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.unit_order().is_ok()
    }

    /// Multiplicative inverse, known below `cap` (exact when the inverse is a
    /// Laurent polynomial that the input determines exactly).
    pub fn invert_unit(&self, cap: i64) -> Result<LaurentSeries> {
        let nu = self.unit_order()?;
        let ring = self.ring();
        let pivot = self.coeff(nu);
        let pivot_inv = pivot.invert()?;
        let e = ring.nil_index() as usize;

        if self.is_exact() && self.terms().all(|(i, c)| i == nu || c.is_nilpotent()) {
            let w = (&self.shift(-nu).scale(&pivot_inv)) - &LaurentSeries::one(ring);
            let minus_w = -&w;
            let mut acc = LaurentSeries::one(ring);
            let mut p = LaurentSeries::one(ring);
            for _ in 1..e {
                p = &p * &minus_w;
                if p.is_zero() {
                    break;
                }
                acc = &acc + &p;
            }
            return Ok(acc.scale(&pivot_inv).shift(-nu));
        }

        let g = self.shift(-nu);
        let neg = g.negative_part();
        let u = g.nonnegative_part();
        let depth = neg.principal_depth();
        let target = cap + nu;
        let cap_v = target + (e as i64 - 1) * depth;
        let v = invert_power_series(&u, cap_v)?;
        if neg.is_zero() {
            return Ok(v.cap(target).shift(-nu));
        }
        let z = v.mul_capped(&neg, Some(cap_v));
        let minus_z = -&z;
        let mut sum = LaurentSeries::one(ring);
        let mut p = LaurentSeries::one(ring);
        for _ in 1..e {
            p = p.mul_capped(&minus_z, Some(cap_v));
            if p.is_exact_zero() {
                break;
            }
            sum = &sum + &p;
        }
        Ok(v.mul_capped(&sum, Some(target)).cap(target).shift(-nu))
    }

    /// Integer power of a unit; negative exponents invert first.
    pub fn pow_unit(&self, k: i64, cap: i64) -> Result<LaurentSeries> {
        if k >= 0 {
            Ok(self.pow_capped(k as u64, Some(cap)).cap(cap))
        } else {
            let probe = self.invert_unit(cap)?;
            let drop = (-probe.lowest()).max(0);
            let inv = if drop == 0 || probe.is_exact() {
                probe
            } else {
                self.invert_unit(cap + (k.unsigned_abs() as i64 - 1) * drop)?
            };
            Ok(inv.pow_capped(k.unsigned_abs(), Some(cap)).cap(cap))
        }
    }

    /// Factors a unit as in [`UnitFactorization`], peeling positive factors
    /// up to index `positive_bound`.
    pub fn unit_decompose(&self, positive_bound: i64) -> Result<UnitFactorization> {
        let ring = self.ring().clone();
        let nu = self.unit_order()?;
        let e = ring.nil_index() as i64;
        let g = self.shift(-nu);
        let depth = g.negative_part().principal_depth();
        let reach = (e - 1) * depth;
        if !g.knows(reach) {
            return Err(Error::Precision(format!("unit factorization needs coefficients through t^{}", reach + nu)));
        }

        // Solve neg(m g) = 0 for m = 1 + (nilpotent polynomial in t^-1) by
        // the fixed point m = 1 - c^-1 neg(m r), r = g - c.
        let c = g.coeff(0);
        let c_inv = c.invert()?;
        let r = &g.slice(-depth, reach + 1) - &LaurentSeries::constant(c.clone());
        let one = LaurentSeries::one(&ring);
        let mut m = one.clone();
        let max_passes = (e - 1) * (depth + 1) + 2;
        let mut passes = 0;
        loop {
            let next = &one - &(&m * &r).negative_part().scale(&c_inv);
            if next == m {
                break;
            }
            m = next;
            passes += 1;
            if passes > max_passes {
                return Err(Error::Inconsistent("negative unit factor did not converge".into()));
            }
        }

        // n = m^-1 is a polynomial in t^-1 with nilpotent coefficients.
        let n = m.invert_unit(0)?;
        let q = &m * &g;
        let a0 = q.coeff(0);
        let p = q.scale(&a0.invert()?);

        let mut negative = Vec::new();
        let mut rest = n;
        let ndepth = rest.principal_depth();
        let max_i = (e - 1).max(1) * ndepth;
        for i in 1..=max_i {
            let a = -&rest.coeff(-i);
            if a.is_zero() {
                continue;
            }
            let mut inv = one.clone();
            let mut pw = one.clone();
            let step = LaurentSeries::monomial(a.clone(), -i);
            loop {
                pw = &pw * &step;
                if pw.is_zero() {
                    break;
                }
                inv = &inv + &pw;
            }
            rest = &rest * &inv;
            negative.push((-i, a));
        }
        if rest != one {
            return Err(Error::Inconsistent(format!("negative factors leave remainder {rest}")));
        }

        if positive_bound > 0 && !p.knows(positive_bound) {
            return Err(Error::Precision(format!(
                "positive factors through index {positive_bound} need the input through t^{}",
                positive_bound + nu + ndepth
            )));
        }
        let len = (positive_bound.max(0) + 1) as usize;
        let mut buf: Vec<RingElement> = (0..len as i64).map(|k| p.coeff(k)).collect();
        let mut positive = Vec::new();
        for i in 1..len {
            let a = -&buf[i];
            if a.is_zero() {
                continue;
            }
            for k in i..len {
                let add = &a * &buf[k - i];
                buf[k] = &buf[k] + &add;
            }
            positive.push((i as i64, a));
        }
        Ok(UnitFactorization { negative, a0, nu, positive, positive_bound: positive_bound.max(0) })
    }
}

/// Inverse of a power series with unit constant term, known below `cap`.
fn invert_power_series(u: &LaurentSeries, cap: i64) -> Result<LaurentSeries> {
    let ring = u.ring();
    debug_assert_eq!(u.lowest(), 0);
    let u0_inv = u.coeff(0).invert()?;
    if u.is_exact() && u.top() == 1 {
        return Ok(LaurentSeries::constant(u0_inv));
    }
    let n = u.precision().map_or(cap, |p| p.min(cap)).max(0) as usize;
    let neg_inv = -&u0_inv;
    let mut v: Vec<RingElement> = Vec::with_capacity(n);
    for k in 0..n {
        if k == 0 {
            v.push(u0_inv.clone());
            continue;
        }
        let mut s = ring.zero();
        let imax = k.min(u.top() as usize - 1);
        for i in 1..=imax {
            if let Some(ui) = u.coeff_ref(i as i64) {
                if !ui.is_zero() && !v[k - i].is_zero() {
                    s = &s + &(ui * &v[k - i]);
                }
            }
        }
        v.push(&s * &neg_inv);
    }
    Ok(LaurentSeries::new(ring, 0, v, Some(n as i64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Ring;

    fn qe() -> (Ring, RingElement) {
        let r = Ring::parse("Q[e;2]").unwrap();
        let e = r.generator("e").unwrap();
        (r, e)
    }

    #[test]
    fn unit_orders() {
        let (r, e) = qe();
        assert_eq!(LaurentSeries::t(&r).unit_order().unwrap(), 1);
        assert_eq!(LaurentSeries::constant(r.from_i64(5)).unit_order().unwrap(), 0);
        let f = &LaurentSeries::monomial(e, 2) + &LaurentSeries::t_pow(&r, 3);
        assert_eq!(f.unit_order().unwrap(), 3);
        assert!(matches!(LaurentSeries::zero(&r).unit_order(), Err(Error::NotAUnit(_))));
        let z = LaurentSeries::new(&r, 0, vec![], Some(4));
        assert!(matches!(z.unit_order(), Err(Error::Precision(_))));
    }

    #[test]
    fn inverse_examples() {
        let (r, e) = qe();
        assert_eq!(LaurentSeries::t(&r).invert_unit(10).unwrap(), LaurentSeries::t_pow(&r, -1));
        let f = &LaurentSeries::one(&r) - &LaurentSeries::monomial(e.clone(), -1);
        let g = &LaurentSeries::one(&r) + &LaurentSeries::monomial(e, -1);
        assert_eq!(f.invert_unit(10).unwrap(), g);

        let q = Ring::rationals();
        let f = &LaurentSeries::one(&q) + &LaurentSeries::t(&q);
        let inv = f.invert_unit(4).unwrap();
        let want = LaurentSeries::from_terms(
            &q,
            &[(0, q.from_i64(1)), (1, q.from_i64(-1)), (2, q.from_i64(1)), (3, q.from_i64(-1))],
            Some(4),
        );
        assert_eq!(inv, want);
        assert!((&f * &inv).agrees_with(&LaurentSeries::one(&q)));
    }

    #[test]
    fn decompose_examples() {
        let (r, e) = qe();
        let d = LaurentSeries::t(&r).unit_decompose(5).unwrap();
        assert!(d.negative.is_empty() && d.positive.is_empty());
        assert_eq!((d.a0.clone(), d.nu), (r.one(), 1));

        let f = &LaurentSeries::one(&r) + &LaurentSeries::monomial(e.clone(), -1);
        let d = f.unit_decompose(5).unwrap();
        assert_eq!(d.negative, vec![(-1, -&e)]);
        assert_eq!(d.a0, r.one());
        assert!(d.positive.is_empty());

        let q = Ring::rationals();
        let f = LaurentSeries::from_terms(&q, &[(0, q.from_i64(2)), (1, q.from_i64(2))], None);
        let d = f.unit_decompose(6).unwrap();
        assert_eq!(d.a0, q.from_i64(2));
        assert_eq!(d.positive, vec![(1, q.from_i64(-1))]);
        assert!(d.reassemble().agrees_with(&f));
    }

    #[test]
    fn decompose_mixed_unit() {
        let (r, e) = qe();
        // (1 + e t^-2) * 3 t^-1 * (1 + t + t^3), expanded
        let f = &(&(&LaurentSeries::one(&r) + &LaurentSeries::monomial(e.clone(), -2))
            * &LaurentSeries::monomial(r.from_i64(3), -1))
            * &LaurentSeries::from_terms(&r, &[(0, r.one()), (1, r.one()), (3, r.one())], None);
        let d = f.unit_decompose(8).unwrap();
        assert_eq!(d.nu, -1);
        assert_eq!(d.a0, r.from_i64(3));
        assert_eq!(d.negative, vec![(-2, -&e)]);
        let back = d.reassemble();
        assert!(back.agrees_with(&f), "{back} vs {f}");
    }
}
