use num_bigint::BigInt;
use num_rational::BigRational;

use super::LaurentSeries;
use crate::error::{Error, Result};
use crate::rings::{Ring, RingElement};

fn require_q(ring: &Ring, what: &str) -> Result<()> {
    if ring.is_q_algebra() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{what} needs a Q-algebra, got {ring}")))
    }
}

fn reciprocal(ring: &Ring, k: i64) -> RingElement {
    ring.from_rational(&BigRational::new(BigInt::from(1), BigInt::from(k))).expect("rationals embed in a Q-algebra")
}

/// `exp(x) = sum_{k<e} x^k / k!` for nilpotent `x` in a Q-algebra.
pub fn exp_nilpotent(x: &RingElement) -> Result<RingElement> {
    let ring = x.ring();
    require_q(ring, "exp")?;
    if !x.is_nilpotent() {
        return Err(Error::Domain(format!("exp of non-nilpotent {x}")));
    }
    let mut acc = ring.one();
    let mut term = ring.one();
    let mut k = 1;
    loop {
        term = &(&term * x) * &reciprocal(ring, k);
        if term.is_zero() {
            return Ok(acc);
        }
        acc = &acc + &term;
        k += 1;
    }
}

/// `log(1 + w) = sum (-1)^(k+1) w^k / k` for nilpotent `w`.
fn log_unipotent(w: &RingElement) -> RingElement {
    let ring = w.ring();
    let mut acc = ring.zero();
    let mut pw = ring.one();
    let mut k = 1;
    loop {
        pw = &pw * w;
        if pw.is_zero() {
            return acc;
        }
        let term = &pw * &reciprocal(ring, k);
        acc = if k % 2 == 1 { &acc + &term } else { &acc - &term };
        k += 1;
    }
}

impl LaurentSeries {
    /// `log f` for `f` in the subgroup with `f_0 - 1` and all negative-index
    /// coefficients nilpotent, known below `cap`.
    ///
    /// Computed as `log f = log U + log(1 + U^-1 N)` where `U` is the
    /// nonnegative part and `N` the negative part; the second sum is finite.
    pub fn log_sharp(&self, cap: i64) -> Result<LaurentSeries> {
        let ring = self.ring().clone();
        require_q(&ring, "log")?;
        if !self.is_sharp() {
            return Err(Error::Domain(format!("log is defined on 1 + nilpotents + tA[[t]], got {self}")));
        }
        let e = ring.nil_index() as i64;
        let neg = self.negative_part();
        let u = self.nonnegative_part();
        let depth = neg.principal_depth();
        let wide = cap + (e - 1) * depth;

        let mut result = log_power_series(&u, wide)?;
        if !neg.is_zero() {
            let z = u.invert_unit(wide)?.mul_capped(&neg, Some(wide));
            let mut pw = LaurentSeries::one(&ring);
            for k in 1..e {
                pw = pw.mul_capped(&z, Some(wide));
                if pw.is_exact_zero() {
                    break;
                }
                let term = pw.scale(&reciprocal(&ring, k));
                result = if k % 2 == 1 { &result + &term } else { &result - &term };
            }
        }
        Ok(result.cap(cap))
    }

    /// `exp h` for `h` with nilpotent coefficients at indices `<= 0`, known
    /// below `cap`. Inverse to [`log_sharp`](Self::log_sharp).
    pub fn exp_sharp(&self, cap: i64) -> Result<LaurentSeries> {
        let ring = self.ring().clone();
        require_q(&ring, "exp")?;
        if let Some((i, c)) = self.terms().take_while(|(i, _)| *i <= 0).find(|(_, c)| !c.is_nilpotent()) {
            return Err(Error::Domain(format!("exp needs nilpotent coefficients at t^(<=0), got {c} at t^{i}")));
        }
        if !self.knows(0) {
            return Err(Error::Precision("exp needs the constant coefficient".into()));
        }
        let e = ring.nil_index() as i64;
        let x = self.slice(i64::MIN / 4, 1);
        let p = {
            let s = self.slice(1, i64::MAX / 4);
            LaurentSeries::new(&ring, s.lowest(), s.coeffs, self.precision())
        };
        let depth = x.principal_depth();
        let wide = cap + (e - 1) * depth;

        let mut ex = LaurentSeries::one(&ring);
        let mut pw = LaurentSeries::one(&ring);
        let mut k = 1;
        loop {
            pw = (&pw * &x).scale(&reciprocal(&ring, k));
            if pw.is_zero() {
                break;
            }
            ex = &ex + &pw;
            k += 1;
        }

        // E = exp(p) solves E' = p' E: k E_k = sum_{i=1..k} i p_i E_{k-i}.
        let n = p.precision().map_or(wide, |q| q.min(wide)).max(1) as usize;
        let mut coeffs: Vec<RingElement> = vec![ring.one()];
        for k in 1..n {
            let mut s = ring.zero();
            for i in 1..=k {
                if let Some(pi) = p.coeff_ref(i as i64) {
                    if !pi.is_zero() {
                        s = &s + &(&pi.scale_i64(i as i64) * &coeffs[k - i]);
                    }
                }
            }
            coeffs.push(&s * &reciprocal(&ring, k as i64));
        }
        let ep = if p.is_exact_zero() {
            LaurentSeries::one(&ring)
        } else {
            LaurentSeries::new(&ring, 0, coeffs, Some(n as i64))
        };
        Ok(ex.mul_capped(&ep, Some(cap)).cap(cap))
    }
}

/// `log U` for a power series `U` with `U_0 - 1` nilpotent, as
/// `log U_0 + integral(V'/V)` with `V = U / U_0`.
fn log_power_series(u: &LaurentSeries, cap: i64) -> Result<LaurentSeries> {
    let ring = u.ring();
    let u0 = u.coeff(0);
    let c = LaurentSeries::constant(log_unipotent(&(&u0 - &ring.one())));
    let v = u.scale(&u0.invert()?);
    if v.is_exact() && v.top() == 1 {
        return Ok(c);
    }
    let ratio = v.derivative().mul_capped(&v.invert_unit(cap)?, Some(cap - 1));
    let n = ratio.precision().map_or(cap, |p| (p + 1).min(cap));
    let mut coeffs = vec![ring.zero()];
    for k in 1..n.max(1) {
        let a = ratio.coeff(k - 1);
        coeffs.push(&a * &reciprocal(ring, k));
    }
    let integral = LaurentSeries::new(ring, 0, coeffs, Some(n.max(1)));
    Ok(&c + &integral)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_examples() {
        let r = Ring::parse("Q[e;2]").unwrap();
        let e = r.generator("e").unwrap();
        assert!(LaurentSeries::one(&r).log_sharp(10).unwrap().is_zero());
        let f = &LaurentSeries::one(&r) + &LaurentSeries::monomial(e.clone(), -1);
        let l = f.log_sharp(10).unwrap();
        assert!(l.agrees_with(&LaurentSeries::monomial(e, -1)));

        let q = Ring::rationals();
        let f = &LaurentSeries::one(&q) + &LaurentSeries::t(&q);
        let l = f.log_sharp(3).unwrap();
        let half = q.from_rational(&BigRational::new(1.into(), 2.into())).unwrap();
        let want = LaurentSeries::from_terms(&q, &[(1, q.one()), (2, -&half)], Some(3));
        assert_eq!(l, want);
    }

    #[test]
    fn log_matches_naive_sum() {
        let r = Ring::parse("Q[e;3]").unwrap();
        let e = r.generator("e").unwrap();
        let h = LaurentSeries::from_terms(
            &r,
            &[(-2, e.clone()), (-1, e.scale_i64(3)), (0, e.clone()), (1, r.from_i64(2)), (2, r.one())],
            None,
        );
        let f = &LaurentSeries::one(&r) + &h;
        let cap = 8;
        let fast = f.log_sharp(cap).unwrap();
        // oracle: direct alternating sum with a generous term count
        let mut naive = LaurentSeries::zero(&r);
        let mut pw = LaurentSeries::one(&r);
        for k in 1..40 {
            pw = pw.mul_capped(&h, Some(cap + 40));
            let term = pw.scale(&reciprocal(&r, k));
            naive = if k % 2 == 1 { &naive + &term } else { &naive - &term };
        }
        assert!(fast.agrees_with(&naive.truncate(cap)));
        assert_eq!(fast.precision(), Some(cap));
    }

    #[test]
    fn exp_inverts_log() {
        let r = Ring::parse("Q[e;3]").unwrap();
        let e = r.generator("e").unwrap();
        let f = LaurentSeries::from_terms(
            &r,
            &[(-1, e.clone()), (0, &r.one() + &e), (1, r.from_i64(-2)), (3, r.one())],
            None,
        );
        let back = f.log_sharp(12).unwrap().exp_sharp(12).unwrap();
        assert!(back.agrees_with(&f), "{back}");
    }

    #[test]
    fn exp_of_nilpotent() {
        let r = Ring::parse("Q[e;3]").unwrap();
        let e = r.generator("e").unwrap();
        let half = r.from_rational(&BigRational::new(1.into(), 2.into())).unwrap();
        let want = &(&r.one() + &e) + &(&(&e * &e) * &half);
        assert_eq!(exp_nilpotent(&e).unwrap(), want);
        assert!(exp_nilpotent(&r.one()).is_err());
        let z4 = Ring::parse("Z/4").unwrap();
        assert!(matches!(exp_nilpotent(&z4.from_i64(2)), Err(Error::Unsupported(_))));
    }
}
