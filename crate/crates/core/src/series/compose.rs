use super::LaurentSeries;
use crate::error::{Error, Result};
use crate::rings::RingElement;

impl LaurentSeries {
    /// Splits a substitution `g` into its nilpotent part `x` (indices `<= 0`)
    /// and `y = a1 t + a2 t^2 + ...` with `a1` a unit.
    pub(crate) fn split_substitution(&self) -> Result<(LaurentSeries, LaurentSeries)> {
        for (i, c) in self.terms() {
            if i > 0 {
                break;
            }
            if !c.is_nilpotent() {
                return Err(Error::InvalidSubstitution(format!("coefficient {c} at t^{i} is not nilpotent")));
            }
        }
        let a1 = self
            .coeff_checked(1)
            .map_err(|_| Error::Precision("the coefficient of t in the substituted series is unknown".into()))?;
        if !a1.is_unit() {
            return Err(Error::InvalidSubstitution(format!("coefficient {a1} of t is not a unit")));
        }
        let x = self.slice(i64::MIN / 4, 1);
        let y = self.slice(1, i64::MAX / 4);
        let y = LaurentSeries::new(&self.ring, y.lowest, y.coeffs, self.precision);
        Ok((x, y))
    }

    /// `f∘g = sum f_i g^i`, known below `min(cap, derived precision)`.
    ///
    /// Uses the Taylor split `f(x + y) = sum_j (D_j f)(y) x^j` with Hasse
    /// derivatives `D_j`, which needs no division and terminates because
    /// `x^e = 0` for the nil-index `e`.
    pub fn compose(&self, g: &LaurentSeries, cap: i64) -> Result<LaurentSeries> {
        self.check_ring(g);
        let (x, y) = g.split_substitution()?;
        if self.is_exact_zero() {
            return Ok(self.clone());
        }
        let e = self.ring.nil_index() as i64;
        // one inverse power y^-K serves every Hasse derivative
        let inv = if self.lowest() < 0 {
            let k = e - self.lowest();
            let top = cap + e * (-x.lowest()).max(0);
            Some((k, y.pow_capped(k as u64, Some(top + 2 * k)).invert_unit(top)?))
        } else {
            None
        };
        let mut result = LaurentSeries::zero(&self.ring);
        let mut xj = LaurentSeries::one(&self.ring);
        let mut j = 0u32;
        while !xj.is_zero() {
            let h = if j == 0 { self.clone() } else { self.hasse_derivative(j) };
            let target = cap - xj.lowest().min(0);
            let hy = compose_positive(&h, &y, inv.as_ref(), target)?;
            result = &result + &hy.mul_capped(&xj, Some(cap));
            xj = &xj * &x;
            j += 1;
            if j > self.ring.nil_index() {
                return Err(Error::Inconsistent("nilpotent part of substitution is not nilpotent".into()));
            }
        }
        Ok(result.cap(cap))
    }

    /// [`compose`](Self::compose) that fails unless the result is known below
    /// `target`.
    pub fn compose_to(&self, g: &LaurentSeries, target: i64) -> Result<LaurentSeries> {
        let r = self.compose(g, target)?;
        match r.precision() {
            Some(p) if p < target => {
                Err(Error::Precision(format!("composition is known only below t^{p}, t^{target} was requested")))
            }
            _ => Ok(r),
        }
    }
}

impl LaurentSeries {
    /// Compositional inverse `h` of a power series `p = a1 t + a2 t^2 + ...`
    /// with `a1` a unit, so that `p∘h = t`; known below `min(cap, precision)`.
    pub fn reversion(&self, cap: i64) -> Result<LaurentSeries> {
        let ring = self.ring().clone();
        if let Some((i, _)) = self.terms().next().filter(|(i, _)| *i < 1) {
            return Err(Error::InvalidSubstitution(format!("reversion needs a series starting at t, found t^{i}")));
        }
        let a1 = self.coeff_checked(1)?;
        let a1_inv =
            a1.invert().map_err(|_| Error::InvalidSubstitution(format!("coefficient {a1} of t is not a unit")))?;
        if self.is_exact() && self.top() <= 2 {
            return Ok(LaurentSeries::monomial(a1_inv, 1));
        }
        let n = self.precision().map_or(cap, |p| p.min(cap)).max(2) as usize;
        let neg_inv = -&a1_inv;
        // pw[k][i] = coefficient of t^i in h^k
        let zero = ring.zero();
        let mut pw: Vec<Vec<RingElement>> = vec![vec![zero.clone(); n]; n];
        pw[1][1] = a1_inv;
        for i in 2..n {
            for k in 2..=i {
                let mut acc = zero.clone();
                for j in 1..=(i - k + 1) {
                    let (a, b) = (&pw[1][j], &pw[k - 1][i - j]);
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                pw[k][i] = acc;
            }
            let mut s = zero.clone();
            for (k, row) in pw.iter().enumerate().take(i + 1).skip(2) {
                if let Some(pk) = self.coeff_ref(k as i64) {
                    if !pk.is_zero() && !row[i].is_zero() {
                        s = &s + &(pk * &row[i]);
                    }
                }
            }
            pw[1][i] = &s * &neg_inv;
        }
        let coeffs = std::mem::take(&mut pw[1]);
        Ok(LaurentSeries::new(&ring, 0, coeffs, Some(n as i64)))
    }
}

/// `h∘y` for `y = a1 t + ...` with `a1` a unit, by Horner's rule. `inv`
/// holds `(K, y^-K)` known below `cap` whenever `h` has negative indices.
fn compose_positive(
    h: &LaurentSeries,
    y: &LaurentSeries,
    inv: Option<&(i64, LaurentSeries)>,
    cap: i64,
) -> Result<LaurentSeries> {
    let ring = h.ring();
    if h.is_zero() {
        let p = h.precision().map(|n| n.min(cap));
        return Ok(LaurentSeries::new(ring, 0, Vec::new(), p));
    }
    let l = h.lowest();
    let cap_s = cap - l;
    let last = h.top().min(cap) - 1;
    let mut acc = LaurentSeries::constant(h.coeff(last));
    for i in (l..last).rev() {
        acc = acc.mul_capped(y, Some(cap_s));
        if let Some(c) = h.coeff_ref(i) {
            acc = &acc + &LaurentSeries::constant(c.clone());
        }
    }
    if let Some(n) = h.precision() {
        acc = acc.truncate(n - l);
    } else if h.top() > cap {
        acc = acc.truncate(cap_s);
    }
    let ypow = if l >= 0 {
        y.pow_capped(l as u64, Some(cap))
    } else {
        let (big_k, y_inv) = inv.expect("inverse power of y for a series with negative indices");
        let k = -l;
        assert!(k <= *big_k, "inverse power t^-{k} exceeds the prepared t^-{big_k}");
        y_inv.mul_capped(&y.pow_capped((big_k - k) as u64, Some(cap + big_k)), Some(cap))
    };
    Ok(acc.mul_capped(&ypow, Some(cap)))
}
