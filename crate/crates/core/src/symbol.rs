//! The Contou-Carrère symbol `CC: A((t))* x A((t))* -> A*`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::rings::RingElement;
use crate::series::{exp_nilpotent, LaurentSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymbolStrategy {
    /// The finite product over unit factorizations; valid over any ring.
    ProductFormula,
    /// `exp res(log f · dg/g)` after splitting off `t^ν` and the pivot
    /// coefficient; Q-algebras only.
    ExpResLog,
    /// Both routes, failing on disagreement. Over rings that are not
    /// Q-algebras only the product formula runs.
    CrossCheck,
}

impl Default for SymbolStrategy {
    fn default() -> Self {
        if cfg!(debug_assertions) {
            SymbolStrategy::CrossCheck
        } else {
            SymbolStrategy::ProductFormula
        }
    }
}

impl SymbolStrategy {
    pub fn name(self) -> &'static str {
        match self {
            SymbolStrategy::ProductFormula => "product",
            SymbolStrategy::ExpResLog => "exp-log",
            SymbolStrategy::CrossCheck => "cross-check",
        }
    }
}

impl fmt::Display for SymbolStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SymbolStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [SymbolStrategy::ProductFormula, SymbolStrategy::ExpResLog, SymbolStrategy::CrossCheck]
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Parse { pos: 0, msg: format!("unknown symbol strategy `{s}`") })
    }
}

/// `CC(f, g)` for units `f, g` of `A((t))`.
pub fn cc(f: &LaurentSeries, g: &LaurentSeries, strategy: SymbolStrategy) -> Result<RingElement> {
    f.check_ring(g);
    match strategy {
        SymbolStrategy::ProductFormula => cc_product(f, g),
        SymbolStrategy::ExpResLog => cc_exp_log(f, g),
        SymbolStrategy::CrossCheck => {
            let a = cc_product(f, g)?;
            if !f.ring().is_q_algebra() {
                return Ok(a);
            }
            let b = cc_exp_log(f, g)?;
            if a != b {
                return Err(Error::Inconsistent(format!(
                    "CC({f}, {g}): product formula gives {a}, exp-res-log gives {b}"
                )));
            }
            Ok(a)
        }
    }
}

/// `CC(1 - a t^i, 1 - b t^j)`: `(1 - a^(-j/d) b^(i/d))^d` for `i > 0 > j`,
/// `d = gcd(i, j)`, its inverse with the roles swapped for `i < 0 < j`, and
/// `1` when `i` and `j` do not have opposite signs.
pub fn cc_atomic(i: i64, a: &RingElement, j: i64, b: &RingElement) -> Result<RingElement> {
    let ring = a.ring();
    if i > 0 && j < 0 {
        let d = i.gcd(&j);
        let base = &ring.one() - &(&a.pow((-j / d) as u64) * &b.pow((i / d) as u64));
        Ok(base.pow(d as u64))
    } else if i < 0 && j > 0 {
        cc_atomic(j, b, i, a)?.invert()
    } else {
        Ok(ring.one())
    }
}

fn sign_pow(ring: &crate::rings::Ring, k: i64) -> RingElement {
    if k.rem_euclid(2) == 0 {
        ring.one()
    } else {
        ring.from_i64(-1)
    }
}

fn cc_product(f: &LaurentSeries, g: &LaurentSeries) -> Result<RingElement> {
    let ring = f.ring().clone();
    let e = ring.nil_index() as i64;
    let depth = |d: &crate::series::UnitFactorization| d.negative.iter().map(|(i, _)| -i).max().unwrap_or(0);
    let df0 = f.unit_decompose(0)?;
    let dg0 = g.unit_decompose(0)?;
    let (jf, jg) = (depth(&df0), depth(&dg0));
    let df = if jg > 0 { f.unit_decompose(e * jg - 1)? } else { df0 };
    let dg = if jf > 0 { g.unit_decompose(e * jf - 1)? } else { dg0 };

    let mut acc = &sign_pow(&ring, df.nu * dg.nu) * &df.a0.pow_i64(dg.nu)?;
    acc = &acc * &dg.a0.pow_i64(-df.nu)?;
    let f_factors = df.negative.iter().chain(df.positive.iter());
    for (i, a) in f_factors {
        let g_factors = dg.negative.iter().chain(dg.positive.iter());
        for (j, b) in g_factors {
            if (*i > 0) != (*j > 0) {
                acc = &acc * &cc_atomic(*i, a, *j, b)?;
            }
        }
    }
    Ok(acc)
}

fn cc_exp_log(f: &LaurentSeries, g: &LaurentSeries) -> Result<RingElement> {
    let ring = f.ring().clone();
    if !ring.is_q_algebra() {
        return Err(Error::Unsupported(format!("exp-res-log needs a Q-algebra, got {ring}")));
    }
    let e = ring.nil_index() as i64;
    let nu = f.unit_order()?;
    let mu = g.unit_order()?;
    let a = f.coeff(nu);
    let b = g.coeff(mu);
    let f_sharp = f.shift(-nu).scale(&a.invert()?);
    let g_sharp = g.shift(-mu).scale(&b.invert()?);
    let (pf, pg) = (f_sharp.principal_depth(), g_sharp.principal_depth());
    let k = e * (pf + pg) + 2;

    // res(log f · dg/g) needs each factor known past minus the other's lowest index.
    let dg = g.derivative();
    let dlog = |cap: i64| -> Result<LaurentSeries> { Ok(dg.mul_capped(&g.invert_unit(cap)?, None)) };
    let mut dlog_g = dlog(k - mu)?;
    let log_f = f_sharp.log_sharp(k.max(-dlog_g.lowest()))?;
    if dlog_g.precision().is_some_and(|n| n < -log_f.lowest()) {
        dlog_g = dlog(-log_f.lowest() - dg.lowest())?;
    }
    let r = log_f.mul_capped(&dlog_g, Some(0)).coeff_checked(-1)?;
    let mut value = &a.pow_i64(mu)? * &exp_nilpotent(&r)?;
    if nu != 0 {
        let log_g0 = g_sharp.log_sharp(1)?.coeff_checked(0)?;
        let cc_t_g = &(&sign_pow(&ring, mu) * &b.invert()?) * &exp_nilpotent(&-&log_g0)?;
        value = &value * &cc_t_g.pow_i64(nu)?;
    }
    Ok(value)
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

    const BOTH: [SymbolStrategy; 2] = [SymbolStrategy::ProductFormula, SymbolStrategy::ExpResLog];

    #[test]
    fn t_with_t() {
        let r = Ring::rationals();
        let t = LaurentSeries::t(&r);
        for s in BOTH {
            assert_eq!(cc(&t, &t, s).unwrap(), r.from_i64(-1));
        }
    }

    #[test]
    fn constant_against_order() {
        let r = Ring::rationals();
        let five = LaurentSeries::constant(r.from_i64(5));
        let t2 = LaurentSeries::t_pow(&r, 2);
        for s in BOTH {
            assert_eq!(cc(&five, &t2, s).unwrap(), r.from_i64(25));
        }
    }

    #[test]
    fn atomic_pairs() {
        let (r, e) = qe();
        let f = &LaurentSeries::one(&r) - &LaurentSeries::monomial(r.from_i64(3), 1);
        let g = &LaurentSeries::one(&r) - &LaurentSeries::monomial(e.clone(), -1);
        let want = &r.one() - &e.scale_i64(3);
        for s in BOTH {
            assert_eq!(cc(&f, &g, s).unwrap(), want);
        }
        assert_eq!(cc_atomic(1, &r.from_i64(3), -1, &e).unwrap(), want);
        assert_eq!(cc_atomic(2, &r.from_i64(7), 2, &e).unwrap(), r.one());
        assert_eq!(cc_atomic(2, &r.one(), -2, &e).unwrap(), &r.one() - &e.scale_i64(2));
    }

    #[test]
    fn principal_against_positive() {
        let (r, e) = qe();
        let b = r.from_i64(7);
        let f = &LaurentSeries::one(&r) + &LaurentSeries::monomial(e.clone(), -1);
        let g = &LaurentSeries::one(&r) - &LaurentSeries::monomial(b.clone(), 1);
        let want = &r.one() - &(&e * &b);
        for s in BOTH {
            assert_eq!(cc(&f, &g, s).unwrap(), want);
        }
    }

    #[test]
    fn exp_log_with_negative_order_and_deep_log() {
        let r = Ring::parse("Q[e;3]").unwrap();
        let f = crate::parse::parse_series("e*t^-2 + (-e - 2*e^2)*t^-1 + (3 - e + 3*e^2) + (2*e + 2*e^2)*t^3", &r);
        let g = crate::parse::parse_series("(2 + 2*e + 3*e^2)*t^-2 + (-1 - 2*e)", &r);
        let (f, g) = (f.unwrap(), g.unwrap());
        assert_eq!(cc(&f, &g, SymbolStrategy::ExpResLog).unwrap(), cc(&f, &g, SymbolStrategy::ProductFormula).unwrap());
    }

    #[test]
    fn z4_uses_product_formula() {
        let r = Ring::parse("Z/4").unwrap();
        let f = &LaurentSeries::one(&r) - &LaurentSeries::monomial(r.from_i64(2), -1);
        let g = &LaurentSeries::one(&r) - &LaurentSeries::monomial(r.from_i64(3), 1);
        // (1 - 3*2)^-1 = (1 - 6)^-1 = 3^-1 = 3 mod 4
        assert_eq!(cc(&f, &g, SymbolStrategy::CrossCheck).unwrap(), r.from_i64(3));
        assert!(matches!(cc(&f, &g, SymbolStrategy::ExpResLog), Err(Error::Unsupported(_))));
    }
}
