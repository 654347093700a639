//! The Lie algebra of continuous derivations `g d/dt` of `A((t))`, its two
//! 2-cocycles, their closed forms on the Witt basis, and the passage from a
//! group 2-cocycle to its Lie cocycle over dual numbers.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::aut::AutElement;
use crate::cocycles::{Cochain2, Cocycle};
use crate::error::{Error, Result};
use crate::rings::{Ring, RingElement};
use crate::series::LaurentSeries;

/// The derivation `g d/dt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    coefficient: LaurentSeries,
}

impl Derivation {
    pub fn new(coefficient: LaurentSeries) -> Self {
        Derivation { coefficient }
    }

    /// `L_n = t^(n+1) d/dt`.
    pub fn witt(ring: &Ring, n: i64) -> Self {
        Derivation::new(LaurentSeries::t_pow(ring, n + 1))
    }

    pub fn coefficient(&self) -> &LaurentSeries {
        &self.coefficient
    }

    pub fn ring(&self) -> &Ring {
        self.coefficient.ring()
    }

    /// `f ↦ g f'`.
    pub fn apply(&self, f: &LaurentSeries) -> LaurentSeries {
        &self.coefficient * &f.derivative()
    }

    /// `[g1 d/dt, g2 d/dt] = (g1 g2' - g2 g1') d/dt`.
    pub fn bracket(&self, other: &Derivation) -> Derivation {
        let (g1, g2) = (&self.coefficient, &other.coefficient);
        Derivation::new(&(g1 * &g2.derivative()) - &(g2 * &g1.derivative()))
    }

    pub fn scale(&self, c: &RingElement) -> Derivation {
        Derivation::new(self.coefficient.scale(c))
    }
}

impl std::ops::Add for &Derivation {
    type Output = Derivation;
    fn add(self, other: &Derivation) -> Derivation {
        Derivation::new(&self.coefficient + &other.coefficient)
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) d/dt", self.coefficient)
    }
}

/// `2 res(g1' d(g2'))`.
pub fn lie_bott(d1: &Derivation, d2: &Derivation) -> Result<RingElement> {
    let r = d1.coefficient.derivative().residue_pairing(&d2.coefficient.derivative())?;
    Ok(r.scale_i64(2))
}

/// `tr(c_r b_s - c_s b_r)` for `s = d1`, `r = d2`, with the blocks taken
/// along `A((t)) = t^-1 A[t^-1] ⊕ A[[t]]`.
pub fn lie_det(d1: &Derivation, d2: &Derivation) -> Result<RingElement> {
    Ok(&trace_cb(d2, d1)? - &trace_cb(d1, d2)?)
}

/// `tr(c_r b_s)` on `A[[t]]`. The derivation `g d/dt` sends `t^k` to
/// `k sum_i g_i t^(k+i-1)`, so `b_s` only sees `t^k` with `0 < k < 1 - lowest(g_s)`
/// and the trace is a finite double sum.
fn trace_cb(r: &Derivation, s: &Derivation) -> Result<RingElement> {
    let ring = r.ring().clone();
    let (gr, gs) = (&r.coefficient, &s.coefficient);
    let mut acc = ring.zero();
    let low = gs.lowest();
    for k in 1..=(-low).max(0) {
        for j in (k - 1 + low)..0 {
            let b = gs.coeff_checked(j - k + 1)?;
            if b.is_zero() {
                continue;
            }
            let c = gr.coeff_checked(k - j + 1)?;
            acc = &acc + &(&b * &c).scale_i64(k * j);
        }
    }
    Ok(acc)
}

/// Closed forms on `(L_m, L_n)`: `-2 (m - m^3)` for the Bott-Thurston
/// cocycle and `-(m - m^3) / 6` for the determinantal one, both times
/// `δ(n, -m)`.
pub fn virasoro_pairing(m: i64, n: i64, which: Cocycle) -> BigRational {
    if n != -m {
        return BigRational::from_integer(BigInt::from(0));
    }
    let m = BigInt::from(m);
    let base = &m - &m * &m * &m;
    match which {
        Cocycle::BottThurston => BigRational::from_integer(base * -2),
        Cocycle::Determinant => BigRational::new(-base, BigInt::from(6)),
    }
}

/// Names of the two dual generators adjoined by [`lie_from_group`].
pub const DUAL_GENERATORS: [&str; 2] = ["eps1", "eps2"];

/// The Lie cocycle of a group 2-cocycle `Λ` at `(g1 d/dt, g2 d/dt)`.
///
/// Over `A[eps1, eps2]/(eps1^2, eps2^2)` with `α̃_i = t + g_i eps_i`,
/// `Λ(α1, α2) Λ(α2, α1)^-1 = 1 + b eps1 eps2`, and `b` is returned. The
/// cochain is called on elements of the extended ring.
pub fn lie_from_group(c: &Cochain2, g1: &LaurentSeries, g2: &LaurentSeries) -> Result<RingElement> {
    let base = g1.ring().clone();
    if g2.ring() != &base {
        return Err(Error::RingMismatch(format!("{base} vs {}", g2.ring())));
    }
    let names = base.descriptor().generators.iter().map(|g| g.name.as_str()).collect::<Vec<_>>();
    if let Some(n) = DUAL_GENERATORS.iter().find(|n| names.contains(n)) {
        return Err(Error::Domain(format!("{base} already has a generator named `{n}`")));
    }
    let ext = base.extend(&[(DUAL_GENERATORS[0], 2), (DUAL_GENERATORS[1], 2)])?;
    let t = LaurentSeries::t(&ext);
    let alpha = |g: &LaurentSeries, name: &str| -> Result<AutElement> {
        let eps = ext.generator(name)?;
        AutElement::new(&t + &g.coerce(&ext)?.scale(&eps))
    };
    let a1 = alpha(g1, DUAL_GENERATORS[0])?;
    let a2 = alpha(g2, DUAL_GENERATORS[1])?;
    let upsilon = &c(&a1, &a2)? * &c(&a2, &a1)?.invert()?;
    let u = &upsilon - &ext.one();
    let dual = [(DUAL_GENERATORS[0], 1), (DUAL_GENERATORS[1], 1)];
    let b = base.coefficient_of(&u, &dual)?;
    let e12 = &ext.generator(DUAL_GENERATORS[0])? * &ext.generator(DUAL_GENERATORS[1])?;
    if &ext.coerce(&b)? * &e12 != u {
        return Err(Error::Inconsistent(format!(
            "Λ(α1, α2) Λ(α2, α1)^-1 = {upsilon} is not of the form 1 + b eps1 eps2"
        )));
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycles::{bott_thurston, det_cocycle};
    use crate::precision::Precision;
    use crate::symbol::SymbolStrategy;

    fn q() -> Ring {
        Ring::rationals()
    }

    #[test]
    fn witt_brackets() {
        let r = q();
        let l = |n| Derivation::witt(&r, n);
        assert_eq!(l(0).bracket(&l(1)), l(1));
        assert_eq!(l(-2).bracket(&l(2)), l(0).scale(&r.from_i64(4)));
        assert!(l(3).bracket(&l(3)).coefficient().is_zero());
    }

    #[test]
    fn cocycles_on_witt_pairs() {
        let r = q();
        let l = |n| Derivation::witt(&r, n);
        assert_eq!(lie_bott(&l(2), &l(-2)).unwrap(), r.from_i64(12));
        assert!(lie_bott(&l(1), &l(2)).unwrap().is_zero());
        assert_eq!(lie_det(&l(2), &l(-2)).unwrap(), r.one());
        assert!(lie_det(&l(1), &l(-1)).unwrap().is_zero());
        assert_eq!(lie_det(&l(-3), &l(3)).unwrap(), r.from_i64(-4));
    }

    #[test]
    fn closed_forms() {
        let v = |m, n, w| virasoro_pairing(m, n, w);
        assert_eq!(v(2, -2, Cocycle::BottThurston), BigRational::from_integer(12.into()));
        assert_eq!(v(1, -1, Cocycle::BottThurston), BigRational::from_integer(0.into()));
        assert_eq!(v(3, -3, Cocycle::Determinant), BigRational::from_integer(4.into()));
        assert_eq!(v(3, -2, Cocycle::Determinant), BigRational::from_integer(0.into()));
    }

    #[test]
    fn group_to_lie() {
        let r = q();
        let (g1, g2) = (LaurentSeries::t_pow(&r, 3), LaurentSeries::t_pow(&r, -1));
        let p = Precision::default();
        let bott = |f: &AutElement, g: &AutElement| bott_thurston(f, g, SymbolStrategy::default(), p);
        let det = |f: &AutElement, g: &AutElement| det_cocycle(f, g, p);
        assert_eq!(lie_from_group(&bott, &g1, &g2).unwrap(), r.from_i64(12));
        assert_eq!(lie_from_group(&det, &g1, &g2).unwrap(), r.one());
        assert!(lie_from_group(&det, &g1, &g1).unwrap().is_zero());
    }

    #[test]
    fn dual_name_collision() {
        let r = Ring::parse("Q[eps1;2]").unwrap();
        let g = LaurentSeries::t(&r);
        let one = |_: &AutElement, _: &AutElement| Ok(r.one());
        assert!(matches!(lie_from_group(&one, &g, &g), Err(Error::Domain(_))));
    }
}
