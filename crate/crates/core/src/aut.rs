//! The group of continuous automorphisms of `A((t))`, each determined by
//! `φ̃ = φ(t) = sum a_i t^i` with `a_i` nilpotent for `i < 1` and `a_1` a unit.
//!
//! The product follows `(φ1 φ2)~ = φ̃2 ∘ φ̃1`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rings::{Ring, RingElement};
use crate::series::LaurentSeries;

#[derive(Clone, PartialEq, Eq)]
pub struct AutElement {
    tilde: LaurentSeries,
}

/// The four subgroups used by the decompositions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subgroup {
    /// `a1 t + a2 t^2 + ...`
    Plus1,
    /// `a0 + a1 t + ...` with `a0` nilpotent.
    Plus,
    /// `a_{-n} t^{-n} + ... + a0 + t`, all `a_i` nilpotent.
    Minus0,
    /// As [`Subgroup::Minus0`] with `a0 = 0`.
    Minus,
}

/// Which ordered product of subgroups to factor into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecompositionVariant {
    Plus1Minus0,
    PlusMinus,
    Minus0Plus1,
    MinusPlus,
}

impl DecompositionVariant {
    pub const ALL: [DecompositionVariant; 4] = [
        DecompositionVariant::Plus1Minus0,
        DecompositionVariant::PlusMinus,
        DecompositionVariant::Minus0Plus1,
        DecompositionVariant::MinusPlus,
    ];

    /// Subgroups of the left and right factor.
    pub fn factors(self) -> (Subgroup, Subgroup) {
        match self {
            DecompositionVariant::Plus1Minus0 => (Subgroup::Plus1, Subgroup::Minus0),
            DecompositionVariant::PlusMinus => (Subgroup::Plus, Subgroup::Minus),
            DecompositionVariant::Minus0Plus1 => (Subgroup::Minus0, Subgroup::Plus1),
            DecompositionVariant::MinusPlus => (Subgroup::Minus, Subgroup::Plus),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DecompositionVariant::Plus1Minus0 => "plus1-minus0",
            DecompositionVariant::PlusMinus => "plus-minus",
            DecompositionVariant::Minus0Plus1 => "minus0-plus1",
            DecompositionVariant::MinusPlus => "minus-plus",
        }
    }
}

impl fmt::Display for DecompositionVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecompositionVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DecompositionVariant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Parse { pos: 0, msg: format!("unknown decomposition variant `{s}`") })
    }
}

impl AutElement {
    /// Validates the automorphism shape of `tilde`.
    pub fn new(tilde: LaurentSeries) -> Result<Self> {
        for (i, c) in tilde.terms() {
            if i >= 1 {
                break;
            }
            if !c.is_nilpotent() {
                return Err(Error::Shape { index: i, reason: format!("{c} is not nilpotent") });
            }
        }
        if !tilde.knows(1) {
            return Err(Error::Shape { index: 1, reason: "is not known".into() });
        }
        let a1 = tilde.coeff(1);
        if !a1.is_unit() {
            return Err(Error::Shape { index: 1, reason: format!("{a1} is not a unit") });
        }
        Ok(AutElement { tilde })
    }

    pub(crate) fn new_unchecked(tilde: LaurentSeries) -> Self {
        debug_assert!(AutElement::new(tilde.clone()).is_ok());
        AutElement { tilde }
    }

    pub fn identity(ring: &Ring) -> Self {
        AutElement { tilde: LaurentSeries::t(ring) }
    }

    pub fn ring(&self) -> &Ring {
        self.tilde.ring()
    }

    pub fn tilde(&self) -> &LaurentSeries {
        &self.tilde
    }

    /// True when `φ̃` agrees with `t` wherever it is known.
    pub fn is_identity(&self) -> bool {
        self.tilde.agrees_with(&LaurentSeries::t(self.ring()))
    }

    /// `self * other`, with `(self other)~ = other~ ∘ self~`.
    pub fn mul(&self, other: &AutElement, cap: i64) -> Result<AutElement> {
        finish(other.tilde.compose(&self.tilde, cap)?, cap)
    }

    /// The action `φ(s) = s ∘ φ̃`.
    pub fn apply(&self, s: &LaurentSeries, cap: i64) -> Result<LaurentSeries> {
        s.compose(&self.tilde, cap)
    }

    /// The 1-cocycle `τ(φ) = φ̃'`.
    pub fn tau(&self) -> LaurentSeries {
        self.tilde.derivative()
    }

    pub fn in_subgroup(&self, group: Subgroup) -> bool {
        let t = &self.tilde;
        match group {
            Subgroup::Plus1 => t.terms().all(|(i, _)| i >= 1),
            Subgroup::Plus => t.terms().all(|(i, _)| i >= 0),
            Subgroup::Minus0 | Subgroup::Minus => {
                t.is_exact()
                    && t.terms().all(|(i, _)| i <= 1)
                    && t.coeff(1).is_one()
                    && (group == Subgroup::Minus0 || t.coeff(0).is_zero())
            }
        }
    }

    /// `ψ` with `φψ = ψφ = 1`, from `φ = αβ` as `ψ̃ = α̃^-1 ∘ β̃^-1`.
    pub fn inverse(&self, cap: i64) -> Result<AutElement> {
        let work = self.work_cap(cap);
        let (alpha, minus) = plus1_minus0(&self.tilde, work)?;
        let h = alpha.reversion(work)?;
        let m_inv = invert_minus0(&minus, work)?;
        finish(h.compose(&m_inv, work)?, cap)
    }

    /// Factors `φ = α β` with `α, β` in the subgroups of `variant`.
    pub fn decompose(&self, variant: DecompositionVariant, cap: i64) -> Result<(AutElement, AutElement)> {
        let work = self.work_cap(cap);
        let ring = self.ring().clone();
        let t = LaurentSeries::t(&ring);
        let (alpha, beta) = match variant {
            DecompositionVariant::Plus1Minus0 => plus1_minus0(&self.tilde, work)?,
            DecompositionVariant::PlusMinus => {
                let (a, m) = plus1_minus0(&self.tilde, work)?;
                shift_constant(a, m, work)?
            }
            DecompositionVariant::Minus0Plus1 => minus0_plus1(&self.tilde, work)?,
            DecompositionVariant::MinusPlus => {
                // t + x0 + x_neg = (t + x0) ∘ (t + x_neg), so δ̃ picks up t + x0.
                let (g, d) = minus0_plus1(&self.tilde, work)?;
                let c0 = LaurentSeries::constant(g.coeff(0));
                (&g - &c0, d.compose(&(&t + &c0), work)?)
            }
        };
        let (alpha, beta) = (finish(alpha, cap)?, finish(beta, cap)?);
        let (ga, gb) = variant.factors();
        if !alpha.in_subgroup(ga) || !beta.in_subgroup(gb) {
            return Err(Error::Inconsistent(format!("{variant} factors {alpha} and {beta} fail their subgroup tests")));
        }
        Ok((alpha, beta))
    }

    /// Internal precision for the decompositions, covering the loss from
    /// composing with `t^-k` for `k` up to the principal depth. Exact inputs
    /// lose nothing.
    fn work_cap(&self, cap: i64) -> i64 {
        if self.tilde.is_exact() {
            cap
        } else {
            cap + 2 * self.tilde.principal_depth() + 4
        }
    }
}

fn finish(tilde: LaurentSeries, cap: i64) -> Result<AutElement> {
    let tilde = tilde.cap(cap);
    if !tilde.knows(1) {
        return Err(Error::Precision("the coefficient of t was lost; raise the working precision".into()));
    }
    Ok(AutElement::new_unchecked(tilde))
}

/// Indices `>= 1`, keeping the precision.
fn upper(s: &LaurentSeries) -> LaurentSeries {
    let u = s.slice(1, i64::MAX / 4);
    match s.precision() {
        Some(p) => u.truncate(p),
        None => u,
    }
}

fn lower_poly(ring: &Ring, coeffs: &[RingElement]) -> LaurentSeries {
    let terms: Vec<(i64, RingElement)> = coeffs.iter().enumerate().map(|(k, c)| (-(k as i64), c.clone())).collect();
    LaurentSeries::from_terms(ring, &terms, None)
}

/// `(α̃, t + x)` with `φ̃ = (t + x) ∘ α̃`, `α̃ = a1 t + ...` and `x` a
/// nilpotent polynomial in `t^-1`.
///
/// `x` is a fixed point of `x ↦ solve(pr_{>=1}((t + x)^-1 ∘ φ̃))`, where
/// `solve` reads off `x` from the part of `x∘α̃ = sum x_-k α̃^-k` at indices
/// `<= 0`, triangular in the `x_-k` with unit diagonal `a1^-k`. Only low
/// coefficients of `α̃` enter, so the iteration runs at a small cap and
/// `α̃ = (t + x)^-1 ∘ φ̃` is formed once at `work`.
fn plus1_minus0(phi: &LaurentSeries, work: i64) -> Result<(LaurentSeries, LaurentSeries)> {
    let ring = phi.ring().clone();
    let t = LaurentSeries::t(&ring);
    let depth = phi.principal_depth() as usize;
    let low = 3 * depth as i64 + 6;
    let target = phi.slice(i64::MIN / 4, 1);
    let mut x = vec![ring.zero(); depth + 1];
    for _ in 0..ring.nil_index() + 3 {
        let inv = invert_minus0(&(&t + &lower_poly(&ring, &x)), low)?;
        let alpha = upper(&inv.compose(phi, low)?);
        let mut pows = vec![LaurentSeries::one(&ring)];
        if depth > 0 {
            let a_inv = alpha.invert_unit(low)?;
            for _ in 0..depth {
                let next = pows.last().unwrap().mul_capped(&a_inv, Some(low));
                pows.push(next);
            }
        }
        let mut x_new = vec![ring.zero(); depth + 1];
        for k in (0..=depth).rev() {
            let mut rhs = target.coeff(-(k as i64));
            for i in k + 1..=depth {
                rhs = &rhs - &(&x_new[i] * &pows[i].coeff_checked(-(k as i64))?);
            }
            x_new[k] = if k == 0 { rhs } else { &rhs * &pows[k].coeff_checked(-(k as i64))?.invert()? };
        }
        if x_new == x {
            let minus = &t + &lower_poly(&ring, &x);
            let alpha = if phi.is_exact() {
                invert_minus0(&minus, work)?.compose(phi, work)?
            } else {
                plus_factor(phi, &x, work)?
            };
            return Ok((alpha, minus));
        }
        x = x_new;
    }
    Err(Error::Inconsistent(format!("plus1-minus0 split of {phi} did not stabilize")))
}

/// `α̃ = pr_{>=1}(φ̃ - x∘α̃)` by iteration from `pr_{>=1} φ̃`. The error after
/// `n` steps lies in the `n`-th power of the nilradical, so `nil_index` steps
/// are exact. Used for inexact `φ̃`, where it loses less precision than
/// composing with `(t + x)^-1`, whose principal part is deeper than `x`.
fn plus_factor(phi: &LaurentSeries, x: &[RingElement], work: i64) -> Result<LaurentSeries> {
    let top = upper(phi);
    let mut alpha = top.clone();
    for _ in 0..phi.ring().nil_index() {
        let inv = alpha.invert_unit(work)?;
        let mut pow = LaurentSeries::one(phi.ring());
        let mut comp = LaurentSeries::zero(phi.ring());
        for xk in &x[1..] {
            pow = pow.mul_capped(&inv, Some(work));
            comp = &comp + &upper(&pow).scale(xk);
        }
        alpha = &top - &comp;
    }
    Ok(alpha)
}

/// `(t + x, δ̃)` with `φ̃ = δ̃ ∘ (t + x)`, `δ̃ = a1 t + ...` and `x` a
/// nilpotent polynomial in `t^-1`.
///
/// `δ̃(t + x) = sum_j (D_j δ̃) x^j` with Hasse derivatives `D_j`. Its part at
/// indices `<= 0` is triangular in `x` through the unit `δ̃'(0)` once the
/// terms with `j >= 2` are moved to the right. As above, `x` is iterated
/// with `δ̃ = pr_{>=1}(φ̃ ∘ (t + x)^-1)` at a small cap.
fn minus0_plus1(phi: &LaurentSeries, work: i64) -> Result<(LaurentSeries, LaurentSeries)> {
    let ring = phi.ring().clone();
    let t = LaurentSeries::t(&ring);
    let low = 3 * phi.principal_depth() + 6;
    let mut x = LaurentSeries::zero(&ring);
    for _ in 0..ring.nil_index() + 3 {
        let delta = upper(&phi.compose(&invert_minus0(&(&t + &x), low)?, low)?);
        let mut higher = LaurentSeries::zero(&ring);
        let mut xj = &x * &x;
        let mut j = 2;
        while !xj.is_zero() {
            higher = &higher + &delta.hasse_derivative(j).mul_capped(&xj, Some(1));
            xj = &xj * &x;
            j += 1;
        }
        let rhs = (phi - &higher).cap(1);
        if !rhs.knows(0) {
            return Err(Error::Precision("decomposition lost the principal part".into()));
        }
        let rhs = rhs.slice(i64::MIN / 4, 1);
        let dprime = delta.derivative();
        let lead_inv = dprime.coeff_checked(0)?.invert()?;
        let d = rhs.principal_depth() as usize;
        let mut xs = vec![ring.zero(); d + 1];
        for k in (0..=d).rev() {
            let mut r = rhs.coeff(-(k as i64));
            for m in 1..=d - k {
                r = &r - &(&dprime.coeff_checked(m as i64)? * &xs[k + m]);
            }
            xs[k] = &r * &lead_inv;
        }
        let x_new = lower_poly(&ring, &xs);
        if x_new == x {
            let minus = &t + &x;
            let delta = phi.compose(&invert_minus0(&minus, work)?, work)?;
            return Ok((minus, delta));
        }
        x = x_new;
    }
    Err(Error::Inconsistent(format!("minus0-plus1 split of {phi} did not stabilize")))
}

/// Moves the nilpotent constant `c0` of `m̃` into the power-series factor:
/// `(α̃ + c0, m̃ ∘ (t - c0))`.
fn shift_constant(alpha: LaurentSeries, minus: LaurentSeries, cap: i64) -> Result<(LaurentSeries, LaurentSeries)> {
    let ring = minus.ring().clone();
    let c0 = minus.coeff(0);
    if c0.is_zero() {
        return Ok((alpha, minus));
    }
    let shift = &LaurentSeries::t(&ring) - &LaurentSeries::constant(c0.clone());
    let m = minus.compose(&shift, cap)?;
    Ok((&alpha + &LaurentSeries::constant(c0), m))
}

/// Compositional inverse of `m̃ = t + x` with `x` a nilpotent Laurent
/// polynomial at indices `<= 0`: `M̃ = t + y`, `y = -x ∘ (t + y)`.
fn invert_minus0(minus: &LaurentSeries, cap: i64) -> Result<LaurentSeries> {
    let ring = minus.ring().clone();
    let t = LaurentSeries::t(&ring);
    let x = minus - &t;
    let mut y = LaurentSeries::zero(&ring);
    for _ in 0..=ring.nil_index() + 1 {
        let next = -&x.compose(&(&t + &y), cap.max(2))?;
        if next == y {
            return Ok(&t + &y);
        }
        y = next;
    }
    Err(Error::Inconsistent(format!("inverse of {minus} did not stabilize")))
}

impl fmt::Display for AutElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tilde)
    }
}

impl fmt::Debug for AutElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AutElement({})", self.tilde)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::RingElement;

    fn qe() -> (Ring, RingElement) {
        let r = Ring::parse("Q[e;2]").unwrap();
        let e = r.generator("e").unwrap();
        (r, e)
    }

    fn aut(s: LaurentSeries) -> AutElement {
        AutElement::new(s).unwrap()
    }

    #[test]
    fn validation() {
        let (r, e) = qe();
        let t = LaurentSeries::t(&r);
        assert!(AutElement::new(&t + &LaurentSeries::monomial(e, -1)).is_ok());
        let q = Ring::rationals();
        let bad = &LaurentSeries::t(&q) + &LaurentSeries::t_pow(&q, -1);
        assert!(matches!(AutElement::new(bad), Err(Error::Shape { index: -1, .. })));
        assert!(matches!(AutElement::new(LaurentSeries::t_pow(&q, 2)), Err(Error::Shape { index: 1, .. })));
    }

    #[test]
    fn product_order() {
        let q = Ring::rationals();
        let a = aut(LaurentSeries::monomial(q.from_i64(2), 1));
        let b = aut(&LaurentSeries::t(&q) + &LaurentSeries::t_pow(&q, 2));
        let ab = a.mul(&b, 10).unwrap();
        let want = LaurentSeries::from_terms(&q, &[(1, q.from_i64(2)), (2, q.from_i64(4))], None);
        assert_eq!(ab.tilde(), &want);
        let id = AutElement::identity(&q);
        assert_eq!(id.mul(&b, 10).unwrap(), b);
    }

    #[test]
    fn inverses() {
        let (r, e) = qe();
        let t = LaurentSeries::t(&r);
        let f = aut(&t + &LaurentSeries::constant(e.clone()));
        let g = f.inverse(10).unwrap();
        assert_eq!(g.tilde(), &(&t - &LaurentSeries::constant(e.clone())));

        let q = Ring::rationals();
        let f = aut(LaurentSeries::monomial(q.from_i64(2), 1));
        let half = q.from_rational(&num_rational::BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(f.inverse(10).unwrap().tilde(), &LaurentSeries::monomial(half, 1));

        let f = aut(&LaurentSeries::t(&q) + &LaurentSeries::t_pow(&q, 2));
        let g = f.inverse(5).unwrap();
        let want = LaurentSeries::from_terms(
            &q,
            &[(1, q.from_i64(1)), (2, q.from_i64(-1)), (3, q.from_i64(2)), (4, q.from_i64(-5))],
            Some(5),
        );
        assert_eq!(g.tilde(), &want);
    }

    #[test]
    fn inverse_with_principal_part() {
        let (r, e) = qe();
        let t = LaurentSeries::t(&r);
        let f = aut(&(&t + &LaurentSeries::monomial(e.clone(), -1)) + &LaurentSeries::t_pow(&r, 2));
        let g = f.inverse(16).unwrap();
        assert!(f.mul(&g, 16).unwrap().is_identity());
        assert!(g.mul(&f, 16).unwrap().is_identity());
    }

    #[test]
    fn decomposition_examples() {
        let (r, e) = qe();
        let t = LaurentSeries::t(&r);
        let f = aut(&t + &LaurentSeries::constant(e.clone()));
        let (a, b) = f.decompose(DecompositionVariant::PlusMinus, 10).unwrap();
        assert_eq!(a, f);
        assert!(b.is_identity());
        let (a, b) = f.decompose(DecompositionVariant::Plus1Minus0, 10).unwrap();
        assert!(a.is_identity());
        assert_eq!(b, f);
        let id = AutElement::identity(&r);
        for v in DecompositionVariant::ALL {
            let (a, b) = id.decompose(v, 10).unwrap();
            assert!(a.is_identity() && b.is_identity(), "{v}");
        }
    }

    #[test]
    fn decompositions_recompose() {
        let (r, e) = qe();
        let t = LaurentSeries::t(&r);
        let f = aut(&(&(&t + &LaurentSeries::monomial(e.clone(), -2)) + &LaurentSeries::constant(e.scale_i64(3)))
            + &LaurentSeries::t_pow(&r, 3));
        for v in DecompositionVariant::ALL {
            let (a, b) = f.decompose(v, 16).unwrap();
            let back = a.mul(&b, 16).unwrap();
            assert!(back.tilde().agrees_with(f.tilde()), "{v}: {back}");
        }
    }

    #[test]
    fn tau_examples() {
        let (r, e) = qe();
        let f = aut(&LaurentSeries::t(&r) + &LaurentSeries::monomial(e.clone(), -1));
        let want = &LaurentSeries::one(&r) - &LaurentSeries::monomial(e, -2);
        assert_eq!(f.tau(), want);
        assert!(f.tau().is_unit());
        assert_eq!(AutElement::identity(&r).tau(), LaurentSeries::one(&r));
    }
}
