//! Laurent series over a [`Ring`], finite below and known up to a tracked
//! absolute precision `N`: every coefficient at an index `< N` is exact, and
//! nothing is known at indices `>= N`. Exact series have no such bound.

mod compose;
mod logexp;
mod sampler;
mod units;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use logexp::exp_nilpotent;
pub use sampler::SeriesSampler;
pub use units::UnitFactorization;

use crate::error::{Error, Result};
use crate::rings::{Accumulator, Ring, RingElement};

/// Default absolute working precision.
pub const DEFAULT_PRECISION: i64 = 32;

#[derive(Clone)]
pub struct LaurentSeries {
    ring: Ring,
    lowest: i64,
    /// `coeffs[k]` is the coefficient at `lowest + k`; first and last nonzero.
    coeffs: Vec<RingElement>,
    precision: Option<i64>,
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl LaurentSeries {
    /// Builds `sum coeffs[k] t^(lowest+k)` known below `precision`, dropping
    /// coefficients at or above it and normalizing zeros.
    pub fn new(ring: &Ring, lowest: i64, coeffs: Vec<RingElement>, precision: Option<i64>) -> Self {
        let mut s = LaurentSeries { ring: ring.clone(), lowest, coeffs, precision };
        s.normalize();
        s
    }

    pub fn from_terms(ring: &Ring, terms: &[(i64, RingElement)], precision: Option<i64>) -> Self {
        if terms.is_empty() {
            return LaurentSeries::new(ring, 0, Vec::new(), precision);
        }
        let lo = terms.iter().map(|(i, _)| *i).min().unwrap();
        let hi = terms.iter().map(|(i, _)| *i).max().unwrap();
        let mut coeffs = vec![ring.zero(); (hi - lo + 1) as usize];
        for (i, c) in terms {
            let slot = &mut coeffs[(i - lo) as usize];
            *slot = &*slot + c;
        }
        LaurentSeries::new(ring, lo, coeffs, precision)
    }

    /// `c t^k`, exact.
    pub fn monomial(c: RingElement, k: i64) -> Self {
        let ring = c.ring().clone();
        LaurentSeries::new(&ring, k, vec![c], None)
    }

    pub fn constant(c: RingElement) -> Self {
        LaurentSeries::monomial(c, 0)
    }

    /// The series variable `t`.
    pub fn t(ring: &Ring) -> Self {
        LaurentSeries::monomial(ring.one(), 1)
    }

    pub fn t_pow(ring: &Ring, k: i64) -> Self {
        LaurentSeries::monomial(ring.one(), k)
    }

    pub fn zero(ring: &Ring) -> Self {
        LaurentSeries::new(ring, 0, Vec::new(), None)
    }

    pub fn one(ring: &Ring) -> Self {
        LaurentSeries::constant(ring.one())
    }

    fn normalize(&mut self) {
        if let Some(n) = self.precision {
            let keep = (n - self.lowest).clamp(0, self.coeffs.len() as i64) as usize;
            self.coeffs.truncate(keep);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.lowest = self.precision.unwrap_or(0);
        } else if lead > 0 {
            self.coeffs.drain(..lead);
            self.lowest += lead as i64;
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Index of the first nonzero coefficient; for zero, the precision (or 0).
    pub fn lowest(&self) -> i64 {
        self.lowest
    }

    /// One past the highest stored index.
    pub fn top(&self) -> i64 {
        self.lowest + self.coeffs.len() as i64
    }

    /// Absolute precision order, `None` for exact series.
    pub fn precision(&self) -> Option<i64> {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Zero and exact.
    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.is_empty() && self.precision.is_none()
    }

    /// True when the coefficient at `i` is known.
    pub fn knows(&self, i: i64) -> bool {
        self.precision.is_none_or(|n| i < n)
    }

    /// Coefficient at `i`; zero outside the stored range. Callers check
    /// [`knows`](Self::knows) when `i` may exceed the precision.
    pub fn coeff(&self, i: i64) -> RingElement {
        self.coeff_ref(i).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub(crate) fn coeff_ref(&self, i: i64) -> Option<&RingElement> {
        if i < self.lowest {
            return None;
        }
        self.coeffs.get((i - self.lowest) as usize)
    }

    /// Coefficient at `i`, or a precision error if it is not known.
    pub fn coeff_checked(&self, i: i64) -> Result<RingElement> {
        if !self.knows(i) {
            return Err(Error::Precision(format!(
                "coefficient of t^{i} requested from a series known below t^{}",
                self.precision.unwrap()
            )));
        }
        Ok(self.coeff(i))
    }

    /// Nonzero `(index, coefficient)` pairs in increasing index order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &RingElement)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(k, c)| (self.lowest + k as i64, c))
    }

    /// Depth of the principal part: `max(0, -lowest)` over nonzero terms.
    pub fn principal_depth(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            (-self.lowest).max(0)
        }
    }

    /// Restricts to indices `< n` and lowers the precision to at most `n`.
    pub fn truncate(&self, n: i64) -> Self {
        LaurentSeries::new(&self.ring, self.lowest, self.coeffs.clone(), min_prec(self.precision, Some(n)))
    }

    /// Like [`truncate`](Self::truncate) but leaves exact series with all
    /// terms below `n` exact.
    pub fn cap(&self, n: i64) -> Self {
        if self.is_exact() && self.top() <= n {
            self.clone()
        } else {
            self.truncate(n)
        }
    }

    /// The part at indices in `[from, to)`, as an exact series.
    pub fn slice(&self, from: i64, to: i64) -> Self {
        let lo = from.max(self.lowest);
        let hi = to.min(self.top());
        if hi <= lo {
            return LaurentSeries::zero(&self.ring);
        }
        let a = (lo - self.lowest) as usize;
        let b = (hi - self.lowest) as usize;
        LaurentSeries::new(&self.ring, lo, self.coeffs[a..b].to_vec(), None)
    }

    /// Terms at indices `< 0`, exact.
    pub fn negative_part(&self) -> Self {
        self.slice(i64::MIN / 4, 0)
    }

    /// Terms at indices `>= 0`, keeping the precision.
    pub fn nonnegative_part(&self) -> Self {
        let s = self.slice(0, i64::MAX / 4);
        LaurentSeries::new(&self.ring, s.lowest, s.coeffs, self.precision)
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        let mut s = self.clone();
        s.lowest += k;
        s.precision = s.precision.map(|n| n + k);
        if s.coeffs.is_empty() {
            s.lowest = s.precision.unwrap_or(0);
        }
        s
    }

    pub fn scale(&self, c: &RingElement) -> Self {
        LaurentSeries::new(&self.ring, self.lowest, self.coeffs.iter().map(|x| x * c).collect(), self.precision)
    }

    pub fn scale_i64(&self, n: i64) -> Self {
        self.scale(&self.ring.from_i64(n))
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(k, c)| c.scale_i64(self.lowest + k as i64)).collect();
        LaurentSeries::new(&self.ring, self.lowest - 1, coeffs, self.precision.map(|n| n - 1))
    }

    /// Hasse derivative `sum C(i,j) f_i t^(i-j)`, defined over any ring.
    pub fn hasse_derivative(&self, j: u32) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let i = self.lowest + k as i64;
                c * &self.ring.from_bigint(&binomial(i, j))
            })
            .collect();
        LaurentSeries::new(&self.ring, self.lowest - j as i64, coeffs, self.precision.map(|n| n - j as i64))
    }

    /// Product with result precision lowered to at most `cap`; only
    /// coefficients below `cap` are computed. Exact products whose terms all
    /// fall below `cap` stay exact.
    pub fn mul_capped(&self, other: &Self, cap: Option<i64>) -> Self {
        self.check_ring(other);
        if self.is_exact_zero() || other.is_exact_zero() {
            return LaurentSeries::zero(&self.ring);
        }
        let derived = min_prec(self.precision.map(|n| n + other.lowest), other.precision.map(|n| n + self.lowest));
        let lo = self.lowest + other.lowest;
        let full_top = self.top() + other.top() - 1;
        let prec_limit = min_prec(derived, cap);
        let hi = match prec_limit {
            Some(p) => p.min(full_top),
            None => full_top,
        };
        let precision = match (derived, cap) {
            (d, Some(c)) if full_top > c => Some(d.map_or(c, |d| d.min(c))),
            (d, _) => d,
        };
        if hi <= lo || self.coeffs.is_empty() || other.coeffs.is_empty() {
            return LaurentSeries::new(&self.ring, lo, Vec::new(), precision);
        }
        let len = (hi - lo) as usize;
        let mut out: Vec<Accumulator> = (0..len).map(|_| Accumulator::new(&self.ring)).collect();
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() || a >= len {
                continue;
            }
            let bmax = other.coeffs.len().min(len - a);
            for (b, y) in other.coeffs[..bmax].iter().enumerate() {
                if !y.is_zero() {
                    out[a + b].add_product(x, y);
                }
            }
        }
        let out = out.into_iter().map(Accumulator::finish).collect();
        LaurentSeries::new(&self.ring, lo, out, precision)
    }

    /// `self^k` for `k >= 0`, capped.
    pub fn pow_capped(&self, k: u64, cap: Option<i64>) -> Self {
        let drop = (-self.lowest).max(0);
        let mut acc = LaurentSeries::one(&self.ring);
        for m in 1..=k {
            let step_cap = cap.map(|c| c + (k - m) as i64 * drop);
            acc = acc.mul_capped(self, step_cap);
        }
        acc
    }

    /// Coefficient of `t^-1` in `f * g'`, i.e. `res(f dg)`.
    pub fn residue_pairing(&self, g: &Self) -> Result<RingElement> {
        let p = self.mul_capped(&g.derivative(), Some(0));
        p.coeff_checked(-1)
    }

    /// Coefficient of `t^-1`.
    pub fn residue(&self) -> Result<RingElement> {
        self.coeff_checked(-1)
    }

    /// True when both series agree at every index known to both.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let bound = min_prec(self.precision, other.precision);
        let lo = self.lowest.min(other.lowest);
        let hi = match bound {
            Some(b) => b,
            None => self.top().max(other.top()),
        };
        (lo..hi).all(|i| self.coeff(i) == other.coeff(i))
    }

    /// Exact equality of representation, including precision.
    pub fn identical(&self, other: &Self) -> bool {
        self == other
    }

    pub(crate) fn check_ring(&self, other: &Self) {
        assert!(self.ring == other.ring, "ring mismatch: {} vs {}", self.ring, other.ring);
    }

    /// Applies a ring map coefficientwise.
    pub fn map_coefficients(&self, target: &Ring, f: impl Fn(&RingElement) -> Result<RingElement>) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(LaurentSeries::new(target, self.lowest, coeffs, self.precision))
    }

    /// Coefficientwise [`Ring::coerce`] into `target`.
    pub fn coerce(&self, target: &Ring) -> Result<Self> {
        self.map_coefficients(target, |c| target.coerce(c))
    }

    /// True when every coefficient at an index `< 0` is nilpotent and the
    /// constant term is `1 + nilpotent`.
    pub fn is_sharp(&self) -> bool {
        self.knows(0)
            && (&self.coeff(0) - &self.ring.one()).is_nilpotent()
            && self.terms().take_while(|(i, _)| *i < 0).all(|(_, c)| c.is_nilpotent())
    }
}

pub(crate) fn binomial(i: i64, j: u32) -> num_bigint::BigInt {
    let mut num = num_bigint::BigInt::from(1);
    let mut den = num_bigint::BigInt::from(1);
    for k in 0..j as i64 {
        num *= i - k;
        den *= k + 1;
    }
    num / den
}

impl PartialEq for LaurentSeries {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring
            && self.lowest == other.lowest
            && self.precision == other.precision
            && self.coeffs == other.coeffs
    }
}

impl Eq for LaurentSeries {}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;

    fn add(self, other: &LaurentSeries) -> LaurentSeries {
        self.check_ring(other);
        let precision = min_prec(self.precision, other.precision);
        if self.coeffs.is_empty() {
            return LaurentSeries::new(&self.ring, other.lowest, other.coeffs.clone(), precision);
        }
        if other.coeffs.is_empty() {
            return LaurentSeries::new(&self.ring, self.lowest, self.coeffs.clone(), precision);
        }
        let lo = self.lowest.min(other.lowest);
        let hi = self.top().max(other.top());
        let hi = precision.map_or(hi, |p| hi.min(p));
        if hi <= lo {
            return LaurentSeries::new(&self.ring, lo, Vec::new(), precision);
        }
        let coeffs = (lo..hi)
            .map(|i| match (self.coeff_ref(i), other.coeff_ref(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => self.ring.zero(),
            })
            .collect();
        LaurentSeries::new(&self.ring, lo, coeffs, precision)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;

    fn neg(self) -> LaurentSeries {
        LaurentSeries {
            ring: self.ring.clone(),
            lowest: self.lowest,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            precision: self.precision,
        }
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;

    fn sub(self, other: &LaurentSeries) -> LaurentSeries {
        self + &(-other)
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;

    fn mul(self, other: &LaurentSeries) -> LaurentSeries {
        self.mul_capped(other, None)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentSeries {
            type Output = LaurentSeries;
            fn $m(self, other: LaurentSeries) -> LaurentSeries {
                (&self).$m(&other)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        -&self
    }
}

impl fmt::Display for LaurentSeries {
    /// Renders in the series literal grammar, with `O(t^N)` for inexact series.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.terms() {
            let text = c.to_string();
            let compound = c.is_compound();
            let (neg, body) =
                if !compound && text.starts_with('-') { (true, text[1..].to_string()) } else { (false, text) };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let coef = if compound { format!("({body})") } else { body };
            match i {
                0 => write!(f, "{coef}")?,
                _ => {
                    let tp = if i == 1 { "t".to_string() } else { format!("t^{i}") };
                    if coef == "1" {
                        write!(f, "{tp}")?
                    } else {
                        write!(f, "{coef}*{tp}")?
                    }
                }
            }
        }
        if let Some(n) = self.precision {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "O(t^{n})")?;
        } else if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qe() -> (Ring, RingElement) {
        let r = Ring::parse("Q[e;2]").unwrap();
        let e = r.generator("e").unwrap();
        (r, e)
    }

    #[test]
    fn canonical_zero() {
        let r = Ring::rationals();
        let z = LaurentSeries::new(&r, -3, vec![r.zero(), r.zero()], Some(5));
        assert_eq!(z.lowest(), 5);
        assert!(z.is_zero());
        let t = LaurentSeries::t(&r);
        assert_eq!((&t - &t), LaurentSeries::zero(&r));
    }

    #[test]
    fn product_precision_rule() {
        let r = Ring::rationals();
        let a = LaurentSeries::new(&r, -1, vec![r.one(), r.one()], Some(4));
        let b = LaurentSeries::new(&r, 2, vec![r.one()], Some(6));
        // min(N1 + L2, N2 + L1) = min(6, 5)
        assert_eq!((&a * &b).precision(), Some(5));
    }

    #[test]
    fn residue_examples() {
        let r = Ring::rationals();
        let t = LaurentSeries::t(&r);
        let tinv = LaurentSeries::t_pow(&r, -1);
        assert_eq!(tinv.residue_pairing(&t).unwrap(), r.one());
        assert_eq!(t.residue_pairing(&tinv).unwrap(), r.from_i64(-1));
        let g = &t + &LaurentSeries::t_pow(&r, -3);
        assert!(LaurentSeries::one(&r).residue_pairing(&g).unwrap().is_zero());
    }

    #[test]
    fn derivative_of_laurent_polynomial() {
        let (r, e) = qe();
        let f = &LaurentSeries::t(&r) + &LaurentSeries::monomial(e.clone(), -1);
        let d = f.derivative();
        assert_eq!(d.coeff(0), r.one());
        assert_eq!(d.coeff(-2), -&e);
    }

    #[test]
    fn hasse_derivative_matches_binomials() {
        let r = Ring::rationals();
        let f = LaurentSeries::t_pow(&r, -2);
        // C(-2, 2) = 3
        assert_eq!(f.hasse_derivative(2).coeff(-4), r.from_i64(3));
        assert_eq!(binomial(5, 2), 10.into());
        assert_eq!(binomial(-1, 3), (-1).into());
    }

    #[test]
    fn display_round_shape() {
        let (r, e) = qe();
        let f = &LaurentSeries::t(&r) + &LaurentSeries::monomial(e.clone(), -1);
        assert_eq!(f.to_string(), "e*t^-1 + t");
        let g = LaurentSeries::monomial(&r.one() + &e, 2).truncate(5);
        assert_eq!(g.to_string(), "(1 + e)*t^2 + O(t^5)");
    }
}
