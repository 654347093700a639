//! Truncated block matrices of the action `s -> s∘h̃` of an automorphism on
//! `A((t)) = t^-1 A[t^-1] ⊕ A[[t]]`.

use std::fmt;
use std::str::FromStr;

use super::matrix::Matrix;
use crate::aut::AutElement;
use crate::error::{Error, Result};
use crate::rings::{Ring, RingElement};
use crate::series::{binomial, LaurentSeries};

/// The four blocks of `h = [[a, b], [c, d]]`, written against the splitting
/// into `t^-1 A[t^-1]` and `A[[t]]`:
/// `a: t^-1 A[t^-1] -> t^-1 A[t^-1]`, `b: A[[t]] -> t^-1 A[t^-1]`,
/// `c: t^-1 A[t^-1] -> A[[t]]`, `d: A[[t]] -> A[[t]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Block {
    A,
    B,
    C,
    D,
}

impl FromStr for Block {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(Block::A),
            "b" => Ok(Block::B),
            "c" => Ok(Block::C),
            "d" => Ok(Block::D),
            _ => Err(Error::Parse { pos: 0, msg: format!("unknown block `{s}`") }),
        }
    }
}

/// A block restricted to the first `dimension` basis vectors on each side.
///
/// Basis vectors of `A[[t]]` are `t^0, t^1, ...`; those of `t^-1 A[t^-1]` are
/// `t^-1, t^-2, ...`, so index `j` stands for `t^-(j+1)`. Every stored entry
/// is exact. The last `guard` rows can also receive contributions from basis
/// vectors outside the window, so products of truncated operators are exact
/// only above them.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedOperator {
    ring: Ring,
    dimension: usize,
    columns: Vec<Vec<(usize, RingElement)>>,
    guard: usize,
}

impl TruncatedOperator {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn guard(&self) -> usize {
        self.guard
    }

    /// Nonzero entries of column `k` as `(row, value)`.
    pub fn column(&self, k: usize) -> &[(usize, RingElement)] {
        &self.columns[k]
    }

    pub fn entry(&self, row: usize, col: usize) -> RingElement {
        self.columns[col].iter().find(|(r, _)| *r == row).map_or_else(|| self.ring.zero(), |(_, x)| x.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(&self.ring, self.dimension, self.dimension);
        for (c, col) in self.columns.iter().enumerate() {
            for (r, x) in col {
                m.set(*r, c, x.clone());
            }
        }
        m
    }
}

impl fmt::Debug for TruncatedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TruncatedOperator")
            .field("dimension", &self.dimension)
            .field("guard", &self.guard)
            .field("matrix", &self.to_matrix())
            .finish()
    }
}

/// How far `d_h` can move `t^k` down: `max_j (j - lowest(x^j))` over the
/// nonzero powers of the nilpotent low part `x` of `h̃`.
pub(crate) fn band(x: &LaurentSeries) -> i64 {
    let mut best = 0;
    let mut xj = x.clone();
    let mut j = 1;
    while !xj.is_zero() {
        best = best.max(j - xj.lowest());
        xj = &xj * x;
        j += 1;
    }
    best
}

/// Powers `h̃^k` known below a fixed cap, expanded through the split
/// `h̃ = x + y` into the nilpotent part `x` and `y = a1 t + ...`.
/// Positive powers use `sum C(k,j) x^j y^(k-j)` and negative ones
/// `y^k sum C(k,m) (x/y)^m`; both sums end once the powers of `x` vanish.
pub(crate) struct PowerTable {
    cap: i64,
    x: LaurentSeries,
    x_pows: Vec<LaurentSeries>,
    y: LaurentSeries,
    y_pows: Vec<LaurentSeries>,
    y_cap: i64,
    y_inv: LaurentSeries,
    y_neg: Vec<LaurentSeries>,
    z_pows: Vec<LaurentSeries>,
    neg_cap: i64,
}

impl PowerTable {
    /// Table for powers known below `cap`; negative powers down to
    /// `-max_negative`.
    pub(crate) fn new(h: &AutElement, cap: i64, max_negative: i64) -> Result<Self> {
        let tilde = h.tilde();
        let ring = tilde.ring().clone();
        let (x, y) = tilde.split_substitution()?;
        let mut x_pows = vec![LaurentSeries::one(&ring)];
        loop {
            let next = x_pows.last().unwrap() * &x;
            if next.is_zero() {
                break;
            }
            x_pows.push(next);
        }
        let slack = x_pows.iter().map(|p| -p.lowest()).max().unwrap_or(0).max(0);
        let depth = x.principal_depth();
        let neg_cap = cap + max_negative + (x_pows.len() as i64) * (depth + 1) + 2;
        let y_inv = if max_negative > 0 { y.invert_unit(neg_cap)? } else { LaurentSeries::zero(&ring) };
        let z = x.mul_capped(&y_inv, Some(neg_cap));
        let mut z_pows = vec![LaurentSeries::one(&ring)];
        if max_negative > 0 {
            for _ in 1..x_pows.len() {
                let next = z_pows.last().unwrap().mul_capped(&z, Some(neg_cap));
                z_pows.push(next);
            }
        }
        Ok(PowerTable {
            cap,
            y_pows: vec![LaurentSeries::one(&ring)],
            y_cap: cap + slack,
            x,
            y,
            x_pows,
            y_inv,
            y_neg: vec![LaurentSeries::one(&ring)],
            z_pows,
            neg_cap,
        })
    }

    pub(crate) fn x(&self) -> &LaurentSeries {
        &self.x
    }

    fn y_pow(&mut self, m: usize) -> &LaurentSeries {
        while self.y_pows.len() <= m {
            let next = self.y_pows.last().unwrap().mul_capped(&self.y, Some(self.y_cap));
            self.y_pows.push(next);
        }
        &self.y_pows[m]
    }

    /// `h̃^k` known below the cap.
    pub(crate) fn power(&mut self, h: &AutElement, k: i64) -> Result<LaurentSeries> {
        let ring = h.ring().clone();
        let mut acc = LaurentSeries::zero(&ring);
        if k >= 0 {
            for j in 0..self.x_pows.len().min(k as usize + 1) {
                let c = ring.from_bigint(&binomial(k, j as u32));
                let yk = self.y_pow(k as usize - j).clone();
                acc = &acc + &self.x_pows[j].mul_capped(&yk, Some(self.cap)).scale(&c);
            }
        } else {
            let j = (-k) as usize;
            while self.y_neg.len() <= j {
                let next = self.y_neg.last().unwrap().mul_capped(&self.y_inv, Some(self.neg_cap));
                self.y_neg.push(next);
            }
            for (m, zm) in self.z_pows.iter().enumerate() {
                let c = ring.from_bigint(&binomial(k, m as u32));
                acc = &acc + &self.y_neg[j].mul_capped(zm, Some(self.cap)).scale(&c);
            }
        }
        let acc = acc.cap(self.cap);
        match acc.precision() {
            Some(p) if p < self.cap => Err(Error::Precision(format!(
                "h̃^{k} is known only below t^{p}, t^{} is needed; raise the working precision",
                self.cap
            ))),
            _ => Ok(acc),
        }
    }
}

fn column_of(s: &LaurentSeries, rows: impl Iterator<Item = (usize, i64)>) -> Vec<(usize, RingElement)> {
    rows.filter_map(|(r, i)| s.coeff_ref(i).map(|c| (r, c.clone()))).collect()
}

/// Block `which` of `h` on the first `window` basis vectors of each side.
pub fn block(h: &AutElement, which: Block, window: usize) -> Result<TruncatedOperator> {
    let m = window as i64;
    let negatives = matches!(which, Block::A | Block::C);
    let mut table = PowerTable::new(h, m, if negatives { m } else { 0 })?;
    let band = band(table.x()) as usize;
    let mut columns = Vec::with_capacity(window);
    for k in 0..m {
        let col = match which {
            Block::D => column_of(&table.power(h, k)?, (0..window).map(|r| (r, r as i64))),
            Block::B if (k as usize) < band => {
                column_of(&table.power(h, k)?, (0..window).map(|r| (r, -(r as i64) - 1)))
            }
            Block::B => Vec::new(),
            Block::C => column_of(&table.power(h, -k - 1)?, (0..window).map(|r| (r, r as i64))),
            Block::A => column_of(&table.power(h, -k - 1)?, (0..window).map(|r| (r, -(r as i64) - 1))),
        };
        columns.push(col);
    }
    let guard = match which {
        Block::D => band.min(window),
        Block::B => 0,
        Block::A | Block::C => window,
    };
    Ok(TruncatedOperator { ring: h.ring().clone(), dimension: window, columns, guard })
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
    fn identity_blocks() {
        let r = Ring::rationals();
        let id = AutElement::identity(&r);
        assert_eq!(block(&id, Block::D, 5).unwrap().to_matrix(), Matrix::identity(&r, 5));
        assert!(block(&id, Block::B, 5).unwrap().is_zero());
        assert!(block(&id, Block::C, 5).unwrap().is_zero());
    }

    #[test]
    fn principal_part_feeds_b() {
        let (r, e) = qe();
        let h = AutElement::new(&LaurentSeries::t(&r) + &LaurentSeries::monomial(e.clone(), -1)).unwrap();
        let b = block(&h, Block::B, 6).unwrap();
        assert_eq!(b.column(1), &[(0, e.clone())]);
        for k in [0, 2, 3, 4, 5] {
            assert!(b.column(k).is_empty());
        }
        assert!(block(&h, Block::C, 6).unwrap().is_zero());
        // d(t^k) = t^k + k e t^(k-2)
        let d = block(&h, Block::D, 6).unwrap();
        assert_eq!(d.entry(2, 4), e.scale_i64(4));
        assert_eq!(d.entry(4, 4), r.one());
        assert_eq!(d.guard(), 2);
    }

    #[test]
    fn power_series_c_block() {
        let r = Ring::rationals();
        let h = AutElement::new(&LaurentSeries::t(&r) + &LaurentSeries::t_pow(&r, 2)).unwrap();
        assert!(block(&h, Block::B, 5).unwrap().is_zero());
        let c = block(&h, Block::C, 5).unwrap();
        // t^-1 (1 + t)^-1 = t^-1 - 1 + t - t^2 + ...
        let col: Vec<RingElement> = (0..5).map(|i| c.entry(i, 0)).collect();
        let want: Vec<RingElement> = [-1, 1, -1, 1, -1].iter().map(|x| r.from_i64(*x)).collect();
        assert_eq!(col, want);
    }

    #[test]
    fn negative_powers_match_inverse() {
        let (r, e) = qe();
        let tilde = LaurentSeries::from_terms(
            &r,
            &[(-2, e.clone()), (0, e.scale_i64(3)), (1, r.from_i64(2)), (2, r.one())],
            None,
        );
        let h = AutElement::new(tilde.clone()).unwrap();
        let mut table = PowerTable::new(&h, 10, 3).unwrap();
        for k in -3..=4i64 {
            let want = if k >= 0 {
                tilde.pow_capped(k as u64, Some(10))
            } else {
                tilde.invert_unit(30).unwrap().pow_capped((-k) as u64, Some(10))
            };
            assert!(table.power(&h, k).unwrap().agrees_with(&want), "k = {k}");
        }
    }

    #[test]
    fn band_of_principal_parts() {
        let (r, e) = qe();
        assert_eq!(band(&LaurentSeries::monomial(e.clone(), -2)), 3);
        assert_eq!(band(&LaurentSeries::constant(e)), 1);
        assert_eq!(band(&LaurentSeries::zero(&r)), 0);
    }
}
