//! Group 2-cocycles on the automorphism group: the formal Bott-Thurston
//! cocycle `B̂`, the determinantal cocycle `D`, the cochain differentials,
//! the `D^12` versus `B̂` probe and Čech assembly.

mod cech;
mod matrix;
mod operator;
mod probe;

use std::fmt;
use std::str::FromStr;

pub use cech::{cech_assemble, cech_defects, CechCover, CechDefect, CechValues};
pub use matrix::Matrix;
pub use operator::{block, Block, TruncatedOperator};
pub use probe::{probe_conjecture, ProbeConfig};

use crate::aut::AutElement;
use crate::error::{Error, Result};
use crate::precision::Precision;
use crate::rings::RingElement;
use crate::symbol::{cc, SymbolStrategy};
use operator::{band, PowerTable};

/// A 2-cochain `G x G -> A*`.
pub type Cochain2<'a> = dyn Fn(&AutElement, &AutElement) -> Result<RingElement> + Sync + 'a;
/// A 1-cochain `G -> A*`.
pub type Cochain1<'a> = dyn Fn(&AutElement) -> Result<RingElement> + Sync + 'a;

/// `B̂(φ1, φ2) = CC(φ̃1', φ̃2' ∘ φ̃1)`.
pub fn bott_thurston(f: &AutElement, g: &AutElement, strategy: SymbolStrategy, prec: Precision) -> Result<RingElement> {
    let a = f.tau();
    let tg = g.tau();
    prec.stable(|n| cc(&a, &tg.compose(f.tilde(), n)?, strategy))
}

/// `D(f, g) = det(d_f d_g d_fg^-1)` with the window chosen from the
/// principal parts of `f`, `g` and `fg`. Stabilization failures enlarge the
/// window twice before giving up; with `prec.stability` the value is also
/// recomputed at twice the window and compared.
pub fn det_cocycle(f: &AutElement, g: &AutElement, prec: Precision) -> Result<RingElement> {
    let shape = DetShape::new(f, g)?;
    if shape.trivial() {
        return Ok(f.ring().one());
    }
    let mut window = shape.min_window() + prec.guard;
    let mut last = None;
    for _ in 0..3 {
        match det_with_shape(f, g, &shape, window) {
            Ok(v) => {
                if prec.stability {
                    let w = det_with_shape(f, g, &shape, 2 * window)?;
                    if w != v {
                        return Err(Error::Inconsistent(format!(
                            "D at window {window} is {v}, at window {} it is {w}",
                            2 * window
                        )));
                    }
                }
                return Ok(v);
            }
            Err(e @ Error::Window(_)) => {
                last = Some(e);
                window *= 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap())
}

/// [`det_cocycle`] at an explicit window `M`, without retries.
pub fn det_cocycle_at(f: &AutElement, g: &AutElement, window: usize) -> Result<RingElement> {
    let shape = DetShape::new(f, g)?;
    if shape.trivial() {
        return Ok(f.ring().one());
    }
    det_with_shape(f, g, &shape, window)
}

/// The smallest window [`det_cocycle`] starts from, or `None` when
/// `D(f, g) = 1` without any matrix.
pub fn det_min_window(f: &AutElement, g: &AutElement) -> Result<Option<usize>> {
    let shape = DetShape::new(f, g)?;
    Ok((!shape.trivial()).then(|| shape.min_window()))
}

/// Bands and the stabilization estimate for a pair.
///
/// `d_h` moves `t^k` down by at most `band(h)` and `b_h` vanishes on
/// `t^k` for `k >= band(h)`. Writing `d_fg` as a triangular part plus a part
/// with nilpotent entries shows that `d_fg^-1 v mod t^K` only depends on
/// `v mod t^(K + (e-1) band(fg))`, so `s = 1 - c_f b_g d_fg^-1` fixes `t^k`
/// for `k >= n0 = band(g) + (e-1) band(fg)`.
struct DetShape {
    band_f: usize,
    band_g: usize,
    n0: usize,
}

impl DetShape {
    fn new(f: &AutElement, g: &AutElement) -> Result<Self> {
        let e = f.ring().nil_index() as usize;
        let low_fg = g.tilde().compose(f.tilde(), 1)?;
        if !low_fg.knows(0) {
            return Err(Error::Precision("the principal part of fg is not known".into()));
        }
        let x = |s: &crate::series::LaurentSeries| s.slice(i64::MIN / 4, 1);
        let band_f = band(&x(f.tilde())) as usize;
        let band_g = band(&x(g.tilde())) as usize;
        let band_fg = band(&x(&low_fg)) as usize;
        Ok(DetShape { band_f, band_g, n0: band_g + (e - 1) * band_fg })
    }

    fn trivial(&self) -> bool {
        self.band_g == 0
    }

    /// Rows of `d_f d_g` at or above `M - band(f)` are inexact; the solve
    /// only reads rows below `n0`.
    fn min_window(&self) -> usize {
        self.n0 + self.band_f + 2
    }
}

fn det_with_shape(f: &AutElement, g: &AutElement, shape: &DetShape, window: usize) -> Result<RingElement> {
    let ring = f.ring().clone();
    let m = window;
    let guard = shape.band_f;
    if m < shape.n0 + guard + 1 {
        return Err(Error::Window(format!("window {m} leaves no room to certify stabilization from row {}", shape.n0)));
    }
    let mut tg = PowerTable::new(g, m as i64, 0)?;
    let mut dg = Matrix::zeros(&ring, m, m);
    let mut neg_cols = Vec::with_capacity(shape.band_g);
    for k in 0..m {
        let p = tg.power(g, k as i64)?;
        for (i, c) in p.terms() {
            if i >= 0 && (i as usize) < m {
                dg.set(i as usize, k, c.clone());
            }
        }
        if k < shape.band_g {
            neg_cols.push(p.negative_part());
        }
    }
    let r = neg_cols.iter().map(|s| s.principal_depth()).max().unwrap_or(0) as usize;
    if r == 0 {
        return Ok(ring.one());
    }
    let mut bg = Matrix::zeros(&ring, r, m);
    for (k, s) in neg_cols.iter().enumerate() {
        for (i, c) in s.terms() {
            bg.set((-i - 1) as usize, k, c.clone());
        }
    }

    let mut tf = PowerTable::new(f, m as i64, r as i64)?;
    let mut df = Matrix::zeros(&ring, m, m);
    for k in 0..m {
        for (i, c) in tf.power(f, k as i64)?.terms() {
            if i >= 0 && (i as usize) < m {
                df.set(i as usize, k, c.clone());
            }
        }
    }
    let mut cf = Matrix::zeros(&ring, m, r);
    for j in 0..r {
        for (i, c) in tf.power(f, -(j as i64) - 1)?.terms() {
            if i >= 0 && (i as usize) < m {
                cf.set(i as usize, j, c.clone());
            }
        }
    }

    // d_fg = c_f b_g + d_f d_g, and s = d_f d_g d_fg^-1 = 1 - c_f (b_g d_fg^-1)
    let dfg = cf.mul(&bg).add(&df.mul(&dg));
    let y = dfg.solve_left(&bg)?;
    let defect = cf.mul(&y);
    let certified = m - guard;
    let mut n = 0;
    for k in 0..certified {
        if (0..certified).any(|i| !defect.get(i, k).is_zero()) {
            n = k + 1;
        }
    }
    if n > shape.n0 {
        return Err(Error::Window(format!(
            "s(t^{}) != t^{} although stabilization was expected from t^{}",
            n - 1,
            n - 1,
            shape.n0
        )));
    }
    let s = Matrix::identity(&ring, n).sub(&defect.leading(n, n));
    Ok(s.det())
}

/// `δc(g1, g2, g3) = c(g2, g3) c(g1 g2, g3)^-1 c(g1, g2 g3) c(g1, g2)^-1`,
/// equal to 1 exactly when the cocycle identity holds at the triple.
/// Products are formed below `t^cap`.
pub fn cocycle_defect(
    c: &Cochain2,
    g1: &AutElement,
    g2: &AutElement,
    g3: &AutElement,
    cap: i64,
) -> Result<RingElement> {
    let g12 = g1.mul(g2, cap)?;
    let g23 = g2.mul(g3, cap)?;
    let num = &c(g2, g3)? * &c(g1, &g23)?;
    let den = &c(&g12, g3)? * &c(g1, g2)?;
    Ok(&num * &den.invert()?)
}

/// `δλ(g, h) = λ(g) λ(h) λ(gh)^-1`.
pub fn coboundary(lambda: &Cochain1, g: &AutElement, h: &AutElement, cap: i64) -> Result<RingElement> {
    let gh = g.mul(h, cap)?;
    Ok(&(&lambda(g)? * &lambda(h)?) * &lambda(&gh)?.invert()?)
}

/// The two group cocycles, selectable by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cocycle {
    BottThurston,
    Determinant,
}

impl Cocycle {
    pub fn name(self) -> &'static str {
        match self {
            Cocycle::BottThurston => "bott",
            Cocycle::Determinant => "det",
        }
    }

    pub fn eval(
        self,
        f: &AutElement,
        g: &AutElement,
        strategy: SymbolStrategy,
        prec: Precision,
    ) -> Result<RingElement> {
        match self {
            Cocycle::BottThurston => bott_thurston(f, g, strategy, prec),
            Cocycle::Determinant => det_cocycle(f, g, prec),
        }
    }
}

impl fmt::Display for Cocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Cocycle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bott" => Ok(Cocycle::BottThurston),
            "det" => Ok(Cocycle::Determinant),
            _ => Err(Error::Parse { pos: 0, msg: format!("unknown cocycle `{s}`, expected bott or det") }),
        }
    }
}
