//! `D(f, g)` recomputed from scratch: plain series powers, a triangular solve
//! plus a finite Neumann series for `d_fg^-1`, and a Laplace-expansion
//! determinant of the leading block of `s = d_f d_g d_fg^-1`.

use laurentcc_core::aut::AutElement;
use laurentcc_core::cocycles::det_cocycle;
use laurentcc_core::parse::parse_series;
use laurentcc_core::precision::Precision;
use laurentcc_core::rings::{Ring, RingElement};
use laurentcc_core::series::{LaurentSeries, SeriesSampler};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Mat = Vec<Vec<RingElement>>;

fn zeros(r: &Ring, n: usize) -> Mat {
    vec![vec![r.zero(); n]; n]
}

fn mat_mul(r: &Ring, a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = zeros(r, n);
    for i in 0..n {
        for l in 0..n {
            if a[i][l].is_zero() {
                continue;
            }
            for k in 0..n {
                out[i][k] = &out[i][k] + &(&a[i][l] * &b[l][k]);
            }
        }
    }
    out
}

fn laplace(r: &Ring, m: &Mat) -> RingElement {
    if m.is_empty() {
        return r.one();
    }
    let mut acc = r.zero();
    for (c, x) in m[0].iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let minor: Mat = m[1..].iter().map(|row| [&row[..c], &row[c + 1..]].concat()).collect();
        let term = x * &laplace(r, &minor);
        acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// `h^k` for `k` in `-neg..pos`, each known below `cap`.
struct Powers {
    pos: Vec<LaurentSeries>,
    neg: Vec<LaurentSeries>,
}

impl Powers {
    fn new(h: &LaurentSeries, pos: usize, neg: usize, cap: i64) -> Powers {
        let r = h.ring();
        let mut p = vec![LaurentSeries::one(r)];
        for _ in 1..pos {
            p.push(p.last().unwrap().mul_capped(h, Some(cap)));
        }
        let inv = h.invert_unit(cap).unwrap();
        let mut n = vec![LaurentSeries::one(r)];
        for _ in 0..neg {
            n.push(n.last().unwrap().mul_capped(&inv, Some(cap)));
        }
        Powers { pos: p, neg: n }
    }

    fn get(&self, k: i64) -> &LaurentSeries {
        if k >= 0 {
            &self.pos[k as usize]
        } else {
            &self.neg[(-k) as usize]
        }
    }
}

/// `d_h` on the window: column `k` holds the coefficients of `t^i` in `h^k`.
fn d_block(powers: &Powers, m: usize) -> Mat {
    let r = powers.pos[0].ring().clone();
    let mut d = zeros(&r, m);
    for (k, p) in powers.pos.iter().take(m).enumerate() {
        for (i, row) in d.iter_mut().enumerate() {
            row[k] = p.coeff_checked(i as i64).unwrap();
        }
    }
    d
}

/// Inverse of a window of `d_h`: the part on and below the diagonal has unit
/// diagonal, the part above it has nilpotent entries.
#[allow(clippy::needless_range_loop)]
fn invert_d(r: &Ring, d: &Mat) -> Mat {
    let n = d.len();
    let mut low = zeros(r, n);
    let mut up = zeros(r, n);
    for i in 0..n {
        for k in 0..n {
            if i >= k {
                low[i][k] = d[i][k].clone();
            } else {
                assert!(d[i][k].is_nilpotent(), "entry ({i}, {k}) = {} above the diagonal", d[i][k]);
                up[i][k] = d[i][k].clone();
            }
        }
    }
    let mut low_inv = zeros(r, n);
    for k in 0..n {
        for i in k..n {
            let mut acc = if i == k { r.one() } else { r.zero() };
            for l in k..i {
                acc = &acc - &(&low[i][l] * &low_inv[l][k]);
            }
            low_inv[i][k] = &acc * &low[i][i].invert().unwrap();
        }
    }
    // (L + U)^-1 = sum_j (-L^-1 U)^j L^-1, finite since U is nilpotent
    let step: Mat = mat_mul(r, &low_inv, &up).into_iter().map(|row| row.iter().map(|x| -x).collect()).collect();
    let mut term = low_inv.clone();
    let mut inv = low_inv.clone();
    for _ in 0..r.nil_index() {
        term = mat_mul(r, &step, &term);
        for i in 0..n {
            for k in 0..n {
                inv[i][k] = &inv[i][k] + &term[i][k];
            }
        }
    }
    assert!(mat_mul(r, &step, &term).iter().flatten().all(|x| x.is_zero()), "Neumann series did not terminate");
    inv
}

/// `D(f, g)` from the leading `n x n` block of `s` on a window of size `m`.
fn oracle(f: &LaurentSeries, g: &LaurentSeries, n: usize, m: usize) -> RingElement {
    let r = f.ring().clone();
    let depth = |s: &LaurentSeries| (-s.lowest()).max(0) as usize;
    let cap = (m * (depth(f) + depth(g) + 3) + 8) as i64;
    let neg = depth(g) + 1;
    let pf = Powers::new(f, m.max(g.top() as usize + 1), neg, cap);
    // (fg)~ = g~ ∘ f~ = sum_i g_i f~^i
    let mut fg = LaurentSeries::zero(&r);
    for (i, c) in g.terms() {
        fg = &fg + &pf.get(i).scale(c);
    }
    let pg = Powers::new(g, m, 0, cap);
    let pfg = Powers::new(&fg, m, 0, cap);
    let s = mat_mul(&r, &mat_mul(&r, &d_block(&pf, m), &d_block(&pg, m)), &invert_d(&r, &d_block(&pfg, m)));
    for k in n..n + 3 {
        for (i, row) in s.iter().enumerate().take(n + 3) {
            let want = if i == k { r.one() } else { r.zero() };
            assert_eq!(row[k], want, "s(t^{k}) != t^{k}: the leading block is too small");
        }
    }
    let lead: Mat = s[..n].iter().map(|row| row[..n].to_vec()).collect();
    laplace(&r, &lead)
}

fn checked_oracle(f: &LaurentSeries, g: &LaurentSeries) -> RingElement {
    let (a, b) = (oracle(f, g, 6, 16), oracle(f, g, 6, 32));
    assert_eq!(a, b, "oracle changes between windows 16 and 32 for ({f}, {g})");
    a
}

fn library(f: &LaurentSeries, g: &LaurentSeries) -> RingElement {
    let (f, g) = (AutElement::new(f.clone()).unwrap(), AutElement::new(g.clone()).unwrap());
    det_cocycle(&f, &g, Precision::default()).unwrap()
}

#[test]
fn worked_example() {
    let r = Ring::parse("Q[e;2]").unwrap();
    let f = parse_series("t + e*t^-1", &r).unwrap();
    let g = parse_series("t + t^2", &r).unwrap();
    assert_eq!(checked_oracle(&f, &g), r.one());
    assert_eq!(checked_oracle(&g, &f), parse_series("1 - e", &r).unwrap().coeff(0));
    assert_eq!(library(&f, &g), checked_oracle(&f, &g));
    assert_eq!(library(&g, &f), checked_oracle(&g, &f));
}

#[test]
fn random_pairs_agree_with_the_library() {
    let mut nontrivial = 0;
    for (desc, seed) in [("Q[e;2]", 1), ("Z/4", 2), ("Z/9", 3)] {
        let r = Ring::parse(desc).unwrap();
        let sampler = SeriesSampler::new(&r).with_shape(1, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..8 {
            let f = sampler.automorphism(&mut rng);
            let g = sampler.automorphism(&mut rng);
            let v = checked_oracle(&f, &g);
            assert_eq!(library(&f, &g), v, "D({f}, {g}) over {desc}");
            nontrivial += usize::from(!v.is_one());
        }
    }
    assert!(nontrivial >= 5, "only {nontrivial} sampled pairs have D != 1");
}
