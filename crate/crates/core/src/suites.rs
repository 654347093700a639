//! Seeded verification suites, one per acceptance criterion. `selftest`
//! runs all of them; the `acceptance` test target runs and times each.

use std::fmt;
use std::time::Duration;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::aut::{AutElement, DecompositionVariant, Subgroup};
use crate::cocycles::{
    bott_thurston, cech_assemble, cech_defects, cocycle_defect, det_cocycle, det_cocycle_at, det_min_window,
    probe_conjecture, CechCover, Cochain2, Cocycle, ProbeConfig,
};
use crate::error::Result;
use crate::lie::{lie_bott, lie_det, lie_from_group, virasoro_pairing, Derivation};
use crate::precision::Precision;
use crate::report::{Check, Status, VerificationReport};
use crate::rings::{Ring, RingElement};
use crate::series::{LaurentSeries, SeriesSampler};
use crate::symbol::{cc, SymbolStrategy};

#[derive(Clone, Copy, Debug, Default)]
pub struct SuiteConfig {
    pub seed: u64,
    pub precision: Precision,
    pub strategy: SymbolStrategy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Criterion {
    Virasoro,
    TwelveLie,
    GroupToLie,
    Symbol,
    CocycleIdentity,
    Triviality,
    WorkedExample,
    Decomposition,
    Stability,
    Cech,
    Probe,
}

impl Criterion {
    pub const ALL: [Criterion; 11] = [
        Criterion::Virasoro,
        Criterion::TwelveLie,
        Criterion::GroupToLie,
        Criterion::Symbol,
        Criterion::CocycleIdentity,
        Criterion::Triviality,
        Criterion::WorkedExample,
        Criterion::Decomposition,
        Criterion::Stability,
        Criterion::Cech,
        Criterion::Probe,
    ];

    pub fn number(self) -> usize {
        Criterion::ALL.iter().position(|c| *c == self).unwrap() + 1
    }

    pub fn title(self) -> &'static str {
        match self {
            Criterion::Virasoro => "Witt basis closed forms",
            Criterion::TwelveLie => "12 Lie D = Lie B",
            Criterion::GroupToLie => "Lie cocycles from group cocycles",
            Criterion::Symbol => "Contou-Carrere symbol laws",
            Criterion::CocycleIdentity => "cocycle identities",
            Criterion::Triviality => "triviality laws",
            Criterion::WorkedExample => "worked example",
            Criterion::Decomposition => "decompositions",
            Criterion::Stability => "precision and window stability",
            Criterion::Cech => "Cech 2-cocycles",
            Criterion::Probe => "probe",
        }
    }

    /// Wall-clock budget, where one is required.
    pub fn time_limit(self) -> Option<Duration> {
        let secs = match self {
            Criterion::Virasoro => 1,
            Criterion::TwelveLie | Criterion::Cech => 5,
            Criterion::GroupToLie | Criterion::Symbol => 30,
            Criterion::CocycleIdentity | Criterion::Decomposition => 60,
            _ => return None,
        };
        Some(Duration::from_secs(secs))
    }

    pub fn run(self, cfg: &SuiteConfig) -> Vec<Check> {
        match self {
            Criterion::Virasoro => virasoro(),
            Criterion::TwelveLie => twelve_lie(cfg),
            Criterion::GroupToLie => group_to_lie(cfg),
            Criterion::Symbol => symbol(cfg),
            Criterion::CocycleIdentity => cocycle_identity(cfg),
            Criterion::Triviality => triviality(cfg),
            Criterion::WorkedExample => worked_example(cfg),
            Criterion::Decomposition => decomposition(cfg),
            Criterion::Stability => stability(cfg),
            Criterion::Cech => cech(cfg),
            Criterion::Probe => probe(cfg),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}. {}", self.number(), self.title())
    }
}

/// Runs the given suites into one report.
pub fn selftest(cfg: &SuiteConfig, criteria: &[Criterion]) -> VerificationReport {
    let mut report = VerificationReport::new("selftest", "suite rings", cfg.precision.terms, Some(cfg.seed));
    for &c in criteria {
        for mut check in c.run(cfg) {
            check.name = format!("{}: {}", c.number(), check.name);
            report.push(check);
        }
    }
    report
}

/// Constants of the worked example `f̃ = t + e t^-1`, `g̃ = t + t^2` over
/// `Q[e;2]`, as `(B(f,g), B(g,f), D(f,g), D(g,f))` in the generator `e`.
pub const WORKED_EXAMPLE: [(i64, i64); 4] = [(1, 4), (1, -8), (1, 0), (1, -1)];

/// The worked example pair.
pub fn worked_example_pair() -> (Ring, AutElement, AutElement) {
    let r = ring("Q[e;2]");
    let e = r.generator("e").unwrap();
    let t = LaurentSeries::t(&r);
    let f = AutElement::new(&t + &LaurentSeries::monomial(e, -1)).unwrap();
    let g = AutElement::new(&t + &LaurentSeries::t_pow(&r, 2)).unwrap();
    (r, f, g)
}

fn ring(d: &str) -> Ring {
    Ring::parse(d).expect("suite ring descriptors are valid")
}

fn rng(seed: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Runs `n` samples; each returns `Ok(None)` on success or a witness.
fn sampled(name: impl Into<String>, n: usize, mut f: impl FnMut(usize) -> Result<Option<String>>) -> Check {
    let mut failures = Vec::new();
    for i in 0..n {
        match f(i) {
            Ok(None) => {}
            Ok(Some(w)) => failures.push(format!("sample {i}: {w}")),
            Err(e) => failures.push(format!("sample {i}: error: {e}")),
        }
    }
    let mut check = Check::expect(format!("{} ({n} samples)", name.into()), failures.is_empty());
    if !failures.is_empty() {
        check = check.witness("failures", failures.len());
    }
    for w in failures.into_iter().take(3) {
        check.witnesses.push(w);
    }
    check
}

fn single(name: &str, f: impl FnOnce() -> Result<Option<String>>) -> Check {
    match f() {
        Ok(None) => Check::pass(name),
        Ok(Some(w)) => Check::fail(name).witness("witness", w),
        Err(e) => Check::fail(name).witness("error", e),
    }
}

fn mismatch(label: &str, lhs: &impl fmt::Display, rhs: &impl fmt::Display) -> Option<String> {
    Some(format!("{label}: {lhs} != {rhs}"))
}

fn bott_cochain(cfg: &SuiteConfig) -> impl Fn(&AutElement, &AutElement) -> Result<RingElement> + Sync + '_ {
    move |f, g| bott_thurston(f, g, cfg.strategy, cfg.precision)
}

fn det_cochain(cfg: &SuiteConfig) -> impl Fn(&AutElement, &AutElement) -> Result<RingElement> + Sync + '_ {
    move |f, g| det_cocycle(f, g, cfg.precision)
}

fn virasoro() -> Vec<Check> {
    let q = Ring::rationals();
    let mut out = Vec::new();
    for which in [Cocycle::BottThurston, Cocycle::Determinant] {
        let mut failures = Vec::new();
        for m in -8..=8 {
            for n in -8..=8 {
                let (lm, ln) = (Derivation::witt(&q, m), Derivation::witt(&q, n));
                let got = match which {
                    Cocycle::BottThurston => lie_bott(&lm, &ln),
                    Cocycle::Determinant => lie_det(&lm, &ln),
                };
                let want = q.from_rational(&virasoro_pairing(m, n, which)).unwrap();
                match got {
                    Ok(v) if v == want => {}
                    Ok(v) => failures.push(format!("(L{m}, L{n}) = {v}, expected {want}")),
                    Err(e) => failures.push(format!("(L{m}, L{n}): {e}")),
                }
            }
        }
        let mut c = Check::expect(format!("lie {which} on L_m, L_n for |m|, |n| <= 8"), failures.is_empty());
        for f in failures.into_iter().take(3) {
            c.witnesses.push(f);
        }
        out.push(c);
    }
    out
}

fn twelve_lie(cfg: &SuiteConfig) -> Vec<Check> {
    let rings = [ring("Q"), ring("Q[e;2]"), ring("Z/4")];
    let mut rng = rng(cfg.seed, 2);
    vec![sampled("12 lie det = lie bott", 50, |i| {
        let r = &rings[i % rings.len()];
        let s = SeriesSampler::new(r).with_shape(3, 3);
        let d1 = Derivation::new(s.laurent_polynomial(&mut rng));
        let d2 = Derivation::new(s.laurent_polynomial(&mut rng));
        let lhs = lie_det(&d1, &d2)?.scale_i64(12);
        let rhs = lie_bott(&d1, &d2)?;
        Ok((lhs != rhs).then(|| format!("over {r}, {d1}, {d2}: 12 lie det = {lhs}, lie bott = {rhs}")))
    })]
}

fn group_to_lie(cfg: &SuiteConfig) -> Vec<Check> {
    let rings = [ring("Q"), ring("Q[e;2]")];
    let mut rng = rng(cfg.seed, 3);
    let bott = bott_cochain(cfg);
    let det = det_cochain(cfg);
    vec![sampled("lie of B and D over dual numbers", 20, |i| {
        let r = &rings[i % rings.len()];
        let s = SeriesSampler::new(r).with_shape(2, 2);
        let (g1, g2) = (s.laurent_polynomial(&mut rng), s.laurent_polynomial(&mut rng));
        let (d1, d2) = (Derivation::new(g1.clone()), Derivation::new(g2.clone()));
        let from_b = lie_from_group(&bott, &g1, &g2)?;
        let from_d = lie_from_group(&det, &g1, &g2)?;
        let (lb, ld) = (lie_bott(&d1, &d2)?, lie_det(&d1, &d2)?);
        if from_b != lb {
            return Ok(mismatch(&format!("over {r}, ({g1}, {g2}): from B vs lie bott"), &from_b, &lb));
        }
        Ok((from_d != ld).then(|| format!("over {r}, ({g1}, {g2}): from D = {from_d}, lie det = {ld}")))
    })]
}

fn symbol(cfg: &SuiteConfig) -> Vec<Check> {
    let r = ring("Q[e;3]");
    let s = SeriesSampler::new(&r);
    let mut rng = rng(cfg.seed, 4);
    let st = cfg.strategy;
    let mut out = vec![sampled("product formula = exp-res-log", 50, |_| {
        let (f, g) = (s.unit(&mut rng), s.unit(&mut rng));
        let a = cc(&f, &g, SymbolStrategy::ProductFormula)?;
        let b = cc(&f, &g, SymbolStrategy::ExpResLog)?;
        Ok((a != b).then(|| format!("CC({f}, {g}): {a} != {b}")))
    })];
    out.push(single("CC(t, t) = -1", || {
        let t = LaurentSeries::t(&r);
        let v = cc(&t, &t, st)?;
        Ok((v != r.from_i64(-1)).then(|| v.to_string()))
    }));
    out.push(sampled("CC(a, g) = a^ord(g)", 20, |_| {
        let a = s.elements().unit(&mut rng);
        let g = s.unit(&mut rng);
        let lhs = cc(&LaurentSeries::constant(a.clone()), &g, st)?;
        let rhs = a.pow_i64(g.unit_order()?)?;
        Ok((lhs != rhs).then(|| format!("a = {a}, g = {g}: {lhs} != {rhs}")))
    }));
    out.push(sampled("CC(f, 1 - f) = 1", 20, |_| {
        let one = LaurentSeries::one(&r);
        let (f, g) = loop {
            let f = s.unit(&mut rng);
            let g = &one - &f;
            if g.is_unit() {
                break (f, g);
            }
        };
        let v = cc(&f, &g, st)?;
        Ok((!v.is_one()).then(|| format!("f = {f}: {v}")))
    }));
    out.push(sampled("bimultiplicativity", 20, |_| {
        let (f1, f2, g) = (s.unit(&mut rng), s.unit(&mut rng), s.unit(&mut rng));
        let lhs = cc(&(&f1 * &f2), &g, st)?;
        let rhs = &cc(&f1, &g, st)? * &cc(&f2, &g, st)?;
        if lhs != rhs {
            return Ok(Some(format!("CC({f1} * {f2}, {g}): {lhs} != {rhs}")));
        }
        let lhs = cc(&g, &(&f1 * &f2), st)?;
        let rhs = &cc(&g, &f1, st)? * &cc(&g, &f2, st)?;
        Ok((lhs != rhs).then(|| format!("CC({g}, {f1} * {f2}): {lhs} != {rhs}")))
    }));
    out.push(sampled("antisymmetry", 20, |_| {
        let (f, g) = (s.unit(&mut rng), s.unit(&mut rng));
        let v = &cc(&f, &g, st)? * &cc(&g, &f, st)?;
        Ok((!v.is_one()).then(|| format!("CC({f}, {g}) CC({g}, {f}) = {v}")))
    }));
    out
}

fn cocycle_identity(cfg: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let cap = cfg.precision.terms;
    for (k, d) in ["Q[e;2]", "Z/4"].into_iter().enumerate() {
        let r = ring(d);
        let s = SeriesSampler::new(&r).with_shape(1, 2);
        for (which, c) in [
            (Cocycle::BottThurston, &bott_cochain(cfg) as &Cochain2),
            (Cocycle::Determinant, &det_cochain(cfg) as &Cochain2),
        ] {
            let mut rng = rng(cfg.seed, 50 + k as u64);
            out.push(sampled(format!("defect of {which} over {d}"), 20, |_| {
                let g1 = AutElement::new(s.automorphism(&mut rng))?;
                let g2 = AutElement::new(s.automorphism(&mut rng))?;
                let g3 = AutElement::new(s.automorphism(&mut rng))?;
                let v = cocycle_defect(c, &g1, &g2, &g3, cap)?;
                Ok((!v.is_one()).then(|| format!("({g1}, {g2}, {g3}) -> {v}")))
            }));
        }
    }
    out
}

fn triviality(cfg: &SuiteConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let mut rng = rng(cfg.seed, 6);
    let reduced = [ring("Q"), ring("Z/3")];
    out.push(sampled("B = 1 over reduced rings", 20, |i| {
        let r = &reduced[i % 2];
        let s = SeriesSampler::new(r);
        let f = AutElement::new(s.automorphism(&mut rng))?;
        let g = AutElement::new(s.automorphism(&mut rng))?;
        let v = bott_thurston(&f, &g, cfg.strategy, cfg.precision)?;
        Ok((!v.is_one()).then(|| format!("over {r}, ({f}, {g}) -> {v}")))
    }));
    let nonreduced = [ring("Q[e;2]"), ring("Z/4")];
    out.push(sampled("B = D = 1 on power series automorphisms", 20, |i| {
        let r = &nonreduced[i % 2];
        let s = SeriesSampler::new(r);
        let f = AutElement::new(s.power_series_automorphism(&mut rng))?;
        let g = AutElement::new(s.power_series_automorphism(&mut rng))?;
        let b = bott_thurston(&f, &g, cfg.strategy, cfg.precision)?;
        let d = det_cocycle(&f, &g, cfg.precision)?;
        Ok((!b.is_one() || !d.is_one()).then(|| format!("over {r}, ({f}, {g}) -> B = {b}, D = {d}")))
    }));
    out
}

fn worked_values(cfg: &SuiteConfig) -> Result<[RingElement; 4]> {
    let (_, f, g) = worked_example_pair();
    let (b, d) = (bott_cochain(cfg), det_cochain(cfg));
    Ok([b(&f, &g)?, b(&g, &f)?, d(&f, &g)?, d(&g, &f)?])
}

fn worked_example(cfg: &SuiteConfig) -> Vec<Check> {
    let (r, f, g) = worked_example_pair();
    let e = r.generator("e").unwrap();
    let labels = ["B(f,g)", "B(g,f)", "D(f,g)", "D(g,f)"];
    let values = match worked_values(cfg) {
        Ok(v) => v,
        Err(err) => return vec![Check::fail("worked example").witness("error", err)],
    };
    let mut out = Vec::new();
    for ((label, v), (a, b)) in labels.iter().zip(&values).zip(WORKED_EXAMPLE) {
        let want = &r.from_i64(a) + &e.scale_i64(b);
        out.push(
            Check::expect(format!("{label} at f = {f}, g = {g}"), *v == want)
                .witness(label, v)
                .witness("expected", want),
        );
    }
    out.push(single("B(f,g) B(g,f)^-1 = (D(f,g) D(g,f)^-1)^12", || {
        let lhs = &values[0] * &values[1].invert()?;
        let rhs = (&values[2] * &values[3].invert()?).pow(12);
        Ok((lhs != rhs).then(|| format!("{lhs} != {rhs}")))
    }));
    out
}

/// Checks one decomposition: recomposition, factor shapes, and that
/// decomposing the recomposition returns the same factors. The redone plus
/// factor must be known beyond `t^(N/4)`.
fn check_decomposition(phi: &AutElement, v: DecompositionVariant, cap: i64) -> Result<Option<String>> {
    let (a, b) = phi.decompose(v, cap)?;
    let back = a.mul(&b, cap)?;
    if !back.tilde().agrees_with(phi.tilde()) {
        return Ok(Some(format!("{v} of {phi}: factors recompose to {back}")));
    }
    let (ga, gb) = v.factors();
    if !a.in_subgroup(ga) || !b.in_subgroup(gb) {
        return Ok(Some(format!("{v} of {phi}: factors {a}, {b} have the wrong shape")));
    }
    let (a2, b2) = back.decompose(v, cap)?;
    if !a2.tilde().agrees_with(a.tilde()) || !b2.tilde().agrees_with(b.tilde()) {
        return Ok(Some(format!("{v} of {phi}: redone as {a2}, {b2} instead of {a}, {b}")));
    }
    for (x, grp) in [(&a2, ga), (&b2, gb)] {
        let plus = matches!(grp, Subgroup::Plus | Subgroup::Plus1);
        if plus && x.tilde().precision().is_some_and(|n| n <= cap / 4) {
            return Ok(Some(format!("{v} of {phi}: redone factor {x} is known only below t^{}", cap / 4)));
        }
    }
    Ok(None)
}

fn decomposition(cfg: &SuiteConfig) -> Vec<Check> {
    let cap = cfg.precision.terms;
    let mut out = Vec::new();
    for (k, d) in ["Z/8", "Q[e1;2,e2;3]"].into_iter().enumerate() {
        let r = ring(d);
        let s = SeriesSampler::new(&r);
        let mut rng = rng(cfg.seed, 80 + k as u64);
        out.push(sampled(format!("four decompositions over {d}"), 100, |_| {
            let phi = AutElement::new(s.automorphism(&mut rng))?;
            for v in DecompositionVariant::ALL {
                if let Some(w) = check_decomposition(&phi, v, cap)? {
                    return Ok(Some(w));
                }
            }
            Ok(None)
        }));
    }
    out
}

fn stability(cfg: &SuiteConfig) -> Vec<Check> {
    let p = cfg.precision.without_stability();
    let mut out = Vec::new();
    for (k, d) in ["Q[e;2]", "Z/4", "Q[e;3]"].into_iter().enumerate() {
        let r = ring(d);
        let s = SeriesSampler::new(&r).with_shape(1, 2);
        let mut rng = rng(cfg.seed, 90 + k as u64);
        out.push(sampled(format!("B at N and 2N, D at M and 2M over {d}"), 20, |_| {
            let f = AutElement::new(s.automorphism(&mut rng))?;
            let g = AutElement::new(s.automorphism(&mut rng))?;
            let b1 = bott_thurston(&f, &g, cfg.strategy, p)?;
            let b2 = bott_thurston(&f, &g, cfg.strategy, p.doubled())?;
            if b1 != b2 {
                return Ok(mismatch(&format!("B({f}, {g})"), &b1, &b2));
            }
            let Some(m) = det_min_window(&f, &g)? else {
                return Ok(None);
            };
            let d1 = det_cocycle_at(&f, &g, m)?;
            let d2 = det_cocycle_at(&f, &g, 2 * m)?;
            Ok((d1 != d2).then(|| format!("D({f}, {g}): {d1} at M = {m}, {d2} at 2M")))
        }));
    }
    out.push(single("worked example at N and 2N", || {
        let a = worked_values(&SuiteConfig { precision: p, ..*cfg })?;
        let b = worked_values(&SuiteConfig { precision: p.doubled(), ..*cfg })?;
        Ok((a != b).then(|| format!("{a:?} != {b:?}")))
    }));
    out
}

fn cech_cover_checks(name: &str, cover: &CechCover, cfg: &SuiteConfig) -> Result<Option<String>> {
    for (which, c) in [
        (Cocycle::BottThurston, &bott_cochain(cfg) as &Cochain2),
        (Cocycle::Determinant, &det_cochain(cfg) as &Cochain2),
    ] {
        let values = cech_assemble(cover, c)?;
        let defects = cech_defects(cover.size(), &values)?;
        if let Some((q, v)) = defects.first() {
            return Ok(Some(format!("{name}: {which} has Cech defect {v} at {q:?}")));
        }
    }
    Ok(None)
}

fn cech(cfg: &SuiteConfig) -> Vec<Check> {
    let cap = cfg.precision.terms;
    let (r, f, g) = worked_example_pair();
    let mut out = vec![single("worked example cover", || {
        let cover = CechCover::from_chain(&[f.clone(), g.clone()], cap)?;
        cech_cover_checks("worked example cover", &cover, cfg)
    })];
    let s = SeriesSampler::new(&r).with_shape(1, 2);
    let mut rng = rng(cfg.seed, 10);
    out.push(sampled("sampled 3-index covers", 3, |_| {
        let f = AutElement::new(s.automorphism(&mut rng))?;
        let g = AutElement::new(s.automorphism(&mut rng))?;
        let cover = CechCover::from_chain(&[f, g], cap)?;
        cech_cover_checks("cover", &cover, cfg)
    }));
    out
}

fn probe(cfg: &SuiteConfig) -> Vec<Check> {
    let pc = ProbeConfig { seed: cfg.seed, precision: cfg.precision, strategy: cfg.strategy, ..Default::default() };
    let first = probe_conjecture(&pc);
    let second = probe_conjecture(&pc);
    let completed = first.checks.iter().filter(|c| c.name.starts_with("trial") && c.status == Status::Pass).count();
    let summary = first.checks.iter().find(|c| c.name == "summary").cloned();
    let mut done = Check::expect(format!("probe completes {} trials", pc.trials), completed == pc.trials)
        .witness("completed", completed);
    if let Some(s) = summary {
        done.witnesses.extend(s.witnesses);
    }
    vec![done, Check::expect("probe report is deterministic", first.to_json() == second.to_json())]
}
