use laurentcc_core::aut::{AutElement, DecompositionVariant};
use laurentcc_core::cocycles::{
    cech_assemble, cech_defects, cocycle_defect, probe_conjecture, CechCover, Cochain2, Cocycle, ProbeConfig,
};
use laurentcc_core::lie::{lie_bott, lie_det, virasoro_pairing, Derivation};
use laurentcc_core::parse::parse_series;
use laurentcc_core::report::{Check, Status, VerificationReport};
use laurentcc_core::rings::{Ring, RingElement};
use laurentcc_core::series::LaurentSeries;
use laurentcc_core::suites::{self, Criterion, SuiteConfig};
use laurentcc_core::symbol::cc;
use laurentcc_core::Error;

use super::{Command, Failure, Options};

type Outcome = Result<VerificationReport, Failure>;

pub fn run(command: &Command, opts: &Options, echo: String) -> Outcome {
    let ring = ring(opts)?;
    let mut report = VerificationReport::new(echo, ring.to_string(), opts.precision, None);
    let n = opts.precision;
    match command {
        Command::Cc { f, g } => {
            let (f, g) = (series(f, &ring)?, series(g, &ring)?);
            let v = cc(&f, &g, opts.strategy())?;
            report.push(Check::pass(format!("CC({f}, {g})")).witness("value", v));
        }
        Command::Bott { f, g } | Command::Det { f, g } => {
            let (f, g) = (aut(f, &ring)?, aut(g, &ring)?);
            let which =
                if matches!(command, Command::Bott { .. }) { Cocycle::BottThurston } else { Cocycle::Determinant };
            let v = which.eval(&f, &g, opts.strategy(), opts.precision())?;
            report.push(Check::pass(format!("{which}({f}, {g})")).witness("value", v));
        }
        Command::LieBott { g1, g2 } | Command::LieDet { g1, g2 } => {
            let d1 = Derivation::new(series(g1, &ring)?);
            let d2 = Derivation::new(series(g2, &ring)?);
            let (name, v) = match command {
                Command::LieBott { .. } => ("lie bott", lie_bott(&d1, &d2)?),
                _ => ("lie det", lie_det(&d1, &d2)?),
            };
            report.push(Check::pass(format!("{name}({d1}, {d2})")).witness("value", v));
        }
        Command::Virasoro { max, which } => return virasoro(report, *max, *which),
        Command::Decompose { phi, variant } => {
            let phi = aut(phi, &ring)?;
            let variants = variant.map_or(DecompositionVariant::ALL.to_vec(), |v| vec![v]);
            for v in variants {
                let (a, b) = phi.decompose(v, n)?;
                let back = a.mul(&b, n)?;
                let (ga, gb) = v.factors();
                let ok = back.tilde().agrees_with(phi.tilde()) && a.in_subgroup(ga) && b.in_subgroup(gb);
                report.push(Check::expect(v.name(), ok).witness("left", &a).witness("right", &b));
            }
        }
        Command::Invert { phi } => {
            let phi = aut(phi, &ring)?;
            let inv = phi.inverse(n)?;
            let ok = phi.mul(&inv, n)?.is_identity() && inv.mul(&phi, n)?.is_identity();
            report.push(Check::expect(format!("inverse of {phi}"), ok).witness("inverse", inv));
        }
        Command::Defect { g1, g2, g3, cocycle } => {
            let gs = [aut(g1, &ring)?, aut(g2, &ring)?, aut(g3, &ring)?];
            for which in cocycles(*cocycle) {
                let c = cochain(which, opts);
                let v = cocycle_defect(&c, &gs[0], &gs[1], &gs[2], n)?;
                report.push(Check::expect(format!("defect of {which}"), v.is_one()).witness("value", v));
            }
        }
        Command::Probe { trials } => {
            let mut cfg = ProbeConfig {
                trials: *trials,
                seed: opts.seed,
                precision: opts.precision(),
                strategy: opts.strategy(),
                ..Default::default()
            };
            if opts.ring.is_some() {
                cfg.rings = vec![ring];
            }
            let mut probe = probe_conjecture(&cfg);
            probe.command = report.command;
            return Ok(probe);
        }
        Command::Cech { links, cocycle } => {
            let links = links.iter().map(|l| aut(l, &ring)).collect::<Result<Vec<_>, _>>()?;
            let cover = CechCover::from_chain(&links, n)?;
            cech(&mut report, &cover, *cocycle, opts)?;
        }
        Command::Selftest { criteria } => {
            let chosen = criteria
                .iter()
                .map(|&k| {
                    Criterion::ALL
                        .get(k.wrapping_sub(1))
                        .copied()
                        .ok_or_else(|| Failure::from(Error::Domain(format!("criterion {k} is not between 1 and 11"))))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let chosen = if chosen.is_empty() { Criterion::ALL.to_vec() } else { chosen };
            let cfg = SuiteConfig { seed: opts.seed, precision: opts.precision(), strategy: opts.strategy() };
            let mut r = suites::selftest(&cfg, &chosen);
            r.command = report.command;
            return Ok(r);
        }
    }
    Ok(report)
}

fn ring(opts: &Options) -> Result<Ring, Failure> {
    let text = opts.ring.as_deref().unwrap_or("Q");
    Ring::parse(text).map_err(|error| Failure { error, literal: Some(text.to_string()) })
}

fn series(text: &str, ring: &Ring) -> Result<LaurentSeries, Failure> {
    parse_series(text, ring).map_err(|error| Failure { error, literal: Some(text.to_string()) })
}

fn aut(text: &str, ring: &Ring) -> Result<AutElement, Failure> {
    AutElement::new(series(text, ring)?).map_err(|error| Failure { error, literal: Some(text.to_string()) })
}

fn cocycles(which: Option<Cocycle>) -> Vec<Cocycle> {
    which.map_or(vec![Cocycle::BottThurston, Cocycle::Determinant], |c| vec![c])
}

fn cochain(
    which: Cocycle,
    opts: &Options,
) -> impl Fn(&AutElement, &AutElement) -> laurentcc_core::Result<RingElement> + Sync + '_ {
    move |f, g| which.eval(f, g, opts.strategy(), opts.precision())
}

fn virasoro(mut report: VerificationReport, max: i64, which: Option<Cocycle>) -> Outcome {
    let q = Ring::rationals();
    report.ring = q.to_string();
    for which in cocycles(which) {
        let lie = |m: i64, n: i64| {
            let (a, b) = (Derivation::witt(&q, m), Derivation::witt(&q, n));
            match which {
                Cocycle::BottThurston => lie_bott(&a, &b),
                Cocycle::Determinant => lie_det(&a, &b),
            }
        };
        for m in -max..=max {
            let v = lie(m, -m)?;
            let want = virasoro_pairing(m, -m, which);
            let ok = q.from_rational(&want)? == v;
            report.push(
                Check::expect(format!("{which} (L{m}, L{})", -m), ok).witness("value", v).witness("closed form", want),
            );
        }
        let mut off = Vec::new();
        for m in -max..=max {
            for n in -max..=max {
                if n != -m {
                    let v = lie(m, n)?;
                    if !v.is_zero() {
                        off.push(format!("(L{m}, L{n}) = {v}"));
                    }
                }
            }
        }
        let mut c = Check::expect(format!("{which} vanishes off n = -m"), off.is_empty());
        c.witnesses = off;
        report.push(c);
    }
    Ok(report)
}

fn cech(
    report: &mut VerificationReport,
    cover: &CechCover,
    which: Option<Cocycle>,
    opts: &Options,
) -> Result<(), Failure> {
    let mut tables = Vec::new();
    for which in cocycles(which) {
        let c = cochain(which, opts);
        let values = cech_assemble(cover, &c as &Cochain2)?;
        let defects = cech_defects(cover.size(), &values)?;
        let mut check = Check::expect(format!("Cech identity for {which}"), defects.is_empty());
        for ((i, j, k, l), v) in &defects {
            check = check.witness(&format!("defect ({i}, {j}, {k}, {l})"), v);
        }
        report.push(check);
        tables.push((which, values));
    }
    let mut side = Check::new("values h(i, j, k) side by side", Status::Skip);
    let (_, first) = &tables[0];
    for key in first.keys() {
        let row: Vec<String> = tables.iter().map(|(w, t)| format!("{w} = {}", t[key])).collect();
        side = side.witness(&format!("h{key:?}"), row.join(", "));
    }
    report.push(side);
    Ok(())
}
