//! Evidence gathering for the open question whether `D^12` and `B̂` agree.
//! The probe records ratios and asserts nothing about them.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{bott_thurston, det_cocycle};
use crate::aut::AutElement;
use crate::error::Result;
use crate::precision::Precision;
use crate::report::{Check, Status, VerificationReport};
use crate::rings::{Ring, RingElement};
use crate::series::SeriesSampler;
use crate::symbol::SymbolStrategy;

#[derive(Clone, Debug)]
pub struct ProbeConfig {
    /// Trial `i` runs over `rings[i % rings.len()]`.
    pub rings: Vec<Ring>,
    pub trials: usize,
    pub seed: u64,
    pub precision: Precision,
    pub strategy: SymbolStrategy,
    /// Depth of sampled principal parts and degree of sampled tails.
    pub depth: i64,
    pub degree: i64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            rings: vec![Ring::parse("Q[e;2]").unwrap(), Ring::parse("Z/4").unwrap()],
            trials: 100,
            seed: 0,
            precision: Precision::default(),
            strategy: SymbolStrategy::default(),
            depth: 1,
            degree: 2,
        }
    }
}

/// Seed of trial `i`, independent of scheduling.
pub(crate) fn trial_seed(seed: u64, i: usize) -> u64 {
    seed ^ (i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

struct Trial {
    f: AutElement,
    g: AutElement,
    b_fg: RingElement,
    b_gf: RingElement,
    d_fg: RingElement,
    d_gf: RingElement,
}

impl Trial {
    fn pointwise(&self) -> Result<RingElement> {
        Ok(&self.d_fg.pow(12) * &self.b_fg.invert()?)
    }

    fn commutator(&self) -> Result<RingElement> {
        let b = &self.b_fg * &self.b_gf.invert()?;
        let d = &self.d_fg * &self.d_gf.invert()?;
        Ok(&b * &d.pow(12).invert()?)
    }
}

fn run_trial(cfg: &ProbeConfig, i: usize) -> Result<Trial> {
    let ring = &cfg.rings[i % cfg.rings.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, i));
    let sampler = SeriesSampler::new(ring).with_shape(cfg.depth, cfg.degree);
    let f = AutElement::new(sampler.automorphism(&mut rng))?;
    let g = AutElement::new(sampler.automorphism(&mut rng))?;
    let p = cfg.precision;
    Ok(Trial {
        b_fg: bott_thurston(&f, &g, cfg.strategy, p)?,
        b_gf: bott_thurston(&g, &f, cfg.strategy, p)?,
        d_fg: det_cocycle(&f, &g, p)?,
        d_gf: det_cocycle(&g, &f, p)?,
        f,
        g,
    })
}

/// Samples pairs `(f, g)` and reports `D(f,g)^12 / B̂(f,g)` and the
/// commutator ratio `B̂(f,g) B̂(g,f)^-1 / (D(f,g) D(g,f)^-1)^12` per trial.
/// Trials run in parallel and are merged by index, so the report depends
/// only on the configuration.
pub fn probe_conjecture(cfg: &ProbeConfig) -> VerificationReport {
    let rings: Vec<String> = cfg.rings.iter().map(|r| r.to_string()).collect();
    let mut report = VerificationReport::new("probe", rings.join(", "), cfg.precision.terms, Some(cfg.seed));
    let outcomes: Vec<(usize, Result<Trial>)> =
        (0..cfg.trials).into_par_iter().map(|i| (i, run_trial(cfg, i))).collect();
    let (mut pointwise_one, mut commutator_one, mut completed) = (0, 0, 0);
    for (i, outcome) in outcomes {
        let ring = &rings[i % rings.len()];
        let name = format!("trial {i} over {ring}");
        let check = match outcome.and_then(|t| Ok((t.pointwise()?, t.commutator()?, t))) {
            Ok((pw, cm, t)) => {
                completed += 1;
                pointwise_one += pw.is_one() as usize;
                commutator_one += cm.is_one() as usize;
                Check::pass(name)
                    .witness("f", t.f)
                    .witness("g", t.g)
                    .witness("B(f,g)", &t.b_fg)
                    .witness("B(g,f)", &t.b_gf)
                    .witness("D(f,g)", &t.d_fg)
                    .witness("D(g,f)", &t.d_gf)
                    .witness("D(f,g)^12 / B(f,g)", pw)
                    .witness("commutator ratio", cm)
            }
            Err(e) => Check::fail(name).witness("error", e),
        };
        report.push(check);
    }
    report.push(
        Check::new("summary", Status::Skip)
            .witness("completed", format!("{completed} of {}", cfg.trials))
            .witness("pointwise ratio equal to 1", format!("{pointwise_one} of {completed}"))
            .witness("commutator ratio equal to 1", format!("{commutator_one} of {completed}")),
    );
    report
}
