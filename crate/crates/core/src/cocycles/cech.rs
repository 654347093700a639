//! Čech 2-cocycles obtained by evaluating a group 2-cocycle on the
//! transition automorphisms of a finite cover.

use std::collections::BTreeMap;

use super::Cochain2;
use crate::aut::AutElement;
use crate::error::{Error, Result};
use crate::rings::RingElement;

/// Transitions `φ_ij` on the index set `0..size`, with `φ_ii = 1`,
/// `φ_ij φ_ji = 1` and `φ_ij φ_jk = φ_ik`.
#[derive(Clone)]
pub struct CechCover {
    size: usize,
    transitions: BTreeMap<(usize, usize), AutElement>,
}

/// `h_ijk` for all ordered triples.
pub type CechValues = BTreeMap<(usize, usize, usize), RingElement>;
/// A nonzero defect at `(i, j, k, l)`.
pub type CechDefect = ((usize, usize, usize, usize), RingElement);

impl CechCover {
    /// Validates `transitions`, which must hold `φ_ij` for every `i != j`;
    /// compositions are compared below `t^cap`.
    pub fn new(size: usize, mut transitions: BTreeMap<(usize, usize), AutElement>, cap: i64) -> Result<Self> {
        let Some(ring) = transitions.values().next().map(|a| a.ring().clone()) else {
            return Err(Error::Domain("a cover needs at least two indices".into()));
        };
        for i in 0..size {
            transitions.entry((i, i)).or_insert_with(|| AutElement::identity(&ring));
        }
        for i in 0..size {
            for j in 0..size {
                if !transitions.contains_key(&(i, j)) {
                    return Err(Error::Domain(format!("transition ({i}, {j}) is missing")));
                }
            }
        }
        if let Some((i, j)) = transitions.keys().find(|(i, j)| *i >= size || *j >= size) {
            return Err(Error::Domain(format!("transition ({i}, {j}) is outside 0..{size}")));
        }
        let cover = CechCover { size, transitions };
        for i in 0..size {
            if !cover.transition(i, i).is_identity() {
                return Err(Error::Domain(format!("transition ({i}, {i}) is not the identity")));
            }
            for j in 0..size {
                for k in 0..size {
                    let lhs = cover.transition(i, j).mul(cover.transition(j, k), cap)?;
                    if !lhs.tilde().agrees_with(cover.transition(i, k).tilde()) {
                        return Err(Error::Domain(format!(
                            "transitions fail the cocycle condition at ({i}, {j}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(cover)
    }

    /// The cover with `φ_(i,i+1) = links[i]` and all other transitions forced.
    pub fn from_chain(links: &[AutElement], cap: i64) -> Result<Self> {
        let size = links.len() + 1;
        let mut transitions = BTreeMap::new();
        for i in 0..size {
            let mut acc = links.first().map(|a| AutElement::identity(a.ring()));
            for j in i + 1..size {
                let next = acc.take().unwrap().mul(&links[j - 1], cap)?;
                transitions.insert((j, i), next.inverse(cap)?);
                transitions.insert((i, j), next.clone());
                acc = Some(next);
            }
        }
        CechCover::new(size, transitions, cap)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn transition(&self, i: usize, j: usize) -> &AutElement {
        &self.transitions[&(i, j)]
    }
}

/// `h_ijk = c(φ_ij, φ_jk)` for every ordered triple.
pub fn cech_assemble(cover: &CechCover, cocycle: &Cochain2) -> Result<CechValues> {
    let n = cover.size();
    let mut out = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out.insert((i, j, k), cocycle(cover.transition(i, j), cover.transition(j, k))?);
            }
        }
    }
    Ok(out)
}

/// Quadruples where `h_jkl h_ikl^-1 h_ijl h_ijk^-1 != 1`, with that value.
pub fn cech_defects(size: usize, values: &CechValues) -> Result<Vec<CechDefect>> {
    let mut bad = Vec::new();
    for i in 0..size {
        for j in 0..size {
            for k in 0..size {
                for l in 0..size {
                    let h = |a, b, c| &values[&(a, b, c)];
                    let num = h(j, k, l) * h(i, j, l);
                    let den = h(i, k, l) * h(i, j, k);
                    let d = &num * &den.invert()?;
                    if !d.is_one() {
                        bad.push(((i, j, k, l), d));
                    }
                }
            }
        }
    }
    Ok(bad)
}
