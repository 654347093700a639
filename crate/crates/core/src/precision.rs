use std::fmt::Display;

use crate::error::{Error, Result};
use crate::series::DEFAULT_PRECISION;

/// Working precision for truncated computations, with an optional stability
/// guard that recomputes at twice the precision and compares.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    /// Absolute order `N`: series are carried below `t^N`.
    pub terms: i64,
    pub stability: bool,
    /// Rows added to the smallest determinant window.
    pub guard: usize,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { terms: DEFAULT_PRECISION, stability: true, guard: 0 }
    }
}

impl Precision {
    pub fn new(terms: i64) -> Self {
        Precision { terms, ..Default::default() }
    }

    pub fn without_stability(self) -> Self {
        Precision { stability: false, ..self }
    }

    pub fn doubled(self) -> Self {
        Precision { terms: 2 * self.terms, ..self }
    }

    /// Evaluates `f(N)` and, when the guard is on, checks `f(2N)` agrees.
    pub fn stable<T: PartialEq + Display>(self, f: impl Fn(i64) -> Result<T>) -> Result<T> {
        let a = f(self.terms)?;
        if self.stability {
            let b = f(2 * self.terms)?;
            if a != b {
                return Err(Error::Inconsistent(format!(
                    "value {a} at precision {} changed to {b} at precision {}",
                    self.terms,
                    2 * self.terms
                )));
            }
        }
        Ok(a)
    }
}
