pub mod aut;
pub mod cocycles;
pub mod error;
pub mod lie;
pub mod parse;
pub mod precision;
pub mod report;
pub mod rings;
pub mod series;
pub mod suites;
pub mod symbol;

pub use error::{Error, Result};
