//! Batch harness for character-sum experiments.
//!
//! A JSON [`config::ExperimentConfig`] names a family of sums, a field, a range of
//! extension degrees and a polynomial source. [`run::run`] enumerates each sum by
//! brute force and checks it against the classical Weil bound and the improved
//! bound from [`charsums::boundbook`], producing one [`run::ResultRow`] per sum.

pub mod config;
pub mod error;
pub mod gen;
pub mod identities;
pub mod output;
pub mod run;

pub use config::{Constraints, ExperimentConfig, Family, PolySource};
pub use error::{Error, Result};
pub use run::{run, run_detailed, ResultRow};
