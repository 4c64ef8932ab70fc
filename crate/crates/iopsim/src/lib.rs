//! Command-line front end for `iopsim-core`: run configurations, JSON
//! formats, operator-file validation and the randomised invariant suites.

pub mod cli;
pub mod config;
mod error;
pub mod json;
pub mod suites;
pub mod validate;

pub use config::{RunConfig, ScenarioSpec};
pub use error::CliError;
