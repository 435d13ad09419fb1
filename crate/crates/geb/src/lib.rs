//! File formats, parallel execution and the command line for `geb-core`.

pub mod cli;
mod error;
pub mod parallel;
pub mod report;
pub mod source;
pub mod store;

pub use error::{CliError, Result};
