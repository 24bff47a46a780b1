//! Command-line harness: configuration, sieve cache, CSV output and the
//! verification suite.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cache;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod verify;

pub use config::ExperimentConfig;
pub use error::{HarnessError, Result};
pub use report::{CheckLine, VerificationReport};
