//! Verification driver for the exact-arithmetic Kakeya laboratory: each
//! command runs one experiment and returns a [`report::Report`] of exact
//! comparisons, tables, traces and figures.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod svg;

pub use config::{Format, RunConfig};
pub use error::CliError;
pub use report::{Outcome, Report};
