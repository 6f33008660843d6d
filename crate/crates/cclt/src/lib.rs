//! File formats, run configuration, threaded enumeration and the report
//! commands behind the `cclt` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod grid;
pub mod io;
pub mod parallel;
pub mod verify;

pub use config::RunConfig;
pub use error::{CliError, CliResult};
