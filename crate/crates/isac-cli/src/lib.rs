//! Front end for `isac-core`: configuration, CSV output, parallel
//! Monte-Carlo and the `isac verify` property suite.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail range checks too

pub mod checks;
pub mod commands;
pub mod config;
pub mod csv;
pub mod error;
pub mod par_mc;

pub use commands::{run, Command, Output};
pub use config::{Preset, RunConfig};
pub use error::CliError;
