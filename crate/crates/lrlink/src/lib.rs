//! Command-line front end for `lrlink-core`: edge-list and dense-matrix
//! files, report formatting, and the `stats`, `predict`, `sweep` and `rpca`
//! commands.

pub mod cli;
pub mod io;
pub mod report;

pub use cli::{run, Cli, Outcome};
