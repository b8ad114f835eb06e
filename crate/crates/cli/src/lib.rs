//! Configuration parsing, run orchestration and file output for the `simulate` binary.

pub mod config;
pub mod output;
pub mod plot;
pub mod scenario;
