//! Command-line front end for the `v2x-secrecy` engines: JSON configs and
//! bundled presets, single evaluations, sweeps, simulation traces and
//! cross-engine validation, all written as CSV.

pub mod cli;
pub mod config;
pub mod eval;
pub mod output;
