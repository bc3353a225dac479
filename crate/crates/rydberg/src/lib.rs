//! Parameter files, output tables, state sweeps and the command-line driver
//! on top of `rydberg_core`.

pub mod cli;
pub mod config;
pub mod output;
pub mod pipeline;
