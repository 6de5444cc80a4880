//! Command-line front end: configuration, output files and subcommand backends.

pub mod commands;
pub mod config;
pub mod output;
pub mod validate;
