//! Command-line driver and HTTP service for the fontsense pipeline.

pub mod args;
pub mod commands;
pub mod featurizer;
pub mod server;

pub use args::{Cli, Command};
pub use commands::run;
