//! The `ballmapper` command-line pipeline: ingest, preprocess, cover, graph, color, render.
//!
//! Each subcommand lives in [`commands`] as a function that can be called directly, which is how
//! the acceptance suite drives the pipeline.

pub mod commands;
pub mod config;
pub mod dataset;
pub mod error;
pub mod manifest;

pub use commands::{Cli, Command};
pub use error::{CliError, CliResult};
