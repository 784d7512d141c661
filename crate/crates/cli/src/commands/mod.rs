//! Subcommands.

mod build;
mod color;
mod locate;
mod render;
mod stats;
mod synth;

pub use build::{build_document, cmd_build, BuildArgs};
pub use color::{cmd_color, ColorArgs};
pub use locate::{locate_firm, locate_point, BallHit, LocateArgs, LocateReport, Neighbor};
pub use render::{render_document, OutputFormat, RenderArgs, RenderOptions};
pub use stats::{stats_report, StatsArgs, StatsFormat, StatsReport};
pub use synth::{cmd_synth, SynthArgs};

use clap::{Parser, Subcommand};

use crate::error::CliResult;

#[derive(Debug, Parser)]
#[command(name = "ballmapper", version, about = "Ball Mapper graphs of firm ratio clouds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Summary statistics, correlations and per-year failure rates.
    Stats(StatsArgs),
    /// Build the ε-net graph and write the graph JSON plus a run manifest.
    Build(BuildArgs),
    /// Add colorations to an existing graph JSON.
    Color(ColorArgs),
    /// Lay out a graph JSON and emit SVG, DOT or GraphML.
    Render(RenderArgs),
    /// Place a firm (or raw point) on a built graph.
    Locate(LocateArgs),
    /// Generate a synthetic firm sample.
    Synth(SynthArgs),
}

pub fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Stats(args) => stats::run(&args),
        Command::Build(args) => build::run(&args),
        Command::Color(args) => color::run(&args),
        Command::Render(args) => render::run(&args),
        Command::Locate(args) => locate::run(&args),
        Command::Synth(args) => synth::run(&args),
    }
}

/// Writes to a file, or to stdout when no path is given.
pub(crate) fn emit(out: Option<&std::path::Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => crate::error::write_file(p, text),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| crate::CliError::Runtime(e.to_string()))
        }
    }
}
