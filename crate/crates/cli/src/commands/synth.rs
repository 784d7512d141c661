use std::fs::File;
use std::path::PathBuf;

use ballmapper::synthdata::{generate, write_ratio_csv, write_raw_csv, ScenarioSpec};
use clap::Args;

use crate::error::{read_file, CliError, CliResult};

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Scenario JSON (default: the built-in two-cluster scenario).
    #[arg(long)]
    pub spec: Option<PathBuf>,

    /// Overrides the scenario's seed.
    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long)]
    pub out: PathBuf,

    /// Write raw accounting fields instead of ratios to --out.
    #[arg(long)]
    pub raw_fields: bool,

    /// Also write the ratio-level CSV here.
    #[arg(long)]
    pub ratios_out: Option<PathBuf>,
}

fn create(path: &PathBuf) -> CliResult<File> {
    File::create(path).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

/// Generates the sample and writes the requested CSVs. Returns the row count.
pub fn cmd_synth(args: &SynthArgs) -> CliResult<usize> {
    let spec = match &args.spec {
        Some(p) => serde_json::from_str(&read_file(p)?)?,
        None => ScenarioSpec::two_cluster_default(),
    };
    let seed = args.seed.or(spec.seed).unwrap_or(0);
    let rows = generate(&spec, seed)?;
    if args.raw_fields {
        write_raw_csv(&rows, create(&args.out)?)?;
    } else {
        write_ratio_csv(&rows, create(&args.out)?)?;
    }
    if let Some(p) = &args.ratios_out {
        write_ratio_csv(&rows, create(p)?)?;
    }
    Ok(rows.len())
}

pub(super) fn run(args: &SynthArgs) -> CliResult<()> {
    let n = cmd_synth(args)?;
    eprintln!("wrote {n} rows to {}", args.out.display());
    Ok(())
}
