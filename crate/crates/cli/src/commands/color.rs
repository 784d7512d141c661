use std::path::PathBuf;

use ballmapper::GraphDocument;
use clap::Args;

use super::build::add_colorations;
use crate::config::{color_selections, ColorSelection, IngestArgs};
use crate::dataset::prepare;
use crate::error::{read_file, write_file, CliError, CliResult};
use crate::manifest::Manifest;

#[derive(Debug, Args)]
pub struct ColorArgs {
    /// Graph JSON to extend.
    pub graph: PathBuf,

    #[command(flatten)]
    pub ingest: IngestArgs,

    /// Take the ingestion settings from a build manifest instead of the flags.
    #[arg(long)]
    pub manifest: Option<PathBuf>,

    #[arg(long = "color-by", required = true)]
    pub color_by: Vec<String>,

    #[arg(long)]
    pub aggregate: Vec<String>,

    /// Output path (default: overwrite the input graph).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Adds colorations to a graph document. The input must preprocess to the exact cloud the graph
/// was built from.
pub fn cmd_color(
    doc: &mut GraphDocument,
    ingest: &IngestArgs,
    selections: &[ColorSelection],
) -> CliResult<()> {
    let prepared = prepare(ingest)?;
    if prepared.cloud.content_hash() != doc.provenance.cloud_hash {
        return Err(CliError::config(
            "input does not reproduce the cloud this graph was built from",
        ));
    }
    let graph = doc.to_graph()?;
    add_colorations(doc, &graph, &prepared, selections)
}

pub(super) fn run(args: &ColorArgs) -> CliResult<()> {
    let mut doc = GraphDocument::from_json(&read_file(&args.graph)?)?;
    let ingest = match &args.manifest {
        Some(m) => Manifest::read(m)?.config.ingest,
        None => args.ingest.clone(),
    };
    let selections = color_selections(&args.color_by, &args.aggregate)?;
    cmd_color(&mut doc, &ingest, &selections)?;
    write_file(args.out.as_ref().unwrap_or(&args.graph), doc.to_json()?)
}
