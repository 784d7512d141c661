use std::path::PathBuf;

use ballmapper::{
    build_epsilon_net_with, build_graph, compute_coloration, GraphDocument, NeighborSearch,
    PointOrder,
};
use clap::Args;

use crate::config::{color_selections, ColorSelection, IngestArgs, RunConfig};
use crate::dataset::{prepare, Prepared, FAILED, Z_SCORE};
use crate::error::{write_file, CliError, CliResult};
use crate::manifest::Manifest;
use ballmapper::Aggregator;

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub ingest: IngestArgs,

    /// Ball radius, in normalized units unless --no-normalize.
    #[arg(long)]
    pub epsilon: Option<f64>,

    /// Seed for shuffling the greedy visiting order; input order when absent.
    #[arg(long)]
    pub order_seed: Option<u64>,

    /// linear | projection
    #[arg(long, default_value = "linear")]
    pub neighbor_search: NeighborSearch,

    /// Column to color by (repeatable).
    #[arg(long = "color-by")]
    pub color_by: Vec<String>,

    /// Aggregate for the matching --color-by (mean, count, std_dev, min, max, proportion).
    #[arg(long)]
    pub aggregate: Vec<String>,

    /// Graph JSON output path.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Manifest output path (default: <out>.manifest.json).
    #[arg(long)]
    pub manifest_out: Option<PathBuf>,

    /// Replay the build recorded in this manifest.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

impl BuildArgs {
    /// The run configuration, from the replayed manifest or the flags.
    pub fn run_config(&self) -> CliResult<(RunConfig, Option<Manifest>)> {
        if let Some(path) = &self.manifest {
            let manifest = Manifest::read(path)?;
            let mut config = manifest.config.clone();
            if let Some(out) = &self.out {
                config.output = out.clone();
            }
            return Ok((config, Some(manifest)));
        }
        let epsilon = self
            .epsilon
            .ok_or_else(|| CliError::config("--epsilon is required"))?;
        let output = self
            .out
            .clone()
            .ok_or_else(|| CliError::config("--out is required"))?;
        Ok((
            RunConfig {
                ingest: self.ingest.clone(),
                epsilon,
                order_seed: self.order_seed,
                neighbor_search: self.neighbor_search,
                colorations: color_selections(&self.color_by, &self.aggregate)?,
                output,
            },
            None,
        ))
    }
}

/// Colorations stored by default: mean Z-score and failure proportion on Altman axes.
fn default_selections(prepared: &Prepared) -> Vec<ColorSelection> {
    if !prepared.dataset.altman_axes {
        return Vec::new();
    }
    vec![
        ColorSelection {
            column: Z_SCORE.into(),
            aggregate: Aggregator::Mean,
        },
        ColorSelection {
            column: FAILED.into(),
            aggregate: Aggregator::Proportion,
        },
    ]
}

pub(crate) fn add_colorations(
    doc: &mut GraphDocument,
    graph: &ballmapper::BallMapperGraph,
    prepared: &Prepared,
    selections: &[ColorSelection],
) -> CliResult<()> {
    for sel in selections {
        let outcome = prepared.outcomes.get(&sel.column).ok_or_else(|| {
            let known: Vec<&str> = prepared.outcomes.keys().map(String::as_str).collect();
            CliError::config(format!(
                "missing column `{}` for coloring (available: {})",
                sel.column,
                known.join(", ")
            ))
        })?;
        let col = compute_coloration(graph, &sel.name(), outcome, sel.aggregate)?;
        doc.add_coloration(&col)?;
    }
    Ok(())
}

/// Runs the pipeline for `config` and returns the graph document and its manifest without
/// writing anything.
pub fn build_document(config: &RunConfig) -> CliResult<(GraphDocument, Manifest)> {
    config.validate()?;
    let prepared = prepare(&config.ingest)?;
    let cloud = &prepared.cloud;
    let order = PointOrder::from_seed(cloud.len(), config.order_seed);
    let net = build_epsilon_net_with(cloud, config.epsilon, &order, config.neighbor_search)?;
    let graph = build_graph(&net);

    let mut doc = GraphDocument::new(&graph, cloud, prepared.preprocessing.clone())?;
    let mut selections = default_selections(&prepared);
    selections.extend(config.colorations.iter().cloned());
    add_colorations(&mut doc, &graph, &prepared, &selections)?;

    let manifest = Manifest {
        version: ballmapper::VERSION.to_string(),
        config: config.clone(),
        input_sha256: prepared.dataset.input_sha256.clone(),
        input_rows: prepared.dataset.input_rows,
        dropped_rows: prepared.dataset.dropped,
        points: cloud.len(),
        balls: graph.vertex_count(),
        edges: graph.edge_count(),
        cloud_hash: graph.provenance().cloud_hash.clone(),
    };
    Ok((doc, manifest))
}

/// Builds and writes the graph JSON. When replaying, the input must hash as recorded.
pub fn cmd_build(config: &RunConfig, replaying: Option<&Manifest>) -> CliResult<Manifest> {
    let (doc, manifest) = build_document(config)?;
    if let Some(old) = replaying {
        if old.input_sha256 != manifest.input_sha256 {
            return Err(CliError::config(format!(
                "input {} changed since the manifest was written",
                config.ingest.input_path()?.display()
            )));
        }
    }
    write_file(&config.output, doc.to_json()?)?;
    Ok(manifest)
}

pub(super) fn run(args: &BuildArgs) -> CliResult<()> {
    let (config, replaying) = args.run_config()?;
    let manifest = cmd_build(&config, replaying.as_ref())?;
    let manifest_path = args.manifest_out.clone().unwrap_or_else(|| {
        let mut p = config.output.clone().into_os_string();
        p.push(".manifest.json");
        PathBuf::from(p)
    });
    // a replay leaves the original manifest alone unless asked otherwise
    if replaying.is_none() || args.manifest_out.is_some() {
        manifest.write(&manifest_path)?;
    }
    eprintln!(
        "{} points ({} dropped) -> {} balls, {} edges at epsilon {}; wrote {}",
        manifest.points,
        manifest.dropped_rows,
        manifest.balls,
        manifest.edges,
        config.epsilon,
        config.output.display()
    );
    Ok(())
}
