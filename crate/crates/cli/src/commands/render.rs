use std::path::PathBuf;

use ballmapper::render::{emit_dot, emit_graphml, emit_svg_with, layout_force_directed, SvgOptions};
use ballmapper::{Coloration, GraphDocument};
use clap::{Args, ValueEnum};

use super::emit;
use crate::dataset::Z_SCORE;
use crate::error::{read_file, CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Svg,
    Dot,
    Graphml,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Graph JSON produced by `build`.
    pub graph: PathBuf,

    #[arg(long, value_enum, default_value_t = OutputFormat::Svg)]
    pub format: OutputFormat,

    /// Layout seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Layout iterations.
    #[arg(long, default_value_t = 300)]
    pub iterations: usize,

    /// Draw the color legend (SVG).
    #[arg(long)]
    pub legend: bool,

    /// Stored coloration to draw (default: the mean Z-score if present, else the first stored).
    #[arg(long = "color-by")]
    pub color_by: Option<String>,

    /// Drop ball labels above this many balls (SVG).
    #[arg(long, default_value_t = 200)]
    pub label_max: usize,

    /// Output path (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    pub format: OutputFormat,
    pub seed: u64,
    pub iterations: usize,
    pub legend: bool,
    pub color_by: Option<String>,
    pub label_max: usize,
}

impl From<&RenderArgs> for RenderOptions {
    fn from(a: &RenderArgs) -> Self {
        Self {
            format: a.format,
            seed: a.seed,
            iterations: a.iterations,
            legend: a.legend,
            color_by: a.color_by.clone(),
            label_max: a.label_max,
        }
    }
}

fn pick_coloration(doc: &GraphDocument, name: Option<&str>) -> CliResult<Option<Coloration>> {
    match name {
        Some(n) => doc.coloration(n).map(Some).ok_or_else(|| {
            let known: Vec<&str> = doc.colorations.keys().map(String::as_str).collect();
            CliError::config(format!("no coloration `{n}` (stored: {})", known.join(", ")))
        }),
        None => {
            let preferred = format!("{Z_SCORE}:mean");
            Ok(doc
                .coloration(&preferred)
                .or_else(|| doc.colorations.keys().next().and_then(|k| doc.coloration(k))))
        }
    }
}

pub fn render_document(doc: &GraphDocument, opts: &RenderOptions) -> CliResult<String> {
    let graph = doc.to_graph()?;
    let coloration = pick_coloration(doc, opts.color_by.as_deref())?;
    Ok(match opts.format {
        OutputFormat::Svg => {
            let layout = layout_force_directed(&graph, opts.seed, opts.iterations);
            let svg_opts = SvgOptions {
                legend: opts.legend,
                label_max_vertices: opts.label_max,
                ..SvgOptions::default()
            };
            emit_svg_with(&graph, &layout, coloration.as_ref(), &svg_opts)
        }
        OutputFormat::Dot => emit_dot(&graph, coloration.as_ref()),
        OutputFormat::Graphml => emit_graphml(&graph, coloration.as_ref()),
    })
}

pub(super) fn run(args: &RenderArgs) -> CliResult<()> {
    let doc = GraphDocument::from_json(&read_file(&args.graph)?)?;
    let text = render_document(&doc, &RenderOptions::from(args))?;
    emit(args.out.as_deref(), &text)
}
