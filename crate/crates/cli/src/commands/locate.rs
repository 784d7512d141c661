use std::fmt::Write;
use std::path::PathBuf;

use ballmapper::altman::compute_ratios;
use ballmapper::pointcloud::euclidean_distance;
use ballmapper::{classify_zone, FirmRecord, GraphDocument, RatioVector, ZScoreModel, Zone};
use clap::Args;
use serde::Serialize;

use super::emit;
use crate::dataset::Z_SCORE;
use crate::error::{read_file, CliError, CliResult};

#[derive(Debug, Args)]
pub struct LocateArgs {
    /// Graph JSON produced by `build`.
    pub graph: PathBuf,

    /// Firm record as JSON (raw accounting fields).
    #[arg(long, conflicts_with = "point", required_unless_present = "point")]
    pub firm: Option<PathBuf>,

    /// Point in original axis units, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub point: Option<Vec<f64>>,

    /// Stored coloration read as each ball's failure rate.
    #[arg(long, default_value = "failed:proportion")]
    pub failure_coloration: String,

    /// Stored coloration read as each ball's mean Z-score.
    #[arg(long, default_value = "z_score:mean")]
    pub score_coloration: String,

    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Neighbor {
    pub ball: usize,
    pub failure_proportion: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallHit {
    pub ball: usize,
    pub distance: f64,
    pub size: usize,
    pub failure_proportion: Option<f64>,
    pub mean_z: Option<f64>,
    /// Adjacent balls with a lower failure proportion, lowest first.
    pub safer_neighbors: Vec<Neighbor>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocateReport {
    /// The point in original units, before clamping.
    pub point: Vec<f64>,
    /// The point in the coordinates the graph was built in.
    pub transformed: Vec<f64>,
    /// Z-score of the clamped ratios, for Altman axes.
    pub z_score: Option<f64>,
    pub zone: Option<Zone>,
    /// Balls whose centers lie within epsilon, nearest first.
    pub balls: Vec<BallHit>,
}

impl LocateReport {
    pub fn is_covered(&self) -> bool {
        !self.balls.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let fmt = |v: Option<f64>| v.map_or("n/a".to_string(), |v| format!("{v:.3}"));
        if let (Some(z), Some(zone)) = (self.z_score, self.zone) {
            let _ = writeln!(out, "z-score {z:.3} ({zone})");
        }
        if !self.is_covered() {
            out.push_str("uncovered — outlier relative to build sample\n");
            return out;
        }
        for hit in &self.balls {
            let _ = writeln!(
                out,
                "ball {} (distance {:.4}, size {}): failure proportion {}, mean z {}",
                hit.ball,
                hit.distance,
                hit.size,
                fmt(hit.failure_proportion),
                fmt(hit.mean_z)
            );
            for n in &hit.safer_neighbors {
                let _ = writeln!(
                    out,
                    "  safer neighbor ball {}: failure proportion {:.3}",
                    n.ball, n.failure_proportion
                );
            }
        }
        out
    }
}

/// Places a point given in original axis units on the graph. The point is clamped with the
/// stored winsorization bounds and rescaled with the stored normalization.
pub fn locate_point(
    doc: &GraphDocument,
    point: &[f64],
    failure_coloration: &str,
    score_coloration: &str,
) -> CliResult<LocateReport> {
    if point.len() != doc.axis_names.len() {
        return Err(CliError::config(format!(
            "point has {} coordinates, graph has {} axes",
            point.len(),
            doc.axis_names.len()
        )));
    }
    let clamped = match &doc.preprocessing.winsorize {
        Some(w) => w.apply(point)?,
        None => point.to_vec(),
    };
    let transformed = doc.preprocessing.apply(point)?;

    let z_score = match <[f64; 5]>::try_from(clamped.as_slice()) {
        Ok(r) if is_altman(doc) => {
            Some(ZScoreModel::ALTMAN_1968.score(&r)?)
        }
        _ => None,
    };

    let failure = doc.colorations.get(failure_coloration);
    let score = doc.colorations.get(score_coloration);
    let adjacency = doc.to_graph()?.adjacency();

    let mut balls = Vec::new();
    for ball in &doc.balls {
        let d = euclidean_distance(&transformed, &ball.center)?;
        if d > doc.epsilon {
            continue;
        }
        let mut safer: Vec<Neighbor> = match failure {
            Some(f) => adjacency[ball.id]
                .iter()
                .filter(|&&n| f[n] < f[ball.id])
                .map(|&n| Neighbor {
                    ball: n,
                    failure_proportion: f[n],
                })
                .collect(),
            None => Vec::new(),
        };
        safer.sort_by(|a, b| {
            a.failure_proportion
                .total_cmp(&b.failure_proportion)
                .then(a.ball.cmp(&b.ball))
        });
        balls.push(BallHit {
            ball: ball.id,
            distance: d,
            size: ball.size,
            failure_proportion: failure.map(|f| f[ball.id]),
            mean_z: score.map(|s| s[ball.id]),
            safer_neighbors: safer,
        });
    }
    balls.sort_by(|a, b| a.distance.total_cmp(&b.distance).then(a.ball.cmp(&b.ball)));

    Ok(LocateReport {
        point: point.to_vec(),
        transformed,
        z_score,
        zone: z_score.map(classify_zone),
        balls,
    })
}

fn is_altman(doc: &GraphDocument) -> bool {
    doc.axis_names.iter().map(String::as_str).eq(RatioVector::AXIS_NAMES)
        || doc.colorations.keys().any(|k| k.starts_with(Z_SCORE))
}

/// Computes the firm's ratios, then places them with [`locate_point`].
pub fn locate_firm(
    doc: &GraphDocument,
    firm: &FirmRecord,
    failure_coloration: &str,
    score_coloration: &str,
) -> CliResult<LocateReport> {
    let ratios = compute_ratios(firm).map_err(|e| CliError::config(format!("firm record: {e}")))?;
    locate_point(doc, &ratios.ratios(), failure_coloration, score_coloration)
}

pub(super) fn run(args: &LocateArgs) -> CliResult<()> {
    let doc = GraphDocument::from_json(&read_file(&args.graph)?)?;
    let report = match (&args.firm, &args.point) {
        (Some(path), _) => {
            let firm: FirmRecord = serde_json::from_str(&read_file(path)?)?;
            locate_firm(&doc, &firm, &args.failure_coloration, &args.score_coloration)?
        }
        (None, Some(p)) => locate_point(&doc, p, &args.failure_coloration, &args.score_coloration)?,
        (None, None) => return Err(CliError::config("one of --firm or --point is required")),
    };
    let text = if args.json {
        let mut s = serde_json::to_string_pretty(&report)?;
        s.push('\n');
        s
    } else {
        report.to_text()
    };
    emit(None, &text)
}
