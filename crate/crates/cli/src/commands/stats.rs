use std::collections::BTreeMap;
use std::fmt::Write;

use ballmapper::pointcloud::{correlation_matrix, summary_by_group, summary_stats};
use ballmapper::{AxisStats, CorrelationMatrix};
use clap::{Args, ValueEnum};
use serde::Serialize;

use super::emit;
use crate::config::IngestArgs;
use crate::dataset::{prepare, FAILED};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StatsFormat {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub ingest: IngestArgs,

    #[arg(long, value_enum, default_value_t = StatsFormat::Text)]
    pub format: StatsFormat,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxisSummary {
    pub name: String,
    #[serde(flatten)]
    pub stats: AxisStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YearSummary {
    pub year: i64,
    pub count: usize,
    pub failures: Option<usize>,
    /// Failure percentage in `[0, 100]`.
    pub failure_pct: Option<f64>,
    pub axis_means: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsReport {
    pub rows_used: usize,
    pub rows_dropped: usize,
    /// Axes in original units after winsorizing.
    pub axes: Vec<AxisSummary>,
    pub correlation: CorrelationMatrix,
    pub years: Vec<YearSummary>,
}

/// Descriptive statistics of the winsorized (not normalized) sample.
pub fn stats_report(ingest: &IngestArgs) -> CliResult<StatsReport> {
    let prepared = prepare(ingest)?;
    let cloud = &prepared.analysis_cloud;
    let axes = cloud
        .axis_names()
        .iter()
        .cloned()
        .zip(summary_stats(cloud)?)
        .map(|(name, stats)| AxisSummary { name, stats })
        .collect();

    // outcome columns that are not copies of an axis
    let extra: Vec<(&str, &[f64])> = prepared
        .outcomes
        .iter()
        .filter(|(k, _)| !cloud.axis_names().contains(k))
        .map(|(k, v)| (k.as_str(), v.as_slice()))
        .collect();
    let correlation = correlation_matrix(cloud, &extra)?;

    let failed = prepared.outcomes.get(FAILED);
    let mut years = Vec::new();
    if let Some(ys) = &prepared.years {
        let mut rows: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, &y) in ys.iter().enumerate() {
            rows.entry(y).or_default().push(i);
        }
        let by_year = summary_by_group(cloud, ys)?;
        for (year, stats) in by_year {
            let idx = &rows[&year];
            let failures = failed.map(|f| idx.iter().filter(|&&i| f[i] != 0.0).count());
            years.push(YearSummary {
                year,
                count: idx.len(),
                failures,
                failure_pct: failures.map(|k| 100.0 * k as f64 / idx.len() as f64),
                axis_means: stats.iter().map(|s| s.mean).collect(),
            });
        }
    }

    Ok(StatsReport {
        rows_used: cloud.len(),
        rows_dropped: prepared.dataset.dropped,
        axes,
        correlation,
        years,
    })
}

fn corr_cell(v: Option<f64>) -> String {
    v.map_or("undefined".to_string(), |v| format!("{v:.3}"))
}

impl StatsReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "rows: {} used, {} dropped\n", self.rows_used, self.rows_dropped);
        let _ = writeln!(
            out,
            "{:<12} {:>12} {:>12} {:>12} {:>12}",
            "axis", "mean", "std_dev", "min", "max"
        );
        for a in &self.axes {
            let s = &a.stats;
            let _ = writeln!(
                out,
                "{:<12} {:>12.4} {:>12.4} {:>12.4} {:>12.4}",
                a.name, s.mean, s.std_dev, s.min, s.max
            );
        }

        out.push_str("\ncorrelation\n");
        let _ = write!(out, "{:<12}", "");
        for l in &self.correlation.labels {
            let _ = write!(out, " {l:>10}");
        }
        out.push('\n');
        for (i, l) in self.correlation.labels.iter().enumerate() {
            let _ = write!(out, "{l:<12}");
            for j in 0..self.correlation.labels.len() {
                let _ = write!(out, " {:>10}", corr_cell(self.correlation.get(i, j)));
            }
            out.push('\n');
        }

        if !self.years.is_empty() {
            out.push_str("\nper year\n");
            let _ = write!(out, "{:<6} {:>7} {:>9}", "year", "count", "failed%");
            for a in &self.axes {
                let _ = write!(out, " {:>10}", a.name);
            }
            out.push('\n');
            for y in &self.years {
                let pct = y.failure_pct.map_or("n/a".to_string(), |p| format!("{p:.2}"));
                let _ = write!(out, "{:<6} {:>7} {:>9}", y.year, y.count, pct);
                for m in &y.axis_means {
                    let _ = write!(out, " {m:>10.4}");
                }
                out.push('\n');
            }
        }
        out
    }

    /// Long format: `section,row,column,value`.
    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut rec = |r: [&str; 4]| w.write_record(r).map_err(|e| CliError::Runtime(e.to_string()));
        rec(["section", "row", "column", "value"])?;
        for a in &self.axes {
            let s = &a.stats;
            for (k, v) in [("mean", s.mean), ("std_dev", s.std_dev), ("min", s.min), ("max", s.max)] {
                rec(["summary", &a.name, k, &v.to_string()])?;
            }
            rec(["summary", &a.name, "count", &s.count.to_string()])?;
        }
        let labels = &self.correlation.labels;
        for (i, li) in labels.iter().enumerate() {
            for (j, lj) in labels.iter().enumerate() {
                let v = self.correlation.get(i, j).map_or("undefined".into(), |v| v.to_string());
                rec(["correlation", li, lj, &v])?;
            }
        }
        for y in &self.years {
            let year = y.year.to_string();
            rec(["year", &year, "count", &y.count.to_string()])?;
            if let Some(p) = y.failure_pct {
                rec(["year", &year, "failure_pct", &p.to_string()])?;
            }
            for (a, m) in self.axes.iter().zip(&y.axis_means) {
                rec(["year", &year, &a.name, &m.to_string()])?;
            }
        }
        let bytes = w.into_inner().map_err(|e| CliError::Runtime(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Runtime(e.to_string()))
    }
}

pub(super) fn run(args: &StatsArgs) -> CliResult<()> {
    let report = stats_report(&args.ingest)?;
    let text = match args.format {
        StatsFormat::Text => report.to_text(),
        StatsFormat::Csv => report.to_csv()?,
        StatsFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report)?;
            s.push('\n');
            s
        }
    };
    emit(None, &text)
}
