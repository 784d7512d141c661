//! Loading a CSV into a point cloud with outcome columns, and the preprocessing shared by every
//! subcommand.

use std::collections::BTreeMap;

use ballmapper::altman::compute_ratios_with;
use ballmapper::ingest::Table;
use ballmapper::pointcloud::{normalize_with_params, winsorize_with_bounds};
use ballmapper::{FailureCodes, PointCloud, Preprocessing, RatioVector, ZScoreModel};
use sha2::{Digest, Sha256};

use crate::config::{IngestArgs, InputMode};
use crate::error::{read_file, CliError, CliResult};

/// Outcome column holding the 0/1 failure flag.
pub const FAILED: &str = "failed";
/// Outcome column holding the Altman Z-score.
pub const Z_SCORE: &str = "z_score";

/// Rows that survived ingestion.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub cloud: PointCloud,
    /// Per-point outcome columns by name.
    pub outcomes: BTreeMap<String, Vec<f64>>,
    pub years: Option<Vec<i64>>,
    pub input_rows: usize,
    pub dropped: usize,
    pub input_sha256: String,
    /// Whether the axes are the five Altman ratios.
    pub altman_axes: bool,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn load(args: &IngestArgs) -> CliResult<Dataset> {
    let path = args.input_path()?;
    let text = read_file(path)?;
    let input_sha256 = sha256_hex(text.as_bytes());
    let table = Table::from_reader(text.as_bytes())?;
    let year_col = table.has_column(&args.col_year).then_some(args.col_year.as_str());

    let mut ds = match args.mode {
        InputMode::Firm => load_firms(&table, args)?,
        InputMode::Ratios => {
            let axes: Vec<String> = if args.axes.is_empty() {
                RatioVector::AXIS_NAMES.iter().map(|s| s.to_string()).collect()
            } else {
                args.axes.clone()
            };
            if axes.len() != 5 {
                return Err(CliError::config("ratios mode needs exactly five axes"));
            }
            let mut extra = vec![args.failed_column.clone()];
            extra.extend(args.outcomes.iter().cloned());
            let mut ds = load_numeric(&table, &axes, &extra, year_col)?;
            // the failure column is stored under its canonical name
            let flags = ds.outcomes.remove(&args.failed_column).unwrap_or_default();
            let flags = flags.into_iter().map(|v| f64::from(u8::from(v != 0.0))).collect();
            ds.outcomes.insert(FAILED.into(), flags);
            ds.altman_axes = true;
            ds
        }
        InputMode::Generic => {
            if args.axes.is_empty() {
                return Err(CliError::config("generic mode needs --axes"));
            }
            load_numeric(&table, &args.axes, &args.outcomes, year_col)?
        }
    };
    ds.input_sha256 = input_sha256;
    if ds.cloud.is_empty() {
        return Err(CliError::config(format!(
            "no usable rows in {} ({} dropped)",
            path.display(),
            ds.dropped
        )));
    }
    if ds.dropped > 0 {
        log::warn!("dropped {} of {} rows with missing or invalid fields", ds.dropped, ds.input_rows);
    }
    Ok(ds)
}

fn load_firms(table: &Table, args: &IngestArgs) -> CliResult<Dataset> {
    let codes: FailureCodes = args.failure_codes.parse()?;
    let sel = table.firm_records(&args.firm_columns())?;
    let mut points = Vec::with_capacity(sel.records.len());
    let mut failed = Vec::with_capacity(sel.records.len());
    let mut years = Vec::with_capacity(sel.records.len());
    let mut rejected = 0;
    for rec in &sel.records {
        match compute_ratios_with(rec, &codes) {
            Ok(r) => {
                points.push(r.ratios().to_vec());
                failed.push(f64::from(u8::from(r.failed)));
                years.push(i64::from(rec.fiscal_year));
            }
            Err(e) => {
                log::debug!("rejected row: {e}");
                rejected += 1;
            }
        }
    }
    let names = RatioVector::AXIS_NAMES.iter().map(|s| s.to_string()).collect();
    Ok(Dataset {
        cloud: PointCloud::new(points, names)?,
        outcomes: BTreeMap::from([(FAILED.to_string(), failed)]),
        years: sel.has_year.then_some(years),
        input_rows: table.len(),
        dropped: sel.dropped + rejected,
        input_sha256: String::new(),
        altman_axes: true,
    })
}

fn load_numeric(
    table: &Table,
    axes: &[String],
    outcomes: &[String],
    year_col: Option<&str>,
) -> CliResult<Dataset> {
    let mut names: Vec<&str> = axes.iter().map(String::as_str).collect();
    names.extend(outcomes.iter().map(String::as_str));
    names.extend(year_col);
    let sel = table.numeric_columns(&names)?;
    let mut columns = sel.columns.into_iter();
    let axis_cols: Vec<Vec<f64>> = columns.by_ref().take(axes.len()).collect();
    let outcome_cols: BTreeMap<String, Vec<f64>> =
        outcomes.iter().cloned().zip(columns.by_ref().take(outcomes.len())).collect();
    let years = columns
        .next()
        .map(|c| c.into_iter().map(|y| y as i64).collect());
    Ok(Dataset {
        cloud: PointCloud::from_columns(&axis_cols, axes.to_vec())?,
        outcomes: outcome_cols,
        years,
        input_rows: table.len(),
        dropped: sel.dropped,
        input_sha256: String::new(),
        altman_axes: false,
    })
}

/// A dataset after winsorizing, year filtering and normalization.
#[derive(Debug, Clone)]
pub struct Prepared {
    /// The cloud the cover is built on.
    pub cloud: PointCloud,
    /// The same rows before normalization, in original units.
    pub analysis_cloud: PointCloud,
    /// Outcomes of the kept rows, including `z_score` for Altman axes and every axis in original
    /// units.
    pub outcomes: BTreeMap<String, Vec<f64>>,
    pub years: Option<Vec<i64>>,
    pub preprocessing: Preprocessing,
    pub dataset: Dataset,
}

/// Winsorizes the whole sample, then keeps the requested year, then normalizes what is left.
pub fn prepare(args: &IngestArgs) -> CliResult<Prepared> {
    let ds = load(args)?;
    let mut preprocessing = Preprocessing::default();

    let cloud = if args.no_winsorize {
        ds.cloud.clone()
    } else {
        let (c, bounds) = winsorize_with_bounds(&ds.cloud, args.winsorize_lower, args.winsorize_upper)?;
        preprocessing.winsorize = Some(bounds);
        c
    };

    let mut outcomes = ds.outcomes.clone();
    if ds.altman_axes {
        let z = cloud
            .points()
            .iter()
            .map(|p| ZScoreModel::ALTMAN_1968.score(&[p[0], p[1], p[2], p[3], p[4]]))
            .collect::<Result<Vec<_>, _>>()?;
        outcomes.insert(Z_SCORE.into(), z);
    }
    for (j, name) in cloud.axis_names().iter().enumerate() {
        outcomes.entry(name.clone()).or_insert_with(|| cloud.column(j));
    }

    let keep: Option<Vec<usize>> = match args.year {
        None => None,
        Some(y) => {
            let years = ds.years.as_ref().ok_or_else(|| {
                CliError::config(format!("missing column `{}` needed for --year", args.col_year))
            })?;
            Some((0..years.len()).filter(|&i| years[i] == y).collect())
        }
    };
    let (analysis_cloud, outcomes, years) = match &keep {
        None => (cloud, outcomes, ds.years.clone()),
        Some(rows) => {
            if rows.is_empty() {
                return Err(CliError::config(format!("no rows for year {}", args.year.unwrap())));
            }
            let outcomes = outcomes
                .into_iter()
                .map(|(k, v)| (k, rows.iter().map(|&i| v[i]).collect()))
                .collect();
            let years = ds.years.as_ref().map(|y| rows.iter().map(|&i| y[i]).collect());
            (cloud.select(rows), outcomes, years)
        }
    };

    let cloud = if args.no_normalize {
        analysis_cloud.clone()
    } else {
        let (c, params) = normalize_with_params(&analysis_cloud)?;
        preprocessing.normalization = Some(params);
        c
    };

    Ok(Prepared {
        cloud,
        analysis_cloud,
        outcomes,
        years,
        preprocessing,
        dataset: ds,
    })
}
