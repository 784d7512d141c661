//! Command-line options that are also persisted in run manifests.

use std::path::PathBuf;

use ballmapper::ingest::FirmColumns;
use ballmapper::{Aggregator, NeighborSearch};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputMode {
    /// Raw accounting fields; the five Altman ratios are computed per row.
    #[default]
    Firm,
    /// Precomputed ratio columns plus a 0/1 failure column.
    Ratios,
    /// Any numeric columns named with --axes.
    Generic,
}

/// How a CSV becomes a point cloud.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct IngestArgs {
    /// Input CSV (header row required).
    #[arg(long)]
    pub input: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = InputMode::Firm)]
    pub mode: InputMode,

    /// Axis columns (generic mode; ratios mode defaults to x1..x5).
    #[arg(long, value_delimiter = ',')]
    pub axes: Vec<String>,

    /// Extra numeric columns carried along as outcomes.
    #[arg(long = "outcome")]
    pub outcomes: Vec<String>,

    /// 0/1 failure column in ratios mode.
    #[arg(long, default_value = "failed")]
    pub failed_column: String,

    #[arg(long, default_value = "act")]
    pub col_act: String,
    #[arg(long, default_value = "lct")]
    pub col_lct: String,
    #[arg(long, default_value = "at")]
    pub col_at: String,
    #[arg(long, default_value = "re")]
    pub col_re: String,
    #[arg(long, default_value = "ni")]
    pub col_ni: String,
    #[arg(long, default_value = "xint")]
    pub col_xint: String,
    #[arg(long, default_value = "txt")]
    pub col_txt: String,
    #[arg(long, default_value = "csho")]
    pub col_csho: String,
    #[arg(long, default_value = "prcc_f")]
    pub col_prcc_f: String,
    #[arg(long, default_value = "tl")]
    pub col_tl: String,
    #[arg(long, default_value = "sale")]
    pub col_sale: String,
    #[arg(long, default_value = "delrsn")]
    pub col_delrsn: String,
    /// Fiscal year column.
    #[arg(long, default_value = "fyear")]
    pub col_year: String,

    /// Deletion-reason codes counted as failure.
    #[arg(long, default_value = "02,03")]
    pub failure_codes: String,

    /// Keep only this fiscal year (after winsorizing the whole sample).
    #[arg(long)]
    pub year: Option<i64>,

    #[arg(long, default_value_t = 1.0)]
    pub winsorize_lower: f64,
    #[arg(long, default_value_t = 99.0)]
    pub winsorize_upper: f64,
    #[arg(long)]
    pub no_winsorize: bool,

    /// Skip min-max normalization of the axes.
    #[arg(long)]
    pub no_normalize: bool,
}

impl Default for IngestArgs {
    fn default() -> Self {
        let c = FirmColumns::default();
        Self {
            input: None,
            mode: InputMode::Firm,
            axes: Vec::new(),
            outcomes: Vec::new(),
            failed_column: "failed".into(),
            col_act: c.act,
            col_lct: c.lct,
            col_at: c.at,
            col_re: c.re,
            col_ni: c.ni,
            col_xint: c.xint,
            col_txt: c.txt,
            col_csho: c.csho,
            col_prcc_f: c.prcc_f,
            col_tl: c.tl,
            col_sale: c.sale,
            col_delrsn: c.delrsn,
            col_year: c.fiscal_year,
            failure_codes: "02,03".into(),
            year: None,
            winsorize_lower: 1.0,
            winsorize_upper: 99.0,
            no_winsorize: false,
            no_normalize: false,
        }
    }
}

impl IngestArgs {
    pub fn input_path(&self) -> CliResult<&PathBuf> {
        self.input
            .as_ref()
            .ok_or_else(|| CliError::config("--input is required"))
    }

    pub fn firm_columns(&self) -> FirmColumns {
        FirmColumns {
            act: self.col_act.clone(),
            lct: self.col_lct.clone(),
            at: self.col_at.clone(),
            re: self.col_re.clone(),
            ni: self.col_ni.clone(),
            xint: self.col_xint.clone(),
            txt: self.col_txt.clone(),
            csho: self.col_csho.clone(),
            prcc_f: self.col_prcc_f.clone(),
            tl: self.col_tl.clone(),
            sale: self.col_sale.clone(),
            delrsn: self.col_delrsn.clone(),
            fiscal_year: self.col_year.clone(),
        }
    }
}

/// One `--color-by` selection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorSelection {
    pub column: String,
    pub aggregate: Aggregator,
}

impl ColorSelection {
    pub fn name(&self) -> String {
        ballmapper::Coloration::default_name(&self.column, self.aggregate)
    }
}

/// Pairs `--color-by` columns with `--aggregate` functions by position; missing functions default
/// to the mean.
pub fn color_selections(columns: &[String], aggregates: &[String]) -> CliResult<Vec<ColorSelection>> {
    if aggregates.len() > columns.len() {
        return Err(CliError::config("more --aggregate than --color-by flags"));
    }
    columns
        .iter()
        .enumerate()
        .map(|(i, column)| {
            let aggregate = match aggregates.get(i) {
                Some(a) => a.parse::<Aggregator>()?,
                None => Aggregator::Mean,
            };
            Ok(ColorSelection {
                column: column.clone(),
                aggregate,
            })
        })
        .collect()
}

/// Everything needed to reproduce one graph build.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub ingest: IngestArgs,
    pub epsilon: f64,
    pub order_seed: Option<u64>,
    pub neighbor_search: NeighborSearch,
    pub colorations: Vec<ColorSelection>,
    pub output: PathBuf,
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(CliError::config(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.output.as_os_str().is_empty() {
            return Err(CliError::config("output path is empty"));
        }
        self.ingest.input_path()?;
        Ok(())
    }
}
