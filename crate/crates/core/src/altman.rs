//! Altman ratios, the failure flag, the Z-score and its zones.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};

/// Raw accounting fields of one firm-year, named as in Compustat.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirmRecord {
    /// current assets
    pub act: f64,
    /// current liabilities
    pub lct: f64,
    /// total assets
    pub at: f64,
    /// retained earnings
    pub re: f64,
    /// net income
    pub ni: f64,
    /// interest paid
    pub xint: f64,
    /// tax paid
    pub txt: f64,
    /// shares outstanding
    pub csho: f64,
    /// share price at fiscal year end
    pub prcc_f: f64,
    /// total liabilities
    pub tl: f64,
    /// total sales
    pub sale: f64,
    /// Deletion reason code, if the firm left the database.
    #[serde(default)]
    pub delrsn: Option<u32>,
    #[serde(default)]
    pub fiscal_year: i32,
}

impl FirmRecord {
    /// Field names in declaration order, excluding `delrsn` and `fiscal_year`.
    pub const FIELDS: [&'static str; 11] = [
        "act", "lct", "at", "re", "ni", "xint", "txt", "csho", "prcc_f", "tl", "sale",
    ];

    pub fn fields(&self) -> [f64; 11] {
        [
            self.act, self.lct, self.at, self.re, self.ni, self.xint, self.txt, self.csho,
            self.prcc_f, self.tl, self.sale,
        ]
    }

    /// Builds a record from the eleven monetary fields in [`FirmRecord::FIELDS`] order.
    pub fn from_fields(fields: [f64; 11], delrsn: Option<u32>, fiscal_year: i32) -> Self {
        let [act, lct, at, re, ni, xint, txt, csho, prcc_f, tl, sale] = fields;
        Self {
            act,
            lct,
            at,
            re,
            ni,
            xint,
            txt,
            csho,
            prcc_f,
            tl,
            sale,
            delrsn,
            fiscal_year,
        }
    }
}

/// Liquidity, profitability, productivity, leverage and asset turnover, plus the failure flag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioVector {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
    pub x5: f64,
    pub failed: bool,
}

impl RatioVector {
    pub const AXIS_NAMES: [&'static str; 5] = ["x1", "x2", "x3", "x4", "x5"];

    pub fn new(ratios: [f64; 5], failed: bool) -> Self {
        let [x1, x2, x3, x4, x5] = ratios;
        Self {
            x1,
            x2,
            x3,
            x4,
            x5,
            failed,
        }
    }

    pub fn ratios(&self) -> [f64; 5] {
        [self.x1, self.x2, self.x3, self.x4, self.x5]
    }
}

/// Why a record could not be turned into ratios.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatioError {
    #[error("missing or non-finite field `{0}`")]
    Missing(&'static str),
    #[error("denominator `{0}` must be positive")]
    NonPositiveDenominator(&'static str),
}

/// The five Altman ratios:
/// `x1 = (act - lct)/at`, `x2 = re/at`, `x3 = (ni + xint + txt)/at`, `x4 = csho*prcc_f/tl`,
/// `x5 = sale/at`. The failure flag uses the default failure codes.
pub fn compute_ratios(record: &FirmRecord) -> Result<RatioVector, RatioError> {
    compute_ratios_with(record, &FailureCodes::default())
}

pub fn compute_ratios_with(
    record: &FirmRecord,
    codes: &FailureCodes,
) -> Result<RatioVector, RatioError> {
    if let Some(i) = record.fields().iter().position(|v| !v.is_finite()) {
        return Err(RatioError::Missing(FirmRecord::FIELDS[i]));
    }
    if record.at <= 0.0 {
        return Err(RatioError::NonPositiveDenominator("at"));
    }
    if record.tl <= 0.0 {
        return Err(RatioError::NonPositiveDenominator("tl"));
    }
    let at = record.at;
    Ok(RatioVector {
        x1: (record.act - record.lct) / at,
        x2: record.re / at,
        x3: (record.ni + record.xint + record.txt) / at,
        x4: (record.csho * record.prcc_f) / record.tl,
        x5: record.sale / at,
        failed: failure_flag(record, codes),
    })
}

/// Deletion-reason codes that count as failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureCodes(pub BTreeSet<u32>);

impl Default for FailureCodes {
    /// Bankruptcy (02) and liquidation (03).
    fn default() -> Self {
        Self(BTreeSet::from([2, 3]))
    }
}

impl FailureCodes {
    pub fn contains(&self, code: u32) -> bool {
        self.0.contains(&code)
    }
}

impl FromStr for FailureCodes {
    type Err = Error;

    /// Comma-separated codes; leading zeros are ignored, so `02,03` and `2,3` agree.
    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|c| {
                c.trim().parse::<u32>().map_err(|_| Error::Parse {
                    format: "failure codes",
                    message: format!("`{c}` is not a code"),
                })
            })
            .collect::<Result<BTreeSet<_>>>()
            .map(Self)
    }
}

/// True iff the record's deletion reason is one of `codes`. No deletion reason means no failure.
pub fn failure_flag(record: &FirmRecord, codes: &FailureCodes) -> bool {
    record.delrsn.is_some_and(|c| codes.contains(c))
}

/// A linear score over the five ratios.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZScoreModel {
    pub coefficients: [f64; 5],
}

impl ZScoreModel {
    /// Altman (1968): `Z = 0.012 X1 + 0.014 X2 + 0.033 X3 + 0.006 X4 + 0.999 X5`.
    pub const ALTMAN_1968: ZScoreModel = ZScoreModel {
        coefficients: [0.012, 0.014, 0.033, 0.006, 0.999],
    };

    pub fn score(&self, ratios: &[f64; 5]) -> Result<f64> {
        if ratios.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("ratio vector"));
        }
        Ok(self
            .coefficients
            .iter()
            .zip(ratios)
            .map(|(c, x)| c * x)
            .sum())
    }
}

impl Default for ZScoreModel {
    fn default() -> Self {
        Self::ALTMAN_1968
    }
}

/// Z-score under the original coefficients, applied to the ratios as given.
pub fn z_score(r: &RatioVector) -> Result<f64> {
    ZScoreModel::ALTMAN_1968.score(&r.ratios())
}

/// Lower edge of the grey zone.
pub const GREY_ZONE_LOW: f64 = 1.8;
/// Upper edge of the grey zone.
pub const GREY_ZONE_HIGH: f64 = 2.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Zone {
    Distress,
    Grey,
    Safe,
}

impl fmt::Display for Zone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Zone::Distress => "distress",
            Zone::Grey => "grey",
            Zone::Safe => "safe",
        })
    }
}

/// `z < 1.8` is distress, `z > 2.99` is safe, and both edges belong to grey.
///
/// Callers are expected to pass finite scores; NaN falls through to grey.
pub fn classify_zone(z: f64) -> Zone {
    if z < GREY_ZONE_LOW {
        Zone::Distress
    } else if z > GREY_ZONE_HIGH {
        Zone::Safe
    } else {
        Zone::Grey
    }
}
