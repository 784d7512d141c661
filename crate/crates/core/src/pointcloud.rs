//! The point cloud and its per-axis preprocessing.
//!
//! Points keep their input row order for their whole lifetime: index `i` of a cloud, of every
//! preprocessed copy of it, and of every per-point outcome column refers to the same input row.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// An ordered set of `d`-dimensional points with named axes.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<Vec<f64>>,
    axis_names: Vec<String>,
    normalized: bool,
}

impl PointCloud {
    /// Builds a cloud, checking that every point has one finite coordinate per axis.
    pub fn new(points: Vec<Vec<f64>>, axis_names: Vec<String>) -> Result<Self> {
        let dim = axis_names.len();
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("point cloud"));
            }
        }
        Ok(Self {
            points,
            axis_names,
            normalized: false,
        })
    }

    /// Builds a cloud from columns of equal length.
    pub fn from_columns(columns: &[Vec<f64>], axis_names: Vec<String>) -> Result<Self> {
        if columns.len() != axis_names.len() {
            return Err(Error::DimensionMismatch {
                expected: axis_names.len(),
                found: columns.len(),
            });
        }
        let n = columns.first().map_or(0, Vec::len);
        if let Some(bad) = columns.iter().find(|c| c.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        let points = (0..n)
            .map(|i| columns.iter().map(|c| c[i]).collect())
            .collect();
        Self::new(points, axis_names)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of axes.
    pub fn dim(&self) -> usize {
        self.axis_names.len()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn axis_names(&self) -> &[String] {
        &self.axis_names
    }

    /// Whether min-max normalization has been applied.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn column(&self, axis: usize) -> Vec<f64> {
        self.points.iter().map(|p| p[axis]).collect()
    }

    /// The sub-cloud made of the given rows, in the given order.
    pub fn select(&self, rows: &[usize]) -> Self {
        Self {
            points: rows.iter().map(|&i| self.points[i].clone()).collect(),
            axis_names: self.axis_names.clone(),
            normalized: self.normalized,
        }
    }

    /// SHA-256 over the dimension and the exact bit patterns of all coordinates.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update((self.dim() as u64).to_le_bytes());
        hasher.update((self.len() as u64).to_le_bytes());
        for p in &self.points {
            for v in p {
                hasher.update(v.to_bits().to_le_bytes());
            }
        }
        hex::encode(hasher.finalize())
    }

    fn ensure_nonempty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::EmptyInput)
        } else {
            Ok(())
        }
    }
}

/// Euclidean distance between two points of equal dimension.
pub fn euclidean_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(distance(a, b))
}

/// Unchecked distance used in the hot loops. Callers guarantee equal lengths.
///
/// The per-axis difference is always taken as `a - b`; the neighbor search relies on this to
/// bound distances by a single axis difference without any rounding discrepancy.
#[inline]
pub(crate) fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// Per-axis clamp bounds produced by [`winsorize`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WinsorBounds {
    pub lower_pct: f64,
    pub upper_pct: f64,
    /// `(low, high)` clamp values per axis.
    pub bounds: Vec<(f64, f64)>,
}

impl WinsorBounds {
    /// Clamps a point into the stored bounds.
    pub fn apply(&self, point: &[f64]) -> Result<Vec<f64>> {
        if point.len() != self.bounds.len() {
            return Err(Error::DimensionMismatch {
                expected: self.bounds.len(),
                found: point.len(),
            });
        }
        Ok(point
            .iter()
            .zip(&self.bounds)
            .map(|(&v, &(lo, hi))| v.clamp(lo, hi))
            .collect())
    }
}

/// Nearest-rank percentile of an ascending slice: the value at 1-indexed rank `ceil(p/100 * n)`,
/// with rank 0 promoted to 1.
pub fn nearest_rank_percentile(sorted: &[f64], pct: f64) -> f64 {
    let n = sorted.len();
    let rank = ((pct / 100.0) * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

/// Clamps every axis into its `[P(lower_pct), P(upper_pct)]` nearest-rank percentile range.
pub fn winsorize(cloud: &PointCloud, lower_pct: f64, upper_pct: f64) -> Result<PointCloud> {
    winsorize_with_bounds(cloud, lower_pct, upper_pct).map(|(c, _)| c)
}

/// [`winsorize`], also returning the clamp values so they can be applied to new points.
pub fn winsorize_with_bounds(
    cloud: &PointCloud,
    lower_pct: f64,
    upper_pct: f64,
) -> Result<(PointCloud, WinsorBounds)> {
    cloud.ensure_nonempty()?;
    let valid = lower_pct.is_finite()
        && upper_pct.is_finite()
        && 0.0 <= lower_pct
        && lower_pct < upper_pct
        && upper_pct <= 100.0;
    if !valid {
        return Err(Error::InvalidBounds {
            lower: lower_pct,
            upper: upper_pct,
        });
    }

    let bounds: Vec<(f64, f64)> = (0..cloud.dim())
        .map(|axis| {
            let mut col = cloud.column(axis);
            col.sort_by(f64::total_cmp);
            (
                nearest_rank_percentile(&col, lower_pct),
                nearest_rank_percentile(&col, upper_pct),
            )
        })
        .collect();
    let bounds = WinsorBounds {
        lower_pct,
        upper_pct,
        bounds,
    };

    let points = cloud
        .points
        .iter()
        .map(|p| bounds.apply(p))
        .collect::<Result<Vec<_>>>()?;
    Ok((
        PointCloud {
            points,
            axis_names: cloud.axis_names.clone(),
            normalized: cloud.normalized,
        },
        bounds,
    ))
}

/// Per-axis affine map onto `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationParams {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl NormalizationParams {
    /// Maps a point with the stored per-axis ranges. Constant axes map to 0.
    pub fn apply(&self, point: &[f64]) -> Result<Vec<f64>> {
        if point.len() != self.min.len() {
            return Err(Error::DimensionMismatch {
                expected: self.min.len(),
                found: point.len(),
            });
        }
        Ok(point
            .iter()
            .zip(self.min.iter().zip(&self.max))
            .map(|(&v, (&lo, &hi))| if hi > lo { (v - lo) / (hi - lo) } else { 0.0 })
            .collect())
    }

    /// Axes whose range is empty.
    pub fn constant_axes(&self) -> Vec<usize> {
        self.min
            .iter()
            .zip(&self.max)
            .enumerate()
            .filter(|(_, (lo, hi))| lo >= hi)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Min-max normalization of every axis onto `[0, 1]`.
pub fn normalize_minmax(cloud: &PointCloud) -> Result<PointCloud> {
    normalize_with_params(cloud).map(|(c, _)| c)
}

/// [`normalize_minmax`], also returning the per-axis ranges used.
///
/// A constant axis has no range to divide by; every point gets 0.0 on it and a warning is logged.
pub fn normalize_with_params(cloud: &PointCloud) -> Result<(PointCloud, NormalizationParams)> {
    cloud.ensure_nonempty()?;
    let dim = cloud.dim();
    let mut min = vec![f64::INFINITY; dim];
    let mut max = vec![f64::NEG_INFINITY; dim];
    for p in &cloud.points {
        for (j, &v) in p.iter().enumerate() {
            min[j] = min[j].min(v);
            max[j] = max[j].max(v);
        }
    }
    let params = NormalizationParams { min, max };
    for axis in params.constant_axes() {
        log::warn!(
            "axis `{}` is constant; normalized to 0.0",
            cloud.axis_names[axis]
        );
    }
    let points = cloud
        .points
        .iter()
        .map(|p| params.apply(p))
        .collect::<Result<Vec<_>>>()?;
    Ok((
        PointCloud {
            points,
            axis_names: cloud.axis_names.clone(),
            normalized: true,
        },
        params,
    ))
}

/// Descriptive statistics of one axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisStats {
    pub mean: f64,
    /// Sample standard deviation (`n - 1` denominator); 0 for a single value.
    pub std_dev: f64,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl AxisStats {
    /// Statistics of a nonempty slice.
    pub fn of(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        let n = values.len();
        let (min, max) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            });
        // rounding can push the mean of near-constant data a hair outside [min, max]
        let mean = (values.iter().sum::<f64>() / n as f64).clamp(min, max);
        let std_dev = if n > 1 {
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            (ss / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Ok(Self {
            mean,
            std_dev,
            min,
            max,
            count: n,
        })
    }
}

/// Per-axis summary statistics.
pub fn summary_stats(cloud: &PointCloud) -> Result<Vec<AxisStats>> {
    cloud.ensure_nonempty()?;
    (0..cloud.dim())
        .map(|axis| AxisStats::of(&cloud.column(axis)))
        .collect()
}

/// Per-axis statistics for each group label (e.g. fiscal year), groups in ascending order.
pub fn summary_by_group(
    cloud: &PointCloud,
    groups: &[i64],
) -> Result<BTreeMap<i64, Vec<AxisStats>>> {
    cloud.ensure_nonempty()?;
    if groups.len() != cloud.len() {
        return Err(Error::LengthMismatch {
            expected: cloud.len(),
            found: groups.len(),
        });
    }
    let mut rows: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, &g) in groups.iter().enumerate() {
        rows.entry(g).or_default().push(i);
    }
    rows.into_iter()
        .map(|(g, idx)| Ok((g, summary_stats(&cloud.select(&idx))?)))
        .collect()
}

/// A labeled Pearson correlation matrix. Entries involving a zero-variance column are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    pub values: Vec<Vec<Option<f64>>>,
}

impl CorrelationMatrix {
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.values[i][j]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// Pearson correlations over all axes of the cloud followed by the labeled extra columns.
///
/// Computed as a rescaled covariance matrix, so the defined block is positive semidefinite up to
/// rounding.
pub fn correlation_matrix(
    cloud: &PointCloud,
    extra_columns: &[(&str, &[f64])],
) -> Result<CorrelationMatrix> {
    let n = cloud.len();
    if n < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: n,
        });
    }
    let mut labels: Vec<String> = cloud.axis_names.clone();
    let mut columns: Vec<Vec<f64>> = (0..cloud.dim()).map(|j| cloud.column(j)).collect();
    for (label, col) in extra_columns {
        if col.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: col.len(),
            });
        }
        if col.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("correlation column"));
        }
        labels.push((*label).to_string());
        columns.push(col.to_vec());
    }

    let centered: Vec<Vec<f64>> = columns
        .iter()
        .map(|c| {
            let mean = c.iter().sum::<f64>() / n as f64;
            c.iter().map(|v| v - mean).collect()
        })
        .collect();
    let k = centered.len();
    let mut cov = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let s: f64 = centered[i].iter().zip(&centered[j]).map(|(a, b)| a * b).sum();
            cov[i][j] = s;
            cov[j][i] = s;
        }
    }
    // a column is degenerate when all its values coincide
    let degenerate: Vec<bool> = columns
        .iter()
        .zip(&cov)
        .enumerate()
        .map(|(i, (c, row))| c.iter().all(|&v| v == c[0]) || row[i] <= 0.0)
        .collect();

    let values = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    if degenerate[i] || degenerate[j] {
                        None
                    } else if i == j {
                        Some(1.0)
                    } else {
                        let r = cov[i][j] / (cov[i][i] * cov[j][j]).sqrt();
                        Some(r.clamp(-1.0, 1.0))
                    }
                })
                .collect()
        })
        .collect();
    Ok(CorrelationMatrix { labels, values })
}
