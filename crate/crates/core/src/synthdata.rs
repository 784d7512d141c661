//! Synthetic firm samples with planted clusters in ratio space and per-cluster failure rates.
//!
//! Each row is drawn from a Gaussian around its cluster center, then raw accounting fields are
//! back-solved so that [`compute_ratios`](crate::altman::compute_ratios) recovers the drawn ratios.

use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::altman::{FirmRecord, RatioVector};
use crate::error::{Error, Result};

/// Market-value leverage and asset turnover cannot be negative; draws are floored here.
pub const MIN_X4: f64 = 0.01;
pub const MIN_X5: f64 = 0.001;

/// Deletion reasons written for failed rows.
const FAILURE_CODES: [u32; 2] = [2, 3];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSpec {
    /// Center in `(x1, .., x5)` ratio space.
    pub center: [f64; 5],
    /// Per-axis standard deviation.
    pub spread: [f64; 5],
    /// Exact number of rows drawn.
    pub count: usize,
    pub failure_probability: f64,
}

/// A list of clusters plus the fiscal years rows are spread over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    /// Used when the caller does not supply a seed.
    #[serde(default)]
    pub seed: Option<u64>,
    pub clusters: Vec<ClusterSpec>,
    #[serde(default = "default_years")]
    pub years: Vec<i32>,
}

fn default_years() -> Vec<i32> {
    vec![2015]
}

impl ScenarioSpec {
    /// 1000 firms: 600 in a distress cluster (mean Z about 0.8, 15% failing) and 400 in a safe
    /// cluster (mean Z about 3.35, none failing).
    pub fn two_cluster_default() -> Self {
        Self {
            seed: Some(7),
            clusters: vec![
                ClusterSpec {
                    center: [0.05, -0.20, -0.04, 0.9, 0.8],
                    spread: [0.08, 0.15, 0.05, 0.3, 0.15],
                    count: 600,
                    failure_probability: 0.15,
                },
                ClusterSpec {
                    center: [0.35, 0.30, 0.12, 6.0, 3.3],
                    spread: [0.08, 0.10, 0.04, 1.0, 0.15],
                    count: 400,
                    failure_probability: 0.0,
                },
            ],
            years: default_years(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if self.clusters.is_empty() {
            return bad("no clusters".into());
        }
        if self.years.is_empty() {
            return bad("no years".into());
        }
        for (i, c) in self.clusters.iter().enumerate() {
            if c.count == 0 {
                return bad(format!("cluster {i} has zero count"));
            }
            if !(0.0..=1.0).contains(&c.failure_probability) {
                return bad(format!("cluster {i} failure probability outside [0, 1]"));
            }
            if c.spread.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
                return bad(format!("cluster {i} spreads must be positive"));
            }
            if c.center.iter().any(|v| !v.is_finite()) {
                return bad(format!("cluster {i} center is not finite"));
            }
        }
        Ok(())
    }

    pub fn total_count(&self) -> usize {
        self.clusters.iter().map(|c| c.count).sum()
    }
}

/// One generated firm-year.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticRow {
    pub cluster: usize,
    pub ratios: RatioVector,
    pub firm: FirmRecord,
}

/// Draws the scenario. Row order is shuffled; the result depends only on `(spec, seed)`.
pub fn generate(spec: &ScenarioSpec, seed: u64) -> Result<Vec<SyntheticRow>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(spec.total_count());
    for (ci, cluster) in spec.clusters.iter().enumerate() {
        let normals: Vec<Normal<f64>> = cluster
            .center
            .iter()
            .zip(&cluster.spread)
            .map(|(&m, &s)| Normal::new(m, s).map_err(|e| Error::InvalidSpec(e.to_string())))
            .collect::<Result<_>>()?;
        for _ in 0..cluster.count {
            let mut x = [0.0; 5];
            for (v, n) in x.iter_mut().zip(&normals) {
                *v = n.sample(&mut rng);
            }
            x[3] = x[3].max(MIN_X4);
            x[4] = x[4].max(MIN_X5);
            let failed = rng.random_bool(cluster.failure_probability);
            let delrsn = failed.then(|| FAILURE_CODES[rng.random_range(0..FAILURE_CODES.len())]);
            let year = spec.years[rng.random_range(0..spec.years.len())];
            let firm = back_solve(&x, delrsn, year, &mut rng);
            rows.push(SyntheticRow {
                cluster: ci,
                ratios: RatioVector::new(x, failed),
                firm,
            });
        }
    }
    rows.shuffle(&mut rng);
    Ok(rows)
}

/// Raw fields whose ratios are `x`. Scale-setting fields are drawn at random.
fn back_solve(x: &[f64; 5], delrsn: Option<u32>, fiscal_year: i32, rng: &mut ChaCha8Rng) -> FirmRecord {
    let at = rng.random_range(50.0..5000.0);
    let lct = at * rng.random_range(0.05..0.4);
    let xint = at * rng.random_range(0.0..0.03);
    let txt = at * rng.random_range(0.0..0.05);
    let tl = at * rng.random_range(0.2..0.9);
    let prcc_f = rng.random_range(1.0..100.0);
    FirmRecord {
        act: lct + x[0] * at,
        lct,
        at,
        re: x[1] * at,
        ni: x[2] * at - xint - txt,
        xint,
        txt,
        csho: x[3] * tl / prcc_f,
        prcc_f,
        tl,
        sale: x[4] * at,
        delrsn,
        fiscal_year,
    }
}

/// Ratio-level CSV: `x1,x2,x3,x4,x5,failed,fyear,cluster`.
pub fn write_ratio_csv<W: Write>(rows: &[SyntheticRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["x1", "x2", "x3", "x4", "x5", "failed", "fyear", "cluster"])?;
    for row in rows {
        let mut rec: Vec<String> = row.ratios.ratios().iter().map(f64::to_string).collect();
        rec.push(u8::from(row.ratios.failed).to_string());
        rec.push(row.firm.fiscal_year.to_string());
        rec.push(row.cluster.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Raw-field CSV with Compustat column names plus `delrsn,fyear,cluster`.
pub fn write_raw_csv<W: Write>(rows: &[SyntheticRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = FirmRecord::FIELDS.to_vec();
    header.extend(["delrsn", "fyear", "cluster"]);
    w.write_record(&header)?;
    for row in rows {
        let mut rec: Vec<String> = row.firm.fields().iter().map(f64::to_string).collect();
        rec.push(row.firm.delrsn.map_or(String::new(), |c| format!("{c:02}")));
        rec.push(row.firm.fiscal_year.to_string());
        rec.push(row.cluster.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::altman::compute_ratios;

    fn one_cluster(count: usize, p: f64) -> ScenarioSpec {
        ScenarioSpec {
            seed: None,
            clusters: vec![ClusterSpec {
                center: [0.1, 0.1, 0.05, 2.0, 1.0],
                spread: [0.05; 5],
                count,
                failure_probability: p,
            }],
            years: vec![2014, 2015],
        }
    }

    #[test]
    fn failure_probability_extremes() {
        assert!(generate(&one_cluster(200, 0.0), 1).unwrap().iter().all(|r| !r.ratios.failed));
        assert!(generate(&one_cluster(200, 1.0), 1).unwrap().iter().all(|r| r.ratios.failed));
    }

    #[test]
    fn counts_are_exact() {
        let mut spec = ScenarioSpec::two_cluster_default();
        spec.clusters[0].count = 700;
        spec.clusters[1].count = 300;
        let rows = generate(&spec, 3).unwrap();
        assert_eq!(rows.len(), 1000);
        assert_eq!(rows.iter().filter(|r| r.cluster == 0).count(), 700);
    }

    #[test]
    fn deterministic_per_seed() {
        let spec = ScenarioSpec::two_cluster_default();
        assert_eq!(generate(&spec, 7).unwrap(), generate(&spec, 7).unwrap());
        assert_ne!(generate(&spec, 7).unwrap(), generate(&spec, 8).unwrap());
    }

    #[test]
    fn back_solved_fields_reproduce_ratios() {
        for row in generate(&ScenarioSpec::two_cluster_default(), 11).unwrap() {
            let r = compute_ratios(&row.firm).unwrap();
            for (a, b) in r.ratios().iter().zip(row.ratios.ratios()) {
                assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
            }
            assert_eq!(r.failed, row.ratios.failed);
        }
    }

    #[test]
    fn invalid_specs() {
        let mut s = one_cluster(0, 0.5);
        assert!(generate(&s, 0).is_err());
        s = one_cluster(10, 1.5);
        assert!(generate(&s, 0).is_err());
        s = one_cluster(10, 0.5);
        s.clusters[0].spread[2] = 0.0;
        assert!(generate(&s, 0).is_err());
        s = one_cluster(10, 0.5);
        s.clusters.clear();
        assert!(matches!(generate(&s, 0), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn spec_json_defaults() {
        let json = r#"{"clusters":[{"center":[0,0,0,1,1],"spread":[0.1,0.1,0.1,0.1,0.1],"count":5,"failure_probability":0.2}]}"#;
        let spec: ScenarioSpec = serde_json::from_str(json).unwrap();
        assert_eq!(spec.years, vec![2015]);
        assert_eq!(spec.seed, None);
    }

    #[test]
    fn csv_headers() {
        let rows = generate(&one_cluster(3, 1.0), 0).unwrap();
        let mut buf = Vec::new();
        write_raw_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("act,lct,at,re,ni,xint,txt,csho,prcc_f,tl,sale,delrsn,fyear,cluster\n"));
        assert!(text.lines().nth(1).unwrap().contains(",0"));
        let mut buf = Vec::new();
        write_ratio_csv(&rows, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("x1,x2,x3,x4,x5,failed,fyear,cluster\n"));
    }
}
