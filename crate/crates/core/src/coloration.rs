//! Per-ball aggregates of an outcome column and their color scale.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bmgraph::BallMapperGraph;
use crate::error::{Error, Result};

/// How the outcome values of a ball's members are reduced to one number.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregator {
    #[default]
    Mean,
    Count,
    /// Sample standard deviation; 0 for a single member.
    StdDev,
    Min,
    Max,
    /// Fraction of members whose outcome is nonzero.
    Proportion,
}

impl Aggregator {
    pub const ALL: [Aggregator; 6] = [
        Aggregator::Mean,
        Aggregator::Count,
        Aggregator::StdDev,
        Aggregator::Min,
        Aggregator::Max,
        Aggregator::Proportion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Aggregator::Mean => "mean",
            Aggregator::Count => "count",
            Aggregator::StdDev => "std_dev",
            Aggregator::Min => "min",
            Aggregator::Max => "max",
            Aggregator::Proportion => "proportion",
        }
    }

    /// Applies the aggregator to a nonempty slice.
    pub fn apply(self, values: &[f64]) -> f64 {
        let n = values.len() as f64;
        match self {
            Aggregator::Mean => values.iter().sum::<f64>() / n,
            Aggregator::Count => n,
            Aggregator::StdDev => {
                if values.len() < 2 {
                    return 0.0;
                }
                let mean = values.iter().sum::<f64>() / n;
                let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
                (ss / (n - 1.0)).sqrt()
            }
            Aggregator::Min => values.iter().copied().fold(f64::INFINITY, f64::min),
            Aggregator::Max => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            Aggregator::Proportion => values.iter().filter(|&&v| v != 0.0).count() as f64 / n,
        }
    }
}

impl fmt::Display for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Aggregator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" | "average" => Ok(Aggregator::Mean),
            "count" => Ok(Aggregator::Count),
            "std_dev" | "std" | "sd" => Ok(Aggregator::StdDev),
            "min" => Ok(Aggregator::Min),
            "max" => Ok(Aggregator::Max),
            "proportion" => Ok(Aggregator::Proportion),
            other => Err(Error::UnknownAggregator(other.to_string())),
        }
    }
}

/// One value per ball.
#[derive(Debug, Clone, PartialEq)]
pub struct Coloration {
    pub name: String,
    pub aggregator: Aggregator,
    pub values: Vec<f64>,
}

impl Coloration {
    /// Rebuilds a coloration read back from a graph document. Names of the form
    /// `column:aggregator` recover their aggregator; anything else is taken as a mean.
    pub fn from_stored(name: &str, values: Vec<f64>) -> Self {
        let aggregator = name
            .rsplit_once(':')
            .and_then(|(_, agg)| agg.parse().ok())
            .unwrap_or_default();
        Self {
            name: name.to_string(),
            aggregator,
            values,
        }
    }

    /// The `column:aggregator` name used when storing colorations.
    pub fn default_name(column: &str, aggregator: Aggregator) -> String {
        format!("{column}:{aggregator}")
    }

    /// `(min, max)` of the values, or `None` when empty.
    pub fn range(&self) -> Option<(f64, f64)> {
        if self.values.is_empty() {
            return None;
        }
        Some(self.values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        }))
    }
}

/// Aggregates `outcome` (one value per point of the cloud) over the members of every ball.
///
/// A point lying in several balls contributes to each of them.
pub fn compute_coloration(
    graph: &BallMapperGraph,
    name: &str,
    outcome: &[f64],
    aggregator: Aggregator,
) -> Result<Coloration> {
    if outcome.len() != graph.point_count() {
        return Err(Error::LengthMismatch {
            expected: graph.point_count(),
            found: outcome.len(),
        });
    }
    if outcome.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("outcome column"));
    }
    let values = graph
        .balls()
        .par_iter()
        .map(|ball| {
            let member_values: Vec<f64> = ball.members.iter().map(|&i| outcome[i]).collect();
            aggregator.apply(&member_values)
        })
        .collect();
    Ok(Coloration {
        name: name.to_string(),
        aggregator,
        values,
    })
}

/// An sRGB color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    pub fn hex(self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.0, self.1, self.2)
    }

    fn lerp(self, other: Rgb, t: f64) -> Rgb {
        let mix = |a: u8, b: u8| (f64::from(a) + (f64::from(b) - f64::from(a)) * t).round() as u8;
        Rgb(mix(self.0, other.0), mix(self.1, other.1), mix(self.2, other.2))
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.hex())
    }
}

/// A piecewise-linear gradient through evenly spaced stops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorGradient {
    pub stops: Vec<Rgb>,
}

impl Default for ColorGradient {
    /// Red, yellow, green, blue, purple: low values red, high values purple.
    fn default() -> Self {
        Self {
            stops: vec![
                Rgb(0xd7, 0x30, 0x27),
                Rgb(0xfe, 0xe0, 0x8b),
                Rgb(0x1a, 0x98, 0x50),
                Rgb(0x45, 0x75, 0xb4),
                Rgb(0x76, 0x2a, 0x83),
            ],
        }
    }
}

impl ColorGradient {
    /// Color at position `t` in `[0, 1]` (clamped).
    pub fn at(&self, t: f64) -> Rgb {
        let segments = self.stops.len() - 1;
        if segments == 0 {
            return self.stops[0];
        }
        let pos = t.clamp(0.0, 1.0) * segments as f64;
        let k = (pos.floor() as usize).min(segments - 1);
        self.stops[k].lerp(self.stops[k + 1], pos - k as f64)
    }

    /// Maps values linearly from their `[min, max]` onto the gradient. A constant coloration maps
    /// every ball to the midpoint.
    pub fn map(&self, coloration: &Coloration) -> ColorMap {
        let (min, max) = coloration.range().unwrap_or((0.0, 0.0));
        let colors = coloration
            .values
            .iter()
            .map(|&v| {
                let t = if max > min { (v - min) / (max - min) } else { 0.5 };
                self.at(t)
            })
            .collect();
        ColorMap { colors, min, max }
    }
}

/// Per-ball colors plus the value range they span, for legends.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorMap {
    pub colors: Vec<Rgb>,
    pub min: f64,
    pub max: f64,
}

/// Colors a coloration with the default red-to-purple gradient.
pub fn color_scale_map(coloration: &Coloration) -> ColorMap {
    ColorGradient::default().map(coloration)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bmgraph::build_graph;
    use crate::cover::{build_epsilon_net, PointOrder};
    use crate::pointcloud::PointCloud;

    fn graph_of(values: &[f64], eps: f64) -> BallMapperGraph {
        let c = PointCloud::new(values.iter().map(|&v| vec![v]).collect(), vec!["x".into()]).unwrap();
        build_graph(&build_epsilon_net(&c, eps, &PointOrder::natural(c.len())).unwrap())
    }

    fn stored(values: &[f64]) -> Coloration {
        Coloration::from_stored("v", values.to_vec())
    }

    #[test]
    fn mean_of_one_ball() {
        let g = graph_of(&[0.0, 0.1, 0.2], 1.0);
        let c = compute_coloration(&g, "y", &[1.0, 2.0, 3.0], Aggregator::Mean).unwrap();
        assert_eq!(c.values, vec![2.0]);
    }

    #[test]
    fn proportion_of_flags() {
        let g = graph_of(&[0.0, 0.1, 0.2, 0.3], 1.0);
        let c = compute_coloration(&g, "f", &[0.0, 1.0, 1.0, 1.0], Aggregator::Proportion).unwrap();
        assert_eq!(c.values, vec![0.75]);
    }

    #[test]
    fn shared_point_counts_in_both_balls() {
        let g = graph_of(&[0.0, 0.4, 0.8], 0.5);
        let c = compute_coloration(&g, "y", &[0.0, 10.0, 0.0], Aggregator::Max).unwrap();
        assert_eq!(c.values, vec![10.0, 10.0]);
        let c = compute_coloration(&g, "y", &[0.0, 10.0, 0.0], Aggregator::Count).unwrap();
        assert_eq!(c.values, vec![2.0, 2.0]);
    }

    #[test]
    fn aggregators() {
        let v = [1.0, 2.0, 3.0, 6.0];
        assert_eq!(Aggregator::Mean.apply(&v), 3.0);
        assert_eq!(Aggregator::Count.apply(&v), 4.0);
        assert!((Aggregator::StdDev.apply(&v) - (14.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(Aggregator::StdDev.apply(&[5.0]), 0.0);
        assert_eq!(Aggregator::Min.apply(&v), 1.0);
        assert_eq!(Aggregator::Max.apply(&v), 6.0);
        for a in Aggregator::ALL {
            assert_eq!(a.name().parse::<Aggregator>().unwrap(), a);
        }
    }

    #[test]
    fn errors() {
        let g = graph_of(&[0.0, 0.4], 0.5);
        assert!(matches!(
            compute_coloration(&g, "y", &[1.0], Aggregator::Mean),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            "median".parse::<Aggregator>(),
            Err(Error::UnknownAggregator(_))
        ));
        assert!(compute_coloration(&g, "y", &[1.0, f64::NAN], Aggregator::Mean).is_err());
    }

    #[test]
    fn stored_names_recover_aggregator() {
        assert_eq!(Coloration::from_stored("failed:proportion", vec![]).aggregator, Aggregator::Proportion);
        assert_eq!(Coloration::from_stored("z", vec![]).aggregator, Aggregator::Mean);
        assert_eq!(Coloration::default_name("z_score", Aggregator::StdDev), "z_score:std_dev");
    }

    #[test]
    fn scale_endpoints_and_midpoint() {
        let grad = ColorGradient::default();
        let m = color_scale_map(&stored(&[0.0, 10.0, 5.0]));
        assert_eq!(m.colors[0], grad.stops[0]);
        assert_eq!(m.colors[1], grad.stops[4]);
        assert_eq!(m.colors[2], grad.at(0.5));
        assert_eq!(grad.at(0.5), grad.stops[2]);
        assert_eq!((m.min, m.max), (0.0, 10.0));

        let flat = color_scale_map(&stored(&[5.0, 5.0, 5.0]));
        assert!(flat.colors.iter().all(|&c| c == grad.at(0.5)));
    }

    #[test]
    fn hex_format() {
        assert_eq!(Rgb(255, 0, 16).hex(), "#ff0010");
    }
}
