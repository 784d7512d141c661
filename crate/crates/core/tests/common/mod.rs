#![allow(dead_code)]

use std::collections::BTreeSet;

use ballmapper::{EpsilonNet, PointCloud};
use proptest::prelude::*;

/// Straight-line distance written out independently of the library.
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

pub fn cloud(points: Vec<Vec<f64>>) -> PointCloud {
    let d = points.first().map_or(1, Vec::len);
    let names = (0..d).map(|j| format!("a{j}")).collect();
    PointCloud::new(points, names).unwrap()
}

/// Point clouds of `1..=max_n` points in dimension `1..=max_d`, coordinates in `[0, 1]`.
pub fn arb_cloud(max_n: usize, max_d: usize) -> impl Strategy<Value = PointCloud> {
    (1..=max_d, 1..=max_n).prop_flat_map(|(d, n)| {
        prop::collection::vec(prop::collection::vec(0.0..=1.0f64, d), n).prop_map(cloud)
    })
}

/// Every point lies within epsilon of some center.
pub fn check_complete(cloud: &PointCloud, net: &EpsilonNet) -> Result<(), String> {
    for (i, p) in cloud.points().iter().enumerate() {
        if !net.centers.iter().any(|&c| dist(p, cloud.point(c)) <= net.epsilon) {
            return Err(format!("point {i} is uncovered"));
        }
    }
    Ok(())
}

/// Distinct centers are more than epsilon apart.
pub fn check_separated(cloud: &PointCloud, net: &EpsilonNet) -> Result<(), String> {
    for (a, &ca) in net.centers.iter().enumerate() {
        for &cb in &net.centers[a + 1..] {
            let d = dist(cloud.point(ca), cloud.point(cb));
            if d <= net.epsilon {
                return Err(format!("centers {ca} and {cb} only {d} apart"));
            }
        }
    }
    Ok(())
}

/// Ball memberships from scratch.
pub fn oracle_memberships(cloud: &PointCloud, net: &EpsilonNet) -> Vec<Vec<usize>> {
    net.centers
        .iter()
        .map(|&c| {
            (0..cloud.len())
                .filter(|&i| dist(cloud.point(i), cloud.point(c)) <= net.epsilon)
                .collect()
        })
        .collect()
}

/// Ball pairs that share at least one point, by checking every pair against every point.
pub fn oracle_edges(cloud: &PointCloud, net: &EpsilonNet) -> BTreeSet<(usize, usize)> {
    let inside: Vec<Vec<bool>> = net
        .centers
        .iter()
        .map(|&c| {
            (0..cloud.len())
                .map(|i| dist(cloud.point(i), cloud.point(c)) <= net.epsilon)
                .collect()
        })
        .collect();
    let mut edges = BTreeSet::new();
    for a in 0..inside.len() {
        for b in a + 1..inside.len() {
            if (0..cloud.len()).any(|i| inside[a][i] && inside[b][i]) {
                edges.insert((a, b));
            }
        }
    }
    edges
}
