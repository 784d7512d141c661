//! Greedy ε-net covers.
//!
//! Points are visited in a caller-supplied order; every point that is not yet covered becomes a
//! center and covers everything within the closed ball of radius ε around it. Memberships are
//! computed over the full cloud, so a point may sit in several balls.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pointcloud::{distance, PointCloud};

/// Below this many points the linear scan stays on the calling thread.
const PARALLEL_SCAN_MIN: usize = 4096;

/// The order in which the greedy loop visits points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointOrder {
    indices: Vec<usize>,
    seed: Option<u64>,
}

impl PointOrder {
    /// Input row order.
    pub fn natural(n: usize) -> Self {
        Self {
            indices: (0..n).collect(),
            seed: None,
        }
    }

    /// A seeded uniform shuffle of `0..n`.
    pub fn shuffled(n: usize, seed: u64) -> Self {
        let mut indices: Vec<usize> = (0..n).collect();
        indices.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Self {
            indices,
            seed: Some(seed),
        }
    }

    /// `natural` when `seed` is `None`, `shuffled` otherwise.
    pub fn from_seed(n: usize, seed: Option<u64>) -> Self {
        match seed {
            Some(s) => Self::shuffled(n, s),
            None => Self::natural(n),
        }
    }

    /// An explicit visiting order. Checked to be a permutation when the net is built.
    pub fn from_indices(indices: Vec<usize>) -> Self {
        Self {
            indices,
            seed: None,
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.indices.len() != n {
            return Err(Error::InvalidOrder(n));
        }
        let mut seen = vec![false; n];
        for &i in &self.indices {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidOrder(n));
            }
        }
        Ok(())
    }
}

/// How the points within ε of a center are found.
///
/// Both strategies evaluate the same distance expression on the same candidates, so they return
/// bit-identical membership sets.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NeighborSearch {
    /// Scan every point.
    #[default]
    LinearScan,
    /// Sort once along the first axis and only scan the slab `|x0 - c0| <= ε`.
    SortedProjection,
}

impl std::str::FromStr for NeighborSearch {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "linear" | "linear_scan" => Ok(Self::LinearScan),
            "projection" | "sorted_projection" => Ok(Self::SortedProjection),
            other => Err(format!("unknown neighbor search `{other}`")),
        }
    }
}

enum Searcher<'a> {
    Linear(&'a PointCloud),
    Projection {
        cloud: &'a PointCloud,
        // point indices ascending by first coordinate
        by_x0: Vec<usize>,
    },
}

impl<'a> Searcher<'a> {
    fn new(cloud: &'a PointCloud, strategy: NeighborSearch) -> Self {
        match strategy {
            NeighborSearch::SortedProjection if cloud.dim() > 0 => {
                let mut by_x0: Vec<usize> = (0..cloud.len()).collect();
                by_x0.sort_by(|&a, &b| cloud.point(a)[0].total_cmp(&cloud.point(b)[0]));
                Searcher::Projection { cloud, by_x0 }
            }
            _ => Searcher::Linear(cloud),
        }
    }

    /// Indices of all points within `eps` of `query`, ascending.
    fn within(&self, query: &[f64], eps: f64) -> Vec<usize> {
        match self {
            Searcher::Linear(cloud) => {
                let hit = |&i: &usize| distance(cloud.point(i), query) <= eps;
                if cloud.len() >= PARALLEL_SCAN_MIN {
                    (0..cloud.len()).into_par_iter().filter(hit).collect()
                } else {
                    (0..cloud.len()).filter(hit).collect()
                }
            }
            Searcher::Projection { cloud, by_x0 } => {
                // `p0 - q0` is monotone in p0 and is exactly the first term of `distance`, whose
                // square root can never be smaller than its magnitude.
                let q0 = query[0];
                let start = by_x0.partition_point(|&i| cloud.point(i)[0] - q0 < -eps);
                let end = by_x0.partition_point(|&i| cloud.point(i)[0] - q0 <= eps);
                let mut hits: Vec<usize> = by_x0[start..end]
                    .iter()
                    .copied()
                    .filter(|&i| distance(cloud.point(i), query) <= eps)
                    .collect();
                hits.sort_unstable();
                hits
            }
        }
    }
}

/// A greedy ε-net: centers in creation order plus the closed-ball membership of each center.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonNet {
    pub epsilon: f64,
    pub centers: Vec<usize>,
    /// `memberships[b]` lists, ascending, every point within ε of `centers[b]`.
    pub memberships: Vec<Vec<usize>>,
    pub point_count: usize,
    pub order_seed: Option<u64>,
    pub cloud_hash: String,
}

impl EpsilonNet {
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// For each point, the ascending ids of the balls containing it.
    pub fn point_to_balls(&self) -> Vec<Vec<usize>> {
        let mut index = vec![Vec::new(); self.point_count];
        for (ball, members) in self.memberships.iter().enumerate() {
            for &p in members {
                index[p].push(ball);
            }
        }
        index
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidEpsilon(epsilon))
    }
}

/// Builds the greedy ε-net with the reference linear scan.
pub fn build_epsilon_net(cloud: &PointCloud, epsilon: f64, order: &PointOrder) -> Result<EpsilonNet> {
    build_epsilon_net_with(cloud, epsilon, order, NeighborSearch::LinearScan)
}

/// Builds the greedy ε-net with a chosen neighbor search.
pub fn build_epsilon_net_with(
    cloud: &PointCloud,
    epsilon: f64,
    order: &PointOrder,
    search: NeighborSearch,
) -> Result<EpsilonNet> {
    check_epsilon(epsilon)?;
    if cloud.is_empty() {
        return Err(Error::EmptyInput);
    }
    order.validate(cloud.len())?;

    let searcher = Searcher::new(cloud, search);
    let mut covered = vec![false; cloud.len()];
    let mut centers = Vec::new();
    let mut memberships = Vec::new();
    for &p in order.indices() {
        if covered[p] {
            continue;
        }
        let members = searcher.within(cloud.point(p), epsilon);
        for &m in &members {
            covered[m] = true;
        }
        centers.push(p);
        memberships.push(members);
    }

    Ok(EpsilonNet {
        epsilon,
        centers,
        memberships,
        point_count: cloud.len(),
        order_seed: order.seed(),
        cloud_hash: cloud.content_hash(),
    })
}

/// Membership sets of a fixed list of centers at radius `epsilon`.
pub fn memberships_for_centers(
    cloud: &PointCloud,
    centers: &[usize],
    epsilon: f64,
    search: NeighborSearch,
) -> Result<Vec<Vec<usize>>> {
    check_epsilon(epsilon)?;
    if let Some(&bad) = centers.iter().find(|&&c| c >= cloud.len()) {
        return Err(Error::LengthMismatch {
            expected: cloud.len(),
            found: bad + 1,
        });
    }
    let searcher = Searcher::new(cloud, search);
    Ok(centers
        .iter()
        .map(|&c| searcher.within(cloud.point(c), epsilon))
        .collect())
}

/// For every point of `cloud`, the ascending ids of the balls of `net` containing it.
pub fn assign_points(net: &EpsilonNet, cloud: &PointCloud) -> Result<Vec<Vec<usize>>> {
    if cloud.len() != net.point_count {
        return Err(Error::LengthMismatch {
            expected: net.point_count,
            found: cloud.len(),
        });
    }
    if cloud.content_hash() != net.cloud_hash {
        return Err(Error::Parse {
            format: "epsilon net",
            message: "net was built from a different cloud".into(),
        });
    }
    Ok(net.point_to_balls())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud1(values: &[f64]) -> PointCloud {
        PointCloud::new(values.iter().map(|&v| vec![v]).collect(), vec!["x".into()]).unwrap()
    }

    #[test]
    fn hand_trace_three_points() {
        let c = cloud1(&[0.0, 0.4, 0.8]);
        let net = build_epsilon_net(&c, 0.5, &PointOrder::natural(3)).unwrap();
        assert_eq!(net.centers, vec![0, 2]);
        assert_eq!(net.memberships, vec![vec![0, 1], vec![1, 2]]);
        let assigned = assign_points(&net, &c).unwrap();
        assert_eq!(assigned[1], vec![0, 1]);
        assert_eq!(assigned[0], vec![0]);
        assert_eq!(assigned[2], vec![1]);
    }

    #[test]
    fn single_point() {
        let c = cloud1(&[0.3]);
        let net = build_epsilon_net(&c, 1e-9, &PointOrder::natural(1)).unwrap();
        assert_eq!(net.centers, vec![0]);
        assert_eq!(net.memberships, vec![vec![0]]);
    }

    #[test]
    fn far_apart_pair() {
        let c = cloud1(&[0.0, 1.0]);
        let net = build_epsilon_net(&c, 0.3, &PointOrder::natural(2)).unwrap();
        assert_eq!(net.centers, vec![0, 1]);
        assert_eq!(net.memberships, vec![vec![0], vec![1]]);
    }

    #[test]
    fn closed_ball_boundary() {
        let c = cloud1(&[0.0, 0.5]);
        let net = build_epsilon_net(&c, 0.5, &PointOrder::natural(2)).unwrap();
        assert_eq!(net.centers, vec![0]);
    }

    #[test]
    fn single_ball_assignment() {
        let c = cloud1(&[0.0, 0.1, 0.2]);
        let net = build_epsilon_net(&c, 1.0, &PointOrder::natural(3)).unwrap();
        assert_eq!(assign_points(&net, &c).unwrap(), vec![vec![0]; 3]);
    }

    #[test]
    fn order_changes_centers() {
        let c = cloud1(&[0.0, 0.4, 0.8]);
        let order = PointOrder::from_indices(vec![1, 0, 2]);
        let net = build_epsilon_net(&c, 0.5, &order).unwrap();
        assert_eq!(net.centers, vec![1]);
        assert_eq!(net.memberships, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn errors() {
        let c = cloud1(&[0.0, 1.0]);
        let order = PointOrder::natural(2);
        for eps in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(
                build_epsilon_net(&c, eps, &order),
                Err(Error::InvalidEpsilon(_))
            ));
        }
        assert!(matches!(
            build_epsilon_net(&cloud1(&[]), 0.5, &PointOrder::natural(0)),
            Err(Error::EmptyInput)
        ));
        for bad in [vec![0], vec![0, 0], vec![0, 2]] {
            assert!(matches!(
                build_epsilon_net(&c, 0.5, &PointOrder::from_indices(bad)),
                Err(Error::InvalidOrder(2))
            ));
        }
        let net = build_epsilon_net(&c, 0.5, &order).unwrap();
        assert!(assign_points(&net, &cloud1(&[0.0])).is_err());
        assert!(assign_points(&net, &cloud1(&[0.0, 2.0])).is_err());
    }

    #[test]
    fn shuffled_order_is_seeded_permutation() {
        let a = PointOrder::shuffled(50, 11);
        assert_eq!(a, PointOrder::shuffled(50, 11));
        assert_ne!(a.indices(), PointOrder::shuffled(50, 12).indices());
        assert!(a.validate(50).is_ok());
        assert_eq!(a.seed(), Some(11));
    }

    #[test]
    fn projection_handles_ties_on_first_axis() {
        let pts = vec![vec![0.5, 0.0], vec![0.5, 0.3], vec![0.5, 0.9], vec![0.1, 0.0]];
        let c = PointCloud::new(pts, vec!["a".into(), "b".into()]).unwrap();
        let order = PointOrder::natural(4);
        let linear = build_epsilon_net_with(&c, 0.4, &order, NeighborSearch::LinearScan).unwrap();
        let proj = build_epsilon_net_with(&c, 0.4, &order, NeighborSearch::SortedProjection).unwrap();
        assert_eq!(linear, proj);
    }
}
