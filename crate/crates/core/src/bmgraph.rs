//! The abstract Ball Mapper graph: one vertex per ball, one edge per pair of balls that share at
//! least one point.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::coloration::Coloration;
use crate::cover::EpsilonNet;
use crate::error::{Error, Result};
use crate::pointcloud::{NormalizationParams, PointCloud, WinsorBounds};

/// A vertex of the graph. Ids follow center creation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub id: usize,
    pub center_index: usize,
    /// Ascending point indices.
    pub members: Vec<usize>,
    pub size: usize,
}

/// Where a graph came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub epsilon: f64,
    pub order_seed: Option<u64>,
    pub cloud_hash: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallMapperGraph {
    balls: Vec<Ball>,
    edges: Vec<(usize, usize)>,
    point_count: usize,
    provenance: Provenance,
}

impl BallMapperGraph {
    /// Assembles a graph from stored parts, checking ids, sizes and edges.
    pub fn from_parts(
        balls: Vec<Ball>,
        edges: Vec<(usize, usize)>,
        point_count: usize,
        provenance: Provenance,
    ) -> Result<Self> {
        let invalid = |message: String| Error::Parse {
            format: "graph",
            message,
        };
        for (i, b) in balls.iter().enumerate() {
            if b.id != i {
                return Err(invalid(format!("ball at position {i} has id {}", b.id)));
            }
            if b.size != b.members.len() || b.members.is_empty() {
                return Err(invalid(format!("ball {i} has inconsistent size")));
            }
            if b.members.windows(2).any(|w| w[0] >= w[1]) {
                return Err(invalid(format!("ball {i} members are not strictly ascending")));
            }
            if b.members.last().is_some_and(|&m| m >= point_count) {
                return Err(invalid(format!("ball {i} references a point out of range")));
            }
        }
        let mut edges = edges;
        for e in &mut edges {
            if e.0 == e.1 || e.0.max(e.1) >= balls.len() {
                return Err(invalid(format!("invalid edge {:?}", e)));
            }
            if e.0 > e.1 {
                *e = (e.1, e.0);
            }
        }
        edges.sort_unstable();
        if edges.windows(2).any(|w| w[0] == w[1]) {
            return Err(invalid("duplicate edge".into()));
        }
        Ok(Self {
            balls,
            edges,
            point_count,
            provenance,
        })
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.balls.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Size of the cloud the graph was built from.
    pub fn point_count(&self) -> usize {
        self.point_count
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn epsilon(&self) -> f64 {
        self.provenance.epsilon
    }

    /// Sorted neighbor lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.balls.len()];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }
}

/// Builds the Ball Mapper graph of a net.
///
/// Edges come from the point-to-balls index: a point lying in `k` balls contributes the `k(k-1)/2`
/// pairs of those balls.
pub fn build_graph(net: &EpsilonNet) -> BallMapperGraph {
    let balls = net
        .centers
        .iter()
        .zip(&net.memberships)
        .enumerate()
        .map(|(id, (&center_index, members))| Ball {
            id,
            center_index,
            members: members.clone(),
            size: members.len(),
        })
        .collect();

    let mut edges = BTreeSet::new();
    for containing in net.point_to_balls() {
        for (a, &i) in containing.iter().enumerate() {
            for &j in &containing[a + 1..] {
                edges.insert((i, j));
            }
        }
    }

    BallMapperGraph {
        balls,
        edges: edges.into_iter().collect(),
        point_count: net.point_count,
        provenance: Provenance {
            epsilon: net.epsilon,
            order_seed: net.order_seed,
            cloud_hash: net.cloud_hash.clone(),
        },
    }
}

/// Connected components of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Components {
    /// Each component ascending; components ordered by their smallest vertex id.
    pub components: Vec<Vec<usize>>,
    /// Vertices with no edges at all: potential outliers.
    pub outliers: Vec<usize>,
}

impl Components {
    /// Component index of every vertex.
    pub fn labels(&self, vertex_count: usize) -> Vec<usize> {
        let mut labels = vec![0; vertex_count];
        for (c, members) in self.components.iter().enumerate() {
            for &v in members {
                labels[v] = c;
            }
        }
        labels
    }
}

pub fn connected_components(graph: &BallMapperGraph) -> Components {
    let adj = graph.adjacency();
    let mut seen = vec![false; adj.len()];
    let mut components = Vec::new();
    for start in 0..adj.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut comp = Vec::new();
        while let Some(v) = stack.pop() {
            comp.push(v);
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    let outliers = components
        .iter()
        .filter(|c| c.len() == 1)
        .map(|c| c[0])
        .collect();
    Components {
        components,
        outliers,
    }
}

/// Structural summary of a graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphStats {
    pub vertices: usize,
    pub edges: usize,
    pub max_degree: usize,
    /// degree -> number of vertices with that degree
    pub degree_histogram: BTreeMap<usize, usize>,
    pub components: usize,
    pub outliers: usize,
    /// Vertices in the largest component over all vertices.
    pub largest_component_fraction: f64,
    /// Sum of ball sizes; exceeds the point count when balls overlap.
    pub total_membership: usize,
}

pub fn graph_stats(graph: &BallMapperGraph) -> GraphStats {
    let degrees: Vec<usize> = graph.adjacency().iter().map(Vec::len).collect();
    let mut degree_histogram = BTreeMap::new();
    for &d in &degrees {
        *degree_histogram.entry(d).or_insert(0) += 1;
    }
    let comps = connected_components(graph);
    let largest = comps.components.iter().map(Vec::len).max().unwrap_or(0);
    GraphStats {
        vertices: graph.vertex_count(),
        edges: graph.edge_count(),
        max_degree: degrees.iter().copied().max().unwrap_or(0),
        degree_histogram,
        components: comps.components.len(),
        outliers: comps.outliers.len(),
        largest_component_fraction: if graph.vertex_count() == 0 {
            0.0
        } else {
            largest as f64 / graph.vertex_count() as f64
        },
        total_membership: graph.balls.iter().map(|b| b.size).sum(),
    }
}

/// A ball as persisted in the graph document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallRecord {
    pub id: usize,
    pub center_index: usize,
    /// Coordinates of the center in the (preprocessed) cloud.
    pub center: Vec<f64>,
    pub members: Vec<usize>,
    pub size: usize,
}

/// Preprocessing applied to the cloud before the cover was built, so new points can be mapped
/// into the same coordinates.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Preprocessing {
    pub winsorize: Option<WinsorBounds>,
    pub normalization: Option<NormalizationParams>,
}

impl Preprocessing {
    /// Clamps then normalizes a raw point, as the build did.
    pub fn apply(&self, point: &[f64]) -> Result<Vec<f64>> {
        let clamped = match &self.winsorize {
            Some(w) => w.apply(point)?,
            None => point.to_vec(),
        };
        match &self.normalization {
            Some(n) => n.apply(&clamped),
            None => Ok(clamped),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DocumentProvenance {
    pub order_seed: Option<u64>,
    pub cloud_hash: String,
}

/// The persisted graph.
///
/// Field order is the serialization order; members are ascending, edges lexicographic and
/// colorations keyed in a sorted map, so equal graphs serialize to identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub epsilon: f64,
    pub axis_names: Vec<String>,
    pub balls: Vec<BallRecord>,
    pub edges: Vec<[usize; 2]>,
    pub colorations: BTreeMap<String, Vec<f64>>,
    pub point_count: usize,
    pub provenance: DocumentProvenance,
    pub preprocessing: Preprocessing,
}

impl GraphDocument {
    /// `cloud` must be the cloud the graph was built from.
    pub fn new(
        graph: &BallMapperGraph,
        cloud: &PointCloud,
        preprocessing: Preprocessing,
    ) -> Result<Self> {
        if cloud.len() != graph.point_count() {
            return Err(Error::LengthMismatch {
                expected: graph.point_count(),
                found: cloud.len(),
            });
        }
        Ok(Self {
            epsilon: graph.epsilon(),
            axis_names: cloud.axis_names().to_vec(),
            balls: graph
                .balls()
                .iter()
                .map(|b| BallRecord {
                    id: b.id,
                    center_index: b.center_index,
                    center: cloud.point(b.center_index).to_vec(),
                    members: b.members.clone(),
                    size: b.size,
                })
                .collect(),
            edges: graph.edges().iter().map(|&(i, j)| [i, j]).collect(),
            colorations: BTreeMap::new(),
            point_count: graph.point_count(),
            provenance: DocumentProvenance {
                order_seed: graph.provenance().order_seed,
                cloud_hash: graph.provenance().cloud_hash.clone(),
            },
            preprocessing,
        })
    }

    /// Stores (or replaces) a coloration under its name.
    pub fn add_coloration(&mut self, coloration: &Coloration) -> Result<()> {
        if coloration.values.len() != self.balls.len() {
            return Err(Error::LengthMismatch {
                expected: self.balls.len(),
                found: coloration.values.len(),
            });
        }
        self.colorations
            .insert(coloration.name.clone(), coloration.values.clone());
        Ok(())
    }

    /// The stored coloration called `name`.
    pub fn coloration(&self, name: &str) -> Option<Coloration> {
        self.colorations
            .get(name)
            .map(|values| Coloration::from_stored(name, values.clone()))
    }

    pub fn to_graph(&self) -> Result<BallMapperGraph> {
        BallMapperGraph::from_parts(
            self.balls
                .iter()
                .map(|b| Ball {
                    id: b.id,
                    center_index: b.center_index,
                    members: b.members.clone(),
                    size: b.size,
                })
                .collect(),
            self.edges.iter().map(|&[i, j]| (i, j)).collect(),
            self.point_count,
            Provenance {
                epsilon: self.epsilon,
                order_seed: self.provenance.order_seed,
                cloud_hash: self.provenance.cloud_hash.clone(),
            },
        )
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Parses and validates a document.
    pub fn from_json(s: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(s)?;
        doc.to_graph()?;
        let dim = doc.axis_names.len();
        if doc.balls.iter().any(|b| b.center.len() != dim) {
            return Err(Error::Parse {
                format: "graph",
                message: "ball center has the wrong dimension".into(),
            });
        }
        for (name, values) in &doc.colorations {
            if values.len() != doc.balls.len() {
                return Err(Error::Parse {
                    format: "graph",
                    message: format!("coloration `{name}` has {} values", values.len()),
                });
            }
        }
        Ok(doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::{build_epsilon_net, PointOrder};

    fn cloud1(values: &[f64]) -> PointCloud {
        PointCloud::new(values.iter().map(|&v| vec![v]).collect(), vec!["x".into()]).unwrap()
    }

    fn graph_of(values: &[f64], eps: f64) -> BallMapperGraph {
        let c = cloud1(values);
        build_graph(&build_epsilon_net(&c, eps, &PointOrder::natural(c.len())).unwrap())
    }

    fn with_edges(n: usize, edges: &[(usize, usize)]) -> BallMapperGraph {
        let balls = (0..n)
            .map(|id| Ball {
                id,
                center_index: id,
                members: vec![id],
                size: 1,
            })
            .collect();
        let prov = Provenance {
            epsilon: 1.0,
            order_seed: None,
            cloud_hash: String::new(),
        };
        BallMapperGraph::from_parts(balls, edges.to_vec(), n, prov).unwrap()
    }

    #[test]
    fn graph_examples() {
        let g = graph_of(&[0.0, 0.4, 0.8], 0.5);
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(g.balls()[0].size, 2);

        let g = graph_of(&[0.2], 0.5);
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 0));

        let g = graph_of(&[0.0, 1.0], 0.3);
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 0));
    }

    #[test]
    fn component_examples() {
        let c = connected_components(&with_edges(2, &[(0, 1)]));
        assert_eq!(c.components, vec![vec![0, 1]]);
        assert!(c.outliers.is_empty());

        let c = connected_components(&with_edges(2, &[]));
        assert_eq!(c.components, vec![vec![0], vec![1]]);
        assert_eq!(c.outliers, vec![0, 1]);

        let c = connected_components(&with_edges(4, &[(0, 1), (1, 2)]));
        assert_eq!(c.components, vec![vec![0, 1, 2], vec![3]]);
        assert_eq!(c.outliers, vec![3]);
        assert_eq!(c.labels(4), vec![0, 0, 0, 1]);
    }

    #[test]
    fn stats_examples() {
        let s = graph_stats(&with_edges(1, &[]));
        assert_eq!((s.vertices, s.edges, s.max_degree), (1, 0, 0));

        let s = graph_stats(&with_edges(3, &[(0, 1), (1, 2), (0, 2)]));
        assert_eq!((s.vertices, s.edges, s.max_degree), (3, 3, 2));

        let s = graph_stats(&with_edges(3, &[(0, 1), (1, 2)]));
        assert_eq!(s.degree_histogram, BTreeMap::from([(1, 2), (2, 1)]));
        assert_eq!(s.largest_component_fraction, 1.0);
    }

    #[test]
    fn from_parts_rejects_bad_edges() {
        let prov = Provenance {
            epsilon: 1.0,
            order_seed: None,
            cloud_hash: String::new(),
        };
        let balls: Vec<Ball> = (0..2)
            .map(|id| Ball {
                id,
                center_index: id,
                members: vec![id],
                size: 1,
            })
            .collect();
        for edges in [vec![(0, 0)], vec![(0, 1), (1, 0)], vec![(0, 2)]] {
            assert!(BallMapperGraph::from_parts(balls.clone(), edges, 2, prov.clone()).is_err());
        }
        let g = BallMapperGraph::from_parts(balls, vec![(1, 0)], 2, prov).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn document_round_trip() {
        let c = cloud1(&[0.0, 0.4, 0.8]);
        let g = build_graph(&build_epsilon_net(&c, 0.5, &PointOrder::natural(3)).unwrap());
        let mut doc = GraphDocument::new(&g, &c, Preprocessing::default()).unwrap();
        doc.add_coloration(&Coloration::from_stored("x:mean", vec![0.2, 0.6]))
            .unwrap();
        let json = doc.to_json().unwrap();
        let back = GraphDocument::from_json(&json).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json().unwrap(), json);
        assert_eq!(back.to_graph().unwrap(), g);
        assert_eq!(back.balls[1].center, vec![0.8]);

        let keys: Vec<usize> = ["\"epsilon\"", "\"axis_names\"", "\"balls\"", "\"edges\"", "\"colorations\""]
            .iter()
            .map(|k| json.find(k).unwrap())
            .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn document_rejects_wrong_coloration_length() {
        let c = cloud1(&[0.0, 1.0]);
        let g = build_graph(&build_epsilon_net(&c, 0.5, &PointOrder::natural(2)).unwrap());
        let mut doc = GraphDocument::new(&g, &c, Preprocessing::default()).unwrap();
        assert!(doc
            .add_coloration(&Coloration::from_stored("x", vec![1.0]))
            .is_err());
    }
}
