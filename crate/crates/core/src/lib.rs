//! Ball Mapper
//! ===========
//!
//! Topological summaries of point clouds: a greedy ε-net cover of the cloud is turned into an
//! abstract graph with one vertex per ball and an edge wherever two balls share a point. Balls are
//! colored by aggregating an outcome column over their members, laid out in the plane and emitted
//! as SVG, DOT or GraphML.
//!
//! The [`altman`] module adds the credit-risk layer: the five Altman ratios built from raw
//! accounting fields, the failure flag, the Z-score and its distress/grey/safe zones. The
//! [`synthdata`] module generates firm samples with planted clusters for experiments and tests.
//!
//! A typical pipeline:
//!
//! ```
//! use ballmapper::{build_epsilon_net, build_graph, compute_coloration, Aggregator, PointCloud, PointOrder};
//!
//! let cloud = PointCloud::new(vec![vec![0.0], vec![0.4], vec![0.8]], vec!["x".into()]).unwrap();
//! let net = build_epsilon_net(&cloud, 0.5, &PointOrder::natural(cloud.len())).unwrap();
//! let graph = build_graph(&net);
//! assert_eq!(graph.edges(), &[(0, 1)]);
//!
//! let outcome = [1.0, 2.0, 3.0];
//! let mean = compute_coloration(&graph, "x", &outcome, Aggregator::Mean).unwrap();
//! assert_eq!(mean.values, vec![1.5, 2.5]);
//! ```

pub mod altman;
pub mod bmgraph;
pub mod coloration;
pub mod cover;
pub mod error;
pub mod ingest;
pub mod pointcloud;
pub mod render;
pub mod synthdata;

pub use altman::{
    classify_zone, compute_ratios, failure_flag, z_score, FailureCodes, FirmRecord, RatioError,
    RatioVector, ZScoreModel, Zone,
};
pub use bmgraph::{
    build_graph, connected_components, graph_stats, Ball, BallMapperGraph, Components,
    GraphDocument, GraphStats, Preprocessing, Provenance,
};
pub use coloration::{color_scale_map, compute_coloration, Aggregator, ColorMap, Coloration, Rgb};
pub use cover::{
    assign_points, build_epsilon_net, build_epsilon_net_with, memberships_for_centers,
    EpsilonNet, NeighborSearch, PointOrder,
};
pub use error::{Error, Result};
pub use pointcloud::{
    correlation_matrix, euclidean_distance, normalize_minmax, summary_stats, winsorize,
    AxisStats, CorrelationMatrix, NormalizationParams, PointCloud, WinsorBounds,
};

/// Library version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
