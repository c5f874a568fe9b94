//! Synthetic graph benchmarks on a hyperbolic similarity space.
//!
//! A dataset couples three objects that share one circle of angular
//! coordinates: a node graph with power-law hidden degrees and tunable
//! clustering, a node–feature bipartite graph that yields binary feature
//! vectors, and node labels drawn from angular proximity to class centroids.

pub mod bipartite;
pub mod config;
pub mod dataset;
pub mod error;
pub mod labeler;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod sampling;
pub mod sweep;
pub mod unipartite;

pub use bipartite::{feature_matrix_view, generate_bipartite, place_bipartite, BipartiteEdgeSet, FeatureMatrix};
pub use error::{Error, Result};
pub use labeler::{assign_labels, max_intracluster_distance, LabelAssignment};
pub use model::{angular_distance, Scalar, Side};
pub use sampling::{SeedSpec, Stage};
pub use unipartite::{generate_unipartite, place_nodes, EdgeSet};

/// Node-graph parameters in double precision.
pub type UnipartiteParams = model::UnipartiteParams<f64>;
/// Node–feature graph parameters in double precision.
pub type BipartiteParams = model::BipartiteParams<f64>;
pub type LabelParams = model::LabelParams<f64>;
pub type NodePlacement = model::NodePlacement<f64>;

pub type UnipartiteParams32 = model::UnipartiteParams<f32>;
pub type BipartiteParams32 = model::BipartiteParams<f32>;
