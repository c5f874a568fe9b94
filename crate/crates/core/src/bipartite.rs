//! Node–feature bipartite graph generation.
//!
//! Nodes keep the angles they have in the node graph; only their bipartite
//! hidden degrees are drawn anew. Features get their own hidden degrees and
//! uniform angles on the same circle.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{connection_probability_bipartite, separation, Side};
use crate::sampling::{sample_angles, sample_power_law_kappas, SeedSpec};
use crate::unipartite::check_placements;
use crate::{BipartiteParams, NodePlacement};

/// Sorted, duplicate-free `(node, feature)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteEdgeSet {
    n_nodes: usize,
    n_features: usize,
    edges: Vec<(usize, usize)>,
}

impl BipartiteEdgeSet {
    pub fn new(n_nodes: usize, n_features: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut edges: Vec<(usize, usize)> = pairs.into_iter().collect();
        if let Some(&(n, f)) = edges.iter().find(|&&(n, f)| n >= n_nodes || f >= n_features) {
            return Err(Error::invalid(format!(
                "bipartite edge ({n}, {f}) out of range for {n_nodes}×{n_features}"
            )));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self {
            n_nodes,
            n_features,
            edges,
        })
    }

    pub(crate) fn from_sorted(n_nodes: usize, n_features: usize, edges: Vec<(usize, usize)>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        Self {
            n_nodes,
            n_features,
            edges,
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn n_entities(&self, side: Side) -> usize {
        match side {
            Side::Node => self.n_nodes,
            Side::Feature => self.n_features,
        }
    }

    pub fn degrees(&self, side: Side) -> Vec<usize> {
        let mut deg = vec![0; self.n_entities(side)];
        for &(n, f) in &self.edges {
            match side {
                Side::Node => deg[n] += 1,
                Side::Feature => deg[f] += 1,
            }
        }
        deg
    }

    pub fn mean_node_degree(&self) -> f64 {
        self.edges.len() as f64 / self.n_nodes as f64
    }

    pub fn mean_feature_degree(&self) -> f64 {
        self.edges.len() as f64 / self.n_features as f64
    }

    /// Sorted counterpart lists for the entities of `side`.
    pub fn adjacency(&self, side: Side) -> Vec<Vec<usize>> {
        let mut adj: Vec<Vec<usize>> = self.degrees(side).into_iter().map(Vec::with_capacity).collect();
        for &(n, f) in &self.edges {
            match side {
                Side::Node => adj[n].push(f),
                Side::Feature => adj[f].push(n),
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }
}

/// Samples bipartite placements.
///
/// Node hidden degrees come from sub-stream 0 and are independent of the
/// node-graph hidden degrees; feature hidden degrees and angles use
/// sub-streams 1 and 2.
pub fn place_bipartite(
    node_angles: &[f64],
    params: &BipartiteParams,
    stream: &SeedSpec,
) -> Result<(Vec<NodePlacement>, Vec<NodePlacement>)> {
    if node_angles.len() != params.n_nodes() {
        return Err(Error::invalid(format!(
            "{} node angles for {} nodes",
            node_angles.len(),
            params.n_nodes()
        )));
    }
    let node_kappas = sample_power_law_kappas(
        params.n_nodes(),
        params.gamma_n(),
        params.mean_node_degree(),
        &stream.substream(0),
    )?;
    let feature_kappas = sample_power_law_kappas(
        params.n_features(),
        params.gamma_f(),
        params.mean_feature_degree(),
        &stream.substream(1),
    )?;
    let feature_angles = sample_angles(params.n_features(), &stream.substream(2))?;
    let nodes = node_kappas
        .into_iter()
        .zip(node_angles)
        .map(|(kappa, &theta)| NodePlacement { kappa, theta })
        .collect();
    let features = feature_kappas
        .into_iter()
        .zip(feature_angles)
        .map(|(kappa, theta)| NodePlacement { kappa, theta })
        .collect();
    Ok((nodes, features))
}

/// Generates the node–feature graph, one lane of `stream` per node.
pub fn generate_bipartite(
    node_placements: &[NodePlacement],
    feature_placements: &[NodePlacement],
    params: &BipartiteParams,
    stream: &SeedSpec,
) -> Result<BipartiteEdgeSet> {
    let (n, nf) = (params.n_nodes(), params.n_features());
    if node_placements.len() != n || feature_placements.len() != nf {
        return Err(Error::invalid(format!(
            "placements {}×{} do not match parameters {n}×{nf}",
            node_placements.len(),
            feature_placements.len()
        )));
    }
    check_placements(node_placements, params.kappa_min_for(Side::Node), "node")?;
    check_placements(feature_placements, params.kappa_min_for(Side::Feature), "feature")?;

    let rows: Vec<Vec<(usize, usize)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream.lane(i as u64);
            let node = node_placements[i];
            let mut row = Vec::new();
            for (f, feat) in feature_placements.iter().enumerate() {
                let p = connection_probability_bipartite(node.kappa, feat.kappa, separation(node.theta, feat.theta), params);
                if rng.random::<f64>() < p {
                    row.push((i, f));
                }
            }
            row
        })
        .collect();
    Ok(BipartiteEdgeSet::from_sorted(n, nf, rows.concat()))
}

/// Sparse binary feature vectors, one row per node (CSR layout).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureMatrix {
    n_features: usize,
    offsets: Vec<usize>,
    columns: Vec<usize>,
}

impl FeatureMatrix {
    pub fn n_rows(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    /// Feature indices set for node `i`, ascending.
    pub fn row(&self, i: usize) -> &[usize] {
        &self.columns[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn dense_row(&self, i: usize) -> Vec<u8> {
        let mut v = vec![0; self.n_features];
        for &f in self.row(i) {
            v[f] = 1;
        }
        v
    }

    /// Number of ones in the matrix.
    pub fn nnz(&self) -> usize {
        self.columns.len()
    }
}

pub fn feature_matrix_view(edges: &BipartiteEdgeSet) -> FeatureMatrix {
    let mut offsets = vec![0; edges.n_nodes() + 1];
    for &(n, _) in edges.edges() {
        offsets[n + 1] += 1;
    }
    for i in 0..edges.n_nodes() {
        offsets[i + 1] += offsets[i];
    }
    // edges are sorted by (node, feature), so columns come out in CSR order
    let columns = edges.edges().iter().map(|&(_, f)| f).collect();
    FeatureMatrix {
        n_features: edges.n_features(),
        offsets,
        columns,
    }
}
