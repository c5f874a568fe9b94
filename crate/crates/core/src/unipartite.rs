//! Node graph generation: one Bernoulli trial per unordered node pair.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{connection_probability_s1, separation};
use crate::sampling::{sample_angles, sample_power_law_kappas, SeedSpec};
use crate::{NodePlacement, UnipartiteParams};

/// Undirected simple graph as a sorted list of `(u, v)` pairs with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSet {
    n_nodes: usize,
    edges: Vec<(usize, usize)>,
}

impl EdgeSet {
    /// Builds an edge set from arbitrary pairs, orienting each as `u < v`, sorting and deduplicating.
    pub fn new(n_nodes: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut edges = Vec::new();
        for (a, b) in pairs {
            if a == b {
                return Err(Error::invalid(format!("self-loop on node {a}")));
            }
            if a >= n_nodes || b >= n_nodes {
                return Err(Error::invalid(format!("edge ({a}, {b}) out of range for {n_nodes} nodes")));
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self { n_nodes, edges })
    }

    pub(crate) fn from_sorted(n_nodes: usize, edges: Vec<(usize, usize)>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.iter().all(|&(u, v)| u < v && v < n_nodes));
        Self { n_nodes, edges }
    }

    pub fn empty(n_nodes: usize) -> Self {
        Self {
            n_nodes,
            edges: Vec::new(),
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
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

    pub fn contains(&self, u: usize, v: usize) -> bool {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).is_ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n_nodes];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn mean_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.n_nodes as f64
    }

    /// Sorted neighbor lists.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj: Vec<Vec<usize>> = self.degrees().into_iter().map(Vec::with_capacity).collect();
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }
}

/// Samples node placements: power-law hidden degrees (sub-stream 0) and uniform angles (sub-stream 1).
pub fn place_nodes(params: &UnipartiteParams, stream: &SeedSpec) -> Result<Vec<NodePlacement>> {
    let n = params.n_nodes();
    let kappas = sample_power_law_kappas(n, params.gamma(), params.mean_degree(), &stream.substream(0))?;
    let angles = sample_angles(n, &stream.substream(1))?;
    Ok(kappas
        .into_iter()
        .zip(angles)
        .map(|(kappa, theta)| NodePlacement { kappa, theta })
        .collect())
}

pub(crate) fn check_placements(placements: &[NodePlacement], kappa_min: f64, what: &str) -> Result<()> {
    for (i, p) in placements.iter().enumerate() {
        if !(p.kappa.is_finite() && p.kappa >= kappa_min) {
            return Err(Error::invalid(format!(
                "{what} {i}: hidden degree {} below minimum {kappa_min}",
                p.kappa
            )));
        }
        if !(p.theta.is_finite() && (0.0..std::f64::consts::TAU).contains(&p.theta)) {
            return Err(Error::invalid(format!("{what} {i}: angle {} outside [0, 2π)", p.theta)));
        }
    }
    Ok(())
}

/// Generates the node graph.
///
/// Row `u` draws its trials against `v = u+1..n` in order from lane `u` of the
/// stream, so the output is identical for any thread count.
pub fn generate_unipartite(placements: &[NodePlacement], params: &UnipartiteParams, stream: &SeedSpec) -> Result<EdgeSet> {
    let n = params.n_nodes();
    if placements.len() != n {
        return Err(Error::invalid(format!(
            "{} placements for a graph of {n} nodes",
            placements.len()
        )));
    }
    check_placements(placements, params.kappa_min(), "node")?;

    let rows: Vec<Vec<(usize, usize)>> = (0..n)
        .into_par_iter()
        .map(|u| {
            let mut rng = stream.lane(u as u64);
            let pu = placements[u];
            let mut row = Vec::new();
            for (v, pv) in placements.iter().enumerate().skip(u + 1) {
                let p = connection_probability_s1(pu.kappa, pv.kappa, separation(pu.theta, pv.theta), params);
                if rng.random::<f64>() < p {
                    row.push((u, v));
                }
            }
            row
        })
        .collect();
    Ok(EdgeSet::from_sorted(n, rows.concat()))
}

/// Expected degree of `focal`: the sum of connection probabilities to every entry of `others`.
pub fn expected_degree(focal: &NodePlacement, others: &[NodePlacement], params: &UnipartiteParams) -> f64 {
    others
        .iter()
        .map(|o| connection_probability_s1(focal.kappa, o.kappa, separation(focal.theta, o.theta), params))
        .sum()
}

/// Expected degree of every node against all other nodes.
pub fn expected_degrees(placements: &[NodePlacement], params: &UnipartiteParams) -> Vec<f64> {
    (0..placements.len())
        .into_par_iter()
        .map(|i| {
            let p = placements[i];
            placements
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, o)| connection_probability_s1(p.kappa, o.kappa, separation(p.theta, o.theta), params))
                .sum()
        })
        .collect()
}
