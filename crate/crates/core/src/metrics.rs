//! Structural and label statistics of generated datasets.
//!
//! Conventions: entities with fewer than two neighbors have no clustering
//! value and are left out of clustering means and spectra; isolated nodes are
//! left out of homophily; spectra are aggregated with exponential binning
//! (base 2 unless told otherwise).

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;

use crate::bipartite::BipartiteEdgeSet;
use crate::error::{Error, Result};
use crate::labeler::LabelAssignment;
use crate::model::Side;
use crate::sampling::SeedSpec;
use crate::unipartite::EdgeSet;

pub const DEFAULT_BINNING_BASE: f64 = 2.0;
pub const DEFAULT_SWAPS_PER_EDGE: usize = 10;

/// A graph whose per-entity statistics can be taken: the node graph, or one side of the bipartite graph.
#[derive(Debug, Clone, Copy)]
pub enum GraphView<'a> {
    Unipartite(&'a EdgeSet),
    Bipartite(&'a BipartiteEdgeSet, Side),
}

impl GraphView<'_> {
    fn degrees(&self) -> Vec<usize> {
        match *self {
            GraphView::Unipartite(e) => e.degrees(),
            GraphView::Bipartite(e, side) => e.degrees(side),
        }
    }
}

/// Mean same-label fraction of neighbors, over nodes with at least one neighbor.
pub fn homophily(edges: &EdgeSet, labels: &LabelAssignment) -> Result<f64> {
    if labels.labels.len() != edges.n_nodes() {
        return Err(Error::invalid(format!(
            "{} labels for {} nodes",
            labels.labels.len(),
            edges.n_nodes()
        )));
    }
    if edges.is_empty() {
        return Err(Error::UndefinedMetric("homophily of a graph without edges".into()));
    }
    let mut same = vec![0usize; edges.n_nodes()];
    for &(u, v) in edges.edges() {
        if labels.labels[u] == labels.labels[v] {
            same[u] += 1;
            same[v] += 1;
        }
    }
    let (sum, count) = edges
        .degrees()
        .iter()
        .zip(&same)
        .filter(|(&k, _)| k > 0)
        .fold((0.0, 0usize), |(s, c), (&k, &m)| (s + m as f64 / k as f64, c + 1));
    Ok(sum / count as f64)
}

fn sorted_intersection_len(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Local clustering coefficient per node; `None` for nodes with degree < 2.
pub fn local_clustering(edges: &EdgeSet) -> Vec<Option<f64>> {
    let adj = edges.adjacency();
    adj.par_iter()
        .map(|nbrs| {
            let k = nbrs.len();
            if k < 2 {
                return None;
            }
            let twice_links: usize = nbrs.iter().map(|&v| sorted_intersection_len(nbrs, &adj[v])).sum();
            Some(twice_links as f64 / (k * (k - 1)) as f64)
        })
        .collect()
}

/// Bipartite clustering per entity of `side`; `None` for entities with fewer than two neighbors.
///
/// Two neighbors of entity `i` count as connected when some other entity of
/// the same side is adjacent to both.
pub fn bipartite_local_clustering(edges: &BipartiteEdgeSet, side: Side) -> Vec<Option<f64>> {
    let other = match side {
        Side::Node => Side::Feature,
        Side::Feature => Side::Node,
    };
    let own = edges.adjacency(side);
    let theirs = edges.adjacency(other);
    (0..own.len())
        .into_par_iter()
        .map(|i| {
            let nbrs = &own[i];
            let d = nbrs.len();
            if d < 2 {
                return None;
            }
            let words = d.div_ceil(64);
            // for every peer j (same side, j != i): bitset of the neighbors of i that j also touches
            let mut peer_slot: HashMap<usize, usize> = HashMap::new();
            let mut masks: Vec<u64> = Vec::new();
            for (x, &a) in nbrs.iter().enumerate() {
                for &j in &theirs[a] {
                    if j == i {
                        continue;
                    }
                    let slot = *peer_slot.entry(j).or_insert_with(|| {
                        masks.resize(masks.len() + words, 0);
                        masks.len() / words - 1
                    });
                    masks[slot * words + x / 64] |= 1 << (x % 64);
                }
            }
            // neighbor a is linked to every neighbor of i that shares a peer with it
            let mut row = vec![0u64; words];
            let mut twice_linked = 0usize;
            for (x, &a) in nbrs.iter().enumerate() {
                row.iter_mut().for_each(|w| *w = 0);
                for &j in &theirs[a] {
                    if let Some(&slot) = peer_slot.get(&j) {
                        for (w, m) in row.iter_mut().zip(&masks[slot * words..(slot + 1) * words]) {
                            *w |= m;
                        }
                    }
                }
                row[x / 64] &= !(1 << (x % 64));
                twice_linked += row.iter().map(|w| w.count_ones() as usize).sum::<usize>();
            }
            Some(twice_linked as f64 / (d * (d - 1)) as f64)
        })
        .collect()
}

/// Mean of the defined entries; `None` when no entry is defined.
pub fn mean_defined(values: &[Option<f64>]) -> Option<f64> {
    let (s, n) = values.iter().flatten().fold((0.0, 0usize), |(s, n), &v| (s + v, n + 1));
    (n > 0).then(|| s / n as f64)
}

/// Mean degree of each entity's neighbors; `None` for isolated entities.
pub fn average_neighbor_degree(graph: GraphView<'_>) -> Vec<Option<f64>> {
    let (adj, counterpart_deg) = match graph {
        GraphView::Unipartite(e) => (e.adjacency(), e.degrees()),
        GraphView::Bipartite(e, side) => {
            let other = if side == Side::Node { Side::Feature } else { Side::Node };
            (e.adjacency(side), e.degrees(other))
        }
    };
    adj.iter()
        .map(|nbrs| {
            (!nbrs.is_empty())
                .then(|| nbrs.iter().map(|&v| counterpart_deg[v] as f64).sum::<f64>() / nbrs.len() as f64)
        })
        .collect()
}

/// Exponentially binned average of `y` against `x`.
///
/// Bin `j` covers `[base^j, base^{j+1})`; rows are `(geometric bin center, mean y)` in increasing `x`, empty bins omitted.
pub fn exponential_binning(pairs: &[(f64, f64)], base: f64) -> Result<Vec<(f64, f64)>> {
    if !(base.is_finite() && base > 1.0) {
        return Err(Error::invalid(format!("binning base must be > 1, got {base}")));
    }
    let mut keyed = Vec::with_capacity(pairs.len());
    for &(x, y) in pairs {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::invalid(format!("binning needs positive x, got {x}")));
        }
        let mut j = (x.ln() / base.ln()).floor() as i32;
        while base.powi(j + 1) <= x {
            j += 1;
        }
        while base.powi(j) > x {
            j -= 1;
        }
        keyed.push((j, y));
    }
    keyed.sort_by_key(|&(j, _)| j);
    let mut out = Vec::new();
    for chunk in keyed.chunk_by(|a, b| a.0 == b.0) {
        let j = chunk[0].0;
        let mean = chunk.iter().map(|&(_, y)| y).sum::<f64>() / chunk.len() as f64;
        out.push((base.powf(j as f64 + 0.5), mean));
    }
    Ok(out)
}

fn spectrum_of(degrees: &[usize], values: &[Option<f64>], base: f64) -> Result<Vec<(f64, f64)>> {
    let pairs: Vec<(f64, f64)> = degrees
        .iter()
        .zip(values)
        .filter_map(|(&k, v)| v.map(|v| (k as f64, v)))
        .collect();
    exponential_binning(&pairs, base)
}

/// Binned mean neighbor degree as a function of degree.
pub fn knn_spectrum(graph: GraphView<'_>, base: f64) -> Result<Vec<(f64, f64)>> {
    spectrum_of(&graph.degrees(), &average_neighbor_degree(graph), base)
}

/// Binned clustering (or bipartite clustering) as a function of degree.
pub fn clustering_spectrum(graph: GraphView<'_>, base: f64) -> Result<Vec<(f64, f64)>> {
    let values = match graph {
        GraphView::Unipartite(e) => local_clustering(e),
        GraphView::Bipartite(e, side) => bipartite_local_clustering(e, side),
    };
    spectrum_of(&graph.degrees(), &values, base)
}

/// Exact complementary cumulative distribution `P(K ≥ k)` at every observed degree.
pub fn degree_ccdf(degrees: &[usize]) -> Vec<(usize, f64)> {
    let hist = degree_histogram(degrees);
    let n = degrees.len() as f64;
    let mut remaining = degrees.len();
    let mut out = Vec::new();
    for (k, &count) in hist.iter().enumerate() {
        if count > 0 {
            out.push((k, remaining as f64 / n));
            remaining -= count;
        }
    }
    out
}

/// Number of entities with each degree, indexed by degree.
pub fn degree_histogram(degrees: &[usize]) -> Vec<usize> {
    let max = degrees.iter().copied().max().unwrap_or(0);
    let mut hist = vec![0; max + 1];
    for &k in degrees {
        hist[k] += 1;
    }
    hist
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentStats {
    pub count: usize,
    pub giant_size: usize,
    pub giant_fraction: f64,
}

/// Connected components, isolated nodes included.
pub fn components(edges: &EdgeSet) -> ComponentStats {
    let n = edges.n_nodes();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(u, v) in edges.edges() {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut size = vec![0usize; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        size[r] += 1;
    }
    let count = size.iter().filter(|&&s| s > 0).count();
    let giant_size = size.iter().copied().max().unwrap_or(0);
    ComponentStats {
        count,
        giant_size,
        giant_fraction: if n == 0 { 0.0 } else { giant_size as f64 / n as f64 },
    }
}

/// Result of a degree-preserving rewiring run.
#[derive(Debug, Clone, PartialEq)]
pub struct CmRandomization {
    pub edges: BipartiteEdgeSet,
    pub accepted_swaps: usize,
    pub attempted_swaps: usize,
    /// Set when fewer swaps than requested could be performed.
    pub incomplete: bool,
}

/// Configuration-model null: repeated double-edge swaps `(n1,f1),(n2,f2) → (n1,f2),(n2,f1)`
/// that keep every node and feature degree, rejecting swaps that would duplicate an edge.
pub fn randomize_bipartite_cm(edges: &BipartiteEdgeSet, stream: &SeedSpec, swaps_per_edge: usize) -> CmRandomization {
    let m = edges.len();
    let target = swaps_per_edge * m;
    if m < 2 {
        log::warn!("bipartite graph with {m} edges is too small to rewire; returned unchanged");
        return CmRandomization {
            edges: edges.clone(),
            accepted_swaps: 0,
            attempted_swaps: 0,
            incomplete: target > 0,
        };
    }
    let max_attempts = target.saturating_mul(100).max(1000);
    let mut list: Vec<(usize, usize)> = edges.edges().to_vec();
    let mut present: HashSet<(usize, usize)> = list.iter().copied().collect();
    let mut rng = stream.rng();
    let (mut accepted, mut attempts) = (0, 0);
    while accepted < target && attempts < max_attempts {
        attempts += 1;
        let i = rng.random_range(0..m);
        let j = rng.random_range(0..m);
        let ((n1, f1), (n2, f2)) = (list[i], list[j]);
        if n1 == n2 || f1 == f2 || present.contains(&(n1, f2)) || present.contains(&(n2, f1)) {
            continue;
        }
        present.remove(&(n1, f1));
        present.remove(&(n2, f2));
        present.insert((n1, f2));
        present.insert((n2, f1));
        list[i] = (n1, f2);
        list[j] = (n2, f1);
        accepted += 1;
    }
    let incomplete = accepted < target;
    if incomplete {
        log::warn!("degree-preserving rewiring stopped after {accepted} of {target} swaps ({attempts} attempts)");
    }
    list.sort_unstable();
    CmRandomization {
        edges: BipartiteEdgeSet::from_sorted(edges.n_nodes(), edges.n_features(), list),
        accepted_swaps: accepted,
        attempted_swaps: attempts,
        incomplete,
    }
}

/// Every statistic reported for a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub mean_degree: f64,
    pub degree_ccdf: Vec<(usize, f64)>,
    pub clustering_mean: Option<f64>,
    pub clustering_spectrum: Vec<(f64, f64)>,
    pub knn_spectrum: Vec<(f64, f64)>,
    pub mean_node_degree_bipartite: f64,
    pub mean_feature_degree: f64,
    pub node_degree_ccdf_bipartite: Vec<(usize, f64)>,
    pub feature_degree_ccdf: Vec<(usize, f64)>,
    pub bipartite_clustering_mean_nodes: Option<f64>,
    pub bipartite_clustering_mean_features: Option<f64>,
    pub bipartite_clustering_spectrum_nodes: Vec<(f64, f64)>,
    pub bipartite_clustering_spectrum_features: Vec<(f64, f64)>,
    pub knn_spectrum_bipartite_nodes: Vec<(f64, f64)>,
    pub knn_spectrum_bipartite_features: Vec<(f64, f64)>,
    /// `None` when the dataset has no labels or the graph has no edges.
    pub homophily: Option<f64>,
    pub components: ComponentStats,
}

impl MetricsReport {
    pub fn compute(
        graph: &EdgeSet,
        features: &BipartiteEdgeSet,
        labels: Option<&LabelAssignment>,
        base: f64,
    ) -> Result<Self> {
        let clustering = local_clustering(graph);
        let bc_nodes = bipartite_local_clustering(features, Side::Node);
        let bc_features = bipartite_local_clustering(features, Side::Feature);
        let node_deg = graph.degrees();
        let bn_deg = features.degrees(Side::Node);
        let bf_deg = features.degrees(Side::Feature);
        let homophily = match labels {
            Some(l) if !graph.is_empty() => Some(homophily(graph, l)?),
            _ => None,
        };
        Ok(Self {
            mean_degree: graph.mean_degree(),
            degree_ccdf: degree_ccdf(&node_deg),
            clustering_mean: mean_defined(&clustering),
            clustering_spectrum: spectrum_of(&node_deg, &clustering, base)?,
            knn_spectrum: knn_spectrum(GraphView::Unipartite(graph), base)?,
            mean_node_degree_bipartite: features.mean_node_degree(),
            mean_feature_degree: features.mean_feature_degree(),
            node_degree_ccdf_bipartite: degree_ccdf(&bn_deg),
            feature_degree_ccdf: degree_ccdf(&bf_deg),
            bipartite_clustering_mean_nodes: mean_defined(&bc_nodes),
            bipartite_clustering_mean_features: mean_defined(&bc_features),
            bipartite_clustering_spectrum_nodes: spectrum_of(&bn_deg, &bc_nodes, base)?,
            bipartite_clustering_spectrum_features: spectrum_of(&bf_deg, &bc_features, base)?,
            knn_spectrum_bipartite_nodes: knn_spectrum(GraphView::Bipartite(features, Side::Node), base)?,
            knn_spectrum_bipartite_features: knn_spectrum(GraphView::Bipartite(features, Side::Feature), base)?,
            homophily,
            components: components(graph),
        })
    }

    /// Plot-ready tables as `(file name, contents)` pairs; the summary table comes last.
    pub fn tables(&self) -> Vec<(&'static str, String)> {
        fn ccdf(header: &str, rows: &[(usize, f64)]) -> String {
            let mut s = format!("{header}\tccdf\n");
            for (k, p) in rows {
                let _ = writeln!(s, "{k}\t{}", crate::dataset::format_real(*p));
            }
            s
        }
        fn binned(header: &str, value: &str, rows: &[(f64, f64)]) -> String {
            let mut s = format!("{header}\t{value}\n");
            for (x, y) in rows {
                let _ = writeln!(s, "{}\t{}", crate::dataset::format_real(*x), crate::dataset::format_real(*y));
            }
            s
        }
        let opt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), crate::dataset::format_real);
        let mut summary = String::from("metric\tvalue\n");
        let rows: [(&str, String); 11] = [
            ("mean_degree", crate::dataset::format_real(self.mean_degree)),
            ("clustering_mean", opt(self.clustering_mean)),
            ("mean_node_degree_bipartite", crate::dataset::format_real(self.mean_node_degree_bipartite)),
            ("mean_feature_degree", crate::dataset::format_real(self.mean_feature_degree)),
            ("bipartite_clustering_mean_nodes", opt(self.bipartite_clustering_mean_nodes)),
            ("bipartite_clustering_mean_features", opt(self.bipartite_clustering_mean_features)),
            ("component_count", self.components.count.to_string()),
            ("giant_component_size", self.components.giant_size.to_string()),
            ("giant_component_fraction", crate::dataset::format_real(self.components.giant_fraction)),
            ("homophily", opt(self.homophily)),
            ("homophily_convention", "isolated nodes excluded".to_string()),
        ];
        for (name, value) in rows {
            if name.starts_with("homophily") && self.homophily.is_none() {
                continue;
            }
            let _ = writeln!(summary, "{name}\t{value}");
        }
        vec![
            ("degree_ccdf.tsv", ccdf("degree", &self.degree_ccdf)),
            ("degree_ccdf_bipartite_nodes.tsv", ccdf("degree", &self.node_degree_ccdf_bipartite)),
            ("degree_ccdf_bipartite_features.tsv", ccdf("degree", &self.feature_degree_ccdf)),
            ("clustering_spectrum.tsv", binned("degree", "clustering", &self.clustering_spectrum)),
            (
                "bipartite_clustering_spectrum_nodes.tsv",
                binned("degree", "bipartite_clustering", &self.bipartite_clustering_spectrum_nodes),
            ),
            (
                "bipartite_clustering_spectrum_features.tsv",
                binned("degree", "bipartite_clustering", &self.bipartite_clustering_spectrum_features),
            ),
            ("knn_spectrum.tsv", binned("degree", "knn", &self.knn_spectrum)),
            ("knn_spectrum_bipartite_nodes.tsv", binned("degree", "knn", &self.knn_spectrum_bipartite_nodes)),
            (
                "knn_spectrum_bipartite_features.tsv",
                binned("degree", "knn", &self.knn_spectrum_bipartite_features),
            ),
            ("summary.tsv", summary),
        ]
    }

    pub fn write_tables(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (name, body) in self.tables() {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }
}
