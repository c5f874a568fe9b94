//! Brute-force oracles and small random instances shared by the integration tests.
#![allow(dead_code)]

use geosynth::{BipartiteEdgeSet, EdgeSet, LabelAssignment};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi graph on `n` nodes.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> EdgeSet {
    let mut pairs = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random::<f64>() < p {
                pairs.push((u, v));
            }
        }
    }
    EdgeSet::new(n, pairs).unwrap()
}

pub fn random_bipartite(rng: &mut ChaCha8Rng, n: usize, nf: usize, p: f64) -> BipartiteEdgeSet {
    let mut pairs = Vec::new();
    for u in 0..n {
        for f in 0..nf {
            if rng.random::<f64>() < p {
                pairs.push((u, f));
            }
        }
    }
    BipartiteEdgeSet::new(n, nf, pairs).unwrap()
}

pub fn dense(e: &EdgeSet) -> Vec<Vec<bool>> {
    let n = e.n_nodes();
    let mut m = vec![vec![false; n]; n];
    for &(u, v) in e.edges() {
        m[u][v] = true;
        m[v][u] = true;
    }
    m
}

/// Node-by-feature incidence matrix.
pub fn incidence(e: &BipartiteEdgeSet) -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; e.n_features()]; e.n_nodes()];
    for &(u, f) in e.edges() {
        m[u][f] = true;
    }
    m
}

fn transpose(m: &[Vec<bool>], cols: usize) -> Vec<Vec<bool>> {
    (0..cols).map(|j| m.iter().map(|row| row[j]).collect()).collect()
}

/// Connected neighbor pairs over all neighbor pairs, for degree ≥ 2.
pub fn oracle_clustering(e: &EdgeSet) -> Vec<Option<f64>> {
    let m = dense(e);
    let n = m.len();
    (0..n)
        .map(|i| {
            let nb: Vec<usize> = (0..n).filter(|&j| m[i][j]).collect();
            if nb.len() < 2 {
                return None;
            }
            let (mut pairs, mut linked) = (0u64, 0u64);
            for a in 0..nb.len() {
                for b in a + 1..nb.len() {
                    pairs += 1;
                    if m[nb[a]][nb[b]] {
                        linked += 1;
                    }
                }
            }
            Some(linked as f64 / pairs as f64)
        })
        .collect()
}

/// `rows[i][c]` is true when entity `i` touches counterpart `c`. A neighbor pair of `i` counts
/// as connected when some entity other than `i` touches both.
fn oracle_bipartite_rows(rows: &[Vec<bool>]) -> Vec<Option<f64>> {
    let n = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            let nb: Vec<usize> = (0..width).filter(|&c| rows[i][c]).collect();
            if nb.len() < 2 {
                return None;
            }
            let (mut pairs, mut linked) = (0u64, 0u64);
            for a in 0..nb.len() {
                for b in a + 1..nb.len() {
                    pairs += 1;
                    if (0..n).any(|j| j != i && rows[j][nb[a]] && rows[j][nb[b]]) {
                        linked += 1;
                    }
                }
            }
            Some(linked as f64 / pairs as f64)
        })
        .collect()
}

pub fn oracle_bipartite_clustering_nodes(e: &BipartiteEdgeSet) -> Vec<Option<f64>> {
    oracle_bipartite_rows(&incidence(e))
}

pub fn oracle_bipartite_clustering_features(e: &BipartiteEdgeSet) -> Vec<Option<f64>> {
    oracle_bipartite_rows(&transpose(&incidence(e), e.n_features()))
}

fn oracle_knn_rows(rows: &[Vec<bool>], other_degree: &[usize]) -> Vec<Option<f64>> {
    rows.iter()
        .map(|row| {
            let nb: Vec<usize> = (0..row.len()).filter(|&c| row[c]).collect();
            if nb.is_empty() {
                return None;
            }
            let total: usize = nb.iter().map(|&c| other_degree[c]).sum();
            Some(total as f64 / nb.len() as f64)
        })
        .collect()
}

pub fn oracle_knn(e: &EdgeSet) -> Vec<Option<f64>> {
    let m = dense(e);
    let deg: Vec<usize> = m.iter().map(|r| r.iter().filter(|&&x| x).count()).collect();
    oracle_knn_rows(&m, &deg)
}

pub fn oracle_knn_bipartite_nodes(e: &BipartiteEdgeSet) -> Vec<Option<f64>> {
    let m = incidence(e);
    let t = transpose(&m, e.n_features());
    let fdeg: Vec<usize> = t.iter().map(|r| r.iter().filter(|&&x| x).count()).collect();
    oracle_knn_rows(&m, &fdeg)
}

pub fn oracle_knn_bipartite_features(e: &BipartiteEdgeSet) -> Vec<Option<f64>> {
    let m = incidence(e);
    let t = transpose(&m, e.n_features());
    let ndeg: Vec<usize> = m.iter().map(|r| r.iter().filter(|&&x| x).count()).collect();
    oracle_knn_rows(&t, &ndeg)
}

/// Mean over non-isolated nodes of the same-label neighbor fraction.
pub fn oracle_homophily(e: &EdgeSet, labels: &[usize]) -> Option<f64> {
    let m = dense(e);
    let mut fractions = Vec::new();
    for i in 0..m.len() {
        let nb: Vec<usize> = (0..m.len()).filter(|&j| m[i][j]).collect();
        if nb.is_empty() {
            continue;
        }
        let same = nb.iter().filter(|&&j| labels[j] == labels[i]).count();
        fractions.push(same as f64 / nb.len() as f64);
    }
    (!fractions.is_empty()).then(|| fractions.iter().sum::<f64>() / fractions.len() as f64)
}

pub fn random_labels(rng: &mut ChaCha8Rng, n: usize, n_labels: usize) -> LabelAssignment {
    LabelAssignment {
        centroid_angles: (0..n_labels).map(|i| i as f64).collect(),
        labels: (0..n).map(|_| rng.random_range(0..n_labels)).collect(),
    }
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let mut values: Vec<f64> = a.iter().chain(&b).copied().collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    values
        .iter()
        .map(|&x| {
            let fa = a.partition_point(|&v| v <= x) as f64 / a.len() as f64;
            let fb = b.partition_point(|&v| v <= x) as f64 / b.len() as f64;
            (fa - fb).abs()
        })
        .fold(0.0, f64::max)
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}
