//! Parameter-grid expansion and resumable, parallel sweeps.
//!
//! Points that differ only in label parameters share one topology per
//! realization; it is sampled once and reused for every label configuration.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{
    bundle_is_complete, format_exact, read_manifest, sha256_hex, write_bundle, BipartiteSpec, LabelSpec, Manifest,
    Recipe, SplitPlan, Task, UnipartiteSpec, DEFAULT_SPLIT_COUNT,
};
use crate::error::{Error, Result};
use crate::pipeline::{assemble, build_topology};

pub const SUMMARY_FILE: &str = "summary.tsv";

/// Value lists per parameter. Every combination is one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepGrid {
    pub n_nodes: usize,
    pub n_features: usize,
    pub gamma: Vec<f64>,
    pub mean_degree: Vec<f64>,
    pub beta: Vec<f64>,
    pub gamma_n: Vec<f64>,
    pub gamma_f: Vec<f64>,
    pub mean_node_degree: Vec<f64>,
    pub beta_b: Vec<f64>,
    pub n_labels: Vec<usize>,
    pub alpha: Vec<f64>,
    pub realizations: u32,
    pub splits: u32,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            n_nodes: 5000,
            n_features: 2000,
            gamma: vec![2.1, 3.5],
            mean_degree: vec![3.0, 30.0],
            beta: vec![1.1, 3.0],
            gamma_n: vec![2.1, 3.5],
            gamma_f: vec![2.1, 3.5],
            mean_node_degree: vec![3.0, 30.0],
            beta_b: vec![1.1, 3.0],
            n_labels: vec![2, 3, 6, 10],
            alpha: vec![-1.0, 1.0, 5.0, 10.0],
            realizations: 10,
            splits: DEFAULT_SPLIT_COUNT,
        }
    }
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        let lists: [(&str, usize); 10] = [
            ("gamma", self.gamma.len()),
            ("mean_degree", self.mean_degree.len()),
            ("beta", self.beta.len()),
            ("gamma_n", self.gamma_n.len()),
            ("gamma_f", self.gamma_f.len()),
            ("mean_node_degree", self.mean_node_degree.len()),
            ("beta_b", self.beta_b.len()),
            ("n_labels", self.n_labels.len()),
            ("alpha", self.alpha.len()),
            ("realizations", self.realizations as usize),
        ];
        if let Some((name, _)) = lists.iter().find(|(_, n)| *n == 0) {
            return Err(Error::invalid(format!("sweep grid: '{name}' is empty")));
        }
        if self.splits == 0 {
            return Err(Error::invalid("sweep grid: 'splits' must be at least 1"));
        }
        Ok(())
    }

    /// Number of distinct topologies times realizations.
    pub fn topology_count(&self) -> usize {
        self.gamma.len()
            * self.mean_degree.len()
            * self.beta.len()
            * self.gamma_n.len()
            * self.gamma_f.len()
            * self.mean_node_degree.len()
            * self.beta_b.len()
            * self.realizations as usize
    }

    pub fn point_count(&self, task: Task) -> usize {
        match task {
            Task::Lp => self.topology_count(),
            Task::Nc => self.topology_count() * self.n_labels.len() * self.alpha.len(),
        }
    }
}

/// Every grid point for `task`, in canonical order: topology, then label configuration, then realization.
pub fn expand_grid(grid: &SweepGrid, task: Task, master_seed: u64) -> Result<Vec<Recipe>> {
    grid.validate()?;
    let labels: Vec<Option<LabelSpec>> = match task {
        Task::Lp => vec![None],
        Task::Nc => grid
            .n_labels
            .iter()
            .flat_map(|&n_labels| grid.alpha.iter().map(move |&alpha| Some(LabelSpec { n_labels, alpha })))
            .collect(),
    };
    let mut out = Vec::with_capacity(grid.point_count(task));
    for &gamma in &grid.gamma {
        for &mean_degree in &grid.mean_degree {
            for &beta in &grid.beta {
                for &gamma_n in &grid.gamma_n {
                    for &gamma_f in &grid.gamma_f {
                        for &mean_node_degree in &grid.mean_node_degree {
                            for &beta_b in &grid.beta_b {
                                let u = UnipartiteSpec {
                                    n_nodes: grid.n_nodes,
                                    gamma,
                                    mean_degree,
                                    beta,
                                };
                                let b = BipartiteSpec {
                                    n_features: grid.n_features,
                                    gamma_n,
                                    gamma_f,
                                    mean_node_degree,
                                    beta_b,
                                };
                                for l in &labels {
                                    for realization in 0..grid.realizations {
                                        out.push(Recipe::new(
                                            master_seed,
                                            realization,
                                            u.clone(),
                                            b.clone(),
                                            l.clone(),
                                            Some(SplitPlan {
                                                task,
                                                count: grid.splits,
                                            }),
                                        ));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Directory name of a bundle below the sweep root.
pub fn bundle_dir_name(recipe: &Recipe) -> String {
    format!("{}-r{:03}", &sha256_hex(recipe.point_id.as_bytes())[..16], recipe.realization)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub points: usize,
    pub topologies: usize,
    /// Bundles written in this run; zero when resuming a finished sweep.
    pub generated: usize,
    pub skipped: usize,
    pub summary_path: PathBuf,
}

fn is_current(dir: &Path, recipe: &Recipe) -> bool {
    bundle_is_complete(dir) && read_manifest(dir).map(|m| m.recipe == *recipe).unwrap_or(false)
}

/// Generates every missing or partial bundle of the grid below `root` using `workers` threads.
pub fn run_sweep(grid: &SweepGrid, task: Task, master_seed: u64, root: &Path, workers: usize) -> Result<SweepReport> {
    let points = expand_grid(grid, task, master_seed)?;
    std::fs::create_dir_all(root).map_err(|e| Error::io(root, e))?;

    let mut groups: BTreeMap<(String, u32), Vec<&Recipe>> = BTreeMap::new();
    for r in &points {
        groups.entry((r.topology_id.clone(), r.realization)).or_default().push(r);
    }
    let groups: Vec<Vec<&Recipe>> = groups.into_values().collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Invariant(format!("cannot start worker pool: {e}")))?;
    let total_groups = groups.len();
    let done = std::sync::atomic::AtomicUsize::new(0);
    let generated: Vec<usize> = pool.install(|| {
        groups
            .par_iter()
            .map(|group| {
                let pending: Vec<&Recipe> = group
                    .iter()
                    .copied()
                    .filter(|r| !is_current(&root.join(bundle_dir_name(r)), r))
                    .collect();
                if !pending.is_empty() {
                    let topology = build_topology(pending[0])?;
                    for r in &pending {
                        write_bundle(&assemble(r, &topology)?, &root.join(bundle_dir_name(r)))?;
                    }
                }
                let n = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
                if n % 64 == 0 || n == total_groups {
                    log::info!("sweep: {n}/{total_groups} topologies done");
                }
                Ok(pending.len())
            })
            .collect::<Result<Vec<usize>>>()
    })?;
    let generated: usize = generated.iter().sum();

    let manifests = points
        .iter()
        .map(|r| read_manifest(&root.join(bundle_dir_name(r))))
        .collect::<Result<Vec<Manifest>>>()?;
    let summary_path = root.join(SUMMARY_FILE);
    let body = summary_table(&manifests);
    std::fs::write(&summary_path, body).map_err(|e| Error::io(&summary_path, e))?;

    Ok(SweepReport {
        points: points.len(),
        topologies: total_groups,
        generated,
        skipped: points.len() - generated,
        summary_path,
    })
}

fn opt(x: Option<f64>) -> String {
    x.map(format_exact).unwrap_or_default()
}

/// One row per bundle: identifiers, parameters and realized metrics.
pub fn summary_table(manifests: &[Manifest]) -> String {
    let mut out = String::from(
        "bundle\tpoint_id\ttopology_id\trealization\tn_nodes\tn_features\tgamma\tmean_degree\tbeta\tgamma_n\tgamma_f\t\
         mean_node_degree\tbeta_b\tn_labels\talpha\tmean_degree_realized\tmean_node_degree_realized\t\
         mean_feature_degree_realized\tclustering\tbipartite_clustering_nodes\tbipartite_clustering_features\t\
         homophily\tcomponents\tgiant_fraction\n",
    );
    for m in manifests {
        let (r, x) = (&m.recipe, &m.realized);
        let (u, b) = (&r.unipartite, &r.bipartite);
        let fields = [
            bundle_dir_name(r),
            r.point_id.clone(),
            r.topology_id.clone(),
            r.realization.to_string(),
            u.n_nodes.to_string(),
            b.n_features.to_string(),
            format_exact(u.gamma),
            format_exact(u.mean_degree),
            format_exact(u.beta),
            format_exact(b.gamma_n),
            format_exact(b.gamma_f),
            format_exact(b.mean_node_degree),
            format_exact(b.beta_b),
            r.labels.as_ref().map(|l| l.n_labels.to_string()).unwrap_or_default(),
            opt(r.labels.as_ref().map(|l| l.alpha)),
            format_exact(x.mean_degree),
            format_exact(x.mean_node_degree_bipartite),
            format_exact(x.mean_feature_degree),
            opt(x.clustering_mean),
            opt(x.bipartite_clustering_mean_nodes),
            opt(x.bipartite_clustering_mean_features),
            opt(x.homophily),
            x.component_count.to_string(),
            format_exact(x.giant_component_fraction),
        ];
        out.push_str(&fields.join("\t"));
        out.push('\n');
    }
    out
}
