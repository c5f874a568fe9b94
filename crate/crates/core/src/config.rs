//! TOML run configuration. Command-line flags override file values.
//!
//! ```toml
//! seed = 7
//! realization = 0
//!
//! [unipartite]
//! n_nodes = 2000
//! gamma = 3.5
//! mean_degree = 30.0
//! beta = 3.0
//!
//! [bipartite]
//! n_features = 200
//! gamma_n = 3.5
//! gamma_f = 2.1
//! mean_node_degree = 3.0
//! beta_b = 3.0
//!
//! [labels]
//! n_labels = 6
//! alpha = 5.0
//!
//! [splits]
//! task = "nc"
//! count = 5
//!
//! [kappas]
//! nodes = "kappa_nodes.txt"
//!
//! [sweep]
//! realizations = 10
//! alpha = [-1.0, 1.0, 5.0, 10.0]
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::dataset::{
    BipartiteSpec, KappaOverrides, LabelSpec, Recipe, SplitPlan, Task, UnipartiteSpec, DEFAULT_SPLIT_COUNT,
};
use crate::error::{Error, Result};
use crate::sampling::read_degree_sequence;
use crate::sweep::SweepGrid;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UnipartiteSection {
    pub n_nodes: Option<usize>,
    pub gamma: Option<f64>,
    pub mean_degree: Option<f64>,
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BipartiteSection {
    pub n_features: Option<usize>,
    pub gamma_n: Option<f64>,
    pub gamma_f: Option<f64>,
    pub mean_node_degree: Option<f64>,
    pub beta_b: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LabelSection {
    pub n_labels: Option<usize>,
    pub alpha: Option<f64>,
    /// Set to false to produce a bundle without labels.
    pub enabled: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitSection {
    pub task: Option<Task>,
    pub count: Option<u32>,
}

/// Paths of hidden-degree sequence files, one value per entity.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KappaSection {
    pub nodes: Option<PathBuf>,
    pub nodes_bipartite: Option<PathBuf>,
    pub features: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: Option<u64>,
    pub realization: Option<u32>,
    pub workers: Option<usize>,
    pub unipartite: UnipartiteSection,
    pub bipartite: BipartiteSection,
    pub labels: LabelSection,
    pub splits: SplitSection,
    pub kappas: KappaSection,
    pub sweep: Option<SweepGrid>,
}

impl Config {
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
                .unwrap_or(0);
            Error::parse(origin, line, e.message().to_string())
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    /// Overlays `other` onto `self`; values set in `other` win.
    pub fn merge(mut self, other: Config) -> Self {
        fn pick<T>(a: &mut Option<T>, b: Option<T>) {
            if b.is_some() {
                *a = b;
            }
        }
        pick(&mut self.seed, other.seed);
        pick(&mut self.realization, other.realization);
        pick(&mut self.workers, other.workers);
        let (u, ou) = (&mut self.unipartite, other.unipartite);
        pick(&mut u.n_nodes, ou.n_nodes);
        pick(&mut u.gamma, ou.gamma);
        pick(&mut u.mean_degree, ou.mean_degree);
        pick(&mut u.beta, ou.beta);
        let (b, ob) = (&mut self.bipartite, other.bipartite);
        pick(&mut b.n_features, ob.n_features);
        pick(&mut b.gamma_n, ob.gamma_n);
        pick(&mut b.gamma_f, ob.gamma_f);
        pick(&mut b.mean_node_degree, ob.mean_node_degree);
        pick(&mut b.beta_b, ob.beta_b);
        let (l, ol) = (&mut self.labels, other.labels);
        pick(&mut l.n_labels, ol.n_labels);
        pick(&mut l.alpha, ol.alpha);
        pick(&mut l.enabled, ol.enabled);
        pick(&mut self.splits.task, other.splits.task);
        pick(&mut self.splits.count, other.splits.count);
        let (k, ok) = (&mut self.kappas, other.kappas);
        pick(&mut k.nodes, ok.nodes);
        pick(&mut k.nodes_bipartite, ok.nodes_bipartite);
        pick(&mut k.features, ok.features);
        pick(&mut self.sweep, other.sweep);
        self
    }

    /// Single-dataset recipe. Unset parameters take the defaults of the two-panel reference figure
    /// (2000 nodes, 200 features).
    pub fn recipe(&self) -> Result<Recipe> {
        let u = &self.unipartite;
        let b = &self.bipartite;
        let unipartite = UnipartiteSpec {
            n_nodes: u.n_nodes.unwrap_or(2000),
            gamma: u.gamma.unwrap_or(3.5),
            mean_degree: u.mean_degree.unwrap_or(30.0),
            beta: u.beta.unwrap_or(3.0),
        };
        let bipartite = BipartiteSpec {
            n_features: b.n_features.unwrap_or(200),
            gamma_n: b.gamma_n.unwrap_or(3.5),
            gamma_f: b.gamma_f.unwrap_or(2.1),
            mean_node_degree: b.mean_node_degree.unwrap_or(3.0),
            beta_b: b.beta_b.unwrap_or(3.0),
        };
        let labels = self.labels.enabled.unwrap_or(true).then(|| LabelSpec {
            n_labels: self.labels.n_labels.unwrap_or(6),
            alpha: self.labels.alpha.unwrap_or(5.0),
        });
        let splits = self.splits.task.map(|task| SplitPlan {
            task,
            count: self.splits.count.unwrap_or(DEFAULT_SPLIT_COUNT),
        });
        let mut recipe = Recipe::new(
            self.seed.unwrap_or(0),
            self.realization.unwrap_or(0),
            unipartite,
            bipartite,
            labels,
            splits,
        );
        let read = |p: &Option<PathBuf>| p.as_deref().map(read_degree_sequence).transpose();
        recipe.kappas = KappaOverrides {
            nodes: read(&self.kappas.nodes)?,
            nodes_bipartite: read(&self.kappas.nodes_bipartite)?,
            features: read(&self.kappas.features)?,
        };
        // validate eagerly so errors surface before any work
        recipe.unipartite_params()?;
        recipe.bipartite_params()?;
        recipe.label_params()?;
        Ok(recipe)
    }
}
