//! End-to-end dataset generation from a [`Recipe`].

use crate::bipartite::{generate_bipartite, place_bipartite, BipartiteEdgeSet};
use crate::dataset::{
    make_lp_split, make_nc_split, BipartiteSpec, Coordinate, Counts, DatasetBundle, DerivedConstants, KappaOverrides,
    LabelSpec, Manifest, RealizedMetrics, Recipe, SplitSpec, Splits, Task, UnipartiteSpec, FORMAT_VERSION,
};
use crate::error::{Error, Result};
use crate::labeler::assign_labels;
use crate::metrics::{bipartite_local_clustering, components, homophily, local_clustering, mean_defined, ComponentStats};
use crate::model::{to_hyperbolic, to_hyperbolic_bipartite, Side};
use crate::sampling::{kappas_from_sequence, SeedSpec, Stage};
use crate::unipartite::{generate_unipartite, place_nodes, EdgeSet};
use crate::{BipartiteParams, LabelParams, NodePlacement, UnipartiteParams};

/// Sorted `key=value` join used to key random streams.
pub fn canonical_id(pairs: &[(&str, String)]) -> String {
    let mut v: Vec<String> = pairs.iter().map(|(k, val)| format!("{k}={val}")).collect();
    v.sort();
    v.join(";")
}

pub fn topology_id(u: &UnipartiteSpec, b: &BipartiteSpec) -> String {
    canonical_id(&topology_fields(u, b))
}

fn topology_fields(u: &UnipartiteSpec, b: &BipartiteSpec) -> Vec<(&'static str, String)> {
    vec![
        ("n_nodes", u.n_nodes.to_string()),
        ("gamma", u.gamma.to_string()),
        ("mean_degree", u.mean_degree.to_string()),
        ("beta", u.beta.to_string()),
        ("n_features", b.n_features.to_string()),
        ("gamma_n", b.gamma_n.to_string()),
        ("gamma_f", b.gamma_f.to_string()),
        ("mean_node_degree", b.mean_node_degree.to_string()),
        ("beta_b", b.beta_b.to_string()),
    ]
}

/// Identifier of a full parameter point: topology parameters plus label parameters when present.
pub fn point_id(u: &UnipartiteSpec, b: &BipartiteSpec, labels: Option<&LabelSpec>) -> String {
    let mut fields = topology_fields(u, b);
    if let Some(l) = labels {
        fields.push(("n_labels", l.n_labels.to_string()));
        fields.push(("alpha", l.alpha.to_string()));
    }
    canonical_id(&fields)
}

impl Recipe {
    /// Recipe with identifiers derived from the parameters.
    pub fn new(
        master_seed: u64,
        realization: u32,
        unipartite: UnipartiteSpec,
        bipartite: BipartiteSpec,
        labels: Option<LabelSpec>,
        splits: Option<crate::dataset::SplitPlan>,
    ) -> Self {
        Self {
            master_seed,
            point_id: point_id(&unipartite, &bipartite, labels.as_ref()),
            topology_id: topology_id(&unipartite, &bipartite),
            realization,
            unipartite,
            bipartite,
            labels,
            splits,
            kappas: KappaOverrides::default(),
        }
    }

    pub fn unipartite_params(&self) -> Result<UnipartiteParams> {
        let u = &self.unipartite;
        UnipartiteParams::new(u.n_nodes, u.gamma, u.mean_degree, u.beta)
    }

    pub fn bipartite_params(&self) -> Result<BipartiteParams> {
        let b = &self.bipartite;
        BipartiteParams::new(
            self.unipartite.n_nodes,
            b.n_features,
            b.gamma_n,
            b.gamma_f,
            b.mean_node_degree,
            b.beta_b,
        )
    }

    pub fn label_params(&self) -> Result<Option<LabelParams>> {
        self.labels
            .as_ref()
            .map(|l| LabelParams::new(l.n_labels, l.alpha))
            .transpose()
    }

    fn topology_stream(&self) -> SeedSpec {
        SeedSpec::new(self.master_seed, &self.topology_id, self.realization, Stage::UnipartitePlacement)
    }

    fn point_stream(&self, stage: Stage) -> SeedSpec {
        SeedSpec::new(self.master_seed, &self.point_id, self.realization, stage)
    }
}

/// Graphs, placements and label-independent statistics of one realization.
#[derive(Debug, Clone)]
pub struct Topology {
    pub unipartite: UnipartiteParams,
    pub bipartite: BipartiteParams,
    pub nodes: Vec<NodePlacement>,
    pub nodes_bipartite: Vec<NodePlacement>,
    pub features: Vec<NodePlacement>,
    pub graph: EdgeSet,
    pub feature_graph: BipartiteEdgeSet,
    pub clustering_mean: Option<f64>,
    pub bipartite_clustering_mean_nodes: Option<f64>,
    pub bipartite_clustering_mean_features: Option<f64>,
    pub components: ComponentStats,
}

fn override_kappas(placements: &mut [NodePlacement], values: &Option<Vec<f64>>, floor: f64, what: &str) -> Result<()> {
    if let Some(values) = values {
        if values.len() != placements.len() {
            return Err(Error::invalid(format!(
                "{what}: {} hidden degrees supplied for {} entities",
                values.len(),
                placements.len()
            )));
        }
        for (p, k) in placements.iter_mut().zip(kappas_from_sequence(values, floor)?) {
            p.kappa = k;
        }
    }
    Ok(())
}

/// Samples placements and both graphs for the recipe's topology.
pub fn build_topology(recipe: &Recipe) -> Result<Topology> {
    let unipartite = recipe.unipartite_params()?;
    let bipartite = recipe.bipartite_params()?;
    let base = recipe.topology_stream();

    let mut nodes = place_nodes(&unipartite, &base)?;
    override_kappas(&mut nodes, &recipe.kappas.nodes, unipartite.kappa_min(), "node graph")?;
    let graph = generate_unipartite(&nodes, &unipartite, &base.with_stage(Stage::UnipartiteEdges))?;

    let angles: Vec<f64> = nodes.iter().map(|p| p.theta).collect();
    let (mut nodes_bipartite, mut features) =
        place_bipartite(&angles, &bipartite, &base.with_stage(Stage::BipartitePlacement))?;
    override_kappas(
        &mut nodes_bipartite,
        &recipe.kappas.nodes_bipartite,
        bipartite.kappa_n_min(),
        "bipartite nodes",
    )?;
    override_kappas(&mut features, &recipe.kappas.features, bipartite.kappa_f_min(), "features")?;
    let feature_graph = generate_bipartite(
        &nodes_bipartite,
        &features,
        &bipartite,
        &base.with_stage(Stage::BipartiteEdges),
    )?;

    Ok(Topology {
        clustering_mean: mean_defined(&local_clustering(&graph)),
        bipartite_clustering_mean_nodes: mean_defined(&bipartite_local_clustering(&feature_graph, Side::Node)),
        bipartite_clustering_mean_features: mean_defined(&bipartite_local_clustering(&feature_graph, Side::Feature)),
        components: components(&graph),
        unipartite,
        bipartite,
        nodes,
        nodes_bipartite,
        features,
        graph,
        feature_graph,
    })
}

/// Conventions recorded in every manifest.
pub fn manifest_notes(recipe: &Recipe) -> Vec<String> {
    let mut notes = vec![
        "node hidden degrees in the node-feature graph are sampled independently of the node-graph hidden degrees; only angles are shared".to_string(),
        "feature angles are uniform on the circle".to_string(),
        "graphs are not conditioned on connectedness; isolated nodes and zero-degree features are kept".to_string(),
        "clustering means average over entities with at least two neighbors".to_string(),
        "homophily averages over nodes with at least one neighbor".to_string(),
    ];
    if recipe.labels.is_some() {
        notes.push(format!(
            "topology is keyed by topology_id and shared by every label configuration of realization {}",
            recipe.realization
        ));
    }
    if let Some(plan) = &recipe.splits {
        if plan.task == Task::Lp {
            notes.push(
                "link-prediction negatives are uniform non-edges, one per validation/test positive, drawn once per split"
                    .to_string(),
            );
        }
    }
    if !recipe.kappas.is_empty() {
        notes.push("some hidden degrees were supplied explicitly and raised to the distribution minimum".to_string());
    }
    notes
}

fn coordinates<F>(placements: &[NodePlacement], radial: F) -> Result<Vec<Coordinate>>
where
    F: Fn(f64) -> Result<f64>,
{
    placements
        .iter()
        .map(|p| {
            Ok(Coordinate {
                kappa: p.kappa,
                theta: p.theta,
                r: radial(p.kappa)?,
            })
        })
        .collect()
}

/// Splits requested by the recipe, drawn from its split stage.
pub fn make_splits(recipe: &Recipe, graph: &EdgeSet) -> Result<Option<Splits>> {
    let Some(plan) = &recipe.splits else {
        return Ok(None);
    };
    let stream = recipe.point_stream(Stage::Splits);
    let spec = |index| SplitSpec { task: plan.task, index };
    Ok(Some(match plan.task {
        Task::Lp => Splits::Lp(
            (0..plan.count)
                .map(|k| make_lp_split(graph, spec(k), &stream))
                .collect::<Result<_>>()?,
        ),
        Task::Nc => Splits::Nc(
            (0..plan.count)
                .map(|k| make_nc_split(graph.n_nodes(), spec(k), &stream))
                .collect::<Result<_>>()?,
        ),
    }))
}

/// Adds labels, splits, coordinates and the manifest to a topology.
pub fn assemble(recipe: &Recipe, topology: &Topology) -> Result<DatasetBundle> {
    let angles: Vec<f64> = topology.nodes.iter().map(|p| p.theta).collect();
    let labels = match recipe.label_params()? {
        Some(lp) => Some(assign_labels(&angles, &lp, &recipe.point_stream(Stage::Labels))?),
        None => None,
    };
    let splits = make_splits(recipe, &topology.graph)?;

    let (u, b) = (&topology.unipartite, &topology.bipartite);
    let node_coords = coordinates(&topology.nodes, |k| to_hyperbolic(k, u))?;
    let node_coords_bipartite = coordinates(&topology.nodes_bipartite, |k| to_hyperbolic_bipartite(k, Side::Node, b))?;
    let feature_coords = coordinates(&topology.features, |k| to_hyperbolic_bipartite(k, Side::Feature, b))?;

    let homophily = match &labels {
        Some(l) if !topology.graph.is_empty() => Some(homophily(&topology.graph, l)?),
        _ => None,
    };
    let manifest = Manifest {
        format_version: FORMAT_VERSION,
        generator: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).to_string(),
        recipe: recipe.clone(),
        derived: DerivedConstants {
            mu: u.mu(),
            mu_b: b.mu_b(),
            radius: u.radius(),
            kappa_min: u.kappa_min(),
            kappa_n_min: b.kappa_n_min(),
            kappa_f_min: b.kappa_f_min(),
            disk_radius: u.disk_radius(),
            bipartite_disk_radius: b.disk_radius(),
            mean_feature_degree: b.mean_feature_degree(),
        },
        realized: RealizedMetrics {
            mean_degree: topology.graph.mean_degree(),
            mean_node_degree_bipartite: topology.feature_graph.mean_node_degree(),
            mean_feature_degree: topology.feature_graph.mean_feature_degree(),
            clustering_mean: topology.clustering_mean,
            bipartite_clustering_mean_nodes: topology.bipartite_clustering_mean_nodes,
            bipartite_clustering_mean_features: topology.bipartite_clustering_mean_features,
            homophily,
            component_count: topology.components.count,
            giant_component_fraction: topology.components.giant_fraction,
        },
        counts: Counts {
            n_nodes: 0,
            n_features: 0,
            n_edges: 0,
            n_bipartite_edges: 0,
            n_labels: None,
            split_task: None,
            n_splits: 0,
            split_sizes: Vec::new(),
        },
        notes: manifest_notes(recipe),
        files: Vec::new(),
    };
    let mut bundle = DatasetBundle {
        manifest,
        graph: topology.graph.clone(),
        features: topology.feature_graph.clone(),
        labels,
        node_coords,
        node_coords_bipartite,
        feature_coords,
        splits,
    };
    bundle.refresh_manifest();
    Ok(bundle)
}

/// Generates the full bundle described by `recipe`.
pub fn generate(recipe: &Recipe) -> Result<DatasetBundle> {
    assemble(recipe, &build_topology(recipe)?)
}

/// Rebuilds the bundle stored in `dir` from its manifest alone.
pub fn regenerate(dir: &std::path::Path) -> Result<DatasetBundle> {
    generate(&crate::dataset::read_manifest(dir)?.recipe)
}
