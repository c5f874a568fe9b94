//! Acceptance criteria A1–A9. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

mod common;

use std::collections::{BTreeMap, HashSet};
use std::f64::consts::PI;
use std::path::Path;
use std::time::{Duration, Instant};

use common::*;
use geosynth::dataset::{read_manifest, BipartiteSpec, Recipe, Task, UnipartiteSpec};
use geosynth::labeler::{assign_labels_with_centroids, label_probabilities};
use geosynth::metrics::{
    average_neighbor_degree, bipartite_local_clustering, homophily, local_clustering, mean_defined,
    randomize_bipartite_cm, GraphView, DEFAULT_SWAPS_PER_EDGE,
};
use geosynth::model::{
    connection_probability_bipartite, connection_probability_h2, connection_probability_h2_bipartite,
    connection_probability_s1, to_hyperbolic, to_hyperbolic_bipartite,
};
use geosynth::pipeline::{build_topology, generate, regenerate};
use geosynth::sampling::sample_angles;
use geosynth::sweep::{bundle_dir_name, expand_grid, run_sweep, SweepGrid};
use geosynth::{
    generate_bipartite, generate_unipartite, place_bipartite, place_nodes, BipartiteParams, EdgeSet, SeedSpec, Side,
    Stage, UnipartiteParams,
};
use rand::Rng;

const SEED: u64 = 20_240_611;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit_secs: f64) -> bool {
    elapsed.as_secs_f64() < limit_secs
}

// A1 --------------------------------------------------------------------------------------------

fn a1() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let (mut worst_uni, mut worst_bip, mut worst_oracle) = (0.0f64, 0.0f64, 0.0f64);
    let mut triples = 0;
    for &gamma in &[2.1, 3.5] {
        for &k in &[3.0, 30.0] {
            for &beta in &[1.1, 3.0] {
                let p = UnipartiteParams::new(5000, gamma, k, beta).unwrap();
                let k0 = p.kappa_min();
                for _ in 0..10_000 {
                    let ka = k0 * (5000f64).powf(r.random::<f64>());
                    let kb = k0 * (5000f64).powf(r.random::<f64>());
                    let dt = PI * (1.0 - r.random::<f64>());
                    let s1 = connection_probability_s1(ka, kb, dt, &p);
                    let h2 = connection_probability_h2(
                        to_hyperbolic(ka, &p).unwrap(),
                        to_hyperbolic(kb, &p).unwrap(),
                        dt,
                        &p,
                    );
                    worst_uni = worst_uni.max((s1 - h2).abs());
                    // direct evaluation of the circle form
                    let chi = (5000.0 / (2.0 * PI)) * dt / (p.mu() * ka * kb);
                    worst_oracle = worst_oracle.max((s1 - 1.0 / (1.0 + chi.powf(beta))).abs());
                    triples += 1;
                }
            }
        }
    }
    for &gn in &[2.1, 3.5] {
        for &gf in &[2.1, 3.5] {
            for &kn in &[3.0, 30.0] {
                for &bb in &[1.1, 3.0] {
                    let p = BipartiteParams::new(5000, 2000, gn, gf, kn, bb).unwrap();
                    for _ in 0..10_000 {
                        let ka = p.kappa_n_min() * (5000f64).powf(r.random::<f64>());
                        let kb = p.kappa_f_min() * (2000f64).powf(r.random::<f64>());
                        let dt = PI * (1.0 - r.random::<f64>());
                        let s1 = connection_probability_bipartite(ka, kb, dt, &p);
                        let h2 = connection_probability_h2_bipartite(
                            to_hyperbolic_bipartite(ka, Side::Node, &p).unwrap(),
                            to_hyperbolic_bipartite(kb, Side::Feature, &p).unwrap(),
                            dt,
                            &p,
                        );
                        worst_bip = worst_bip.max((s1 - h2).abs());
                        triples += 1;
                    }
                }
            }
        }
    }
    let t = start.elapsed();
    outcome(
        worst_uni <= 1e-9 && worst_bip <= 1e-9 && worst_oracle <= 1e-9 && within(t, 1.0),
        format!(
            "{triples} triples over 24 grid points; max |S1-H2| node graph {worst_uni:.2e}, bipartite {worst_bip:.2e}; \
             max deviation from direct formula {worst_oracle:.2e}; {:.2}s (limit 1s)",
            t.as_secs_f64()
        ),
    )
}

// A2 --------------------------------------------------------------------------------------------

fn a2() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    for &gamma in &[2.1, 3.5] {
        for &beta in &[1.1, 3.0] {
            for &k in &[3.0, 30.0] {
                let p = UnipartiteParams::new(5000, gamma, k, beta).unwrap();
                let mut total = 0.0;
                for r in 0..10 {
                    let s = SeedSpec::new(SEED, format!("a2-{gamma}-{beta}-{k}"), r, Stage::UnipartitePlacement);
                    let nodes = place_nodes(&p, &s).unwrap();
                    total += generate_unipartite(&nodes, &p, &s.with_stage(Stage::UnipartiteEdges))
                        .unwrap()
                        .mean_degree();
                }
                let ratio = total / 10.0 / k;
                ok &= (ratio - 1.0).abs() <= 0.10;
                lines.push(format!("G_n(γ={gamma},β={beta},⟨k⟩={k}) {ratio:.3}"));
            }
        }
    }
    // node-feature graph; γ_f held at 3.5
    for &gn in &[2.1, 3.5] {
        for &bb in &[1.1, 3.0] {
            for &kn in &[3.0, 30.0] {
                let p = BipartiteParams::new(5000, 2000, gn, 3.5, kn, bb).unwrap();
                let mut total = 0.0;
                for r in 0..10 {
                    let s = SeedSpec::new(SEED, format!("a2b-{gn}-{bb}-{kn}"), r, Stage::BipartitePlacement);
                    let angles = sample_angles(5000, &s.with_stage(Stage::UnipartitePlacement)).unwrap();
                    let (nodes, feats) = place_bipartite(&angles, &p, &s).unwrap();
                    total += generate_bipartite(&nodes, &feats, &p, &s.with_stage(Stage::BipartiteEdges))
                        .unwrap()
                        .mean_node_degree();
                }
                let ratio = total / 10.0 / kn;
                ok &= (ratio - 1.0).abs() <= 0.10;
                lines.push(format!("G_nf(γ_n={gn},β_b={bb},⟨k_n⟩={kn}) {ratio:.3}"));
            }
        }
    }
    let t = start.elapsed();
    outcome(
        ok && within(t, 120.0),
        format!(
            "realized/target mean degree (tolerance ±0.10): {}; {:.1}s (limit 120s)",
            lines.join(", "),
            t.as_secs_f64()
        ),
    )
}

// A3 --------------------------------------------------------------------------------------------

fn identity_holds(n_nodes: usize, n_features: usize, edges: &geosynth::BipartiteEdgeSet) -> bool {
    let node_sum: usize = edges.degrees(Side::Node).iter().sum();
    let feature_sum: usize = edges.degrees(Side::Feature).iter().sum();
    let kf = edges.mean_feature_degree();
    let predicted = n_nodes as f64 / n_features as f64 * edges.mean_node_degree();
    node_sum == feature_sum && node_sum == edges.len() && (kf - predicted).abs() <= 1e-12 * kf.max(1.0)
}

fn a3() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut ok = true;
    let mut expected_kf = Vec::new();
    // every combination of the node-feature grid at full size with ⟨k_n⟩ = 3
    for &gn in &[2.1, 3.5] {
        for &gf in &[2.1, 3.5] {
            for &bb in &[1.1, 3.0] {
                let recipe = Recipe::new(
                    SEED,
                    0,
                    UnipartiteSpec {
                        n_nodes: 5000,
                        gamma: 3.5,
                        mean_degree: 3.0,
                        beta: 3.0,
                    },
                    BipartiteSpec {
                        n_features: 2000,
                        gamma_n: gn,
                        gamma_f: gf,
                        mean_node_degree: 3.0,
                        beta_b: bb,
                    },
                    None,
                    None,
                );
                let topo = build_topology(&recipe).unwrap();
                ok &= identity_holds(5000, 2000, &topo.feature_graph);
                expected_kf.push(topo.bipartite.mean_feature_degree());
                checked += 1;
            }
        }
    }
    // the whole default grid structure at reduced sizes
    let grid = SweepGrid {
        n_nodes: 250,
        n_features: 90,
        realizations: 1,
        ..SweepGrid::default()
    };
    for recipe in expand_grid(&grid, Task::Lp, SEED).unwrap() {
        let topo = build_topology(&recipe).unwrap();
        ok &= identity_holds(250, 90, &topo.feature_graph);
        checked += 1;
    }
    let kf_ok = expected_kf.iter().all(|&k| k == 7.5);
    outcome(
        ok && kf_ok,
        format!(
            "Σk_n = Σk_f = |E| and k̄_f = (N_n/N_f)·k̄_n on {checked} node-feature graphs; expected ⟨k_f⟩ at 5000/2000 \
             with ⟨k_n⟩=3: {:?}; {:.1}s",
            expected_kf[0],
            start.elapsed().as_secs_f64()
        ),
    )
}

// A4 / A5 ---------------------------------------------------------------------------------------

const HOMOPHILY_ALPHAS: [f64; 5] = [0.0, 1.0, 5.0, 10.0, -5.0];
const LABEL_COUNTS: [usize; 4] = [2, 3, 6, 10];

/// Mean homophily over 100 realizations for every (label count, α). Topology, centroids and
/// per-node uniforms are shared across α within a realization.
fn homophily_table() -> BTreeMap<(usize, i64), f64> {
    let params = UnipartiteParams::new(1000, 3.5, 30.0, 3.0).unwrap();
    let mut sums: BTreeMap<(usize, i64), f64> = BTreeMap::new();
    for r in 0..100 {
        let s = SeedSpec::new(SEED, "homophily-topology", r, Stage::UnipartitePlacement);
        let nodes = place_nodes(&params, &s).unwrap();
        let g = generate_unipartite(&nodes, &params, &s.with_stage(Stage::UnipartiteEdges)).unwrap();
        let angles: Vec<f64> = nodes.iter().map(|p| p.theta).collect();
        for &nl in &LABEL_COUNTS {
            let ls = SeedSpec::new(SEED, format!("homophily-labels-{nl}"), r, Stage::Labels);
            let centroids = sample_angles(nl, &ls.with_stage(Stage::Centroids)).unwrap();
            for &alpha in &HOMOPHILY_ALPHAS {
                let labels = assign_labels_with_centroids(&angles, centroids.clone(), alpha, &ls).unwrap();
                *sums.entry((nl, alpha as i64)).or_default() += homophily(&g, &labels).unwrap();
            }
        }
    }
    sums.into_iter().map(|(k, v)| (k, v / 100.0)).collect()
}

fn a4(table: &BTreeMap<(usize, i64), f64>, elapsed: Duration) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for &nl in &LABEL_COUNTS {
        let h = table[&(nl, 0)];
        let target = 1.0 / nl as f64;
        ok &= (h - target).abs() <= 0.02;
        parts.push(format!("N_L={nl}: {h:.4} vs {target:.4}"));
    }
    outcome(
        ok && within(elapsed, 300.0),
        format!(
            "mean H at α=0 over 100 realizations (±0.02): {}; {:.1}s (limit 300s)",
            parts.join(", "),
            elapsed.as_secs_f64()
        ),
    )
}

fn a5(table: &BTreeMap<(usize, i64), f64>) -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for &nl in &LABEL_COUNTS {
        let seq: Vec<f64> = [0, 1, 5, 10].iter().map(|&a| table[&(nl, a)]).collect();
        ok &= seq.windows(2).all(|w| w[1] > w[0]);
        parts.push(format!(
            "N_L={nl}: {}",
            seq.iter().map(|h| format!("{h:.3}")).collect::<Vec<_>>().join("<")
        ));
    }
    let (plus, minus) = (table[&(6, 5)], table[&(6, -5)]);
    ok &= plus >= minus;
    outcome(
        ok,
        format!(
            "H over α=0,1,5,10: {}; N_L=6: H(+5)={plus:.3} ≥ H(-5)={minus:.3}",
            parts.join("; ")
        ),
    )
}

// A6 --------------------------------------------------------------------------------------------

fn degrees_f64(d: Vec<usize>) -> Vec<f64> {
    d.into_iter().map(|x| x as f64).collect()
}

fn a6() -> Outcome {
    let start = Instant::now();
    let (mut c_low, mut c_high, mut ks_uni) = (Vec::new(), Vec::new(), Vec::new());
    let (mut cb_low, mut cb_high, mut cb_cm) = (Vec::new(), Vec::new(), Vec::new());
    let (mut cbf_high, mut cbf_cm) = (Vec::new(), Vec::new());
    let (mut ks_bn, mut ks_bf) = (Vec::new(), Vec::new());
    for seed in 0..10u32 {
        let mut degs = Vec::new();
        let mut bdegs = Vec::new();
        for (i, &beta) in [1.1, 3.0].iter().enumerate() {
            let p = UnipartiteParams::new(2000, 2.5, 10.0, beta).unwrap();
            let s = SeedSpec::new(SEED, "clustering-control", seed, Stage::UnipartitePlacement);
            // the same placement for both β values isolates the effect of β
            let nodes = place_nodes(&p, &s).unwrap();
            let g = generate_unipartite(
                &nodes,
                &p,
                &SeedSpec::new(SEED, format!("clustering-control-{beta}"), seed, Stage::UnipartiteEdges),
            )
            .unwrap();
            let c = mean_defined(&local_clustering(&g)).unwrap_or(0.0);
            if i == 0 { &mut c_low } else { &mut c_high }.push(c);
            degs.push(degrees_f64(g.degrees()));

            let bp = BipartiteParams::new(2000, 200, 3.0, 2.1, 10.0, beta).unwrap();
            let angles: Vec<f64> = nodes.iter().map(|n| n.theta).collect();
            let bs = SeedSpec::new(SEED, "bipartite-clustering-control", seed, Stage::BipartitePlacement);
            let (bn, bf) = place_bipartite(&angles, &bp, &bs).unwrap();
            let b = generate_bipartite(
                &bn,
                &bf,
                &bp,
                &SeedSpec::new(SEED, format!("bipartite-clustering-control-{beta}"), seed, Stage::BipartiteEdges),
            )
            .unwrap();
            let cb = mean_defined(&bipartite_local_clustering(&b, Side::Node)).unwrap_or(0.0);
            if i == 0 {
                cb_low.push(cb);
            } else {
                cb_high.push(cb);
                cbf_high.push(mean_defined(&bipartite_local_clustering(&b, Side::Feature)).unwrap_or(0.0));
                let cm = randomize_bipartite_cm(
                    &b,
                    &SeedSpec::new(SEED, "cm-baseline", seed, Stage::Randomization),
                    DEFAULT_SWAPS_PER_EDGE,
                );
                cb_cm.push(mean_defined(&bipartite_local_clustering(&cm.edges, Side::Node)).unwrap_or(0.0));
                cbf_cm.push(mean_defined(&bipartite_local_clustering(&cm.edges, Side::Feature)).unwrap_or(0.0));
            }
            bdegs.push((degrees_f64(b.degrees(Side::Node)), degrees_f64(b.degrees(Side::Feature))));
        }
        ks_uni.push(ks_statistic(&degs[0], &degs[1]));
        ks_bn.push(ks_statistic(&bdegs[0].0, &bdegs[1].0));
        ks_bf.push(ks_statistic(&bdegs[0].1, &bdegs[1].1));
    }
    let t = start.elapsed();
    let dc = mean(&c_high) - mean(&c_low);
    let dcb = mean(&cb_high) - mean(&cb_low);
    let (ks, ksn, ksf) = (mean(&ks_uni), mean(&ks_bn), mean(&ks_bf));
    let above_cm = mean(&cb_high) > mean(&cb_cm) && mean(&cbf_high) > mean(&cbf_cm);
    let parts = [
        ("clustering gap", dc >= 0.05),
        ("degree KS", ks <= 0.05),
        ("bipartite clustering gap", dcb >= 0.05),
        ("node-side KS", ksn <= 0.05),
        ("feature-side KS", ksf <= 0.05),
        ("above CM", above_cm),
        ("runtime", within(t, 120.0)),
    ];
    let failed: Vec<&str> = parts.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    outcome(
        failed.is_empty(),
        format!(
            "c̄(β=3)-c̄(β=1.1) = {:.3}-{:.3} = {dc:.3} (≥0.05); mean KS {ks:.3} (≤0.05); \
             bipartite c̄_b(β_b=3)-c̄_b(β_b=1.1) = {dcb:.3}; KS nodes {ksn:.3}, features {ksf:.3}; \
             β_b=3 vs CM: nodes {:.3} > {:.3}, features {:.3} > {:.3}; {:.1}s{}",
            mean(&c_high),
            mean(&c_low),
            mean(&cb_high),
            mean(&cb_cm),
            mean(&cbf_high),
            mean(&cbf_cm),
            t.as_secs_f64(),
            if failed.is_empty() {
                String::new()
            } else {
                format!("; failing parts: {}", failed.join(", "))
            }
        ),
    )
}

// A7 --------------------------------------------------------------------------------------------

fn a7() -> Outcome {
    // node at 0, centroids at distance 0.4 and 0.8
    let centroids = vec![0.4, 2.0 * PI - 0.8];
    let oracle = (1.0 / 0.4) / (1.0 / 0.4 + 1.0 / 0.8);
    let lib = label_probabilities(0.0, &centroids, 1.0).unwrap()[0];
    let n = 10_000;
    let angles = vec![0.0; n];
    let labels = assign_labels_with_centroids(
        &angles,
        centroids,
        1.0,
        &SeedSpec::new(SEED, "two-centroid", 0, Stage::Labels),
    )
    .unwrap();
    let hits = labels.labels.iter().filter(|&&l| l == 0).count() as f64;
    let p = 2.0 / 3.0;
    let sigma = (n as f64 * p * (1.0 - p)).sqrt();
    let z = (hits - n as f64 * p) / sigma;
    outcome(
        z.abs() <= 3.0 && (oracle - p).abs() < 1e-15 && (lib - p).abs() < 1e-12,
        format!(
            "nearer centroid chosen {hits} / {n} times, expected {:.1} ± {sigma:.1} ({z:+.2}σ); P = {lib:.15}",
            n as f64 * p
        ),
    )
}

// A8 --------------------------------------------------------------------------------------------

fn tree_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect();
    files.sort();
    files
}

fn regenerates_identically(dir: &Path) -> bool {
    let mut fresh: Vec<(String, Vec<u8>)> = regenerate(dir)
        .unwrap()
        .all_files()
        .into_iter()
        .map(|(n, b)| (n, b.into_bytes()))
        .collect();
    fresh.sort();
    fresh == tree_bytes(dir)
}

fn a8() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut check = |ok: bool, what: &str| {
        if !ok {
            failures.push(what.to_string());
        }
    };

    // counts at the default sizes
    let default = SweepGrid::default();
    let lp = expand_grid(&default, Task::Lp, SEED).unwrap();
    let nc = expand_grid(&default, Task::Nc, SEED).unwrap();
    let topologies: HashSet<(&str, u32)> = nc.iter().map(|r| (r.topology_id.as_str(), r.realization)).collect();
    let dirs: HashSet<String> = nc.iter().map(bundle_dir_name).collect();
    check(lp.len() == 1280, "default LP point count");
    check(nc.len() == 20480, "default NC point count");
    check(topologies.len() == 1280, "default NC topology count");
    check(dirs.len() == 20480, "NC bundle directories are distinct");
    check(
        lp.iter().all(|r| r.unipartite.n_nodes == 5000 && r.bipartite.n_features == 2000),
        "default sizes",
    );

    let tmp = tempfile::tempdir().unwrap();

    // one bundle at full size
    let full = &nc[nc.len() - 1];
    let full_dir = tmp.path().join("full");
    geosynth::dataset::write_bundle(&generate(full).unwrap(), &full_dir).unwrap();
    check(regenerates_identically(&full_dir), "full-size regeneration");
    let full_counts = read_manifest(&full_dir).unwrap().counts;
    check(full_counts.split_sizes == vec![[3500, 750, 750]; 5], "full-size NC split sizes");

    // the complete default grid structure at reduced node and feature counts
    let lp_grid = SweepGrid {
        n_nodes: 600,
        n_features: 150,
        ..SweepGrid::default()
    };
    let nc_grid = SweepGrid {
        n_nodes: 100,
        n_features: 40,
        ..SweepGrid::default()
    };
    let lp_root = tmp.path().join("lp");
    let nc_root = tmp.path().join("nc");
    let lp_report = run_sweep(&lp_grid, Task::Lp, SEED, &lp_root, 2).unwrap();
    let nc_report = run_sweep(&nc_grid, Task::Nc, SEED, &nc_root, 2).unwrap();
    let count_bundles = |root: &Path| {
        std::fs::read_dir(root)
            .unwrap()
            .filter(|e| e.as_ref().unwrap().path().join("manifest.json").exists())
            .count()
    };
    check(lp_report.points == 1280 && lp_report.generated == 1280, "LP sweep bundle count");
    check(count_bundles(&lp_root) == 1280, "LP bundles on disk");
    check(
        nc_report.points == 20480 && nc_report.generated == 20480 && nc_report.topologies == 1280,
        "NC sweep bundle count",
    );
    check(count_bundles(&nc_root) == 20480, "NC bundles on disk");

    // sixteen label configurations per topology, each with identical graphs
    let nc_points = expand_grid(&nc_grid, Task::Nc, SEED).unwrap();
    let mut shared: BTreeMap<(String, u32), HashSet<(String, String)>> = BTreeMap::new();
    for r in &nc_points {
        let m = read_manifest(&nc_root.join(bundle_dir_name(r))).unwrap();
        let sha = |name: &str| m.files.iter().find(|f| f.name == name).unwrap().sha256.clone();
        shared
            .entry((r.topology_id.clone(), r.realization))
            .or_default()
            .insert((sha("edges.tsv"), sha("features.tsv")));
    }
    check(shared.len() == 1280, "distinct NC topologies on disk");
    check(shared.values().all(|s| s.len() == 1), "topology reuse across label configurations");

    // regeneration from manifests
    let lp_points = expand_grid(&lp_grid, Task::Lp, SEED).unwrap();
    let sample_ok = lp_points
        .iter()
        .step_by(64)
        .map(|r| lp_root.join(bundle_dir_name(r)))
        .chain(nc_points.iter().step_by(512).map(|r| nc_root.join(bundle_dir_name(r))))
        .all(|d| regenerates_identically(&d));
    check(sample_ok, "regeneration from manifest");

    // worker count
    let sub = SweepGrid {
        gamma: vec![2.1],
        mean_degree: vec![30.0],
        gamma_n: vec![3.5],
        gamma_f: vec![2.1],
        mean_node_degree: vec![3.0],
        n_labels: vec![6],
        realizations: 2,
        ..nc_grid.clone()
    };
    let mut invariant = true;
    for workers in [1, 3] {
        let root = tmp.path().join(format!("workers-{workers}"));
        run_sweep(&sub, Task::Nc, SEED, &root, workers).unwrap();
        for r in expand_grid(&sub, Task::Nc, SEED).unwrap() {
            let name = bundle_dir_name(&r);
            invariant &= tree_bytes(&root.join(&name)) == tree_bytes(&nc_root.join(&name));
        }
    }
    check(invariant, "worker-count invariance");

    let resumed = run_sweep(&lp_grid, Task::Lp, SEED, &lp_root, 1).unwrap();
    check(resumed.generated == 0, "resumed sweep regenerates nothing");

    outcome(
        failures.is_empty(),
        format!(
            "default grid: {} LP / {} NC points over {} topologies; reduced-size sweeps wrote {} LP and {} NC bundles; \
             full-size bundle regenerated byte-identically; {:.1}s{}",
            lp.len(),
            nc.len(),
            topologies.len(),
            lp_report.generated,
            nc_report.generated,
            start.elapsed().as_secs_f64(),
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failed: {}", failures.join(", "))
            }
        ),
    )
}

// A9 --------------------------------------------------------------------------------------------

fn a9() -> Outcome {
    let mut r = rng(9);
    let mut mismatches = Vec::new();
    for trial in 0..50 {
        let n = 2 + r.random_range(0..29);
        let density = r.random_range(0.05..0.9);
        let g: EdgeSet = random_graph(&mut r, n, density);
        let nf = 1 + r.random_range(0..30);
        let density = r.random_range(0.05..0.9);
        let b = random_bipartite(&mut r, n, nf, density);
        if local_clustering(&g) != oracle_clustering(&g) {
            mismatches.push(format!("clustering #{trial}"));
        }
        if bipartite_local_clustering(&b, Side::Node) != oracle_bipartite_clustering_nodes(&b)
            || bipartite_local_clustering(&b, Side::Feature) != oracle_bipartite_clustering_features(&b)
        {
            mismatches.push(format!("bipartite clustering #{trial}"));
        }
        if average_neighbor_degree(GraphView::Unipartite(&g)) != oracle_knn(&g)
            || average_neighbor_degree(GraphView::Bipartite(&b, Side::Node)) != oracle_knn_bipartite_nodes(&b)
            || average_neighbor_degree(GraphView::Bipartite(&b, Side::Feature)) != oracle_knn_bipartite_features(&b)
        {
            mismatches.push(format!("knn #{trial}"));
        }
        let labels = random_labels(&mut r, n, 2 + trial % 5);
        let lib = homophily(&g, &labels).ok();
        if lib != oracle_homophily(&g, &labels.labels) {
            mismatches.push(format!("homophily #{trial}"));
        }
    }
    outcome(
        mismatches.is_empty(),
        if mismatches.is_empty() {
            "clustering, bipartite clustering (both sides), k̄_nn (three views) and homophily equal the brute-force \
             oracles exactly on 50 random instances of ≤ 30 nodes"
                .to_string()
        } else {
            format!("mismatches: {}", mismatches.join(", "))
        },
    )
}

// -----------------------------------------------------------------------------------------------

fn run(id: &str, title: &str, f: impl FnOnce() -> Outcome + std::panic::UnwindSafe) -> bool {
    let start = Instant::now();
    let o = std::panic::catch_unwind(f).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        outcome(false, format!("panicked: {msg}"))
    });
    println!(
        "{id} {} {title}: {} [{:.1}s]",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail,
        start.elapsed().as_secs_f64()
    );
    o.pass
}

fn main() {
    println!("acceptance criteria");
    let mut results = vec![
        run("A1", "circle/disk isomorphism", a1),
        run("A2", "mean-degree fidelity", a2),
        run("A3", "feature-degree identity", a3),
    ];
    let start = Instant::now();
    let table = std::panic::catch_unwind(homophily_table).ok();
    let elapsed = start.elapsed();
    results.push(run("A4", "homophily at α=0", || match &table {
        Some(t) => a4(t, elapsed),
        None => outcome(false, "homophily computation panicked"),
    }));
    results.push(run("A5", "homophily monotonicity and asymmetry", || match &table {
        Some(t) => a5(t),
        None => outcome(false, "homophily computation panicked"),
    }));
    results.push(run("A6", "clustering control independent of degrees", a6));
    results.push(run("A7", "two-centroid label probability", a7));
    results.push(run("A8", "grid counts and determinism", a8));
    results.push(run("A9", "metric oracles", a9));
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
