use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use geosynth::config::{BipartiteSection, Config, KappaSection, LabelSection, SplitSection, UnipartiteSection};
use geosynth::dataset::{read_bundle, write_bundle, Task};
use geosynth::metrics::{
    bipartite_local_clustering, mean_defined, randomize_bipartite_cm, MetricsReport, DEFAULT_BINNING_BASE,
    DEFAULT_SWAPS_PER_EDGE,
};
use geosynth::pipeline::{generate, make_splits};
use geosynth::sweep::{expand_grid, run_sweep, SweepGrid};
use geosynth::{Error, Result, SeedSpec, Side, Stage};

/// Synthetic graph benchmarks with controllable degree, clustering and homophily.
#[derive(Parser)]
#[command(name = "geosynth", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one dataset bundle.
    Generate(GenerateArgs),
    /// Write plot-ready metric tables for a bundle.
    Metrics(MetricsArgs),
    /// Replace the splits stored in a bundle.
    Split(SplitArgs),
    /// Generate every bundle of a parameter grid.
    Sweep(SweepArgs),
    /// Degree-preserving rewiring of a bundle's node-feature graph.
    RandomizeCm(RandomizeArgs),
}

#[derive(Args)]
struct ModelFlags {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    realization: Option<u32>,
    #[arg(long)]
    n_nodes: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    mean_degree: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    #[arg(long)]
    n_features: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    gamma_n: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    gamma_f: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    mean_node_degree: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta_b: Option<f64>,
    #[arg(long)]
    n_labels: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Omit labels from the bundle.
    #[arg(long)]
    no_labels: bool,
    /// Split task: lp or nc.
    #[arg(long)]
    task: Option<Task>,
    #[arg(long)]
    splits: Option<u32>,
    /// Hidden-degree sequence for node-graph nodes, one value per line.
    #[arg(long)]
    node_kappas: Option<PathBuf>,
    #[arg(long)]
    node_bipartite_kappas: Option<PathBuf>,
    #[arg(long)]
    feature_kappas: Option<PathBuf>,
}

impl ModelFlags {
    fn as_config(&self) -> Config {
        Config {
            seed: self.seed,
            realization: self.realization,
            workers: None,
            unipartite: UnipartiteSection {
                n_nodes: self.n_nodes,
                gamma: self.gamma,
                mean_degree: self.mean_degree,
                beta: self.beta,
            },
            bipartite: BipartiteSection {
                n_features: self.n_features,
                gamma_n: self.gamma_n,
                gamma_f: self.gamma_f,
                mean_node_degree: self.mean_node_degree,
                beta_b: self.beta_b,
            },
            labels: LabelSection {
                n_labels: self.n_labels,
                alpha: self.alpha,
                enabled: self.no_labels.then_some(false),
            },
            splits: SplitSection {
                task: self.task,
                count: self.splits,
            },
            kappas: KappaSection {
                nodes: self.node_kappas.clone(),
                nodes_bipartite: self.node_bipartite_kappas.clone(),
                features: self.feature_kappas.clone(),
            },
            sweep: None,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    /// TOML configuration file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for the bundle.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    model: ModelFlags,
}

#[derive(Args)]
struct MetricsArgs {
    #[arg(long)]
    bundle: PathBuf,
    /// Directory for the tables; defaults to `<bundle>/metrics`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Ratio between consecutive degree bins.
    #[arg(long, default_value_t = DEFAULT_BINNING_BASE)]
    base: f64,
}

#[derive(Args)]
struct SplitArgs {
    #[arg(long)]
    bundle: PathBuf,
    #[arg(long)]
    task: Task,
    #[arg(long, default_value_t = geosynth::dataset::DEFAULT_SPLIT_COUNT)]
    count: u32,
    /// Write the updated bundle here instead of in place.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    task: Task,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    workers: Option<usize>,
    /// Print the point count and exit without writing anything.
    #[arg(long)]
    dry_run: bool,
    #[arg(long)]
    n_nodes: Option<usize>,
    #[arg(long)]
    n_features: Option<usize>,
    #[arg(long)]
    realizations: Option<u32>,
}

#[derive(Args)]
struct RandomizeArgs {
    #[arg(long)]
    bundle: PathBuf,
    /// Destination of the rewired node-feature edge list.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SWAPS_PER_EDGE)]
    swaps_per_edge: usize,
    /// Seed of the rewiring stream; defaults to the bundle's master seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn load_config(path: &Option<PathBuf>) -> Result<Config> {
    path.as_deref().map(Config::load).transpose().map(Option::unwrap_or_default)
}

fn cmd_generate(args: GenerateArgs) -> Result<()> {
    let recipe = load_config(&args.config)?.merge(args.model.as_config()).recipe()?;
    log::info!("generating {} (realization {})", recipe.point_id, recipe.realization);
    let bundle = generate(&recipe)?;
    write_bundle(&bundle, &args.out)?;
    let r = &bundle.manifest.realized;
    log::info!(
        "wrote {}: {} edges (mean degree {:.3}), {} node-feature links",
        args.out.display(),
        bundle.graph.len(),
        r.mean_degree,
        bundle.features.len()
    );
    println!("{}", args.out.display());
    Ok(())
}

fn cmd_metrics(args: MetricsArgs) -> Result<()> {
    let bundle = read_bundle(&args.bundle)?;
    let report = MetricsReport::compute(&bundle.graph, &bundle.features, bundle.labels.as_ref(), args.base)?;
    let out = args.out.unwrap_or_else(|| args.bundle.join("metrics"));
    report.write_tables(&out)?;
    log::info!("metric tables written to {}", out.display());
    let summary = report.tables().pop().map(|(_, body)| body).unwrap_or_default();
    print!("{summary}");
    Ok(())
}

fn remove_split_files(dir: &Path) -> Result<()> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::Io {
        path: dir.to_path_buf(),
        source: e,
    })?;
    for entry in entries.flatten() {
        let name = entry.file_name().to_string_lossy().into_owned();
        if name.starts_with("split_") && name.ends_with(".tsv") {
            std::fs::remove_file(entry.path()).map_err(|e| Error::Io {
                path: entry.path(),
                source: e,
            })?;
        }
    }
    Ok(())
}

fn cmd_split(args: SplitArgs) -> Result<()> {
    let mut bundle = read_bundle(&args.bundle)?;
    bundle.manifest.recipe.splits = Some(geosynth::dataset::SplitPlan {
        task: args.task,
        count: args.count,
    });
    bundle.splits = make_splits(&bundle.manifest.recipe, &bundle.graph)?;
    bundle.refresh_manifest();
    let out = args.out.unwrap_or(args.bundle);
    if out.exists() {
        remove_split_files(&out)?;
    }
    write_bundle(&bundle, &out)?;
    for sizes in &bundle.manifest.counts.split_sizes {
        println!("{}\t{}\t{}", sizes[0], sizes[1], sizes[2]);
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let config = load_config(&args.config)?;
    let mut grid = config.sweep.clone().unwrap_or_else(SweepGrid::default);
    if let Some(n) = args.n_nodes {
        grid.n_nodes = n;
    }
    if let Some(n) = args.n_features {
        grid.n_features = n;
    }
    if let Some(r) = args.realizations {
        grid.realizations = r;
    }
    let seed = args.seed.or(config.seed).unwrap_or(0);
    if args.dry_run {
        let points = expand_grid(&grid, args.task, seed)?;
        println!("points\t{}", points.len());
        println!("topologies\t{}", grid.topology_count());
        return Ok(());
    }
    let out = args
        .out
        .ok_or_else(|| Error::InvalidArgument("--out is required unless --dry-run is given".into()))?;
    let workers = args
        .workers
        .or(config.workers)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let report = run_sweep(&grid, args.task, seed, &out, workers)?;
    log::info!(
        "{} bundles over {} topologies: {} generated, {} already complete",
        report.points,
        report.topologies,
        report.generated,
        report.skipped
    );
    println!("{}", report.summary_path.display());
    Ok(())
}

fn cmd_randomize(args: RandomizeArgs) -> Result<()> {
    let bundle = read_bundle(&args.bundle)?;
    let recipe = &bundle.manifest.recipe;
    let stream = SeedSpec::new(
        args.seed.unwrap_or(recipe.master_seed),
        &recipe.point_id,
        recipe.realization,
        Stage::Randomization,
    );
    let rewired = randomize_bipartite_cm(&bundle.features, &stream, args.swaps_per_edge);
    let mut body = String::with_capacity(rewired.edges.len() * 12);
    for (n, f) in rewired.edges.edges() {
        body.push_str(&format!("{n}\t{f}\n"));
    }
    std::fs::write(&args.out, body).map_err(|e| Error::Io {
        path: args.out.clone(),
        source: e,
    })?;
    let fmt = |x: Option<f64>| x.map(geosynth::dataset::format_real).unwrap_or_else(|| "NA".into());
    let mut stdout = std::io::stdout().lock();
    let _ = writeln!(stdout, "side\toriginal\trandomized");
    for (name, side) in [("nodes", Side::Node), ("features", Side::Feature)] {
        let before = mean_defined(&bipartite_local_clustering(&bundle.features, side));
        let after = mean_defined(&bipartite_local_clustering(&rewired.edges, side));
        let _ = writeln!(stdout, "{name}\t{}\t{}", fmt(before), fmt(after));
    }
    let _ = writeln!(stdout, "swaps\t{}\t{}", rewired.accepted_swaps, rewired.attempted_swaps);
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Metrics(a) => cmd_metrics(a),
        Command::Split(a) => cmd_split(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::RandomizeCm(a) => cmd_randomize(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => ExitCode::from(4),
    }
}
