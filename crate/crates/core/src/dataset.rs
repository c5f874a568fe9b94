//! On-disk dataset bundles and train/validation/test splits.
//!
//! A bundle is a directory of tab-separated text files plus `manifest.json`:
//!
//! | file | rows |
//! |------|------|
//! | `edges.tsv` | `u⇥v`, `u < v`, sorted |
//! | `features.tsv` | `node⇥feature`, sorted |
//! | `labels.tsv` | `node⇥label` (labelled bundles only) |
//! | `centroids.tsv` | `label⇥θ` (labelled bundles only) |
//! | `coords_nodes.tsv` | `id⇥κ⇥θ⇥r` in the node graph |
//! | `coords_nodes_bipartite.tsv` | `id⇥κ_n⇥θ⇥r_n` in the node–feature graph |
//! | `coords_features.tsv` | `id⇥κ_f⇥θ_f⇥r_f` |
//! | `split_lp_<k>.tsv` | `u⇥v⇥partition⇥label` |
//! | `split_nc_<k>.tsv` | `node⇥partition` |
//!
//! Ids are 0-based, reals carry 12 significant digits, and every file ends
//! with a newline. The manifest is written last; a directory without a valid
//! manifest is an incomplete bundle.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bipartite::BipartiteEdgeSet;
use crate::error::{Error, Result};
use crate::labeler::LabelAssignment;
use crate::sampling::{SeedSpec, Stage};
use crate::unipartite::EdgeSet;

pub const FORMAT_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";
/// Splits generated per bundle.
pub const DEFAULT_SPLIT_COUNT: u32 = 5;

/// Formats a real with 12 significant digits, like C's `%.12g`.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let fixed = format!("{:.*}", (11 - exp) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

/// Shortest representation that parses back to the same `f64`; used for data files.
pub fn format_exact(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Learning task a split is made for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    /// Link prediction.
    Lp,
    /// Node classification.
    Nc,
}

impl Task {
    /// `(train, validation, test)` fractions.
    pub fn fractions(self) -> (f64, f64, f64) {
        match self {
            Task::Lp => (0.85, 0.05, 0.10),
            Task::Nc => (0.70, 0.15, 0.15),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Task::Lp => "lp",
            Task::Nc => "nc",
        }
    }

    fn lane_base(self) -> u64 {
        match self {
            Task::Lp => 0,
            Task::Nc => 1 << 32,
        }
    }
}

impl std::str::FromStr for Task {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lp" => Ok(Task::Lp),
            "nc" => Ok(Task::Nc),
            other => Err(Error::invalid(format!("unknown task {other:?}, expected lp or nc"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSpec {
    pub task: Task,
    pub index: u32,
}

/// Sizes of the validation and test portions; training takes the rounding remainder.
pub fn partition_sizes(total: usize, task: Task) -> (usize, usize, usize) {
    let (_, fv, ft) = task.fractions();
    let valid = (total as f64 * fv).round() as usize;
    let test = (total as f64 * ft).round() as usize;
    (total - valid - test, valid, test)
}

fn split_rng(stream: &SeedSpec, spec: SplitSpec) -> rand_chacha::ChaCha8Rng {
    stream.with_stage(Stage::Splits).lane(spec.task.lane_base() + spec.index as u64)
}

/// Link-prediction split: partitioned positive edges plus sampled non-edges for evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSplit {
    pub index: u32,
    pub train: Vec<(usize, usize)>,
    pub valid: Vec<(usize, usize)>,
    pub test: Vec<(usize, usize)>,
    pub valid_negatives: Vec<(usize, usize)>,
    pub test_negatives: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcSplit {
    pub index: u32,
    pub train: Vec<usize>,
    pub valid: Vec<usize>,
    pub test: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Splits {
    Lp(Vec<LpSplit>),
    Nc(Vec<NcSplit>),
}

impl Splits {
    pub fn task(&self) -> Task {
        match self {
            Splits::Lp(_) => Task::Lp,
            Splits::Nc(_) => Task::Nc,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Splits::Lp(s) => s.len(),
            Splits::Nc(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Partitions the edges 85/5/10 and draws as many non-edges as there are validation and test positives.
pub fn make_lp_split(edges: &EdgeSet, spec: SplitSpec, stream: &SeedSpec) -> Result<LpSplit> {
    if spec.task != Task::Lp {
        return Err(Error::invalid("make_lp_split needs a link-prediction split spec"));
    }
    let m = edges.len();
    if m < 20 {
        return Err(Error::Split(format!("link prediction needs at least 20 edges, graph has {m}")));
    }
    let (_, n_valid, n_test) = partition_sizes(m, Task::Lp);
    if n_test == 0 {
        return Err(Error::Split(format!("{m} edges leave an empty test set")));
    }
    let mut rng = split_rng(stream, spec);
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut rng);
    let pick = |idx: &[usize]| {
        let mut v: Vec<(usize, usize)> = idx.iter().map(|&i| edges.edges()[i]).collect();
        v.sort_unstable();
        v
    };
    let test = pick(&order[..n_test]);
    let valid = pick(&order[n_test..n_test + n_valid]);
    let train = pick(&order[n_test + n_valid..]);

    let n = edges.n_nodes();
    let needed = n_valid + n_test;
    let available = n * (n - 1) / 2 - m;
    if available < needed {
        return Err(Error::Split(format!(
            "graph has {available} non-edges, {needed} negatives required"
        )));
    }
    let negatives: Vec<(usize, usize)> = if available < 4 * needed {
        // dense graph: enumerate the complement
        let mut all: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !edges.contains(u, v))
            .collect();
        all.shuffle(&mut rng);
        all.truncate(needed);
        all
    } else {
        let mut chosen = HashSet::with_capacity(needed);
        let mut out = Vec::with_capacity(needed);
        while out.len() < needed {
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            if a == b {
                continue;
            }
            let pair = (a.min(b), a.max(b));
            if edges.contains(pair.0, pair.1) || !chosen.insert(pair) {
                continue;
            }
            out.push(pair);
        }
        out
    };
    let mut valid_negatives = negatives[..n_valid].to_vec();
    let mut test_negatives = negatives[n_valid..].to_vec();
    valid_negatives.sort_unstable();
    test_negatives.sort_unstable();
    Ok(LpSplit {
        index: spec.index,
        train,
        valid,
        test,
        valid_negatives,
        test_negatives,
    })
}

/// Partitions the nodes 70/15/15.
pub fn make_nc_split(n_nodes: usize, spec: SplitSpec, stream: &SeedSpec) -> Result<NcSplit> {
    if spec.task != Task::Nc {
        return Err(Error::invalid("make_nc_split needs a node-classification split spec"));
    }
    if n_nodes < 20 {
        return Err(Error::Split(format!("node classification needs at least 20 nodes, got {n_nodes}")));
    }
    let (_, n_valid, n_test) = partition_sizes(n_nodes, Task::Nc);
    let mut order: Vec<usize> = (0..n_nodes).collect();
    order.shuffle(&mut split_rng(stream, spec));
    let sorted = |s: &[usize]| {
        let mut v = s.to_vec();
        v.sort_unstable();
        v
    };
    Ok(NcSplit {
        index: spec.index,
        test: sorted(&order[..n_test]),
        valid: sorted(&order[n_test..n_test + n_valid]),
        train: sorted(&order[n_test + n_valid..]),
    })
}

/// Hidden degree, angle and hyperbolic radius of one entity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coordinate {
    pub kappa: f64,
    pub theta: f64,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnipartiteSpec {
    pub n_nodes: usize,
    pub gamma: f64,
    pub mean_degree: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BipartiteSpec {
    pub n_features: usize,
    pub gamma_n: f64,
    pub gamma_f: f64,
    pub mean_node_degree: f64,
    pub beta_b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelSpec {
    pub n_labels: usize,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub task: Task,
    pub count: u32,
}

/// Hidden degrees supplied explicitly instead of sampled from the power law.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct KappaOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes_bipartite: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub features: Option<Vec<f64>>,
}

impl KappaOverrides {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_none() && self.nodes_bipartite.is_none() && self.features.is_none()
    }
}

/// Everything needed to regenerate a bundle byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recipe {
    pub master_seed: u64,
    /// Keys the label and split streams.
    pub point_id: String,
    /// Keys the graph and placement streams; shared by bundles that differ only in labels.
    pub topology_id: String,
    pub realization: u32,
    pub unipartite: UnipartiteSpec,
    pub bipartite: BipartiteSpec,
    #[serde(default)]
    pub labels: Option<LabelSpec>,
    #[serde(default)]
    pub splits: Option<SplitPlan>,
    #[serde(default, skip_serializing_if = "KappaOverrides::is_empty")]
    pub kappas: KappaOverrides,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    pub mu: f64,
    pub mu_b: f64,
    pub radius: f64,
    pub kappa_min: f64,
    pub kappa_n_min: f64,
    pub kappa_f_min: f64,
    pub disk_radius: f64,
    pub bipartite_disk_radius: f64,
    pub mean_feature_degree: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizedMetrics {
    pub mean_degree: f64,
    pub mean_node_degree_bipartite: f64,
    pub mean_feature_degree: f64,
    pub clustering_mean: Option<f64>,
    pub bipartite_clustering_mean_nodes: Option<f64>,
    pub bipartite_clustering_mean_features: Option<f64>,
    pub homophily: Option<f64>,
    pub component_count: usize,
    pub giant_component_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub n_nodes: usize,
    pub n_features: usize,
    pub n_edges: usize,
    pub n_bipartite_edges: usize,
    pub n_labels: Option<usize>,
    pub split_task: Option<Task>,
    pub n_splits: usize,
    /// `[train, valid, test]` sizes of each split (positives for link prediction).
    pub split_sizes: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    pub name: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub generator: String,
    pub recipe: Recipe,
    pub derived: DerivedConstants,
    pub realized: RealizedMetrics,
    pub counts: Counts,
    pub notes: Vec<String>,
    pub files: Vec<FileEntry>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// The persisted unit: graphs, coordinates, optional labels and splits, and the manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetBundle {
    pub manifest: Manifest,
    pub graph: EdgeSet,
    pub features: BipartiteEdgeSet,
    pub labels: Option<LabelAssignment>,
    pub node_coords: Vec<Coordinate>,
    pub node_coords_bipartite: Vec<Coordinate>,
    pub feature_coords: Vec<Coordinate>,
    pub splits: Option<Splits>,
}

fn coords_table(coords: &[Coordinate]) -> String {
    let mut s = String::with_capacity(coords.len() * 48);
    for (i, c) in coords.iter().enumerate() {
        let _ = writeln!(
            s,
            "{i}\t{}\t{}\t{}",
            format_exact(c.kappa),
            format_exact(c.theta),
            format_exact(c.r)
        );
    }
    s
}

fn pairs_table(pairs: &[(usize, usize)]) -> String {
    let mut s = String::with_capacity(pairs.len() * 12);
    for (a, b) in pairs {
        let _ = writeln!(s, "{a}\t{b}");
    }
    s
}

impl DatasetBundle {
    /// Data files in write order, manifest excluded.
    pub fn data_files(&self) -> Vec<(String, String)> {
        let mut files = vec![
            ("edges.tsv".to_string(), pairs_table(self.graph.edges())),
            ("features.tsv".to_string(), pairs_table(self.features.edges())),
        ];
        if let Some(l) = &self.labels {
            let mut s = String::new();
            for (i, x) in l.labels.iter().enumerate() {
                let _ = writeln!(s, "{i}\t{x}");
            }
            files.push(("labels.tsv".into(), s));
            let mut c = String::new();
            for (i, a) in l.centroid_angles.iter().enumerate() {
                let _ = writeln!(c, "{i}\t{}", format_exact(*a));
            }
            files.push(("centroids.tsv".into(), c));
        }
        files.push(("coords_nodes.tsv".into(), coords_table(&self.node_coords)));
        files.push(("coords_nodes_bipartite.tsv".into(), coords_table(&self.node_coords_bipartite)));
        files.push(("coords_features.tsv".into(), coords_table(&self.feature_coords)));
        match &self.splits {
            Some(Splits::Lp(splits)) => {
                for sp in splits {
                    let mut s = String::new();
                    let groups: [(&[(usize, usize)], &str, u8); 5] = [
                        (&sp.train, "train", 1),
                        (&sp.valid, "valid", 1),
                        (&sp.valid_negatives, "valid", 0),
                        (&sp.test, "test", 1),
                        (&sp.test_negatives, "test", 0),
                    ];
                    for (pairs, part, label) in groups {
                        for (u, v) in pairs {
                            let _ = writeln!(s, "{u}\t{v}\t{part}\t{label}");
                        }
                    }
                    files.push((format!("split_lp_{}.tsv", sp.index), s));
                }
            }
            Some(Splits::Nc(splits)) => {
                for sp in splits {
                    let mut role = vec![""; self.graph.n_nodes()];
                    for (set, name) in [(&sp.train, "train"), (&sp.valid, "valid"), (&sp.test, "test")] {
                        for &i in set {
                            role[i] = name;
                        }
                    }
                    let mut s = String::new();
                    for (i, r) in role.iter().enumerate() {
                        let _ = writeln!(s, "{i}\t{r}");
                    }
                    files.push((format!("split_nc_{}.tsv", sp.index), s));
                }
            }
            None => {}
        }
        files
    }

    /// Recomputes manifest counts and the file table from the current contents.
    pub fn refresh_manifest(&mut self) {
        let split_sizes = match &self.splits {
            Some(Splits::Lp(s)) => s.iter().map(|x| [x.train.len(), x.valid.len(), x.test.len()]).collect(),
            Some(Splits::Nc(s)) => s.iter().map(|x| [x.train.len(), x.valid.len(), x.test.len()]).collect(),
            None => Vec::new(),
        };
        self.manifest.counts = Counts {
            n_nodes: self.graph.n_nodes(),
            n_features: self.features.n_features(),
            n_edges: self.graph.len(),
            n_bipartite_edges: self.features.len(),
            n_labels: self.labels.as_ref().map(|l| l.n_labels()),
            split_task: self.splits.as_ref().map(Splits::task),
            n_splits: self.splits.as_ref().map_or(0, Splits::len),
            split_sizes,
        };
        self.manifest.recipe.splits = self.splits.as_ref().map(|s| SplitPlan {
            task: s.task(),
            count: s.len() as u32,
        });
        self.manifest.files = self
            .data_files()
            .iter()
            .map(|(name, body)| FileEntry {
                name: name.clone(),
                bytes: body.len() as u64,
                sha256: sha256_hex(body.as_bytes()),
            })
            .collect();
    }

    /// All files including the manifest, as written to disk.
    pub fn all_files(&self) -> Vec<(String, String)> {
        let mut files = self.data_files();
        files.push((MANIFEST_FILE.to_string(), self.manifest.to_json()));
        files
    }
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    std::fs::write(path, body).map_err(|e| Error::io(path, e))
}

/// Writes a bundle into `dir`. Any existing manifest is removed first and rewritten last.
pub fn write_bundle(bundle: &DatasetBundle, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let manifest_path = dir.join(MANIFEST_FILE);
    match std::fs::remove_file(&manifest_path) {
        Ok(()) => {}
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
        Err(e) => return Err(Error::io(&manifest_path, e)),
    }
    for (name, body) in bundle.data_files() {
        write_file(&dir.join(name), &body)?;
    }
    let tmp = dir.join(".manifest.json.tmp");
    write_file(&tmp, &bundle.manifest.to_json())?;
    std::fs::rename(&tmp, &manifest_path).map_err(|e| Error::io(&manifest_path, e))
}

pub fn read_manifest(dir: &Path) -> Result<Manifest> {
    let path = dir.join(MANIFEST_FILE);
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| Error::parse(&path, e.line(), e.to_string()))?;
    if manifest.format_version != FORMAT_VERSION {
        return Err(Error::parse(
            &path,
            0,
            format!("format version {} is not supported (expected {FORMAT_VERSION})", manifest.format_version),
        ));
    }
    Ok(manifest)
}

/// True when `dir` holds a manifest whose listed files all exist with the recorded sizes and checksums.
pub fn bundle_is_complete(dir: &Path) -> bool {
    let Ok(manifest) = read_manifest(dir) else {
        return false;
    };
    manifest.files.iter().all(|f| match std::fs::read(dir.join(&f.name)) {
        Ok(bytes) => bytes.len() as u64 == f.bytes && sha256_hex(&bytes) == f.sha256,
        Err(_) => false,
    })
}

struct TsvFile {
    path: PathBuf,
    text: String,
}

impl TsvFile {
    fn open(dir: &Path, name: &str) -> Result<Self> {
        let path = dir.join(name);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        Ok(Self { path, text })
    }

    /// Non-empty rows with their 1-based line numbers, split on tabs.
    fn rows(&self) -> impl Iterator<Item = (usize, Vec<&str>)> {
        self.text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .map(|(i, l)| (i + 1, l.split('\t').collect()))
    }

    fn err(&self, line: usize, reason: impl Into<String>) -> Error {
        Error::parse(&self.path, line, reason)
    }

    fn field<T: std::str::FromStr>(&self, line: usize, cols: &[&str], idx: usize) -> Result<T> {
        let raw = cols
            .get(idx)
            .ok_or_else(|| self.err(line, format!("expected at least {} columns", idx + 1)))?;
        raw.parse()
            .map_err(|_| self.err(line, format!("cannot parse column {} value {raw:?}", idx + 1)))
    }

    fn pairs(&self) -> Result<Vec<(usize, usize)>> {
        self.rows()
            .map(|(line, cols)| {
                if cols.len() != 2 {
                    return Err(self.err(line, format!("expected 2 columns, found {}", cols.len())));
                }
                Ok((self.field(line, &cols, 0)?, self.field(line, &cols, 1)?))
            })
            .collect()
    }

    fn coords(&self, expected: usize) -> Result<Vec<Coordinate>> {
        let mut out = Vec::with_capacity(expected);
        for (line, cols) in self.rows() {
            if cols.len() != 4 {
                return Err(self.err(line, format!("expected 4 columns, found {}", cols.len())));
            }
            let id: usize = self.field(line, &cols, 0)?;
            if id != out.len() {
                return Err(self.err(line, format!("expected id {}, found {id}", out.len())));
            }
            out.push(Coordinate {
                kappa: self.field(line, &cols, 1)?,
                theta: self.field(line, &cols, 2)?,
                r: self.field(line, &cols, 3)?,
            });
        }
        if out.len() != expected {
            return Err(self.err(0, format!("expected {expected} rows, found {}", out.len())));
        }
        Ok(out)
    }

    fn indexed_values<T: std::str::FromStr>(&self, expected: usize) -> Result<Vec<T>> {
        let mut out = Vec::with_capacity(expected);
        for (line, cols) in self.rows() {
            if cols.len() != 2 {
                return Err(self.err(line, format!("expected 2 columns, found {}", cols.len())));
            }
            let id: usize = self.field(line, &cols, 0)?;
            if id != out.len() {
                return Err(self.err(line, format!("expected id {}, found {id}", out.len())));
            }
            out.push(self.field(line, &cols, 1)?);
        }
        if out.len() != expected {
            return Err(self.err(0, format!("expected {expected} rows, found {}", out.len())));
        }
        Ok(out)
    }
}

fn read_lp_split(dir: &Path, index: u32) -> Result<LpSplit> {
    let f = TsvFile::open(dir, &format!("split_lp_{index}.tsv"))?;
    let mut sp = LpSplit {
        index,
        train: Vec::new(),
        valid: Vec::new(),
        test: Vec::new(),
        valid_negatives: Vec::new(),
        test_negatives: Vec::new(),
    };
    for (line, cols) in f.rows() {
        if cols.len() != 4 {
            return Err(f.err(line, format!("expected 4 columns, found {}", cols.len())));
        }
        let pair = (f.field(line, &cols, 0)?, f.field(line, &cols, 1)?);
        let label: u8 = f.field(line, &cols, 3)?;
        let target = match (cols[2], label) {
            ("train", 1) => &mut sp.train,
            ("valid", 1) => &mut sp.valid,
            ("valid", 0) => &mut sp.valid_negatives,
            ("test", 1) => &mut sp.test,
            ("test", 0) => &mut sp.test_negatives,
            (part, label) => return Err(f.err(line, format!("invalid partition/label {part:?}/{label}"))),
        };
        target.push(pair);
    }
    Ok(sp)
}

fn read_nc_split(dir: &Path, index: u32, n_nodes: usize) -> Result<NcSplit> {
    let f = TsvFile::open(dir, &format!("split_nc_{index}.tsv"))?;
    let roles: Vec<String> = f.indexed_values(n_nodes)?;
    let mut sp = NcSplit {
        index,
        train: Vec::new(),
        valid: Vec::new(),
        test: Vec::new(),
    };
    for (i, role) in roles.iter().enumerate() {
        match role.as_str() {
            "train" => sp.train.push(i),
            "valid" => sp.valid.push(i),
            "test" => sp.test.push(i),
            other => return Err(f.err(i + 1, format!("invalid partition {other:?}"))),
        }
    }
    Ok(sp)
}

/// Reads a bundle and checks it against its manifest.
pub fn read_bundle(dir: &Path) -> Result<DatasetBundle> {
    let manifest = read_manifest(dir)?;
    let c = &manifest.counts;
    let edges_file = TsvFile::open(dir, "edges.tsv")?;
    let graph = EdgeSet::new(c.n_nodes, edges_file.pairs()?).map_err(|e| edges_file.err(0, e.to_string()))?;
    let feats_file = TsvFile::open(dir, "features.tsv")?;
    let features = BipartiteEdgeSet::new(c.n_nodes, c.n_features, feats_file.pairs()?)
        .map_err(|e| feats_file.err(0, e.to_string()))?;
    if graph.len() != c.n_edges {
        return Err(edges_file.err(0, format!("{} edges, manifest says {}", graph.len(), c.n_edges)));
    }
    if features.len() != c.n_bipartite_edges {
        return Err(feats_file.err(
            0,
            format!("{} edges, manifest says {}", features.len(), c.n_bipartite_edges),
        ));
    }
    let labels = match c.n_labels {
        Some(k) => {
            let lf = TsvFile::open(dir, "labels.tsv")?;
            let labels: Vec<usize> = lf.indexed_values(c.n_nodes)?;
            if let Some(pos) = labels.iter().position(|&l| l >= k) {
                return Err(lf.err(pos + 1, format!("label {} out of range for {k} labels", labels[pos])));
            }
            let cf = TsvFile::open(dir, "centroids.tsv")?;
            Some(LabelAssignment {
                centroid_angles: cf.indexed_values(k)?,
                labels,
            })
        }
        None => None,
    };
    let node_coords = TsvFile::open(dir, "coords_nodes.tsv")?.coords(c.n_nodes)?;
    let node_coords_bipartite = TsvFile::open(dir, "coords_nodes_bipartite.tsv")?.coords(c.n_nodes)?;
    let feature_coords = TsvFile::open(dir, "coords_features.tsv")?.coords(c.n_features)?;
    let splits = match c.split_task {
        Some(Task::Lp) => Some(Splits::Lp(
            (0..c.n_splits as u32).map(|k| read_lp_split(dir, k)).collect::<Result<_>>()?,
        )),
        Some(Task::Nc) => Some(Splits::Nc(
            (0..c.n_splits as u32)
                .map(|k| read_nc_split(dir, k, c.n_nodes))
                .collect::<Result<_>>()?,
        )),
        None => None,
    };
    let bundle = DatasetBundle {
        manifest,
        graph,
        features,
        labels,
        node_coords,
        node_coords_bipartite,
        feature_coords,
        splits,
    };
    let sizes: Vec<[usize; 3]> = match &bundle.splits {
        Some(Splits::Lp(s)) => s.iter().map(|x| [x.train.len(), x.valid.len(), x.test.len()]).collect(),
        Some(Splits::Nc(s)) => s.iter().map(|x| [x.train.len(), x.valid.len(), x.test.len()]).collect(),
        None => Vec::new(),
    };
    if sizes != bundle.manifest.counts.split_sizes {
        return Err(Error::parse(
            dir.join(MANIFEST_FILE),
            0,
            format!("split sizes {sizes:?} disagree with manifest {:?}", bundle.manifest.counts.split_sizes),
        ));
    }
    Ok(bundle)
}
