//! Reproducible random streams and the hidden-variable samplers.
//!
//! Every random draw in the crate comes from a [`SeedSpec`]: the master seed,
//! the canonical identifier of the parameter point, the realization index, a
//! stage tag and a sub-stream number are hashed into a ChaCha8 key. Within a
//! key, independent lanes (ChaCha stream ids) are handed out per row, per node
//! or per split, so results never depend on evaluation order or thread count.

use std::fmt;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{kappa_min, reduce_angle};

/// Pipeline stage a random stream belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    UnipartitePlacement,
    UnipartiteEdges,
    BipartitePlacement,
    BipartiteEdges,
    Centroids,
    Labels,
    Splits,
    Randomization,
}

impl Stage {
    pub fn tag(self) -> &'static str {
        match self {
            Stage::UnipartitePlacement => "unipartite-placement",
            Stage::UnipartiteEdges => "unipartite-edges",
            Stage::BipartitePlacement => "bipartite-placement",
            Stage::BipartiteEdges => "bipartite-edges",
            Stage::Centroids => "centroids",
            Stage::Labels => "labels",
            Stage::Splits => "splits",
            Stage::Randomization => "randomization",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Coordinates of a random stream.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeedSpec {
    pub master_seed: u64,
    pub point_id: String,
    pub realization: u32,
    pub stage: Stage,
    #[serde(default)]
    pub substream: u64,
}

impl SeedSpec {
    pub fn new(master_seed: u64, point_id: impl Into<String>, realization: u32, stage: Stage) -> Self {
        Self {
            master_seed,
            point_id: point_id.into(),
            realization,
            stage,
            substream: 0,
        }
    }

    pub fn with_stage(&self, stage: Stage) -> Self {
        Self {
            stage,
            substream: 0,
            ..self.clone()
        }
    }

    pub fn substream(&self, substream: u64) -> Self {
        Self {
            substream,
            ..self.clone()
        }
    }

    /// 256-bit key for this stream.
    pub fn key(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(b"geosynth-stream-v1\0");
        h.update(self.master_seed.to_le_bytes());
        h.update((self.point_id.len() as u64).to_le_bytes());
        h.update(self.point_id.as_bytes());
        h.update(self.realization.to_le_bytes());
        h.update(self.stage.tag().as_bytes());
        h.update([0u8]);
        h.update(self.substream.to_le_bytes());
        h.finalize().into()
    }

    /// Generator for lane 0 of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::from_seed(self.key())
    }

    /// Generator for an independent lane, e.g. one per matrix row or per node.
    pub fn lane(&self, lane: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.key());
        rng.set_stream(lane);
        rng
    }
}

/// Inverse-transform sample of the power-law density `(γ−1) κ₀^{γ−1} κ^{−γ}`.
#[inline]
pub fn power_law_quantile(u: f64, kappa0: f64, gamma: f64) -> f64 {
    kappa0 * (1.0 - u).powf(-1.0 / (gamma - 1.0))
}

/// Draws `count` hidden degrees from the power law with exponent `gamma` and mean `mean_degree`.
pub fn sample_power_law_kappas(count: usize, gamma: f64, mean_degree: f64, stream: &SeedSpec) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::invalid("kappa sample count must be at least 1"));
    }
    if !gamma.is_finite() || gamma <= 2.0 {
        return Err(Error::invalid(format!("power-law exponent must be > 2, got {gamma}")));
    }
    if !mean_degree.is_finite() || mean_degree <= 0.0 {
        return Err(Error::invalid(format!("mean degree must be > 0, got {mean_degree}")));
    }
    let kappa0 = kappa_min(gamma, mean_degree);
    let mut rng = stream.rng();
    Ok((0..count)
        .map(|_| power_law_quantile(rng.random::<f64>(), kappa0, gamma))
        .collect())
}

/// Draws `count` angles uniformly in `[0, 2π)`.
pub fn sample_angles(count: usize, stream: &SeedSpec) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::invalid("angle sample count must be at least 1"));
    }
    let mut rng = stream.rng();
    Ok((0..count)
        .map(|_| reduce_angle(std::f64::consts::TAU * rng.random::<f64>()))
        .collect())
}

/// Uses an empirical degree sequence as hidden degrees, raising values below `floor`.
pub fn kappas_from_sequence(degrees: &[f64], floor: f64) -> Result<Vec<f64>> {
    if degrees.is_empty() {
        return Err(Error::invalid("degree sequence is empty"));
    }
    if let Some((i, d)) = degrees.iter().enumerate().find(|(_, d)| !d.is_finite() || **d <= 0.0) {
        return Err(Error::invalid(format!("degree sequence entry {i} is not positive: {d}")));
    }
    Ok(degrees.iter().map(|&d| d.max(floor)).collect())
}

/// Parses a degree sequence: one value per line, `#` comments and blank lines ignored.
pub fn parse_degree_sequence(text: &str, origin: &Path) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let value: f64 = line
            .parse()
            .map_err(|_| Error::parse(origin, i + 1, format!("not a number: {line:?}")))?;
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::parse(origin, i + 1, format!("degree must be positive, got {value}")));
        }
        out.push(value);
    }
    if out.is_empty() {
        return Err(Error::parse(origin, 0, "no degree values found"));
    }
    Ok(out)
}

pub fn read_degree_sequence(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_degree_sequence(&text, path)
}
