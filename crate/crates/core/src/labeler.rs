//! Label assignment from angular proximity to randomly placed class centroids.
//!
//! Node `i` takes label `X` with probability proportional to `Δθ_iX^{−α}`.
//! Positive `α` favors the nearest centroid, negative `α` the farthest, and
//! `α = 0` is a uniform draw.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{reduce_angle, separation, Scalar};
use crate::sampling::{sample_angles, SeedSpec, Stage};
use crate::LabelParams;

/// Smallest angular distance used in the weights; exact zeros are handled separately.
pub const MIN_DISTANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct LabelAssignment {
    pub centroid_angles: Vec<f64>,
    pub labels: Vec<usize>,
}

impl LabelAssignment {
    pub fn n_labels(&self) -> usize {
        self.centroid_angles.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.labels.len()
    }

    /// Number of nodes carrying each label.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.n_labels()];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }
}

/// Per-centroid assignment probabilities for a node at `node_angle`.
pub fn label_probabilities<T: Scalar>(node_angle: T, centroids: &[T], alpha: T) -> Result<Vec<T>> {
    let k = centroids.len();
    if k == 0 {
        return Err(Error::invalid("no centroids"));
    }
    let n = T::from(k).expect("centroid count fits in scalar");
    if alpha == T::zero() {
        return Ok(vec![T::one() / n; k]);
    }
    let theta = reduce_angle(node_angle);
    let dist: Vec<T> = centroids.iter().map(|&c| separation(theta, reduce_angle(c))).collect();
    let at_zero: Vec<bool> = dist.iter().map(|&d| d == T::zero()).collect();
    let zeros = at_zero.iter().filter(|&&z| z).count();

    if alpha > T::zero() && zeros > 0 {
        let share = T::one() / T::from(zeros).expect("count fits in scalar");
        return Ok(at_zero.iter().map(|&z| if z { share } else { T::zero() }).collect());
    }
    if zeros == k {
        return Err(Error::Assignment(format!(
            "node at angle {theta:?} coincides with every centroid and alpha {alpha:?} < 0 gives all zero weight"
        )));
    }

    let floor = T::from(MIN_DISTANCE).expect("floor representable");
    let log_w: Vec<Option<T>> = dist
        .iter()
        .zip(&at_zero)
        .map(|(&d, &z)| (!z).then(|| -alpha * d.max(floor).ln()))
        .collect();
    let top = log_w
        .iter()
        .flatten()
        .fold(T::neg_infinity(), |m, &w| if w > m { w } else { m });
    let w: Vec<T> = log_w
        .iter()
        .map(|lw| lw.map_or(T::zero(), |lw| (lw - top).exp()))
        .collect();
    let total = w.iter().fold(T::zero(), |s, &x| s + x);
    Ok(w.into_iter().map(|x| x / total).collect())
}

/// Index drawn from a categorical distribution with the uniform variate `u ∈ [0, 1)`.
pub fn draw_categorical(probabilities: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (i, &p) in probabilities.iter().enumerate() {
        if p > 0.0 {
            last_positive = i;
            acc += p;
            if u < acc {
                return i;
            }
        }
    }
    last_positive
}

/// Places `n_labels` centroids uniformly (the centroid stage of `stream`) and labels every node.
pub fn assign_labels(node_angles: &[f64], params: &LabelParams, stream: &SeedSpec) -> Result<LabelAssignment> {
    let centroids = sample_angles(params.n_labels(), &stream.with_stage(Stage::Centroids))?;
    assign_labels_with_centroids(node_angles, centroids, params.alpha(), stream)
}

/// Labels every node given fixed centroids. Node `i` draws from lane `i` of the label stage.
pub fn assign_labels_with_centroids(
    node_angles: &[f64],
    centroids: Vec<f64>,
    alpha: f64,
    stream: &SeedSpec,
) -> Result<LabelAssignment> {
    if centroids.len() < 2 {
        return Err(Error::invalid(format!("need at least 2 centroids, got {}", centroids.len())));
    }
    if let Some(a) = node_angles.iter().find(|a| !a.is_finite()) {
        return Err(Error::invalid(format!("node angle {a} is not finite")));
    }
    let labels_stream = stream.with_stage(Stage::Labels);
    let labels = node_angles
        .par_iter()
        .enumerate()
        .map(|(i, &theta)| {
            let probs = label_probabilities(theta, &centroids, alpha)?;
            let u = labels_stream.lane(i as u64).random::<f64>();
            Ok(draw_categorical(&probs, u))
        })
        .collect::<Result<Vec<usize>>>()?;
    Ok(LabelAssignment {
        centroid_angles: centroids,
        labels,
    })
}

/// Largest pairwise angular distance among a set of angles.
fn angular_diameter(angles: &mut [f64]) -> f64 {
    use std::f64::consts::PI;
    angles.sort_by(f64::total_cmp);
    let n = angles.len();
    let mut best: f64 = 0.0;
    for i in 0..n {
        // the partner farthest from angles[i] is the one nearest to its antipode
        let target = reduce_angle(angles[i] + PI);
        let j = angles.partition_point(|&a| a < target);
        for cand in [j % n, (j + n - 1) % n] {
            best = best.max(separation(angles[i], angles[cand]));
        }
    }
    best
}

/// Maximum angular distance between two nodes of the same label; `None` for empty classes.
pub fn max_intracluster_distance(assignment: &LabelAssignment, node_angles: &[f64]) -> Result<Vec<Option<f64>>> {
    if node_angles.len() != assignment.labels.len() {
        return Err(Error::invalid(format!(
            "{} angles for {} labelled nodes",
            node_angles.len(),
            assignment.labels.len()
        )));
    }
    let mut classes: Vec<Vec<f64>> = vec![Vec::new(); assignment.n_labels()];
    for (&l, &a) in assignment.labels.iter().zip(node_angles) {
        classes[l].push(reduce_angle(a));
    }
    Ok(classes
        .into_iter()
        .map(|mut c| (!c.is_empty()).then(|| angular_diameter(&mut c)))
        .collect())
}
