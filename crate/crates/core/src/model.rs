//! Geometric kernel of the generator.
//!
//! Nodes and features live on a circle of radius `R = N_n / 2π`. A pair at
//! angular separation `Δθ` with hidden degrees `κ, κ'` is linked with the
//! gravity-law probability `1 / (1 + χ^β)`, `χ = RΔθ / (μκκ')`. The same
//! ensemble has a hyperbolic-disk representation in which the radial
//! coordinate is `r = R_H2 − 2 ln(κ/κ₀)` and the probability depends only on
//! an approximate hyperbolic distance. Both forms are implemented so the
//! isomorphism can be checked numerically.
//!
//! Everything here is generic over the floating-point scalar; the crate root
//! exposes `f64` aliases used by the generators.

use std::fmt::Debug;

use num_traits::{Float, FloatConst};

use crate::error::{Error, Result};

/// Floating-point scalar usable by the model kernel.
pub trait Scalar: Float + FloatConst + Debug + Send + Sync + 'static {}

impl<T> Scalar for T where T: Float + FloatConst + Debug + Send + Sync + 'static {}

#[inline]
fn lit<T: Scalar>(x: f64) -> T {
    T::from(x).expect("literal representable in scalar type")
}

/// Which side of the node–feature bipartite graph an entity belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Node,
    Feature,
}

/// Lower cutoff of the power-law hidden-degree density, `κ₀ = (γ−2)/(γ−1)·⟨k⟩`.
pub fn kappa_min<T: Scalar>(gamma: T, mean_degree: T) -> T {
    (gamma - lit(2.0)) / (gamma - T::one()) * mean_degree
}

/// Coupling constant that fixes the average degree, `μ = β sin(π/β) / (2π⟨k⟩)`.
pub fn mu<T: Scalar>(beta: T, mean_degree: T) -> T {
    beta * (T::PI() / beta).sin() / (lit::<T>(2.0) * T::PI() * mean_degree)
}

/// `1 / (1 + e^z)` without overflow for large `|z|`.
#[inline]
fn fermi<T: Scalar>(z: T) -> T {
    if z > T::zero() {
        let e = (-z).exp();
        e / (T::one() + e)
    } else {
        T::one() / (T::one() + z.exp())
    }
}

#[inline]
fn clamp_unit<T: Scalar>(p: T) -> T {
    p.max(T::zero()).min(T::one())
}

fn check_exponent<T: Scalar>(name: &'static str, value: T) -> Result<()> {
    if !value.is_finite() || value <= lit(2.0) {
        return Err(Error::Validation {
            name,
            reason: format!(
                "must be a finite value > 2 (got {value:?}); κ₀ = (γ−2)/(γ−1)·⟨k⟩ is undefined otherwise"
            ),
        });
    }
    Ok(())
}

fn check_beta<T: Scalar>(name: &'static str, value: T) -> Result<()> {
    if !value.is_finite() || value <= T::one() {
        return Err(Error::Validation {
            name,
            reason: format!(
                "must be a finite value > 1 (got {value:?}); μ = β sin(π/β)/(2π⟨k⟩) requires β > 1"
            ),
        });
    }
    Ok(())
}

fn check_positive<T: Scalar>(name: &'static str, value: T) -> Result<()> {
    if !value.is_finite() || value <= T::zero() {
        return Err(Error::Validation {
            name,
            reason: format!("must be a finite value > 0 (got {value:?})"),
        });
    }
    Ok(())
}

fn check_count(name: &'static str, value: usize, min: usize) -> Result<()> {
    if value < min {
        return Err(Error::Validation {
            name,
            reason: format!("must be at least {min} (got {value})"),
        });
    }
    Ok(())
}

/// Validated parameters of the unipartite node graph, with derived constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnipartiteParams<T> {
    n_nodes: usize,
    gamma: T,
    mean_degree: T,
    beta: T,
    mu: T,
    radius: T,
    kappa_min: T,
    disk_radius: T,
}

impl<T: Scalar> UnipartiteParams<T> {
    pub fn new(n_nodes: usize, gamma: T, mean_degree: T, beta: T) -> Result<Self> {
        check_count("n_nodes", n_nodes, 2)?;
        check_exponent("gamma", gamma)?;
        check_positive("mean_degree", mean_degree)?;
        check_beta("beta", beta)?;

        let n = T::from(n_nodes).ok_or_else(|| Error::invalid("n_nodes not representable"))?;
        let radius = n / (lit::<T>(2.0) * T::PI());
        let mu = mu(beta, mean_degree);
        let kappa_min = kappa_min(gamma, mean_degree);
        let disk_radius = lit::<T>(2.0) * (lit::<T>(2.0) * radius / (mu * kappa_min * kappa_min)).ln();
        Ok(Self {
            n_nodes,
            gamma,
            mean_degree,
            beta,
            mu,
            radius,
            kappa_min,
            disk_radius,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }
    pub fn gamma(&self) -> T {
        self.gamma
    }
    pub fn mean_degree(&self) -> T {
        self.mean_degree
    }
    pub fn beta(&self) -> T {
        self.beta
    }
    pub fn mu(&self) -> T {
        self.mu
    }
    /// Radius of the similarity circle, `N_n / 2π`.
    pub fn radius(&self) -> T {
        self.radius
    }
    pub fn kappa_min(&self) -> T {
        self.kappa_min
    }
    /// Radius of the hyperbolic disk, `2 ln(2R / (μκ₀²))`.
    pub fn disk_radius(&self) -> T {
        self.disk_radius
    }
}

/// Validated parameters of the node–feature bipartite graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BipartiteParams<T> {
    n_nodes: usize,
    n_features: usize,
    gamma_n: T,
    gamma_f: T,
    mean_node_degree: T,
    beta_b: T,
    mu_b: T,
    radius: T,
    mean_feature_degree: T,
    kappa_n_min: T,
    kappa_f_min: T,
    disk_radius: T,
}

impl<T: Scalar> BipartiteParams<T> {
    pub fn new(
        n_nodes: usize,
        n_features: usize,
        gamma_n: T,
        gamma_f: T,
        mean_node_degree: T,
        beta_b: T,
    ) -> Result<Self> {
        check_count("n_nodes", n_nodes, 2)?;
        check_count("n_features", n_features, 1)?;
        check_exponent("gamma_n", gamma_n)?;
        check_exponent("gamma_f", gamma_f)?;
        check_positive("mean_node_degree", mean_node_degree)?;
        check_beta("beta_b", beta_b)?;

        let n = T::from(n_nodes).ok_or_else(|| Error::invalid("n_nodes not representable"))?;
        let nf = T::from(n_features).ok_or_else(|| Error::invalid("n_features not representable"))?;
        let radius = n / (lit::<T>(2.0) * T::PI());
        let mu_b = mu(beta_b, mean_node_degree);
        let mean_feature_degree = n / nf * mean_node_degree;
        let kappa_n_min = kappa_min(gamma_n, mean_node_degree);
        let kappa_f_min = kappa_min(gamma_f, mean_feature_degree);
        let disk_radius =
            lit::<T>(2.0) * (lit::<T>(2.0) * radius / (mu_b * kappa_n_min * kappa_f_min)).ln();
        Ok(Self {
            n_nodes,
            n_features,
            gamma_n,
            gamma_f,
            mean_node_degree,
            beta_b,
            mu_b,
            radius,
            mean_feature_degree,
            kappa_n_min,
            kappa_f_min,
            disk_radius,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }
    pub fn n_features(&self) -> usize {
        self.n_features
    }
    pub fn gamma_n(&self) -> T {
        self.gamma_n
    }
    pub fn gamma_f(&self) -> T {
        self.gamma_f
    }
    pub fn mean_node_degree(&self) -> T {
        self.mean_node_degree
    }
    pub fn beta_b(&self) -> T {
        self.beta_b
    }
    pub fn mu_b(&self) -> T {
        self.mu_b
    }
    pub fn radius(&self) -> T {
        self.radius
    }
    /// `⟨k_f⟩ = (N_n / N_f)·⟨k_n⟩`.
    pub fn mean_feature_degree(&self) -> T {
        self.mean_feature_degree
    }
    pub fn kappa_n_min(&self) -> T {
        self.kappa_n_min
    }
    pub fn kappa_f_min(&self) -> T {
        self.kappa_f_min
    }
    pub fn kappa_min_for(&self, side: Side) -> T {
        match side {
            Side::Node => self.kappa_n_min,
            Side::Feature => self.kappa_f_min,
        }
    }
    pub fn gamma_for(&self, side: Side) -> T {
        match side {
            Side::Node => self.gamma_n,
            Side::Feature => self.gamma_f,
        }
    }
    pub fn mean_degree_for(&self, side: Side) -> T {
        match side {
            Side::Node => self.mean_node_degree,
            Side::Feature => self.mean_feature_degree,
        }
    }
    /// Radius of the bipartite hyperbolic disk, `2 ln(2R / (μ_b κ_{n,0} κ_{f,0}))`.
    pub fn disk_radius(&self) -> T {
        self.disk_radius
    }
}

/// Label-assignment parameters: number of classes and the concentration exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabelParams<T> {
    n_labels: usize,
    alpha: T,
}

impl<T: Scalar> LabelParams<T> {
    pub fn new(n_labels: usize, alpha: T) -> Result<Self> {
        check_count("n_labels", n_labels, 2)?;
        if !alpha.is_finite() {
            return Err(Error::Validation {
                name: "alpha",
                reason: format!("must be finite (got {alpha:?})"),
            });
        }
        Ok(Self { n_labels, alpha })
    }
    pub fn n_labels(&self) -> usize {
        self.n_labels
    }
    pub fn alpha(&self) -> T {
        self.alpha
    }
}

/// Hidden degree and angular coordinate of a node or feature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodePlacement<T> {
    pub kappa: T,
    pub theta: T,
}

impl<T: Scalar> NodePlacement<T> {
    /// Builds a placement, reducing `theta` into `[0, 2π)`.
    pub fn new(kappa: T, theta: T) -> Result<Self> {
        if !kappa.is_finite() || kappa <= T::zero() {
            return Err(Error::invalid(format!("hidden degree must be finite and > 0, got {kappa:?}")));
        }
        if !theta.is_finite() {
            return Err(Error::invalid(format!("angle must be finite, got {theta:?}")));
        }
        Ok(Self {
            kappa,
            theta: reduce_angle(theta),
        })
    }
}

/// Reduces an angle into `[0, 2π)`.
pub fn reduce_angle<T: Scalar>(theta: T) -> T {
    let tau = T::TAU();
    let mut r = theta % tau;
    if r < T::zero() {
        r = r + tau;
    }
    // rounding in the addition above can land exactly on 2π
    if r >= tau {
        r = T::zero();
    }
    r
}

/// Separation of two angles already in `[0, 2π)`: `π − |π − |θ − θ'||`.
#[inline]
pub(crate) fn separation<T: Scalar>(theta_a: T, theta_b: T) -> T {
    T::PI() - (T::PI() - (theta_a - theta_b).abs()).abs()
}

/// Angular distance on the circle, in `[0, π]`. Inputs are reduced modulo 2π first.
pub fn angular_distance<T: Scalar>(theta_a: T, theta_b: T) -> Result<T> {
    if !theta_a.is_finite() || !theta_b.is_finite() {
        return Err(Error::invalid(format!(
            "angular distance needs finite angles, got ({theta_a:?}, {theta_b:?})"
        )));
    }
    Ok(separation(reduce_angle(theta_a), reduce_angle(theta_b)))
}

/// Gravity-law probability `1/(1+χ^β)`, evaluated through `β ln χ`.
#[inline]
fn gravity_law<T: Scalar>(radius: T, mu: T, beta: T, kappa_a: T, kappa_b: T, delta_theta: T) -> T {
    if delta_theta <= T::zero() {
        return T::one();
    }
    let ln_chi = (radius * delta_theta).ln() - (mu * kappa_a * kappa_b).ln();
    clamp_unit(fermi(beta * ln_chi))
}

/// Connection probability between two nodes in the similarity-circle representation.
#[inline]
pub fn connection_probability_s1<T: Scalar>(
    kappa_a: T,
    kappa_b: T,
    delta_theta: T,
    params: &UnipartiteParams<T>,
) -> T {
    debug_assert!(delta_theta >= T::zero() && delta_theta <= T::PI() + lit(1e-12));
    gravity_law(params.radius, params.mu, params.beta, kappa_a, kappa_b, delta_theta)
}

/// Connection probability between a node and a feature in the similarity-circle representation.
#[inline]
pub fn connection_probability_bipartite<T: Scalar>(
    kappa_n: T,
    kappa_f: T,
    delta_theta: T,
    params: &BipartiteParams<T>,
) -> T {
    debug_assert!(delta_theta >= T::zero() && delta_theta <= T::PI() + lit(1e-12));
    gravity_law(params.radius, params.mu_b, params.beta_b, kappa_n, kappa_f, delta_theta)
}

fn radial<T: Scalar>(kappa: T, kappa_min: T, disk_radius: T) -> Result<T> {
    if !kappa.is_finite() || kappa < kappa_min {
        return Err(Error::invalid(format!(
            "hidden degree {kappa:?} is below the minimum {kappa_min:?}"
        )));
    }
    Ok(disk_radius - lit::<T>(2.0) * (kappa / kappa_min).ln())
}

/// Radial coordinate of a node in the hyperbolic disk.
pub fn to_hyperbolic<T: Scalar>(kappa: T, params: &UnipartiteParams<T>) -> Result<T> {
    radial(kappa, params.kappa_min, params.disk_radius)
}

/// Radial coordinate of a node or feature in the bipartite hyperbolic disk.
pub fn to_hyperbolic_bipartite<T: Scalar>(kappa: T, side: Side, params: &BipartiteParams<T>) -> Result<T> {
    radial(kappa, params.kappa_min_for(side), params.disk_radius)
}

#[inline]
fn hyperbolic_law<T: Scalar>(r_a: T, r_b: T, delta_theta: T, beta: T, disk_radius: T) -> T {
    if delta_theta <= T::zero() {
        return T::one();
    }
    let x = r_a + r_b + lit::<T>(2.0) * (delta_theta / lit(2.0)).ln();
    clamp_unit(fermi(beta / lit(2.0) * (x - disk_radius)))
}

/// Connection probability in the hyperbolic-disk representation.
///
/// `Δθ = 0` returns 1, the limit of the circle form.
pub fn connection_probability_h2<T: Scalar>(r_a: T, r_b: T, delta_theta: T, params: &UnipartiteParams<T>) -> T {
    hyperbolic_law(r_a, r_b, delta_theta, params.beta, params.disk_radius)
}

/// Hyperbolic form of the node–feature probability (`β → β_b`, `R_H2 → R^b_H2`).
pub fn connection_probability_h2_bipartite<T: Scalar>(
    r_n: T,
    r_f: T,
    delta_theta: T,
    params: &BipartiteParams<T>,
) -> T {
    hyperbolic_law(r_n, r_f, delta_theta, params.beta_b, params.disk_radius)
}
