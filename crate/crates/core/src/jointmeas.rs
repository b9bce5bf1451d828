//! Joint measurement of two noncommuting observables through a cloner:
//! measure generator A on output 1 and generator B on output 2, rescale each
//! ±1 outcome by its added noise, and compare the variance product with the
//! quantum bound.
//!
//! Variances here are ⟨O²⟩ − ⟨O⟩², never standard deviations.

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::machines::{machine_nc, universal_clone_marginal, CloningMachineSpec, MarginalCloneModel};
use crate::qcore::{BlochVector, DensityMatrix};
use crate::verify::{estimate_noises_with, CloneMeans, NoiseFitOptions};

/// Saturation tolerance |product − bound|.
pub const SATURATION_TOL: f64 = 1e-9;

/// Angles used by sweeps are clipped to this distance from 0 and π/2.
pub const THETA_MARGIN: f64 = 1e-6;

/// Product quoted in the literature for the universal state cloner.
pub const REFERENCE_UNIVERSAL_PRODUCT: f64 = 4.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyReport {
    /// Δm₁: measured variance of the rescaled estimator of A (output 1).
    pub dm1: f64,
    /// Δm₂: measured variance of the rescaled estimator of B (output 2).
    pub dm2: f64,
    pub product: f64,
    /// (√(Δi₁Δi₂) + 1)².
    pub bound: f64,
    pub saturated: bool,
    pub theta_used: Option<f64>,
    pub input_bloch: BlochVector,
    pub g1: f64,
    pub g2: f64,
    /// Intrinsic input variances Δi₁ = Δ_ϱ A, Δi₂ = Δ_ϱ B.
    pub di1: f64,
    pub di2: f64,
}

/// Variance of g·(±1 outcome) on a clone with mean `clone_mean`: g²(1 − m²).
pub fn measured_variance(g: f64, clone_mean: f64) -> Result<f64> {
    if !(clone_mean.abs() <= 1.0 + 1e-12) {
        return Err(Error::domain(format!("clone mean {clone_mean} outside [-1, 1]")));
    }
    if !(g.abs() >= 1.0 - 1e-12) {
        return Err(Error::domain(format!("added noise |g| = {} is below 1", g.abs())));
    }
    Ok(g * g * (1.0 - clone_mean * clone_mean).max(0.0))
}

/// Lower bound (√(Δi₁Δi₂) + 1)² on the measured product.
pub fn product_bound(di1: f64, di2: f64) -> f64 {
    ((di1 * di2).sqrt() + 1.0).powi(2)
}

/// Closed form for T(θ): (tan²θ + Δi₁)(cot²θ + Δi₂).
pub fn nc_product(theta: f64, di1: f64, di2: f64) -> f64 {
    let t2 = theta.tan().powi(2);
    (t2 + di1) * (1.0 / t2 + di2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProductMode {
    /// Generators must not commute.
    #[default]
    Strict,
    /// Allow commuting generators (no joint-measurement meaning).
    Diagnostic,
}

pub fn uncertainty_product(spec: &CloningMachineSpec, rho: &DensityMatrix) -> Result<UncertaintyReport> {
    uncertainty_product_with(spec, rho, ProductMode::Strict, &NoiseFitOptions::default())
}

pub fn uncertainty_product_with(
    spec: &CloningMachineSpec,
    rho: &DensityMatrix,
    mode: ProductMode,
    fit: &NoiseFitOptions,
) -> Result<UncertaintyReport> {
    if mode == ProductMode::Strict && spec.class.is_commuting(1e-12) {
        return Err(Error::Precondition(format!(
            "class `{}` is generated by commuting observables; use diagnostic mode",
            spec.class.label
        )));
    }
    let noise = estimate_noises_with(spec, fit)?;
    let [a, b] = spec.class.generators();
    let [mean_a, _] = spec.clone_means(rho, &a)?;
    let [_, mean_b] = spec.clone_means(rho, &b)?;
    let dm1 = measured_variance(noise.g1_fit, mean_a)?;
    let dm2 = measured_variance(noise.g2_fit, mean_b)?;
    let (di1, di2) = (rho.variance(&a)?, rho.variance(&b)?);
    let product = dm1 * dm2;
    let bound = product_bound(di1.max(0.0), di2.max(0.0));
    Ok(UncertaintyReport {
        dm1,
        dm2,
        product,
        bound,
        saturated: (product - bound).abs() <= SATURATION_TOL,
        theta_used: spec.theta,
        input_bloch: rho.bloch(),
        g1: noise.g1_fit,
        g2: noise.g2_fit,
        di1,
        di2,
    })
}

/// θ with tan⁴θ = Δi₁/Δi₂, minimizing (tan²θ + Δi₁)(cot²θ + Δi₂).
pub fn optimal_theta(di1: f64, di2: f64) -> Result<f64> {
    if !(di1 > 0.0 && di2 > 0.0) {
        return Err(Error::domain(format!(
            "intrinsic variances ({di1}, {di2}) must be positive: an eigenstate of a generator has no finite optimal trade-off"
        )));
    }
    Ok((di1 / di2).powf(0.25).atan())
}

pub fn clip_theta(theta: f64) -> f64 {
    theta.clamp(THETA_MARGIN, FRAC_PI_2 - THETA_MARGIN)
}

/// Observable cloner at its optimal angle vs. the universal state cloner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClonerComparison {
    pub input_bloch: BlochVector,
    pub optimal_theta: f64,
    pub observable_product: f64,
    /// Equatorial Bloch shrink 1/g of the observable cloner (outputs 1, 2).
    pub observable_shrink: [f64; 2],
    pub universal_shrink: f64,
    /// Product from the per-clone marginal model with g = 1/η.
    pub universal_product: f64,
    pub reference_universal_product: f64,
    /// Set when the marginal-model product differs from the reference value.
    pub discrepancy: bool,
}

pub fn compare_with_universal(rho: &DensityMatrix) -> Result<ClonerComparison> {
    let (di1, di2) = (rho.variance(&crate::qcore::sigma1())?, rho.variance(&crate::qcore::sigma2())?);
    if !((di1 * di2 - 1.0).abs() <= 1e-9) {
        return Err(Error::Precondition(format!(
            "input is not minimum-uncertainty for (s1, s2): variance product {:.12} != 1",
            di1 * di2
        )));
    }
    let theta = optimal_theta(di1, di2)?;
    let observable = uncertainty_product(&machine_nc(theta)?, rho)?;

    let model = MarginalCloneModel::universal();
    let g = 1.0 / model.shrink_factor;
    let marginal = universal_clone_marginal(rho.bloch())?;
    let universal_product = measured_variance(g, marginal.means[0])? * measured_variance(g, marginal.means[1])?;
    Ok(ClonerComparison {
        input_bloch: rho.bloch(),
        optimal_theta: theta,
        observable_product: observable.product,
        observable_shrink: [1.0 / observable.g1, 1.0 / observable.g2],
        universal_shrink: model.shrink_factor,
        universal_product,
        reference_universal_product: REFERENCE_UNIVERSAL_PRODUCT,
        discrepancy: (universal_product - REFERENCE_UNIVERSAL_PRODUCT).abs() > SATURATION_TOL,
    })
}
