//! Numerical search for a perfect cloner of a two-generator class.
//!
//! The search runs over all of SU(4) through the local/entangling
//! factorization (A₂⊗B₂)·U_E(θ)·(A₁⊗B₁), each single-qubit factor in ZYZ
//! Euler angles: 4×3 local angles plus 3 kernel angles. Both factorizations
//! are surjective, so the 15 coordinates cover every two-qubit gate up to a
//! global phase, which does not affect output means.
//!
//! The probe is fixed to |0⟩⟨0|. Mixed probes add nothing: output means are
//! linear in the probe state, so a mixed probe reaches only convex mixtures
//! of pure-probe means.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use super::sampling::fiducial_states;
use super::simplex::{minimize, SimplexOptions};
use crate::error::{Error, Result};
use crate::exec::{task_seed, Exec};
use crate::qcore::{
    cartan_kernel, euler_zyz, evolve_unchecked, sigma1, sigma2, sigma3, tensor, CartanParams, ComplexMatrix2,
    ComplexMatrix4, DensityMatrix,
};

pub const PARAMETER_COUNT: usize = 15;

pub const EVIDENCE_CAVEAT: &str = "numerical evidence only: a positive floor found by multi-start \
simplex search is not a proof that no perfect cloning machine exists";

pub const PROBE_RESTRICTION: &str = "probe fixed to the pure state |0><0|; mixed probes only reach \
convex mixtures of pure-probe output means";

/// Coordinates `[A₁(3), B₁(3), θ(3), A₂(3), B₂(3)]` of
/// (A₂⊗B₂)·U_E(θ)·(A₁⊗B₁).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Su4Params(pub [f64; PARAMETER_COUNT]);

impl Su4Params {
    pub fn from_slice(x: &[f64]) -> Self {
        let mut p = [0.0; PARAMETER_COUNT];
        p.copy_from_slice(x);
        Self(p)
    }

    /// SWAP up to a global phase: no local part, all kernel angles π/2.
    pub fn swap() -> Self {
        let mut p = [0.0; PARAMETER_COUNT];
        p[6..9].copy_from_slice(&[FRAC_PI_2; 3]);
        Self(p)
    }

    pub fn unitary(&self) -> ComplexMatrix4 {
        let p = &self.0;
        let local = |o: usize| euler_zyz(p[o], p[o + 1], p[o + 2]);
        let kernel = cartan_kernel(&CartanParams::new(p[6], p[7], p[8]).expect("finite coordinates"));
        tensor(&local(9), &local(12)) * kernel * tensor(&local(0), &local(3))
    }
}

/// Class probed by the search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NogoClass {
    /// σ₁, σ₂
    #[default]
    Noncommuting,
    /// σ₃, σ₃: perfect cloners exist, so the search should reach zero.
    Commuting,
}

impl NogoClass {
    pub fn generators(self) -> [ComplexMatrix2; 2] {
        match self {
            NogoClass::Noncommuting => [sigma1(), sigma2()],
            NogoClass::Commuting => [sigma3(), sigma3()],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NogoConfig {
    pub simplex: SimplexOptions,
    pub class: NogoClass,
    /// Start of restart 0; later restarts start uniformly in [−π, π]¹⁵.
    pub start: Option<Su4Params>,
    pub exec: Exec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoGoResult {
    pub best_residual: f64,
    pub best_parameters: Vec<f64>,
    pub restarts: usize,
    pub evaluations: usize,
    pub seed: u64,
    pub class: NogoClass,
    /// Running minimum of the objective after each restart.
    pub best_by_restart: Vec<f64>,
    pub probe_restriction: String,
    pub caveat: String,
}

/// Σ over fiducial states, generators and both outputs of (X̄ₖ − X̄)².
pub fn nogo_objective(unitary: &ComplexMatrix4, generators: &[ComplexMatrix2; 2]) -> f64 {
    let probe = DensityMatrix::zero();
    let mut total = 0.0;
    for rho in fiducial_states() {
        let r = evolve_unchecked(&rho, &probe, unitary);
        let (out1, out2) = (r.reduced(crate::qcore::Keep::Signal), r.reduced(crate::qcore::Keep::Probe));
        for x in generators {
            let input = real_trace(rho.matrix(), x);
            let d1 = real_trace(out1.matrix(), x) - input;
            let d2 = real_trace(out2.matrix(), x) - input;
            total += d1 * d1 + d2 * d2;
        }
    }
    total
}

fn real_trace(a: &ComplexMatrix2, b: &ComplexMatrix2) -> f64 {
    (a * b).trace().re
}

pub fn nogo_search(restarts: usize, seed: u64, config: &NogoConfig) -> Result<NoGoResult> {
    if restarts == 0 {
        return Err(Error::Precondition("nogo_search needs at least one restart".into()));
    }
    let generators = config.class.generators();
    let runs = config.exec.map_indexed(restarts, |r| {
        let x0 = match (r, config.start) {
            (0, Some(p)) => p.0,
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(task_seed(seed, r));
                [0.0; PARAMETER_COUNT].map(|_| rng.random_range(-PI..PI))
            }
        };
        let objective = |x: &[f64]| nogo_objective(&Su4Params::from_slice(x).unitary(), &generators);
        minimize(objective, &x0, &config.simplex)
    });

    let mut best_by_restart = Vec::with_capacity(restarts);
    let mut best: Option<&super::simplex::SimplexResult> = None;
    for run in &runs {
        if !run.value.is_finite() {
            return Err(Error::Internal(format!("non-finite objective {}", run.value)));
        }
        if best.is_none_or(|b| run.value < b.value) {
            best = Some(run);
        }
        best_by_restart.push(best.expect("set above").value);
    }
    let best = best.expect("at least one restart");
    Ok(NoGoResult {
        best_residual: best.value,
        best_parameters: best.x.clone(),
        restarts,
        evaluations: runs.iter().map(|r| r.evaluations).sum(),
        seed,
        class: config.class,
        best_by_restart,
        probe_restriction: PROBE_RESTRICTION.into(),
        caveat: EVIDENCE_CAVEAT.into(),
    })
}
