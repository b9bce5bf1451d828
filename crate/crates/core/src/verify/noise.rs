use serde::{Deserialize, Serialize};

use super::means::{output_means, CloneMeans, Strictness};
use super::sampling::SamplingPlan;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::machines::CloningMachineSpec;
use crate::qcore::{ensure_unitary, sigma0, tensor, ComplexMatrix2, Tolerances};

/// Shrink factors below this magnitude mean the output carries no information.
pub const MIN_SHRINK: f64 = 1e-9;

/// Fitted added noises of a machine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseReport {
    pub g1_fit: f64,
    pub g2_fit: f64,
    /// max |X̄ − gₖ·X̄ₖ| over sampled states, generators and outputs.
    pub residual_max: f64,
    pub samples_used: usize,
    pub state_independent: bool,
}

impl NoiseReport {
    pub fn noises(&self) -> (f64, f64) {
        (self.g1_fit, self.g2_fit)
    }

    pub fn shrink_factors(&self) -> (f64, f64) {
        (1.0 / self.g1_fit, 1.0 / self.g2_fit)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseFitOptions {
    pub n_states: usize,
    pub seed: u64,
    pub tol: f64,
    pub exec: Exec,
}

impl Default for NoiseFitOptions {
    fn default() -> Self {
        Self { n_states: 16, seed: 0, tol: 1e-9, exec: Exec::default() }
    }
}

pub fn estimate_noises<M: CloneMeans + ?Sized>(
    machine: &M,
    n_states: usize,
    seed: u64,
    tol: f64,
) -> Result<NoiseReport> {
    estimate_noises_with(machine, &NoiseFitOptions { n_states, seed, tol, ..Default::default() })
}

/// Least-squares fit of the shrink factors ηₖ = 1/gₖ in X̄ₖ = ηₖ·X̄ over the
/// sampled states and both class generators.
pub fn estimate_noises_with<M: CloneMeans + ?Sized>(machine: &M, opts: &NoiseFitOptions) -> Result<NoiseReport> {
    let plan = SamplingPlan::new(opts.n_states, opts.seed)?;
    let states = plan.states(opts.exec);
    let gens = machine.class().generators();
    let samples = opts.exec.try_map_indexed(states.len(), |i| {
        gens.iter().map(|x| output_means(machine, &states[i], x, Strictness::Force)).collect::<Result<Vec<_>>>()
    })?;
    let samples: Vec<_> = samples.into_iter().flatten().collect();

    let sxx: f64 = samples.iter().map(|m| m.input * m.input).sum();
    if !(sxx > 0.0) {
        return Err(Error::Precondition("all sampled input means vanish; noise is unidentifiable".into()));
    }
    let eta1 = samples.iter().map(|m| m.input * m.output1).sum::<f64>() / sxx;
    let eta2 = samples.iter().map(|m| m.input * m.output2).sum::<f64>() / sxx;
    for (output, shrink) in [(1, eta1), (2, eta2)] {
        if !(shrink.abs() >= MIN_SHRINK) {
            return Err(Error::InformationDestroyed { output, shrink });
        }
    }
    let (g1, g2) = (1.0 / eta1, 1.0 / eta2);
    let residual_max = samples
        .iter()
        .flat_map(|m| [(m.input - g1 * m.output1).abs(), (m.input - g2 * m.output2).abs()])
        .fold(0.0, f64::max);
    Ok(NoiseReport {
        g1_fit: g1,
        g2_fit: g2,
        residual_max,
        samples_used: states.len(),
        state_independent: residual_max <= opts.tol,
    })
}

/// Outcome of conjugating a machine and its class by a single-qubit unitary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovarianceReport {
    pub passed: bool,
    pub original: NoiseReport,
    pub transformed: NoiseReport,
    /// max over outputs of |g_transformed − g_original|.
    pub noise_deviation: f64,
}

/// The machine (W†⊗W†)·U·(W⊗I) on the class W†𝐗W.
pub fn conjugate_machine(spec: &CloningMachineSpec, w: &ComplexMatrix2) -> Result<CloningMachineSpec> {
    ensure_unitary(w, Tolerances::default().unitary)?;
    let wd = w.adjoint();
    let unitary = tensor(&wd, &wd) * spec.unitary * tensor(w, &sigma0());
    let mut out = CloningMachineSpec::new(unitary, spec.probe, spec.class.conjugated(w), spec.predicted())?;
    out.theta = spec.theta;
    Ok(out)
}

/// Passes iff the conjugated triple clones the conjugated class state-
/// independently with the same fitted noises, within `tol`.
pub fn check_covariance(
    spec: &CloningMachineSpec,
    w: &ComplexMatrix2,
    n_states: usize,
    seed: u64,
    tol: f64,
) -> Result<CovarianceReport> {
    let opts = NoiseFitOptions { n_states, seed, tol, ..Default::default() };
    check_covariance_with(spec, w, &opts)
}

pub fn check_covariance_with(
    spec: &CloningMachineSpec,
    w: &ComplexMatrix2,
    opts: &NoiseFitOptions,
) -> Result<CovarianceReport> {
    let transformed_spec = conjugate_machine(spec, w)?;
    let original = estimate_noises_with(spec, opts)?;
    let transformed = estimate_noises_with(&transformed_spec, opts)?;
    let noise_deviation =
        (transformed.g1_fit - original.g1_fit).abs().max((transformed.g2_fit - original.g2_fit).abs());
    Ok(CovarianceReport {
        passed: noise_deviation <= opts.tol && transformed.state_independent,
        original,
        transformed,
        noise_deviation,
    })
}
