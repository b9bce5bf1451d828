use super::means::heisenberg_output;
use crate::machines::flip_unitary;
use crate::qcore::{
    cartan_kernel, operator_norm2, sigma0, sigma1, sigma2, tensor, CartanParams, DensityMatrix, Keep, C64,
};

/// Max operator-norm residual of the approximate-cloning operator equations
/// for U = (I⊗F)·U_E(p) with probe |0⟩⟨0|:
///
/// g₁·Tr₂[(I⊗ϱ_p) U†(X⊗I) U] = X and g₂·Tr₂[(I⊗ϱ_p) U†(I⊗X) U] = X
/// for X ∈ {σ₁, σ₂}. Pulling F through the probe side turns the second pair
/// into the crossed form with σ₁ and σ₂ exchanged on the probe.
pub fn nccm_residual(p: &CartanParams, g1: f64, g2: f64) -> f64 {
    let u = tensor(&sigma0(), &flip_unitary()) * cartan_kernel(p);
    let probe = DensityMatrix::zero();
    let mut worst = 0.0f64;
    for x in [sigma1(), sigma2()] {
        for (g, keep) in [(g1, Keep::Signal), (g2, Keep::Probe)] {
            let lhs = heisenberg_output(&u, &probe, &x, keep) * C64::from(g);
            worst = worst.max(operator_norm2(&(lhs - x)));
        }
    }
    worst
}
