use serde::{Deserialize, Serialize};

use super::sampling::SamplingPlan;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::machines::{CloningMachineSpec, Ket4, Machine, MarginalCloneModel, ObservableClass};
use crate::qcore::{evolve_unchecked, ComplexMatrix2, ComplexMatrix4, DensityMatrix, Keep, C64, ZERO};

/// Class-membership tolerance for observables passed to [`output_means`].
pub const MEMBERSHIP_TOL: f64 = 1e-10;

/// Whether observables outside the machine's class are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strictness {
    #[default]
    Strict,
    /// Diagnostic mode: compute means for any Hermitian observable.
    Force,
}

/// Anything that produces the two output means of an observable.
pub trait CloneMeans: Sync {
    /// (X̄₁, X̄₂) for input `rho`, without class checks.
    fn clone_means(&self, rho: &DensityMatrix, x: &ComplexMatrix2) -> Result<[f64; 2]>;

    /// Class over which the machine is meant to clone.
    fn class(&self) -> &ObservableClass;
}

impl CloneMeans for CloningMachineSpec {
    fn clone_means(&self, rho: &DensityMatrix, x: &ComplexMatrix2) -> Result<[f64; 2]> {
        let r = evolve_unchecked(rho, &self.probe, &self.unitary);
        Ok([r.signal_mean(x)?, r.probe_mean(x)?])
    }

    fn class(&self) -> &ObservableClass {
        &self.class
    }
}

static UNIVERSAL_CLASS: std::sync::LazyLock<ObservableClass> = std::sync::LazyLock::new(ObservableClass::noncommuting);

impl CloneMeans for MarginalCloneModel {
    fn clone_means(&self, rho: &DensityMatrix, x: &ComplexMatrix2) -> Result<[f64; 2]> {
        let m = self.clone_mean(rho, x)?;
        Ok([m, m])
    }

    /// The state cloner acts on every observable; fits use 𝐗_nc.
    fn class(&self) -> &ObservableClass {
        &UNIVERSAL_CLASS
    }
}

impl CloneMeans for Machine {
    fn clone_means(&self, rho: &DensityMatrix, x: &ComplexMatrix2) -> Result<[f64; 2]> {
        match self {
            Machine::Unitary(m) => m.clone_means(rho, x),
            Machine::Marginal(m) => m.clone_means(rho, x),
        }
    }

    fn class(&self) -> &ObservableClass {
        match self {
            Machine::Unitary(m) => CloneMeans::class(m),
            Machine::Marginal(m) => CloneMeans::class(m),
        }
    }
}

/// Input mean and output means of one observable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Means {
    pub input: f64,
    pub output1: f64,
    pub output2: f64,
}

/// X̄ = Tr[ρX], X̄₁ = Tr[R(X⊗I)], X̄₂ = Tr[R(I⊗X)].
pub fn output_means<M: CloneMeans + ?Sized>(
    machine: &M,
    rho: &DensityMatrix,
    x: &ComplexMatrix2,
    strictness: Strictness,
) -> Result<Means> {
    if strictness == Strictness::Strict {
        let class = machine.class();
        let residual = class.membership_residual(x);
        if residual > MEMBERSHIP_TOL {
            return Err(Error::NotInClass { class: class.label.clone(), residual });
        }
    }
    let input = rho.expectation(x)?;
    let [output1, output2] = machine.clone_means(rho, x)?;
    Ok(Means { input, output1, output2 })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CloningCheck {
    pub passed: bool,
    /// max |X̄ₖ − X̄| over sampled states, both generators and both outputs.
    pub worst_residual: f64,
    /// Output (1 or 2) where the worst residual occurred.
    pub worst_output: usize,
    pub worst_state: usize,
}

/// Perfect-cloning check on the class generators; means are linear in X,
/// so the generators decide the whole class.
pub fn check_cloning<M: CloneMeans + ?Sized>(
    machine: &M,
    tol: f64,
    plan: &SamplingPlan,
    exec: Exec,
) -> Result<CloningCheck> {
    if !(tol > 0.0) {
        return Err(Error::Precondition(format!("tolerance must be positive, got {tol}")));
    }
    let states = plan.states(exec);
    let gens = machine.class().generators();
    let per_state = exec.try_map_indexed(states.len(), |i| {
        let mut worst = (0.0f64, 1usize);
        for x in &gens {
            let m = output_means(machine, &states[i], x, Strictness::Force)?;
            for (k, out) in [(1, m.output1), (2, m.output2)] {
                let d = (out - m.input).abs();
                if d > worst.0 {
                    worst = (d, k);
                }
            }
        }
        Ok::<_, Error>(worst)
    })?;
    let (worst_state, &(worst_residual, worst_output)) =
        per_state.iter().enumerate().fold((0, &(0.0, 1)), |best, (i, w)| if w.0 > best.1 .0 { (i, w) } else { best });
    Ok(CloningCheck { passed: worst_residual <= tol, worst_residual, worst_output, worst_state })
}

/// Effective signal observable Tr₂[(I⊗ϱ_p) U†(X on `output`)U].
///
/// Its expectation in ϱ equals the output mean of X, for every ϱ.
pub fn heisenberg_output(
    unitary: &ComplexMatrix4,
    probe: &DensityMatrix,
    x: &ComplexMatrix2,
    output: Keep,
) -> ComplexMatrix2 {
    let id = ComplexMatrix2::identity();
    let lifted = match output {
        Keep::Signal => crate::qcore::tensor(x, &id),
        Keep::Probe => crate::qcore::tensor(&id, x),
    };
    let m = unitary.adjoint() * lifted * unitary;
    let p = probe.matrix();
    ComplexMatrix2::from_fn(|i, j| {
        let mut acc = ZERO;
        for a in 0..2 {
            for b in 0..2 {
                acc += p[(b, a)] * m[(2 * i + a, 2 * j + b)];
            }
        }
        acc
    })
}

/// U(|ψ⟩ ⊗ |0⟩) for a signal ket (a, b).
pub fn apply_to_signal_ket(unitary: &ComplexMatrix4, amp0: C64, amp1: C64) -> Ket4 {
    let input = Ket4::new(amp0, ZERO, amp1, ZERO);
    unitary * input
}

/// Max entrywise deviation of U(|ψ⟩⊗|0⟩) from `expected`.
pub fn state_map_deviation(unitary: &ComplexMatrix4, amp0: C64, amp1: C64, expected: &Ket4) -> f64 {
    let out = apply_to_signal_ket(unitary, amp0, amp1);
    out.iter().zip(expected.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines::{machine_commuting, machine_nc, CloningMachineSpec};
    use crate::qcore::{sigma1, sigma3, BlochVector};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

    fn state(s: [f64; 3]) -> DensityMatrix {
        DensityMatrix::from_bloch(BlochVector(s)).unwrap()
    }

    #[test]
    fn nc_means_examples() {
        let theta = 0.61;
        let m = machine_nc(theta).unwrap();
        let r = output_means(&m, &state([0.0, 0.0, 1.0]), &sigma1(), Strictness::Strict).unwrap();
        assert!(r.input.abs() < 1e-15 && r.output1.abs() < 1e-15 && r.output2.abs() < 1e-15);
        let r = output_means(&m, &state([1.0, 0.0, 0.0]), &sigma1(), Strictness::Strict).unwrap();
        assert!((r.input - 1.0).abs() < 1e-15);
        assert!((r.output1 - theta.cos()).abs() < 1e-14);
        assert!((r.output2 - theta.sin()).abs() < 1e-14);
    }

    #[test]
    fn commuting_means() {
        let r = output_means(&machine_commuting(), &state([0.0, 0.0, 0.7]), &sigma3(), Strictness::Strict).unwrap();
        assert!((r.input - 0.7).abs() < 1e-15);
        assert!((r.output1 - 0.7).abs() < 1e-12 && (r.output2 - 0.7).abs() < 1e-12);
    }

    #[test]
    fn strict_mode_rejects_foreign_observable() {
        let m = machine_nc(FRAC_PI_4).unwrap();
        let err = output_means(&m, &state([0.0; 3]), &sigma3(), Strictness::Strict).unwrap_err();
        assert!(matches!(err, Error::NotInClass { .. }));
        assert!(output_means(&m, &state([0.0; 3]), &sigma3(), Strictness::Force).is_ok());
    }

    #[test]
    fn check_cloning_examples() {
        let plan = SamplingPlan::new(30, 0).unwrap();
        let c = check_cloning(&machine_commuting(), 1e-12, &plan, Exec::Sequential).unwrap();
        assert!(c.passed, "{c:?}");

        let c = check_cloning(&machine_nc(FRAC_PI_4).unwrap(), 1e-6, &plan, Exec::Sequential).unwrap();
        assert!(!c.passed);
        assert!((c.worst_residual - (1.0 - FRAC_1_SQRT_2)).abs() < 1e-12);
        // σ₁ eigenstate is fiducial #1 (or σ₂'s, #2): same worst value
        assert!(c.worst_state == 1 || c.worst_state == 2);

        let idle = CloningMachineSpec::new(
            ComplexMatrix4::identity(),
            DensityMatrix::zero(),
            crate::machines::ObservableClass::commuting(),
            None,
        )
        .unwrap();
        let c = check_cloning(&idle, 1e-9, &plan, Exec::Sequential).unwrap();
        assert!(!c.passed);
        assert_eq!(c.worst_output, 2);
    }

    #[test]
    fn check_cloning_rejects_nonpositive_tol() {
        let plan = SamplingPlan::new(4, 0).unwrap();
        assert!(check_cloning(&machine_commuting(), 0.0, &plan, Exec::Sequential).is_err());
    }

    #[test]
    fn heisenberg_output_reproduces_means() {
        let m = machine_nc(0.9).unwrap();
        let rho = state([0.2, -0.5, 0.4]);
        for keep in [Keep::Signal, Keep::Probe] {
            let eff = heisenberg_output(&m.unitary, &m.probe, &sigma1(), keep);
            let via_eff = rho.expectation(&eff).unwrap();
            let [o1, o2] = m.clone_means(&rho, &sigma1()).unwrap();
            let direct = if keep == Keep::Signal { o1 } else { o2 };
            assert!((via_eff - direct).abs() < 1e-14);
        }
    }
}
