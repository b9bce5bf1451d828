//! Catalog of two-qubit cloning machines for observables.
//!
//! A machine is a triple (U, ϱ_p, 𝐗): a signal⊗probe unitary, a probe state
//! and the class of observables whose mean values it should reproduce on
//! both outputs. Approximate machines shrink output means by the added
//! noises g₁, g₂: X̄₁ = X̄/g₁ and X̄₂ = X̄/g₂.

use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qcore::{
    cartan_kernel, cnot, ensure_hermitian, ensure_unitary, max_abs_diff, real_coords, sigma0, sigma1, sigma2, sigma3,
    tensor, BlochVector, CartanParams, ComplexMatrix2, ComplexMatrix4, DensityMatrix, Tolerances, C64, ONE, ZERO,
};

/// Real span {c·A + d·B} of two Hermitian generators.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableClass {
    pub generator_a: ComplexMatrix2,
    pub generator_b: ComplexMatrix2,
    pub label: String,
}

impl ObservableClass {
    pub fn new(a: ComplexMatrix2, b: ComplexMatrix2, label: impl Into<String>) -> Result<Self> {
        let tol = Tolerances::default().state;
        ensure_hermitian(&a, tol)?;
        ensure_hermitian(&b, tol)?;
        Ok(Self { generator_a: a, generator_b: b, label: label.into() })
    }

    /// 𝐗_nc = {x₁σ₁ + x₂σ₂}.
    pub fn noncommuting() -> Self {
        Self { generator_a: sigma1(), generator_b: sigma2(), label: "X_nc = {x1*s1 + x2*s2}".into() }
    }

    /// {x·σ₃}, listed with σ₃ as both generators.
    pub fn commuting() -> Self {
        Self { generator_a: sigma3(), generator_b: sigma3(), label: "{x*s3}".into() }
    }

    pub fn generators(&self) -> [ComplexMatrix2; 2] {
        [self.generator_a, self.generator_b]
    }

    /// Class W†𝐗W.
    pub fn conjugated(&self, w: &ComplexMatrix2) -> Self {
        let conj = |x: &ComplexMatrix2| w.adjoint() * x * w;
        Self {
            generator_a: conj(&self.generator_a),
            generator_b: conj(&self.generator_b),
            label: format!("W^dag ({}) W", self.label),
        }
    }

    /// Least-squares coefficients (c, d) and the max entrywise residual of
    /// `x − (c·A + d·B)`.
    pub fn decompose(&self, x: &ComplexMatrix2) -> ((f64, f64), f64) {
        let a = real_coords(&self.generator_a);
        let b = real_coords(&self.generator_b);
        let v = real_coords(x);
        let dot = |p: &[f64; 8], q: &[f64; 8]| p.iter().zip(q).map(|(x, y)| x * y).sum::<f64>();
        let (aa, ab, bb) = (dot(&a, &a), dot(&a, &b), dot(&b, &b));
        let (av, bv) = (dot(&a, &v), dot(&b, &v));
        let det = aa * bb - ab * ab;
        let (c, d) = if det > 1e-12 * aa * bb {
            ((bb * av - ab * bv) / det, (aa * bv - ab * av) / det)
        } else if aa > 0.0 {
            (av / aa, 0.0)
        } else if bb > 0.0 {
            (0.0, bv / bb)
        } else {
            (0.0, 0.0)
        };
        let fit = self.generator_a * C64::from(c) + self.generator_b * C64::from(d);
        ((c, d), max_abs_diff(x, &fit))
    }

    pub fn membership_residual(&self, x: &ComplexMatrix2) -> f64 {
        self.decompose(x).1
    }

    pub fn contains(&self, x: &ComplexMatrix2, tol: f64) -> bool {
        self.membership_residual(x) <= tol
    }

    /// Both classes span the same real subspace.
    pub fn spans_same(&self, other: &ObservableClass, tol: f64) -> bool {
        other.generators().iter().all(|g| self.contains(g, tol))
            && self.generators().iter().all(|g| other.contains(g, tol))
    }

    pub fn is_commuting(&self, tol: f64) -> bool {
        let (a, b) = (&self.generator_a, &self.generator_b);
        max_abs_diff(&(a * b), &(b * a)) <= tol
    }
}

/// A triple (U, ϱ_p, 𝐗) with its predicted added noises.
#[derive(Debug, Clone, PartialEq)]
pub struct CloningMachineSpec {
    pub unitary: ComplexMatrix4,
    pub probe: DensityMatrix,
    pub class: ObservableClass,
    pub predicted_g1: Option<f64>,
    pub predicted_g2: Option<f64>,
    /// Operating angle, for the θ families.
    pub theta: Option<f64>,
}

impl CloningMachineSpec {
    pub fn new(
        unitary: ComplexMatrix4,
        probe: DensityMatrix,
        class: ObservableClass,
        predicted: Option<(f64, f64)>,
    ) -> Result<Self> {
        ensure_unitary(&unitary, Tolerances::default().unitary)?;
        if let Some((g1, g2)) = predicted {
            if !(g1.abs() >= 1.0 && g2.abs() >= 1.0) {
                return Err(Error::domain(format!("predicted noises ({g1}, {g2}) must satisfy |g| >= 1")));
            }
        }
        Ok(Self {
            unitary,
            probe,
            class,
            predicted_g1: predicted.map(|p| p.0),
            predicted_g2: predicted.map(|p| p.1),
            theta: None,
        })
    }

    fn with_theta(mut self, theta: f64) -> Self {
        self.theta = Some(theta);
        self
    }

    pub fn predicted(&self) -> Option<(f64, f64)> {
        self.predicted_g1.zip(self.predicted_g2)
    }
}

/// F = (i/√2)(σ₁ + σ₂); F†σ₁F = σ₂ and F†σ₂F = σ₁.
pub fn flip_unitary() -> ComplexMatrix2 {
    (sigma1() + sigma2()) * C64::new(0.0, FRAC_1_SQRT_2)
}

/// Added noises (1/cosθ, 1/sinθ) of the θ family.
pub fn nc_noises(theta: f64) -> (f64, f64) {
    (1.0 / theta.cos(), 1.0 / theta.sin())
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < FRAC_PI_2) {
        return Err(Error::domain(format!(
            "theta = {theta} is outside (0, pi/2): added noise diverges at the boundary"
        )));
    }
    Ok(())
}

/// U_nc = exp[i(θ/2)(σ₁⊗σ₁ − σ₂⊗σ₂)].
pub fn nc_kernel(theta: f64) -> Result<ComplexMatrix4> {
    Ok(cartan_kernel(&CartanParams::new(theta, -theta, 0.0)?))
}

/// T(θ) = (I⊗F)·U_nc(θ) with probe |0⟩⟨0| on 𝐗_nc.
pub fn machine_nc(theta: f64) -> Result<CloningMachineSpec> {
    check_theta(theta)?;
    let u = tensor(&sigma0(), &flip_unitary()) * nc_kernel(theta)?;
    Ok(CloningMachineSpec::new(u, DensityMatrix::zero(), ObservableClass::noncommuting(), Some(nc_noises(theta)))?
        .with_theta(theta))
}

/// U_V = (V†⊗V†)·T(θ)·(V⊗I) on the class generated by V†σ₁V and V†σ₂V.
pub fn machine_conjugated(v: &ComplexMatrix2, theta: f64) -> Result<CloningMachineSpec> {
    ensure_unitary(v, Tolerances::default().unitary)?;
    let base = machine_nc(theta)?;
    let vd = v.adjoint();
    let u = tensor(&vd, &vd) * base.unitary * tensor(v, &sigma0());
    let mut class = ObservableClass::noncommuting().conjugated(v);
    class.label = "X_V = {c V^dag s1 V + d V^dag s2 V}".into();
    Ok(CloningMachineSpec::new(u, base.probe, class, base.predicted())?.with_theta(theta))
}

/// Phase-covariant state cloner: |00⟩ → |00⟩, |10⟩ → cosθ|10⟩ + sinθ|01⟩.
///
/// Completed to a unitary by rotating span{|10⟩, |01⟩}
/// (|01⟩ → −sinθ|10⟩ + cosθ|01⟩) and fixing |11⟩.
pub fn machine_phase_covariant(theta: f64) -> Result<CloningMachineSpec> {
    check_theta(theta)?;
    let (s, c) = theta.sin_cos();
    let mut u = ComplexMatrix4::zeros();
    u[(0, 0)] = ONE;
    u[(3, 3)] = ONE;
    // columns are images of |01⟩ (index 1) and |10⟩ (index 2)
    u[(1, 1)] = C64::from(c);
    u[(2, 1)] = C64::from(-s);
    u[(2, 2)] = C64::from(c);
    u[(1, 2)] = C64::from(s);
    Ok(CloningMachineSpec::new(u, DensityMatrix::zero(), ObservableClass::noncommuting(), Some(nc_noises(theta)))?
        .with_theta(theta))
}

/// (σ₃⊗σ₃)·T(θ): negates both equatorial output means, g = (−1/cosθ, −1/sinθ).
pub fn machine_sign_flipped(theta: f64) -> Result<CloningMachineSpec> {
    let base = machine_nc(theta)?;
    let u = tensor(&sigma3(), &sigma3()) * base.unitary;
    let (g1, g2) = nc_noises(theta);
    Ok(CloningMachineSpec::new(u, base.probe, base.class, Some((-g1, -g2)))?.with_theta(theta))
}

/// CNOT with the signal as control clones {x·σ₃} perfectly.
pub fn machine_commuting() -> CloningMachineSpec {
    CloningMachineSpec::new(cnot(), DensityMatrix::zero(), ObservableClass::commuting(), Some((1.0, 1.0)))
        .expect("CNOT is unitary")
}

/// Per-clone Bloch contraction s → η·s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalCloneModel {
    pub shrink_factor: f64,
    pub description: String,
}

impl MarginalCloneModel {
    pub fn new(shrink_factor: f64, description: impl Into<String>) -> Result<Self> {
        if !(shrink_factor > 0.0 && shrink_factor <= 1.0) {
            return Err(Error::domain(format!("shrink factor {shrink_factor} outside (0, 1]")));
        }
        Ok(Self { shrink_factor, description: description.into() })
    }

    /// Symmetric 1→2 universal state cloner, η = 2/3.
    pub fn universal() -> Self {
        Self {
            shrink_factor: 2.0 / 3.0,
            description: "symmetric universal state cloner (per-clone shrink 2/3, correlations not modeled)".into(),
        }
    }

    pub fn clone_bloch(&self, s: BlochVector) -> Result<BlochVector> {
        check_bloch(s)?;
        Ok(s.scaled(self.shrink_factor))
    }

    /// Mean of `x` on either clone.
    pub fn clone_mean(&self, rho: &DensityMatrix, x: &ComplexMatrix2) -> Result<f64> {
        DensityMatrix::from_bloch(self.clone_bloch(rho.bloch())?)?.expectation(x)
    }
}

fn check_bloch(s: BlochVector) -> Result<()> {
    let n = s.norm();
    if !(n <= 1.0 + 1e-12) {
        return Err(Error::domain(format!("Bloch vector norm {n} exceeds 1")));
    }
    Ok(())
}

/// Per-clone statistics of σ₁ and σ₂ under the universal cloner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniversalCloneMarginal {
    /// Clone means of σ₁, σ₂: (2/3)sⱼ.
    pub means: [f64; 2],
    /// Raw clone variances 1 − (4/9)sⱼ².
    pub variances: [f64; 2],
}

pub fn universal_clone_marginal(s: BlochVector) -> Result<UniversalCloneMarginal> {
    let shrunk = MarginalCloneModel::universal().clone_bloch(s)?;
    let means = [shrunk[0], shrunk[1]];
    Ok(UniversalCloneMarginal { means, variances: means.map(|m| 1.0 - m * m) })
}

/// Stable catalog names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MachineKind {
    Nc,
    Conjugated,
    PhaseCovariant,
    SignFlipped,
    Commuting,
    UniversalMarginal,
}

impl MachineKind {
    pub const ALL: [MachineKind; 6] = [
        MachineKind::Nc,
        MachineKind::Conjugated,
        MachineKind::PhaseCovariant,
        MachineKind::SignFlipped,
        MachineKind::Commuting,
        MachineKind::UniversalMarginal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MachineKind::Nc => "nc",
            MachineKind::Conjugated => "conjugated",
            MachineKind::PhaseCovariant => "phase-covariant",
            MachineKind::SignFlipped => "sign-flipped",
            MachineKind::Commuting => "commuting",
            MachineKind::UniversalMarginal => "universal-marginal",
        }
    }

    pub fn class_label(self) -> &'static str {
        match self {
            MachineKind::Nc | MachineKind::PhaseCovariant | MachineKind::SignFlipped => "X_nc = {x1*s1 + x2*s2}",
            MachineKind::Conjugated => "X_V = {c V^dag s1 V + d V^dag s2 V}",
            MachineKind::Commuting => "{x*s3}",
            MachineKind::UniversalMarginal => "all observables (state cloner)",
        }
    }

    pub fn noise_formula(self) -> &'static str {
        match self {
            MachineKind::Nc | MachineKind::Conjugated | MachineKind::PhaseCovariant => {
                "g1 = 1/cos(theta), g2 = 1/sin(theta)"
            }
            MachineKind::SignFlipped => "g1 = -1/cos(theta), g2 = -1/sin(theta)",
            MachineKind::Commuting => "g1 = g2 = 1",
            MachineKind::UniversalMarginal => "g1 = g2 = 3/2",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            MachineKind::Nc => "T = (I x F) exp[i theta/2 (s1 x s1 - s2 x s2)], probe |0>",
            MachineKind::Conjugated => "(V^dag x V^dag) T (V x I), probe |0>",
            MachineKind::PhaseCovariant => "|00> -> |00>, |10> -> cos|10> + sin|01>, probe |0>",
            MachineKind::SignFlipped => "(s3 x s3) T, probe |0>",
            MachineKind::Commuting => "CNOT (signal controls), probe |0>",
            MachineKind::UniversalMarginal => "per-clone Bloch shrink 2/3 (marginal model)",
        }
    }

    pub fn takes_theta(self) -> bool {
        matches!(
            self,
            MachineKind::Nc | MachineKind::Conjugated | MachineKind::PhaseCovariant | MachineKind::SignFlipped
        )
    }
}

impl fmt::Display for MachineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MachineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MachineKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown machine `{s}`")))
    }
}

/// A catalog entry: either a unitary machine or the marginal state-cloner model.
#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Machine {
    Unitary(CloningMachineSpec),
    Marginal(MarginalCloneModel),
}

/// Builds a catalog machine. `theta` is ignored by machines without an
/// angle; `v` is only used by `conjugated`.
pub fn build(kind: MachineKind, theta: f64, v: &ComplexMatrix2) -> Result<Machine> {
    Ok(match kind {
        MachineKind::Nc => Machine::Unitary(machine_nc(theta)?),
        MachineKind::Conjugated => Machine::Unitary(machine_conjugated(v, theta)?),
        MachineKind::PhaseCovariant => Machine::Unitary(machine_phase_covariant(theta)?),
        MachineKind::SignFlipped => Machine::Unitary(machine_sign_flipped(theta)?),
        MachineKind::Commuting => Machine::Unitary(machine_commuting()),
        MachineKind::UniversalMarginal => Machine::Marginal(MarginalCloneModel::universal()),
    })
}

/// Ket amplitudes in the |00⟩, |01⟩, |10⟩, |11⟩ basis.
pub type Ket4 = nalgebra::Vector4<C64>;

pub fn basis_ket(index: usize) -> Ket4 {
    let mut k = Ket4::from_element(ZERO);
    k[index] = ONE;
    k
}
