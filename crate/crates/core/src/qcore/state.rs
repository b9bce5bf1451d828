use nalgebra::SymmetricEigen;
use serde::{Deserialize, Serialize};

use super::matrix::{
    ensure_hermitian, ensure_unitary, hermiticity_deviation, sigma0, sigma1, sigma2, sigma3, tensor, ComplexMatrix2,
    ComplexMatrix4, C64,
};
use crate::error::{Error, Result};

/// Numerical tolerances used when validating constructed objects.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Trace, Hermiticity and positivity of states; imaginary residue of expectations.
    pub state: f64,
    /// `max |U†U − I|` accepted for unitaries.
    pub unitary: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { state: 1e-12, unitary: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector(pub [f64; 3]);

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector([0.0; 3]);

    pub fn new(s1: f64, s2: f64, s3: f64) -> Self {
        Self([s1, s2, s3])
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self(self.0.map(|x| factor * x))
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol
    }
}

impl std::ops::Index<usize> for BlochVector {
    type Output = f64;

    fn index(&self, idx: usize) -> &f64 {
        &self.0[idx]
    }
}

/// Validated single-qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(ComplexMatrix2);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix2) -> Result<Self> {
        Self::with_tolerance(m, Tolerances::default().state)
    }

    pub fn with_tolerance(m: ComplexMatrix2, tol: f64) -> Result<Self> {
        validate_trace_and_hermiticity(m.trace(), hermiticity_deviation(&m), tol)?;
        let [lo, _] = hermitian_eigenvalues2(&m);
        if lo < -tol {
            return Err(Error::InvalidState(format!("negative eigenvalue {lo:.3e}")));
        }
        Ok(Self(m))
    }

    /// ϱ = ½(σ₀ + s·σ).
    pub fn from_bloch(s: BlochVector) -> Result<Self> {
        let norm = s.norm();
        if !(norm <= 1.0 + 1e-12) {
            return Err(Error::domain(format!("Bloch vector norm {norm} exceeds 1")));
        }
        let m = (sigma0() + sigma1() * C64::from(s[0]) + sigma2() * C64::from(s[1]) + sigma3() * C64::from(s[2]))
            * C64::from(0.5);
        Ok(Self(m))
    }

    /// |0⟩⟨0|
    pub fn zero() -> Self {
        Self::from_bloch(BlochVector::new(0.0, 0.0, 1.0)).expect("unit Bloch vector")
    }

    pub fn maximally_mixed() -> Self {
        Self::from_bloch(BlochVector::ORIGIN).expect("origin is a state")
    }

    /// Projector onto a normalized ket.
    pub fn from_ket(amp0: C64, amp1: C64) -> Result<Self> {
        let v = nalgebra::Vector2::new(amp0, amp1);
        let norm = v.norm();
        if !(norm > 0.0) {
            return Err(Error::domain("zero ket"));
        }
        let v = v / C64::from(norm);
        Self::new(v * v.adjoint())
    }

    pub fn bloch(&self) -> BlochVector {
        let m = &self.0;
        // sⱼ = Tr[ρσⱼ]
        BlochVector::new(2.0 * m[(0, 1)].re, -2.0 * m[(0, 1)].im, (m[(0, 0)] - m[(1, 1)]).re)
    }

    pub fn matrix(&self) -> &ComplexMatrix2 {
        &self.0
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        hermitian_eigenvalues2(&self.0)
    }

    /// Tr[ρX] for Hermitian `x`.
    pub fn expectation(&self, x: &ComplexMatrix2) -> Result<f64> {
        let tol = Tolerances::default().state;
        ensure_hermitian(x, tol)?;
        real_part_checked((self.0 * x).trace(), tol)
    }

    /// Tr[ρX²] − Tr[ρX]²; a variance, not a standard deviation.
    pub fn variance(&self, x: &ComplexMatrix2) -> Result<f64> {
        let mean = self.expectation(x)?;
        let second = real_part_checked((self.0 * x * x).trace(), Tolerances::default().state)?;
        Ok(second - mean * mean)
    }
}

/// Validated two-qubit state on signal⊗probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointState(ComplexMatrix4);

impl JointState {
    pub fn new(m: ComplexMatrix4) -> Result<Self> {
        Self::with_tolerance(m, Tolerances::default().state)
    }

    pub fn with_tolerance(m: ComplexMatrix4, tol: f64) -> Result<Self> {
        validate_trace_and_hermiticity(m.trace(), hermiticity_deviation(&m), tol)?;
        let lo = hermitian_eigenvalues4(&m)[0];
        if lo < -tol {
            return Err(Error::InvalidState(format!("negative eigenvalue {lo:.3e}")));
        }
        Ok(Self(m))
    }

    pub fn product(signal: &DensityMatrix, probe: &DensityMatrix) -> Self {
        Self(tensor(signal.matrix(), probe.matrix()))
    }

    pub fn matrix(&self) -> &ComplexMatrix4 {
        &self.0
    }

    pub fn reduced(&self, keep: super::matrix::Keep) -> DensityMatrix {
        DensityMatrix(super::matrix::partial_trace(&self.0, keep))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigenvalues4(&self.0)
    }

    pub fn expectation(&self, x: &ComplexMatrix4) -> Result<f64> {
        let tol = Tolerances::default().state;
        ensure_hermitian(x, tol)?;
        real_part_checked((self.0 * x).trace(), tol)
    }

    /// Mean of `x` on the signal output, Tr[R (X⊗I)].
    pub fn signal_mean(&self, x: &ComplexMatrix2) -> Result<f64> {
        self.reduced(super::matrix::Keep::Signal).expectation(x)
    }

    /// Mean of `x` on the probe output, Tr[R (I⊗X)].
    pub fn probe_mean(&self, x: &ComplexMatrix2) -> Result<f64> {
        self.reduced(super::matrix::Keep::Probe).expectation(x)
    }
}

/// R = U (ρ ⊗ ρ_p) U†.
pub fn evolve(rho: &DensityMatrix, probe: &DensityMatrix, u: &ComplexMatrix4) -> Result<JointState> {
    evolve_with(rho, probe, u, &Tolerances::default())
}

pub fn evolve_with(
    rho: &DensityMatrix,
    probe: &DensityMatrix,
    u: &ComplexMatrix4,
    tol: &Tolerances,
) -> Result<JointState> {
    ensure_unitary(u, tol.unitary)?;
    Ok(evolve_unchecked(rho, probe, u))
}

/// Evolution for unitaries already validated by the caller.
pub(crate) fn evolve_unchecked(rho: &DensityMatrix, probe: &DensityMatrix, u: &ComplexMatrix4) -> JointState {
    JointState(u * tensor(rho.matrix(), probe.matrix()) * u.adjoint())
}

fn validate_trace_and_hermiticity(trace: C64, herm: f64, tol: f64) -> Result<()> {
    if herm > tol {
        return Err(Error::InvalidState(format!("not Hermitian (deviation {herm:.3e})")));
    }
    if (trace - C64::from(1.0)).norm() > tol {
        return Err(Error::InvalidState(format!("trace {trace} is not 1")));
    }
    Ok(())
}

fn real_part_checked(z: C64, tol: f64) -> Result<f64> {
    if z.im.abs() > tol {
        return Err(Error::Internal(format!("expectation of a Hermitian operator has imaginary part {:.3e}", z.im)));
    }
    Ok(z.re)
}

/// Eigenvalues of the Hermitian part of a 2×2 matrix, ascending.
fn hermitian_eigenvalues2(m: &ComplexMatrix2) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = (m[(0, 1)] + m[(1, 0)].conj()) * 0.5;
    let mid = 0.5 * (a + d);
    let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mid - rad, mid + rad]
}

fn hermitian_eigenvalues4(m: &ComplexMatrix4) -> [f64; 4] {
    let h = (m + m.adjoint()) * C64::from(0.5);
    let eig = SymmetricEigen::new(h).eigenvalues;
    let mut out = [eig[0], eig[1], eig[2], eig[3]];
    out.sort_by(|x, y| x.total_cmp(y));
    out
}
