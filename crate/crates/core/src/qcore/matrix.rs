//! Fixed-size complex matrices and the single-qubit Pauli algebra.
//!
//! Everything lives in the computational basis {|0⟩, |1⟩} with σ₃|0⟩ = +|0⟩.
//! On two qubits the signal is always the first tensor factor, so the basis
//! order is |00⟩, |01⟩, |10⟩, |11⟩ with the signal bit most significant.

use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type ComplexMatrix2 = Matrix2<C64>;
pub type ComplexMatrix4 = Matrix4<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Which qubit of the signal⊗probe pair to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Keep {
    Signal,
    Probe,
}

/// Pauli matrix σⱼ; index 0 is the identity.
pub fn pauli(j: usize) -> Result<ComplexMatrix2> {
    let m = match j {
        0 => Matrix2::new(ONE, ZERO, ZERO, ONE),
        1 => Matrix2::new(ZERO, ONE, ONE, ZERO),
        2 => Matrix2::new(ZERO, -I, I, ZERO),
        3 => Matrix2::new(ONE, ZERO, ZERO, -ONE),
        _ => return Err(Error::domain(format!("Pauli index {j} is outside 0..=3"))),
    };
    Ok(m)
}

pub fn sigma0() -> ComplexMatrix2 {
    ComplexMatrix2::identity()
}

pub fn sigma1() -> ComplexMatrix2 {
    Matrix2::new(ZERO, ONE, ONE, ZERO)
}

pub fn sigma2() -> ComplexMatrix2 {
    Matrix2::new(ZERO, -I, I, ZERO)
}

pub fn sigma3() -> ComplexMatrix2 {
    Matrix2::new(ONE, ZERO, ZERO, -ONE)
}

/// Kronecker product `a ⊗ b`, signal (`a`) first.
pub fn tensor(a: &ComplexMatrix2, b: &ComplexMatrix2) -> ComplexMatrix4 {
    ComplexMatrix4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// Reduce a two-qubit operator to one qubit by tracing out the other.
pub fn partial_trace(r: &ComplexMatrix4, keep: Keep) -> ComplexMatrix2 {
    match keep {
        Keep::Signal => ComplexMatrix2::from_fn(|i, j| r[(2 * i, 2 * j)] + r[(2 * i + 1, 2 * j + 1)]),
        Keep::Probe => ComplexMatrix2::from_fn(|i, j| r[(i, j)] + r[(2 + i, 2 + j)]),
    }
}

/// Max entrywise modulus of `a - b`.
pub fn max_abs_diff<const N: usize>(a: &nalgebra::SMatrix<C64, N, N>, b: &nalgebra::SMatrix<C64, N, N>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn approx_eq<const N: usize>(a: &nalgebra::SMatrix<C64, N, N>, b: &nalgebra::SMatrix<C64, N, N>, tol: f64) -> bool {
    max_abs_diff(a, b) <= tol
}

pub fn hermiticity_deviation<const N: usize>(m: &nalgebra::SMatrix<C64, N, N>) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

pub fn unitarity_deviation<const N: usize>(u: &nalgebra::SMatrix<C64, N, N>) -> f64 {
    max_abs_diff(&(u.adjoint() * u), &nalgebra::SMatrix::<C64, N, N>::identity())
}

pub fn ensure_hermitian<const N: usize>(m: &nalgebra::SMatrix<C64, N, N>, tol: f64) -> Result<()> {
    let deviation = hermiticity_deviation(m);
    if deviation > tol {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(())
}

pub fn ensure_unitary<const N: usize>(u: &nalgebra::SMatrix<C64, N, N>, tol: f64) -> Result<()> {
    let deviation = unitarity_deviation(u);
    if !(deviation <= tol) {
        return Err(Error::NotUnitary { deviation, tolerance: tol });
    }
    Ok(())
}

/// Largest singular value of a 2×2 matrix.
pub fn operator_norm2(m: &ComplexMatrix2) -> f64 {
    let fro2: f64 = m.iter().map(|z| z.norm_sqr()).sum();
    let det = m.determinant().norm();
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0);
    ((fro2 + disc.sqrt()) / 2.0).sqrt()
}

/// Coordinates of `m` in the real vector space of complex 2×2 matrices.
pub(crate) fn real_coords(m: &ComplexMatrix2) -> [f64; 8] {
    let mut out = [0.0; 8];
    for (k, z) in m.iter().enumerate() {
        out[2 * k] = z.re;
        out[2 * k + 1] = z.im;
    }
    out
}

/// Single-qubit SU(2) element Rz(α)·Ry(β)·Rz(γ).
pub fn euler_zyz(alpha: f64, beta: f64, gamma: f64) -> ComplexMatrix2 {
    rz(alpha) * ry(beta) * rz(gamma)
}

pub fn rz(angle: f64) -> ComplexMatrix2 {
    let h = angle / 2.0;
    Matrix2::new(C64::from_polar(1.0, -h), ZERO, ZERO, C64::from_polar(1.0, h))
}

pub fn ry(angle: f64) -> ComplexMatrix2 {
    let (s, c) = (angle / 2.0).sin_cos();
    Matrix2::new(C64::from(c), C64::from(-s), C64::from(s), C64::from(c))
}

/// Controlled-NOT with the signal as control.
pub fn cnot() -> ComplexMatrix4 {
    let mut m = ComplexMatrix4::zeros();
    m[(0, 0)] = ONE;
    m[(1, 1)] = ONE;
    m[(2, 3)] = ONE;
    m[(3, 2)] = ONE;
    m
}

pub fn swap() -> ComplexMatrix4 {
    let mut m = ComplexMatrix4::zeros();
    m[(0, 0)] = ONE;
    m[(1, 2)] = ONE;
    m[(2, 1)] = ONE;
    m[(3, 3)] = ONE;
    m
}
