//! Entangling kernel of the local/nonlocal factorization of two-qubit gates,
//! `U_E = exp[(i/2) Σⱼ θⱼ σⱼ⊗σⱼ]`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::matrix::{sigma1, sigma2, sigma3, tensor, ComplexMatrix4, C64};
use crate::error::{Error, Result};

/// Kernel angles (θ₁, θ₂, θ₃), each reduced to (−2π, 2π].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartanParams([f64; 3]);

impl CartanParams {
    pub fn new(theta1: f64, theta2: f64, theta3: f64) -> Result<Self> {
        let raw = [theta1, theta2, theta3];
        if raw.iter().any(|t| !t.is_finite()) {
            return Err(Error::domain(format!("non-finite Cartan angle in {raw:?}")));
        }
        Ok(Self(raw.map(canonical_angle)))
    }

    pub fn angles(&self) -> [f64; 3] {
        self.0
    }
}

/// The kernel has period 4π in each angle.
fn canonical_angle(t: f64) -> f64 {
    let period = 4.0 * PI;
    let mut r = t % period;
    if r <= -2.0 * PI {
        r += period;
    } else if r > 2.0 * PI {
        r -= period;
    }
    r
}

/// `σⱼ⊗σⱼ` for j = 1, 2, 3.
pub fn pauli_pairs() -> [ComplexMatrix4; 3] {
    [tensor(&sigma1(), &sigma1()), tensor(&sigma2(), &sigma2()), tensor(&sigma3(), &sigma3())]
}

/// Closed form: the three generators commute and square to the identity, so
/// the exponential factors into Πⱼ [cos(θⱼ/2)·I + i·sin(θⱼ/2)·σⱼ⊗σⱼ].
pub fn cartan_kernel(p: &CartanParams) -> ComplexMatrix4 {
    let id = ComplexMatrix4::identity();
    pauli_pairs().iter().zip(p.0).fold(id, |acc, (pp, theta)| {
        let (s, c) = (theta / 2.0).sin_cos();
        acc * (id * C64::from(c) + pp * C64::new(0.0, s))
    })
}
