//! Small-dimension complex linear algebra for one and two qubits.

mod cartan;
mod matrix;
mod state;

pub use cartan::{cartan_kernel, pauli_pairs, CartanParams};
pub(crate) use matrix::real_coords;
pub use matrix::{
    approx_eq, cnot, ensure_hermitian, ensure_unitary, euler_zyz, hermiticity_deviation, max_abs_diff, operator_norm2,
    partial_trace, pauli, ry, rz, sigma0, sigma1, sigma2, sigma3, swap, tensor, unitarity_deviation, ComplexMatrix2,
    ComplexMatrix4, Keep, C64, I, ONE, ZERO,
};
pub(crate) use state::evolve_unchecked;
pub use state::{evolve, evolve_with, BlochVector, DensityMatrix, JointState, Tolerances};
