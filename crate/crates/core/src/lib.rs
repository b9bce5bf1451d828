//! Simulation, verification and analysis of qubit cloning machines for
//! classes of observables.
//!
//! A cloning machine for a class 𝐗 lets a signal qubit interact with a probe
//! qubit so that every observable in 𝐗 has the input mean value on both
//! outputs, whatever the input state. For two noncommuting generators this is
//! impossible; the best machines shrink the output means by added noises
//! g₁, g₂ and, used as joint measurements, reach the quantum bound on the
//! measured uncertainty product.
//!
//! - [`qcore`]: Pauli algebra, states, partial traces, the Cartan kernel.
//! - [`machines`]: the machine catalog.
//! - [`verify`]: noise fits, cloning and covariance checks, no-go search.
//! - [`jointmeas`]: measured variances, products, optimal angles.

// `!(x <= tol)` is used on purpose: it rejects NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exec;
pub mod jointmeas;
pub mod machines;
pub mod qcore;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Exec;
