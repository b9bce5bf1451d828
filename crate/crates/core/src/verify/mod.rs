//! Empirical verification of cloning machines: output means, added-noise
//! fits, unitary covariance, the approximate-cloning operator equations and
//! the numerical no-go search.

mod means;
mod nccm;
mod nogo;
mod noise;
mod sampling;
pub mod simplex;

pub use means::{
    apply_to_signal_ket, check_cloning, heisenberg_output, output_means, state_map_deviation, CloneMeans, CloningCheck,
    Means, Strictness, MEMBERSHIP_TOL,
};
pub use nccm::nccm_residual;
pub use nogo::{
    nogo_objective, nogo_search, NoGoResult, NogoClass, NogoConfig, Su4Params, EVIDENCE_CAVEAT, PARAMETER_COUNT,
    PROBE_RESTRICTION,
};
pub use noise::{
    check_covariance, check_covariance_with, conjugate_machine, estimate_noises, estimate_noises_with,
    CovarianceReport, NoiseFitOptions, NoiseReport, MIN_SHRINK,
};
pub use sampling::{
    fiducial_blochs, fiducial_states, random_bloch_in_ball, random_pure_bloch, random_unitary, seeded_unitaries,
    SamplingPlan,
};
