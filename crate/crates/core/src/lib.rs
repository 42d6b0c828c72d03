//! Simulation of quantum interrogation (interaction-free measurement) with
//! particles that absorb a passing photon only with probability `A`.
//!
//! A horizontally polarized photon makes `N` passes through an interferometer
//! whose rotator turns its polarization by `θ` per pass. The vertical
//! component travels through the arm holding the particle. The state over
//! {|H⟩, |V⟩, |B⟩} (|B⟩ = absorbed) is tracked as a density matrix:
//!
//! ```
//! use interrogation::{evolve, CycleConfig, ParticleModel};
//!
//! let config = CycleConfig::auto(ParticleModel::Coherent, 1.0, 24).unwrap();
//! let (p, _rho) = evolve(&config);
//! assert!(p.p_b < 0.10);
//! ```
//!
//! [`oracle`] checks the density-matrix results against sampled trajectories,
//! and [`sweep`] produces the CSV tables.

pub mod error;
pub mod evolution;
pub mod matrix;
pub mod operators;
pub mod oracle;
pub mod par;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use evolution::{
    closed_form_no_particle, closed_form_perfect_absorber, evolve, initial_state, probabilities,
    step_coherent, step_collapse, CycleConfig, DensityMatrix, ParticleModel, Probabilities,
    ThetaMode,
};
pub use matrix::{ComplexScalar, Dim, SquareMatrix, StateVector};
pub use operators::{
    absorption, projector, rotator2, rotator3, rotator_eigen, rotator_power, AbsorptionProbability,
    Angle, BasisLabel, EigenDecomposition2, Subspace,
};
pub use oracle::{compare, estimate, OutcomeEstimate, TrajectoryConfig};
pub use par::Execution;
pub use sweep::{SweepRecord, SweepSpec};

/// Hermiticity tolerance for density matrices.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Smallest eigenvalue still accepted as positive semidefinite is `-PSD_TOL`.
pub const PSD_TOL: f64 = 1e-10;
/// Allowed |tr ρ − 1|.
pub const TRACE_TOL: f64 = 1e-12;
