//! Exact bound states of the two-dimensional radial Schrödinger equation
//!
//! ```text
//! R''(r) + [E - V(r) - (m^2 - 1/4) / r^2] R(r) = 0,   V(r) = a r^2 + b r^-4 + c r^-6
//! ```
//!
//! in units with ħ = 1 and μ = 1/2, together with an independent finite-difference
//! verifier for every closed-form statement.
//!
//! [`exact`] holds the closed-form algebra: sign branches, parameter constraints,
//! energies and pointwise evaluation of the ground and first excited radial states.
//! The remaining modules discretize the radial operator on a truncated grid
//! ([`grid`], [`hamiltonian`]), extract its low spectrum ([`spectrum`]),
//! integrate ([`quadrature`]) and tie everything together ([`verify`]).

pub mod error;
pub mod exact;
pub mod grid;
pub mod hamiltonian;
pub mod quadrature;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
pub use exact::{
    excited_energy, excited_kappa1, excited_radial_eval, excited_residual, excited_solve,
    ground_constraint_b, ground_constraint_residual, ground_energy, ground_kappa,
    ground_peak_radius, ground_radial_eval, ground_residual, AngularChannel, ClosedFormState,
    JointSolution, Level, PotentialParams, SignBranch,
};
pub use grid::{build_grid, build_grid_with_threshold, RadialGrid, DEFAULT_TAIL_THRESHOLD};
pub use hamiltonian::{assemble, DiscreteHamiltonian};
pub use quadrature::{normalization_constant, overlap, quadrature, squared_norm};
pub use spectrum::{lowest_eigenvalues, node_count, node_positions, sturm_count, SpectrumResult};
pub use verify::{
    convergence_study, convergence_table, discrete_residual, richardson_extrapolate, verify,
    verify_with_threshold, ConvergencePoint, ConvergenceTable, VerificationReport,
};
