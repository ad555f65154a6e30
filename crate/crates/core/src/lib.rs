//! `kinlb`: a flux-decomposition lattice Boltzmann solver for 1D/2D
//! hyperbolic scalar conservation laws, with a mesoscopic source-term
//! model for stiff sources and an independent Engquist-Osher
//! macroscopic scheme used as a correctness oracle.
//!
//! The solver evolves `N = 2D+1` populations per cell whose equilibria
//! are built from sign-split fluxes; collision is single-relaxation-time
//! BGK and streaming is an exact one-cell shift. At `omega = 1` the
//! update coincides with the Engquist-Osher upwind scheme, which this
//! crate also implements separately for cross-checking.
//!
//! Everything is generic over the scalar type ([`Scalar`]: `f32` or
//! `f64`); the [`Real`] alias fixes the default precision used by the
//! CLI and the test problems' tolerances.

pub mod boundary;
pub mod config;
pub mod diagnostics;
pub mod error;
pub mod exact;
pub mod flux;
pub mod grid;
pub mod kinetic;
pub mod oracle;
pub mod problems;
pub mod scalar;
pub mod source;
pub mod velocity;

pub use boundary::{Boundary, BoundarySet};
pub use config::{Overrides, SolverConfig, StopRule};
pub use diagnostics::{convergence_study, ConvergenceRow, RunReport, StepRecord};
pub use error::{Result, SolverError};
pub use flux::{ComponentFlux, FluxModel};
pub use grid::{DistributionField, Domain, Grid, Point, ScalarField};
pub use kinetic::{run, LbSolver};
pub use oracle::{eo_run, EoSolver};
pub use problems::{catalog, Problem};
pub use scalar::Scalar;
pub use source::{run_with_source, SourceLbSolver, SourceModel};
pub use velocity::{build_velocity_set, VelocitySet};

/// Default scalar type.
pub type Real = f64;
/// Scalar field at default precision.
pub type RealField = grid::ScalarField<Real>;
/// Problem description at default precision.
pub type RealProblem = problems::Problem<Real>;
/// Solver configuration at default precision.
pub type RealConfig = config::SolverConfig<Real>;
