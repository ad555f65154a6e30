use thiserror::Error;

/// Errors produced by solvers, flux evaluation and configuration.
#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown problem id `{0}`")]
    UnknownProblem(String),

    #[error("no exact solution registered for problem `{0}`")]
    NoExactSolution(String),

    #[error("split-flux quadrature did not converge: achieved {achieved:.3e} after depth {depth}")]
    QuadratureNonConvergence { achieved: f64, depth: usize },

    #[error("moment inversion failed{}: |residual| = {residual:.3e}", cell_msg(.cell))]
    InversionFailure { cell: Option<usize>, residual: f64 },

    #[error("solution became non-finite at step {step}")]
    Instability { step: usize },

    #[error("steady run did not converge within {max_steps} steps (last change {last_delta:.3e})")]
    MaxStepsExceeded { max_steps: usize, last_delta: f64 },

    #[error("CFL violation in direction {direction}: dt/dx * sup|a| = {cfl:.6} > 1")]
    CflViolation { direction: usize, cfl: f64 },

    #[error(
        "no lambda with positive semi-definite diffusion matrix found: reached {lambda:.6} after {tries} increases"
    )]
    PsdSearchFailed { lambda: f64, tries: usize },
}

fn cell_msg(cell: &Option<usize>) -> String {
    match cell {
        Some(c) => format!(" at cell {c}"),
        None => String::new(),
    }
}

impl SolverError {
    /// Attach the offending cell to an inversion failure.
    pub fn with_cell(self, cell: usize) -> Self {
        match self {
            SolverError::InversionFailure { residual, .. } => SolverError::InversionFailure {
                cell: Some(cell),
                residual,
            },
            other => other,
        }
    }
}

pub type Result<T, E = SolverError> = std::result::Result<T, E>;
