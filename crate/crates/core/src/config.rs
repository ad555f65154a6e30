//! Solver configuration and the lambda-selection rules.

use crate::diagnostics::psd_sampled_ok;
use crate::error::{Result, SolverError};
use crate::grid::Grid;
use crate::problems::Problem;
use crate::scalar::Scalar;

/// Default safety factor on the sampled wave-speed supremum.
pub const DEFAULT_LAMBDA_SAFETY: f64 = 1.05;
/// Default L-inf change per step below which a steady run stops.
pub const DEFAULT_STEADY_TOL: f64 = 1e-10;
/// Default step budget for steady runs.
pub const DEFAULT_MAX_STEPS: usize = 1_000_000;
/// Slack on the transient termination test `t_end - t > 1e-8`.
pub const TIME_EPS: f64 = 1e-8;
/// Multiplier and budget for the 2D PSD lambda search.
pub const PSD_RAISE: f64 = 1.1;
pub const PSD_MAX_TRIES: usize = 30;

/// When to stop a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopRule<T: Scalar> {
    /// March to `t = t_end`.
    Transient(T),
    /// March until the per-step L-inf change drops below `steady_tol`.
    Steady,
}

/// Immutable per-run configuration. `dt` is always `dx / lambda`, never
/// set independently.
#[derive(Debug, Clone)]
pub struct SolverConfig<T: Scalar> {
    pub grid: Grid<T>,
    pub lambda: T,
    pub omega: T,
    pub stop: StopRule<T>,
    pub steady_tol: T,
    pub max_steps: usize,
}

impl<T: Scalar> SolverConfig<T> {
    pub fn dx(&self) -> T {
        self.grid.dx()
    }

    /// Time step `dx / lambda`; exact streaming relies on this ratio.
    pub fn dt(&self) -> T {
        self.grid.dx() / self.lambda
    }

    /// Enforce the lattice-speed invariant against a problem's flux:
    /// `lambda` must dominate the sampled wave-speed bound.
    pub fn check_dominates(&self, problem: &Problem<T>) -> Result<()> {
        let sup = problem.flux.sup_speed_all(problem.u_range, &problem.domain);
        if self.lambda < sup * (T::one() - T::real(1e-12)) {
            return Err(SolverError::InvalidConfig(format!(
                "lambda {} is below the sampled wave-speed bound {} of `{}`",
                self.lambda, sup, problem.id
            )));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > T::zero() && self.omega < T::real(2.0)) {
            return Err(SolverError::InvalidConfig(format!(
                "omega must lie in (0, 2), got {}",
                self.omega
            )));
        }
        if !(self.lambda > T::zero()) || !self.lambda.is_finite() {
            return Err(SolverError::InvalidConfig(format!(
                "lambda must be finite and positive, got {}",
                self.lambda
            )));
        }
        if let StopRule::Transient(t_end) = self.stop {
            if !(t_end >= T::zero()) {
                return Err(SolverError::InvalidConfig(format!(
                    "end time must be non-negative, got {t_end}"
                )));
            }
        }
        Ok(())
    }
}

/// Optional overrides applied on top of a problem's defaults.
#[derive(Debug, Clone, Default)]
pub struct Overrides<T: Scalar> {
    pub points: Option<[usize; 2]>,
    pub omega: Option<T>,
    pub lambda_safety: Option<T>,
    pub t_end: Option<T>,
    pub steady_tol: Option<T>,
    pub max_steps: Option<usize>,
}

impl<T: Scalar> SolverConfig<T> {
    /// Build a configuration for `problem`.
    ///
    /// Lambda selection: `lambda = safety * sup|a|` sampled over the
    /// admissible range and domain; for 2D problems lambda is raised by
    /// 10% (up to [`PSD_MAX_TRIES`] times) until the sampled diffusion
    /// matrix is positive semi-definite; for transient runs lambda is
    /// then rounded up so that `dt` divides the end time exactly.
    pub fn for_problem(problem: &Problem<T>, ov: &Overrides<T>) -> Result<Self> {
        let points = ov.points.unwrap_or(problem.default_points);
        let dim = problem.domain.dim;
        if dim == 1 && points[1] > 1 {
            return Err(SolverError::InvalidConfig(
                "1D problem takes a single point count".into(),
            ));
        }
        let grid = Grid::new(&problem.domain, points, problem.bcs.periodic_dirs())?;

        let omega = ov.omega.unwrap_or_else(|| T::one());
        let safety = ov
            .lambda_safety
            .unwrap_or_else(|| T::real(DEFAULT_LAMBDA_SAFETY));
        if !(safety >= T::one()) {
            return Err(SolverError::InvalidConfig(format!(
                "lambda safety factor must be >= 1, got {safety}"
            )));
        }

        let sup = problem.flux.sup_speed_all(problem.u_range, &problem.domain);
        let mut lambda = if sup > T::zero() {
            safety * sup
        } else {
            // degenerate zero-speed model; any positive lattice speed works
            T::one()
        };

        if dim == 2 {
            let mut tries = 0;
            while !psd_sampled_ok(&problem.flux, problem.u_range, &problem.domain, lambda) {
                tries += 1;
                if tries > PSD_MAX_TRIES {
                    return Err(SolverError::PsdSearchFailed {
                        lambda: lambda.to_f64_lossy(),
                        tries,
                    });
                }
                lambda = lambda * T::real(PSD_RAISE);
            }
        }

        let stop = match ov.t_end {
            Some(t) => StopRule::Transient(t),
            None => problem.stop,
        };

        if let StopRule::Transient(t_end) = stop {
            if t_end > T::zero() {
                // round lambda so dt divides t_end exactly, preferring the
                // step count just below (least dissipation) as long as the
                // resulting lattice speed still dominates the wave speeds
                // and, in 2D, keeps the diffusion matrix PSD
                let raw_steps = t_end * lambda / grid.dx();
                let floor = raw_steps.floor().max(T::one());
                let lam_floor = floor * grid.dx() / t_end;
                let floor_ok = lam_floor >= sup
                    && (dim == 1
                        || psd_sampled_ok(
                            &problem.flux,
                            problem.u_range,
                            &problem.domain,
                            lam_floor,
                        ));
                lambda = if floor_ok {
                    lam_floor
                } else {
                    (floor + T::one()) * grid.dx() / t_end
                };
            }
        }

        let config = SolverConfig {
            grid,
            lambda,
            omega,
            stop,
            steady_tol: ov.steady_tol.unwrap_or_else(|| T::real(DEFAULT_STEADY_TOL)),
            max_steps: ov.max_steps.unwrap_or(DEFAULT_MAX_STEPS),
        };
        config.validate()?;
        Ok(config)
    }
}
