//! Independent Engquist-Osher macroscopic scheme.
//!
//! Used as a correctness oracle for the kinetic path: at `omega = 1`
//! the lattice update reduces algebraically to this scheme with zero
//! remainder, so the two trajectories must agree to round-off. The
//! update code here shares only the flux model with the kinetic path;
//! agreement between the two is evidence, not tautology.
//!
//! Update, per direction `d` with `nu = dt/dx`:
//!
//! ```text
//! u_i <- u_i - nu (g_d+(u_i) - g_d+(u_(i-1)))
//!            + nu (g_d-(u_(i+1)) - g_d-(u_i))
//! ```
//!
//! Ghost values (one layer) realize the boundary conditions: Dirichlet
//! uses the boundary value, outflow copies the edge cell, periodic
//! wraps. Ghost split fluxes are evaluated at the edge cell's position,
//! matching the kinetic boundary fill.

use std::time::Instant;

use crate::boundary::{Boundary, BoundarySet};
use crate::config::{SolverConfig, StopRule, TIME_EPS};
use crate::diagnostics::{RunReport, StepRecord};
use crate::error::{Result, SolverError};
use crate::exact::ExactSolution;
use crate::flux::FluxModel;
use crate::grid::{Domain, ScalarField};
use crate::problems::Problem;
use crate::scalar::Scalar;

/// One Engquist-Osher update. Checks the CFL condition
/// `dt/dx * sup|a_d| <= 1` per direction before stepping.
pub fn eo_update<T: Scalar>(
    u: &ScalarField<T>,
    model: &FluxModel<T>,
    bcs: &BoundarySet<T>,
    config: &SolverConfig<T>,
) -> Result<ScalarField<T>> {
    check_cfl(u, model, config)?;
    let mut out = u.clone();
    eo_update_unchecked(u, model, bcs, config, &mut out)?;
    Ok(out)
}

fn check_cfl<T: Scalar>(
    u: &ScalarField<T>,
    model: &FluxModel<T>,
    config: &SolverConfig<T>,
) -> Result<()> {
    let grid = u.grid();
    let domain = domain_of(u);
    let range = [u.min_value(), u.max_value()];
    let nu = config.dt() / grid.dx();
    for d in 0..grid.dim() {
        let cfl = nu * model.sup_speed(d, range, &domain);
        if cfl > T::one() + T::real(1e-12) {
            return Err(SolverError::CflViolation {
                direction: d,
                cfl: cfl.to_f64_lossy(),
            });
        }
    }
    Ok(())
}

fn domain_of<T: Scalar>(u: &ScalarField<T>) -> Domain<T> {
    let grid = u.grid();
    let [n1, n2] = grid.shape();
    let lo = grid.position_ij(0, 0);
    let hi = grid.position_ij(n1 - 1, n2.saturating_sub(1));
    if grid.dim() == 1 {
        Domain::new_1d(lo[0], hi[0])
    } else {
        Domain::new_2d(lo, hi)
    }
}

fn eo_update_unchecked<T: Scalar>(
    u: &ScalarField<T>,
    model: &FluxModel<T>,
    bcs: &BoundarySet<T>,
    config: &SolverConfig<T>,
    out: &mut ScalarField<T>,
) -> Result<()> {
    let grid = u.grid().clone();
    let [n1, n2] = grid.shape();
    let dim = grid.dim();
    let nu = config.dt() / grid.dx();
    let cells = grid.len();

    // per-cell split fluxes, one pass per direction
    let mut gp = vec![vec![T::zero(); cells]; dim];
    let mut gm = vec![vec![T::zero(); cells]; dim];
    for cell in 0..cells {
        let x = grid.position(cell);
        let uc = u.values()[cell];
        for d in 0..dim {
            let (p, m) = model.split_flux(d, uc, x)?;
            gp[d][cell] = p;
            gm[d][cell] = m;
        }
    }

    for j in 0..n2 {
        for i in 0..n1 {
            let cell = grid.index(i, j);
            let x = grid.position_ij(i, j);
            let mut unew = u.values()[cell];
            for d in 0..dim {
                let (idx_d, n_d) = if d == 0 { (i, n1) } else { (j, n2) };
                let periodic = bcs.periodic_dirs()[d];

                // upstream g+ (ghost at the low side)
                let gp_up = if idx_d > 0 {
                    gp[d][neighbor(&grid, i, j, d, -1)]
                } else if periodic {
                    gp[d][neighbor_wrap(&grid, i, j, d, -1)]
                } else {
                    let ghost = ghost_value(bcs.side(d, false), u, &grid, i, j, d, false);
                    model.split_flux(d, ghost, x)?.0
                };

                // downstream g- (ghost at the high side)
                let gm_down = if idx_d + 1 < n_d {
                    gm[d][neighbor(&grid, i, j, d, 1)]
                } else if periodic {
                    gm[d][neighbor_wrap(&grid, i, j, d, 1)]
                } else {
                    let ghost = ghost_value(bcs.side(d, true), u, &grid, i, j, d, true);
                    model.split_flux(d, ghost, x)?.1
                };

                unew = unew - nu * (gp[d][cell] - gp_up) + nu * (gm_down - gm[d][cell]);
            }
            out.values_mut()[cell] = unew;
        }
    }

    // pin prescribed nodes, in the same side order as the kinetic fill
    for d in 0..dim {
        for hi in [false, true] {
            let boundary = bcs.side(d, hi);
            let n_d = if d == 0 { n1 } else { n2 };
            let edge = if hi { n_d - 1 } else { 0 };
            let along = if d == 0 { n2 } else { n1 };
            for k in 0..along {
                let (i, j) = if d == 0 { (edge, k) } else { (k, edge) };
                let x = grid.position_ij(i, j);
                let pinned = match boundary {
                    Boundary::Dirichlet(value) => Some(value(x)),
                    Boundary::Mixed(value) => value(x),
                    _ => None,
                };
                if let Some(ub) = pinned {
                    out.values_mut()[grid.index(i, j)] = ub;
                }
            }
        }
    }
    Ok(())
}

fn neighbor<T: Scalar>(
    grid: &crate::grid::Grid<T>,
    i: usize,
    j: usize,
    d: usize,
    off: isize,
) -> usize {
    if d == 0 {
        grid.index((i as isize + off) as usize, j)
    } else {
        grid.index(i, (j as isize + off) as usize)
    }
}

fn neighbor_wrap<T: Scalar>(
    grid: &crate::grid::Grid<T>,
    i: usize,
    j: usize,
    d: usize,
    off: isize,
) -> usize {
    let [n1, n2] = grid.shape();
    let wrap = |v: usize, n: usize| (((v as isize + off) + n as isize) % n as isize) as usize;
    if d == 0 {
        grid.index(wrap(i, n1), j)
    } else {
        grid.index(i, wrap(j, n2))
    }
}

fn ghost_value<T: Scalar>(
    boundary: &Boundary<T>,
    u: &ScalarField<T>,
    grid: &crate::grid::Grid<T>,
    i: usize,
    j: usize,
    _d: usize,
    _hi: bool,
) -> T {
    match boundary {
        Boundary::Periodic => unreachable!("periodic handled by wraparound"),
        Boundary::Dirichlet(value) => value(grid.position_ij(i, j)),
        Boundary::Outflow => u.values()[grid.index(i, j)],
        // prescribed nodes carry the boundary value, the rest behave
        // like outflow (copy the edge cell)
        Boundary::Mixed(value) => {
            value(grid.position_ij(i, j)).unwrap_or(u.values()[grid.index(i, j)])
        }
    }
}

/// Engquist-Osher time loop mirroring the kinetic run semantics.
pub struct EoSolver<T: Scalar> {
    model: FluxModel<T>,
    bcs: BoundarySet<T>,
    config: SolverConfig<T>,
    exact: Option<ExactSolution<T>>,
    u: ScalarField<T>,
    buf: ScalarField<T>,
    t: T,
    steps: usize,
    last_delta: T,
    report: RunReport<T>,
    started: Instant,
}

impl<T: Scalar> EoSolver<T> {
    pub fn new(problem: &Problem<T>, config: &SolverConfig<T>) -> Result<Self> {
        if problem.source.is_some() {
            return Err(SolverError::InvalidInput(format!(
                "problem `{}` has a source term; the macroscopic oracle is homogeneous-only",
                problem.id
            )));
        }
        config.validate()?;
        config.check_dominates(problem)?;
        let grid = config.grid.clone();
        let u = ScalarField::from_fn(grid.clone(), |x| (problem.ic)(x));
        check_cfl(&u, &problem.flux, config)?;
        let buf = u.clone();
        let mut solver = EoSolver {
            model: problem.flux.clone(),
            bcs: problem.bcs.clone(),
            config: config.clone(),
            exact: problem.exact.clone(),
            u,
            buf,
            t: T::zero(),
            steps: 0,
            last_delta: T::infinity(),
            report: RunReport::new(),
            started: Instant::now(),
        };
        solver.record();
        Ok(solver)
    }

    pub fn u(&self) -> &ScalarField<T> {
        &self.u
    }

    pub fn time(&self) -> T {
        self.t
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn report(&self) -> &RunReport<T> {
        &self.report
    }

    pub fn is_finished(&self) -> bool {
        match self.config.stop {
            StopRule::Transient(t_end) => t_end - self.t <= T::real(TIME_EPS),
            StopRule::Steady => self.last_delta < self.config.steady_tol,
        }
    }

    pub fn step(&mut self) -> Result<()> {
        eo_update_unchecked(&self.u, &self.model, &self.bcs, &self.config, &mut self.buf)?;
        let mut delta = T::zero();
        for cell in 0..self.u.grid().len() {
            let new = self.buf.values()[cell];
            if !new.is_finite() {
                return Err(SolverError::Instability {
                    step: self.steps + 1,
                });
            }
            delta = delta.max((new - self.u.values()[cell]).abs());
        }
        std::mem::swap(&mut self.u, &mut self.buf);
        self.last_delta = delta;
        self.t = self.t + self.config.dt();
        self.steps += 1;
        self.record();
        Ok(())
    }

    pub fn run(&mut self) -> Result<()> {
        while !self.is_finished() {
            if self.steps >= self.config.max_steps {
                return Err(SolverError::MaxStepsExceeded {
                    max_steps: self.config.max_steps,
                    last_delta: self.last_delta.to_f64_lossy(),
                });
            }
            self.step()?;
        }
        self.report.wall_seconds = self.started.elapsed().as_secs_f64();
        Ok(())
    }

    fn record(&mut self) {
        let rec = StepRecord::measure(self.steps, self.t, &self.u, self.exact.as_ref());
        self.report.records.push(rec);
        self.report.steps = self.steps;
    }
}

/// Run the macroscopic oracle to completion.
pub fn eo_run<T: Scalar>(
    problem: &Problem<T>,
    config: &SolverConfig<T>,
) -> Result<(ScalarField<T>, RunReport<T>)> {
    let mut solver = EoSolver::new(problem, config)?;
    solver.run()?;
    let EoSolver { u, report, .. } = solver;
    Ok((u, report))
}
