//! Flux-decomposed equilibria, moments, collision, streaming, boundary
//! application and the homogeneous time loop.
//!
//! One step is collide -> stream -> boundary fill -> moment
//! recomputation. With `dt = dx/lambda` streaming is an exact one-cell
//! shift per moving population; all arithmetic happens in collision and
//! in the moment sums.

use std::time::Instant;

use crate::boundary::{Boundary, BoundarySet};
use crate::config::{SolverConfig, StopRule, TIME_EPS};
use crate::diagnostics::{RunReport, StepRecord};
use crate::error::{Result, SolverError};
use crate::exact::ExactSolution;
use crate::flux::FluxModel;
use crate::grid::{DistributionField, Point, ScalarField};
use crate::problems::Problem;
use crate::scalar::Scalar;
use crate::velocity::VelocitySet;

/// Largest population count (2D).
pub const MAX_POP: usize = 5;

/// Equilibrium populations for state `u` at position `x`, written into
/// `out[..n_pop]`:
///
/// ```text
/// f_d^eq     = g_d+ / lambda          (moving forward, d < D)
/// f_D^eq     = u - sum_d (g_d+ + g_d-) / lambda   (rest)
/// f_(D+1+d)  = g_d- / lambda          (moving backward)
/// ```
///
/// The moments `sum f^eq = u` and `sum v^(d) f^eq = g_d` follow.
pub fn equilibrium_into<T: Scalar>(
    u: T,
    x: Point<T>,
    model: &FluxModel<T>,
    vset: &VelocitySet<T>,
    out: &mut [T],
) -> Result<()> {
    let dim = vset.dim();
    let lambda = vset.lambda();
    let mut rest = u;
    for d in 0..dim {
        let (gp, gm) = model.split_flux(d, u, x)?;
        out[d] = gp / lambda;
        out[dim + 1 + d] = gm / lambda;
        rest = rest - (gp + gm) / lambda;
    }
    out[dim] = rest;
    Ok(())
}

/// Equilibrium populations as a vector (convenience wrapper).
pub fn equilibrium<T: Scalar>(
    u: T,
    x: Point<T>,
    model: &FluxModel<T>,
    vset: &VelocitySet<T>,
) -> Result<Vec<T>> {
    let mut out = vec![T::zero(); vset.n_pop()];
    equilibrium_into(u, x, model, vset, &mut out)?;
    Ok(out)
}

/// Conserved moment `sum_n f_n`.
pub fn moment0<T: Scalar>(f: &[T]) -> T {
    f.iter().copied().sum()
}

/// First moment `sum_n v_n^(d) f_n`.
pub fn moment1<T: Scalar>(f: &[T], d: usize, vset: &VelocitySet<T>) -> T {
    f.iter()
        .enumerate()
        .map(|(n, &fn_)| vset.velocity(n, d) * fn_)
        .sum()
}

/// BGK collision `f* = (1 - omega) f + omega f^eq(u)` into `out`.
/// Inputs are left unmodified.
pub fn collide_into<T: Scalar>(
    f: &DistributionField<T>,
    u: &ScalarField<T>,
    model: &FluxModel<T>,
    vset: &VelocitySet<T>,
    omega: T,
    out: &mut DistributionField<T>,
) -> Result<()> {
    let cells = f.grid().len();
    let n_pop = f.n_pop();
    let one_minus = T::one() - omega;
    let mut feq = [T::zero(); MAX_POP];
    for cell in 0..cells {
        let x = f.grid().position(cell);
        equilibrium_into(u.values()[cell], x, model, vset, &mut feq[..n_pop])?;
        for n in 0..n_pop {
            let star = one_minus * f.get(n, cell) + omega * feq[n];
            out.set(n, cell, star);
        }
    }
    Ok(())
}

/// Allocating variant of [`collide_into`].
pub fn collide<T: Scalar>(
    f: &DistributionField<T>,
    u: &ScalarField<T>,
    model: &FluxModel<T>,
    vset: &VelocitySet<T>,
    omega: T,
) -> Result<DistributionField<T>> {
    let mut out = DistributionField::zeros(f.grid().clone(), f.n_pop());
    collide_into(f, u, model, vset, omega, &mut out)?;
    Ok(out)
}

/// Streaming: each population shifts exactly one cell along its
/// velocity; the rest population is copied in place. Pure index
/// permutation, no arithmetic. Periodic directions wrap; on other
/// boundaries the cells that receive no upstream value keep the source
/// value at the same cell and must be filled by [`apply_bc`].
pub fn stream_into<T: Scalar>(
    src: &DistributionField<T>,
    vset: &VelocitySet<T>,
    bcs: &BoundarySet<T>,
    dst: &mut DistributionField<T>,
) {
    let grid = src.grid().clone();
    let [n1, n2] = grid.shape();
    let periodic = bcs.periodic_dirs();
    for n in 0..src.n_pop() {
        let [s1, s2] = vset.shift(n);
        let src_plane = src.plane(n);
        let dst_plane = dst.plane_mut(n);
        if s1 == 0 && s2 == 0 {
            dst_plane.copy_from_slice(src_plane);
            continue;
        }
        for j in 0..n2 {
            let ju = upstream_index(j, s2, n2, periodic[1]);
            for i in 0..n1 {
                let iu = upstream_index(i, s1, n1, periodic[0]);
                let from = match (iu, ju) {
                    (Some(iu), Some(ju)) => ju * n1 + iu,
                    // no upstream: placeholder, overwritten by apply_bc
                    _ => j * n1 + i,
                };
                dst_plane[j * n1 + i] = src_plane[from];
            }
        }
    }
}

fn upstream_index(i: usize, shift: isize, n: usize, periodic: bool) -> Option<usize> {
    let raw = i as isize - shift;
    if raw >= 0 && (raw as usize) < n {
        Some(raw as usize)
    } else if periodic {
        Some(((raw + n as isize) % n as isize) as usize)
    } else {
        None
    }
}

/// Allocating variant of [`stream_into`].
pub fn stream<T: Scalar>(
    f: &DistributionField<T>,
    vset: &VelocitySet<T>,
    bcs: &BoundarySet<T>,
) -> DistributionField<T> {
    let mut out = DistributionField::zeros(f.grid().clone(), f.n_pop());
    stream_into(f, vset, bcs, &mut out);
    out
}

/// Fill boundary populations after streaming.
///
/// Dirichlet sides pin the boundary node: the whole population vector
/// becomes the equilibrium of the boundary value, evaluated at the
/// boundary cell's position (the node sits exactly on the boundary).
/// Outflow sides copy the entering population from the nearest interior
/// cell; periodic sides were already handled by the wraparound in
/// [`stream_into`].
pub fn apply_bc<T: Scalar>(
    f: &mut DistributionField<T>,
    bcs: &BoundarySet<T>,
    model: &FluxModel<T>,
    vset: &VelocitySet<T>,
) -> Result<()> {
    bc_fill(f, bcs, model, vset, None)
}

/// Shared boundary fill. `half_source` carries `(source, dt)` for the
/// source-term path, which works on effective populations: a pinned
/// Dirichlet node holds `F = f^eq(u_b) - r(u_b)/2`, so the later
/// recovery `f = F + r/2` lands exactly on the equilibrium of `u_b`.
pub(crate) fn bc_fill<T: Scalar>(
    f: &mut DistributionField<T>,
    bcs: &BoundarySet<T>,
    model: &FluxModel<T>,
    vset: &VelocitySet<T>,
    half_source: Option<(&crate::source::SourceModel<T>, T)>,
) -> Result<()> {
    let grid = f.grid().clone();
    let [n1, n2] = grid.shape();
    let dim = grid.dim();
    let n_pop = vset.n_pop();
    let half = T::real(0.5);
    let mut feq = [T::zero(); MAX_POP];
    let mut r = [T::zero(); MAX_POP];
    for d in 0..dim {
        for hi in [false, true] {
            let boundary = bcs.side(d, hi).clone();
            if boundary.is_periodic() {
                continue;
            }
            let n_d = if d == 0 { n1 } else { n2 };
            let edge = if hi { n_d - 1 } else { 0 };
            let along = if d == 0 { n2 } else { n1 };
            for k in 0..along {
                let (i, j) = if d == 0 { (edge, k) } else { (k, edge) };
                let cell = grid.index(i, j);
                let x = grid.position_ij(i, j);
                let pinned = match &boundary {
                    Boundary::Periodic => unreachable!(),
                    Boundary::Dirichlet(value) => Some(value(x)),
                    Boundary::Outflow => None,
                    Boundary::Mixed(value) => value(x),
                };
                match pinned {
                    Some(ub) => {
                        equilibrium_into(ub, x, model, vset, &mut feq[..n_pop])?;
                        if let Some((source, dt)) = half_source {
                            crate::source::source_populations_into(
                                ub,
                                x,
                                model,
                                source,
                                vset,
                                dt,
                                &mut r[..n_pop],
                            )?;
                            for n in 0..n_pop {
                                f.set(n, cell, feq[n] - half * r[n]);
                            }
                        } else {
                            for n in 0..n_pop {
                                f.set(n, cell, feq[n]);
                            }
                        }
                    }
                    None => {
                        // entering population only; the rest streamed normally
                        let plane = if hi { dim + 1 + d } else { d };
                        let (ni, nj) = if d == 0 {
                            (if hi { edge - 1 } else { 1 }, j)
                        } else {
                            (i, if hi { edge - 1 } else { 1 })
                        };
                        let v = f.get(plane, grid.index(ni, nj));
                        f.set(plane, cell, v);
                    }
                }
            }
        }
    }
    Ok(())
}

/// State of a homogeneous run, stepped by [`LbSolver::step`].
pub struct LbSolver<T: Scalar> {
    model: FluxModel<T>,
    bcs: BoundarySet<T>,
    vset: VelocitySet<T>,
    config: SolverConfig<T>,
    exact: Option<ExactSolution<T>>,
    u: ScalarField<T>,
    f: DistributionField<T>,
    buf: DistributionField<T>,
    t: T,
    steps: usize,
    last_delta: T,
    report: RunReport<T>,
    started: Instant,
}

impl<T: Scalar> LbSolver<T> {
    /// Initialize `f = f^eq(u_0)` (Algorithm step: start from equilibrium).
    pub fn new(problem: &Problem<T>, config: &SolverConfig<T>) -> Result<Self> {
        if problem.source.is_some() {
            return Err(SolverError::InvalidInput(format!(
                "problem `{}` has a source term; use the source-extended solver",
                problem.id
            )));
        }
        config.validate()?;
        config.check_dominates(problem)?;
        let grid = config.grid.clone();
        let vset = crate::velocity::build_velocity_set(grid.dim(), config.lambda)?;
        let u = ScalarField::from_fn(grid.clone(), |x| (problem.ic)(x));
        if !u.all_finite() {
            return Err(SolverError::InvalidInput(
                "initial condition produced non-finite values".into(),
            ));
        }
        let mut f = DistributionField::zeros(grid.clone(), vset.n_pop());
        let mut feq = [T::zero(); MAX_POP];
        for cell in 0..grid.len() {
            let x = grid.position(cell);
            equilibrium_into(
                u.values()[cell],
                x,
                &problem.flux,
                &vset,
                &mut feq[..vset.n_pop()],
            )?;
            for n in 0..vset.n_pop() {
                f.set(n, cell, feq[n]);
            }
        }
        let buf = DistributionField::zeros(grid, vset.n_pop());
        let mut solver = LbSolver {
            model: problem.flux.clone(),
            bcs: problem.bcs.clone(),
            vset,
            config: config.clone(),
            exact: problem.exact.clone(),
            u,
            f,
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

    pub fn config(&self) -> &SolverConfig<T> {
        &self.config
    }

    pub fn report(&self) -> &RunReport<T> {
        &self.report
    }

    /// L-inf change of the last step.
    pub fn last_delta(&self) -> T {
        self.last_delta
    }

    pub fn is_finished(&self) -> bool {
        match self.config.stop {
            StopRule::Transient(t_end) => t_end - self.t <= T::real(TIME_EPS),
            StopRule::Steady => self.last_delta < self.config.steady_tol,
        }
    }

    /// One collide -> stream -> boundary -> moment cycle.
    pub fn step(&mut self) -> Result<()> {
        collide_into(
            &self.f,
            &self.u,
            &self.model,
            &self.vset,
            self.config.omega,
            &mut self.buf,
        )?;
        stream_into(&self.buf, &self.vset, &self.bcs, &mut self.f);
        apply_bc(&mut self.f, &self.bcs, &self.model, &self.vset)?;

        let mut delta = T::zero();
        let cells = self.u.grid().len();
        for cell in 0..cells {
            let new = self.f.moment0_at(cell);
            if !new.is_finite() {
                return Err(SolverError::Instability {
                    step: self.steps + 1,
                });
            }
            delta = delta.max((new - self.u.values()[cell]).abs());
            self.u.values_mut()[cell] = new;
        }
        self.last_delta = delta;
        self.t = self.t + self.config.dt();
        self.steps += 1;
        self.record();
        Ok(())
    }

    /// March to the stop rule; errors on NaN or an exhausted step budget.
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

/// Run a homogeneous problem to completion.
pub fn run<T: Scalar>(
    problem: &Problem<T>,
    config: &SolverConfig<T>,
) -> Result<(ScalarField<T>, RunReport<T>)> {
    let mut solver = LbSolver::new(problem, config)?;
    solver.run()?;
    let LbSolver { u, report, .. } = solver;
    Ok((u, report))
}
