//! Source-term extension: mesoscopic source populations, collision with
//! source, implicit moment inversion and the extended time loop.
//!
//! The source enters through populations `r_n` shaped like the
//! equilibria but weighted by the split wave speeds, which cancels the
//! spurious convection a naive source discretisation would add. The
//! trapezoidal half of `r` at the new time makes the update implicit in
//! `u`; the scalar equation `u - dt/2 s(u) = sum F_n` is solved per cell
//! by Newton with a bisection fallback.

use std::time::Instant;

use crate::config::{SolverConfig, StopRule, TIME_EPS};
use crate::diagnostics::{RunReport, StepRecord};
use crate::error::{Result, SolverError};
use crate::exact::ExactSolution;
use crate::flux::{wave_speed_split, FluxModel};
use crate::grid::{DistributionField, Point, ScalarField, StateFn};
use crate::kinetic::{bc_fill, equilibrium_into, stream_into, MAX_POP};
use crate::problems::Problem;
use crate::scalar::Scalar;
use crate::velocity::VelocitySet;

/// Residual below which the moment inversion is considered converged
/// (quoted for f64; scaled by the scalar's epsilon for other types).
pub const INVERT_TOL: f64 = 5e-13;
/// Largest residual the inversion accepts after the bisection fallback
/// (same scaling rule as [`INVERT_TOL`]).
pub const INVERT_ACCEPT: f64 = 1e-12;
/// Newton iteration budget.
pub const NEWTON_MAX_ITERS: usize = 50;
/// Bracket-expansion budget of the bisection fallback.
pub const BISECT_MAX_DOUBLINGS: usize = 60;

/// Source term `s(u; x)` with its derivative for Newton.
#[derive(Clone)]
pub struct SourceModel<T: Scalar> {
    s: StateFn<T>,
    ds_du: StateFn<T>,
}

impl<T: Scalar> SourceModel<T> {
    pub fn new(
        s: impl Fn(T, Point<T>) -> T + Send + Sync + 'static,
        ds_du: impl Fn(T, Point<T>) -> T + Send + Sync + 'static,
    ) -> Self {
        SourceModel {
            s: std::sync::Arc::new(s),
            ds_du: std::sync::Arc::new(ds_du),
        }
    }

    #[inline]
    pub fn eval(&self, u: T, x: Point<T>) -> T {
        (self.s)(u, x)
    }

    #[inline]
    pub fn deriv(&self, u: T, x: Point<T>) -> T {
        (self.ds_du)(u, x)
    }
}

impl<T: Scalar> std::fmt::Debug for SourceModel<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SourceModel(..)")
    }
}

/// Source populations written into `out[..n_pop]`:
///
/// ```text
/// r_d       = dt s a_d+ / lambda
/// r_D       = dt s (1 - sum_d (a_d+ + a_d-) / lambda)
/// r_(D+1+d) = dt s a_d- / lambda
/// ```
///
/// Their moments are `sum r / dt = s` and `sum v^(d) r / dt = a_d s`.
pub fn source_populations_into<T: Scalar>(
    u: T,
    x: Point<T>,
    model: &FluxModel<T>,
    source: &SourceModel<T>,
    vset: &VelocitySet<T>,
    dt: T,
    out: &mut [T],
) -> Result<()> {
    let dim = vset.dim();
    let lambda = vset.lambda();
    let s = source.eval(u, x);
    let dts = dt * s;
    let mut rest_weight = T::one();
    for d in 0..dim {
        let a = model.wave_speed(d, u, x);
        let (ap, am) = wave_speed_split(a)?;
        out[d] = dts * ap / lambda;
        out[dim + 1 + d] = dts * am / lambda;
        rest_weight = rest_weight - (ap + am) / lambda;
    }
    out[dim] = dts * rest_weight;
    Ok(())
}

/// Allocating variant of [`source_populations_into`].
pub fn source_populations<T: Scalar>(
    u: T,
    x: Point<T>,
    model: &FluxModel<T>,
    source: &SourceModel<T>,
    vset: &VelocitySet<T>,
    dt: T,
) -> Result<Vec<T>> {
    let mut out = vec![T::zero(); vset.n_pop()];
    source_populations_into(u, x, model, source, vset, dt, &mut out)?;
    Ok(out)
}

/// Collision with source: effective populations
/// `F* = (1 - omega) f + omega f^eq(u) + r(u)/2`, written into `out`.
pub fn collide_with_source_into<T: Scalar>(
    f: &DistributionField<T>,
    u: &ScalarField<T>,
    model: &FluxModel<T>,
    source: &SourceModel<T>,
    vset: &VelocitySet<T>,
    omega: T,
    dt: T,
    out: &mut DistributionField<T>,
) -> Result<()> {
    let cells = f.grid().len();
    let n_pop = f.n_pop();
    let one_minus = T::one() - omega;
    let half = T::real(0.5);
    let mut feq = [T::zero(); MAX_POP];
    let mut r = [T::zero(); MAX_POP];
    for cell in 0..cells {
        let x = f.grid().position(cell);
        let uc = u.values()[cell];
        equilibrium_into(uc, x, model, vset, &mut feq[..n_pop])?;
        source_populations_into(uc, x, model, source, vset, dt, &mut r[..n_pop])?;
        for n in 0..n_pop {
            out.set(
                n,
                cell,
                one_minus * f.get(n, cell) + omega * feq[n] + half * r[n],
            );
        }
    }
    Ok(())
}

/// Allocating variant of [`collide_with_source_into`].
pub fn collide_with_source<T: Scalar>(
    f: &DistributionField<T>,
    u: &ScalarField<T>,
    model: &FluxModel<T>,
    source: &SourceModel<T>,
    vset: &VelocitySet<T>,
    omega: T,
    dt: T,
) -> Result<DistributionField<T>> {
    let mut out = DistributionField::zeros(f.grid().clone(), f.n_pop());
    collide_with_source_into(f, u, model, source, vset, omega, dt, &mut out)?;
    Ok(out)
}

/// Solve `u - dt/2 s(u; x) = f_sum` for `u`.
///
/// Newton from `u_guess` (the previous-step value of the cell), falling
/// back to bisection on an expanding bracket `[guess - K, guess + K]`
/// with `K` doubling until a sign change appears.
pub fn moment_invert<T: Scalar>(
    f_sum: T,
    x: Point<T>,
    source: &SourceModel<T>,
    dt: T,
    u_guess: T,
) -> Result<T> {
    let half_dt = dt * T::real(0.5);
    let residual = |v: T| v - half_dt * source.eval(v, x) - f_sum;
    // tolerances are stated for f64 and widen with the scalar's epsilon
    let precision = T::epsilon() / T::real(f64::EPSILON);
    let tol = T::real(INVERT_TOL) * precision;
    let accept = T::real(INVERT_ACCEPT) * precision;

    // Newton; convergence is tested after the update so a near-converged
    // guess is still polished to the root
    let mut v = u_guess;
    let mut r = residual(v);
    if r == T::zero() {
        return Ok(v);
    }
    for _ in 0..NEWTON_MAX_ITERS {
        let slope = T::one() - half_dt * source.deriv(v, x);
        if slope.abs() < T::real(1e-14) {
            break;
        }
        let next = v - r / slope;
        if !next.is_finite() {
            break;
        }
        v = next;
        r = residual(v);
        if r.abs() < tol {
            return Ok(v);
        }
    }

    // bisection fallback on an expanding bracket around the guess
    let mut k = T::real(1e-6) * u_guess.abs().max(T::one());
    let mut bracket = None;
    for _ in 0..=BISECT_MAX_DOUBLINGS {
        let (lo, hi) = (u_guess - k, u_guess + k);
        let (rlo, rhi) = (residual(lo), residual(hi));
        if rlo == T::zero() {
            return Ok(lo);
        }
        if rhi == T::zero() {
            return Ok(hi);
        }
        if rlo.signum() != rhi.signum() {
            bracket = Some((lo, hi, rlo));
            break;
        }
        k = k + k;
    }
    let (mut lo, mut hi, rlo) = bracket.ok_or(SolverError::InversionFailure {
        cell: None,
        residual: residual(u_guess).abs().to_f64_lossy(),
    })?;
    let lo_sign = rlo.signum();
    for _ in 0..200 {
        let mid = (lo + hi) * T::real(0.5);
        if mid == lo || mid == hi {
            break;
        }
        if residual(mid).signum() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut v = (lo + hi) * T::real(0.5);
    // polish: a couple of Newton steps from inside the bracket
    for _ in 0..4 {
        let r = residual(v);
        if r.abs() < tol {
            return Ok(v);
        }
        let slope = T::one() - half_dt * source.deriv(v, x);
        if slope.abs() < T::real(1e-14) {
            break;
        }
        v = v - r / slope;
    }
    let r = residual(v).abs();
    if r < accept {
        Ok(v)
    } else {
        Err(SolverError::InversionFailure {
            cell: None,
            residual: r.to_f64_lossy(),
        })
    }
}

/// State of a run with source terms.
pub struct SourceLbSolver<T: Scalar> {
    model: FluxModel<T>,
    source: SourceModel<T>,
    bcs: crate::boundary::BoundarySet<T>,
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

impl<T: Scalar> SourceLbSolver<T> {
    pub fn new(problem: &Problem<T>, config: &SolverConfig<T>) -> Result<Self> {
        let source = problem.source.clone().ok_or_else(|| {
            SolverError::InvalidInput(format!(
                "problem `{}` has no source term; use the homogeneous solver",
                problem.id
            ))
        })?;
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
        // initialise from equilibrium, as in the homogeneous algorithm
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
        let mut solver = SourceLbSolver {
            model: problem.flux.clone(),
            source,
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

    pub fn report(&self) -> &RunReport<T> {
        &self.report
    }

    pub fn is_finished(&self) -> bool {
        match self.config.stop {
            StopRule::Transient(t_end) => t_end - self.t <= T::real(TIME_EPS),
            StopRule::Steady => self.last_delta < self.config.steady_tol,
        }
    }

    /// One extended cycle: collide with source, stream the effective
    /// populations, fill boundaries, invert the moment equation for `u`,
    /// then recover the physical populations `f = F + r(u)/2`.
    pub fn step(&mut self) -> Result<()> {
        let dt = self.config.dt();
        collide_with_source_into(
            &self.f,
            &self.u,
            &self.model,
            &self.source,
            &self.vset,
            self.config.omega,
            dt,
            &mut self.buf,
        )?;
        stream_into(&self.buf, &self.vset, &self.bcs, &mut self.f);
        bc_fill(
            &mut self.f,
            &self.bcs,
            &self.model,
            &self.vset,
            Some((&self.source, dt)),
        )?;

        let cells = self.u.grid().len();
        let n_pop = self.vset.n_pop();
        let half = T::real(0.5);
        let mut r = [T::zero(); MAX_POP];
        let mut delta = T::zero();
        for cell in 0..cells {
            let x = self.u.grid().position(cell);
            let f_sum = self.f.moment0_at(cell);
            let guess = self.u.values()[cell];
            let new =
                moment_invert(f_sum, x, &self.source, dt, guess).map_err(|e| e.with_cell(cell))?;
            if !new.is_finite() {
                return Err(SolverError::Instability {
                    step: self.steps + 1,
                });
            }
            source_populations_into(
                new,
                x,
                &self.model,
                &self.source,
                &self.vset,
                dt,
                &mut r[..n_pop],
            )?;
            for n in 0..n_pop {
                let v = self.f.get(n, cell) + half * r[n];
                self.f.set(n, cell, v);
            }
            delta = delta.max((new - guess).abs());
            self.u.values_mut()[cell] = new;
        }
        self.last_delta = delta;
        self.t = self.t + dt;
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

/// Run a problem with a source term to completion.
pub fn run_with_source<T: Scalar>(
    problem: &Problem<T>,
    config: &SolverConfig<T>,
) -> Result<(ScalarField<T>, RunReport<T>)> {
    let mut solver = SourceLbSolver::new(problem, config)?;
    solver.run()?;
    let SourceLbSolver { u, report, .. } = solver;
    Ok((u, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{Boundary, BoundarySet};
    use crate::config::Overrides;
    use crate::problems;
    use crate::velocity::build_velocity_set;
    use std::sync::Arc;

    fn zero_source() -> SourceModel<f64> {
        SourceModel::new(|_, _| 0.0, |_, _| 0.0)
    }

    fn leveque_yee_source(mu: f64) -> SourceModel<f64> {
        SourceModel::new(
            move |u, _| -mu * u * (u - 1.0) * (u - 0.5),
            move |u, _| -mu * (3.0 * u * u - 3.0 * u + 0.5),
        )
    }

    #[test]
    fn source_populations_vanish_without_source() {
        let m = FluxModel::burgers_1d();
        let v = build_velocity_set(1, 2.0).unwrap();
        let r = source_populations(0.7, [0.0, 0.0], &m, &zero_source(), &v, 0.01).unwrap();
        assert_eq!(r, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn source_populations_linear_flux() {
        // a = 1, lambda = 1: all the weight goes to the forward population
        let m = FluxModel::linear_1d(1.0);
        let v = build_velocity_set(1, 1.0).unwrap();
        let sigma = 0.3f64;
        let src = SourceModel::new(move |_, _| sigma, |_, _| 0.0);
        let dt = 0.02;
        let r = source_populations(0.5, [0.0, 0.0], &m, &src, &v, dt).unwrap();
        assert!((r[0] - dt * sigma).abs() < 1e-16);
        assert_eq!(r[1], 0.0);
        assert_eq!(r[2], 0.0);
    }

    #[test]
    fn source_populations_burgers_negative_state() {
        // a(-1) = -1, lambda = 2: a+ = 0, a- = 1
        let m = FluxModel::burgers_1d();
        let v = build_velocity_set(1, 2.0).unwrap();
        let sigma = 1.7f64;
        let src = SourceModel::new(move |_, _| sigma, |_, _| 0.0);
        let dt = 0.05;
        let r = source_populations(-1.0, [0.0, 0.0], &m, &src, &v, dt).unwrap();
        assert!((r[0] - 0.0).abs() < 1e-16);
        assert!((r[1] - dt * sigma * 0.5).abs() < 1e-15);
        assert!((r[2] - dt * sigma * 0.5).abs() < 1e-15);
    }

    #[test]
    fn source_moment_identities() {
        let m = FluxModel::burgers_1d();
        let v = build_velocity_set(1, 2.5).unwrap();
        let src = leveque_yee_source(100.0);
        let dt = 0.01;
        let mut state = 0x9E3779B97F4A7C15u64;
        for _ in 0..1000 {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let u = -2.0 + 4.0 * ((state >> 11) as f64) / ((1u64 << 53) as f64);
            let x = [0.4, 0.0];
            let r = source_populations(u, x, &m, &src, &v, dt).unwrap();
            let s = src.eval(u, x);
            let a = m.wave_speed(0, u, x);
            let m0: f64 = r.iter().sum();
            let m1: f64 = crate::kinetic::moment1(&r, 0, &v);
            assert!((m0 / dt - s).abs() < 1e-12 * s.abs().max(1.0));
            assert!((m1 / dt - a * s).abs() < 1e-12 * (a * s).abs().max(1.0));
        }
    }

    #[test]
    fn collide_with_source_reduces_to_plain_collision() {
        let p = problems::by_id::<f64>("burgers-sine").unwrap();
        let config = SolverConfig::for_problem(&p, &Overrides::default()).unwrap();
        let solver = crate::kinetic::LbSolver::new(&p, &config).unwrap();
        let plain = crate::kinetic::collide(
            &solver_f(&solver),
            solver.u(),
            &p.flux,
            &vset_of(&config),
            1.3,
        )
        .unwrap();
        let with_src = collide_with_source(
            &solver_f(&solver),
            solver.u(),
            &p.flux,
            &zero_source(),
            &vset_of(&config),
            1.3,
            config.dt(),
        )
        .unwrap();
        assert_eq!(plain.data(), with_src.data());
    }

    fn vset_of(config: &SolverConfig<f64>) -> VelocitySet<f64> {
        build_velocity_set(config.grid.dim(), config.lambda).unwrap()
    }

    fn solver_f(solver: &crate::kinetic::LbSolver<f64>) -> DistributionField<f64> {
        // rebuild the equilibrium field the solver starts from
        let grid = solver.u().grid().clone();
        let vset = build_velocity_set(grid.dim(), solver.config().lambda).unwrap();
        let p = problems::by_id::<f64>("burgers-sine").unwrap();
        let mut f = DistributionField::zeros(grid.clone(), vset.n_pop());
        let mut feq = [0.0; MAX_POP];
        for cell in 0..grid.len() {
            equilibrium_into(
                solver.u().values()[cell],
                grid.position(cell),
                &p.flux,
                &vset,
                &mut feq[..vset.n_pop()],
            )
            .unwrap();
            for n in 0..vset.n_pop() {
                f.set(n, cell, feq[n]);
            }
        }
        f
    }

    #[test]
    fn collide_with_source_at_equilibrium() {
        // f = f^eq, omega arbitrary: F* = f^eq + r/2
        let m = FluxModel::linear_1d(1.0);
        let v = build_velocity_set(1, 1.0).unwrap();
        let src = SourceModel::<f64>::new(|_, _| 2.0, |_, _| 0.0);
        let dom = crate::grid::Domain::new_1d(0.0, 1.0);
        let grid = crate::grid::Grid::new(&dom, [4, 1], [true, false]).unwrap();
        let u = ScalarField::constant(grid.clone(), 0.8);
        let mut f = DistributionField::zeros(grid, 3);
        let mut feq = [0.0; 3];
        for cell in 0..4 {
            equilibrium_into(0.8, [0.0, 0.0], &m, &v, &mut feq).unwrap();
            for n in 0..3 {
                f.set(n, cell, feq[n]);
            }
        }
        let dt = 0.1;
        let r = source_populations(0.8, [0.0, 0.0], &m, &src, &v, dt).unwrap();
        // at equilibrium the homogeneous part is a fixed point for any
        // omega, and at omega = 1 it is one for any f
        for omega in [0.7, 1.0] {
            let out = collide_with_source(&f, &u, &m, &src, &v, omega, dt).unwrap();
            for cell in 0..4 {
                for n in 0..3 {
                    let expect = feq[n] + 0.5 * r[n];
                    assert!((out.get(n, cell) - expect).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn invert_identity_without_source() {
        let u = moment_invert(0.37, [0.0, 0.0], &zero_source(), 0.02, 0.5).unwrap();
        assert!((u - 0.37).abs() < 1e-14);
    }

    #[test]
    fn invert_linear_source_closed_form() {
        // s = c u  =>  u = f_sum / (1 - dt c / 2)
        let c = 3.0f64;
        let src = SourceModel::new(move |u, _| c * u, move |_, _| c);
        let dt = 0.1;
        let f_sum = 0.8;
        let expect = f_sum / (1.0 - dt * c / 2.0);
        let u = moment_invert(f_sum, [0.0, 0.0], &src, dt, 0.5).unwrap();
        assert!((u - expect).abs() < 1e-12);
    }

    /// Independent oracle: plain bisection of `u - dt/2 s(u) = f_sum`
    /// on a fixed bracket, no Newton anywhere.
    fn bisect_oracle(f_sum: f64, src: &SourceModel<f64>, dt: f64, lo: f64, hi: f64) -> f64 {
        let g = |v: f64| v - 0.5 * dt * src.eval(v, [0.0, 0.0]) - f_sum;
        let (mut lo, mut hi) = (lo, hi);
        assert!(
            g(lo) * g(hi) <= 0.0,
            "oracle bracket must straddle the root"
        );
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(lo) * g(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn invert_stiff_cubic_matches_bisection_oracle() {
        let src = leveque_yee_source(1000.0);
        let dt = 0.01;
        let f_sum = 0.4;
        let oracle = bisect_oracle(f_sum, &src, dt, -1.0, 2.0);
        let u = moment_invert(f_sum, [0.0, 0.0], &src, dt, 0.4).unwrap();
        assert!(
            (u - oracle).abs() < 1e-10,
            "inversion {u} vs oracle {oracle}"
        );
        // and the defining residual is met
        let resid = u - 0.5 * dt * src.eval(u, [0.0, 0.0]) - f_sum;
        assert!(resid.abs() < 1e-12);
    }

    #[test]
    fn invert_round_trip_right_inverse() {
        // right inverse: phi(invert(F)) = F for F = phi(u), guess = u
        let src = leveque_yee_source(1000.0);
        let dt = 0.01;
        let phi = |u: f64| u - 0.5 * dt * src.eval(u, [0.0, 0.0]);
        let mut state = 0xABCDEF0123456789u64;
        for _ in 0..1000 {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let u = -0.5 + 2.0 * ((state >> 11) as f64) / ((1u64 << 53) as f64);
            let f_sum = phi(u);
            let back = moment_invert(f_sum, [0.0, 0.0], &src, dt, u).unwrap();
            assert!((phi(back) - f_sum).abs() < 1e-12);
            assert!((back - u).abs() < 1e-10, "u = {u} came back as {back}");
        }
    }

    #[test]
    fn zero_source_reduces_to_homogeneous_run() {
        let hom = problems::by_id::<f64>("burgers-square").unwrap();
        let config = SolverConfig::for_problem(&hom, &Overrides::default()).unwrap();
        let mut plain = crate::kinetic::LbSolver::new(&hom, &config).unwrap();
        let with_zero = Problem {
            source: Some(zero_source()),
            ..hom
        };
        let mut srcrun = SourceLbSolver::new(&with_zero, &config).unwrap();
        let mut max_diff = 0.0f64;
        while !plain.is_finished() {
            plain.step().unwrap();
            srcrun.step().unwrap();
            let d = plain
                .u()
                .values()
                .iter()
                .zip(srcrun.u().values())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            max_diff = max_diff.max(d);
        }
        assert!(plain.steps() > 5, "expected a multi-step run");
        assert!(
            max_diff <= 1e-14,
            "zero-source trajectories differ by {max_diff}"
        );
    }

    #[test]
    fn well_balanced_constant_root_state() {
        // u = 1 is a root of the LeVeque-Yee source; with matching
        // Dirichlet data the state must stay constant.
        let base = problems::leveque_yee::<f64>(1000.0);
        let p = Problem {
            ic: Arc::new(|_| 1.0),
            bcs: BoundarySet::new_1d(Boundary::dirichlet(1.0), Boundary::dirichlet(1.0)).unwrap(),
            ..base
        };
        let config = SolverConfig::for_problem(&p, &Overrides::default()).unwrap();
        let mut solver = SourceLbSolver::new(&p, &config).unwrap();
        for _ in 0..1000 {
            solver.step().unwrap();
        }
        for &v in solver.u().values() {
            assert!((v - 1.0).abs() < 1e-12, "drifted to {v}");
        }
    }
}
