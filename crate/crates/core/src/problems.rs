//! The catalog of bundled test problems.
//!
//! Each entry is self-describing: domain, default lattice, initial and
//! boundary data, flux, optional source, stop rule and (where known) an
//! exact solution. Problem ids are the CLI contract.

use std::sync::Arc;

use crate::boundary::{Boundary, BoundarySet};
use crate::config::StopRule;
use crate::error::{Result, SolverError};
use crate::exact::ExactSolution;
use crate::flux::{ComponentFlux, FluxModel};
use crate::grid::{Domain, SpaceFn};
use crate::scalar::Scalar;
use crate::source::SourceModel;

/// A named test case consumable by the solvers and the CLI.
#[derive(Clone)]
pub struct Problem<T: Scalar> {
    pub id: &'static str,
    /// Where the test case comes from.
    pub reference: &'static str,
    pub domain: Domain<T>,
    pub default_points: [usize; 2],
    pub ic: SpaceFn<T>,
    pub bcs: BoundarySet<T>,
    pub flux: FluxModel<T>,
    pub source: Option<SourceModel<T>>,
    pub stop: StopRule<T>,
    /// Admissible state interval: the span of IC and boundary values,
    /// widened by 10%.
    pub u_range: [T; 2],
    pub exact: Option<ExactSolution<T>>,
    /// Measurement time for convergence studies, where one makes sense.
    pub convergence_time: Option<T>,
    /// Plotting hint: (lowest level, highest level, level count).
    pub contour_hint: Option<(f64, f64, usize)>,
}

impl<T: Scalar> std::fmt::Debug for Problem<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Problem")
            .field("id", &self.id)
            .field("domain", &self.domain)
            .field("default_points", &self.default_points)
            .field("stop", &self.stop)
            .field("u_range", &self.u_range)
            .finish_non_exhaustive()
    }
}

/// Sample IC and Dirichlet data to bound the states a run can visit,
/// then widen the interval by 10% of its span.
fn admissible_range<T: Scalar>(
    ic: &SpaceFn<T>,
    bcs: &BoundarySet<T>,
    domain: &Domain<T>,
) -> [T; 2] {
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for x in domain.sample_positions(65) {
        let v = ic(x);
        lo = lo.min(v);
        hi = hi.max(v);
    }
    for d in 0..domain.dim {
        for high_side in [false, true] {
            let boundary = bcs.side(d, high_side);
            let prescribed: Option<&dyn Fn([T; 2]) -> Option<T>> = match boundary {
                Boundary::Dirichlet(value) => Some(&|x| Some(value(x))),
                Boundary::Mixed(value) => Some(&|x| value(x)),
                _ => None,
            };
            if let Some(value) = prescribed {
                let edge = if high_side {
                    domain.hi[d]
                } else {
                    domain.lo[d]
                };
                let other = 1 - d;
                let samples = 65;
                for k in 0..=samples {
                    let frac = T::from_usize(k).unwrap() / T::from_usize(samples).unwrap();
                    let mut x = [T::zero(); 2];
                    x[d] = edge;
                    if domain.dim == 2 {
                        x[other] = domain.lo[other] + domain.extent(other) * frac;
                    }
                    if let Some(v) = value(x) {
                        lo = lo.min(v);
                        hi = hi.max(v);
                    }
                }
            }
        }
    }
    let span = hi - lo;
    let pad = if span > T::real(1e-12) {
        span * T::real(0.05)
    } else {
        T::real(0.5)
    };
    [lo - pad, hi + pad]
}

fn build<T: Scalar>(
    id: &'static str,
    reference: &'static str,
    domain: Domain<T>,
    default_points: [usize; 2],
    ic: SpaceFn<T>,
    bcs: BoundarySet<T>,
    flux: FluxModel<T>,
    source: Option<SourceModel<T>>,
    stop: StopRule<T>,
    exact: Option<ExactSolution<T>>,
) -> Problem<T> {
    let u_range = admissible_range(&ic, &bcs, &domain);
    Problem {
        id,
        reference,
        domain,
        default_points,
        ic,
        bcs,
        flux,
        source,
        stop,
        u_range,
        exact,
        convergence_time: None,
        contour_hint: None,
    }
}

/// 1D linear convection of a `sin^4` profile over one period.
fn linear_sin4<T: Scalar>() -> Problem<T> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let ic: SpaceFn<T> = Arc::new(|x: [T; 2]| {
        let s = x[0].sin();
        s * s * s * s
    });
    let mut p = build(
        "linear-sin4",
        "Chen & Shu (2017)",
        Domain::new_1d(T::zero(), T::real(two_pi)),
        [41, 1],
        ic.clone(),
        BoundarySet::periodic_1d(),
        FluxModel::linear_1d(T::one()),
        None,
        StopRule::Transient(T::real(two_pi)),
        Some(ExactSolution::AdvectedPeriodic {
            speed: T::one(),
            lo: T::zero(),
            length: T::real(two_pi),
            ic,
        }),
    );
    p.convergence_time = Some(T::real(two_pi));
    p
}

/// 1D Burgers with an initial sine wave.
fn burgers_sine<T: Scalar>() -> Problem<T> {
    let two_pi = 2.0 * std::f64::consts::PI;
    let ic: SpaceFn<T> = Arc::new(move |x: [T; 2]| (T::real(two_pi) * x[0]).sin());
    let mut p = build(
        "burgers-sine",
        "Ben-Artzi & Falcovitz (2003)",
        Domain::new_1d(T::zero(), T::one()),
        [81, 1],
        ic,
        BoundarySet::periodic_1d(),
        FluxModel::burgers_1d(),
        None,
        StopRule::Transient(T::real(0.25)),
        Some(ExactSolution::BurgersSine),
    );
    // smooth pre-shock time used for order measurements
    p.convergence_time = Some(T::real(0.5 / two_pi));
    p
}

/// 1D Burgers square wave without a sonic point (1/0 states).
fn burgers_square<T: Scalar>() -> Problem<T> {
    let third = 1.0 / 3.0;
    let ic: SpaceFn<T> = Arc::new(move |x: [T; 2]| {
        if x[0].abs() <= T::real(third) {
            T::one()
        } else {
            T::zero()
        }
    });
    build(
        "burgers-square",
        "Laney (1998)",
        Domain::new_1d(-T::one(), T::one()),
        [41, 1],
        ic,
        BoundarySet::new_1d(Boundary::Outflow, Boundary::Outflow).unwrap(),
        FluxModel::burgers_1d(),
        None,
        StopRule::Transient(T::real(0.6)),
        Some(ExactSolution::BurgersSquare),
    )
}

/// 1D Burgers square wave with a sonic point (1/-1 states).
fn burgers_square_sonic<T: Scalar>() -> Problem<T> {
    let third = 1.0 / 3.0;
    let ic: SpaceFn<T> = Arc::new(move |x: [T; 2]| {
        if x[0].abs() <= T::real(third) {
            T::one()
        } else {
            -T::one()
        }
    });
    build(
        "burgers-square-sonic",
        "Laney (1998)",
        Domain::new_1d(-T::one(), T::one()),
        [41, 1],
        ic,
        BoundarySet::new_1d(Boundary::Outflow, Boundary::Outflow).unwrap(),
        FluxModel::burgers_1d(),
        None,
        StopRule::Transient(T::real(0.3)),
        Some(ExactSolution::BurgersSquareSonic),
    )
}

/// Steady 2D linear discontinuity at angle `theta` (degrees).
fn spekreijse_angle<T: Scalar>(id: &'static str, theta_deg: f64) -> Problem<T> {
    let theta = theta_deg.to_radians();
    let a = T::real(theta.cos());
    let b = T::real(theta.sin());
    let bcs = BoundarySet::new_2d(
        [Boundary::dirichlet(T::one()), Boundary::Outflow],
        [Boundary::dirichlet(T::zero()), Boundary::Outflow],
    )
    .unwrap();
    build(
        id,
        "Spekreijse (1987)",
        Domain::new_2d([T::zero(), T::zero()], [T::one(), T::one()]),
        [65, 65],
        Arc::new(|_| T::zero()),
        bcs,
        FluxModel::linear_2d(a, b),
        None,
        StopRule::Steady,
        Some(ExactSolution::AngledLine { a, b }),
    )
}

/// Steady semicircular discontinuities in a rotating linear field
/// `(a, b) = (x2, -x1)`.
fn spekreijse_semicircle<T: Scalar>() -> Problem<T> {
    let flux = FluxModel::new(vec![
        ComponentFlux::LinearField(Arc::new(|_, x: [T; 2]| x[1])),
        ComponentFlux::LinearField(Arc::new(|_, x: [T; 2]| -x[0])),
    ])
    .unwrap();
    // data is prescribed on the inflow part of the bottom (x1 <= 0,
    // where the rotating field points into the domain); the rest of
    // that side is an outflow where the annulus leaves
    let bottom = Boundary::mixed(|x: [T; 2]| {
        let x1 = x[0];
        if x1 > T::zero() {
            None
        } else if x1 >= T::real(-0.65) && x1 <= T::real(-0.35) {
            Some(T::one())
        } else {
            Some(T::zero())
        }
    });
    let bcs = BoundarySet::new_2d(
        [
            Boundary::dirichlet(T::zero()),
            Boundary::dirichlet(T::zero()),
        ],
        [bottom, Boundary::dirichlet(T::zero())],
    )
    .unwrap();
    build(
        "spekreijse-semicircle",
        "Spekreijse (1987)",
        Domain::new_2d([-T::one(), T::zero()], [T::one(), T::one()]),
        [65, 33],
        Arc::new(|_| T::zero()),
        bcs,
        flux,
        None,
        StopRule::Steady,
        Some(ExactSolution::SemicircleAnnulus),
    )
}

/// Solid-body rotation of a cosine pulse.
fn solid_rotation<T: Scalar>() -> Problem<T> {
    let flux = FluxModel::new(vec![
        ComponentFlux::LinearField(Arc::new(|_, x: [T; 2]| -(x[1] - T::real(0.5)))),
        ComponentFlux::LinearField(Arc::new(|_, x: [T; 2]| x[0] - T::real(0.5))),
    ])
    .unwrap();
    let ic: SpaceFn<T> = Arc::new(|x: [T; 2]| {
        let (x0, y0, r0) = (T::real(0.5), T::real(1.25), T::real(0.2));
        let dx = x[0] - x0;
        let dy = x[1] - y0;
        let r = ((dx * dx + dy * dy).sqrt() / r0).min(T::one());
        T::real(0.25) * (T::one() + (T::real(std::f64::consts::PI) * r).cos())
    });
    let zero = || Boundary::dirichlet(T::zero());
    let mut p = build(
        "solid-rotation",
        "LeVeque (1996)",
        Domain::new_2d([-T::one(), T::real(-0.5)], [T::one(), T::real(1.5)]),
        [65, 65],
        ic,
        BoundarySet::new_2d([zero(), zero()], [zero(), zero()]).unwrap(),
        flux,
        None,
        StopRule::Transient(T::one()),
        None,
    );
    p.contour_hint = Some((0.1, 0.5, 10));
    p
}

/// Steady 2D normal shock: `g1 = u^2/2`, `g2 = u`.
fn normal_shock<T: Scalar>() -> Problem<T> {
    let flux = FluxModel::new(vec![
        ComponentFlux::Burgers,
        ComponentFlux::Linear(T::one()),
    ])
    .unwrap();
    let profile = |x: [T; 2]| T::one() - T::real(2.0) * x[0];
    let bcs = BoundarySet::new_2d(
        [
            Boundary::dirichlet(T::one()),
            Boundary::dirichlet(-T::one()),
        ],
        [Boundary::dirichlet_fn(profile), Boundary::Outflow],
    )
    .unwrap();
    build(
        "normal-shock",
        "Spekreijse (1987)",
        Domain::new_2d([T::zero(), T::zero()], [T::one(), T::one()]),
        [65, 65],
        Arc::new(profile),
        bcs,
        flux,
        None,
        StopRule::Steady,
        None,
    )
}

/// Steady 2D oblique shock.
fn oblique_shock<T: Scalar>() -> Problem<T> {
    let flux = FluxModel::new(vec![
        ComponentFlux::Burgers,
        ComponentFlux::Linear(T::one()),
    ])
    .unwrap();
    let profile = |x: [T; 2]| T::real(1.5) - T::real(2.0) * x[0];
    let bcs = BoundarySet::new_2d(
        [
            Boundary::dirichlet(T::real(1.5)),
            Boundary::dirichlet(T::real(-0.5)),
        ],
        [Boundary::dirichlet_fn(profile), Boundary::Outflow],
    )
    .unwrap();
    build(
        "oblique-shock",
        "Spekreijse (1987)",
        Domain::new_2d([T::zero(), T::zero()], [T::one(), T::one()]),
        [65, 65],
        Arc::new(profile),
        bcs,
        flux,
        None,
        StopRule::Steady,
        None,
    )
}

/// Linear convection with the stiff bistable source
/// `s(u) = -mu u (u - 1)(u - 1/2)`.
pub fn leveque_yee<T: Scalar>(mu: T) -> Problem<T> {
    let s = move |u: T, _x: [T; 2]| -mu * u * (u - T::one()) * (u - T::real(0.5));
    let ds = move |u: T, _x: [T; 2]| -mu * (T::real(3.0) * u * u - T::real(3.0) * u + T::real(0.5));
    let ic: SpaceFn<T> = Arc::new(|x: [T; 2]| {
        if x[0] <= T::real(0.3) {
            T::one()
        } else {
            T::zero()
        }
    });
    build(
        "leveque-yee",
        "LeVeque & Yee (1990)",
        Domain::new_1d(T::zero(), T::one()),
        [51, 1],
        ic,
        BoundarySet::new_1d(Boundary::dirichlet(T::one()), Boundary::Outflow).unwrap(),
        FluxModel::linear_1d(T::one()),
        Some(SourceModel::new(s, ds)),
        StopRule::Transient(T::real(0.3)),
        None,
    )
}

/// Steady balance of Burgers convection against the source `(6x - 3) u`.
fn embid<T: Scalar>() -> Problem<T> {
    let s = |u: T, x: [T; 2]| (T::real(6.0) * x[0] - T::real(3.0)) * u;
    let ds = |_u: T, x: [T; 2]| T::real(6.0) * x[0] - T::real(3.0);
    let ic: SpaceFn<T> = Arc::new(|x: [T; 2]| {
        if x[0] <= T::real(0.18) {
            T::one()
        } else {
            T::real(-0.1)
        }
    });
    build(
        "embid",
        "Embid, Goodman & Majda (1984)",
        Domain::new_1d(T::zero(), T::one()),
        [41, 1],
        ic,
        BoundarySet::new_1d(
            Boundary::dirichlet(T::one()),
            Boundary::dirichlet(T::real(-0.1)),
        )
        .unwrap(),
        FluxModel::burgers_1d(),
        Some(SourceModel::new(s, ds)),
        StopRule::Steady,
        None,
    )
}

/// All bundled problems with the published default parameters.
pub fn catalog<T: Scalar>() -> Vec<Problem<T>> {
    vec![
        linear_sin4(),
        spekreijse_angle("spekreijse-angle-15", 15.0),
        spekreijse_angle("spekreijse-angle-30", 30.0),
        spekreijse_angle("spekreijse-angle-45", 45.0),
        spekreijse_angle("spekreijse-angle-60", 60.0),
        spekreijse_angle("spekreijse-angle-75", 75.0),
        spekreijse_semicircle(),
        solid_rotation(),
        burgers_sine(),
        burgers_square(),
        burgers_square_sonic(),
        normal_shock(),
        oblique_shock(),
        leveque_yee(T::real(1000.0)),
        embid(),
    ]
}

/// Look a problem up by id.
pub fn by_id<T: Scalar>(id: &str) -> Result<Problem<T>> {
    catalog()
        .into_iter()
        .find(|p| p.id == id)
        .ok_or_else(|| SolverError::UnknownProblem(id.into()))
}
