//! Flux models and the positive/negative decompositions driving the
//! equilibrium construction.
//!
//! A flux `g(u)` with wave speed `a(u) = dg/du` is split as
//! `g = g+ - g-` with
//!
//! ```text
//! g+(u) = integral from 0 to u of max(a, 0)
//! g-(u) = integral from 0 to u of max(-a, 0)
//! ```
//!
//! Both integrals are oriented, so for `u < 0` they are non-positive;
//! `g+` and `g-` are each non-decreasing in `u` and vanish at `u = 0`.
//! Linear and Burgers fluxes carry closed-form splits; anything else
//! falls back to adaptive quadrature of the wave speed.

use crate::error::{Result, SolverError};
use crate::grid::{Domain, Point, StateFn};
use crate::scalar::Scalar;

/// Absolute tolerance of the split-flux quadrature.
pub const QUAD_ATOL: f64 = 1e-10;
/// Maximum subdivision depth of the split-flux quadrature.
pub const QUAD_MAX_DEPTH: usize = 30;

/// Decompose a wave speed into its non-negative parts, `a = a+ - a-`
/// with `a+ >= 0`, `a- >= 0` and `a+ * a- = 0`.
pub fn wave_speed_split<T: Scalar>(a: T) -> Result<(T, T)> {
    if !a.is_finite() {
        return Err(SolverError::InvalidInput(format!(
            "wave speed must be finite, got {a}"
        )));
    }
    if a >= T::zero() {
        Ok((a, T::zero()))
    } else {
        Ok((T::zero(), -a))
    }
}

/// Split fluxes by adaptive Simpson quadrature of the wave speed from 0
/// to `u`, absolute tolerance [`QUAD_ATOL`].
pub fn quad_split_flux<T: Scalar>(speed: impl Fn(T) -> T, u: T) -> Result<(T, T)> {
    let plus = |v: T| speed(v).max(T::zero());
    let minus = |v: T| (-speed(v)).max(T::zero());
    let g_plus = oriented_integral(&plus, u)?;
    let g_minus = oriented_integral(&minus, u)?;
    Ok((g_plus, g_minus))
}

fn oriented_integral<T: Scalar>(f: &impl Fn(T) -> T, u: T) -> Result<T> {
    if u == T::zero() {
        return Ok(T::zero());
    }
    let tol = T::real(QUAD_ATOL);
    if u > T::zero() {
        adaptive_simpson(f, T::zero(), u, tol)
    } else {
        Ok(-adaptive_simpson(f, u, T::zero(), tol)?)
    }
}

fn simpson<T: Scalar>(f: &impl Fn(T) -> T, a: T, b: T) -> T {
    let m = (a + b) * T::real(0.5);
    (b - a) / T::real(6.0) * (f(a) + T::real(4.0) * f(m) + f(b))
}

fn adaptive_simpson<T: Scalar>(f: &impl Fn(T) -> T, a: T, b: T, tol: T) -> Result<T> {
    fn recurse<T: Scalar>(
        f: &impl Fn(T) -> T,
        a: T,
        b: T,
        whole: T,
        tol: T,
        depth: usize,
    ) -> Result<T> {
        let m = (a + b) * T::real(0.5);
        let left = simpson(f, a, m);
        let right = simpson(f, m, b);
        let err = (left + right - whole).abs();
        if err <= T::real(15.0) * tol {
            return Ok(left + right + (left + right - whole) / T::real(15.0));
        }
        if depth == 0 {
            return Err(SolverError::QuadratureNonConvergence {
                achieved: (err / T::real(15.0)).to_f64_lossy(),
                depth: QUAD_MAX_DEPTH,
            });
        }
        let half_tol = tol * T::real(0.5);
        Ok(recurse(f, a, m, left, half_tol, depth - 1)?
            + recurse(f, m, b, right, half_tol, depth - 1)?)
    }
    recurse(f, a, b, simpson(f, a, b), tol, QUAD_MAX_DEPTH)
}

/// One direction of a flux model.
#[derive(Clone)]
pub enum ComponentFlux<T: Scalar> {
    /// `g(u) = c u` with constant speed `c`.
    Linear(T),
    /// `g(u; x) = c(x) u` with a space-dependent coefficient.
    LinearField(StateFn<T>),
    /// `g(u) = u^2 / 2`.
    Burgers,
    /// Arbitrary flux with its wave speed; split by quadrature.
    Custom { flux: StateFn<T>, speed: StateFn<T> },
}

impl<T: Scalar> std::fmt::Debug for ComponentFlux<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ComponentFlux::Linear(c) => write!(f, "Linear({c})"),
            ComponentFlux::LinearField(_) => write!(f, "LinearField(..)"),
            ComponentFlux::Burgers => write!(f, "Burgers"),
            ComponentFlux::Custom { .. } => write!(f, "Custom(..)"),
        }
    }
}

/// Per-direction flux `g_d(u; x)`, its wave speed, split fluxes and a
/// sampled wave-speed bound.
///
/// Constant-coefficient models ignore the position argument; it exists
/// so the variable-coefficient cases (rotating fields, shear fields)
/// are expressible with the same interface.
#[derive(Debug, Clone)]
pub struct FluxModel<T: Scalar> {
    components: Vec<ComponentFlux<T>>,
}

impl<T: Scalar> FluxModel<T> {
    pub fn new(components: Vec<ComponentFlux<T>>) -> Result<Self> {
        if components.is_empty() || components.len() > 2 {
            return Err(SolverError::InvalidInput(format!(
                "flux model supports 1 or 2 directions, got {}",
                components.len()
            )));
        }
        Ok(FluxModel { components })
    }

    pub fn linear_1d(speed: T) -> Self {
        FluxModel {
            components: vec![ComponentFlux::Linear(speed)],
        }
    }

    pub fn burgers_1d() -> Self {
        FluxModel {
            components: vec![ComponentFlux::Burgers],
        }
    }

    pub fn linear_2d(a: T, b: T) -> Self {
        FluxModel {
            components: vec![ComponentFlux::Linear(a), ComponentFlux::Linear(b)],
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, d: usize) -> &ComponentFlux<T> {
        &self.components[d]
    }

    /// Flux value `g_d(u; x)`.
    pub fn flux(&self, d: usize, u: T, x: Point<T>) -> T {
        match &self.components[d] {
            ComponentFlux::Linear(c) => *c * u,
            ComponentFlux::LinearField(c) => c(u, x) * u,
            ComponentFlux::Burgers => u * u * T::real(0.5),
            ComponentFlux::Custom { flux, .. } => flux(u, x),
        }
    }

    /// Wave speed `a_d(u; x) = d g_d / d u`.
    pub fn wave_speed(&self, d: usize, u: T, x: Point<T>) -> T {
        match &self.components[d] {
            ComponentFlux::Linear(c) => *c,
            ComponentFlux::LinearField(c) => c(u, x),
            ComponentFlux::Burgers => u,
            ComponentFlux::Custom { speed, .. } => speed(u, x),
        }
    }

    /// Split fluxes `(g+, g-)`; analytic where the model declares one,
    /// quadrature otherwise.
    pub fn split_flux(&self, d: usize, u: T, x: Point<T>) -> Result<(T, T)> {
        match &self.components[d] {
            ComponentFlux::Linear(c) => Ok(linear_split(*c, u)),
            ComponentFlux::LinearField(c) => Ok(linear_split(c(u, x), u)),
            ComponentFlux::Burgers => {
                let half = T::real(0.5);
                let up = u.max(T::zero());
                let um = u.min(T::zero());
                // oriented integrals: both parts are non-decreasing in u
                Ok((up * up * half, -(um * um) * half))
            }
            ComponentFlux::Custom { speed, .. } => {
                let s = speed.clone();
                quad_split_flux(move |v| s(v, x), u)
            }
        }
    }

    /// Sampled supremum of `|a_d|` over the admissible range and domain.
    ///
    /// Dense sampling, 1025 points in `u` and (for space-dependent
    /// models) a lattice of positions; no safety factor is applied here.
    pub fn sup_speed(&self, d: usize, u_range: [T; 2], domain: &Domain<T>) -> T {
        let space_dependent = matches!(
            self.components[d],
            ComponentFlux::LinearField(_) | ComponentFlux::Custom { .. }
        );
        let positions = if space_dependent {
            domain.sample_positions(if domain.dim == 2 { 33 } else { 1025 })
        } else {
            vec![[T::zero(); 2]]
        };
        let nu = if space_dependent { 33 } else { 1025 };
        let mut sup = T::zero();
        for i in 0..=nu {
            let frac = T::from_usize(i).unwrap() / T::from_usize(nu).unwrap();
            let u = u_range[0] + (u_range[1] - u_range[0]) * frac;
            for &x in &positions {
                sup = sup.max(self.wave_speed(d, u, x).abs());
            }
        }
        sup
    }

    /// Largest sampled `|a_d|` over all directions.
    pub fn sup_speed_all(&self, u_range: [T; 2], domain: &Domain<T>) -> T {
        (0..self.dim())
            .map(|d| self.sup_speed(d, u_range, domain))
            .fold(T::zero(), T::max)
    }
}

fn linear_split<T: Scalar>(c: T, u: T) -> (T, T) {
    if c >= T::zero() {
        (c * u, T::zero())
    } else {
        (T::zero(), -c * u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn burgers_custom() -> FluxModel<f64> {
        FluxModel::new(vec![ComponentFlux::Custom {
            flux: Arc::new(|u, _| 0.5 * u * u),
            speed: Arc::new(|u, _| u),
        }])
        .unwrap()
    }

    #[test]
    fn wave_speed_split_cases() {
        assert_eq!(wave_speed_split(2.0).unwrap(), (2.0, 0.0));
        assert_eq!(wave_speed_split(-3.0).unwrap(), (0.0, 3.0));
        assert_eq!(wave_speed_split(0.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn wave_speed_split_rejects_non_finite() {
        assert!(wave_speed_split(f64::NAN).is_err());
        assert!(wave_speed_split(f64::INFINITY).is_err());
    }

    #[test]
    fn burgers_analytic_split() {
        let m = FluxModel::burgers_1d();
        let x = [0.0, 0.0];
        assert_eq!(m.split_flux(0, 1.0, x).unwrap(), (0.5, 0.0));
        // oriented integral: g-(-2) = -2, so that g+ - g- = g(-2) = 2
        assert_eq!(m.split_flux(0, -2.0, x).unwrap(), (0.0, -2.0));
        let (gp, gm) = m.split_flux(0, -2.0, x).unwrap();
        assert_eq!(gp - gm, m.flux(0, -2.0, x));
    }

    #[test]
    fn linear_analytic_split() {
        let m = FluxModel::linear_1d(1.0);
        assert_eq!(m.split_flux(0, 0.7, [0.0, 0.0]).unwrap(), (0.7, 0.0));
        let m = FluxModel::linear_1d(-2.0);
        let (gp, gm) = m.split_flux(0, 3.0, [0.0, 0.0]).unwrap();
        assert_eq!((gp, gm), (0.0, 6.0));
    }

    #[test]
    fn quadrature_matches_analytic_burgers() {
        let (gp, gm) = quad_split_flux(|v: f64| v, 1.0).unwrap();
        assert!((gp - 0.5).abs() < 1e-8);
        assert!(gm.abs() < 1e-8);
    }

    #[test]
    fn quadrature_cubic_flux() {
        // a(u) = u^2 >= 0 everywhere, so g- = 0 and g+ = u^3/3
        let (gp, gm) = quad_split_flux(|v: f64| v * v, 2.0).unwrap();
        assert!((gp - 8.0 / 3.0).abs() < 1e-9);
        assert_eq!(gm, 0.0);
    }

    #[test]
    fn quadrature_negative_constant_speed() {
        let (gp, gm) = quad_split_flux(|_: f64| -1.0, 2.0).unwrap();
        assert!(gp.abs() < 1e-12);
        assert!((gm - 2.0).abs() < 1e-9);
    }

    #[test]
    fn quadrature_agrees_with_analytic_over_range() {
        // deterministic sweep, quadrature vs closed forms
        let linear = FluxModel::<f64>::linear_1d(-0.8);
        let linear_custom = FluxModel::new(vec![ComponentFlux::Custom {
            flux: Arc::new(|u, _| -0.8 * u),
            speed: Arc::new(|_, _| -0.8),
        }])
        .unwrap();
        let burgers = FluxModel::<f64>::burgers_1d();
        let burgers_quad = burgers_custom();
        let x = [0.0, 0.0];
        for (analytic, quad) in [(&linear, &linear_custom), (&burgers, &burgers_quad)] {
            for k in 0..=1000 {
                let u = -5.0 + 10.0 * (k as f64) / 1000.0;
                let (ap, am) = analytic.split_flux(0, u, x).unwrap();
                let (qp, qm) = quad.split_flux(0, u, x).unwrap();
                assert!((ap - qp).abs() < 1e-8, "g+ mismatch at u = {u}");
                assert!((am - qm).abs() < 1e-8, "g- mismatch at u = {u}");
            }
        }
    }

    fn bundled_models() -> Vec<FluxModel<f64>> {
        vec![
            FluxModel::linear_1d(1.0),
            FluxModel::linear_1d(-0.7),
            FluxModel::burgers_1d(),
            burgers_custom(),
            FluxModel::linear_2d(0.5, -1.5),
        ]
    }

    // 1e4 deterministic samples per model: split identity, zero at zero,
    // and monotonicity of both parts along sorted samples.
    #[test]
    fn split_invariants_dense_sweep() {
        for m in bundled_models() {
            for d in 0..m.dim() {
                let x = [0.3, -0.2];
                let (gp0, gm0) = m.split_flux(d, 0.0, x).unwrap();
                assert_eq!(gp0, 0.0);
                assert_eq!(gm0, 0.0);
                let mut prev: Option<(f64, f64)> = None;
                let samples = 10_000usize;
                for k in 0..=samples {
                    let u = -5.0 + 10.0 * (k as f64) / (samples as f64);
                    let (gp, gm) = m.split_flux(d, u, x).unwrap();
                    let g = m.flux(d, u, x);
                    assert!(
                        (gp - gm - g).abs() < 1e-10,
                        "g+ - g- != g at u = {u}: {} vs {}",
                        gp - gm,
                        g
                    );
                    if let Some((pp, pm)) = prev {
                        assert!(gp >= pp - 1e-12, "g+ not non-decreasing at u = {u}");
                        assert!(gm >= pm - 1e-12, "g- not non-decreasing at u = {u}");
                    }
                    prev = Some((gp, gm));
                }
            }
        }
    }

    #[test]
    fn sup_speed_samples_space() {
        // rotating field on [-1,1] x [-0.5,1.5]: |a| peaks at the corners
        let m = FluxModel::<f64>::new(vec![
            ComponentFlux::LinearField(Arc::new(|_, x: [f64; 2]| -(x[1] - 0.5))),
            ComponentFlux::LinearField(Arc::new(|_, x: [f64; 2]| x[0] - 0.5)),
        ])
        .unwrap();
        let dom = Domain::new_2d([-1.0, -0.5], [1.0, 1.5]);
        let s0 = m.sup_speed(0, [0.0, 0.5], &dom);
        let s1 = m.sup_speed(1, [0.0, 0.5], &dom);
        assert!((s0 - 1.0).abs() < 1e-12);
        assert!((s1 - 1.5).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn prop_wave_speed_split(a in -1e6f64..1e6) {
            let (ap, am) = wave_speed_split(a).unwrap();
            prop_assert!(ap >= 0.0);
            prop_assert!(am >= 0.0);
            prop_assert_eq!(ap - am, a);
            prop_assert_eq!(ap * am, 0.0);
        }

        #[test]
        fn prop_split_identity(u in -5.0f64..5.0) {
            for m in bundled_models() {
                for d in 0..m.dim() {
                    let x = [0.1, 0.7];
                    let (gp, gm) = m.split_flux(d, u, x).unwrap();
                    let g = m.flux(d, u, x);
                    prop_assert!((gp - gm - g).abs() < 1e-10);
                }
            }
        }
    }
}
