//! Boundary conditions.

use std::fmt;
use std::sync::Arc;

use crate::error::{Result, SolverError};
use crate::grid::{Point, SpaceFn};
use crate::scalar::Scalar;

/// A side condition that prescribes values only where it returns `Some`.
pub type PartialSpaceFn<T> = Arc<dyn Fn(Point<T>) -> Option<T> + Send + Sync>;

/// Condition on one side of the domain.
#[derive(Clone)]
pub enum Boundary<T: Scalar> {
    /// Wraparound; must be declared on both opposing sides.
    Periodic,
    /// Prescribed value along the side, evaluated at boundary-cell positions.
    Dirichlet(SpaceFn<T>),
    /// Zero-gradient: entering populations copy the nearest interior cell.
    Outflow,
    /// Per-node mix: nodes with `Some(value)` are Dirichlet, the rest
    /// outflow. For sides that are inflow only along part of their
    /// length (data given there, characteristics exiting elsewhere).
    Mixed(PartialSpaceFn<T>),
}

impl<T: Scalar> Boundary<T> {
    /// Dirichlet with a constant value.
    pub fn dirichlet(value: T) -> Self {
        Boundary::Dirichlet(Arc::new(move |_| value))
    }

    /// Dirichlet with a value varying along the side.
    pub fn dirichlet_fn(f: impl Fn(Point<T>) -> T + Send + Sync + 'static) -> Self {
        Boundary::Dirichlet(Arc::new(f))
    }

    /// Dirichlet where `f` returns `Some`, outflow elsewhere.
    pub fn mixed(f: impl Fn(Point<T>) -> Option<T> + Send + Sync + 'static) -> Self {
        Boundary::Mixed(Arc::new(f))
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, Boundary::Periodic)
    }
}

impl<T: Scalar> fmt::Debug for Boundary<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Boundary::Periodic => write!(f, "Periodic"),
            Boundary::Dirichlet(_) => write!(f, "Dirichlet(..)"),
            Boundary::Outflow => write!(f, "Outflow"),
            Boundary::Mixed(_) => write!(f, "Mixed(..)"),
        }
    }
}

/// The full set of side conditions, indexed `[direction][0 = low, 1 = high]`.
#[derive(Debug, Clone)]
pub struct BoundarySet<T: Scalar> {
    dim: usize,
    sides: [[Boundary<T>; 2]; 2],
}

impl<T: Scalar> BoundarySet<T> {
    pub fn new_1d(lo: Boundary<T>, hi: Boundary<T>) -> Result<Self> {
        let set = BoundarySet {
            dim: 1,
            sides: [[lo, hi], [Boundary::Outflow, Boundary::Outflow]],
        };
        set.validate()?;
        Ok(set)
    }

    pub fn new_2d(x: [Boundary<T>; 2], y: [Boundary<T>; 2]) -> Result<Self> {
        let set = BoundarySet {
            dim: 2,
            sides: [x, y],
        };
        set.validate()?;
        Ok(set)
    }

    pub fn periodic_1d() -> Self {
        BoundarySet::new_1d(Boundary::Periodic, Boundary::Periodic).unwrap()
    }

    fn validate(&self) -> Result<()> {
        for d in 0..self.dim {
            let lo = self.sides[d][0].is_periodic();
            let hi = self.sides[d][1].is_periodic();
            if lo != hi {
                return Err(SolverError::InvalidConfig(format!(
                    "periodic boundary must be declared on both sides of direction {d}"
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn side(&self, d: usize, hi: bool) -> &Boundary<T> {
        &self.sides[d][usize::from(hi)]
    }

    /// Which directions wrap around.
    pub fn periodic_dirs(&self) -> [bool; 2] {
        [
            self.sides[0][0].is_periodic(),
            self.dim == 2 && self.sides[1][0].is_periodic(),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_half_periodic() {
        assert!(BoundarySet::new_1d(Boundary::Periodic, Boundary::<f64>::Outflow).is_err());
        assert!(BoundarySet::new_2d(
            [Boundary::<f64>::Periodic, Boundary::Periodic],
            [Boundary::Periodic, Boundary::Outflow],
        )
        .is_err());
    }

    #[test]
    fn mixed_boundary_prescribes_only_where_some() {
        let b = Boundary::<f64>::mixed(|x| if x[0] <= 0.0 { Some(1.0) } else { None });
        match &b {
            Boundary::Mixed(f) => {
                assert_eq!(f([-0.2, 0.0]), Some(1.0));
                assert_eq!(f([0.4, 0.0]), None);
            }
            _ => panic!("expected a mixed boundary"),
        }
        assert!(!b.is_periodic());
    }

    #[test]
    fn periodic_dirs_reported() {
        let set = BoundarySet::<f64>::periodic_1d();
        assert_eq!(set.periodic_dirs(), [true, false]);
        let set = BoundarySet::new_2d(
            [Boundary::dirichlet(1.0), Boundary::Outflow],
            [Boundary::Periodic, Boundary::Periodic],
        )
        .unwrap();
        assert_eq!(set.periodic_dirs(), [false, true]);
    }
}
