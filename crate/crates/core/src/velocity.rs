//! Discrete velocity sets.
//!
//! With `N = 2D+1` populations on a uniform lattice: populations
//! `0..D` move with `+lambda` along their axis, population `D` rests,
//! and populations `D+1..2D+1` move with `-lambda` along their axis.
//! Choosing `dt = dx/lambda` makes every moving population hop exactly
//! one cell per step, so streaming is exact.

use crate::error::{Result, SolverError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct VelocitySet<T: Scalar> {
    dim: usize,
    lambda: T,
    velocities: Vec<[T; 2]>,
    shifts: Vec<[isize; 2]>,
}

/// Build the `N = 2D+1` velocity set for dimension `dim` and lattice speed
/// `lambda > 0`.
pub fn build_velocity_set<T: Scalar>(dim: usize, lambda: T) -> Result<VelocitySet<T>> {
    if dim != 1 && dim != 2 {
        return Err(SolverError::InvalidInput(format!(
            "unsupported dimension {dim}, expected 1 or 2"
        )));
    }
    if !(lambda > T::zero()) || !lambda.is_finite() {
        return Err(SolverError::InvalidInput(format!(
            "lattice speed must be finite and positive, got {lambda}"
        )));
    }
    let n_pop = 2 * dim + 1;
    let mut velocities = vec![[T::zero(); 2]; n_pop];
    let mut shifts = vec![[0isize; 2]; n_pop];
    for d in 0..dim {
        velocities[d][d] = lambda;
        shifts[d][d] = 1;
        velocities[dim + 1 + d][d] = -lambda;
        shifts[dim + 1 + d][d] = -1;
    }
    Ok(VelocitySet {
        dim,
        lambda,
        velocities,
        shifts,
    })
}

impl<T: Scalar> VelocitySet<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_pop(&self) -> usize {
        2 * self.dim + 1
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    /// Velocity component `v_n^(d)`.
    #[inline]
    pub fn velocity(&self, n: usize, d: usize) -> T {
        self.velocities[n][d]
    }

    /// Lattice shift of population `n` per step (one cell along its axis).
    #[inline]
    pub fn shift(&self, n: usize) -> [isize; 2] {
        self.shifts[n]
    }
}
