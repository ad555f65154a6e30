//! Lattice geometry and the fields living on it.
//!
//! Grids are uniform with the same spacing in every direction. Periodic
//! directions hold `n` points with `dx = L/n` (the right endpoint is the
//! left one shifted by a period); non-periodic directions hold `n`
//! vertex-centered points with `dx = L/(n-1)`, so the first and last
//! points sit exactly on the boundary.

use std::sync::Arc;

use crate::error::{Result, SolverError};
use crate::scalar::Scalar;

/// Spatial point. The second coordinate is unused (zero) in 1D.
pub type Point<T> = [T; 2];

/// A scalar function of position, used for initial data and Dirichlet values.
pub type SpaceFn<T> = Arc<dyn Fn(Point<T>) -> T + Send + Sync>;

/// A scalar function of state and position, used for fluxes and sources.
pub type StateFn<T> = Arc<dyn Fn(T, Point<T>) -> T + Send + Sync>;

/// Axis-aligned domain bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain<T: Scalar> {
    pub dim: usize,
    pub lo: Point<T>,
    pub hi: Point<T>,
}

impl<T: Scalar> Domain<T> {
    pub fn new_1d(lo: T, hi: T) -> Self {
        Domain {
            dim: 1,
            lo: [lo, T::zero()],
            hi: [hi, T::zero()],
        }
    }

    pub fn new_2d(lo: Point<T>, hi: Point<T>) -> Self {
        Domain { dim: 2, lo, hi }
    }

    pub fn extent(&self, d: usize) -> T {
        self.hi[d] - self.lo[d]
    }

    /// Evenly spaced sample positions covering the domain, `n` per direction.
    pub fn sample_positions(&self, n: usize) -> Vec<Point<T>> {
        let n = n.max(2);
        let step = |d: usize, i: usize| {
            self.lo[d] + self.extent(d) * T::from_usize(i).unwrap() / T::from_usize(n - 1).unwrap()
        };
        match self.dim {
            1 => (0..n).map(|i| [step(0, i), T::zero()]).collect(),
            _ => {
                let mut out = Vec::with_capacity(n * n);
                for j in 0..n {
                    for i in 0..n {
                        out.push([step(0, i), step(1, j)]);
                    }
                }
                out
            }
        }
    }
}

/// Uniform structured lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T: Scalar> {
    dim: usize,
    shape: [usize; 2],
    dx: T,
    origin: Point<T>,
    periodic: [bool; 2],
}

impl<T: Scalar> Grid<T> {
    /// Build a grid over `domain` with the given point counts.
    ///
    /// Fails if any direction has fewer than 3 points (streaming needs
    /// neighbours) or if the two directions of a 2D grid would not share
    /// the same spacing.
    pub fn new(domain: &Domain<T>, points: [usize; 2], periodic: [bool; 2]) -> Result<Self> {
        let dim = domain.dim;
        for d in 0..dim {
            if points[d] < 3 {
                return Err(SolverError::InvalidConfig(format!(
                    "grid needs at least 3 points per direction, got {}",
                    points[d]
                )));
            }
        }
        let spacing = |d: usize| {
            let n = points[d];
            let div = if periodic[d] { n } else { n - 1 };
            domain.extent(d) / T::from_usize(div).unwrap()
        };
        let dx = spacing(0);
        if dim == 2 {
            let dy = spacing(1);
            let rel = ((dy - dx) / dx).abs();
            if rel > T::real(1e-12) {
                return Err(SolverError::InvalidConfig(format!(
                    "grid spacing must be equal in all directions: dx = {dx}, dy = {dy}"
                )));
            }
        }
        let shape = [points[0], if dim == 2 { points[1] } else { 1 }];
        Ok(Grid {
            dim,
            shape,
            dx,
            origin: domain.lo,
            periodic,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> [usize; 2] {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.shape[0] * self.shape[1]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dx(&self) -> T {
        self.dx
    }

    pub fn periodic(&self) -> [bool; 2] {
        self.periodic
    }

    /// Cell volume `dx^D`.
    pub fn cell_volume(&self) -> T {
        let mut v = self.dx;
        if self.dim == 2 {
            v = v * self.dx;
        }
        v
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.shape[0] + i
    }

    #[inline]
    pub fn coords(&self, cell: usize) -> (usize, usize) {
        (cell % self.shape[0], cell / self.shape[0])
    }

    #[inline]
    pub fn position_ij(&self, i: usize, j: usize) -> Point<T> {
        [
            self.origin[0] + self.dx * T::from_usize(i).unwrap(),
            if self.dim == 2 {
                self.origin[1] + self.dx * T::from_usize(j).unwrap()
            } else {
                T::zero()
            },
        ]
    }

    #[inline]
    pub fn position(&self, cell: usize) -> Point<T> {
        let (i, j) = self.coords(cell);
        self.position_ij(i, j)
    }
}

/// A conserved variable sampled on a lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField<T: Scalar> {
    grid: Grid<T>,
    values: Vec<T>,
}

impl<T: Scalar> ScalarField<T> {
    pub fn constant(grid: Grid<T>, value: T) -> Self {
        let n = grid.len();
        ScalarField {
            grid,
            values: vec![value; n],
        }
    }

    pub fn from_fn(grid: Grid<T>, f: impl Fn(Point<T>) -> T) -> Self {
        let values = (0..grid.len()).map(|c| f(grid.position(c))).collect();
        ScalarField { grid, values }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[self.grid.index(i, j)]
    }

    pub fn min_value(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max_value(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Lattice sum weighted by the cell volume, `sum(u) * dx^D`.
    pub fn mass(&self) -> T {
        self.values.iter().copied().sum::<T>() * self.grid.cell_volume()
    }
}

/// N population planes sharing one grid.
///
/// Plane-major layout: `data[n * cells + cell]`, so each population is a
/// contiguous slice and streaming a plane is a shifted copy.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionField<T: Scalar> {
    grid: Grid<T>,
    n_pop: usize,
    data: Vec<T>,
}

impl<T: Scalar> DistributionField<T> {
    pub fn zeros(grid: Grid<T>, n_pop: usize) -> Self {
        let n = grid.len() * n_pop;
        DistributionField {
            grid,
            n_pop,
            data: vec![T::zero(); n],
        }
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn n_pop(&self) -> usize {
        self.n_pop
    }

    pub fn plane(&self, n: usize) -> &[T] {
        let cells = self.grid.len();
        &self.data[n * cells..(n + 1) * cells]
    }

    pub fn plane_mut(&mut self, n: usize) -> &mut [T] {
        let cells = self.grid.len();
        &mut self.data[n * cells..(n + 1) * cells]
    }

    #[inline]
    pub fn get(&self, n: usize, cell: usize) -> T {
        self.data[n * self.grid.len() + cell]
    }

    #[inline]
    pub fn set(&mut self, n: usize, cell: usize, value: T) {
        self.data[n * self.grid.len() + cell] = value;
    }

    /// Conserved moment at one cell: `sum_n f_n`.
    pub fn moment0_at(&self, cell: usize) -> T {
        let cells = self.grid.len();
        let mut acc = T::zero();
        for n in 0..self.n_pop {
            acc = acc + self.data[n * cells + cell];
        }
        acc
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }
}
