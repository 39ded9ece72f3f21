//! Sampled phase-space windows and the fields that live on them.
//!
//! Samples sit on grid nodes (not cell centers). Node `(i, j)` is at
//! `(xmin + i·Δx, pmin + j·Δp)` and is stored at `j·nx + i`, so one storage
//! row holds a fixed momentum `p_j` with `x` ascending.

mod auto;
pub mod io;

pub use auto::{
    auto_geometry, auto_geometry_with, GridOptions, DEFAULT_NODE_BUDGET, DEFAULT_SPACING,
};
pub use io::{read_grid, read_psgrid, write_grid, write_psgrid};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::real::{compensated_sum, Real};

/// Smallest admissible sample count per axis.
pub const MIN_SAMPLES: usize = 8;

/// Rectangular node-centered sampling of phase space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridGeometry<T> {
    nx: usize,
    np: usize,
    xmin: T,
    xmax: T,
    pmin: T,
    pmax: T,
}

impl<T: Real> GridGeometry<T> {
    pub fn new(nx: usize, np: usize, xmin: T, xmax: T, pmin: T, pmax: T) -> Result<Self> {
        if nx < MIN_SAMPLES || np < MIN_SAMPLES {
            return Err(Error::GridTooSmall { nx, np });
        }
        if !(xmin.is_finite() && xmax.is_finite() && pmin.is_finite() && pmax.is_finite()) {
            return Err(Error::InvalidGeometry(
                "window bounds must be finite".into(),
            ));
        }
        if xmax <= xmin || pmax <= pmin {
            return Err(Error::InvalidGeometry(format!(
                "empty window x∈[{xmin}, {xmax}], p∈[{pmin}, {pmax}]"
            )));
        }
        let geometry = Self {
            nx,
            np,
            xmin,
            xmax,
            pmin,
            pmax,
        };
        if !(geometry.dx() > T::zero() && geometry.dp() > T::zero()) {
            return Err(Error::InvalidGeometry("spacing underflows".into()));
        }
        Ok(geometry)
    }

    /// Symmetric window `[-half_x, half_x] × [-half_p, half_p]`.
    pub fn symmetric(nx: usize, np: usize, half_x: T, half_p: T) -> Result<Self> {
        Self::new(nx, np, -half_x, half_x, -half_p, half_p)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn np(&self) -> usize {
        self.np
    }

    pub fn xmin(&self) -> T {
        self.xmin
    }

    pub fn xmax(&self) -> T {
        self.xmax
    }

    pub fn pmin(&self) -> T {
        self.pmin
    }

    pub fn pmax(&self) -> T {
        self.pmax
    }

    pub fn len(&self) -> usize {
        self.nx * self.np
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> T {
        (self.xmax - self.xmin) / T::lit((self.nx - 1) as f64)
    }

    pub fn dp(&self) -> T {
        (self.pmax - self.pmin) / T::lit((self.np - 1) as f64)
    }

    /// Area element `Δx·Δp` of one node.
    pub fn cell_area(&self) -> T {
        self.dx() * self.dp()
    }

    #[inline]
    pub fn x(&self, i: usize) -> T {
        self.xmin + T::lit(i as f64) * self.dx()
    }

    #[inline]
    pub fn p(&self, j: usize) -> T {
        self.pmin + T::lit(j as f64) * self.dp()
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Inverse of [`Self::index`].
    #[inline]
    pub fn node(&self, index: usize) -> (usize, usize) {
        (index % self.nx, index / self.nx)
    }

    /// Node nearest to `(x, p)`, or `None` outside the window.
    pub fn locate(&self, x: T, p: T) -> Option<(usize, usize)> {
        let fi = ((x - self.xmin) / self.dx()).round();
        let fj = ((p - self.pmin) / self.dp()).round();
        if fi < T::zero() || fj < T::zero() {
            return None;
        }
        let (i, j) = (fi.to_usize()?, fj.to_usize()?);
        (i < self.nx && j < self.np).then_some((i, j))
    }

    pub fn xs(&self) -> Vec<T> {
        (0..self.nx).map(|i| self.x(i)).collect()
    }

    pub fn ps(&self) -> Vec<T> {
        (0..self.np).map(|j| self.p(j)).collect()
    }

    /// Same sampling, window shifted by `(a, b)`.
    pub fn translated(&self, a: T, b: T) -> Self {
        Self {
            xmin: self.xmin + a,
            xmax: self.xmax + a,
            pmin: self.pmin + b,
            pmax: self.pmax + b,
            ..*self
        }
    }

    /// Window scaled about its center by `extent_scale`, spacing divided by
    /// `refinement` (rounded so that the spacing never exceeds the target).
    pub fn refined(&self, refinement: f64, extent_scale: f64) -> Result<Self> {
        let half = T::lit(0.5);
        let (cx, cp) = (
            (self.xmin + self.xmax) * half,
            (self.pmin + self.pmax) * half,
        );
        let scale = T::lit(extent_scale);
        let hx = (self.xmax - self.xmin) * half * scale;
        let hp = (self.pmax - self.pmin) * half * scale;
        let target_dx = self.dx() / T::lit(refinement);
        let target_dp = self.dp() / T::lit(refinement);
        let nx = 2 * (hx / target_dx).ceil().to_usize().unwrap_or(0) + 1;
        let np = 2 * (hp / target_dp).ceil().to_usize().unwrap_or(0) + 1;
        Self::new(nx, np, cx - hx, cx + hx, cp - hp, cp + hp)
    }

    pub(crate) fn cast<U: Real>(&self) -> GridGeometry<U> {
        GridGeometry {
            nx: self.nx,
            np: self.np,
            xmin: U::lit(self.xmin.as_f64()),
            xmax: U::lit(self.xmax.as_f64()),
            pmin: U::lit(self.pmin.as_f64()),
            pmax: U::lit(self.pmax.as_f64()),
        }
    }
}

/// Which quasi-distribution a field samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order<T> {
    /// `P_S` with the given `S ≤ 0` (`0` is Wigner, `-1` is Husimi).
    Distribution(T),
    /// Anything else: criterion fields, Laplacians, test fields.
    Derived,
}

impl<T: Real> Order<T> {
    pub fn wigner() -> Self {
        Order::Distribution(T::zero())
    }

    pub fn husimi() -> Self {
        Order::Distribution(-T::one())
    }

    pub fn value(&self) -> Option<T> {
        match *self {
            Order::Distribution(s) => Some(s),
            Order::Derived => None,
        }
    }

    pub fn is_wigner(&self) -> bool {
        matches!(self, Order::Distribution(s) if s.is_zero())
    }
}

/// Real samples over a [`GridGeometry`], tagged with their [`Order`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField2D<T> {
    geometry: GridGeometry<T>,
    order: Order<T>,
    values: Vec<T>,
}

impl<T: Real> ScalarField2D<T> {
    pub fn new(geometry: GridGeometry<T>, order: Order<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != geometry.len() {
            return Err(Error::InvalidGeometry(format!(
                "{} values for a {}×{} grid",
                values.len(),
                geometry.nx(),
                geometry.np()
            )));
        }
        if let Order::Distribution(s) = order {
            if s.is_nan() || s > T::zero() {
                return Err(Error::InvalidParameter(format!(
                    "distribution order {s} must be ≤ 0"
                )));
            }
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            geometry,
            order,
            values,
        })
    }

    /// Samples `f(x, p)` at every node, rows in parallel.
    pub fn from_fn<F>(geometry: GridGeometry<T>, order: Order<T>, f: F) -> Result<Self>
    where
        F: Fn(T, T) -> T + Sync,
    {
        let xs = geometry.xs();
        let mut values = vec![T::zero(); geometry.len()];
        values
            .par_chunks_mut(geometry.nx())
            .enumerate()
            .for_each(|(j, row)| {
                let p = geometry.p(j);
                for (v, &x) in row.iter_mut().zip(&xs) {
                    *v = f(x, p);
                }
            });
        Self::new(geometry, order, values)
    }

    pub fn zeros(geometry: GridGeometry<T>, order: Order<T>) -> Self {
        Self {
            values: vec![T::zero(); geometry.len()],
            geometry,
            order,
        }
    }

    pub fn geometry(&self) -> &GridGeometry<T> {
        &self.geometry
    }

    pub fn order(&self) -> Order<T> {
        self.order
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[self.geometry.index(i, j)]
    }

    pub fn row(&self, j: usize) -> &[T] {
        let nx = self.geometry.nx();
        &self.values[j * nx..(j + 1) * nx]
    }

    pub fn with_order(mut self, order: Order<T>) -> Self {
        self.order = order;
        self
    }

    /// Pointwise map producing a derived field on the same geometry.
    pub fn map(&self, f: impl Fn(T) -> T + Sync) -> Self {
        let values = self.values.par_iter().map(|&v| f(v)).collect();
        Self {
            geometry: self.geometry,
            order: Order::Derived,
            values,
        }
    }

    pub fn max_abs(&self) -> T {
        self.values.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    pub fn min_value(&self) -> T {
        self.values.iter().fold(T::infinity(), |m, &v| m.min(v))
    }

    /// Largest magnitude on the outermost ring of nodes.
    pub fn edge_max_abs(&self) -> T {
        let (nx, np) = (self.geometry.nx(), self.geometry.np());
        let mut m = T::zero();
        for i in 0..nx {
            m = m.max(self.get(i, 0).abs()).max(self.get(i, np - 1).abs());
        }
        for j in 0..np {
            m = m.max(self.get(0, j).abs()).max(self.get(nx - 1, j).abs());
        }
        m
    }

    /// L∞ distance to a field on the same geometry.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(
            self.geometry.len(),
            other.geometry.len(),
            "fields on different grids"
        );
        self.values
            .iter()
            .zip(&other.values)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }

    /// Converts the samples to another precision.
    pub fn cast<U: Real>(&self) -> ScalarField2D<U> {
        ScalarField2D {
            geometry: self.geometry.cast(),
            order: match self.order {
                Order::Distribution(s) => Order::Distribution(U::lit(s.as_f64())),
                Order::Derived => Order::Derived,
            },
            values: self.values.iter().map(|v| U::lit(v.as_f64())).collect(),
        }
    }

    pub(crate) fn from_parts_unchecked(
        geometry: GridGeometry<T>,
        order: Order<T>,
        values: Vec<T>,
    ) -> Self {
        debug_assert_eq!(values.len(), geometry.len());
        Self {
            geometry,
            order,
            values,
        }
    }
}

/// Rectangle-rule quadrature `Σ values · Δx · Δp`.
///
/// Rows are summed independently (in parallel) and the row totals are then
/// combined in a fixed order with compensation, so the result does not
/// depend on the number of worker threads.
pub fn integrate<T: Real>(field: &ScalarField2D<T>) -> T {
    integrate_values(field.geometry(), field.values())
}

pub(crate) fn integrate_values<T: Real>(geometry: &GridGeometry<T>, values: &[T]) -> T {
    let rows: Vec<T> = values
        .par_chunks(geometry.nx())
        .map(|row| compensated_sum(row.iter().copied()))
        .collect();
    compensated_sum(rows) * geometry.cell_area()
}
