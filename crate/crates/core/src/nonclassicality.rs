//! The criterion family `ξ^[S,k]`, its global minimum, and the
//! curvature-based quantumness measure `Ξ^[S,k]`.
//!
//! `ξ^[S,k] = P_S - π(1-S)/(k(1-k)) · P_{S_k} · P_{S_{1-k}}` with
//! `S_k = 1 - (1-S)/k`; negativity anywhere certifies nonclassicality.
//! `Ξ^[S,k]` sums the five-point Laplacian of `ξ^[S,k]` over the nodes where
//! `ξ^[S,k] < 0`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{integrate_values, Order, ScalarField2D};
use crate::real::Real;
use crate::transforms::smooth;

/// Relative size of the band around zero that counts as exactly zero.
pub const ZERO_SNAP: f64 = 1e-12;

/// Member `(S, k)` of the criterion family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionParams<T> {
    s: T,
    k: T,
}

impl<T: Real> Default for CriterionParams<T> {
    /// `(S, k) = (0, ½)`, i.e. `ξ = W - 4πQ²`.
    fn default() -> Self {
        Self {
            s: T::zero(),
            k: T::lit(0.5),
        }
    }
}

impl<T: Real> CriterionParams<T> {
    pub fn new(s: T, k: T) -> Result<Self> {
        if !(s.is_finite() && s <= T::zero()) {
            return Err(Error::InvalidParameter(format!(
                "reference order S={s} must be ≤ 0"
            )));
        }
        if !(k > T::zero() && k < T::one()) {
            return Err(Error::InvalidParameter(format!(
                "k={k} must lie strictly inside (0, 1)"
            )));
        }
        Ok(Self { s, k })
    }

    pub fn s(&self) -> T {
        self.s
    }

    pub fn k(&self) -> T {
        self.k
    }

    /// `S_k = 1 - (1-S)/k`.
    pub fn s_k(&self) -> T {
        T::one() - (T::one() - self.s) / self.k
    }

    /// `S_{1-k}`.
    pub fn s_one_minus_k(&self) -> T {
        T::one() - (T::one() - self.s) / (T::one() - self.k)
    }

    /// `π(1-S)/(k(1-k))`; equals `4π` at `(0, ½)`.
    pub fn prefactor(&self) -> T {
        T::PI() * (T::one() - self.s) / (self.k * (T::one() - self.k))
    }

    fn is_balanced(&self) -> bool {
        self.k == T::lit(0.5)
    }
}

fn require_wigner<T: Real>(w: &ScalarField2D<T>) -> Result<()> {
    if !w.order().is_wigner() {
        return Err(Error::WrongOrder(
            "expected a Wigner-order (S = 0) grid".into(),
        ));
    }
    Ok(())
}

/// `ξ = W - 4πQ²`, with `Q` obtained by smoothing `W` to order -1.
pub fn xi_field<T: Real>(w: &ScalarField2D<T>) -> Result<ScalarField2D<T>> {
    xi_sk_field(w, &CriterionParams::default())
}

/// `ξ^[S,k]` from a Wigner field; every `P` is smoothed directly from `W`.
pub fn xi_sk_field<T: Real>(
    w: &ScalarField2D<T>,
    params: &CriterionParams<T>,
) -> Result<ScalarField2D<T>> {
    require_wigner(w)?;
    let reference = smooth(w, params.s())?;
    let first = smooth(w, params.s_k())?;
    let second = if params.is_balanced() {
        None
    } else {
        Some(smooth(w, params.s_one_minus_k())?)
    };
    let second = second.as_ref().unwrap_or(&first);
    let c = params.prefactor();
    let values: Vec<T> = reference
        .values()
        .par_iter()
        .zip(first.values().par_iter().zip(second.values()))
        .map(|(&ps, (&a, &b))| ps - c * (a * b))
        .collect();
    ScalarField2D::new(*w.geometry(), Order::Derived, values)
}

/// Global grid minimum and where it sits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiMinimum<T> {
    pub value: T,
    pub x: T,
    pub p: T,
    /// Row-major node index of the minimum.
    pub index: usize,
}

/// Smallest node value; ties go to the smallest row-major index.
pub fn xi_min<T: Real>(xi: &ScalarField2D<T>) -> XiMinimum<T> {
    let (index, value) =
        xi.values()
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, T::infinity()),
                |(bi, bv), (i, v)| if v < bv { (i, v) } else { (bi, bv) },
            );
    let g = xi.geometry();
    let (i, j) = g.node(index);
    XiMinimum {
        value,
        x: g.x(i),
        p: g.p(j),
        index,
    }
}

/// [`xi_min`] improved by a separable parabola through the minimum node and
/// its neighbours. Falls back to the grid value on the window edge.
pub fn xi_min_refined<T: Real>(xi: &ScalarField2D<T>) -> XiMinimum<T> {
    let coarse = xi_min(xi);
    let g = xi.geometry();
    let (i, j) = g.node(coarse.index);
    if i == 0 || j == 0 || i + 1 == g.nx() || j + 1 == g.np() {
        return coarse;
    }
    let half = T::lit(0.5);
    // Vertex offset and depth of the parabola through (-1, a), (0, b), (1, c).
    let vertex = |a: T, b: T, c: T| {
        let curvature = a - b - b + c;
        if curvature <= T::zero() {
            return (T::zero(), T::zero());
        }
        let t = half * (a - c) / curvature;
        (t, -curvature * t * t * half)
    };
    let (tx, drop_x) = vertex(xi.get(i - 1, j), coarse.value, xi.get(i + 1, j));
    let (tp, drop_p) = vertex(xi.get(i, j - 1), coarse.value, xi.get(i, j + 1));
    XiMinimum {
        value: coarse.value + drop_x + drop_p,
        x: coarse.x + tx * g.dx(),
        p: coarse.p + tp * g.dp(),
        index: coarse.index,
    }
}

/// Five-point Laplacian. The outermost ring uses the one-sided second
/// difference of the nearest interior triple, so quadratics are exact
/// everywhere. Requires at least three nodes per axis.
pub fn laplacian<T: Real>(field: &ScalarField2D<T>) -> ScalarField2D<T> {
    let g = field.geometry();
    let (nx, np) = (g.nx(), g.np());
    let (inv_dx2, inv_dp2) = ((g.dx() * g.dx()).recip(), (g.dp() * g.dp()).recip());
    let f = field.values();
    let two = T::lit(2.0);
    let mut out = vec![T::zero(); f.len()];
    out.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
        let jc = j.clamp(1, np - 2);
        for (i, d) in row.iter_mut().enumerate() {
            let ic = i.clamp(1, nx - 2);
            let xx = f[j * nx + ic - 1] - two * f[j * nx + ic] + f[j * nx + ic + 1];
            let pp = f[(jc - 1) * nx + i] - two * f[jc * nx + i] + f[(jc + 1) * nx + i];
            *d = xx * inv_dx2 + pp * inv_dp2;
        }
    });
    ScalarField2D::from_parts_unchecked(*g, Order::Derived, out)
}

/// Fourth-order accurate Laplacian (nine-point cross), five-point near the
/// edges.
fn laplacian_fourth_order<T: Real>(field: &ScalarField2D<T>) -> Vec<T> {
    let g = field.geometry();
    let (nx, np) = (g.nx(), g.np());
    let (inv_dx2, inv_dp2) = ((g.dx() * g.dx()).recip(), (g.dp() * g.dp()).recip());
    let f = field.values();
    let (c0, c1, c2) = (
        T::lit(-30.0 / 12.0),
        T::lit(16.0 / 12.0),
        T::lit(-1.0 / 12.0),
    );
    let two = T::lit(2.0);
    let second = |at: &dyn Fn(isize) -> T, i: usize, n: usize| {
        if i >= 2 && i + 2 < n {
            c0 * at(0) + c1 * (at(-1) + at(1)) + c2 * (at(-2) + at(2))
        } else {
            let shift = if i == 0 {
                1
            } else if i + 1 == n {
                -1
            } else {
                0
            };
            at(shift - 1) - two * at(shift) + at(shift + 1)
        }
    };
    let mut out = vec![T::zero(); f.len()];
    out.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
        for (i, d) in row.iter_mut().enumerate() {
            let ax = |o: isize| f[j * nx + (i as isize + o) as usize];
            let ap = |o: isize| f[(j as isize + o) as usize * nx + i];
            *d = second(&ax, i, nx) * inv_dx2 + second(&ap, j, np) * inv_dp2;
        }
    });
    out
}

/// Threshold below which `|ξ|` is treated as zero: `1e-12` of the field's
/// magnitude, floored at the Wigner amplitude bound `1/π` so that roundoff
/// on an identically vanishing criterion (Glauber states) is not mistaken
/// for negativity.
pub fn zero_snap_threshold<T: Real>(xi: &ScalarField2D<T>) -> T {
    T::lit(ZERO_SNAP) * xi.max_abs().max(T::FRAC_1_PI())
}

/// Nodes that count as `ξ < 0`.
pub fn negative_mask<T: Real>(xi: &ScalarField2D<T>) -> Vec<bool> {
    let tau = zero_snap_threshold(xi);
    xi.values().par_iter().map(|&v| v < -tau).collect()
}

/// `Ξ = Σ_{ξ<0} Δξ · Δx·Δp`. The stencil reads neighbours regardless of
/// their sign; only the contributing nodes are masked.
pub fn big_xi<T: Real>(xi: &ScalarField2D<T>) -> T {
    masked_curvature(xi).0
}

fn masked_curvature<T: Real>(xi: &ScalarField2D<T>) -> (T, usize) {
    let mask = negative_mask(xi);
    let count = mask.iter().filter(|&&m| m).count();
    if count == 0 {
        return (T::zero(), 0);
    }
    let lap = laplacian(xi);
    let masked: Vec<T> = lap
        .values()
        .par_iter()
        .zip(&mask)
        .map(|(&v, &m)| if m { v } else { T::zero() })
        .collect();
    (integrate_values(xi.geometry(), &masked), count)
}

/// `Ξ^[S,k]` of a Wigner field.
pub fn big_xi_sk<T: Real>(w: &ScalarField2D<T>, params: &CriterionParams<T>) -> Result<T> {
    Ok(big_xi(&xi_sk_field(w, params)?))
}

/// Curvature measure of Lee and Jeong, calibrated to vanish on coherent
/// states: `I = -(π/2) ∬ W (ΔW/2 - W) dx dp - ½`. For a pure squeezed state
/// this evaluates to `(σ - 1/σ)²/8`.
///
/// `ΔW` uses a fourth-order stencil; the five-point rule's `O(Δ²)` error is
/// about `Δ²/16` here, far above the accuracy the measure is compared at.
pub fn lee_jeong<T: Real>(w: &ScalarField2D<T>) -> Result<T> {
    require_wigner(w)?;
    let lap = laplacian_fourth_order(w);
    let half = T::lit(0.5);
    let integrand: Vec<T> = w
        .values()
        .par_iter()
        .zip(&lap)
        .map(|(&v, &d)| v * (d * half - v))
        .collect();
    let raw = integrate_values(w.geometry(), &integrand);
    Ok(-T::FRAC_PI_2() * raw - half)
}

/// Gradient of `ξ` along the `ξ = 0` level set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryDiagnostic<T> {
    /// Largest `|∇ξ|` over nodes adjacent to a sign change.
    pub max_gradient: T,
    pub boundary_nodes: usize,
    /// A negative region exists but no boundary gradient is visible to
    /// the measure.
    pub degenerate: bool,
}

/// Reports `max |∇ξ|` over nodes that have a 4-neighbour on the other side
/// of the snapped sign boundary (central differences, one-sided at edges).
pub fn boundary_gradient_diagnostic<T: Real>(xi: &ScalarField2D<T>) -> BoundaryDiagnostic<T> {
    let g = xi.geometry();
    let (nx, np) = (g.nx(), g.np());
    let mask = negative_mask(xi);
    let any_negative = mask.iter().any(|&m| m);
    let f = xi.values();
    let grad = |i: usize, j: usize| {
        let (il, ir) = (i.saturating_sub(1), (i + 1).min(nx - 1));
        let (jl, jr) = (j.saturating_sub(1), (j + 1).min(np - 1));
        let gx = (f[j * nx + ir] - f[j * nx + il]) / (T::lit((ir - il) as f64) * g.dx());
        let gp = (f[jr * nx + i] - f[jl * nx + i]) / (T::lit((jr - jl) as f64) * g.dp());
        (gx * gx + gp * gp).sqrt()
    };
    let per_row: Vec<(T, usize)> = (0..np)
        .into_par_iter()
        .map(|j| {
            let mut best = T::zero();
            let mut count = 0;
            for i in 0..nx {
                let m = mask[j * nx + i];
                let flips = (i > 0 && mask[j * nx + i - 1] != m)
                    || (i + 1 < nx && mask[j * nx + i + 1] != m)
                    || (j > 0 && mask[(j - 1) * nx + i] != m)
                    || (j + 1 < np && mask[(j + 1) * nx + i] != m);
                if flips {
                    count += 1;
                    best = best.max(grad(i, j));
                }
            }
            (best, count)
        })
        .collect();
    let max_gradient = per_row.iter().fold(T::zero(), |m, r| m.max(r.0));
    let boundary_nodes = per_row.iter().map(|r| r.1).sum();
    BoundaryDiagnostic {
        max_gradient,
        boundary_nodes,
        degenerate: any_negative && max_gradient.is_zero(),
    }
}

/// Everything the measure pipeline reports for one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureReport {
    pub xi_min: f64,
    pub xi_min_x: f64,
    pub xi_min_p: f64,
    pub big_xi: f64,
    pub lee_jeong: f64,
    pub negative_node_count: usize,
    pub boundary_gradient: f64,
    #[serde(rename = "S")]
    pub s: f64,
    pub k: f64,
    pub nx: usize,
    pub np: usize,
    pub xmin: f64,
    pub xmax: f64,
    pub pmin: f64,
    pub pmax: f64,
}

/// Runs the full pipeline; `refine_min` enables the sub-grid parabola for
/// `ξ₋` (off by default so reports are pure node values).
pub fn measure<T: Real>(
    w: &ScalarField2D<T>,
    params: &CriterionParams<T>,
    refine_min: bool,
) -> Result<MeasureReport> {
    let xi = xi_sk_field(w, params)?;
    let min = if refine_min {
        xi_min_refined(&xi)
    } else {
        xi_min(&xi)
    };
    let (big, count) = masked_curvature(&xi);
    let diag = boundary_gradient_diagnostic(&xi);
    let g = w.geometry();
    Ok(MeasureReport {
        xi_min: min.value.as_f64(),
        xi_min_x: min.x.as_f64(),
        xi_min_p: min.p.as_f64(),
        big_xi: big.as_f64(),
        lee_jeong: lee_jeong(w)?.as_f64(),
        negative_node_count: count,
        boundary_gradient: diag.max_gradient.as_f64(),
        s: params.s().as_f64(),
        k: params.k().as_f64(),
        nx: g.nx(),
        np: g.np(),
        xmin: g.xmin().as_f64(),
        xmax: g.xmax().as_f64(),
        pmin: g.pmin().as_f64(),
        pmax: g.pmax().as_f64(),
    })
}
