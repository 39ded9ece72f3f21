//! Gaussian smoothing between quasi-distribution orders, and the
//! beam-splitter loss channel.
//!
//! An order-`R` distribution maps to order `S ≤ R` by convolution with
//! `exp(-[(x-x')² + (p-p')²]/(R-S)) / (π(R-S))`, a separable Gaussian of
//! per-axis variance `(R-S)/2`. The sharper direction (`S > R`) would need a
//! deconvolution and is refused.

mod convolve;

pub use convolve::Backend;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{Order, ScalarField2D};
use crate::real::Real;

use convolve::{convolve_lines, gaussian_taps, transpose};

/// Largest edge magnitude for which zero padding is accepted.
pub const SMOOTHING_EDGE_TOLERANCE: f64 = 1e-9;

/// A smoothing step from order `source_order` to `target_order`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingJob<T> {
    source_order: T,
    target_order: T,
}

impl<T: Real> SmoothingJob<T> {
    pub fn new(source_order: T, target_order: T) -> Result<Self> {
        if !(source_order.is_finite() && target_order.is_finite()) {
            return Err(Error::InvalidParameter("orders must be finite".into()));
        }
        if target_order > source_order {
            return Err(Error::DeconvolutionUnsupported {
                from: source_order.as_f64(),
                to: target_order.as_f64(),
            });
        }
        Ok(Self {
            source_order,
            target_order,
        })
    }

    pub fn source_order(&self) -> T {
        self.source_order
    }

    pub fn target_order(&self) -> T {
        self.target_order
    }

    /// `R - S`; the 2D kernel is `exp(-d²/(R-S)) / (π(R-S))`.
    pub fn kernel_width(&self) -> T {
        self.source_order - self.target_order
    }

    pub fn kernel_variance(&self) -> T {
        self.kernel_width() * T::lit(0.5)
    }

    pub fn is_identity(&self) -> bool {
        self.kernel_width().is_zero()
    }

    /// Value of the 2D kernel at separation `(dx, dp)`.
    pub fn kernel(&self, dx: T, dp: T) -> T {
        let w = self.kernel_width();
        (-(dx * dx + dp * dp) / w).exp() / (T::PI() * w)
    }
}

/// Smooths `field` (order `R`) to order `target ≤ R` with the default
/// spectral back-end.
pub fn smooth<T: Real>(field: &ScalarField2D<T>, target: T) -> Result<ScalarField2D<T>> {
    smooth_with(field, target, Backend::Spectral)
}

pub fn smooth_with<T: Real>(
    field: &ScalarField2D<T>,
    target: T,
    backend: Backend,
) -> Result<ScalarField2D<T>> {
    let source = field.order().value().ok_or_else(|| {
        Error::WrongOrder("smoothing requires a quasi-distribution, not a derived field".into())
    })?;
    let job = SmoothingJob::new(source, target)?;
    if job.is_identity() {
        return Ok(field.clone());
    }
    let edge = field.edge_max_abs().as_f64();
    if edge > SMOOTHING_EDGE_TOLERANCE {
        return Err(Error::WindowTooSmallForSmoothing { edge });
    }
    let values = separable_convolution(field, job.kernel_width(), backend);
    Ok(ScalarField2D::from_parts_unchecked(
        *field.geometry(),
        Order::Distribution(target),
        values,
    ))
}

fn separable_convolution<T: Real>(field: &ScalarField2D<T>, width: T, backend: Backend) -> Vec<T> {
    let g = field.geometry();
    let (nx, np) = (g.nx(), g.np());
    let taps_x = gaussian_taps(width, g.dx(), nx - 1);
    let taps_p = gaussian_taps(width, g.dp(), np - 1);
    let along_x = convolve_lines(field.values(), nx, &taps_x, backend);
    let columns = transpose(&along_x, np, nx);
    let along_p = convolve_lines(&columns, np, &taps_p, backend);
    transpose(&along_p, nx, np)
}

/// Mixes the mode with vacuum on a beam splitter of transmissivity `eta`
/// and traces out the second port:
///
/// `W'(x,p) = ∬ W(x',p') exp(-[(x-√η x')² + (p-√η p')²]/(1-η)) / (π(1-η)) dx'dp'`.
///
/// The kernel factorizes, so the map is applied as two banded 1D
/// quadratures (one per axis) on the input grid. `eta = 1` is the identity.
pub fn loss_channel<T: Real>(field: &ScalarField2D<T>, eta: T) -> Result<ScalarField2D<T>> {
    if !field.order().is_wigner() {
        return Err(Error::WrongOrder(
            "the loss channel acts on Wigner-order grids".into(),
        ));
    }
    if !(eta > T::zero() && eta <= T::one()) {
        return Err(Error::InvalidParameter(format!(
            "transmissivity eta={eta} must lie in (0, 1]"
        )));
    }
    if eta == T::one() {
        return Ok(field.clone());
    }
    let g = field.geometry();
    let (nx, np) = (g.nx(), g.np());
    let along_x = loss_lines(field.values(), nx, g.xmin(), g.dx(), eta);
    let columns = transpose(&along_x, np, nx);
    let along_p = loss_lines(&columns, np, g.pmin(), g.dp(), eta);
    ScalarField2D::new(*g, Order::wigner(), transpose(&along_p, nx, np))
}

/// Per-axis loss map `out(u) = Σ_j w(u, x_j) in(x_j)` with
/// `w ∝ exp(-(u - √η x_j)²/(1-η))`. Each output's weights are normalized
/// against the full (unclipped) band so that under-resolved kernels
/// (η → 1) still carry the right mass.
fn loss_lines<T: Real>(data: &[T], n: usize, origin: T, spacing: T, eta: T) -> Vec<T> {
    let root = eta.sqrt();
    let width = T::one() - eta;
    // Band half-width in input nodes around u/√η.
    let reach = (width * T::lit(36.841_361_487_904_734)).sqrt() / root / spacing;
    let reach = reach.ceil().to_isize().unwrap_or(0) + 1;
    // Analytic ∫ w dx' = √(π(1-η))/√η, i.e. sum of node weights × Δ.
    let analytic = (T::PI() * width).sqrt() / root / spacing;

    struct Row<T> {
        first: isize,
        weights: Vec<T>,
    }
    let rows: Vec<Row<T>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let u = origin + T::lit(i as f64) * spacing;
            let center = ((u / root - origin) / spacing)
                .round()
                .to_isize()
                .unwrap_or(0);
            let first = center - reach;
            let raw: Vec<T> = (first..=center + reach)
                .map(|j| {
                    let xj = origin + T::lit(j as f64) * spacing;
                    let d = u - root * xj;
                    (-(d * d) / width).exp()
                })
                .collect();
            let band: T = crate::real::compensated_sum(raw.iter().copied());
            // Resolved kernels: band sum equals the analytic value; otherwise
            // fall back on the discrete sum.
            let norm = if band > T::zero() && ((band - analytic) / analytic).abs() > T::lit(1e-12) {
                band
            } else {
                analytic
            };
            let scale = root.recip() / norm;
            Row {
                first,
                weights: raw.into_iter().map(|w| w * scale).collect(),
            }
        })
        .collect();

    let mut out = vec![T::zero(); data.len()];
    out.par_chunks_mut(n)
        .zip(data.par_chunks(n))
        .for_each(|(dst, src)| {
            for (d, row) in dst.iter_mut().zip(&rows) {
                let mut acc = T::zero();
                for (k, &w) in row.weights.iter().enumerate() {
                    let j = row.first + k as isize;
                    if j >= 0 && (j as usize) < n {
                        acc = acc + w * src[j as usize];
                    }
                }
                *d = acc;
            }
        });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{auto_geometry, integrate, GridGeometry};
    use crate::states::{husimi_analytic, wigner, StateSpec};

    fn field(spec: &StateSpec) -> ScalarField2D<f64> {
        wigner(spec, &auto_geometry(spec, None).unwrap()).unwrap()
    }

    #[test]
    fn job_validation() {
        assert!(matches!(
            SmoothingJob::new(0.0, 0.5),
            Err(Error::DeconvolutionUnsupported { .. })
        ));
        let job = SmoothingJob::new(0.0_f64, -1.0).unwrap();
        assert_eq!(job.kernel_variance(), 0.5);
        assert!((job.kernel(0.0, 0.0) - std::f64::consts::FRAC_1_PI).abs() < 1e-16);
        assert!(SmoothingJob::new(-1.0_f64, -1.0).unwrap().is_identity());
    }

    #[test]
    fn vacuum_smooths_to_husimi() {
        let spec = StateSpec::vacuum();
        let w = field(&spec);
        let q = smooth(&w, -1.0).unwrap();
        let exact = husimi_analytic(&spec, w.geometry()).unwrap();
        assert!(q.max_abs_diff(&exact) < 1e-8, "{}", q.max_abs_diff(&exact));
        assert_eq!(q.order(), Order::Distribution(-1.0));
    }

    #[test]
    fn zero_width_is_identity() {
        let w = field(&StateSpec::squeezed(1.7));
        assert_eq!(smooth(&w, 0.0).unwrap(), w);
    }

    #[test]
    fn sharpening_is_refused() {
        let w = field(&StateSpec::vacuum());
        let q = smooth(&w, -1.0).unwrap();
        assert!(matches!(
            smooth(&q, -0.5),
            Err(Error::DeconvolutionUnsupported { .. })
        ));
        assert!(matches!(
            smooth(&w.map(|v| v), -1.0),
            Err(Error::WrongOrder(_))
        ));
    }

    #[test]
    fn small_window_is_refused() {
        let g = GridGeometry::symmetric(64, 64, 3.0, 3.0).unwrap();
        let w = ScalarField2D::from_fn(g, Order::wigner(), |x, p| {
            StateSpec::vacuum().wigner_at(x, p)
        })
        .unwrap();
        assert!(matches!(
            smooth(&w, -1.0),
            Err(Error::WindowTooSmallForSmoothing { .. })
        ));
    }

    #[test]
    fn semigroup() {
        let w = field(&StateSpec::odd_cat(2.0));
        let two_step = smooth(&smooth(&w, -0.5).unwrap(), -1.0).unwrap();
        let one_step = smooth(&w, -1.0).unwrap();
        assert!(two_step.max_abs_diff(&one_step) < 1e-8);
    }

    #[test]
    fn backends_agree_on_states() {
        for spec in [StateSpec::squeezed(3.0), StateSpec::fock(4)] {
            let w = field(&spec);
            let a = smooth_with(&w, -1.0, Backend::Spectral).unwrap();
            let b = smooth_with(&w, -1.0, Backend::Direct).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-9, "{spec}");
        }
    }

    #[test]
    fn smoothing_preserves_normalization_and_husimi_is_nonnegative() {
        for spec in [
            StateSpec::fock(5),
            StateSpec::odd_cat(3.0),
            StateSpec::squeezed(0.5),
        ] {
            let w = field(&spec);
            let q = smooth(&w, -1.0).unwrap();
            assert!((integrate(&q) - integrate(&w)).abs() < 1e-6, "{spec}");
            assert!(q.min_value() >= -1e-10, "{spec}: {}", q.min_value());
        }
    }

    #[test]
    fn smoothing_commutes_with_quarter_turns() {
        let spec = StateSpec::odd_cat(1.5);
        let g = GridGeometry::symmetric(241, 241, 7.5, 7.5).unwrap();
        let w = wigner(&spec, &g).unwrap();
        let rotate = |f: &ScalarField2D<f64>| {
            // (x, p) → (-p, x).
            let n = g.nx();
            let values = (0..n * n).map(|idx| {
                let (i, j) = (idx % n, idx / n);
                f.get(j, n - 1 - i)
            });
            ScalarField2D::new(g, f.order(), values.collect()).unwrap()
        };
        let a = rotate(&smooth(&w, -1.0).unwrap());
        let b = smooth(&rotate(&w), -1.0).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-14, "{}", a.max_abs_diff(&b));
    }

    #[test]
    fn loss_channel_fixed_point_and_coherent_shrink() {
        let w = field(&StateSpec::vacuum());
        let out = loss_channel(&w, 0.75).unwrap();
        assert!(out.max_abs_diff(&w) < 1e-8, "{}", out.max_abs_diff(&w));

        let spec = StateSpec::coherent(2.0, -1.0);
        let w = field(&spec);
        for eta in [0.3, 0.75, 0.99] {
            let out = loss_channel(&w, eta).unwrap();
            let r = eta.sqrt();
            let expect = wigner(&StateSpec::coherent(2.0 * r, -r), w.geometry()).unwrap();
            assert!(
                out.max_abs_diff(&expect) < 1e-8,
                "eta={eta}: {}",
                out.max_abs_diff(&expect)
            );
        }
        assert_eq!(loss_channel(&w, 1.0).unwrap(), w);
    }

    #[test]
    fn loss_channel_rejects_bad_input() {
        let w = field(&StateSpec::vacuum());
        for eta in [0.0, -0.5, 1.5, f64::NAN] {
            assert!(
                matches!(loss_channel(&w, eta), Err(Error::InvalidParameter(_))),
                "{eta}"
            );
        }
        let q = smooth(&w, -1.0).unwrap();
        assert!(matches!(loss_channel(&q, 0.5), Err(Error::WrongOrder(_))));
    }

    #[test]
    fn lossy_cat_matches_closed_form() {
        let (x0, eta) = (3.0_f64, 0.75_f64);
        let w = field(&StateSpec::odd_cat(x0));
        let out = loss_channel(&w, eta).unwrap();
        // Lobes shrink to ±√η x0, fringes keep their shape at frequency
        // 2√η x0 and lose a factor exp(-(1-η) x0²).
        let r = eta.sqrt();
        let norm = 2.0 * std::f64::consts::PI * (1.0 - (-x0 * x0).exp());
        let fringe = (-(1.0 - eta) * x0 * x0).exp();
        let exact = ScalarField2D::from_fn(*w.geometry(), Order::wigner(), |x, p| {
            let lobes =
                (-(x - r * x0).powi(2) - p * p).exp() + (-(x + r * x0).powi(2) - p * p).exp();
            (lobes - 2.0 * fringe * (-x * x - p * p).exp() * (2.0 * r * x0 * p).cos()) / norm
        })
        .unwrap();
        assert!(
            out.max_abs_diff(&exact) < 1e-8,
            "{}",
            out.max_abs_diff(&exact)
        );
        assert!((integrate(&out) - 1.0).abs() < 1e-6);
    }
}
