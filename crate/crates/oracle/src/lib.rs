//! Slow, independent reference computations for validating `qxi`.
//!
//! Nothing here is used by the library itself; the test-suites compare the
//! fast paths against these.

use std::collections::BTreeMap;

use rayon::prelude::*;

use qxi::{
    auto_geometry, measure, wigner, Criterion, Error, Field, Geometry, MeasureReport, Order,
    Result, StateSpec,
};

/// Cap on output-node × input-node pairs for the double sum.
pub const DEFAULT_PAIR_BUDGET: usize = 20_000_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    /// Spacing divisor for refined grids (at least 2).
    pub quadrature_refinement: usize,
    /// Window growth factor for refined grids.
    pub extent_scale: f64,
    pub node_budget: usize,
    pub pair_budget: usize,
    /// Named tolerances for the checks built on these references.
    pub tolerances: BTreeMap<&'static str, f64>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        let tolerances = BTreeMap::from([
            ("smooth_vs_direct", 1e-9),
            ("husimi_closed_form", 1e-8),
            ("semigroup", 1e-7),
            ("refined_squeezed_xi_min", 2e-4),
            ("refined_cat_big_xi_relative", 1e-2),
        ]);
        Self {
            quadrature_refinement: 2,
            extent_scale: 1.5,
            node_budget: 40_000_000,
            pair_budget: DEFAULT_PAIR_BUDGET,
            tolerances,
        }
    }
}

impl OracleConfig {
    pub fn with_refinement(quadrature_refinement: usize) -> Result<Self> {
        if quadrature_refinement < 2 {
            return Err(Error::InvalidParameter(format!(
                "refinement {quadrature_refinement} must be ≥ 2"
            )));
        }
        Ok(Self {
            quadrature_refinement,
            ..Self::default()
        })
    }

    /// Looks up a named tolerance; panics on an unknown name.
    pub fn tolerance(&self, name: &str) -> f64 {
        *self
            .tolerances
            .get(name)
            .unwrap_or_else(|| panic!("no tolerance named `{name}`"))
    }
}

/// Smoothing by the plain double sum
/// `P_S(x,p) = Σ_{x',p'} P_R(x',p') exp(-[(x-x')² + (p-p')²]/(R-S)) / (π(R-S)) Δx Δp`
/// over every input node, with no truncation or renormalization, evaluated
/// at the given output nodes.
pub fn direct_convolution_at(
    field: &Field,
    target_order: f64,
    nodes: &[(usize, usize)],
    config: &OracleConfig,
) -> Result<Vec<f64>> {
    let source = field
        .order()
        .value()
        .ok_or_else(|| Error::WrongOrder("direct convolution needs a quasi-distribution".into()))?;
    if target_order > source {
        return Err(Error::DeconvolutionUnsupported {
            from: source,
            to: target_order,
        });
    }
    let g = field.geometry();
    let pairs = nodes.len().saturating_mul(g.len());
    if pairs > config.pair_budget {
        return Err(Error::GridTooLarge {
            nodes: pairs,
            budget: config.pair_budget,
        });
    }
    let width = source - target_order;
    if width == 0.0 {
        return Ok(nodes.iter().map(|&(i, j)| field.get(i, j)).collect());
    }
    let (nx, np) = (g.nx(), g.np());
    let (dx, dp) = (g.dx(), g.dp());
    // Tables indexed by node offset; the kernel itself is the product.
    let kx: Vec<f64> = (0..nx)
        .map(|d| (-(d as f64 * dx).powi(2) / width).exp())
        .collect();
    let kp: Vec<f64> = (0..np)
        .map(|d| (-(d as f64 * dp).powi(2) / width).exp())
        .collect();
    let weight = dx * dp / (std::f64::consts::PI * width);
    let values = field.values();
    Ok(nodes
        .par_iter()
        .map(|&(i, j)| {
            let mut acc = 0.0;
            for jp in 0..np {
                let row = &values[jp * nx..(jp + 1) * nx];
                let wp = kp[j.abs_diff(jp)];
                for (ip, &v) in row.iter().enumerate() {
                    acc += kx[i.abs_diff(ip)] * wp * v;
                }
            }
            acc * weight
        })
        .collect())
}

/// Full-field version of [`direct_convolution_at`].
pub fn direct_convolution(
    field: &Field,
    target_order: f64,
    config: &OracleConfig,
) -> Result<Field> {
    let g = *field.geometry();
    let nodes: Vec<(usize, usize)> = (0..g.len()).map(|idx| g.node(idx)).collect();
    let values = direct_convolution_at(field, target_order, &nodes, config)?;
    Field::new(g, Order::Distribution(target_order), values)
}

/// Every `stride`-th node in both directions, plus the full row and column
/// through the window center.
pub fn sample_nodes(g: &Geometry, stride: usize) -> Vec<(usize, usize)> {
    let stride = stride.max(1);
    let (ci, cj) = (g.nx() / 2, g.np() / 2);
    let mut nodes: Vec<(usize, usize)> = (0..g.np())
        .step_by(stride)
        .flat_map(|j| (0..g.nx()).step_by(stride).map(move |i| (i, j)))
        .collect();
    nodes.extend((0..g.nx()).map(|i| (i, cj)));
    nodes.extend((0..g.np()).map(|j| (ci, j)));
    nodes.sort_unstable();
    nodes.dedup();
    nodes
}

/// Geometry `refinement`× finer and `extent_scale`× wider than the default
/// grid for `spec`.
pub fn refined_geometry(spec: &StateSpec, config: &OracleConfig) -> Result<Geometry> {
    let coarse: Geometry = auto_geometry(spec, None)?;
    let fine = coarse.refined(config.quadrature_refinement as f64, config.extent_scale)?;
    if fine.len() > config.node_budget {
        return Err(Error::GridTooLarge {
            nodes: fine.len(),
            budget: config.node_budget,
        });
    }
    Ok(fine)
}

/// The whole measure pipeline recomputed on the refined grid.
pub fn refined_measure(
    spec: &StateSpec,
    params: &Criterion,
    config: &OracleConfig,
) -> Result<MeasureReport> {
    let g = refined_geometry(spec, config)?;
    measure(&wigner(spec, &g)?, params, false)
}

/// Closed-form results for Gaussian states and the large-cat limit.
pub mod analytic {
    use std::f64::consts::PI;

    /// Lee-Jeong measure of a centered Gaussian Wigner function with
    /// per-axis variances `vx`, `vp`, from `∬W² = 1/(4π√(vx vp))` and
    /// `∬|∇W|² = ∬W² (1/(2vx) + 1/(2vp))`.
    pub fn gaussian_lee_jeong(vx: f64, vp: f64) -> f64 {
        let w2 = 1.0 / (4.0 * PI * (vx * vp).sqrt());
        let grad2 = w2 * (0.5 / vx + 0.5 / vp);
        // -(π/2) ∬ W(ΔW/2 - W) - ½ with ∬ W ΔW = -∬|∇W|².
        -(PI / 2.0) * (-0.5 * grad2 - w2) - 0.5
    }

    /// `(4/π) x0²`: the fringe-dominated measure of a large odd cat.
    pub fn large_cat_big_xi(x0: f64) -> f64 {
        4.0 / PI * x0 * x0
    }

    /// ΔW for the vacuum, `(4r² - 4) W`.
    pub fn vacuum_laplacian(x: f64, p: f64) -> f64 {
        let r2 = x * x + p * p;
        (4.0 * r2 - 4.0) * (-r2).exp() / PI
    }
}
