//! Automatic window and resolution selection.

use super::GridGeometry;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::states::StateSpec;

/// Base node spacing when nothing finer is required.
pub const DEFAULT_SPACING: f64 = 0.05;

/// Default cap on `nx · np`.
pub const DEFAULT_NODE_BUDGET: usize = 16_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions {
    /// Base spacing; family fine-structure caps still apply on top.
    pub resolution: Option<f64>,
    pub node_budget: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        Self {
            resolution: None,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

/// Rounds an envelope radius up to the next multiple of 0.5 and adds one
/// half-unit margin, so that sweep windows grow in nested steps.
fn window_half_width(radius: f64) -> f64 {
    0.5 * (2.0 * radius).ceil() + 0.5
}

/// Symmetric window and spacing adequate for `spec`.
pub fn auto_geometry<T: Real>(
    spec: &StateSpec,
    requested_resolution: Option<f64>,
) -> Result<GridGeometry<T>> {
    auto_geometry_with(
        spec,
        &GridOptions {
            resolution: requested_resolution,
            ..GridOptions::default()
        },
    )
}

pub fn auto_geometry_with<T: Real>(
    spec: &StateSpec,
    options: &GridOptions,
) -> Result<GridGeometry<T>> {
    spec.validate()?;
    let base = options.resolution.unwrap_or(DEFAULT_SPACING);
    if !(base.is_finite() && base > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "resolution {base} must be > 0"
        )));
    }
    let (rx, rp) = spec.envelope_extent();
    let (lx, lp) = (window_half_width(rx), window_half_width(rp));
    let (dx, dp) = spec.spacing_bounds(base);
    let nx = 2 * (lx / dx).ceil() as usize + 1;
    let np = 2 * (lp / dp).ceil() as usize + 1;
    let nodes = nx.saturating_mul(np);
    if nodes > options.node_budget {
        return Err(Error::GridTooLarge {
            nodes,
            budget: options.node_budget,
        });
    }
    GridGeometry::symmetric(nx, np, T::lit(lx), T::lit(lp))
}
