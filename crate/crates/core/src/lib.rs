//! Phase-space quasi-probability distributions for single-mode
//! continuous-variable states, the nonclassicality criterion family
//! `ξ^[S,k]`, and the curvature-based quantumness measure `Ξ^[S,k]`.
//!
//! Units are rescaled so that `m = ω = ħ = 1` and phase space is
//! parameterized by position `x` and momentum `p` (never by the complex
//! amplitude `α = (x + ip)/√2`). In these coordinates the vacuum Wigner
//! function is `exp(-x² - p²)/π` and the smoothing kernel that maps an
//! order-`R` distribution to order `S` is
//! `exp(-[(x-x')² + (p-p')²]/(R-S)) / (π (R-S))`.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix the scalar to `f64`, which is what the tolerances
//! quoted throughout the test-suite assume.

pub mod error;
pub mod grid;
pub mod nonclassicality;
pub mod real;
pub mod states;
pub mod transforms;

pub use error::{Error, PsgridError, Result};
pub use grid::{
    auto_geometry, integrate, GridGeometry, GridOptions, Order, ScalarField2D, DEFAULT_NODE_BUDGET,
};
pub use nonclassicality::{
    big_xi, big_xi_sk, boundary_gradient_diagnostic, laplacian, lee_jeong, measure, xi_field,
    xi_min, xi_sk_field, BoundaryDiagnostic, CriterionParams, MeasureReport, XiMinimum,
};
pub use real::Real;
pub use states::{husimi_analytic, wigner, Family, StateSpec};
pub use transforms::{loss_channel, smooth, smooth_with, Backend, SmoothingJob};

/// Grid geometry in double precision.
pub type Geometry = GridGeometry<f64>;
/// Sampled phase-space field in double precision.
pub type Field = ScalarField2D<f64>;
/// Single-precision field, for memory-bound exploratory work.
pub type Field32 = ScalarField2D<f32>;
/// Criterion parameters in double precision.
pub type Criterion = CriterionParams<f64>;
