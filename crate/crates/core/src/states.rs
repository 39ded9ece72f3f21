//! Closed-form Wigner (and, where one exists, Husimi) functions for the
//! state families used throughout the crate.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::grid::{GridGeometry, Order, ScalarField2D};
use crate::real::Real;

/// Magnitude below which a state's envelope counts as vanished when sizing
/// a window.
pub const ENVELOPE_FLOOR: f64 = 1e-12;

/// Largest edge magnitude accepted by [`wigner`].
pub const EDGE_TOLERANCE: f64 = 1e-9;

/// Upper limit on the Fock index; keeps windows and recurrences sane.
pub const MAX_FOCK: u32 = 400;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Vacuum,
    /// Displaced vacuum; the displacement lives on [`StateSpec`].
    Coherent,
    /// `exp(-x²/σ² - σ²p²)/π`.
    Squeezed {
        sigma: f64,
    },
    /// Coherent superposition of lobes at `±x0`, odd parity.
    OddCat {
        x0: f64,
    },
    EvenCat {
        x0: f64,
    },
    Fock {
        n: u32,
    },
    /// `exp(-x²/σ²) exp(-σ²p²/ι) / (π√ι)`.
    ImpureSqueezed {
        sigma: f64,
        iota: f64,
    },
    /// Convex combination of sub-states.
    Mixture(Vec<(f64, StateSpec)>),
}

impl Family {
    pub fn tag(&self) -> &'static str {
        match self {
            Family::Vacuum => "vacuum",
            Family::Coherent => "coherent",
            Family::Squeezed { .. } => "squeezed",
            Family::OddCat { .. } => "odd_cat",
            Family::EvenCat { .. } => "even_cat",
            Family::Fock { .. } => "fock",
            Family::ImpureSqueezed { .. } => "impure_squeezed",
            Family::Mixture(_) => "mixture",
        }
    }
}

/// A state family, its parameters, and a phase-space displacement.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    pub family: Family,
    pub xc: f64,
    pub pc: f64,
}

impl StateSpec {
    pub fn new(family: Family) -> Result<Self> {
        let spec = Self {
            family,
            xc: 0.0,
            pc: 0.0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn vacuum() -> Self {
        Self {
            family: Family::Vacuum,
            xc: 0.0,
            pc: 0.0,
        }
    }

    pub fn coherent(xc: f64, pc: f64) -> Self {
        Self {
            family: Family::Coherent,
            xc,
            pc,
        }
    }

    pub fn squeezed(sigma: f64) -> Self {
        Self {
            family: Family::Squeezed { sigma },
            xc: 0.0,
            pc: 0.0,
        }
    }

    pub fn odd_cat(x0: f64) -> Self {
        Self {
            family: Family::OddCat { x0 },
            xc: 0.0,
            pc: 0.0,
        }
    }

    pub fn even_cat(x0: f64) -> Self {
        Self {
            family: Family::EvenCat { x0 },
            xc: 0.0,
            pc: 0.0,
        }
    }

    pub fn fock(n: u32) -> Self {
        Self {
            family: Family::Fock { n },
            xc: 0.0,
            pc: 0.0,
        }
    }

    pub fn impure_squeezed(sigma: f64, iota: f64) -> Self {
        Self {
            family: Family::ImpureSqueezed { sigma, iota },
            xc: 0.0,
            pc: 0.0,
        }
    }

    pub fn mixture(components: Vec<(f64, StateSpec)>) -> Result<Self> {
        Self::new(Family::Mixture(components))
    }

    /// Equal classical mixture of the two coherent lobes of a cat state.
    pub fn cat_lobe_mixture(x0: f64) -> Self {
        Self {
            family: Family::Mixture(vec![
                (0.5, Self::coherent(x0, 0.0)),
                (0.5, Self::coherent(-x0, 0.0)),
            ]),
            xc: 0.0,
            pc: 0.0,
        }
    }

    pub fn displaced(mut self, a: f64, b: f64) -> Self {
        self.xc += a;
        self.pc += b;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.xc.is_finite() && self.pc.is_finite()) {
            return bad("displacement must be finite".into());
        }
        match &self.family {
            Family::Vacuum | Family::Coherent => Ok(()),
            Family::Squeezed { sigma } => {
                if !(sigma.is_finite() && *sigma > 0.0) {
                    return bad(format!("squeezing sigma={sigma} must be > 0"));
                }
                Ok(())
            }
            Family::OddCat { x0 } | Family::EvenCat { x0 } => {
                if !(x0.is_finite() && *x0 >= 0.0) {
                    return bad(format!("cat half-separation x0={x0} must be ≥ 0"));
                }
                Ok(())
            }
            Family::Fock { n } => {
                if *n > MAX_FOCK {
                    return bad(format!("Fock index n={n} exceeds {MAX_FOCK}"));
                }
                Ok(())
            }
            Family::ImpureSqueezed { sigma, iota } => {
                if !(sigma.is_finite() && *sigma > 0.0) {
                    return bad(format!("squeezing sigma={sigma} must be > 0"));
                }
                if !(iota.is_finite() && *iota >= 1.0) {
                    return bad(format!("impurity iota={iota} must be ≥ 1"));
                }
                Ok(())
            }
            Family::Mixture(parts) => {
                if parts.is_empty() {
                    return bad("mixture needs at least one component".into());
                }
                let mut total = 0.0;
                for (w, part) in parts {
                    if !(w.is_finite() && *w >= 0.0) {
                        return bad(format!("mixture weight {w} must be ≥ 0"));
                    }
                    total += w;
                    part.validate()?;
                }
                if (total - 1.0).abs() > 1e-12 {
                    return bad(format!("mixture weights sum to {total}, not 1"));
                }
                Ok(())
            }
        }
    }

    /// Wigner function at `(x, p)`.
    pub fn wigner_at<T: Real>(&self, x: T, p: T) -> T {
        let x = x - T::lit(self.xc);
        let p = p - T::lit(self.pc);
        let inv_pi = T::FRAC_1_PI();
        match &self.family {
            Family::Vacuum | Family::Coherent => (-(x * x) - p * p).exp() * inv_pi,
            Family::Squeezed { sigma } => {
                let s = T::lit(*sigma);
                (-(x * x) / (s * s) - s * s * p * p).exp() * inv_pi
            }
            Family::ImpureSqueezed { sigma, iota } => {
                let (s, i) = (T::lit(*sigma), T::lit(*iota));
                (-(x * x) / (s * s) - s * s * p * p / i).exp() * inv_pi / i.sqrt()
            }
            Family::OddCat { x0 } => odd_cat_wigner(x, p, T::lit(*x0)),
            Family::EvenCat { x0 } => even_cat_wigner(x, p, T::lit(*x0)),
            Family::Fock { n } => {
                let r2 = x * x + p * p;
                let two = T::lit(2.0);
                let w = weighted_laguerre(*n, two * r2) * inv_pi;
                if n % 2 == 1 {
                    -w
                } else {
                    w
                }
            }
            Family::Mixture(parts) => parts
                .iter()
                .map(|(w, part)| T::lit(*w) * part.wigner_at(x, p))
                .sum(),
        }
    }

    /// Closed-form Husimi function at `(x, p)`, if the family has one.
    pub fn husimi_at<T: Real>(&self, x: T, p: T) -> Result<T> {
        let x = x - T::lit(self.xc);
        let p = p - T::lit(self.pc);
        let two_pi = T::lit(2.0 * PI);
        let half = T::lit(0.5);
        match &self.family {
            Family::Vacuum | Family::Coherent => Ok((-(x * x + p * p) * half).exp() / two_pi),
            Family::Squeezed { sigma } => {
                let s2 = T::lit(sigma * sigma);
                let a = s2 + T::one();
                let b = T::one() + s2.recip();
                Ok((-(x * x) / a - p * p / b).exp() / (T::PI() * (a * b).sqrt()))
            }
            Family::Fock { n } => {
                let half_r2 = (x * x + p * p) * half;
                if *n == 0 {
                    return Ok((-half_r2).exp() / two_pi);
                }
                if half_r2.is_zero() {
                    return Ok(T::zero());
                }
                let nf = T::lit(*n as f64);
                let log = nf * half_r2.ln() - half_r2 - T::lit(ln_factorial(*n));
                Ok(log.exp() / two_pi)
            }
            other => Err(Error::NoClosedForm(other.tag())),
        }
    }

    /// Per-axis half-widths `(Lx, Lp)` beyond which both the Wigner envelope
    /// and `4πQ²` stay below [`ENVELOPE_FLOOR`].
    pub fn envelope_extent(&self) -> (f64, f64) {
        let (ex, ep) = match &self.family {
            Family::Vacuum | Family::Coherent => (gaussian_extent(0.5), gaussian_extent(0.5)),
            Family::Squeezed { sigma } => (
                gaussian_extent(sigma * sigma / 2.0),
                gaussian_extent(1.0 / (2.0 * sigma * sigma)),
            ),
            Family::ImpureSqueezed { sigma, iota } => (
                gaussian_extent(sigma * sigma / 2.0),
                gaussian_extent(iota / (2.0 * sigma * sigma)),
            ),
            Family::OddCat { x0 } | Family::EvenCat { x0 } => {
                (x0 + gaussian_extent(0.5), gaussian_extent(0.5))
            }
            Family::Fock { n } => {
                let r = fock_extent(*n);
                (r, r)
            }
            Family::Mixture(parts) => {
                parts
                    .iter()
                    .fold((0.0_f64, 0.0_f64), |(ax, ap), (_, part)| {
                        let (x, p) = part.envelope_extent();
                        (ax.max(x), ap.max(p))
                    })
            }
        };
        (ex + self.xc.abs(), ep + self.pc.abs())
    }

    /// Per-axis spacing caps `(Δx, Δp)` resolving the family's fine
    /// structure, given the base spacing.
    pub fn spacing_bounds(&self, base: f64) -> (f64, f64) {
        match &self.family {
            Family::Vacuum | Family::Coherent => (base, base),
            // The narrow quadrature carries the ξ minimum, so it gets twice the
            // nominal resolution.
            Family::Squeezed { sigma } if *sigma >= 1.0 => (base, base / (2.0 * sigma)),
            Family::Squeezed { sigma } => (base * sigma / 2.0, base),
            Family::ImpureSqueezed { sigma, iota } => {
                (base * sigma.min(1.0), base * (iota.sqrt() / sigma).min(1.0))
            }
            // Fringes cos(2 x0 p); 48 nodes per period.
            Family::OddCat { x0 } | Family::EvenCat { x0 } if *x0 > 0.0 => {
                (base, base.min(PI / (48.0 * x0)))
            }
            Family::OddCat { .. } | Family::EvenCat { .. } => (base, base),
            Family::Fock { n } => {
                let d = base.min(0.2 / (2.0 * *n as f64 + 1.0).sqrt());
                (d, d)
            }
            Family::Mixture(parts) => parts.iter().fold((base, base), |(ax, ap), (_, part)| {
                let (x, p) = part.spacing_bounds(base);
                (ax.min(x), ap.min(p))
            }),
        }
    }

    /// Flat `key=value` parameter list (displacement included when nonzero).
    pub fn params_string(&self) -> String {
        let mut kv: Vec<String> = match &self.family {
            Family::Vacuum | Family::Coherent => vec![],
            Family::Squeezed { sigma } => vec![format!("sigma={sigma}")],
            Family::OddCat { x0 } | Family::EvenCat { x0 } => vec![format!("x0={x0}")],
            Family::Fock { n } => vec![format!("n={n}")],
            Family::ImpureSqueezed { sigma, iota } => {
                vec![format!("sigma={sigma}"), format!("iota={iota}")]
            }
            Family::Mixture(parts) => {
                return parts
                    .iter()
                    .map(|(w, part)| format!("{w}*{part}"))
                    .collect::<Vec<_>>()
                    .join(";")
            }
        };
        if self.xc != 0.0 || self.pc != 0.0 || self.family == Family::Coherent {
            kv.push(format!("xc={}", self.xc));
            kv.push(format!("pc={}", self.pc));
        }
        kv.join(",")
    }

    /// Parses a family tag and its flat parameter list, e.g.
    /// `("squeezed", "sigma=2.335")`, `("cat", "x0=6")` or
    /// `("mixture", "0.5*coherent(xc=4);0.5*coherent(xc=-4)")`.
    pub fn parse(family: &str, params: &str) -> Result<Self> {
        let params = params.trim();
        if family == "mixture" {
            let mut parts = Vec::new();
            for item in split_top_level(params, ';') {
                let (w, rest) = item.split_once('*').ok_or_else(|| {
                    Error::InvalidParameter(format!(
                        "mixture component `{item}` needs `weight*family(...)`"
                    ))
                })?;
                let w: f64 = w
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("bad weight `{w}`")))?;
                let rest = rest.trim();
                let (name, inner) = match rest.find('(') {
                    Some(open) if rest.ends_with(')') => {
                        (&rest[..open], &rest[open + 1..rest.len() - 1])
                    }
                    _ => (rest, ""),
                };
                parts.push((w, Self::parse(name.trim(), inner)?));
            }
            return Self::mixture(parts);
        }

        let mut values = std::collections::BTreeMap::new();
        for item in split_top_level(params, ',') {
            let (k, v) = item.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!("parameter `{item}` is not key=value"))
            })?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("`{v}` is not a number")))?;
            if values.insert(k.trim().to_string(), v).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "duplicate parameter `{}`",
                    k.trim()
                )));
            }
        }
        let mut take = |key: &str| values.remove(key);
        let xc = take("xc").unwrap_or(0.0);
        let pc = take("pc").unwrap_or(0.0);
        let require = |v: Option<f64>, key: &str| {
            v.ok_or_else(|| Error::InvalidParameter(format!("family `{family}` requires `{key}`")))
        };
        let family_value = match family {
            "vacuum" => Family::Vacuum,
            "coherent" => Family::Coherent,
            "squeezed" => Family::Squeezed {
                sigma: require(take("sigma"), "sigma")?,
            },
            "cat" | "odd_cat" => Family::OddCat {
                x0: require(take("x0"), "x0")?,
            },
            "even_cat" => Family::EvenCat {
                x0: require(take("x0"), "x0")?,
            },
            "fock" => {
                let n = require(take("n"), "n")?;
                if n < 0.0 || n.fract() != 0.0 || n > MAX_FOCK as f64 {
                    return Err(Error::InvalidParameter(format!(
                        "Fock index n={n} must be an integer in 0..={MAX_FOCK}"
                    )));
                }
                Family::Fock { n: n as u32 }
            }
            "impure_squeezed" => Family::ImpureSqueezed {
                sigma: require(take("sigma"), "sigma")?,
                iota: require(take("iota"), "iota")?,
            },
            other => return Err(Error::InvalidParameter(format!("unknown family `{other}`"))),
        };
        if let Some(key) = values.keys().next() {
            return Err(Error::InvalidParameter(format!(
                "family `{family}` does not take `{key}`"
            )));
        }
        let spec = Self {
            family: family_value,
            xc,
            pc,
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for StateSpec {
    /// `family(params)`, re-parseable through [`StateSpec::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.family.tag(), self.params_string())
    }
}

fn split_top_level(text: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (pos, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(text[start..pos].trim());
                start = pos + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(text[start..].trim());
    out.retain(|s| !s.is_empty());
    out
}

/// Half-width at which a centered Gaussian of per-axis variance `var` and
/// its Husimi square have both dropped below the envelope floor.
fn gaussian_extent(var: f64) -> f64 {
    let effective = var.max((var + 0.5) / 2.0);
    (2.0 * effective * (ENVELOPE_FLOOR.recip() / PI).ln()).sqrt()
}

fn fock_extent(n: u32) -> f64 {
    let start = (2.0 * n as f64 + 1.0).sqrt();
    let spec = StateSpec::fock(n);
    let envelope = |r: f64| {
        let w = spec.wigner_at(r, 0.0).abs();
        let q = spec.husimi_at(r, 0.0).unwrap();
        w.max(4.0 * PI * q * q)
    };
    let mut r = start;
    while envelope(r) >= ENVELOPE_FLOOR {
        r += 0.01;
    }
    r
}

pub(crate) fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `exp(-y/2) L_n(y)` by the upward three-term recurrence
/// `(k+1) L_{k+1} = (2k+1-y) L_k - k L_{k-1}`, carried out on the weighted
/// values so that nothing overflows for large `n` or `y`.
pub fn weighted_laguerre<T: Real>(n: u32, y: T) -> T {
    let mut prev = (-y * T::lit(0.5)).exp();
    if n == 0 {
        return prev;
    }
    let mut cur = prev * (T::one() - y);
    for k in 1..n {
        let kf = T::lit(k as f64);
        let next = ((T::lit(2.0) * kf + T::one() - y) * cur - kf * prev) / (kf + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// Odd cat in a cancellation-free arrangement:
/// `[2 sinh²(x x0) e^{-x²-x0²} e^{-p²} + e^{-r²}(2 sin²(x0 p) e^{-x0²} + expm1(-x0²) cos(2 x0 p))]
///  / (π (1 - e^{-x0²}))`, which tends to the `|1⟩` Wigner function as `x0 → 0`.
fn odd_cat_wigner<T: Real>(x: T, p: T, x0: T) -> T {
    let r2 = x * x + p * p;
    if x0.is_zero() {
        return (T::lit(2.0) * r2 - T::one()) * (-r2).exp() * T::FRAC_1_PI();
    }
    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let x02 = x0 * x0;
    let s = (x * x0).abs();
    // sinh(s) e^{-(x² + x0²)/2}, with s - (x² + x0²)/2 = -(|x| - x0)²/2 ≤ 0.
    let sinh_weighted = (s - (x * x + x02) * half).exp() * (-(-two * s).exp_m1()) * half;
    let lobes = two * sinh_weighted * sinh_weighted * (-p * p).exp();
    let sin = (x0 * p).sin();
    let fringe =
        (-r2).exp() * (two * sin * sin * (-x02).exp() + (-x02).exp_m1() * (two * x0 * p).cos());
    (lobes + fringe) / (T::PI() * (-(-x02).exp_m1()))
}

fn even_cat_wigner<T: Real>(x: T, p: T, x0: T) -> T {
    let p2 = p * p;
    let two = T::lit(2.0);
    let lobes = (-(x - x0) * (x - x0) - p2).exp() + (-(x + x0) * (x + x0) - p2).exp();
    let fringe = two * (-(x * x) - p2).exp() * (two * x0 * p).cos();
    (lobes + fringe) / (two * T::PI() * (T::one() + (-x0 * x0).exp()))
}

/// Samples the Wigner function of `spec` on `geometry`.
///
/// Fails with [`Error::WindowTooSmall`] when the field at the window edge
/// exceeds [`EDGE_TOLERANCE`].
pub fn wigner<T: Real>(spec: &StateSpec, geometry: &GridGeometry<T>) -> Result<ScalarField2D<T>> {
    spec.validate()?;
    let field = ScalarField2D::from_fn(*geometry, Order::wigner(), |x, p| spec.wigner_at(x, p))?;
    let edge = field.edge_max_abs().as_f64();
    if edge > EDGE_TOLERANCE {
        return Err(Error::WindowTooSmall { edge });
    }
    Ok(field)
}

/// Samples the closed-form Husimi function (vacuum, coherent, squeezed and
/// Fock states only).
pub fn husimi_analytic<T: Real>(
    spec: &StateSpec,
    geometry: &GridGeometry<T>,
) -> Result<ScalarField2D<T>> {
    spec.validate()?;
    spec.husimi_at::<T>(T::zero(), T::zero())?;
    ScalarField2D::from_fn(*geometry, Order::husimi(), |x, p| {
        spec.husimi_at(x, p).unwrap()
    })
}
