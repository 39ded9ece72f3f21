//! One-parameter sweeps and their CSV form.

use std::fmt::Write as _;

use clap::ValueEnum;
use qxi::grid::{GridOptions, DEFAULT_SPACING};
use qxi::{measure, Criterion, MeasureReport, StateSpec};
use rayon::prelude::*;

use crate::lossy_wigner;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepParam {
    Sigma,
    X0,
    N,
    #[value(name = "S")]
    S,
    K,
    Eta,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Sigma => "sigma",
            SweepParam::X0 => "x0",
            SweepParam::N => "n",
            SweepParam::S => "S",
            SweepParam::K => "k",
            SweepParam::Eta => "eta",
        }
    }

    fn is_state_param(self) -> bool {
        matches!(self, SweepParam::Sigma | SweepParam::X0 | SweepParam::N)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SweepRange {
    Linear { from: f64, to: f64, steps: usize },
    List(Vec<f64>),
}

impl SweepRange {
    /// Materialized sweep values; must be finite and strictly increasing,
    /// and integral for `n`.
    pub fn values(&self, param: SweepParam) -> Result<Vec<f64>, String> {
        let values = match *self {
            SweepRange::Linear { from, to, steps } => {
                if steps == 0 {
                    return Err("`--steps` must be at least 1".into());
                }
                if steps == 1 {
                    if from != to {
                        return Err("`--steps 1` needs `--from` equal to `--to`".into());
                    }
                    vec![from]
                } else {
                    let h = (to - from) / (steps - 1) as f64;
                    (0..steps)
                        .map(|i| {
                            if i + 1 == steps {
                                to
                            } else {
                                from + h * i as f64
                            }
                        })
                        .collect()
                }
            }
            SweepRange::List(ref v) => v.clone(),
        };
        if values.is_empty() {
            return Err("empty sweep".into());
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err("sweep values must be finite".into());
        }
        if values.windows(2).any(|w| w[1] <= w[0]) {
            return Err("sweep values must be strictly increasing".into());
        }
        if param == SweepParam::N && values.iter().any(|v| v.fract() != 0.0 || *v < 0.0) {
            return Err("`n` sweeps take non-negative integers".into());
        }
        Ok(values)
    }
}

/// Everything that stays fixed along a sweep.
#[derive(Debug, Clone)]
pub struct SweepSetup {
    pub family: String,
    pub params: String,
    pub eta: f64,
    pub s: f64,
    pub k: f64,
    pub options: GridOptions,
    pub refine_min: bool,
}

impl SweepSetup {
    fn point(&self, param: SweepParam, value: f64) -> qxi::Result<(StateSpec, f64, Criterion)> {
        let mut params = self.params.clone();
        if param.is_state_param() {
            let key = param.name();
            let kept: Vec<&str> = params
                .split(',')
                .map(str::trim)
                .filter(|item| {
                    !item.is_empty() && item.split('=').next().map(str::trim) != Some(key)
                })
                .collect();
            let mut joined = kept.join(",");
            if !joined.is_empty() {
                joined.push(',');
            }
            let _ = write!(joined, "{key}={value}");
            params = joined;
        }
        let spec = StateSpec::parse(&self.family, &params)?;
        let eta = if param == SweepParam::Eta {
            value
        } else {
            self.eta
        };
        let s = if param == SweepParam::S {
            value
        } else {
            self.s
        };
        let k = if param == SweepParam::K {
            value
        } else {
            self.k
        };
        Ok((spec, eta, Criterion::new(s, k)?))
    }
}

/// Parameter values with one report each, in increasing parameter order.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub param: SweepParam,
    pub setup: SweepSetup,
    pub records: Vec<(f64, MeasureReport)>,
}

pub fn run(setup: &SweepSetup, param: SweepParam, values: &[f64]) -> qxi::Result<SweepResult> {
    if setup.family == "mixture" && param.is_state_param() {
        return Err(qxi::Error::InvalidParameter(
            "mixtures cannot sweep a state parameter".into(),
        ));
    }
    let records = values
        .par_iter()
        .map(|&v| {
            let (spec, eta, params) = setup.point(param, v)?;
            let w = lossy_wigner(&spec, eta, &setup.options)?;
            Ok((v, measure(&w, &params, setup.refine_min)?))
        })
        .collect::<qxi::Result<Vec<_>>>()?;
    Ok(SweepResult {
        param,
        setup: setup.clone(),
        records,
    })
}

impl SweepResult {
    /// CSV with a `#` provenance header naming every setting, including the
    /// grid used at each point.
    pub fn to_csv(&self, version: &str) -> String {
        let s = &self.setup;
        let mut out = String::new();
        let _ = writeln!(out, "# qxi {version} sweep");
        let _ = writeln!(out, "# param {}", self.param.name());
        let _ = writeln!(out, "# family {} params \"{}\"", s.family, s.params);
        let _ = writeln!(
            out,
            "# S {} k {} eta {} resolution {} node_budget {} refine_min {}",
            s.s,
            s.k,
            s.eta,
            s.options.resolution.unwrap_or(DEFAULT_SPACING),
            s.options.node_budget,
            s.refine_min
        );
        for (v, r) in &self.records {
            let _ = writeln!(
                out,
                "# grid {}={} nx {} np {} x [{}, {}] p [{}, {}] negative_nodes {}",
                self.param.name(),
                v,
                r.nx,
                r.np,
                r.xmin,
                r.xmax,
                r.pmin,
                r.pmax,
                r.negative_node_count
            );
        }
        out.push_str("param,xi_min,xi_min_x,xi_min_p,big_xi,lee_jeong\n");
        for (v, r) in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                v, r.xi_min, r.xi_min_x, r.xi_min_p, r.big_xi, r.lee_jeong
            );
        }
        out
    }
}
