//! `qxi`: generate phase-space grids, evaluate the nonclassicality
//! criterion and quantumness measure, and run parameter sweeps.

mod sweep;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qxi::grid::{auto_geometry_with, read_grid, write_grid, GridOptions};
use qxi::nonclassicality::xi_min_refined;
use qxi::{
    big_xi, loss_channel, measure, smooth, wigner, xi_min, xi_sk_field, Criterion, Field, Order,
    StateSpec,
};
use serde_json::{json, Map, Value};

use sweep::{SweepParam, SweepRange};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(
    name = "qxi",
    version,
    about = "Phase-space nonclassicality criterion and quantumness measure"
)]
struct Cli {
    /// Largest allowed grid (nx·np).
    #[arg(long, global = true, env = "QXI_NODE_BUDGET", default_value_t = qxi::DEFAULT_NODE_BUDGET)]
    node_budget: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the Wigner (or smoothed) grid of a state as PSGRID.
    State(StateArgs),
    /// Write the criterion field ξ^[S,k] as PSGRID and print its minimum.
    Xi(XiArgs),
    /// Print the measure report of a state as JSON.
    Measure(MeasureArgs),
    /// Measure a one-parameter family and print CSV.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone)]
struct StateSource {
    /// State family: vacuum, coherent, squeezed, cat (odd_cat), even_cat,
    /// fock, impure_squeezed or mixture.
    #[arg(long)]
    family: Option<String>,
    /// Comma separated key=value list, e.g. `sigma=2.335` or `x0=6,xc=1`.
    /// For mixtures: `0.5*coherent(xc=4);0.5*coherent(xc=-4)`.
    #[arg(long, default_value = "")]
    params: String,
    /// Loss-channel transmissivity η ∈ (0, 1] applied to the Wigner grid.
    #[arg(long, default_value_t = 1.0)]
    eta: f64,
    /// Base node spacing (family fine-structure limits still apply).
    #[arg(long)]
    resolution: Option<f64>,
}

#[derive(Args, Debug, Clone, Copy)]
struct CriterionArgs {
    /// Order S ≤ 0 of the criterion.
    #[arg(long = "S", default_value_t = 0.0, allow_negative_numbers = true)]
    s: f64,
    /// Splitting k ∈ (0, 1).
    #[arg(long, default_value_t = 0.5)]
    k: f64,
}

#[derive(Args, Debug)]
struct StateArgs {
    #[command(flatten)]
    source: StateSource,
    /// Smooth to this order S ≤ 0 (0 is the Wigner function, −1 the Husimi).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    order: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct XiArgs {
    /// Wigner-order PSGRID input instead of `--family`.
    #[arg(long = "in", conflicts_with = "family")]
    input: Option<PathBuf>,
    #[command(flatten)]
    source: StateSource,
    #[command(flatten)]
    criterion: CriterionArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    refine_min: bool,
}

#[derive(Args, Debug)]
struct MeasureArgs {
    #[arg(long = "in", conflicts_with = "family")]
    input: Option<PathBuf>,
    #[command(flatten)]
    source: StateSource,
    #[command(flatten)]
    criterion: CriterionArgs,
    /// Locate ξ₋ between nodes with a parabola fit.
    #[arg(long)]
    refine_min: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    source: StateSource,
    #[command(flatten)]
    criterion: CriterionArgs,
    #[arg(long, value_enum)]
    param: SweepParam,
    #[arg(long, allow_negative_numbers = true, requires_all = ["to", "steps"], conflicts_with = "values")]
    from: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    to: Option<f64>,
    /// Number of evenly spaced values, endpoints included.
    #[arg(long)]
    steps: Option<usize>,
    /// Explicit comma separated values, strictly increasing.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    values: Option<Vec<f64>>,
    #[arg(long)]
    refine_min: bool,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure classes, mapped onto exit codes.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Numeric(String),
}

impl From<qxi::Error> for Failure {
    fn from(e: qxi::Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

impl From<qxi::PsgridError> for Failure {
    fn from(e: qxi::PsgridError) -> Self {
        Failure::Numeric(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Numeric(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let budget = cli.node_budget;
    match cli.command {
        Command::State(args) => cmd_state(&args, budget),
        Command::Xi(args) => cmd_xi(&args, budget),
        Command::Measure(args) => cmd_measure(&args, budget),
        Command::Sweep(args) => cmd_sweep(&args, budget),
    }
}

impl StateSource {
    fn spec(&self) -> CliResult<StateSpec> {
        let family = self
            .family
            .as_deref()
            .ok_or_else(|| Failure::Usage("one of `--family` or `--in` is required".into()))?;
        Ok(StateSpec::parse(family, &self.params)?)
    }

    fn options(&self, node_budget: usize) -> GridOptions {
        GridOptions {
            resolution: self.resolution,
            node_budget,
        }
    }
}

/// Wigner grid of `spec` on its automatic window, passed through the loss
/// channel when `eta < 1`.
pub(crate) fn lossy_wigner(
    spec: &StateSpec,
    eta: f64,
    options: &GridOptions,
) -> qxi::Result<Field> {
    let g = auto_geometry_with(spec, options)?;
    let w = wigner(spec, &g)?;
    if eta == 1.0 {
        Ok(w)
    } else {
        loss_channel(&w, eta)
    }
}

fn load_wigner(
    input: &Option<PathBuf>,
    source: &StateSource,
    budget: usize,
) -> CliResult<(Field, Value)> {
    match input {
        Some(path) => {
            let field: Field = read_grid(path)?;
            if !field.order().is_wigner() {
                return Err(Failure::Numeric(
                    "measure requires a Wigner-order grid".into(),
                ));
            }
            Ok((field, json!({ "input": path.display().to_string() })))
        }
        None => {
            let spec = source.spec()?;
            let options = source.options(budget);
            let field = lossy_wigner(&spec, source.eta, &options)?;
            Ok((field, source_provenance(&spec, source, &options)))
        }
    }
}

fn source_provenance(spec: &StateSpec, source: &StateSource, options: &GridOptions) -> Value {
    json!({
        "family": spec.family.tag(),
        "params": spec.params_string(),
        "eta": source.eta,
        "resolution": options.resolution.unwrap_or(qxi::grid::DEFAULT_SPACING),
        "node_budget": options.node_budget,
    })
}

fn criterion(args: &CriterionArgs) -> CliResult<Criterion> {
    Ok(Criterion::new(args.s, args.k)?)
}

fn geometry_summary(field: &Field) -> String {
    let g = field.geometry();
    let order = match field.order() {
        Order::Distribution(s) => s.to_string(),
        Order::Derived => "derived".into(),
    };
    format!(
        "nx {} np {} x [{}, {}] p [{}, {}] dx {} dp {} order {} integral {:.12}",
        g.nx(),
        g.np(),
        g.xmin(),
        g.xmax(),
        g.pmin(),
        g.pmax(),
        g.dx(),
        g.dp(),
        order,
        qxi::integrate(field)
    )
}

fn cmd_state(args: &StateArgs, budget: usize) -> CliResult<()> {
    let spec = args.source.spec()?;
    let w = lossy_wigner(&spec, args.source.eta, &args.source.options(budget))?;
    let field = if args.order == 0.0 {
        w
    } else {
        smooth(&w, args.order)?
    };
    write_grid(&field, &args.out)?;
    println!("{spec} eta {} -> {}", args.source.eta, args.out.display());
    println!("{}", geometry_summary(&field));
    Ok(())
}

fn cmd_xi(args: &XiArgs, budget: usize) -> CliResult<()> {
    let (w, provenance) = load_wigner(&args.input, &args.source, budget)?;
    let params = criterion(&args.criterion)?;
    let xi = xi_sk_field(&w, &params)?;
    if let Some(out) = &args.out {
        write_grid(&xi, out)?;
    }
    let min = if args.refine_min {
        xi_min_refined(&xi)
    } else {
        xi_min(&xi)
    };
    let mut obj = Map::new();
    obj.insert("xi_min".into(), json!(min.value));
    obj.insert("xi_min_x".into(), json!(min.x));
    obj.insert("xi_min_p".into(), json!(min.p));
    obj.insert("big_xi".into(), json!(big_xi(&xi)));
    obj.insert("S".into(), json!(params.s()));
    obj.insert("k".into(), json!(params.k()));
    obj.insert("refine_min".into(), json!(args.refine_min));
    merge(&mut obj, provenance);
    obj.insert("version".into(), json!(VERSION));
    print_json(&Value::Object(obj))
}

fn cmd_measure(args: &MeasureArgs, budget: usize) -> CliResult<()> {
    let (w, provenance) = load_wigner(&args.input, &args.source, budget)?;
    let report = measure(&w, &criterion(&args.criterion)?, args.refine_min)?;
    let Value::Object(mut obj) = serde_json::to_value(report).expect("report serializes") else {
        unreachable!("MeasureReport is a struct");
    };
    obj.insert("refine_min".into(), json!(args.refine_min));
    merge(&mut obj, provenance);
    obj.insert("version".into(), json!(VERSION));
    print_json(&Value::Object(obj))
}

fn cmd_sweep(args: &SweepArgs, budget: usize) -> CliResult<()> {
    let range = match (&args.values, args.from, args.to, args.steps) {
        (Some(values), None, None, None) => SweepRange::List(values.clone()),
        (None, Some(from), Some(to), Some(steps)) => SweepRange::Linear { from, to, steps },
        _ => {
            return Err(Failure::Usage(
                "give either `--from --to --steps` or `--values`".into(),
            ))
        }
    };
    let values = range.values(args.param).map_err(Failure::Usage)?;
    let base = args
        .source
        .family
        .as_deref()
        .ok_or_else(|| Failure::Usage("`--family` is required".into()))?;
    let setup = sweep::SweepSetup {
        family: base.to_string(),
        params: args.source.params.clone(),
        eta: args.source.eta,
        s: args.criterion.s,
        k: args.criterion.k,
        options: args.source.options(budget),
        refine_min: args.refine_min,
    };
    let result = sweep::run(&setup, args.param, &values)?;
    let csv = result.to_csv(VERSION);
    match &args.out {
        Some(path) => std::fs::write(path, csv)?,
        None => std::io::stdout().lock().write_all(csv.as_bytes())?,
    }
    Ok(())
}

fn merge(obj: &mut Map<String, Value>, extra: Value) {
    if let Value::Object(extra) = extra {
        obj.extend(extra);
    }
}

fn print_json(v: &Value) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v).map_err(|e| Failure::Numeric(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}
