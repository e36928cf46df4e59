//! Command-line front end. `dispatch` parses arguments, runs one subcommand
//! and maps the outcome to an exit code: 0 on success, 1 on usage or
//! validation errors, 2 when a sweep verdict fails.

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::convergence::{self, SweepPlan, SweepResult};
use crate::families::{self, FamilyKind, FamilySpec};
use crate::fundamental::{build_lhat, FrequencyGrid, FundamentalFunction};
use crate::interpolation::{self, LatticeData, Norm, XGrid};
use crate::io::{coordinate_names, format_float, point_rows, write_csv};
use crate::paleywiener::{self, BandlimitedFunction, ComboTerm};
use crate::specfun::{self, BesselEvalConfig};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Parser)]
#[command(name = "cardinal", version, about = "Cardinal interpolation on the integer lattice")]
struct Cli {
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    /// Seed for randomized data suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Special functions.
    Specfun {
        #[command(subcommand)]
        op: SpecfunOp,
    },
    /// Hypothesis and regularity report for a parameter sweep, as JSON.
    Check(CheckArgs),
    /// Sample the transform of the fundamental function and evaluate it.
    Fundamental(FundamentalArgs),
    /// Lattice samples of a band-limited test function.
    Pwgen(PwgenArgs),
    /// Interpolate lattice data from a CSV file.
    Interp(InterpArgs),
    /// Run a parameter sweep plan.
    Sweep(SweepArgs),
    /// Seeded L^p stability suite on random window data.
    Stability(StabilityArgs),
}

#[derive(Debug, Subcommand)]
enum SpecfunOp {
    /// Modified Bessel function of the second kind.
    Eval {
        #[arg(long, allow_negative_numbers = true)]
        order: f64,
        #[arg(long)]
        arg: f64,
        /// Print e^arg K_order(arg) instead.
        #[arg(long)]
        scaled: bool,
    },
}

#[derive(Debug, Clone, Args)]
struct FamilyArgs {
    /// polyharmonic, gaussian, multiquadric_vary_alpha or multiquadric_vary_c.
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long)]
    decay_exponent: Option<f64>,
}

impl FamilyArgs {
    fn spec(&self) -> Result<FamilySpec, String> {
        let kind = FamilyKind::parse(&self.family)
            .ok_or_else(|| format!("unknown family '{}'", self.family))?;
        let spec = FamilySpec {
            kind,
            dim: self.dim,
            k: self.k,
            alpha: self.alpha,
            c: self.c,
            decay_exponent: self.decay_exponent,
        };
        spec.validate().map_err(|e| e.to_string())?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Args)]
struct GridArgs {
    #[arg(long = "grid-J")]
    grid_j: Option<u32>,
    #[arg(long = "grid-M")]
    grid_m: Option<u32>,
    /// Put a node at the origin instead of offsetting by half a step.
    #[arg(long)]
    no_offset: bool,
}

impl GridArgs {
    fn grid(&self, dim: usize) -> Result<FrequencyGrid, String> {
        let d = FrequencyGrid::default_for(dim);
        FrequencyGrid::new(
            dim,
            self.grid_j.unwrap_or(d.cells_j),
            self.grid_m.unwrap_or(d.points_per_cell),
            !self.no_offset,
        )
        .map_err(|e| e.to_string())
    }
}

#[derive(Debug, Args)]
struct CheckArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Comma-separated, strictly increasing values of the swept parameter.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    params: Vec<f64>,
    /// Grid points per axis over the closed base cell.
    #[arg(long, default_value_t = 101)]
    grid: usize,
    #[arg(long, default_value_t = 10)]
    jmax: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FundamentalArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// CSV of the sampled transform.
    #[arg(long)]
    emit: Option<PathBuf>,
    /// CSV of L on a spatial grid.
    #[arg(long)]
    emit_spatial: Option<PathBuf>,
    #[arg(long, default_value_t = 8.0)]
    xmax: f64,
    #[arg(long, default_value_t = 0.01)]
    xstep: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PwKind {
    Sinc,
    Fejer,
    Combo,
}

#[derive(Debug, Args)]
struct PwgenArgs {
    #[arg(long, value_enum)]
    kind: PwKind,
    #[arg(long, default_value_t = 32)]
    window: u32,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// JSON list of [j, c] pairs for --kind combo.
    #[arg(long)]
    coeffs: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct InterpArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// CSV with integer coordinates then a value, header row first.
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value_t = 8.0)]
    xmax: f64,
    #[arg(long, default_value_t = 0.02)]
    xstep: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    plan: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    verdict: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct StabilityArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, default_value_t = 32)]
    window: u32,
    #[arg(long, default_value_t = 20)]
    vectors: usize,
    /// Spatial quadrature step; a power of two keeps kernel reuse exact.
    #[arg(long, default_value_t = 0.03125)]
    xstep: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Resolved invocation settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub subcommand: String,
    pub verbosity: u8,
    pub seed: u64,
    pub outputs: Vec<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn fail<E: std::fmt::Display>(e: E) -> Failure {
    Failure::validation(e.to_string())
}

fn init_logging(verbosity: u8) {
    let level = match verbosity {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new().filter_level(level).try_init();
}

/// Runs the command line `args` (without the program name) and returns the
/// process exit code.
pub fn dispatch<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("cardinal"))
        .chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    init_logging(cli.verbose);
    let config = run_config(&cli);
    log::debug!("{config:?}");
    match run(cli.command, &config) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}: {}", config.subcommand, f.message.replace('\n', " "));
            f.code
        }
    }
}

fn run_config(cli: &Cli) -> RunConfig {
    let (name, outputs): (&str, Vec<Option<&PathBuf>>) = match &cli.command {
        Command::Specfun { .. } => ("specfun", vec![]),
        Command::Check(a) => ("check", vec![a.out.as_ref()]),
        Command::Fundamental(a) => ("fundamental", vec![a.emit.as_ref(), a.emit_spatial.as_ref()]),
        Command::Pwgen(a) => ("pwgen", vec![Some(&a.out)]),
        Command::Interp(a) => ("interp", vec![Some(&a.out)]),
        Command::Sweep(a) => ("sweep", vec![a.out.as_ref(), a.verdict.as_ref()]),
        Command::Stability(a) => ("stability", vec![a.out.as_ref()]),
    };
    RunConfig {
        subcommand: name.to_string(),
        verbosity: cli.verbose,
        seed: cli.seed,
        outputs: outputs.into_iter().flatten().cloned().collect(),
    }
}

fn run(command: Command, config: &RunConfig) -> Outcome {
    match command {
        Command::Specfun { op } => run_specfun(op),
        Command::Check(a) => run_check(a),
        Command::Fundamental(a) => run_fundamental(a),
        Command::Pwgen(a) => run_pwgen(a),
        Command::Interp(a) => run_interp(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Stability(a) => run_stability(a, config.seed),
    }
}

fn run_specfun(op: SpecfunOp) -> Outcome {
    let SpecfunOp::Eval { order, arg, scaled } = op;
    let cfg = BesselEvalConfig::default();
    let v = if scaled {
        specfun::bessel_k_scaled(order, arg, &cfg)
    } else {
        specfun::bessel_k(order, arg, &cfg)
    }
    .map_err(fail)?;
    println!("{}", format_float(v));
    Ok(())
}

fn run_check(a: CheckArgs) -> Outcome {
    let base = a.family.spec().map_err(Failure::validation)?;
    if a.params.is_empty() {
        return Err(Failure::validation("--params needs at least one value"));
    }
    let specs: Vec<FamilySpec> = a
        .params
        .iter()
        .map(|&p| base.with_parameter(p))
        .collect::<Result<_, _>>()
        .map_err(fail)?;
    let report = families::regularity_report(&specs, a.grid, a.jmax).map_err(fail)?;
    let json = serde_json::to_string_pretty(&report).map_err(fail)?;
    match a.out {
        Some(p) => write_text(&p, &json),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn write_text(path: &Path, text: &str) -> Outcome {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| fail(format!("{}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, format!("{text}\n")).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn csv_out(path: &Path, header: &[String], rows: &[Vec<String>]) -> Outcome {
    write_csv(path, header, rows).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn build(family: &FamilyArgs, grid: &GridArgs) -> Result<FundamentalFunction, Failure> {
    let spec = family.spec().map_err(Failure::validation)?;
    let grid = grid.grid(spec.dim).map_err(Failure::validation)?;
    build_lhat(&spec, &grid).map_err(fail)
}

/// Header naming the family, e.g. `lhat[gaussian dim=1 alpha=4]`.
fn value_column(prefix: &str, f: &FundamentalFunction) -> String {
    format!("{prefix}[{}]", f.family.describe())
}

fn run_fundamental(a: FundamentalArgs) -> Outcome {
    let f = build(&a.family, &a.grid)?;
    let n = f.dim();
    if let Some(p) = &a.emit {
        let points: Vec<Vec<f64>> = (0..f.normalized_values().len()).map(|i| f.grid_point(i)).collect();
        let mut header = coordinate_names("xi", n);
        header.push(value_column("lhat", &f));
        csv_out(p, &header, &point_rows(&points, &f.lhat_values()))?;
    }
    if let Some(p) = &a.emit_spatial {
        let xs = XGrid::symmetric(n, a.xmax, a.xstep).map_err(fail)?.points();
        let vals = f.eval_L_many(&xs).map_err(fail)?;
        let mut header = coordinate_names("x", n);
        header.push(value_column("L", &f));
        csv_out(p, &header, &point_rows(&xs, &vals))?;
    }
    if a.emit.is_none() && a.emit_spatial.is_none() {
        println!(
            "cardinality deviation (|k| <= 5): {}",
            format_float(f.cardinality_check(5).map_err(fail)?)
        );
        println!("grid tail bound: {}", format_float(f.tail_bound));
    }
    Ok(())
}

fn parse_combo(path: &Path, dim: usize) -> Result<Vec<ComboTerm>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))?;
    let pairs: Vec<(serde_json::Value, f64)> =
        serde_json::from_str(&text).map_err(|e| fail(format!("{}: {e}", path.display())))?;
    pairs
        .into_iter()
        .map(|(j, c)| {
            let j: Vec<i64> = match j {
                serde_json::Value::Number(n) => vec![n.as_i64().ok_or_else(|| fail("lattice coordinates must be integers"))?],
                other => serde_json::from_value(other).map_err(fail)?,
            };
            if j.len() != dim {
                return Err(fail(format!("lattice point {j:?} does not have dimension {dim}")));
            }
            Ok(ComboTerm { j, c })
        })
        .collect()
}

fn run_pwgen(a: PwgenArgs) -> Outcome {
    let f = match a.kind {
        PwKind::Sinc => BandlimitedFunction::tensor_sinc(a.dim),
        PwKind::Fejer => BandlimitedFunction::fejer(a.dim),
        PwKind::Combo => {
            let path = a
                .coeffs
                .as_ref()
                .ok_or_else(|| Failure::validation("--kind combo needs --coeffs"))?;
            BandlimitedFunction::combo(a.dim, parse_combo(path, a.dim)?).map_err(fail)?
        }
    };
    let data = paleywiener::sample_lattice(&f, a.window).map_err(fail)?;
    let mut header = coordinate_names("j", a.dim);
    header.push("value".into());
    let rows: Vec<Vec<String>> = data
        .points()
        .iter()
        .zip(data.values())
        .map(|(j, v)| {
            let mut r: Vec<String> = j.iter().map(|c| c.to_string()).collect();
            r.push(format_float(*v));
            r
        })
        .collect();
    csv_out(&a.out, &header, &rows)
}

/// Reads `j1, …, jn, value` rows; the window is the smallest cube holding them.
pub fn read_lattice_csv(path: &Path) -> Result<LatticeData, String> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut points = Vec::new();
    let mut dim = None;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| format!("{}: {e}", path.display()))?;
        if rec.len() < 2 {
            return Err(format!("{}: rows need coordinates and a value", path.display()));
        }
        let n = rec.len() - 1;
        if *dim.get_or_insert(n) != n {
            return Err(format!("{}: inconsistent column count", path.display()));
        }
        let j: Vec<i64> = rec
            .iter()
            .take(n)
            .map(|s| s.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("{}: bad coordinate: {e}", path.display()))?;
        let v: f64 = rec[n]
            .trim()
            .parse()
            .map_err(|e| format!("{}: bad value: {e}", path.display()))?;
        points.push((j, v));
    }
    let dim = dim.ok_or_else(|| format!("{}: no data rows", path.display()))?;
    let radius = points
        .iter()
        .map(|(j, _)| crate::lattice::sup_norm(j))
        .max()
        .unwrap_or(0)
        .max(1) as u32;
    LatticeData::from_points(dim, radius, &points).map_err(|e| e.to_string())
}

fn run_interp(a: InterpArgs) -> Outcome {
    let data = read_lattice_csv(&a.data).map_err(Failure::validation)?;
    let f = build(&a.family, &a.grid)?;
    let xs = XGrid::symmetric(f.dim(), a.xmax, a.xstep).map_err(fail)?.points();
    let detailed = interpolation::interpolate_grid_detailed(&f, &data, &xs).map_err(fail)?;
    let warned = detailed.iter().filter(|d| d.warning.is_some()).count();
    if warned > 0 {
        log::warn!("{warned} of {} points carry an accuracy warning", xs.len());
    }
    let vals: Vec<f64> = detailed.iter().map(|d| d.value).collect();
    let mut header = coordinate_names("x", f.dim());
    header.push(value_column("interp", &f));
    csv_out(&a.out, &header, &point_rows(&xs, &vals))
}

fn run_sweep(a: SweepArgs) -> Outcome {
    let plan = SweepPlan::from_json_file(&a.plan).map_err(fail)?;
    let result = convergence::run_sweep(&plan).map_err(fail)?;
    let verdict = convergence::judge(&result, &plan);
    match &a.out {
        Some(p) => result.write_csv(p).map_err(|e| fail(format!("{}: {e}", p.display())))?,
        None => {
            println!("{}", SweepResult::csv_header().join(","));
            for r in result.csv_rows() {
                println!("{}", r.join(","));
            }
        }
    }
    if let Some(p) = &a.verdict {
        write_text(p, &serde_json::to_string_pretty(&verdict).map_err(fail)?)?;
    }
    for c in &verdict.checks {
        let tag = match c.pass {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "SKIP",
        };
        eprintln!("[{tag}] {}: {}", c.name, c.detail);
    }
    if verdict.pass {
        Ok(())
    } else {
        Err(Failure {
            code: 2,
            message: format!(
                "verdict FAIL: {}",
                verdict.failed().iter().map(|c| c.name.as_str()).collect::<Vec<_>>().join(", ")
            ),
        })
    }
}

fn run_stability(a: StabilityArgs, seed: u64) -> Outcome {
    let f = build(&a.family, &a.grid)?;
    let datas = interpolation::random_window_data(f.dim(), a.window, a.vectors, seed).map_err(fail)?;
    let domain = XGrid::symmetric(f.dim(), a.window as f64 + 4.0, a.xstep).map_err(fail)?;
    let ps = [Norm::L1, Norm::L2, Norm::Linf];
    let ratios = interpolation::lp_stability_suite(&f, &datas, &ps, &domain).map_err(fail)?;
    let header: Vec<String> = ["vector", "ratio_p1", "ratio_p2", "ratio_pinf"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let rows: Vec<Vec<String>> = ratios
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = vec![i.to_string()];
            row.extend(r.iter().map(|v| format_float(*v)));
            row
        })
        .collect();
    match &a.out {
        Some(p) => csv_out(p, &header, &rows),
        None => {
            println!("{}", header.join(","));
            for r in rows {
                println!("{}", r.join(","));
            }
            Ok(())
        }
    }
}
