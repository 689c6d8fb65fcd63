use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use tube_rupture::experiments::{self, Range, RunManifest, SectionOptions, SweepSpec, TABLE1_EPS};
use tube_rupture::integrator::IntegratorConfig;
use tube_rupture::rupture::{predict, tau_rupt_closed};
use tube_rupture::{io, Driver, Error, SystemParams};

const EXIT_USAGE: u8 = 1;
const EXIT_DOMAIN: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
const THREADS_ENV: &str = "TUBE_RUPTURE_THREADS";

/// Invariant-tube rupture predictor and simulator.
#[derive(Parser)]
#[command(name = "tube-rupture", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form rupture prediction as JSON.
    Predict(PredictArgs),
    /// Integrate one trajectory and export the time series.
    Simulate(SimulateArgs),
    /// Analytic vs numeric rupture times over a list of ε.
    Table1(Table1Args),
    /// Closed-form n_crit over an (ε, z0) grid.
    Sweep(SweepArgs),
    /// Level sets of the sampled invariant through the initial point.
    Sections(SectionsArgs),
    /// Rasterize the validity region and trace its boundary.
    Validity(ValidityArgs),
    /// Validate a CSV or JSON file produced by this tool.
    Check(CheckArgs),
}

#[derive(Args, Serialize, Deserialize)]
struct ParamArgs {
    #[arg(long, default_value_t = 1.0)]
    y0: f64,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    #[arg(long, default_value_t = 0.2, allow_negative_numbers = true)]
    z0: f64,
}

impl ParamArgs {
    fn params(&self) -> tube_rupture::Result<SystemParams> {
        SystemParams::new(self.y0, self.eps, self.z0)
    }
}

#[derive(Args, Serialize, Deserialize)]
struct IntegratorArgs {
    #[arg(long, default_value_t = 1e-10)]
    rel_tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    abs_tol: f64,
    #[arg(long, default_value_t = 1e6)]
    blowup_threshold: f64,
    #[arg(long, default_value = "second-order")]
    driver: Driver,
}

impl IntegratorArgs {
    fn config(&self) -> IntegratorConfig {
        IntegratorConfig {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            blowup_threshold: self.blowup_threshold,
            driver: self.driver,
            ..Default::default()
        }
    }
}

#[derive(Args, Serialize, Deserialize)]
struct PredictArgs {
    #[command(flatten)]
    #[serde(flatten)]
    params: ParamArgs,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON object whose keys override the flags.
    #[arg(long)]
    #[serde(skip)]
    json_config: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize)]
struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 8000.0)]
    tau_end: f64,
    /// Keep every stride-th accepted step as a dense row.
    #[arg(long, default_value_t = 1)]
    stride: usize,
    #[command(flatten)]
    #[serde(flatten)]
    integrator: IntegratorArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Summary JSON path (default: next to --out, else stderr).
    #[arg(long)]
    summary: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    json_config: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize)]
struct Table1Args {
    #[arg(long, default_value_t = experiments::TABLE1_Y0)]
    y0: f64,
    #[arg(long, default_value_t = experiments::TABLE1_Z0)]
    z0: f64,
    #[arg(long, value_delimiter = ',', default_values_t = TABLE1_EPS)]
    eps_list: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    integrator: IntegratorArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    json_config: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize)]
struct SweepArgs {
    #[arg(long, default_value_t = 1.0)]
    y0: f64,
    /// lo:hi:count
    #[arg(long, default_value = "0.025:0.10:25")]
    eps: String,
    /// lo:hi:count
    #[arg(long, default_value = "0.1:0.4:25")]
    z0: String,
    /// Also integrate every cell up to --tau-cap.
    #[arg(long)]
    with_numeric: bool,
    #[arg(long, default_value_t = 0.0)]
    tau_cap: f64,
    #[command(flatten)]
    #[serde(flatten)]
    integrator: IntegratorArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    json_config: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize)]
struct SectionsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    params: ParamArgs,
    /// Sample indices, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    n: Vec<i64>,
    #[arg(long, default_value_t = experiments::SECTION_RESOLUTION)]
    resolution: usize,
    /// Window half-width (default 3·max(r*, |z0|)).
    #[arg(long)]
    half_width: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    json_config: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize)]
struct ValidityArgs {
    /// lo:hi
    #[arg(long, default_value = "0.5:2.0")]
    y0: String,
    /// lo:hi
    #[arg(long, default_value = "0.01:0.5")]
    z0: String,
    /// Points per axis.
    #[arg(long, default_value_t = 201)]
    resolution: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Boundary CSV path (default: boundary.csv next to --out).
    #[arg(long)]
    boundary: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    json_config: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize)]
struct CheckArgs {
    file: PathBuf,
    #[arg(long)]
    #[serde(skip)]
    json_config: Option<PathBuf>,
}

struct Failure {
    code: u8,
    kind: String,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_analytic_domain() {
            EXIT_DOMAIN
        } else {
            match e {
                Error::InvalidParams(_) | Error::InvalidConfig(_) | Error::Schema(_) => EXIT_USAGE,
                _ => EXIT_NUMERIC,
            }
        };
        Failure { code, kind: e.kind().to_owned(), message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, kind: "Usage".into(), message: message.into() }
}

type CmdResult = Result<u8, Failure>;

/// Overlay the keys of a JSON object file onto the parsed flags.
fn merge_config<T: Serialize + DeserializeOwned>(args: T, path: Option<&Path>) -> Result<T, Failure> {
    let Some(path) = path else { return Ok(args) };
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let overrides: Value = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let Value::Object(overrides) = overrides else {
        return Err(usage("--json-config must contain a JSON object"));
    };
    let mut merged = serde_json::to_value(&args).map_err(|e| usage(e.to_string()))?;
    let fields = merged.as_object_mut().expect("argument structs serialize to objects");
    for (key, value) in overrides {
        if !fields.contains_key(&key) {
            return Err(usage(format!("unknown key '{key}' in --json-config")));
        }
        fields.insert(key, value);
    }
    serde_json::from_value(merged).map_err(|e| usage(format!("--json-config: {e}")))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(p) => io::write_atomic(p, bytes)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes).map_err(Error::from)?;
        }
    }
    Ok(())
}

fn write_manifest(out: Option<&Path>, manifest: RunManifest, started: Instant, extra: &[&Path]) -> Result<(), Failure> {
    if let Some(out) = out {
        let mut outputs = vec![out.display().to_string()];
        outputs.extend(extra.iter().map(|p| p.display().to_string()));
        io::write_json(&out.with_extension("manifest.json"), &manifest.finish(started, outputs))?;
    }
    Ok(())
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn parse_range(s: &str, name: &str) -> Result<Range, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || usage(format!("--{name} expects lo:hi:count, got '{s}'"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo = parts[0].parse().map_err(|_| bad())?;
    let hi = parts[1].parse().map_err(|_| bad())?;
    let count = parts[2].parse().map_err(|_| bad())?;
    let r = Range::new(lo, hi, count);
    r.validate(name)?;
    Ok(r)
}

fn parse_interval(s: &str, name: &str) -> Result<(f64, f64), Failure> {
    let bad = || usage(format!("--{name} expects lo:hi, got '{s}'"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    Ok((lo.parse().map_err(|_| bad())?, hi.parse().map_err(|_| bad())?))
}

fn cmd_predict(args: PredictArgs) -> CmdResult {
    let json_config = args.json_config.clone();
    let args = merge_config(args, json_config.as_deref())?;
    let started = Instant::now();
    let report = predict(&args.params.params()?)?;
    if !report.valid {
        eprintln!(
            "warning: (y0, z0) = ({}, {}) is outside the validity region: y0 (y0 - C^(1/3)) = {} >= 1",
            args.params.y0, args.params.z0, report.validity.value
        );
    }
    emit(args.out.as_deref(), &io::json_bytes(&report)?)?;
    write_manifest(args.out.as_deref(), RunManifest::new("predict", to_json(&args.params), Value::Null), started, &[])?;
    Ok(0)
}

fn cmd_simulate(args: SimulateArgs) -> CmdResult {
    let json_config = args.json_config.clone();
    let args = merge_config(args, json_config.as_deref())?;
    let started = Instant::now();
    let params = args.params.params()?;
    let config = args.integrator.config();
    let run = experiments::simulate(&params, &config, args.tau_end, args.stride)?;
    emit(args.out.as_deref(), &io::simulation_csv(&run)?)?;

    let summary = json!({
        "params": params,
        "config": config,
        "tau_end": args.tau_end,
        "stride": args.stride,
        "termination": run.termination,
        "tau_numeric": run.tau_numeric,
        "tau_rupt_closed": tau_rupt_closed(&params).ok(),
        "k_ref": run.k_ref,
        "max_abs_grid_drift": run.max_abs_grid_drift,
        "rows": run.records.len(),
        "stats": run.stats,
    });
    let summary_path = args.summary.clone().or_else(|| args.out.as_ref().map(|o| o.with_extension("summary.json")));
    match &summary_path {
        Some(p) => io::write_json(p, &summary)?,
        None => eprintln!("{summary}"),
    }
    let extra: Vec<&Path> = summary_path.as_deref().into_iter().collect();
    let manifest = RunManifest::new("simulate", to_json(&args.params), to_json(&config));
    write_manifest(args.out.as_deref(), manifest, started, &extra)?;

    if run.termination.is_failure() {
        let kind = run.termination.name();
        eprintln!("{}", json!({"error": kind, "message": format!("integration stopped: {kind}")}));
        return Ok(EXIT_NUMERIC);
    }
    Ok(0)
}

fn cmd_table1(args: Table1Args) -> CmdResult {
    let json_config = args.json_config.clone();
    let args = merge_config(args, json_config.as_deref())?;
    let started = Instant::now();
    let config = args.integrator.config();
    let rows = experiments::table1(args.y0, args.z0, &args.eps_list, &config)?;
    emit(args.out.as_deref(), &io::table1_csv(&rows)?)?;
    let manifest = RunManifest::new(
        "table1",
        json!({"y0": args.y0, "z0": args.z0, "eps_list": args.eps_list, "rows": rows}),
        to_json(&config),
    );
    write_manifest(args.out.as_deref(), manifest, started, &[])?;
    Ok(if rows.iter().any(|r| r.termination.is_failure()) { EXIT_NUMERIC } else { 0 })
}

fn cmd_sweep(args: SweepArgs) -> CmdResult {
    let json_config = args.json_config.clone();
    let args = merge_config(args, json_config.as_deref())?;
    let started = Instant::now();
    let spec = SweepSpec {
        y0: args.y0,
        eps_range: parse_range(&args.eps, "eps")?,
        z0_range: parse_range(&args.z0, "z0")?,
        with_numeric: args.with_numeric,
        tau_cap: args.tau_cap,
    };
    let config = args.integrator.config();
    let surface = experiments::rupture_surface(&spec, &config)?;
    emit(args.out.as_deref(), &io::sweep_csv(&surface)?)?;
    let manifest = RunManifest::new(
        "sweep",
        json!({"spec": spec, "diagnostics": surface.diagnostics}),
        if spec.with_numeric { to_json(&config) } else { Value::Null },
    );
    write_manifest(args.out.as_deref(), manifest, started, &[])?;
    Ok(0)
}

fn cmd_sections(args: SectionsArgs) -> CmdResult {
    let json_config = args.json_config.clone();
    let args = merge_config(args, json_config.as_deref())?;
    let started = Instant::now();
    let params = args.params.params()?;
    let opts = SectionOptions { resolution: args.resolution, half_width: args.half_width, ..Default::default() };
    let sections = experiments::tube_sections(&params, &args.n, &opts)?;
    emit(args.out.as_deref(), &io::sections_csv(&sections)?)?;
    let closed: Vec<Value> = sections
        .iter()
        .map(|s| json!({"n": s.n, "k_ref": s.k_ref, "open": s.is_open()}))
        .collect();
    let manifest = RunManifest::new(
        "sections",
        json!({"params": params, "n": args.n, "resolution": args.resolution,
               "half_width": opts.half_width.unwrap_or_else(|| experiments::section_half_width(&params)),
               "sections": closed}),
        Value::Null,
    );
    write_manifest(args.out.as_deref(), manifest, started, &[])?;
    Ok(0)
}

fn cmd_validity(args: ValidityArgs) -> CmdResult {
    let json_config = args.json_config.clone();
    let args = merge_config(args, json_config.as_deref())?;
    let started = Instant::now();
    let y0 = parse_interval(&args.y0, "y0")?;
    let z0 = parse_interval(&args.z0, "z0")?;
    let raster = experiments::validity_raster(y0, z0, args.resolution)?;
    emit(args.out.as_deref(), &io::validity_csv(&raster)?)?;
    let boundary = args.boundary.clone().or_else(|| {
        args.out.as_ref().map(|o| o.parent().unwrap_or(Path::new("")).join("boundary.csv"))
    });
    if let Some(b) = &boundary {
        io::write_atomic(b, &io::boundary_csv(&raster.boundary)?)?;
    }
    let manifest = RunManifest::new(
        "validity",
        json!({"y0": y0, "z0": z0, "resolution": args.resolution, "reference": raster.reference}),
        Value::Null,
    );
    let extra: Vec<&Path> = boundary.as_deref().into_iter().collect();
    write_manifest(args.out.as_deref(), manifest, started, &extra)?;
    Ok(0)
}

fn cmd_check(args: CheckArgs) -> CmdResult {
    let json_config = args.json_config.clone();
    let args = merge_config(args, json_config.as_deref())?;
    let report = io::check_file(&args.file)?;
    println!("{}", json!({"file": args.file, "schema": report.schema, "rows": report.rows}));
    Ok(0)
}

fn init_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| usage(format!("{THREADS_ENV} must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| usage(e.to_string()))
}

fn run(cli: Cli) -> CmdResult {
    init_threads()?;
    match cli.command {
        Command::Predict(a) => cmd_predict(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Table1(a) => cmd_table1(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Sections(a) => cmd_sections(a),
        Command::Validity(a) => cmd_validity(a),
        Command::Check(a) => cmd_check(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{}", json!({"error": f.kind, "message": f.message}));
            ExitCode::from(f.code)
        }
    }
}
