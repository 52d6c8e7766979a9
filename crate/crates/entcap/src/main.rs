//! Command-line front end: single-point verdicts, phase-diagram sweeps,
//! boundary extraction, and predicate-vs-simulation validation.
//!
//! Exit codes: 0 entangled / success, 1 separable (or validation
//! disagreement), 2 boundary or indeterminate, 3 no sign change in a
//! boundary bracket, 64 usage or runtime error.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use entcap::noisechan::AveragingMethod;
use entcap::predicates::Classification;
use entcap::scenarios::{
    boundary_bisect, run_scenario, validate, ScenarioConfig, ScenarioId, SweepAxis,
};
use entcap::sweep::{
    run_sweep, AxisName, AxisSpec, FixedParams, OutputFormat, SweepGrid,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::HashMap;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_USAGE: u8 = 64;
const OUTPUT_DIR_VAR: &str = "ENTCAP_OUTPUT_DIR";

#[derive(Parser)]
#[command(name = "entcap", version, disable_version_flag = true)]
#[command(about = "Entanglement thresholds of noisy two-qubit exchange gates")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one noisy pipeline and report its entanglement verdict
    Verdict(PointArgs),
    /// Evaluate a parameter grid and write CSV/JSON plus a manifest
    Sweep(SweepArgs),
    /// Bisect the entanglement transition along one axis
    Boundary(BoundaryArgs),
    /// Cross-check the closed-form predicate against the simulated verdict
    Validate(ValidateArgs),
    /// Print the artifact version
    Version,
}

#[derive(Args, Clone, Default)]
struct PointArgs {
    #[arg(long)]
    scenario: Option<String>,
    /// Preparation noise width
    #[arg(long)]
    lambda: Option<f64>,
    /// Interaction noise width (tunable scenarios)
    #[arg(long, conflicts_with = "capital_lambda")]
    omega: Option<f64>,
    /// Pulse noise width (untunable scenarios)
    #[arg(long)]
    capital_lambda: Option<f64>,
    /// z = cos(2 theta_minus); xyz-tunable only
    #[arg(long, conflicts_with = "theta_minus")]
    zbar: Option<f64>,
    /// Mean of theta_minus; xyz-tunable only
    #[arg(long)]
    theta_minus: Option<f64>,
    /// phi = J_z tau; xyz-tunable only
    #[arg(long)]
    phi: Option<f64>,
    /// closed-form | quadrature[:nodes] | monte-carlo[:samples[:seed]]
    #[arg(long)]
    method: Option<String>,
    /// Override the Monte Carlo seed
    #[arg(long)]
    seed: Option<u64>,
    /// key=value file mirroring these flags; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Emit the report as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Axis spec name=start:stop:step (repeat for up to 3 axes)
    #[arg(long = "grid")]
    grid: Vec<String>,
    #[arg(long)]
    output: Option<PathBuf>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct BoundaryArgs {
    #[command(flatten)]
    point: PointArgs,
    /// lambda | omega | capital-lambda
    #[arg(long)]
    axis: String,
    /// Search bracket lo:hi
    #[arg(long)]
    bracket: String,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Axis spec name=start:stop:step (repeat); alternative to --samples
    #[arg(long = "grid")]
    grid: Vec<String>,
    /// Number of random parameter points
    #[arg(long, conflicts_with = "grid")]
    samples: Option<usize>,
    /// Exclude points with |predicate margin| below this band
    #[arg(long, default_value_t = 1e-3)]
    guard: f64,
}

type CliError = entcap::Error;

fn err(msg: impl Into<String>) -> CliError {
    CliError::InvalidArgument(msg.into())
}

/// key=value lines; '#' starts a comment.
fn load_config_file(path: &PathBuf) -> Result<HashMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| err(format!("cannot read {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| err(format!("{}:{}: expected key=value", path.display(), idx + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// Point flags with config-file fallbacks applied.
struct Resolved {
    config: ScenarioConfig,
    file: HashMap<String, String>,
}

fn parse_from<T: std::str::FromStr>(map: &HashMap<String, String>, key: &str)
    -> Result<Option<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    match map.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|e| err(format!("config key '{key}': {e}"))),
    }
}

fn resolve(args: &PointArgs) -> Result<Resolved, CliError> {
    let file = match &args.config {
        Some(p) => load_config_file(p)?,
        None => HashMap::new(),
    };
    let scenario: ScenarioId = args
        .scenario
        .clone()
        .or_else(|| file.get("scenario").cloned())
        .ok_or_else(|| err("missing --scenario"))?
        .parse()?;

    let lambda = args
        .lambda
        .or(parse_from(&file, "lambda")?)
        .unwrap_or(0.0);
    let omega: Option<f64> = args.omega.or(parse_from(&file, "omega")?);
    let cap: Option<f64> = args.capital_lambda.or(parse_from(&file, "capital-lambda")?);
    if omega.is_some() && cap.is_some() {
        return Err(err("--omega and --capital-lambda are mutually exclusive"));
    }
    if cap.is_some() && !scenario.uses_refocus() {
        return Err(err(format!("--capital-lambda does not apply to {scenario}")));
    }
    let width = omega.or(cap).unwrap_or(0.0);

    let mut cfg = ScenarioConfig::new(scenario, lambda, width)?;

    let zbar: Option<f64> = args.zbar.or(parse_from(&file, "zbar")?);
    let theta_minus: Option<f64> = args.theta_minus.or(parse_from(&file, "theta-minus")?);
    match (zbar, theta_minus) {
        (Some(_), Some(_)) => return Err(err("--zbar and --theta-minus are mutually exclusive")),
        (Some(z), None) => {
            if !(-1.0..=1.0).contains(&z) {
                return Err(err(format!("zbar {z} outside [-1,1]")));
            }
            cfg = cfg.with_theta_minus(0.5 * z.acos())?;
        }
        (None, Some(t)) => cfg = cfg.with_theta_minus(t)?,
        (None, None) => {}
    }
    if let Some(phi) = args.phi.or(parse_from(&file, "phi")?) {
        cfg = cfg.with_phi(phi)?;
    }

    let mut method: AveragingMethod = match args.method.clone().or_else(|| file.get("method").cloned()) {
        Some(m) => m.parse()?,
        None => AveragingMethod::ClosedForm,
    };
    if let Some(seed) = args.seed.or(parse_from(&file, "seed")?) {
        if let AveragingMethod::MonteCarlo { samples, .. } = method {
            method = AveragingMethod::MonteCarlo { samples, seed };
        }
    }
    cfg = cfg.with_method(method);
    Ok(Resolved { config: cfg, file })
}

/// Resolve an output path, honoring the output-directory override variable.
fn output_path(given: Option<PathBuf>, file: &HashMap<String, String>, default: &str) -> PathBuf {
    let path = given
        .or_else(|| file.get("output").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(default));
    match std::env::var_os(OUTPUT_DIR_VAR) {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path,
    }
}

fn class_exit(class: Classification) -> u8 {
    match class {
        Classification::Entangled => 0,
        Classification::Separable => 1,
        Classification::Boundary => 2,
    }
}

fn cmd_verdict(args: &PointArgs) -> Result<u8, CliError> {
    let resolved = resolve(args)?;
    let r = run_scenario(&resolved.config)?;
    let class = if r.verdict.indeterminate {
        Classification::Boundary
    } else if r.verdict.entangled {
        Classification::Entangled
    } else {
        Classification::Separable
    };
    if args.json {
        let report = serde_json::json!({
            "scenario": resolved.config.id.to_string(),
            "class": class,
            "min_pt_eigenvalue": r.verdict.min_pt_eigenvalue,
            "negativity": r.verdict.negativity,
            "predicate_class": r.predicate.class,
            "predicate_margin": r.predicate.margin,
            "initial_entropy_bits": r.initial_entropy_bits,
            "method": r.method.to_string(),
            "elapsed_ms": r.elapsed_ms,
        });
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
    } else {
        println!("scenario:             {}", resolved.config.id);
        println!("class:                {class}");
        println!("min PT eigenvalue:    {:.12e}", r.verdict.min_pt_eigenvalue);
        println!("negativity:           {:.12e}", r.verdict.negativity);
        println!("predicate class:      {}", r.predicate.class);
        println!("predicate margin:     {:.12e}", r.predicate.margin);
        println!("initial entropy bits: {:.12e}", r.initial_entropy_bits);
        println!("method:               {}", r.method);
    }
    Ok(class_exit(class))
}

fn parse_axes(specs: &[String]) -> Result<Vec<AxisSpec>, CliError> {
    specs.iter().map(|s| AxisSpec::parse(s)).collect()
}

fn build_grid(args: &SweepArgs) -> Result<SweepGrid, CliError> {
    let resolved = resolve(&args.point)?;
    let mut grid_specs = args.grid.clone();
    if grid_specs.is_empty() {
        if let Some(v) = resolved.file.get("grid") {
            grid_specs = v.split_whitespace().map(String::from).collect();
        }
    }
    if grid_specs.is_empty() {
        return Err(err("missing --grid"));
    }
    let format = match args
        .format
        .clone()
        .or_else(|| resolved.file.get("format").cloned())
        .as_deref()
    {
        None | Some("csv") => OutputFormat::Csv,
        Some("json") => OutputFormat::Json,
        Some(other) => return Err(err(format!("unknown format '{other}'"))),
    };
    let cfg = &resolved.config;
    let fixed = FixedParams {
        lambda: cfg.prep_width,
        interaction_width: cfg.interaction_width,
        zbar: cfg.mean_theta_minus.map_or(1.0, |t| (2.0 * t).cos()),
        phi: cfg.phi.unwrap_or(0.0),
    };
    Ok(SweepGrid {
        scenario: cfg.id,
        axes: parse_axes(&grid_specs)?,
        fixed,
        method: cfg.method,
        output: output_path(args.output.clone(), &resolved.file, "sweep.csv"),
        format,
    })
}

fn cmd_sweep(args: &SweepArgs) -> Result<u8, CliError> {
    let grid = build_grid(args)?;
    let summary = run_sweep(&grid)?;
    eprintln!(
        "wrote {} points to {} (manifest {})",
        summary.points,
        summary.output.display(),
        summary.manifest.display()
    );
    Ok(0)
}

fn cmd_boundary(args: &BoundaryArgs) -> Result<u8, CliError> {
    let resolved = resolve(&args.point)?;
    let axis = match args.axis.parse::<AxisName>()? {
        AxisName::Lambda => SweepAxis::PrepWidth,
        AxisName::Omega | AxisName::CapitalLambda => SweepAxis::InteractionWidth,
        other => return Err(err(format!("cannot bisect along '{}'", other.as_str()))),
    };
    let (lo, hi) = args
        .bracket
        .split_once(':')
        .and_then(|(a, b)| Some((a.parse::<f64>().ok()?, b.parse::<f64>().ok()?)))
        .ok_or_else(|| err(format!("expected lo:hi bracket, got '{}'", args.bracket)))?;
    match boundary_bisect(&resolved.config, axis, (lo, hi)) {
        Ok(report) => {
            println!("threshold:            {:.6}", report.simulated_threshold);
            match (report.closed_form_threshold, report.deviation) {
                (Some(c), Some(d)) => {
                    println!("closed-form:          {c:.6}");
                    println!("deviation:            {d:.3e}");
                }
                _ => println!("closed-form:          no sign change in bracket"),
            }
            Ok(0)
        }
        Err(CliError::InvalidArgument(msg)) if msg.contains("sign") => {
            eprintln!("no sign change in [{lo}, {hi}]: {msg}");
            Ok(3)
        }
        Err(e) => Err(e),
    }
}

fn cmd_validate(args: &ValidateArgs) -> Result<u8, CliError> {
    let resolved = resolve(&args.point)?;
    let template = &resolved.config;
    let mut configs = Vec::new();
    if let Some(n) = args.samples {
        let seed = args.point.seed.unwrap_or(0);
        let mut rng = StdRng::seed_from_u64(seed);
        for _ in 0..n {
            let mut c = ScenarioConfig::new(
                template.id,
                rng.gen_range(0.0..3.0),
                rng.gen_range(0.0..3.0),
            )?
            .with_method(template.method);
            if template.id.is_xyz() {
                c = c.with_theta_minus(rng.gen_range(-1.6..1.6))?;
            }
            configs.push(c);
        }
    } else if !args.grid.is_empty() {
        let axes = parse_axes(&args.grid)?;
        let grid = SweepGrid {
            scenario: template.id,
            axes,
            fixed: FixedParams {
                lambda: template.prep_width,
                interaction_width: template.interaction_width,
                zbar: template.mean_theta_minus.map_or(1.0, |t| (2.0 * t).cos()),
                phi: template.phi.unwrap_or(0.0),
            },
            method: template.method,
            output: PathBuf::from("unused"),
            format: OutputFormat::Csv,
        };
        grid.validate()?;
        for k in 0..grid.total_points() {
            configs.push(grid.point_config(k)?.0);
        }
    } else {
        return Err(err("need --grid or --samples"));
    }
    let report = validate(&configs, args.guard)?;
    let json = serde_json::json!({
        "scenario": template.id.to_string(),
        "method": template.method.to_string(),
        "guard": args.guard,
        "total": report.total,
        "excluded": report.excluded,
        "disagreements": report.disagreements,
        "max_disagreement_margin": report.max_disagreement_margin,
        "elapsed_ms": report.elapsed_ms,
    });
    println!("{}", serde_json::to_string_pretty(&json).unwrap());
    Ok(if report.agreed() { 0 } else { 1 })
}

fn run() -> Result<u8, CliError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            e.print().ok();
            return Ok(code);
        }
    };
    match &cli.cmd {
        Command::Verdict(args) => cmd_verdict(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Boundary(args) => cmd_boundary(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Version => {
            println!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
