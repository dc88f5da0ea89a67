use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gggv::io::{
    export_csv, export_json, export_trace_csv, import_json, parse_config, write_gg_svg, CircleOverlay, ConfigError,
    ExportError, ExportFormat, RunConfig, SvgError, Workers,
};
use gggv::models::{AnyModel, PointMassConfig};
use gggv::sweep::{run_sweep, SweepOptions};
use gggv::types::{linspace, LimitStatus, SweepGrid};
use gggv::{run_point_detailed, HarnessConfig, PointMass, GRAVITY};

const EXIT_INVALID: u8 = 1;
const EXIT_FAULTED: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "gggv", version, about = "g-g-g-v envelopes by quasi-steady-state ramp steer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a full grid sweep and export the diagram.
    Sweep(SweepArgs),
    /// Render one g-g cross-section of an exported JSON diagram as SVG.
    Slice(SliceArgs),
    /// Check the harness against the closed-form point-mass envelope.
    Validate(ValidateArgs),
    /// Run a single grid point and dump its ramp trace.
    Trace(TraceArgs),
}

#[derive(Args)]
struct Common {
    /// Output directory; overrides the config.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Worker threads or "auto".
    #[arg(long, env = "GGGV_WORKERS")]
    workers: Option<Workers>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    common: Common,
    #[arg(long, value_parser = parse_format)]
    format: Option<ExportFormat>,
    /// Dump the ramp trace of every cell.
    #[arg(long)]
    debug_trace: bool,
}

#[derive(Args)]
struct SliceArgs {
    /// JSON diagram written by `sweep`.
    #[arg(long)]
    diagram: PathBuf,
    #[arg(long)]
    v: f64,
    #[arg(long, allow_hyphen_values = true)]
    a_z: f64,
    /// Output SVG path.
    #[arg(long)]
    out: PathBuf,
    /// Run config; a point-mass model adds the analytic circle.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 1.0)]
    target_jerk: f64,
    /// Number of a_x values in [-30, 20] m/s².
    #[arg(long, default_value_t = 80)]
    count: usize,
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    v: f64,
    #[arg(long, allow_hyphen_values = true)]
    a_z: f64,
    #[arg(long, allow_hyphen_values = true)]
    a_x: f64,
    #[command(flatten)]
    common: Common,
}

fn parse_format(s: &str) -> Result<ExportFormat, String> {
    match s {
        "csv" => Ok(ExportFormat::Csv),
        "json" => Ok(ExportFormat::Json),
        "both" => Ok(ExportFormat::Both),
        _ => Err(format!("expected csv, json or both, got {s:?}")),
    }
}

enum Failure {
    Invalid(String),
    Io(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io { .. } => Failure::Io(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<ExportError> for Failure {
    fn from(e: ExportError) -> Self {
        match e {
            ExportError::Io { .. } => Failure::Io(e.to_string()),
            ExportError::Format(_) => Failure::Invalid(e.to_string()),
        }
    }
}

impl From<SvgError> for Failure {
    fn from(e: SvgError) -> Self {
        match e {
            SvgError::Grid(g) => Failure::Invalid(g.to_string()),
            SvgError::Export(x) => x.into(),
        }
    }
}

fn create_dir(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("cannot create {}: {e}", dir.display())))
}

fn overlay_for(cfg: &RunConfig) -> Option<CircleOverlay> {
    cfg.model.point_mass().map(CircleOverlay::for_point_mass)
}

fn build_model(cfg: &RunConfig) -> Result<AnyModel, Failure> {
    cfg.model.build().map_err(|e| Failure::Invalid(e.to_string()))
}

fn sweep(args: SweepArgs) -> Result<u8, Failure> {
    let cfg = parse_config(&args.config)?;
    let model = build_model(&cfg)?;
    let out = args.common.out_dir.unwrap_or_else(|| cfg.output.dir.clone());
    let format = args.format.unwrap_or(cfg.output.format);
    let debug_trace = args.debug_trace || cfg.output.debug_trace;
    let workers = args.common.workers.unwrap_or(cfg.workers).resolve();
    create_dir(&out)?;

    let options = SweepOptions {
        workers,
        keep_traces: debug_trace,
        config_hash: Some(cfg.hash()),
    };
    let report = run_sweep(|| model.clone(), &cfg.grid, &cfg.harness, &options);
    let diagram = &report.diagram;

    std::fs::write(out.join("config.expanded.json"), cfg.to_expanded_json())
        .map_err(|e| Failure::Io(format!("cannot write expanded config: {e}")))?;
    if format.csv() {
        export_csv(diagram, out.join("diagram.csv"))?;
    }
    if format.json() {
        export_json(diagram, out.join("diagram.json"))?;
    }
    for &(v, a_z) in &cfg.output.svg_slices {
        write_gg_svg(diagram, v, a_z, overlay_for(&cfg), out.join(format!("slice_v{v}_az{a_z}.svg")))?;
    }
    if let Some(traces) = &report.traces {
        let dir = out.join("traces");
        create_dir(&dir)?;
        for (flat, trace) in traces.iter().enumerate() {
            if let Some(trace) = trace {
                let (i, j, k) = cfg.grid.unflatten(flat);
                export_trace_csv(trace, dir.join(format!("trace_{i}_{j}_{k}.csv")))?;
            }
        }
    }

    println!(
        "{} cells in {:.2} s on {} workers: {} understeer, {} oversteer, {} unfeasible, {} faulted",
        cfg.grid.len(),
        report.total_runtime.as_secs_f64(),
        report.workers,
        report.count(LimitStatus::UndersteerLimit),
        report.count(LimitStatus::OversteerLimit),
        report.count(LimitStatus::Unfeasible),
        report.faulted.len(),
    );
    println!("wrote {}", out.display());
    Ok(if report.has_faults() { EXIT_FAULTED } else { 0 })
}

fn slice(args: SliceArgs) -> Result<u8, Failure> {
    let diagram = import_json(&args.diagram)?;
    let overlay = match &args.config {
        Some(path) => overlay_for(&parse_config(path)?),
        None => None,
    };
    write_gg_svg(&diagram, args.v, args.a_z, overlay, &args.out)?;
    println!("wrote {}", args.out.display());
    Ok(0)
}

fn validate(args: ValidateArgs) -> Result<u8, Failure> {
    let pm = PointMassConfig::default();
    let harness = HarnessConfig {
        target_jerk: args.target_jerk,
        ramp_timeout: 60.0 / args.target_jerk.min(1.0),
        ..HarnessConfig::default()
    };
    harness
        .validate()
        .map_err(|e| Failure::Invalid(e.to_string()))?;
    let grid = SweepGrid::new(vec![30.0], vec![GRAVITY], linspace(-30.0, 20.0, args.count))
        .map_err(|e| Failure::Invalid(e.to_string()))?;
    let workers = args.common.workers.unwrap_or_default().resolve();
    let report = run_sweep(
        || PointMass::new(pm.clone()).expect("default point mass"),
        &grid,
        &harness,
        &SweepOptions::with_workers(workers),
    );

    let radius = pm.force_limit / pm.mass;
    let mut errors = Vec::new();
    let mut misclassified = 0;
    for p in report.diagram.points() {
        let inside = radius * radius - (p.a_x + pm.drag_accel).powi(2);
        match p.a_y_corr {
            Some(a) if inside >= 0.0 => errors.push((a - inside.sqrt()).abs()),
            Some(_) => misclassified += 1,
            None if inside > 0.0 => misclassified += 1,
            None => {}
        }
    }
    let mean = errors.iter().sum::<f64>() / errors.len().max(1) as f64;
    let max = errors.iter().copied().fold(0.0, f64::max);
    println!(
        "point mass oracle: {} feasible cells, mean error {mean:.3e} m/s², max error {max:.3e} m/s², {misclassified} misclassified, {:.2} s",
        errors.len(),
        report.total_runtime.as_secs_f64()
    );
    if let Some(dir) = args.common.out_dir {
        create_dir(&dir)?;
        export_csv(&report.diagram, dir.join("validation.csv"))?;
    }
    let ok = mean < 1e-3 && max < 5e-3 && misclassified == 0;
    Ok(if ok { 0 } else { EXIT_INVALID })
}

fn trace(args: TraceArgs) -> Result<u8, Failure> {
    let cfg = parse_config(&args.config)?;
    let model = build_model(&cfg)?;
    let run = run_point_detailed(&model, args.v, args.a_z, args.a_x, &cfg.harness);
    let p = &run.point;
    println!(
        "status {} a_y_corr {} kappa {} beta {}{}",
        p.status.as_str(),
        p.a_y_corr.map_or("-".into(), |x| format!("{x:.6}")),
        p.kappa.map_or("-".into(), |x| format!("{x:.3}")),
        p.beta_at_limit.map_or("-".into(), |x| format!("{x:.6}")),
        p.diagnostic.map_or(String::new(), |d| format!(" ({d:?})")),
    );
    if let Some(trace) = &run.trace {
        let out = args.common.out_dir.unwrap_or_else(|| cfg.output.dir.clone());
        create_dir(&out)?;
        let path = out.join(format!("trace_v{}_az{}_ax{}.csv", args.v, args.a_z, args.a_x));
        export_trace_csv(trace, &path)?;
        println!("wrote {}", path.display());
    }
    Ok(if p.is_fault() { EXIT_FAULTED } else { 0 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Slice(a) => slice(a),
        Command::Validate(a) => validate(a),
        Command::Trace(a) => trace(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
    }
}
