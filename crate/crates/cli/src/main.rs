//! Command-line driver: trace rays, run verification pipelines, render the
//! plane.
//!
//! Exit codes: 0 success (or window-inconclusive verdicts), 2 usage or
//! parse errors, 3 numeric failures, 4 hard verdict failures, 5 I/O errors.

mod render;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use raysep::address::ExternalAddress;
use raysep::maps::{Family, MapSpec, Rect};
use raysep::polyoracle::{external_ray_quadratic, land_ray_quadratic, ExternalAngle, QuadRayConfig};
use raysep::rays::{land_ray, trace_ray, LandConfig, TraceConfig};
use raysep::regions::decompose;
use raysep::report::{run_verification, OverallVerdict, VerifyConfig};
use raysep::singular::trace_singular_orbit;

#[derive(Parser)]
#[command(
    name = "raysep",
    version,
    about = "Dynamic rays, basic regions and singular-orbit verification for e^z + c and z^2 + c"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trace one dynamic ray and, when periodic, land it.
    TraceRay(TraceRayArgs),
    /// Run the verification pipeline and emit one JSON report.
    Verify(VerifyArgs),
    /// Render the plane with separators and the singular orbit overlaid.
    Render(RenderArgs),
}

#[derive(Args)]
struct TraceRayArgs {
    /// Map spec, e.g. "exp:-1.3679,0" or "quad:-1,0".
    #[arg(long)]
    map: String,
    /// External address like "|0" or "3|1,2" (exponential family only).
    #[arg(long, allow_hyphen_values = true)]
    address: Option<String>,
    /// External angle like "1/3" (quadratic family only).
    #[arg(long)]
    angle: Option<String>,
    #[arg(long, default_value_t = 20.0)]
    tmax: f64,
    #[arg(long, default_value_t = 0.05)]
    tmin: f64,
    #[arg(long, default_value_t = 12)]
    depth: u32,
    /// Output path for the ray JSON; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    map: String,
    /// Decomposition period.
    #[arg(long, default_value_t = 1)]
    p: u32,
    /// Symbol window for address enumeration (exponential family).
    #[arg(long = "M", default_value_t = 2)]
    window: u32,
    /// Search box "x0,y0,x1,y1" for periodic points and the census.
    #[arg(long = "box", default_value = "-4,-8,4,8", allow_hyphen_values = true)]
    search: String,
    /// Singular orbit iterate budget.
    #[arg(long, default_value_t = 10_000)]
    iters: usize,
    /// Largest period scanned by the non-repelling cycle count.
    #[arg(long, default_value_t = 3)]
    max_period: u32,
    /// Suppress the timestamp so identical runs are byte-identical.
    #[arg(long)]
    deterministic: bool,
    /// Output path for the JSON report; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    map: String,
    /// Viewport "x0,y0,x1,y1".
    #[arg(long = "box", allow_hyphen_values = true)]
    viewport: String,
    /// Image size, e.g. "800x600".
    #[arg(long = "render")]
    size: String,
    /// Escape-time iterations per pixel.
    #[arg(long, default_value_t = 100)]
    iters: u32,
    /// Overlay the period-p decomposition when given.
    #[arg(long)]
    p: Option<u32>,
    #[arg(long = "M", default_value_t = 2)]
    window: u32,
    /// Output path for the P6 pixmap.
    #[arg(long)]
    out: PathBuf,
}

enum CliError {
    Usage(String),
    Numeric(String),
    Verdict(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Verdict(_) => 4,
            CliError::Io(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numeric(m) | CliError::Verdict(m) | CliError::Io(m) => {
                m
            }
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn numeric<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Numeric(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::TraceRay(args) => cmd_trace_ray(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Render(args) => cmd_render(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("raysep: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => render::write_atomic(path, text.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn cmd_trace_ray(args: TraceRayArgs) -> Result<(), CliError> {
    let m = MapSpec::from_str(&args.map).map_err(usage)?;
    let mut value = serde_json::json!({
        "map": m.to_string(),
    });

    match m.family {
        Family::Exponential => {
            if args.angle.is_some() {
                return Err(CliError::Usage(
                    "--angle applies to quadratic maps; exponential rays use --address".into(),
                ));
            }
            let text = args.address.ok_or_else(|| {
                CliError::Usage("exponential ray tracing requires --address".into())
            })?;
            let address = ExternalAddress::from_str(&text).map_err(usage)?;
            let cfg = TraceConfig {
                t_max: args.tmax,
                t_min: args.tmin,
                depth: args.depth,
                ..TraceConfig::default()
            };
            let trace = trace_ray(&m, &address, &cfg).map_err(numeric)?;
            value["address"] = serde_json::json!(address);
            value["samples"] = samples_json(&trace.samples);
            value["residual"] = serde_json::json!(trace.residual);
            value["truncation"] = serde_json::json!(trace.truncation);
            if address.is_purely_periodic() {
                let land_cfg = LandConfig {
                    trace: cfg,
                    ..LandConfig::default()
                };
                let landing = land_ray(&m, &address, &land_cfg).map_err(numeric)?;
                value["landing"] = serde_json::to_value(&landing).unwrap();
            }
        }
        Family::Quadratic => {
            if args.address.is_some() {
                return Err(CliError::Usage(
                    "--address applies to exponential maps; quadratic rays use --angle".into(),
                ));
            }
            let text = args
                .angle
                .ok_or_else(|| CliError::Usage("quadratic ray tracing requires --angle".into()))?;
            let angle = ExternalAngle::from_str(&text).map_err(usage)?;
            let qcfg = QuadRayConfig::default();
            let trace = external_ray_quadratic(m.c, angle, &qcfg).map_err(numeric)?;
            value["angle"] = serde_json::json!(angle);
            value["samples"] = samples_json(&trace.samples);
            value["residual"] = serde_json::json!(trace.residual);
            value["truncation"] = serde_json::json!(trace.truncation);
            if angle.denominator() % 2 == 1 {
                let landing = land_ray_quadratic(m.c, angle, &LandConfig::default(), &qcfg)
                    .map_err(numeric)?;
                value["landing"] = serde_json::to_value(&landing).unwrap();
            }
        }
    }

    emit(
        args.out.as_ref(),
        &serde_json::to_string_pretty(&value).unwrap(),
    )
}

fn samples_json(samples: &[raysep::rays::RaySample]) -> serde_json::Value {
    serde_json::Value::Array(
        samples
            .iter()
            .map(|s| serde_json::json!([s.t, s.z.re, s.z.im]))
            .collect(),
    )
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let m = MapSpec::from_str(&args.map).map_err(usage)?;
    let search = Rect::from_str(&args.search).map_err(usage)?;
    let mut cfg = VerifyConfig::new(args.p, args.window, search);
    cfg.max_period = args.max_period;
    cfg.orbit_iters = args.iters;
    cfg.trapping.iters = args.iters;
    cfg.deterministic = args.deterministic;

    let report = run_verification(&m, &cfg).map_err(numeric)?;
    emit(args.out.as_ref(), &report.to_json())?;

    match report.verdict {
        OverallVerdict::Pass | OverallVerdict::Inconclusive => Ok(()),
        OverallVerdict::Fail => Err(CliError::Verdict(format!(
            "hard verdict failure: {}",
            report.notes.join("; ")
        ))),
    }
}

fn cmd_render(args: RenderArgs) -> Result<(), CliError> {
    let m = MapSpec::from_str(&args.map).map_err(usage)?;
    let viewport = Rect::from_str(&args.viewport).map_err(usage)?;
    let (width, height) = parse_size(&args.size)?;

    let decomp = match args.p {
        Some(p) => Some(
            build_decomposition(&m, p, args.window).map_err(numeric)?,
        ),
        None => None,
    };
    let orbit = match &decomp {
        Some(d) => trace_singular_orbit(&m, d, 400)
            .into_iter()
            .next()
            .map(|t| t.points)
            .unwrap_or_default(),
        None => m
            .orbit(m.singular_values()[0].value, 400, m.default_escape_radius())
            .points,
    };

    let spec = render::RenderSpec {
        width,
        height,
        viewport,
        escape_iters: args.iters,
    };
    let canvas = render::render_plane(&m, &spec, decomp.as_ref(), &orbit);
    render::write_ppm(&args.out, &canvas)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", args.out.display())))
}

fn build_decomposition(
    m: &MapSpec,
    p: u32,
    window: u32,
) -> raysep::Result<raysep::regions::RegionDecomposition> {
    use raysep::regions::{basic_regions, RegionConfig};
    match m.family {
        Family::Exponential => decompose(m, p, window, &LandConfig::default(), &RegionConfig::default()),
        Family::Quadratic => {
            let gamma = raysep::polyoracle::build_gamma_quadratic(
                m.c,
                p,
                &LandConfig::default(),
                &QuadRayConfig::default(),
            )?;
            basic_regions(m, gamma, p, None, &RegionConfig::default())
        }
    }
}

fn parse_size(s: &str) -> Result<(usize, usize), CliError> {
    let err = || CliError::Usage(format!("cannot parse size {s:?}: expected WxH like 800x600"));
    let (w, h) = s.split_once('x').ok_or_else(err)?;
    let w: usize = w.trim().parse().map_err(|_| err())?;
    let h: usize = h.trim().parse().map_err(|_| err())?;
    if w == 0 || h == 0 || w > 8192 || h > 8192 {
        return Err(err());
    }
    Ok((w, h))
}
