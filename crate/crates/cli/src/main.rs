//! Command-line front end: construct windows, verify partition-of-unity and
//! duality properties, build dual pairs, export plot data, and run the
//! reconstruction demo.
//!
//! Exit codes: 0 on success, 1 for I/O or input-parse failures, 2 for
//! domain-constraint rejections.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pouwin::constructions::{
    build_inductive, build_n2, build_p1, dual_coeffs_window, same_support_dual_pair, sine_power,
    sine_power_dual_pair, sine_squared_base, tight_window, DualPair,
};
use pouwin::export::window_csv;
use pouwin::gabor::{analysis, duality_residual, painless_frame_bounds, synthesis, Grid,
    SampledSignal};
use pouwin::pou::{sampled_pou_check, smoothness_order, Window};
use pouwin::TrigPoly;

#[derive(Parser)]
#[command(
    name = "pouwin",
    version,
    about = "Partition-of-unity windows and Gabor dual/tight frame pairs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a window family member and report its properties
    Construct(ConstructArgs),
    /// Verify a window or pair JSON file
    Check(CheckArgs),
    /// Build a dual window or a dual pair
    #[command(subcommand)]
    Dualize(DualizeCmd),
    /// Analysis/synthesis reconstruction demo with a truncated Gaussian
    FrameDemo(FrameDemoArgs),
    /// Export window evaluations as CSV for plotting
    Export(ExportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Binomial construction on `[0,2]`
    N2,
    /// Normalized product seed for N >= 3
    P1,
    /// Inductive smoothing from the seed
    Inductive,
    /// sin^L(pi x/N) window
    SinePower,
    /// Tight frame generator
    Tight,
}

#[derive(Args)]
struct ConstructArgs {
    /// Window family
    #[arg(long, value_enum)]
    family: Family,
    /// Support length N
    #[arg(long = "N")]
    n: Option<u64>,
    /// Power or induction level L
    #[arg(long = "L")]
    l: Option<u32>,
    /// Modulation step b (tight family); accepts p/q
    #[arg(long, value_parser = parse_ratio)]
    b: Option<f64>,
    /// Amplitude for the sine-power family
    #[arg(long, default_value_t = 1.0)]
    amplitude: f64,
    /// Seed window JSON for the n2/inductive families (defaults to sin²)
    #[arg(long)]
    input: Option<PathBuf>,
    /// Grid points per unit for the residual report
    #[arg(long, default_value_t = 1000)]
    grid: usize,
    /// Window JSON output path; without it the window is embedded in the
    /// report on stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Window or pair JSON file
    #[arg(long)]
    input: PathBuf,
    /// Modulation step for frame bounds of a bare window; accepts p/q
    #[arg(long, value_parser = parse_ratio)]
    b: Option<f64>,
    /// Grid points per unit interval
    #[arg(long, default_value_t = 1000)]
    grid: usize,
    /// Residual tolerance for the dual verdict
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Report output path (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum DualizeCmd {
    /// h(x) = sum a_n g(x+n) from explicit translate coefficients
    Coeffs(DualizeCoeffsArgs),
    /// Dual pair on `[0,2]` with equal supports
    SameSupport(SameSupportArgs),
    /// Even sine-power dual pair on `[0,N]`
    SinePower(SinePowerPairArgs),
}

#[derive(Args)]
struct DualizeCoeffsArgs {
    /// Window JSON for g
    #[arg(long)]
    input: PathBuf,
    /// Modulation step b; accepts p/q
    #[arg(long, value_parser = parse_ratio)]
    b: f64,
    /// Comma-separated coefficients a_{-N+1},...,a_{N-1}; each accepts p/q
    #[arg(long, value_delimiter = ',', value_parser = parse_ratio)]
    a: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    grid: usize,
    /// Pair JSON output path; without it the pair is embedded in the report
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SameSupportArgs {
    #[arg(long = "L1")]
    l1: u32,
    #[arg(long = "L2")]
    l2: u32,
    /// Modulation step b; accepts p/q
    #[arg(long, value_parser = parse_ratio)]
    b: f64,
    #[arg(long, default_value_t = 1000)]
    grid: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SinePowerPairArgs {
    #[arg(long = "N")]
    n: u64,
    #[arg(long = "L1")]
    l1: u32,
    #[arg(long = "L2")]
    l2: u32,
    /// Modulation step b; accepts p/q
    #[arg(long, value_parser = parse_ratio)]
    b: f64,
    #[arg(long, default_value_t = 1000)]
    grid: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FrameDemoArgs {
    /// Modulation step of the demo pair; accepts p/q
    #[arg(long, value_parser = parse_ratio, default_value = "1/3")]
    b: f64,
    /// Modulation truncations to evaluate
    #[arg(long = "m-max", value_delimiter = ',', default_values_t = [50i64])]
    m_max: Vec<i64>,
    /// Analysis quadrature resolution, points per unit
    #[arg(long, default_value_t = 2048)]
    analysis_grid: u32,
    /// Error-evaluation resolution, points per unit
    #[arg(long, default_value_t = 512)]
    eval_grid: u32,
    /// Write the analysis coefficient table as CSV (m,n,re,im rows)
    #[arg(long)]
    coeffs_out: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    /// Window or pair JSON file
    #[arg(long)]
    input: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, allow_negative_numbers = true)]
    to: f64,
    #[arg(long)]
    step: f64,
    /// CSV output path (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Domain(#[from] pouwin::Error),
    #[error("{0}")]
    BadParam(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("failed to parse input JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) | CliError::BadParam(_) => 2,
            CliError::Io(_) | CliError::Json(_) => 1,
        }
    }
}

fn parse_ratio(s: &str) -> Result<f64, String> {
    let value = if let Some((num, den)) = s.split_once('/') {
        let num: f64 = num.trim().parse().map_err(|e| format!("{e}"))?;
        let den: f64 = den.trim().parse().map_err(|e| format!("{e}"))?;
        if den == 0.0 {
            return Err("division by zero".to_string());
        }
        num / den
    } else {
        s.trim().parse().map_err(|e| format!("{e}"))?
    };
    Ok(value)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Construct(args) => cmd_construct(args),
        Command::Check(args) => cmd_check(args),
        Command::Dualize(cmd) => cmd_dualize(cmd),
        Command::FrameDemo(args) => cmd_frame_demo(args),
        Command::Export(args) => cmd_export(args),
    }
}

enum Loaded {
    Window(Window),
    Pair(DualPair),
}

fn load_input(path: &Path) -> Result<Loaded, CliError> {
    let text = fs::read_to_string(path)?;
    if let Ok(pair) = serde_json::from_str::<DualPair>(&text) {
        return Ok(Loaded::Pair(pair));
    }
    Ok(Loaded::Window(serde_json::from_str(&text)?))
}

fn require<T>(value: Option<T>, flag: &str, family: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::BadParam(format!("{flag} is required for --family {family}")))
}

fn write_or_print(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => println!("{}", content.trim_end()),
    }
    Ok(())
}

fn pretty<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn seed_poly(input: Option<&Path>) -> Result<TrigPoly, CliError> {
    match input {
        None => Ok(sine_squared_base(2)),
        Some(path) => match load_input(path)? {
            Loaded::Window(w) => {
                let piece = w
                    .single_piece()
                    .ok_or_else(|| CliError::BadParam("seed must be a single-piece window".into()))?;
                Ok(piece.poly.clone())
            }
            Loaded::Pair(_) => Err(CliError::BadParam("seed must be a window, not a pair".into())),
        },
    }
}

fn cmd_construct(args: ConstructArgs) -> Result<(), CliError> {
    let mut warning: Option<String> = None;
    let (window, mut meta) = match args.family {
        Family::N2 => {
            let l = require(args.l, "--L", "n2")?;
            let seed = seed_poly(args.input.as_deref())?;
            // the partition of unity holds for any valid seed; the C^{2L-1}
            // guarantee additionally needs a C¹ seed window
            let seed_order = smoothness_order(&Window::new(seed.clone(), 2)?)?.order;
            if seed_order < 2 {
                warning = Some(format!(
                    "seed window is not C^1 (smoothness order {seed_order}); the C^(2L-1) \
                     smoothness guarantee does not apply"
                ));
            }
            let poly = build_n2(&seed, l)?;
            (Window::new(poly, 2)?, json!({"family": "n2", "L": l}))
        }
        Family::P1 => {
            let n = require(args.n, "--N", "p1")?;
            (Window::new(build_p1(n)?, n)?, json!({"family": "p1", "N": n}))
        }
        Family::Inductive => {
            let n = require(args.n, "--N", "inductive")?;
            let level = args.l.unwrap_or(1);
            if level == 0 {
                return Err(CliError::BadParam("--L must be at least 1".into()));
            }
            let mut poly = if args.input.is_some() {
                seed_poly(args.input.as_deref())?
            } else {
                build_p1(n)?
            };
            for _ in 1..level {
                poly = build_inductive(&poly, n)?;
            }
            (
                Window::new(poly, n)?,
                json!({"family": "inductive", "N": n, "L": level}),
            )
        }
        Family::SinePower => {
            let n = require(args.n, "--N", "sine-power")?;
            let l = require(args.l, "--L", "sine-power")?;
            (
                sine_power(n, l, args.amplitude)?,
                json!({"family": "sine-power", "N": n, "L": l, "amplitude": args.amplitude}),
            )
        }
        Family::Tight => {
            let n = require(args.n, "--N", "tight")?;
            let l = require(args.l, "--L", "tight")?;
            let b = require(args.b, "--b", "tight")?;
            (
                tight_window(n, l, b)?,
                json!({"family": "tight", "N": n, "L": l, "b": b}),
            )
        }
    };

    let residual = sampled_pou_check(&window, args.grid);
    let smoothness = smoothness_order(&window)?;
    let report = meta.as_object_mut().unwrap();
    report.insert("support".into(), json!(window.support()));
    report.insert("pou_residual".into(), json!(residual));
    report.insert("smoothness".into(), serde_json::to_value(&smoothness)?);
    if let Some(w) = warning {
        report.insert("warning".into(), json!(w));
    }

    if let Some(path) = args.out.as_deref() {
        fs::write(path, pretty(&window))?;
    } else {
        report.insert("window".into(), serde_json::to_value(&window)?);
    }
    println!("{}", pretty(&meta).trim_end());
    Ok(())
}

fn smoothness_or_null(w: &Window) -> Result<Value, CliError> {
    if w.single_piece().is_some() {
        Ok(serde_json::to_value(smoothness_order(w)?)?)
    } else {
        Ok(Value::Null)
    }
}

fn frame_bounds_or_null(w: &Window, b: f64, grid: usize) -> Result<Value, CliError> {
    if b > 0.0 && b <= 1.0 / w.span() as f64 {
        Ok(serde_json::to_value(painless_frame_bounds(w, b, grid)?)?)
    } else {
        Ok(Value::Null)
    }
}

fn duality_report_value(pair: &DualPair, grid: usize, tol: f64) -> Result<Value, CliError> {
    let report = duality_residual(pair, grid, 1)?;
    let mut value = serde_json::to_value(&report)?;
    let object = value.as_object_mut().unwrap();
    object.insert("max_residual".into(), json!(report.max_residual()));
    object.insert("dual".into(), json!(report.is_dual(tol)));
    Ok(value)
}

fn cmd_check(args: CheckArgs) -> Result<(), CliError> {
    let report = match load_input(&args.input)? {
        Loaded::Window(w) => {
            let residual = sampled_pou_check(&w, args.grid);
            let frame_bounds = match args.b {
                Some(b) => serde_json::to_value(painless_frame_bounds(&w, b, args.grid)?)?,
                None => Value::Null,
            };
            json!({
                "type": "window",
                "support": w.support(),
                "pou_residual": residual,
                "smoothness": smoothness_or_null(&w)?,
                "frame_bounds": frame_bounds,
            })
        }
        Loaded::Pair(pair) => {
            let residual = sampled_pou_check(&pair.g, args.grid);
            json!({
                "type": "pair",
                "b": pair.b,
                "support_g": pair.g.support(),
                "support_h": pair.h.support(),
                "pou_residual": residual,
                "smoothness": {
                    "g": smoothness_or_null(&pair.g)?,
                    "h": smoothness_or_null(&pair.h)?,
                },
                "duality": duality_report_value(&pair, args.grid, args.tol)?,
                "frame_bounds": {
                    "g": frame_bounds_or_null(&pair.g, pair.b, args.grid)?,
                    "h": frame_bounds_or_null(&pair.h, pair.b, args.grid)?,
                },
            })
        }
    };
    write_or_print(args.out.as_deref(), &pretty(&report))?;
    Ok(())
}

fn emit_pair(pair: &DualPair, grid: usize, out: Option<&Path>) -> Result<(), CliError> {
    let mut report = duality_report_value(pair, grid, 1e-9)?;
    if let Some(path) = out {
        fs::write(path, pretty(pair))?;
    } else {
        report
            .as_object_mut()
            .unwrap()
            .insert("pair".into(), serde_json::to_value(pair)?);
    }
    println!("{}", pretty(&report).trim_end());
    Ok(())
}

fn cmd_dualize(cmd: DualizeCmd) -> Result<(), CliError> {
    match cmd {
        DualizeCmd::Coeffs(args) => {
            let g = match load_input(&args.input)? {
                Loaded::Window(w) => w,
                Loaded::Pair(_) => {
                    return Err(CliError::BadParam("--input must be a window, not a pair".into()))
                }
            };
            let h = dual_coeffs_window(&g, args.b, &args.a)?;
            let pair = DualPair { g, h, b: args.b };
            emit_pair(&pair, args.grid, args.out.as_deref())
        }
        DualizeCmd::SameSupport(args) => {
            let pair = same_support_dual_pair(args.l1, args.l2, args.b)?;
            emit_pair(&pair, args.grid, args.out.as_deref())
        }
        DualizeCmd::SinePower(args) => {
            let pair = sine_power_dual_pair(args.n, args.l1, args.l2, args.b)?;
            emit_pair(&pair, args.grid, args.out.as_deref())
        }
    }
}

fn cmd_frame_demo(args: FrameDemoArgs) -> Result<(), CliError> {
    let b = args.b;
    let g = Window::new(build_n2(&sine_squared_base(2), 2)?, 2)?;
    let h = dual_coeffs_window(&g, b, &[b, b, b])?;
    let pair = DualPair { g, h, b };

    let f = SampledSignal::from_real_fn(Grid::from_range(-3.0, 5.0, args.analysis_grid), |x| {
        (-(x - 1.0) * (x - 1.0)).exp()
    });
    let eval_grid = Grid::from_range(-3.0, 5.0, args.eval_grid);
    let reference = SampledSignal::from_real_fn(eval_grid.clone(), |x| {
        (-(x - 1.0) * (x - 1.0)).exp()
    });

    let largest = args.m_max.iter().copied().max().unwrap_or(50).max(0);
    let table = analysis(&f, &pair.g, b, largest, -5..=5);
    if let Some(path) = args.coeffs_out.as_deref() {
        fs::write(path, table.to_csv())?;
    }
    let mut errors = Vec::new();
    for &m in &args.m_max {
        if m < 0 {
            return Err(CliError::BadParam("--m-max must be nonnegative".into()));
        }
        let rebuilt = synthesis(&table.truncated(m), &pair.h, &eval_grid);
        errors.push(json!({
            "m_max": m,
            "relative_l2_error": rebuilt.relative_l2_error(&reference),
        }));
    }

    let report = json!({
        "b": b,
        "signal": "exp(-(x-1)^2) truncated to [-3, 5]",
        "analysis_points_per_unit": args.analysis_grid,
        "eval_points_per_unit": args.eval_grid,
        "errors": errors,
    });
    write_or_print(args.out.as_deref(), &pretty(&report))?;
    Ok(())
}

fn cmd_export(args: ExportArgs) -> Result<(), CliError> {
    if args.step <= 0.0 {
        return Err(CliError::BadParam("--step must be positive".into()));
    }
    let csv = match load_input(&args.input)? {
        Loaded::Window(w) => window_csv(&[&w], args.from, args.to, args.step),
        Loaded::Pair(pair) => window_csv(&[&pair.g, &pair.h], args.from, args.to, args.step),
    };
    write_or_print(args.out.as_deref(), &csv)?;
    Ok(())
}
