//! Command-line frontend: count zeros, find zeros/poles, benchmark the two
//! methods, and list the built-in demo problems.
//!
//! Exit codes: 0 success, 2 quadrature/engine failure (zero on the search
//! boundary), 3 non-integer argument principle, 64 usage error.

mod document;

use clap::{Args, Parser, Subcommand};
use document::ConfigEcho;
use holozero::demos::{self, DemoMode, DemoParams};
use holozero::{
    count_zeros, find_poles_manual, find_zeros, ArgPrincipleOutcome, DerivConfig, EdgeCache,
    EngineConfig, EngineError, FunctionHandle, Rectangle,
};
use num_complex::Complex64;
use std::time::Instant;

const EXIT_OK: i32 = 0;
const EXIT_QUADRATURE: i32 = 2;
const EXIT_NON_INTEGER: i32 = 3;
const EXIT_USAGE: i32 = 64;

const GRAMMAR_HELP: &str = "\
Expression grammar (for --expr/--dexpr):
  expr   := term (('+' | '-') term)*
  term   := unary (('*' | '/') unary)*
  unary  := '-' unary | power
  power  := atom ('^' unary)?        (right-associative)
  atom   := number | number 'i' | 'z' | 'i' | 'pi' | 'e'
          | exp|log|sin|cos|tan|sqrt '(' expr ')' | '(' expr ')'
log and sqrt use principal branches (cut on the negative real axis).
Without --dexpr the derivative is approximated numerically from f alone.";

#[derive(Parser)]
#[command(
    name = "holozero",
    version,
    about = "Find all zeros of a holomorphic function in a rectangle",
    after_long_help = GRAMMAR_HELP
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Count zeros in the rectangle by the argument principle.
    Count(CountArgs),
    /// Find all zeros (or, for pole demos, poles) with multiplicities.
    Find(FindArgs),
    /// Compare evaluation counts of the two methods on the line-of-zeros
    /// product; prints a CSV table.
    Benchmark(BenchArgs),
    /// List the built-in demo problems.
    DemoList,
}

#[derive(Args)]
struct ProblemArgs {
    /// Function of z, e.g. "(z-0.5)^3*exp(z)".
    #[arg(long, conflicts_with = "demo")]
    expr: Option<String>,
    /// Derivative of --expr; numerically approximated when omitted.
    #[arg(long, requires = "expr")]
    dexpr: Option<String>,
    /// Built-in demo name (see demo-list).
    #[arg(long)]
    demo: Option<String>,
    /// Search rectangle re_min,re_max,im_min,im_max (defaults to the
    /// demo's own rectangle).
    #[arg(long, value_name = "R0,R1,I0,I1", allow_hyphen_values = true)]
    rect: Option<String>,
    /// Zero order for the funcchoice demo.
    #[arg(long, default_value_t = 4)]
    alpha: u32,
    /// Zero location for the funcchoice demo, e.g. "0.3+0.7i".
    #[arg(long, default_value = "0.3+0.7i", allow_hyphen_values = true)]
    zero: String,
    /// Force the derivative-free mode even when a derivative is available.
    #[arg(long)]
    derivative_free: bool,
}

#[derive(Args)]
struct CountArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Relative quadrature tolerance.
    #[arg(long, default_value_t = 1e-9)]
    quad_rtol: f64,
}

#[derive(Args)]
struct FindArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Maximum zeros per region (M).
    #[arg(long, default_value_t = 7)]
    max_per_region: u32,
    /// Newton-polish the computed zeros.
    #[arg(long)]
    polish: bool,
    /// Seed for every random choice (split perturbations, probe vectors).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Manual subdivision depth (pole demos only).
    #[arg(long)]
    depth: Option<u32>,
    /// Output format.
    #[arg(long, default_value = "json", value_parser = ["json", "csv"])]
    format: String,
    /// Write the document to a file instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Write rectangles + zero coordinates to a JSON file for plotting.
    #[arg(long)]
    plot_data: Option<std::path::PathBuf>,
    /// Worker threads for the approximation stage (or HOLOZERO_THREADS).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct BenchArgs {
    /// Number n in the benchmark product (n+1 zeros).
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Comma-separated tolerance list.
    #[arg(long, default_value = "1e-6,1e-9,1e-12")]
    tolerances: String,
}

struct Problem {
    label: String,
    handle: FunctionHandle,
    rect: Rectangle,
    mode: DemoMode,
    config: EngineConfig,
    derivative_free: bool,
    is_sheets: bool,
}

fn usage_error(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    eprintln!("run with --help for usage");
    EXIT_USAGE
}

fn parse_rect(spec: &str) -> Result<Rectangle, String> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 4 {
        return Err(format!(
            "--rect needs four comma-separated numbers, got `{spec}`"
        ));
    }
    let mut vals = [0.0; 4];
    for (v, p) in vals.iter_mut().zip(&parts) {
        *v = p
            .trim()
            .parse::<f64>()
            .map_err(|_| format!("invalid rectangle coordinate `{p}`"))?;
    }
    Rectangle::new(vals[0], vals[1], vals[2], vals[3]).map_err(|e| e.to_string())
}

fn parse_complex(spec: &str) -> Result<Complex64, String> {
    let expr = holozero::exprparse::parse(spec).map_err(|e| e.to_string())?;
    let v = expr.eval(Complex64::new(0.0, 0.0));
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{spec}` does not evaluate to a finite constant"))
    }
}

fn build_problem(args: &ProblemArgs, seed: u64) -> Result<Problem, String> {
    if let Some(name) = &args.demo {
        if args.derivative_free {
            return Err("--derivative-free applies to --expr problems only".to_string());
        }
        let params = DemoParams {
            alpha: args.alpha,
            zero: parse_complex(&args.zero)?,
            seed,
        };
        let demo = demos::build(name, &params)
            .ok_or_else(|| format!("unknown demo `{name}`; see demo-list"))?;
        let rect = match &args.rect {
            Some(spec) => parse_rect(spec)?,
            None => demo.rect,
        };
        Ok(Problem {
            label: format!("demo:{name}"),
            handle: demo.handle,
            rect,
            mode: demo.mode,
            config: demo.config,
            derivative_free: false,
            is_sheets: name == "sheets",
        })
    } else if let Some(expr_src) = &args.expr {
        let rect = match &args.rect {
            Some(spec) => parse_rect(spec)?,
            None => return Err("--rect is required with --expr".to_string()),
        };
        let expr = holozero::exprparse::parse(expr_src).map_err(|e| e.to_string())?;
        let derivative_free = args.derivative_free || args.dexpr.is_none();
        let handle = if let (false, Some(dexpr_src)) = (args.derivative_free, &args.dexpr) {
            let dexpr = holozero::exprparse::parse(dexpr_src).map_err(|e| e.to_string())?;
            FunctionHandle::with_derivative(move |z| expr.eval(z), move |z| dexpr.eval(z))
        } else {
            FunctionHandle::derivative_free(move |z| expr.eval(z), DerivConfig::default())
        };
        Ok(Problem {
            label: format!("expr:{expr_src}"),
            handle,
            rect,
            mode: DemoMode::FindZeros,
            config: EngineConfig::default(),
            derivative_free,
            is_sheets: false,
        })
    } else {
        Err("one of --expr or --demo is required".to_string())
    }
}

fn cmd_count(args: &CountArgs) -> i32 {
    if !(args.quad_rtol > 0.0 && args.quad_rtol < 1.0) {
        return usage_error("--quad-rtol must lie in (0, 1)");
    }
    let problem = match build_problem(&args.problem, 0) {
        Ok(p) => p,
        Err(e) => return usage_error(&e),
    };
    let mut quad = problem.config.quad;
    quad.rel_tol = args.quad_rtol;
    let cache = EdgeCache::new();
    match count_zeros(&problem.handle, &problem.rect, &quad, &cache) {
        ArgPrincipleOutcome::Integer(n) => {
            println!("N = {n}");
            EXIT_OK
        }
        ArgPrincipleOutcome::QuadratureFailure(edge) => {
            println!("quadrature failed on edge {edge}: a zero lies on or close to the boundary");
            EXIT_QUADRATURE
        }
        ArgPrincipleOutcome::NonInteger(value) => {
            println!(
                "non-integer argument principle value {value}: the function may not be holomorphic in the rectangle, or the quadrature failed"
            );
            EXIT_NON_INTEGER
        }
    }
}

fn engine_exit_code(err: &EngineError) -> i32 {
    match err {
        EngineError::NonIntegerCount { .. } => EXIT_NON_INTEGER,
        _ => EXIT_QUADRATURE,
    }
}

fn cmd_find(args: &FindArgs) -> i32 {
    let started = Instant::now();
    let problem = match build_problem(&args.problem, args.seed) {
        Ok(p) => p,
        Err(e) => return usage_error(&e),
    };
    let threads = args.threads.unwrap_or_else(|| {
        std::env::var("HOLOZERO_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(1)
    });
    let mut config = problem.config;
    config.max_zeros_per_region = args.max_per_region;
    config.polish = args.polish;
    config.seed = args.seed;
    config.threads = threads.max(1);

    let manual = matches!(problem.mode, DemoMode::ManualPoles { .. });
    if args.depth.is_some() && !manual {
        return usage_error("--depth applies to manual-subdivision pole demos only");
    }
    let manual_depth = match (problem.mode, args.depth) {
        (_, Some(d)) => Some(d),
        (DemoMode::ManualPoles { depth }, None) => Some(depth),
        (DemoMode::FindZeros, None) => None,
    };

    let echo = ConfigEcho {
        problem: problem.label.clone(),
        rect: [
            problem.rect.re_min,
            problem.rect.re_max,
            problem.rect.im_min,
            problem.rect.im_max,
        ],
        max_per_region: config.max_zeros_per_region,
        residue_tol: config.residue_tol,
        polish: config.polish,
        seed: config.seed,
        derivative_free: problem.derivative_free,
        aaa_rel_tol: config.aaa.rel_tol,
        quad_rel_tol: config.quad.rel_tol,
        threads: config.threads,
        manual_depth: if manual { manual_depth } else { None },
    };

    let outcome = if manual {
        find_poles_manual(
            &problem.handle,
            problem.rect,
            manual_depth.expect("manual mode implies a depth"),
            &config,
        )
    } else {
        find_zeros(&problem.handle, problem.rect, &config)
    };

    let (document, code) = match outcome {
        Ok((records, report)) => {
            let sheets = problem.is_sheets.then(|| {
                records
                    .iter()
                    .map(|r| {
                        let (plus, minus) = demos::sheet_values(r.location);
                        if plus.norm() <= minus.norm() { "+" } else { "-" }.to_string()
                    })
                    .collect::<Vec<_>>()
            });
            let doc = document::from_report(
                &records,
                &report,
                sheets,
                echo,
                started.elapsed().as_secs_f64(),
            );
            (doc, EXIT_OK)
        }
        Err(err) => (
            document::failure(err.to_string(), echo, started.elapsed().as_secs_f64()),
            engine_exit_code(&err),
        ),
    };

    if let Some(path) = &args.plot_data {
        let plot = document::PlotData {
            rectangles: document.regions.clone(),
            zeros: document.zeros.iter().map(|z| [z.re, z.im]).collect(),
        };
        let text = serde_json::to_string_pretty(&plot).expect("plot data serializes");
        if let Err(e) = std::fs::write(path, text) {
            return usage_error(&format!("cannot write {}: {e}", path.display()));
        }
    }

    let rendered = match args.format.as_str() {
        "csv" => document::to_csv(&document),
        _ => serde_json::to_string_pretty(&document).expect("document serializes") + "\n",
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, rendered) {
                return usage_error(&format!("cannot write {}: {e}", path.display()));
            }
        }
        None => print!("{rendered}"),
    }
    code
}

fn cmd_benchmark(args: &BenchArgs) -> i32 {
    let mut tolerances = Vec::new();
    for part in args.tolerances.split(',') {
        match part.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t < 1.0 => tolerances.push(t),
            _ => return usage_error(&format!("invalid tolerance `{part}`")),
        }
    }
    let rows = holozero::benchmark::line_zero_comparison(args.n, &tolerances);
    println!("method,tolerance,evaluations,max_zero_error,converged");
    for row in rows {
        println!(
            "{},{:e},{},{},{}",
            row.method.label(),
            row.tolerance,
            row.evaluations,
            row.max_zero_error,
            row.converged
        );
    }
    EXIT_OK
}

fn cmd_demo_list() -> i32 {
    for (name, summary) in demos::catalog() {
        println!("{name:<20} {summary}");
    }
    EXIT_OK
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap distinguishes help/version from genuine usage errors
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    std::process::exit(EXIT_OK);
                }
                _ => {
                    let _ = e.print();
                    std::process::exit(EXIT_USAGE);
                }
            }
        }
    };
    let code = match &cli.cmd {
        Cmd::Count(args) => cmd_count(args),
        Cmd::Find(args) => cmd_find(args),
        Cmd::Benchmark(args) => cmd_benchmark(args),
        Cmd::DemoList => cmd_demo_list(),
    };
    std::process::exit(code);
}
