//! Command-line surface: `classify`, `kernel`, `cf`, `simulate`, `verify`.
//!
//! Exit codes: 0 success, 1 verification-suite failure, 2 invalid
//! input/schema, 3 budget exceeded.

use crate::conv::{classify_support_level, classify_tilde, SupportLevel, TildeCase};
use crate::error::Error;
use crate::euclid::full_euclid_ft;
use crate::io;
use crate::mc::{empirical_cf, simulate_z, PathConfig};
use crate::params::GaussianParams;
use crate::quad::Grid1D;
use crate::schrodinger::{schrodinger_operator, OperatorForm, RepPoint, Sign};
use crate::verify::{run_suite, Suite, VerifyBudget};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use std::fs;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser)]
#[command(
    name = "heisengauss",
    about = "Fourier transforms, convolutions and Monte Carlo checks for Gaussian measures on the 3-D Heisenberg group"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for anything randomized.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format where both are meaningful.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the convolution of two Gaussian measures is Gaussian.
    Classify(ClassifyArgs),
    /// Emit the transform of one measure at a Schrödinger representation.
    Kernel(KernelArgs),
    /// Evaluate the Euclidean characteristic function at points from a CSV.
    Cf(CfArgs),
    /// Simulate the group-valued process and emit samples or summaries.
    Simulate(SimulateArgs),
    /// Run the verification suites.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct ClassifyArgs {
    /// First parameter document (JSON).
    p1: PathBuf,
    /// Second parameter document (JSON).
    p2: PathBuf,
}

#[derive(Args)]
struct KernelArgs {
    /// Parameter document (JSON).
    params: PathBuf,
    #[arg(long)]
    lambda: f64,
    #[arg(long, value_enum, default_value_t = SignArg::Plus)]
    sign: SignArg,
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    grid_min: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    grid_max: f64,
    #[arg(long, default_value_t = 64)]
    grid_n: usize,
}

#[derive(Args)]
struct CfArgs {
    /// Parameter document (JSON).
    params: PathBuf,
    /// Evaluation points CSV with header s1,s2,s3.
    points: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// Parameter document (JSON).
    params: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    #[arg(long, default_value_t = 10_000)]
    paths: u32,
    #[arg(long, default_value_t = 500)]
    steps: u32,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, value_enum, default_value_t = BudgetArg::Full)]
    budget: BudgetArg,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BudgetArg {
    Full,
    Ci,
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_INVALID_INPUT,
    }
}

fn read_params(path: &PathBuf) -> Result<GaussianParams, (i32, String)> {
    let text = fs::read_to_string(path)
        .map_err(|e| (EXIT_INVALID_INPUT, format!("{}: {e}", path.display())))?;
    io::parse_params(&text).map_err(|e| (exit_code_for(&e), e.to_string()))
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), (i32, String)> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| (EXIT_INVALID_INPUT, format!("{}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            code
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, (i32, String)> {
    match cli.command {
        Command::Classify(ref args) => {
            let p1 = read_params(&args.p1)?;
            let p2 = read_params(&args.p2)?;
            let verdict = classify_tilde(&p1, &p2);
            let high = classify_support_level(&p1, &p2);
            let margins: serde_json::Map<String, serde_json::Value> = TildeCase::ALL
                .iter()
                .zip(verdict.margins.iter())
                .map(|(c, m)| {
                    (
                        c.label().to_string(),
                        if m.is_finite() {
                            json!(m)
                        } else {
                            json!("inapplicable")
                        },
                    )
                })
                .collect();
            let doc = json!({
                "gaussian": verdict.gaussian,
                "tilde_case": verdict.tilde_case.map(|c| c.label()),
                "high_level": match high.variant {
                    SupportLevel::C1CommonAbelianCoset => "C1_CommonAbelianCoset",
                    SupportLevel::C2SameSemigroupModCenter => "C2_SameSemigroupModCenter",
                    SupportLevel::No => "No",
                },
                "rho": verdict.rho,
                "result_params": verdict.result.map(|r| json!({"a": r.a(), "B": r.b()})),
                "margins": margins,
            });
            emit(&cli.out, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))?;
            Ok(EXIT_OK)
        }
        Command::Kernel(ref args) => {
            let p = read_params(&args.params)?;
            let sign = match args.sign {
                SignArg::Plus => Sign::Plus,
                SignArg::Minus => Sign::Minus,
            };
            let rep = RepPoint::new(sign, args.lambda)
                .map_err(|e| (EXIT_INVALID_INPUT, e.to_string()))?;
            let op = schrodinger_operator(&p, &rep);
            match &op.form {
                OperatorForm::Kernel(k) => {
                    let grid = Grid1D::new(args.grid_min, args.grid_max, args.grid_n)
                        .map_err(|e| (EXIT_INVALID_INPUT, e.to_string()))?;
                    let pts = grid.points();
                    let mut rows = Vec::with_capacity(pts.len() * pts.len());
                    for &x in &pts {
                        for &y in &pts {
                            rows.push((x, y, k.eval(x, y)));
                        }
                    }
                    emit(&cli.out, &io::kernel_csv(&rows))?;
                }
                OperatorForm::ShiftMult(sm) => {
                    let doc = json!({
                        "form": "shift_mult",
                        "quad": {"re": sm.quad.re, "im": sm.quad.im},
                        "lin": {"re": sm.lin.re, "im": sm.lin.im},
                        "const_term": {"re": sm.const_term.re, "im": sm.const_term.im},
                        "shift": sm.shift,
                    });
                    emit(
                        &cli.out,
                        &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()),
                    )?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Cf(ref args) => {
            let p = read_params(&args.params)?;
            let text = fs::read_to_string(&args.points)
                .map_err(|e| (EXIT_INVALID_INPUT, format!("{}: {e}", args.points.display())))?;
            let points =
                io::parse_points_csv(&text).map_err(|e| (exit_code_for(&e), e.to_string()))?;
            let values: Vec<_> = points.iter().map(|&s| full_euclid_ft(&p, s)).collect();
            emit(&cli.out, &io::complex_values_csv(&points, &values))?;
            Ok(EXIT_OK)
        }
        Command::Simulate(ref args) => {
            let p = read_params(&args.params)?;
            let d = crate::params::sigma_factor(&p).d.max(1);
            let cfg = PathConfig::new(args.steps, args.paths, cli.seed, d)
                .map_err(|e| (exit_code_for(&e), e.to_string()))?;
            let samples =
                simulate_z(&p, args.t, &cfg).map_err(|e| (exit_code_for(&e), e.to_string()))?;
            match cli.format {
                Format::Csv => emit(&cli.out, &io::samples_csv(&samples))?,
                Format::Json => {
                    let n = samples.len() as f64;
                    let mean: Vec<f64> = (0..3)
                        .map(|i| samples.iter().map(|z| z[i]).sum::<f64>() / n)
                        .collect();
                    let mut cov = [[0.0f64; 3]; 3];
                    for z in &samples {
                        for i in 0..3 {
                            for j in 0..3 {
                                cov[i][j] += (z[i] - mean[i]) * (z[j] - mean[j]);
                            }
                        }
                    }
                    for row in cov.iter_mut() {
                        for v in row.iter_mut() {
                            *v /= n - 1.0;
                        }
                    }
                    let cf_points: Vec<Vec<f64>> = vec![
                        vec![1.0, 0.0, 0.0],
                        vec![0.0, 1.0, 0.0],
                        vec![0.0, 0.0, 1.0],
                        vec![0.5, 0.5, 0.5],
                        vec![1.0, 1.0, 0.0],
                        vec![0.0, 0.5, 1.0],
                    ];
                    let flat: Vec<Vec<f64>> = samples.iter().map(|z| z.to_vec()).collect();
                    let cf = empirical_cf(&flat, &cf_points)
                        .map_err(|e| (exit_code_for(&e), e.to_string()))?;
                    let cf_rows: Vec<_> = cf_points
                        .iter()
                        .zip(cf.iter())
                        .map(|(pt, est)| {
                            json!({
                                "point": pt,
                                "re": est.value.re,
                                "im": est.value.im,
                                "stderr": est.stderr,
                            })
                        })
                        .collect();
                    let doc = json!({
                        "t": args.t,
                        "paths": args.paths,
                        "steps": args.steps,
                        "seed": cli.seed,
                        "mean": mean,
                        "covariance": cov,
                        "cf_table": cf_rows,
                    });
                    emit(
                        &cli.out,
                        &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()),
                    )?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify(ref args) => {
            let suite = Suite::parse(&args.suite).ok_or((
                EXIT_INVALID_INPUT,
                format!("unknown suite {:?} (kernels|euclid|mc|convolution|all)", args.suite),
            ))?;
            let budget = match args.budget {
                BudgetArg::Full => VerifyBudget::Full,
                BudgetArg::Ci => VerifyBudget::Ci,
            };
            let report = run_suite(suite, cli.seed, budget);
            let mut text = String::new();
            for check in &report.checks {
                text.push_str(&check.line());
                text.push('\n');
            }
            text.push_str(&format!(
                "suite {:?}: {}\n",
                suite,
                if report.pass { "pass" } else { "FAIL" }
            ));
            emit(&cli.out, &text)?;
            if let Some(path) = &args.json {
                let doc = serde_json::to_string_pretty(&report).unwrap();
                fs::write(path, doc)
                    .map_err(|e| (EXIT_INVALID_INPUT, format!("{}: {e}", path.display())))?;
            }
            Ok(if report.pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
    }
}
