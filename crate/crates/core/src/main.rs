//! Command line front end: kernel evaluation, asymptotic models, sweep
//! comparisons, the self-check suites, and coefficient-field analysis.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use quartic_heat::error::{Error, Result};
use quartic_heat::field::{CoefficientField, analyze_field, read_field_csv};
use quartic_heat::quadrature::{
    KernelValue, QuadratureSpec, f_lambda_auto, f_lambda_direct, f_lambda_shifted, green_function,
};
use quartic_heat::saddle::{PointEstimate, contour_shift_for, estimate_at};
use quartic_heat::symbol::Coefficients;
use quartic_heat::vec2::{RealVec2, scale};
use quartic_heat::verify::{Suite, run_suite};

#[derive(Parser)]
#[command(
    name = "quartic-heat",
    version,
    about = "Heat kernels of planar fourth-order operators: quadrature, \
             saddle-point asymptotics, and self-checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Symbol coefficients A(xi) = alpha xi1^4 + 2 beta xi1^2 xi2^2 + gamma xi2^4.
#[derive(Args)]
struct CoeffArgs {
    /// Coefficient of xi1^4.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    alpha: f64,
    /// Half the coefficient of xi1^2 xi2^2.
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    /// Coefficient of xi2^4.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    gamma: f64,
}

impl CoeffArgs {
    fn build(&self) -> Result<Coefficients> {
        Coefficients::new(self.alpha, self.beta, self.gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    /// Pick per evaluation: direct while cancellation is mild, shifted
    /// through the critical points once it is not.
    Auto,
    /// Quadrature over the real plane.
    Direct,
    /// Quadrature on the contour through the dominant critical points.
    Shifted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DirectionArg {
    /// The ray through (1, 0).
    Axis,
    /// The ray through (1, 1).
    Bisector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Identities,
    Finsler,
    Quadrature,
    Saddles,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Identities => Suite::Identities,
            SuiteArg::Finsler => Suite::Finsler,
            SuiteArg::Quadrature => Suite::Quadrature,
            SuiteArg::Saddles => Suite::Saddles,
            SuiteArg::All => Suite::All,
        }
    }
}

fn parse_point(s: &str) -> std::result::Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected \"x1,x2\", got {s:?}"));
    }
    let a: f64 = parts[0].trim().parse().map_err(|e| format!("x1: {e}"))?;
    let b: f64 = parts[1].trim().parse().map_err(|e| format!("x2: {e}"))?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(format!("coordinates must be finite, got {s:?}"));
    }
    Ok([a, b])
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the kernel G(x, t) by adaptive quadrature.
    Kernel {
        #[command(flatten)]
        coeffs: CoeffArgs,
        /// Evaluation point, written "x1,x2".
        #[arg(long, value_parser = parse_point, default_value = "0,0", allow_hyphen_values = true)]
        x: [f64; 2],
        /// Time, > 0.
        #[arg(long)]
        t: f64,
        /// Target relative tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
    },
    /// Print the leading-order decay model at a point as JSON.
    Asymptotic {
        #[command(flatten)]
        coeffs: CoeffArgs,
        /// Observation point, written "x1,x2".
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        x: [f64; 2],
        /// Extra scale factor applied to x before modelling.
        #[arg(long, default_value_t = 1.0)]
        s: f64,
    },
    /// Sweep lambda and tabulate numeric F against its asymptotic model
    /// as CSV.
    Compare {
        #[command(flatten)]
        coeffs: CoeffArgs,
        /// Named ray with closed-form saddle data.
        #[arg(long, value_enum, conflicts_with = "x")]
        direction: Option<DirectionArg>,
        /// Generic ray through this point (coupling strictly between the
        /// border values).
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        x: Option<[f64; 2]>,
        /// Sweep start, >= 1.
        #[arg(long, default_value_t = 5.0)]
        lambda_min: f64,
        /// Sweep end, > lambda-min.
        #[arg(long, default_value_t = 25.0)]
        lambda_max: f64,
        /// Number of sweep points, >= 2.
        #[arg(long, default_value_t = 201)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Target relative tolerance for each numeric point.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded self-check suite; prints a JSON report.
    Verify {
        /// Which suite to run.
        #[arg(value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        /// RNG seed; a fixed seed gives a byte-identical report.
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Analyze a CSV of per-point coefficients; prints a JSON report.
    Field {
        /// CSV with header x1,x2,alpha,beta,gamma.
        csv: PathBuf,
    },
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tol must be positive, got {tol}"
        )));
    }
    Ok(())
}

fn cmd_kernel(c: &Coefficients, x: RealVec2, t: f64, tol: f64, method: MethodArg) -> Result<()> {
    check_tol(tol)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("t must be positive, got {t}")));
    }
    // In lambda units the evaluation sits at (4t)^(-1/3); beyond 8 the
    // direct grid starts losing digits to cancellation.
    let lambda_eff = (4.0 * t).powf(-1.0 / 3.0);
    let value = match method {
        MethodArg::Direct => green_function(c, x, t, &QuadratureSpec::for_green(c, x, t, tol))?,
        MethodArg::Shifted => shifted_green(c, x, t, lambda_eff, tol)?,
        MethodArg::Auto => {
            if lambda_eff > 8.0 {
                match shifted_green(c, x, t, lambda_eff, tol) {
                    Ok(v) => v,
                    // No known contour for this direction; the direct grid
                    // is still correct, just slower to converge.
                    Err(Error::Unsupported(_)) => {
                        green_function(c, x, t, &QuadratureSpec::for_green(c, x, t, tol))?
                    }
                    Err(e) => return Err(e),
                }
            } else {
                green_function(c, x, t, &QuadratureSpec::for_green(c, x, t, tol))?
            }
        }
    };
    print_kernel_value(&value);
    Ok(())
}

fn shifted_green(
    c: &Coefficients,
    x: RealVec2,
    t: f64,
    lambda_eff: f64,
    tol: f64,
) -> Result<KernelValue> {
    let eta = scale(lambda_eff, contour_shift_for(c, x)?);
    green_function(
        c,
        x,
        t,
        &QuadratureSpec::for_green_shifted(c, x, t, eta, tol),
    )
}

fn print_kernel_value(v: &KernelValue) {
    println!("value  {:.15e}", v.value);
    println!("error  {:.3e}", v.estimated_error);
    println!("method {}", v.method);
}

fn cmd_asymptotic(c: &Coefficients, x: RealVec2, s: f64) -> Result<()> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidInput(format!("s must be positive, got {s}")));
    }
    let report = match estimate_at(c, scale(s, x))? {
        PointEstimate::Interior(i) => serde_json::json!({
            "model": "interior",
            "q": i.q,
            "symbol_at_q": i.symbol_at_q,
            "h": i.h,
            "estimate": i.estimate,
        }),
        PointEstimate::Special(pair) => serde_json::json!({
            "model": "special_direction",
            "estimate": pair,
        }),
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("estimate serializes")
    );
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_compare(
    c: &Coefficients,
    direction: Option<DirectionArg>,
    x: Option<[f64; 2]>,
    lambda_min: f64,
    lambda_max: f64,
    steps: usize,
    method: MethodArg,
    tol: f64,
    out: Option<PathBuf>,
) -> Result<()> {
    check_tol(tol)?;
    if !(lambda_min >= 1.0 && lambda_min.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "lambda-min must be >= 1, got {lambda_min}"
        )));
    }
    if !(lambda_max > lambda_min && lambda_max.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "lambda-max must exceed lambda-min, got {lambda_max}"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidInput(format!(
            "steps must be >= 2, got {steps}"
        )));
    }
    let (point, label) = match (direction, x) {
        (Some(DirectionArg::Axis), None) => ([1.0, 0.0], "axis".to_string()),
        (Some(DirectionArg::Bisector), None) => ([1.0, 1.0], "bisector".to_string()),
        (None, Some(p)) => (p, format!("generic({},{})", p[0], p[1])),
        _ => {
            return Err(Error::InvalidInput(
                "pass exactly one of --direction or --x".into(),
            ));
        }
    };
    let model = estimate_at(c, point)?.pair().f_space;

    let mut csv = String::new();
    writeln!(
        csv,
        "# quartic-heat v1, beta={}, direction={label}",
        c.beta()
    )
    .expect("string write");
    writeln!(csv, "lambda,F_numeric_scaled,G_asymptotic_scaled,abs_diff").expect("string write");
    let h = (lambda_max - lambda_min) / (steps - 1) as f64;
    for i in 0..steps {
        let lam = lambda_min + h * i as f64;
        let f = match method {
            MethodArg::Auto => f_lambda_auto(c, point, lam, tol)?,
            MethodArg::Direct => f_lambda_direct(
                c,
                point,
                lam,
                &QuadratureSpec::for_f_direct(c, point, lam, tol),
            )?,
            MethodArg::Shifted => {
                let eta0 = contour_shift_for(c, point)?;
                f_lambda_shifted(
                    c,
                    point,
                    lam,
                    eta0,
                    &QuadratureSpec::for_f_shifted(c, point, lam, eta0, tol),
                )?
            }
        };
        // Strip the common lambda^{-1} e^{-rate lambda} envelope; what is
        // left should track the model's pure oscillation factor.
        let f_scaled = f.value * lam * (model.exp_rate * lam).exp();
        let g_scaled = model.scaled(lam);
        writeln!(
            csv,
            "{lam:.6},{f_scaled:.12e},{g_scaled:.12e},{:.12e}",
            (f_scaled - g_scaled).abs()
        )
        .expect("string write");
    }
    match out {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_verify(suite: Suite, seed: u64) -> ExitCode {
    let report = run_suite(suite, seed);
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    let mut ok = true;
    for check in &report.checks {
        if !check.passed {
            eprintln!("FAIL {}: {}", check.name, check.detail);
            ok = false;
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_field(csv: &std::path::Path) -> Result<()> {
    let samples = read_field_csv(csv)?;
    let report = analyze_field(&CoefficientField::Grid(samples))?;
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    Ok(())
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Kernel {
            coeffs,
            x,
            t,
            tol,
            method,
        } => {
            cmd_kernel(&coeffs.build()?, x, t, tol, method)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Asymptotic { coeffs, x, s } => {
            cmd_asymptotic(&coeffs.build()?, x, s)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare {
            coeffs,
            direction,
            x,
            lambda_min,
            lambda_max,
            steps,
            method,
            tol,
            out,
        } => {
            cmd_compare(
                &coeffs.build()?,
                direction,
                x,
                lambda_min,
                lambda_max,
                steps,
                method,
                tol,
                out,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, seed } => Ok(cmd_verify(suite.into(), seed)),
        Command::Field { csv } => {
            cmd_field(&csv)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

// Exit codes: 0 success, 1 self-check failure, 2 bad input or unsupported
// request, 3 the numerics ran but missed the requested accuracy.
fn exit_for(e: &Error) -> ExitCode {
    match e {
        Error::NonElliptic { .. }
        | Error::Unsupported(_)
        | Error::InvalidInput(_)
        | Error::Csv(_)
        | Error::Io(_) => ExitCode::from(2),
        Error::NoConvergence { .. }
        | Error::ToleranceNotAchieved { .. }
        | Error::CancellationDominated { .. } => ExitCode::from(3),
    }
}

fn main() -> ExitCode {
    // Die quietly like cat/grep when the reader closes the pipe instead of
    // panicking out of println!.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run(Cli::parse().command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_for(&e)
        }
    }
}
