//! Command-line front end for the qahd calculus: expression parsing,
//! command dispatch, JSON and CSV emission, and exit-code contracts for
//! scripts and CI.
//!
//! Exit codes: 0 success (for verify, the law passed), 1 law verification
//! failure, 2 parse or validation error, 3 numerical failure. Errors
//! print one machine-readable JSON object on stderr:
//! {"error": {"kind", "message", "offset"?}}.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qahd::jsonio::{
    expr_to_json, freq_to_json, independence_to_json, law_report_to_json, pairing_to_json,
};
use qahd::tol::DEFAULT_QUAD_TOL;
use qahd::{
    dilate, fourier, gamma_assoc, pair, parse_complex_literal, parse_expr, scaling_expansion,
    verify_euler, verify_independence, verify_quasi_asymptotics, verify_scaling, QahdError,
    QahdTerm, TestFunction,
};

/// Residual threshold for the scaling and Euler verifiers; the probes
/// themselves run at a hundredth of this.
const LAW_TOL: f64 = 1e-7;

/// Scale grid for the scaling law when none is given.
const SCALING_GRID: [f64; 6] = [0.3, 0.7, 1.0, 2.0, 5.0, 10.0];

/// Scale grid for the quasi-asymptotic probes when none is given; the
/// probes need large scales to resolve the 1/ln a convergence.
const QUASI_GRID: [f64; 4] = [1e2, 1e3, 1e4, 1e5];

#[derive(Parser)]
#[command(
    name = "qahd",
    version,
    about = "Calculus of one-dimensional power-log distributions: dilation, \
             regularized pairings, law verification, Fourier tables, and \
             associated gamma functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Pair an expression with a test function; prints {value, error_estimate}.
    Pair {
        /// Expression, e.g. "xplus(0.5,1) - 2*delta(0)".
        expr: String,
        /// Test function: "hermite:c0,c1,..." (coefficients in the monic
        /// Hermite-Gaussian basis at unit width) or "exp:rate".
        #[arg(long)]
        phi: String,
        /// Quadrature tolerance.
        #[arg(long, default_value_t = DEFAULT_QUAD_TOL)]
        tol: f64,
    },
    /// Substitute x -> a x; prints the transformed expression as JSON.
    Dilate {
        expr: String,
        /// Dilation scale, strictly positive.
        #[arg(long)]
        a: f64,
    },
    /// Print degree, order, and log companions per degree component.
    Expand { expr: String },
    /// Print the distributional Fourier transform as frequency-side JSON.
    Fourier { expr: String },
    /// Print a CSV table of associated homogeneous gamma values.
    GammaTable {
        /// Log order of the table; rows cover j = 0..=k.
        #[arg(long)]
        k: u32,
        /// Comma-separated complex arguments, e.g. "0.5,1.5+0.2i".
        #[arg(long)]
        grid: String,
    },
    /// Run one verification law; prints the report, exits 0 iff it passed.
    Verify {
        expr: String,
        #[arg(long, value_enum)]
        law: Law,
        /// Test functions (repeatable); default is the four-function
        /// Hermite battery 1, x, 1+x^2-ish, x^3-ish.
        #[arg(long = "phi")]
        phis: Vec<String>,
        /// Scales (repeatable); scaling defaults to 0.3..10, quasi to
        /// 1e2..1e5. The euler and independence laws take no scales.
        #[arg(long = "a")]
        scales: Vec<f64>,
        /// Residual threshold for scaling and euler (default 1e-7);
        /// quadrature tolerance for independence and quasi (default 1e-9).
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Law {
    Scaling,
    Euler,
    Independence,
    Quasi,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(passed) => {
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => emit_error(&err),
    }
}

fn run(cmd: Cmd) -> qahd::Result<bool> {
    match cmd {
        Cmd::Pair { expr, phi, tol } => {
            let expr = parse_expr(&expr)?;
            let phi = parse_phi(&phi)?;
            let result = pair(&expr, &phi, tol)?;
            print_json(&pairing_to_json(&result));
            Ok(true)
        }
        Cmd::Dilate { expr, a } => {
            let expr = parse_expr(&expr)?;
            print_json(&expr_to_json(&dilate(&expr, a)?));
            Ok(true)
        }
        Cmd::Expand { expr } => {
            let expr = parse_expr(&expr)?;
            let components: Vec<Value> = scaling_expansion(&expr)
                .iter()
                .map(|comp| {
                    json!({
                        "degree": { "re": comp.degree.re, "im": comp.degree.im },
                        "order": comp.order,
                        "companions":
                            comp.companions.iter().map(expr_to_json).collect::<Vec<_>>(),
                    })
                })
                .collect();
            print_json(&Value::Array(components));
            Ok(true)
        }
        Cmd::Fourier { expr } => {
            let expr = parse_expr(&expr)?;
            print_json(&freq_to_json(&fourier(&expr)?));
            Ok(true)
        }
        Cmd::GammaTable { k, grid } => {
            let mut arguments = Vec::new();
            for piece in grid.split(',') {
                arguments.push(parse_complex_literal(piece)?);
            }
            let mut out = String::from("j,k,argument_re,argument_im,value_re,value_im\n");
            for &argument in &arguments {
                for j in 0..=k {
                    let entry = gamma_assoc(j, argument, k)?;
                    let _ = writeln!(
                        out,
                        "{},{},{:.16e},{:.16e},{:.16e},{:.16e}",
                        entry.j,
                        entry.order,
                        entry.argument.re,
                        entry.argument.im,
                        entry.value.re,
                        entry.value.im
                    );
                }
            }
            print!("{out}");
            Ok(true)
        }
        Cmd::Verify { expr, law, phis, scales, tol } => {
            let expr = parse_expr(&expr)?;
            let phis = if phis.is_empty() {
                default_battery()?
            } else {
                phis.iter()
                    .map(|s| parse_phi(s))
                    .collect::<qahd::Result<Vec<_>>>()?
            };
            match law {
                Law::Scaling => {
                    let scales = defaulted(scales, &SCALING_GRID);
                    let report =
                        verify_scaling(&expr, &phis, &scales, tol.unwrap_or(LAW_TOL))?;
                    print_json(&law_report_to_json(&report));
                    Ok(report.passed)
                }
                Law::Euler => {
                    let report = verify_euler(&expr, &phis, tol.unwrap_or(LAW_TOL))?;
                    print_json(&law_report_to_json(&report));
                    Ok(report.passed)
                }
                Law::Independence => {
                    let terms: Vec<QahdTerm> =
                        expr.terms().iter().map(|&(t, _)| t).collect();
                    let report =
                        verify_independence(&terms, &phis, tol.unwrap_or(DEFAULT_QUAD_TOL))?;
                    print_json(&independence_to_json(&report));
                    Ok(report.passed)
                }
                Law::Quasi => {
                    let grid = defaulted(scales, &QUASI_GRID);
                    let report = verify_quasi_asymptotics(
                        &expr,
                        &phis,
                        &grid,
                        tol.unwrap_or(DEFAULT_QUAD_TOL),
                    )?;
                    print_json(&law_report_to_json(&report));
                    Ok(report.passed)
                }
            }
        }
    }
}

/// "hermite:c0,c1,..." is sum_j c_j (2^-j H_j)(x) e^(-x^2) at unit width;
/// "exp:rate" is e^(-rate x) on the positive half-line.
fn parse_phi(spec: &str) -> qahd::Result<TestFunction> {
    let (kind, args) = spec.split_once(':').ok_or_else(|| {
        QahdError::TestFunction(format!(
            "test function spec must look like hermite:1,0,2 or exp:1.5, got \"{spec}\""
        ))
    })?;
    match kind {
        "hermite" => {
            let mut coeffs = Vec::new();
            for piece in args.split(',') {
                let c: f64 = piece.trim().parse().map_err(|_| {
                    QahdError::TestFunction(format!("bad Hermite coefficient \"{piece}\""))
                })?;
                coeffs.push(c);
            }
            TestFunction::hermite(&coeffs)
        }
        "exp" => {
            let rate: f64 = args.trim().parse().map_err(|_| {
                QahdError::TestFunction(format!("bad exponential rate \"{args}\""))
            })?;
            TestFunction::exp_decay(rate)
        }
        other => Err(QahdError::TestFunction(format!(
            "unknown test function kind \"{other}\"; use hermite: or exp:"
        ))),
    }
}

fn default_battery() -> qahd::Result<Vec<TestFunction>> {
    [
        &[1.0][..],
        &[0.0, 1.0],
        &[1.0, 0.0, 1.0],
        &[0.0, 0.0, 0.0, 1.0],
    ]
    .into_iter()
    .map(TestFunction::hermite)
    .collect()
}

fn defaulted(values: Vec<f64>, fallback: &[f64]) -> Vec<f64> {
    if values.is_empty() {
        fallback.to_vec()
    } else {
        values
    }
}

/// Render JSON with every float at 17 significant digits so output is
/// reproducible bit for bit; integers and everything else print plainly.
fn render_json(value: &Value, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => {
            let _ = write!(out, "{b}");
        }
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                let _ = write!(out, "{:.16e}", n.as_f64().expect("a JSON number is i64, u64, or f64"));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("strings always serialize"));
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                render_json(item, out);
            }
            out.push(']');
        }
        Value::Object(fields) => {
            out.push('{');
            for (i, (key, item)) in fields.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(key).expect("strings always serialize"));
                out.push(':');
                render_json(item, out);
            }
            out.push('}');
        }
    }
}

fn print_json(doc: &Value) {
    let mut text = String::new();
    render_json(doc, &mut text);
    println!("{text}");
}

fn error_kind(err: &QahdError) -> &'static str {
    match err {
        QahdError::InvalidTerm(_) => "invalid-term",
        QahdError::NonPositiveScale(_) => "non-positive-scale",
        QahdError::NotDifferentiableInLambda(_) => "not-differentiable",
        QahdError::Unsupported(_) => "unsupported",
        QahdError::OrderZero(_) => "order-zero",
        QahdError::QuadratureFailure { .. } => "quadrature-failure",
        QahdError::PoleArgument { .. } => "pole-argument",
        QahdError::IllConditioned { .. } => "ill-conditioned",
        QahdError::BranchUnsupported(_) => "branch-unsupported",
        QahdError::ZeroFrequency => "zero-frequency",
        QahdError::Parse { .. } => "parse",
        QahdError::Precondition(_) => "precondition",
        QahdError::TestFunction(_) => "test-function",
    }
}

/// Numerical machinery that ran and failed exits 3; everything else the
/// caller could have validated exits 2.
fn exit_code_for(err: &QahdError) -> u8 {
    match err {
        QahdError::QuadratureFailure { .. }
        | QahdError::IllConditioned { .. }
        | QahdError::BranchUnsupported(_)
        | QahdError::ZeroFrequency => 3,
        _ => 2,
    }
}

fn emit_error(err: &QahdError) -> ExitCode {
    let mut body = json!({
        "kind": error_kind(err),
        "message": err.to_string(),
    });
    if let QahdError::Parse { offset, .. } = err {
        body["offset"] = json!(offset);
    }
    let mut text = String::new();
    render_json(&json!({ "error": body }), &mut text);
    eprintln!("{text}");
    ExitCode::from(exit_code_for(err))
}
