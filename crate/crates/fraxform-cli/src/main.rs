//! `fraxform` — transforms, equation solving and identity verification on
//! the command line.
//!
//! Subcommands: `transform`, `solve`, `verify`, `eval`, `table`.
//! Exit codes: 0 success, 2 parse/usage error, 3 unsupported-method error,
//! 4 numeric-accuracy error, 5 identity failure.

mod errors;
mod output;
mod suites;

use clap::{Parser, Subcommand, ValueEnum};
use fraxform::ode::solve;
use fraxform::order::Order;
use fraxform::parse::{parse_expr, parse_problem, parse_rational, parse_spectral};
use fraxform::rational::{render, to_f64};
use fraxform::specfun::EvalConfig;
use fraxform::transform::{forward, inverse, SpectralExpr, TransformKind};

use errors::{CliError, EXIT_ACCURACY};
use output::*;

#[derive(Parser)]
#[command(
    name = "fraxform",
    version,
    about = "Fractional-order Fourier sine/cosine transform calculus on decay atoms"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Sine,
    Cosine,
}

impl From<KindArg> for TransformKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Sine => TransformKind::Sine,
            KindArg::Cosine => TransformKind::Cosine,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Apply the forward or inverse transform to an expression.
    Transform {
        /// Transform kind.
        #[arg(long, value_enum, default_value = "sine")]
        kind: KindArg,
        /// Invert a spectral value instead of transforming an atom expression.
        #[arg(long)]
        inverse: bool,
        /// Order alpha in (0, 1], as an exact rational (e.g. 9/10 or 0.9).
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        /// `E(-a*t^a)` expression, or a rational function in s with --inverse.
        expr: String,
    },
    /// Solve c2*y^(2a) + c0*y = forcing with one initial datum.
    Solve {
        #[arg(long)]
        alpha: String,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        /// e.g. "y^(2a) - 9*y = 50*E(-2*t^a); y(0)=1"
        problem: String,
    },
    /// Run a named identity suite and report measured deviations.
    Verify {
        /// roundtrip | derivative-rules | scaling | convolution | parseval | example1 | oracle
        suite: String,
        #[arg(long)]
        alpha: String,
        /// Numeric check tolerance (identity suites only).
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Seed for sampled expressions.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
    /// Evaluate an expression on a time grid, CSV columns `t,value`.
    Eval {
        #[arg(long)]
        alpha: String,
        /// Comma-separated evaluation points, e.g. 0,0.5,1.
        #[arg(long)]
        grid: String,
        /// Series tolerance.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        expr: String,
    },
    /// Print transform-table rows for decay atoms.
    Table {
        /// Restrict to one kind; both columns by default.
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
        /// Comma-separated decay rates.
        #[arg(long, default_value = "1,2,3")]
        rates: String,
        #[arg(long, default_value = "1")]
        alpha: String,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
    },
}

fn parse_order(text: &str) -> Result<Order, CliError> {
    let value = parse_rational(text)
        .map_err(|e| CliError::usage(format!("invalid --alpha: {e}")))?;
    Ok(Order::new(value)?)
}

/// EvalConfig from the tolerance flag and the FRAXFORM_MAX_TERMS override.
fn eval_config(tol: f64) -> Result<EvalConfig, CliError> {
    let mut max_terms = EvalConfig::default().max_terms;
    if let Ok(text) = std::env::var("FRAXFORM_MAX_TERMS") {
        max_terms = text.parse().map_err(|_| {
            CliError::usage(format!("FRAXFORM_MAX_TERMS must be an integer, got {text:?}"))
        })?;
    }
    Ok(EvalConfig::new(tol, max_terms, EvalConfig::default().domain_cap)?)
}

fn emit_json<T: serde::Serialize>(doc: &T) {
    println!("{}", serde_json::to_string_pretty(doc).expect("serializable"));
}

fn run_transform(
    kind: TransformKind,
    inverse_direction: bool,
    alpha: &Order,
    format: FormatArg,
    expr: &str,
) -> Result<(), CliError> {
    if format == FormatArg::Csv {
        return Err(CliError::usage("transform does not support csv output"));
    }
    let mut steps = Vec::new();
    let (direction, result, roundtrip_exact) = if inverse_direction {
        let value = parse_spectral(expr)?;
        let spectral = SpectralExpr::new(alpha.clone(), kind, value)?;
        let terms = spectral.value().partial_fractions()?;
        let terms_text = if terms.is_empty() {
            "0".to_string()
        } else {
            terms
                .iter()
                .map(|t| t.to_string())
                .collect::<Vec<_>>()
                .join(" + ")
        };
        steps.push(Step {
            rule: "partial_fractions".into(),
            before: spectral.value().to_string(),
            after: terms_text.clone(),
        });
        let time = inverse(&spectral)?;
        steps.push(Step {
            rule: format!("table.inverse.{}", kind.name()),
            before: terms_text,
            after: time.to_string(),
        });
        let roundtrip = forward(&time, kind)? == spectral;
        ("inverse", time.to_string(), roundtrip)
    } else {
        let time = parse_expr(expr, alpha)?;
        let spectral = forward(&time, kind)?;
        steps.push(Step {
            rule: format!("table.forward.{}", kind.name()),
            before: time.to_string(),
            after: spectral.to_string(),
        });
        let roundtrip = inverse(&spectral)? == time;
        ("forward", spectral.to_string(), roundtrip)
    };
    let doc = TransformDoc {
        command: "transform",
        input: expr.to_string(),
        alpha: alpha.to_string(),
        kind: kind.name().to_string(),
        direction,
        steps,
        result,
        checks: TransformChecks { roundtrip_exact },
    };
    match format {
        FormatArg::Json => emit_json(&doc),
        FormatArg::Text => {
            for s in &doc.steps {
                println!("{}: {} => {}", s.rule, s.before, s.after);
            }
            println!("result: {}", doc.result);
        }
        FormatArg::Csv => unreachable!(),
    }
    Ok(())
}

fn run_solve(alpha: &Order, format: FormatArg, problem_text: &str) -> Result<(), CliError> {
    if format == FormatArg::Csv {
        return Err(CliError::usage("solve does not support csv output"));
    }
    let problem = parse_problem(problem_text, alpha)?;
    let report = solve(&problem)?;

    let forcing_spectral = forward(&problem.forcing, problem.route)?;
    let two_init = &problem.initial * &fraxform::rational::rat(2);
    let rule_step_after = match problem.route {
        TransformKind::Sine => format!("-s^2*Y + ({})*s", render(&two_init)),
        TransformKind::Cosine => format!("-s^2*Y - ({})", render(&two_init)),
    };
    let pf_text = if report.partial_fractions.is_empty() {
        "0".to_string()
    } else {
        report
            .partial_fractions
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(" + ")
    };
    let steps = vec![
        Step {
            rule: format!("table.forward.{}", problem.route.name()),
            before: problem.forcing.to_string(),
            after: forcing_spectral.to_string(),
        },
        Step {
            rule: format!("rule.derivative.{}.2a", problem.route.name()),
            before: "y^(2a)".into(),
            after: rule_step_after,
        },
        Step {
            rule: "algebra.solve_for_Y".into(),
            before: report.transformed_equation.clone(),
            after: format!("Y = {}", report.spectral_solution),
        },
        Step {
            rule: "partial_fractions".into(),
            before: report.spectral_solution.to_string(),
            after: pf_text.clone(),
        },
        Step {
            rule: format!("table.inverse.{}", problem.route.name()),
            before: pf_text,
            after: report.solution.to_string(),
        },
    ];
    let initial_reproduced = match problem.route {
        TransformKind::Sine => report.solution.value_at_zero() == problem.initial,
        TransformKind::Cosine => report.solution.alpha_derivative_at_zero() == problem.initial,
    };
    let doc = SolveDoc {
        command: "solve",
        input: problem_text.to_string(),
        alpha: alpha.to_string(),
        route: problem.route.name().to_string(),
        steps,
        result: SolveResult {
            solution: report.solution.to_string(),
            atoms: report
                .solution
                .atoms()
                .iter()
                .map(|a| [render(&a.coef), render(&a.rate)])
                .collect(),
        },
        checks: SolveChecks {
            residual_exact_zero: report.residual_exact.is_zero(),
            initial_reproduced,
            residual_numeric_alpha1: report.residual_numeric_alpha1,
        },
    };
    match format {
        FormatArg::Json => emit_json(&doc),
        FormatArg::Text => {
            for s in &doc.steps {
                println!("{}:", s.rule);
                println!("  before: {}", s.before);
                println!("  after:  {}", s.after);
            }
            println!("solution: {}", doc.result.solution);
        }
        FormatArg::Csv => unreachable!(),
    }
    if !doc.checks.residual_exact_zero || !doc.checks.initial_reproduced {
        return Err(CliError::identity_failure(
            "solver produced a non-verifying solution",
        ));
    }
    Ok(())
}

fn run_verify(
    suite: &str,
    alpha: &Order,
    tol: f64,
    seed: u64,
    format: FormatArg,
) -> Result<(), CliError> {
    let outcome = suites::run_suite(suite, alpha, seed, tol)?;
    let passed = outcome.cases.iter().filter(|c| c.passed()).count();
    let failed = outcome.cases.len() - passed;
    let doc = VerifyDoc {
        command: "verify",
        suite: suite.to_string(),
        alpha: alpha.to_string(),
        skipped: outcome.skipped.is_some(),
        skip_reason: outcome.skipped,
        cases: outcome.cases,
        passed,
        failed,
    };
    match format {
        FormatArg::Json => emit_json(&doc),
        FormatArg::Text => {
            if let Some(reason) = &doc.skip_reason {
                println!("{suite}: skipped ({reason})");
            }
            for c in &doc.cases {
                match (c.lhs, c.rhs, c.absdiff) {
                    (Some(l), Some(r), Some(d)) => println!(
                        "{}: {} (lhs={l:.9}, rhs={r:.9}, absdiff={d:.3e})",
                        c.name, c.verdict
                    ),
                    _ => println!("{}: {} (exact)", c.name, c.verdict),
                }
            }
            println!("passed {} / failed {}", doc.passed, doc.failed);
        }
        FormatArg::Csv => {
            println!("name,lhs,rhs,absdiff,tolerance,verdict");
            for c in &doc.cases {
                println!(
                    "{},{},{},{},{},{}",
                    c.name,
                    c.lhs.map(|v| format!("{v:.12}")).unwrap_or_default(),
                    c.rhs.map(|v| format!("{v:.12}")).unwrap_or_default(),
                    c.absdiff.map(|v| format!("{v:.3e}")).unwrap_or_default(),
                    c.tolerance.map(|v| format!("{v:.3e}")).unwrap_or_default(),
                    c.verdict
                );
            }
        }
    }
    if failed > 0 {
        return Err(CliError::identity_failure(format!(
            "{failed} identity case(s) failed in suite {suite}"
        )));
    }
    Ok(())
}

fn run_eval(
    alpha: &Order,
    grid_text: &str,
    tol: f64,
    format: FormatArg,
    expr: &str,
) -> Result<(), CliError> {
    let cfg = eval_config(tol)?;
    let e = parse_expr(expr, alpha)?;
    let mut grid = Vec::new();
    for part in grid_text.split(',') {
        let value = parse_rational(part.trim())
            .map_err(|err| CliError::usage(format!("invalid --grid entry {part:?}: {err}")))?;
        let t = to_f64(&value);
        if t < 0.0 {
            return Err(CliError::usage("grid points must be non-negative"));
        }
        grid.push(t);
    }
    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for &t in &grid {
        match e.eval(t, &cfg) {
            Ok(value) => rows.push(EvalRow { t, value }),
            Err(err) => errors.push(EvalError {
                t,
                message: err.to_string(),
            }),
        }
    }
    let doc = EvalDoc {
        command: "eval",
        input: expr.to_string(),
        alpha: alpha.to_string(),
        rows,
        errors,
    };
    match format {
        FormatArg::Json => emit_json(&doc),
        FormatArg::Csv => {
            println!("t,value");
            for row in &doc.rows {
                println!("{},{:.10}", row.t, row.value);
            }
        }
        FormatArg::Text => {
            for row in &doc.rows {
                println!("t = {:<8} value = {:.10}", row.t, row.value);
            }
        }
    }
    for err in &doc.errors {
        eprintln!(
            "{}",
            serde_json::to_string(&Diagnostic {
                error: DiagnosticBody {
                    code: EXIT_ACCURACY,
                    kind: "accuracy".into(),
                    message: format!("t = {}: {}", err.t, err.message),
                },
            })
            .expect("serializable")
        );
    }
    if !doc.errors.is_empty() {
        std::process::exit(EXIT_ACCURACY);
    }
    Ok(())
}

fn run_table(
    kind: Option<TransformKind>,
    rates_text: &str,
    alpha: &Order,
    format: FormatArg,
) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for part in rates_text.split(',') {
        let rate = parse_rational(part.trim())
            .map_err(|err| CliError::usage(format!("invalid --rates entry {part:?}: {err}")))?;
        let atom = fraxform::atoms::TimeExpr::single(
            alpha.clone(),
            fraxform::rational::rat(1),
            rate.clone(),
        )?;
        let want = |k: TransformKind| kind.is_none() || kind == Some(k);
        rows.push(TableRow {
            atom: atom.to_string(),
            sine: want(TransformKind::Sine)
                .then(|| forward(&atom, TransformKind::Sine).map(|f| f.to_string()))
                .transpose()?,
            cosine: want(TransformKind::Cosine)
                .then(|| forward(&atom, TransformKind::Cosine).map(|f| f.to_string()))
                .transpose()?,
        });
    }
    let doc = TableDoc {
        command: "table",
        alpha: alpha.to_string(),
        rows,
    };
    match format {
        FormatArg::Json => emit_json(&doc),
        FormatArg::Csv => {
            println!("atom,sine,cosine");
            for r in &doc.rows {
                println!(
                    "{},{},{}",
                    r.atom,
                    r.sine.as_deref().unwrap_or(""),
                    r.cosine.as_deref().unwrap_or("")
                );
            }
        }
        FormatArg::Text => {
            for r in &doc.rows {
                println!(
                    "{}  sine: {}  cosine: {}",
                    r.atom,
                    r.sine.as_deref().unwrap_or("-"),
                    r.cosine.as_deref().unwrap_or("-")
                );
            }
        }
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Transform {
            kind,
            inverse,
            alpha,
            format,
            expr,
        } => run_transform(kind.into(), inverse, &parse_order(&alpha)?, format, &expr),
        Command::Solve {
            alpha,
            format,
            problem,
        } => run_solve(&parse_order(&alpha)?, format, &problem),
        Command::Verify {
            suite,
            alpha,
            tol,
            seed,
            format,
        } => run_verify(&suite, &parse_order(&alpha)?, tol, seed, format),
        Command::Eval {
            alpha,
            grid,
            tol,
            format,
            expr,
        } => run_eval(&parse_order(&alpha)?, &grid, tol, format, &expr),
        Command::Table {
            kind,
            rates,
            alpha,
            format,
        } => run_table(
            kind.map(TransformKind::from),
            &rates,
            &parse_order(&alpha)?,
            format,
        ),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = dispatch(cli) {
        eprintln!(
            "{}",
            serde_json::to_string(&Diagnostic {
                error: DiagnosticBody {
                    code: e.code,
                    kind: e.kind.to_string(),
                    message: e.message,
                },
            })
            .expect("serializable")
        );
        std::process::exit(e.code);
    }
}
