//! Named identity suites behind `fraxform verify`.

use fraxform::atoms::TimeExpr;
use fraxform::oracle::{
    classical_transform, compare_engine_oracle, quad_fourier_semi_infinite, quad_semi_infinite,
    FourierKernel, QuadratureConfig,
};
use fraxform::order::Order;
use fraxform::rational::{pow_exact, rat, ratio, render, Rational};
use fraxform::specfun::EvalConfig;
use fraxform::transform::{
    convolution_identity_check, derivative_rule, example1_consistency, forward, inverse,
    parseval_check, scale_rule, DerivativeRule, TransformKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::errors::CliError;
use crate::output::CaseRecord;

pub struct SuiteOutcome {
    pub cases: Vec<CaseRecord>,
    pub skipped: Option<String>,
}

fn random_expr(rng: &mut ChaCha8Rng, alpha: &Order) -> TimeExpr {
    let n = rng.gen_range(0..=4);
    let atoms: Vec<(Rational, Rational)> = (0..n)
        .map(|_| {
            (
                ratio(rng.gen_range(-50..=50), rng.gen_range(1..=12)),
                ratio(rng.gen_range(1..=10), 1),
            )
        })
        .collect();
    TimeExpr::new(alpha.clone(), atoms).expect("positive rates")
}

pub fn run_suite(
    suite: &str,
    alpha: &Order,
    seed: u64,
    tol: f64,
) -> Result<SuiteOutcome, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match suite {
        "roundtrip" => {
            let mut cases = Vec::new();
            for i in 0..50 {
                let e = random_expr(&mut rng, alpha);
                for kind in [TransformKind::Sine, TransformKind::Cosine] {
                    let back = inverse(&forward(&e, kind)?)?;
                    cases.push(CaseRecord::exact(
                        format!("roundtrip[{i}].{}", kind.name()),
                        back == e,
                    ));
                }
            }
            Ok(SuiteOutcome {
                cases,
                skipped: None,
            })
        }
        "derivative-rules" => {
            let mut cases = Vec::new();
            for i in 0..50 {
                let e = random_expr(&mut rng, alpha);
                let f0 = e.value_at_zero();
                let fa0 = e.alpha_derivative_at_zero();
                for rule in [
                    DerivativeRule::CosineAlpha,
                    DerivativeRule::CosineTwoAlpha,
                    DerivativeRule::SineAlpha,
                    DerivativeRule::SineTwoAlpha,
                ] {
                    let via_rule =
                        derivative_rule(&forward(&e, rule.input_kind())?, rule, &f0, &fa0)?;
                    let via_atoms = forward(&e.derivative(rule.order()), rule.output_kind())?;
                    cases.push(CaseRecord::exact(
                        format!("derivative[{i}].{rule:?}"),
                        via_rule == via_atoms,
                    ));
                }
            }
            Ok(SuiteOutcome {
                cases,
                skipped: None,
            })
        }
        "scaling" => {
            // integer bases whose α-th power is exactly rational
            let bases: Vec<i64> = [1i64, 2, 3, 4, 7, 9, 10, 16, 81, 128, 1024]
                .into_iter()
                .filter(|a| pow_exact(&rat(*a), alpha.as_rational()).is_some())
                .collect();
            let mut cases = Vec::new();
            for i in 0..50 {
                let e = random_expr(&mut rng, alpha);
                let a = rat(bases[rng.gen_range(0..bases.len())]);
                let lambda = pow_exact(&a, alpha.as_rational()).expect("filtered");
                for kind in [TransformKind::Sine, TransformKind::Cosine] {
                    let scaled = scale_rule(&forward(&e, kind)?, &a)?;
                    let mapped = TimeExpr::new(
                        alpha.clone(),
                        e.atoms()
                            .iter()
                            .map(|at| (at.coef.clone(), &at.rate * &lambda)),
                    )
                    .expect("positive rates");
                    cases.push(CaseRecord::exact(
                        format!("scaling[{i}].{}.a={}", kind.name(), render(&a)),
                        scaled == forward(&mapped, kind)?,
                    ));
                }
            }
            Ok(SuiteOutcome {
                cases,
                skipped: None,
            })
        }
        "convolution" => {
            if !alpha.is_one() {
                return Ok(SuiteOutcome {
                    cases: Vec::new(),
                    skipped: Some(format!(
                        "unsupported semantics at order {alpha} < 1: the defining integrals converge classically only at order 1"
                    )),
                });
            }
            let cfg = QuadratureConfig::default();
            let f = TimeExpr::single(Order::one(), rat(1), rat(1)).expect("positive rate");
            let mut cases = Vec::new();
            for x in [0.0f64, 0.5, 1.0, 2.0] {
                let check =
                    convolution_identity_check(&f, &f, x, TransformKind::Cosine, &cfg, tol)?;
                cases.push(CaseRecord::numeric(
                    format!("convolution.cosine.x={x}"),
                    check.lhs,
                    check.rhs,
                    check.tolerance,
                ));
                let check = convolution_identity_check(&f, &f, x, TransformKind::Sine, &cfg, tol)?;
                cases.push(CaseRecord::numeric(
                    format!("convolution.sine.x={x}"),
                    check.lhs,
                    check.rhs,
                    check.tolerance,
                ));
            }
            Ok(SuiteOutcome {
                cases,
                skipped: None,
            })
        }
        "parseval" => {
            if !alpha.is_one() {
                return Ok(SuiteOutcome {
                    cases: Vec::new(),
                    skipped: Some(format!(
                        "unsupported semantics at order {alpha} < 1: the defining integrals converge classically only at order 1"
                    )),
                });
            }
            let cfg = QuadratureConfig::default();
            let f = TimeExpr::single(Order::one(), rat(1), rat(1)).expect("positive rate");
            let mut cases = Vec::new();
            for kind in [TransformKind::Cosine, TransformKind::Sine] {
                let check = parseval_check(&f, kind, &cfg, tol)?;
                cases.push(CaseRecord::numeric(
                    format!("parseval.{}", kind.name()),
                    check.lhs,
                    check.rhs,
                    check.tolerance,
                ));
            }
            Ok(SuiteOutcome {
                cases,
                skipped: None,
            })
        }
        "example1" => {
            let mut cases = Vec::new();
            for i in 0..50 {
                let a = ratio(rng.gen_range(1..=1000), rng.gen_range(1..=100));
                let check = example1_consistency(&a)?;
                cases.push(CaseRecord::exact(
                    format!("example1[{i}].a={}", render(&a)),
                    check.holds,
                ));
            }
            Ok(SuiteOutcome {
                cases,
                skipped: None,
            })
        }
        "oracle" => {
            let cfg = QuadratureConfig::default();
            let mut cases = Vec::new();
            let pi = std::f64::consts::PI;
            let analytic: Vec<(&str, f64, f64)> = vec![
                (
                    "int e^-x",
                    quad_semi_infinite(|x| (-x).exp(), &cfg)?.value,
                    1.0,
                ),
                (
                    "int x e^-x",
                    quad_semi_infinite(|x| x * (-x).exp(), &cfg)?.value,
                    1.0,
                ),
                (
                    "int 4/(1+w^2)^2",
                    quad_semi_infinite(|w| 4.0 / (1.0 + w * w).powi(2), &cfg)?.value,
                    pi,
                ),
                (
                    "int e^-x sin x",
                    quad_fourier_semi_infinite(|x| (-x).exp(), 1.0, FourierKernel::Sin, &cfg)?
                        .value,
                    0.5,
                ),
                (
                    "int cos(2x)/(1+x^2)",
                    quad_fourier_semi_infinite(
                        |x| 1.0 / (1.0 + x * x),
                        2.0,
                        FourierKernel::Cos,
                        &cfg,
                    )?
                    .value,
                    pi / 2.0 * (-2.0f64).exp(),
                ),
                (
                    "classical sine transform of e^-2x at w=1",
                    classical_transform(|x: f64| (-2.0 * x).exp(), 1.0, TransformKind::Sine, &cfg)?,
                    0.4,
                ),
            ];
            for (name, got, expected) in analytic {
                cases.push(CaseRecord::numeric(name, got, expected, tol));
            }
            let eval = EvalConfig::default();
            for (coeffs, name) in [
                (vec![(rat(1), rat(2))], "E(-2t)"),
                (vec![(rat(3), rat(1)), (rat(-1), rat(4))], "3E(-t)-E(-4t)"),
            ] {
                let e = TimeExpr::new(Order::one(), coeffs).expect("positive rates");
                for kind in [TransformKind::Sine, TransformKind::Cosine] {
                    let dev = compare_engine_oracle(
                        &e,
                        kind,
                        &[0.5, 1.0, 2.0, 5.0],
                        &eval,
                        &cfg,
                    )?;
                    cases.push(CaseRecord::numeric(
                        format!("engine-vs-oracle.{}.{name}", kind.name()),
                        dev,
                        0.0,
                        1e-8,
                    ));
                }
            }
            Ok(SuiteOutcome {
                cases,
                skipped: None,
            })
        }
        other => Err(CliError::usage(format!(
            "unknown suite `{other}`; expected one of roundtrip, derivative-rules, scaling, convolution, parseval, example1, oracle"
        ))),
    }
}
