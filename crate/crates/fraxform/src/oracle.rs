//! Independent classical quadrature oracle for order α = 1.
//!
//! Grounds the formal transform algebra in analysis: semi-infinite integrals
//! of exponentially or algebraically (O(u⁻²)) decaying integrands, and
//! Fourier-kernel integrals ∫₀^∞ f(x)·{cos,sin}(ωx) dx handled by
//! integrating between consecutive kernel zeros and accelerating the
//! resulting alternating series by repeated averaging.
//!
//! The quadrature core never touches the transform or spectral modules;
//! engine-versus-oracle comparisons live in [`compare_engine_oracle`], which
//! is the one deliberate bridge between the two sides.

use thiserror::Error;

use crate::atoms::TimeExpr;
use crate::specfun::EvalConfig;
use crate::transform::{forward, TransformError, TransformKind};

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("accuracy budget exhausted: error estimate {achieved:.3e}, needed {needed:.3e}")]
    AccuracyBudget { achieved: f64, needed: f64 },
    #[error("invalid quadrature config: {reason}")]
    InvalidConfig { reason: String },
}

/// Tolerances and budgets for the adaptive quadrature.
#[derive(Debug, Clone)]
pub struct QuadratureConfig {
    /// Absolute tolerance, in (0, 1e-2].
    pub abs_tol: f64,
    /// Relative tolerance, in (0, 1e-2].
    pub rel_tol: f64,
    /// Total interval-subdivision budget, at least 50.
    pub max_subdivisions: usize,
    /// For oscillatory integrals: the largest abscissa considered before the
    /// alternating-tail bound must have certified the remainder.
    pub tail_cut: f64,
}

impl QuadratureConfig {
    // negated comparisons so that NaN inputs are rejected too
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(
        abs_tol: f64,
        rel_tol: f64,
        max_subdivisions: usize,
        tail_cut: f64,
    ) -> Result<Self, OracleError> {
        if !(abs_tol > 0.0 && abs_tol <= 1e-2) || !(rel_tol > 0.0 && rel_tol <= 1e-2) {
            return Err(OracleError::InvalidConfig {
                reason: format!("tolerances must lie in (0, 1e-2], got {abs_tol}, {rel_tol}"),
            });
        }
        if max_subdivisions < 50 {
            return Err(OracleError::InvalidConfig {
                reason: format!("max_subdivisions must be >= 50, got {max_subdivisions}"),
            });
        }
        if !(tail_cut > 0.0) {
            return Err(OracleError::InvalidConfig {
                reason: format!("tail_cut must be positive, got {tail_cut}"),
            });
        }
        Ok(QuadratureConfig {
            abs_tol,
            rel_tol,
            max_subdivisions,
            tail_cut,
        })
    }

    fn needed(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
            tail_cut: 1e6,
        }
    }
}

/// Integral value with an honest error estimate.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
}

// 21-point Gauss-Kronrod pair (10-point Gauss embedded).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

/// One Gauss-Kronrod panel: (kronrod value, |kronrod − gauss| estimate).
fn gk21(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = 0.0;
    for j in 0..10 {
        let x = half * XGK[j];
        let fsum = f(center - x) + f(center + x);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

/// Adaptive integration over a finite interval, worst-panel-first.
pub fn quad_finite(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult, OracleError> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error_estimate: 0.0,
        });
    }
    let (value, error) = gk21(&f, a, b);
    let mut panels = vec![Panel { a, b, value, error }];
    for _ in 0..cfg.max_subdivisions {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let total_err: f64 = panels.iter().map(|p| p.error).sum();
        if total_err <= cfg.needed(total) {
            return Ok(QuadResult {
                value: total,
                error_estimate: total_err,
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let Panel { a, b, .. } = panels.swap_remove(worst);
        let mid = 0.5 * (a + b);
        for (lo, hi) in [(a, mid), (mid, b)] {
            let (value, error) = gk21(&f, lo, hi);
            panels.push(Panel {
                a: lo,
                b: hi,
                value,
                error,
            });
        }
    }
    let total: f64 = panels.iter().map(|p| p.value).sum();
    let total_err: f64 = panels.iter().map(|p| p.error).sum();
    if total_err <= cfg.needed(total) {
        Ok(QuadResult {
            value: total,
            error_estimate: total_err,
        })
    } else {
        Err(OracleError::AccuracyBudget {
            achieved: total_err,
            needed: cfg.needed(total),
        })
    }
}

/// ∫₀^∞ f, for integrands that decay exponentially or at least like u⁻².
///
/// The half line is mapped onto (0, 1) by x = t/(1−t); under the contract on
/// f the mapped integrand is bounded, and the adaptive panel refinement
/// absorbs the compressed tail.
pub fn quad_semi_infinite(
    f: impl Fn(f64) -> f64,
    cfg: &QuadratureConfig,
) -> Result<QuadResult, OracleError> {
    let mapped = move |t: f64| {
        let one_minus = 1.0 - t;
        let x = t / one_minus;
        let v = f(x) / (one_minus * one_minus);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    quad_finite(mapped, 0.0, 1.0, cfg)
}

/// Oscillation kernel selector for [`quad_fourier_semi_infinite`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourierKernel {
    Cos,
    Sin,
}

/// ∫₀^∞ f(x)·{cos,sin}(ωx) dx for a smooth decaying envelope f and ω ≥ 0.
///
/// Integrates between consecutive kernel zeros x_k = kπ/ω, then sums the
/// alternating segment series with repeated averaging (Euler acceleration).
/// The remainder after the last segment is certified by the alternating
/// bound |R| ≤ |last segment| once the segments decrease in magnitude.
pub fn quad_fourier_semi_infinite(
    f: impl Fn(f64) -> f64,
    omega: f64,
    kernel: FourierKernel,
    cfg: &QuadratureConfig,
) -> Result<QuadResult, OracleError> {
    assert!(omega >= 0.0, "oscillation frequency must be non-negative");
    if omega == 0.0 {
        return match kernel {
            FourierKernel::Cos => quad_semi_infinite(f, cfg),
            FourierKernel::Sin => Ok(QuadResult {
                value: 0.0,
                error_estimate: 0.0,
            }),
        };
    }
    let g = |x: f64| {
        f(x) * match kernel {
            FourierKernel::Cos => (omega * x).cos(),
            FourierKernel::Sin => (omega * x).sin(),
        }
    };
    let period = std::f64::consts::PI / omega;
    // Per-segment budget: a half period is smooth, so a small budget is ample.
    let seg_cfg = QuadratureConfig {
        abs_tol: (0.02 * cfg.abs_tol).min(1e-2),
        rel_tol: cfg.rel_tol.min(1e-6),
        max_subdivisions: 200,
        tail_cut: cfg.tail_cut,
    };
    let max_segments = ((cfg.tail_cut / period).ceil() as usize).clamp(8, 100_000);
    let g = &g;
    let mut segments: Vec<f64> = Vec::new();
    let mut quad_err = 0.0;
    let mut best: Option<QuadResult> = None;
    for k in 0..max_segments {
        let a = k as f64 * period;
        let b = a + period;
        let seg = quad_finite(g, a, b, &seg_cfg)?;
        segments.push(seg.value);
        quad_err += seg.error_estimate;
        if segments.len() >= 4 {
            let (accel, accel_err) = euler_accelerate(&segments);
            let tail_bound = segments.last().unwrap().abs();
            let total_err = accel_err + quad_err + tail_bound.min(accel_err.max(f64::MIN_POSITIVE));
            let estimate = QuadResult {
                value: accel,
                error_estimate: total_err,
            };
            if total_err <= cfg.needed(accel) {
                return Ok(estimate);
            }
            match &best {
                Some(b) if b.error_estimate <= total_err => {}
                _ => best = Some(estimate),
            }
        }
    }
    let best = best.unwrap_or(QuadResult {
        value: segments.iter().sum(),
        error_estimate: f64::INFINITY,
    });
    Err(OracleError::AccuracyBudget {
        achieved: best.error_estimate,
        needed: cfg.needed(best.value),
    })
}

/// Repeated averaging of the partial-sum sequence of Σ segments.
///
/// For an alternating series with smoothly decaying terms each averaging
/// pass gains roughly one order; the returned error estimate is the spread
/// of the last two diagonal entries.
fn euler_accelerate(segments: &[f64]) -> (f64, f64) {
    let mut row: Vec<f64> = Vec::with_capacity(segments.len());
    let mut acc = 0.0;
    for s in segments {
        acc += s;
        row.push(acc);
    }
    let mut prev_diag = *row.last().unwrap();
    let mut diag = prev_diag;
    while row.len() > 1 {
        for i in 0..row.len() - 1 {
            row[i] = 0.5 * (row[i] + row[i + 1]);
        }
        row.pop();
        prev_diag = diag;
        diag = *row.last().unwrap();
    }
    (diag, (diag - prev_diag).abs().max(f64::EPSILON * diag.abs()))
}

/// The classical transform 2·∫₀^∞ f(x)·{cos,sin}(ωx) dx at α = 1.
pub fn classical_transform(
    f: impl Fn(f64) -> f64,
    omega: f64,
    kind: TransformKind,
    cfg: &QuadratureConfig,
) -> Result<f64, OracleError> {
    let kernel = match kind {
        TransformKind::Cosine => FourierKernel::Cos,
        TransformKind::Sine => FourierKernel::Sin,
    };
    Ok(2.0 * quad_fourier_semi_infinite(f, omega, kernel, cfg)?.value)
}

/// Max deviation over an ω grid between the engine's exact transform of a
/// classical (α = 1) expression and direct quadrature of the defining
/// integral. The two sides share no code.
pub fn compare_engine_oracle(
    e: &TimeExpr,
    kind: TransformKind,
    omega_grid: &[f64],
    _eval: &EvalConfig,
    quad: &QuadratureConfig,
) -> Result<f64, TransformError> {
    let engine = forward(e, kind)?;
    let classical = e.classical_fn()?;
    let mut worst = 0.0f64;
    for &omega in omega_grid {
        let lhs = engine.value().eval_f64(omega);
        let rhs = classical_transform(&classical, omega, kind, quad)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}
