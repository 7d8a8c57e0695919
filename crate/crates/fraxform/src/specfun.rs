//! Numerical evaluation of Γ and the Mittag-Leffler family.
//!
//! Three entire-series functions drive every kernel in this crate:
//!
//! - `E_α(u)   = Σ_{k≥0} u^k / Γ(1 + kα)`            (decay atom kernel)
//! - `cos_α(v) = Σ_{k≥0} (−1)^k v^{2k} / Γ(1 + 2kα)`   (even kernel)
//! - `sin_α(v) = Σ_{k≥0} (−1)^k v^{2k+1} / Γ(1 + (2k+1)α)` (odd kernel)
//!
//! All three are summed by a term-ratio recurrence with compensated (Kahan)
//! accumulation. Summation refuses to return a value whose estimated
//! rounding/cancellation error exceeds the requested tolerance: the caller
//! gets a `PrecisionLoss` error instead of garbage. There is no asymptotic
//! continuation; arguments beyond `domain_cap` are rejected outright.

use thiserror::Error;

use crate::order::Order;

/// Largest argument for which Γ(x) is finite in f64.
const GAMMA_OVERFLOW_ARG: f64 = 171.6;

/// Safety factor applied to the ulp-level error estimate of a summed series.
const ROUNDING_SAFETY: f64 = 4.0;

#[derive(Debug, Error, PartialEq)]
pub enum SpecfunError {
    #[error("gamma pole at non-positive integer x = {x}")]
    GammaPole { x: f64 },
    #[error("argument {value} exceeds series domain cap {cap}")]
    DomainCap { value: f64, cap: f64 },
    #[error("estimated summation error {estimated:.3e} exceeds tolerance {required:.3e}")]
    PrecisionLoss { estimated: f64, required: f64 },
    #[error("series did not converge within {terms} terms")]
    Truncation { terms: usize },
    #[error("invalid evaluation config: {reason}")]
    InvalidConfig { reason: String },
}

/// Truncation and tolerance control for series evaluation.
#[derive(Debug, Clone)]
pub struct EvalConfig {
    /// Relative tolerance demanded of a returned value. Must lie in (0, 1e-3).
    pub tol: f64,
    /// Hard cap on the number of series terms. At least 16.
    pub max_terms: usize,
    /// Largest |argument| accepted for series summation.
    pub domain_cap: f64,
}

impl EvalConfig {
    // negated comparisons so that NaN inputs are rejected too
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(tol: f64, max_terms: usize, domain_cap: f64) -> Result<Self, SpecfunError> {
        if !(tol > 0.0 && tol < 1e-3) {
            return Err(SpecfunError::InvalidConfig {
                reason: format!("tol must lie in (0, 1e-3), got {tol}"),
            });
        }
        if max_terms < 16 {
            return Err(SpecfunError::InvalidConfig {
                reason: format!("max_terms must be >= 16, got {max_terms}"),
            });
        }
        if !(domain_cap > 0.0) {
            return Err(SpecfunError::InvalidConfig {
                reason: format!("domain_cap must be positive, got {domain_cap}"),
            });
        }
        Ok(EvalConfig {
            tol,
            max_terms,
            domain_cap,
        })
    }

    /// Same config with a different tolerance.
    pub fn with_tol(&self, tol: f64) -> Result<Self, SpecfunError> {
        EvalConfig::new(tol, self.max_terms, self.domain_cap)
    }
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            tol: 1e-10,
            max_terms: 512,
            domain_cap: 40.0,
        }
    }
}

// Lanczos approximation, g = 10.900511, after Pugh's error analysis.
// Relative error below 1e-14 over the positive axis.
const LANCZOS_R: f64 = 10.900511;
#[allow(clippy::excessive_precision)]
const TWO_SQRT_E_OVER_PI: f64 = 1.8603827342052657173362492472666631120594218414085755;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFF: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];

fn lanczos_sum(x: f64) -> f64 {
    LANCZOS_COEFF
        .iter()
        .enumerate()
        .skip(1)
        .fold(LANCZOS_COEFF[0], |s, (i, c)| s + c / (x + i as f64 - 1.0))
}

/// Γ(x) for real x away from the poles at 0, −1, −2, …
///
/// Relative accuracy is ~1e-14; validated in tests against an independent
/// Stirling-series evaluation and high-precision reference values.
pub fn gamma(x: f64) -> Result<f64, SpecfunError> {
    if x <= 0.0 && x == x.floor() {
        return Err(SpecfunError::GammaPole { x });
    }
    if x < 0.5 {
        // Reflection through Γ(x)Γ(1−x) = π/sin(πx).
        let s = lanczos_sum(1.0 - x);
        Ok(std::f64::consts::PI
            / ((std::f64::consts::PI * x).sin()
                * s
                * TWO_SQRT_E_OVER_PI
                * ((0.5 - x + LANCZOS_R) / std::f64::consts::E).powf(0.5 - x)))
    } else {
        let s = lanczos_sum(x);
        Ok(s * TWO_SQRT_E_OVER_PI * ((x - 0.5 + LANCZOS_R) / std::f64::consts::E).powf(x - 0.5))
    }
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64, SpecfunError> {
    if x <= 0.0 {
        return Err(SpecfunError::GammaPole { x });
    }
    if x < 0.5 {
        // ln Γ(x) = ln π − ln sin(πx) − ln Γ(1−x); x ∈ (0, 0.5) keeps sin positive.
        let lg1mx = ln_gamma_core(1.0 - x);
        Ok(std::f64::consts::PI.ln() - (std::f64::consts::PI * x).sin().ln() - lg1mx)
    } else {
        Ok(ln_gamma_core(x))
    }
}

fn ln_gamma_core(x: f64) -> f64 {
    let s = lanczos_sum(x);
    s.ln() + TWO_SQRT_E_OVER_PI.ln()
        + (x - 0.5) * ((x - 0.5 + LANCZOS_R).ln() - 1.0)
}

/// Γ(1 + to·α) / Γ(1 + from·α) computed without overflow.
fn gamma_index_ratio(alpha: f64, from: f64, to: f64) -> f64 {
    let a = 1.0 + from * alpha;
    let b = 1.0 + to * alpha;
    if a < GAMMA_OVERFLOW_ARG && b < GAMMA_OVERFLOW_ARG {
        // Both finite; direct quotient keeps the relative error at a few ulp.
        gamma(b).unwrap() / gamma(a).unwrap()
    } else {
        (ln_gamma(b).unwrap() - ln_gamma(a).unwrap()).exp()
    }
}

/// Compensated accumulator (Kahan).
#[derive(Default)]
struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
    fn value(&self) -> f64 {
        self.sum
    }
}

/// Sums Σ terms with term_{k+1} = term_k · ratio(k), stopping once two
/// consecutive terms fall below the convergence threshold. Returns the sum
/// only when the estimated rounding error meets `tol`.
fn sum_with_ratio(
    first_term: f64,
    mut ratio: impl FnMut(usize) -> f64,
    cfg: &EvalConfig,
) -> Result<f64, SpecfunError> {
    let mut acc = KahanSum::default();
    let mut abs_acc = 0.0f64;
    let mut term = first_term;
    let mut small_streak = 0usize;
    for k in 0..cfg.max_terms {
        if !term.is_finite() {
            return Err(SpecfunError::PrecisionLoss {
                estimated: f64::INFINITY,
                required: cfg.tol,
            });
        }
        acc.add(term);
        abs_acc += term.abs();
        let scale = acc.value().abs().max(f64::MIN_POSITIVE);
        if term.abs() <= 0.5 * cfg.tol * scale || term.abs() < 1e-300 {
            small_streak += 1;
            if small_streak >= 2 && k >= 3 {
                let sum = acc.value();
                let estimated = ROUNDING_SAFETY * f64::EPSILON * abs_acc + term.abs();
                let required = cfg.tol * sum.abs().max(1.0);
                if estimated > required {
                    return Err(SpecfunError::PrecisionLoss {
                        estimated,
                        required,
                    });
                }
                return Ok(sum);
            }
        } else {
            small_streak = 0;
        }
        term *= ratio(k);
    }
    Err(SpecfunError::Truncation {
        terms: cfg.max_terms,
    })
}

/// Mittag-Leffler function E_α(u) = Σ u^k / Γ(1 + kα).
pub fn mittag_leffler(alpha: &Order, u: f64, cfg: &EvalConfig) -> Result<f64, SpecfunError> {
    if u.abs() > cfg.domain_cap {
        return Err(SpecfunError::DomainCap {
            value: u,
            cap: cfg.domain_cap,
        });
    }
    if u == 0.0 {
        return Ok(1.0);
    }
    let a = alpha.as_f64();
    sum_with_ratio(
        1.0,
        |k| u / gamma_index_ratio(a, k as f64, (k + 1) as f64),
        cfg,
    )
}

/// Fractal cosine cos_α(v) = Σ (−1)^k v^{2k} / Γ(1 + 2kα).
pub fn cos_alpha(alpha: &Order, v: f64, cfg: &EvalConfig) -> Result<f64, SpecfunError> {
    if v.abs() > cfg.domain_cap {
        return Err(SpecfunError::DomainCap {
            value: v,
            cap: cfg.domain_cap,
        });
    }
    if v == 0.0 {
        return Ok(1.0);
    }
    let a = alpha.as_f64();
    let v2 = v * v;
    sum_with_ratio(
        1.0,
        |k| -v2 / gamma_index_ratio(a, (2 * k) as f64, (2 * k + 2) as f64),
        cfg,
    )
}

/// Fractal sine sin_α(v) = Σ (−1)^k v^{2k+1} / Γ(1 + (2k+1)α).
pub fn sin_alpha(alpha: &Order, v: f64, cfg: &EvalConfig) -> Result<f64, SpecfunError> {
    if v.abs() > cfg.domain_cap {
        return Err(SpecfunError::DomainCap {
            value: v,
            cap: cfg.domain_cap,
        });
    }
    if v == 0.0 {
        return Ok(0.0);
    }
    let a = alpha.as_f64();
    let v2 = v * v;
    let first = v / gamma(1.0 + a)?;
    sum_with_ratio(
        first,
        |k| -v2 / gamma_index_ratio(a, (2 * k + 1) as f64, (2 * k + 3) as f64),
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn order(p: i64, q: i64) -> Order {
        Order::new(crate::rational::ratio(p, q)).unwrap()
    }

    // Independent Γ oracle: Stirling series with Bernoulli-number tail after
    // shifting the argument above 10. Shares nothing with the Lanczos path.
    fn gamma_stirling(x: f64) -> f64 {
        assert!(x > 0.0);
        let mut shift = 1.0;
        let mut y = x;
        while y < 10.0 {
            shift *= y;
            y += 1.0;
        }
        // c_n = B_{2n} / (2n (2n-1))
        const C: [f64; 8] = [
            1.0 / 12.0,
            -1.0 / 360.0,
            1.0 / 1260.0,
            -1.0 / 1680.0,
            1.0 / 1188.0,
            -691.0 / 360360.0,
            1.0 / 156.0,
            -3617.0 / 122400.0,
        ];
        let mut tail = 0.0;
        let mut ypow = y;
        for c in C {
            tail += c / ypow;
            ypow *= y * y;
        }
        let half_ln_2pi = 0.918_938_533_204_672_7;
        let lg = (y - 0.5) * y.ln() - y + half_ln_2pi + tail;
        lg.exp() / shift
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn gamma_reference_values() {
        // (x, Γ(x)) pairs frozen from a 40-digit computation.
        let table = [
            (1.0, 1.0),
            (0.5, 1.772_453_850_905_516_0),
            (5.0, 24.0),
            (0.3, 2.991_568_987_687_590_6),
            (0.7, 1.298_055_332_647_557_8),
            (1.5, 0.886_226_925_452_758_0),
            (1.7, 0.908_638_732_853_290_45),
            (2.5, 1.329_340_388_179_137_0),
            (7.5, 1_871.254_305_797_788_3),
            (10.3, 716_430.689_062_375_2),
            (0.1, 9.513_507_698_668_732),
            (0.05, 19.470_085_311_255_513),
            (13.5, 1_710_542_068.319_573_2),
        ];
        for (x, expected) in table {
            let got = gamma(x).unwrap();
            assert!(
                ((got - expected) / expected).abs() <= 1e-13,
                "gamma({x}): got {got}, expected {expected}"
            );
        }
    }

    #[test]
    fn gamma_agrees_with_stirling_scheme() {
        let mut x = 0.05;
        while x < 50.0 {
            let a = gamma(x).unwrap();
            let b = gamma_stirling(x);
            // Each scheme is good to ~1e-13 relative; their disagreement
            // bounds the sum of both errors.
            assert!(
                ((a - b) / b).abs() <= 4e-13,
                "two-scheme disagreement at x={x}: {a} vs {b}"
            );
            x += 0.173;
        }
    }

    #[test]
    fn gamma_recurrence_spot_checks() {
        for x in [0.3, 0.7, 1.5, 2.5] {
            let lhs = gamma(x + 1.0).unwrap();
            let rhs = x * gamma(x).unwrap();
            assert!(((lhs - rhs) / rhs).abs() <= 1e-13);
        }
    }

    #[test]
    fn gamma_rejects_poles() {
        assert_eq!(gamma(0.0), Err(SpecfunError::GammaPole { x: 0.0 }));
        assert_eq!(gamma(-3.0), Err(SpecfunError::GammaPole { x: -3.0 }));
        // Negative non-integers are fine via reflection: Γ(-0.5) = -2√π.
        let g = gamma(-0.5).unwrap();
        assert!((g + 2.0 * std::f64::consts::PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for x in [0.2, 0.9, 1.0, 3.7, 25.0, 140.0] {
            let lg = ln_gamma(x).unwrap();
            let g = gamma(x).unwrap();
            assert!((lg - g.ln()).abs() <= 1e-12 * lg.abs().max(1.0));
        }
        // Beyond the Γ overflow threshold ln Γ must still be finite.
        assert!(ln_gamma(500.0).unwrap().is_finite());
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn mittag_leffler_trivial_and_reference() {
        let cfg = EvalConfig::default();
        assert_eq!(mittag_leffler(&order(3, 7), 0.0, &cfg).unwrap(), 1.0);
        // E_1(-2) = e^{-2}
        let got = mittag_leffler(&Order::one(), -2.0, &cfg).unwrap();
        assert!((got - 0.135_335_283_236_612_7).abs() < 1e-13);
        // E_{1/2}(-1) = e·erfc(1), frozen from a 40-digit computation.
        let got = mittag_leffler(&order(1, 2), -1.0, &cfg).unwrap();
        assert!((got - 0.427_583_576_155_807_0).abs() < 1e-12);
        // E_{3/4}(-2), frozen independently.
        let got = mittag_leffler(&order(3, 4), -2.0, &cfg).unwrap();
        assert!((got - 0.202_078_483_412_954_45).abs() < 1e-11);
        // E_{9/10}(-1.5), frozen independently.
        let got = mittag_leffler(&order(9, 10), -1.5, &cfg).unwrap();
        assert!((got - 0.243_092_678_479_217_26).abs() < 1e-11);
    }

    #[test]
    fn classical_reduction_on_grid() {
        let cfg = EvalConfig::default().with_tol(1e-12).unwrap();
        let one = Order::one();
        for i in 0..=50 {
            let u = -5.0 + 10.0 * (i as f64) / 50.0;
            let ml = mittag_leffler(&one, u, &cfg).unwrap();
            assert!(
                (ml - u.exp()).abs() <= 1e-12 * u.exp().max(1.0),
                "E_1({u}) = {ml} vs exp = {}",
                u.exp()
            );
            let c = cos_alpha(&one, u, &cfg).unwrap();
            assert!((c - u.cos()).abs() <= 1e-12, "cos_1({u})");
            let s = sin_alpha(&one, u, &cfg).unwrap();
            assert!((s - u.sin()).abs() <= 1e-12, "sin_1({u})");
        }
    }

    #[test]
    fn fractal_trig_values() {
        let cfg = EvalConfig::default();
        let half = order(1, 2);
        assert_eq!(cos_alpha(&half, 0.0, &cfg).unwrap(), 1.0);
        assert_eq!(sin_alpha(&half, 0.0, &cfg).unwrap(), 0.0);
        // cos_{1/2}(v) = exp(-v²) exactly (the Γ arguments collapse to integers).
        for v in [0.5, 1.0, 2.0] {
            let got = cos_alpha(&half, v, &cfg).unwrap();
            assert!(
                (got - (-v * v).exp()).abs() < 1e-12,
                "cos_half({v}) = {got}"
            );
        }
        let got = cos_alpha(&Order::one(), std::f64::consts::PI, &cfg).unwrap();
        assert!((got + 1.0).abs() < 1e-12);
        // sin_{3/4}(1.25), frozen independently.
        let got = sin_alpha(&order(3, 4), 1.25, &cfg).unwrap();
        assert!((got - 0.754_403_027_253_619_6).abs() < 1e-11);
        // cos_{3/4}(0.8), frozen independently.
        let got = cos_alpha(&order(3, 4), 0.8, &cfg).unwrap();
        assert!((got - 0.582_042_223_347_756_5).abs() < 1e-11);
    }

    #[test]
    fn domain_cap_and_precision_errors() {
        let cfg = EvalConfig::default();
        assert!(matches!(
            mittag_leffler(&Order::one(), 41.0, &cfg),
            Err(SpecfunError::DomainCap { .. })
        ));
        // Within the cap but cancellation-dominated at this tolerance: refuse.
        let tight = cfg.with_tol(1e-12).unwrap();
        assert!(matches!(
            mittag_leffler(&Order::one(), -12.0, &tight),
            Err(SpecfunError::PrecisionLoss { .. })
        ));
        // The same argument succeeds once the tolerance admits the loss.
        let loose = cfg.with_tol(1e-8).unwrap();
        let got = mittag_leffler(&Order::one(), -12.0, &loose).unwrap();
        assert!((got - (-12.0f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn truncation_is_reported() {
        let cfg = EvalConfig::new(1e-10, 16, 40.0).unwrap();
        assert!(matches!(
            mittag_leffler(&Order::one(), 35.0, &cfg),
            Err(SpecfunError::Truncation { terms: 16 })
        ));
    }

    #[test]
    fn config_invariants_enforced() {
        assert!(EvalConfig::new(1e-3, 64, 40.0).is_err());
        assert!(EvalConfig::new(0.0, 64, 40.0).is_err());
        assert!(EvalConfig::new(1e-9, 8, 40.0).is_err());
        assert!(EvalConfig::new(1e-9, 64, 0.0).is_err());
        assert!(EvalConfig::new(1e-9, 64, 40.0).is_ok());
    }

    #[test]
    fn order_display_uses_reduced_rational() {
        assert_eq!(Order::new(ratio(9, 10)).unwrap().to_string(), "9/10");
    }
}
