//! Transform-method solver for c₂·y^{(2α)} + c₀·y = forcing with one
//! initial datum, following the operational pipeline end to end:
//!
//! 1. transform both sides (sine route consumes y(0), cosine route y^{(α)}(0)),
//! 2. solve the resulting algebraic equation for Y(s),
//! 3. partial fractions,
//! 4. invert term by term through the table.
//!
//! Everything up to the solution atoms is exact rational arithmetic; the
//! report carries the full derivation trail and an exact residual that must
//! be identically zero for the solution to be accepted.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::atoms::{DerivOrder, TimeExpr};
use crate::order::Order;
use crate::rational::{render, sqrt_exact, to_f64, Rational};
use crate::spectral::{PfTerm, PolyS, RationalS};
use crate::transform::{forward, inverse, SpectralExpr, TransformError, TransformKind};

#[derive(Debug, Error, PartialEq)]
pub enum OdeError {
    #[error("leading coefficient c2 must be non-zero")]
    ZeroLeadingCoefficient,
    #[error("characteristic factor s^2+q needs q = -c0/c2 > 0, got q = {0}")]
    CharacteristicNotPositive(String),
    #[error("characteristic q = {0} has no rational square root; decay rate not representable")]
    IrrationalCharacteristicRoot(String),
    #[error("forcing rate {0} collides with the characteristic pole (resonance): repeated poles are outside the table")]
    Resonance(String),
    #[error("forcing order differs from the equation order")]
    AlphaMismatch,
    #[error(transparent)]
    Transform(#[from] TransformError),
}

/// A problem c₂·y^{(2α)} + c₀·y = forcing with one initial datum.
///
/// The sine route consumes y(0); the cosine route consumes y^{(α)}(0).
/// The route defaults to sine in the surface syntax.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeProblem {
    pub alpha: Order,
    pub c2: Rational,
    pub c0: Rational,
    pub forcing: TimeExpr,
    pub initial: Rational,
    pub route: TransformKind,
}

/// Full audit trail of a solve.
#[derive(Debug, Clone)]
pub struct SolveReport {
    /// The algebraic equation in the transform domain, rendered.
    pub transformed_equation: String,
    /// Y(s) before decomposition.
    pub spectral_solution: RationalS,
    /// The table-ready decomposition of Y(s).
    pub partial_fractions: Vec<PfTerm>,
    /// The solution expression.
    pub solution: TimeExpr,
    /// c₂·y^{(2α)} + c₀·y − forcing in atom algebra; zero iff accepted.
    pub residual_exact: TimeExpr,
    /// At α = 1: max |finite-difference residual| on the default grid.
    pub residual_numeric_alpha1: Option<f64>,
}

/// Residual evidence for a candidate solution.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub exact: TimeExpr,
    pub exact_is_zero: bool,
    pub grid: Vec<f64>,
    pub numeric_alpha1: Option<f64>,
}

/// Default sample grid for numeric residuals.
pub const DEFAULT_GRID: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];

impl OdeProblem {
    /// The characteristic pole coefficient q = −c₀/c₂.
    pub fn characteristic_q(&self) -> Result<Rational, OdeError> {
        if self.c2.is_zero() {
            return Err(OdeError::ZeroLeadingCoefficient);
        }
        let q = -(&self.c0 / &self.c2);
        if q.is_positive() {
            Ok(q)
        } else {
            Err(OdeError::CharacteristicNotPositive(render(&q)))
        }
    }
}

/// Solves by the transform method. Preconditions: q = −c₀/c₂ > 0 with a
/// rational square root, distinct from the square of every forcing rate.
pub fn solve(p: &OdeProblem) -> Result<SolveReport, OdeError> {
    if p.forcing.alpha() != &p.alpha {
        return Err(OdeError::AlphaMismatch);
    }
    let q = p.characteristic_q()?;
    sqrt_exact(&q).ok_or_else(|| OdeError::IrrationalCharacteristicRoot(render(&q)))?;
    for atom in p.forcing.atoms() {
        if &atom.rate * &atom.rate == q {
            return Err(OdeError::Resonance(render(&atom.rate)));
        }
    }

    // Transform the equation and isolate Y over the characteristic factor:
    //   sine:   c2(−s²Y + 2s·y0)  + c0·Y = F  ⇒  Y·(s²+q) = 2·y0·s − F/c2
    //   cosine: c2(−s²Y − 2·yα0)  + c0·Y = F  ⇒  Y·(s²+q) = −2·yα0 − F/c2
    let forcing_spectral = forward(&p.forcing, p.route)?;
    let two_init = &p.initial * &Rational::from_integer(2.into());
    let data_poly = match p.route {
        TransformKind::Sine => PolyS::monomial(two_init, 1),
        TransformKind::Cosine => PolyS::constant(-two_init),
    };
    let rhs = RationalS::from_poly(data_poly)
        .sub(&forcing_spectral.value().scale(&p.c2.recip()));
    let transformed_equation = format!("(s^2+{})*Y = {}", render(&q), rhs);

    let spectral_solution = rhs.div_by_factor(&q).map_err(TransformError::from)?;
    let spectral_expr =
        SpectralExpr::new(p.alpha.clone(), p.route, spectral_solution.clone())?;
    let partial_fractions = spectral_solution
        .partial_fractions()
        .map_err(TransformError::from)?;
    let solution = inverse(&spectral_expr)?;

    let residual_exact = residual(p, &solution)?;
    debug_assert!(residual_exact.is_zero(), "transform method must be exact");
    let datum = match p.route {
        TransformKind::Sine => solution.value_at_zero(),
        TransformKind::Cosine => solution.alpha_derivative_at_zero(),
    };
    debug_assert_eq!(datum, p.initial, "initial datum must be reproduced");

    let residual_numeric_alpha1 = if p.alpha.is_one() {
        Some(numeric_residual(p, &solution, &DEFAULT_GRID)?)
    } else {
        None
    };

    Ok(SolveReport {
        transformed_equation,
        spectral_solution,
        partial_fractions,
        solution,
        residual_exact,
        residual_numeric_alpha1,
    })
}

/// c₂·y^{(2α)} + c₀·y − forcing, exact in atom algebra.
fn residual(p: &OdeProblem, y: &TimeExpr) -> Result<TimeExpr, OdeError> {
    y.derivative(DerivOrder::TwoAlpha)
        .scale(&p.c2)
        .add(&y.scale(&p.c0))
        .and_then(|lhs| lhs.sub(&p.forcing))
        .map_err(|e| OdeError::Transform(TransformError::from(e)))
}

/// Order-4 central finite-difference residual at α = 1, independent of the
/// atom derivative rules: y'' is estimated from pointwise evaluations of the
/// classical closure of y, never from the eigen-rule.
fn numeric_residual(p: &OdeProblem, y: &TimeExpr, grid: &[f64]) -> Result<f64, OdeError> {
    let eval = y
        .classical_fn()
        .map_err(|e| OdeError::Transform(TransformError::from(e)))?;
    let force = p
        .forcing
        .classical_fn()
        .map_err(|e| OdeError::Transform(TransformError::from(e)))?;
    let h = 1e-2;
    let mut worst = 0.0f64;
    for &t in grid {
        assert!(t >= 2.0 * h, "grid point too close to the origin");
        let second = (-eval(t - 2.0 * h) + 16.0 * eval(t - h) - 30.0 * eval(t)
            + 16.0 * eval(t + h)
            - eval(t + 2.0 * h))
            / (12.0 * h * h);
        let r = to_f64(&p.c2) * second + to_f64(&p.c0) * eval(t) - force(t);
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

/// Independent residual check of a candidate solution: exact residual in
/// atom algebra plus, at α = 1, a finite-difference residual on the grid.
pub fn verify(p: &OdeProblem, y: &TimeExpr, grid: &[f64]) -> Result<ResidualReport, OdeError> {
    if y.alpha() != &p.alpha || p.forcing.alpha() != &p.alpha {
        return Err(OdeError::AlphaMismatch);
    }
    let exact = residual(p, y)?;
    let numeric_alpha1 = if p.alpha.is_one() && exact.is_zero() {
        Some(numeric_residual(p, y, grid)?)
    } else if p.alpha.is_one() {
        // a wrong candidate still gets a numeric residual when evaluable
        numeric_residual(p, y, grid).ok()
    } else {
        None
    };
    Ok(ResidualReport {
        exact_is_zero: exact.is_zero(),
        exact,
        grid: grid.to_vec(),
        numeric_alpha1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    fn order(p: i64, q: i64) -> Order {
        Order::new(ratio(p, q)).unwrap()
    }

    fn forced_decay_problem(alpha: Order, y0: Rational) -> OdeProblem {
        // y^(2α) − 9y = 50·E_α(−2t^α), y(0) = y0, sine route
        OdeProblem {
            alpha: alpha.clone(),
            c2: rat(1),
            c0: rat(-9),
            forcing: TimeExpr::single(alpha, rat(50), rat(2)).unwrap(),
            initial: y0,
            route: TransformKind::Sine,
        }
    }

    #[test]
    fn forced_decay_solution_exact() {
        // solution: (y0+10)·E(−3t^α) − 10·E(−2t^α)
        let alpha = order(9, 10);
        let p = forced_decay_problem(alpha.clone(), rat(1));
        let report = solve(&p).unwrap();
        let expected =
            TimeExpr::new(alpha, [(rat(11), rat(3)), (rat(-10), rat(2))]).unwrap();
        assert_eq!(report.solution, expected);
        assert!(report.residual_exact.is_zero());
        assert_eq!(
            report.transformed_equation,
            "(s^2+9)*Y = (2*s^3-92*s)/(s^2+4)"
        );
        assert_eq!(
            report.spectral_solution.to_string(),
            "(2*s^3-92*s)/((s^2+4)*(s^2+9))"
        );
    }

    #[test]
    fn homogeneous_decay() {
        // y^(2α) − 4y = 0, y(0) = c → c·E(−2t^α)
        let alpha = order(1, 2);
        let p = OdeProblem {
            alpha: alpha.clone(),
            c2: rat(1),
            c0: rat(-4),
            forcing: TimeExpr::zero(alpha.clone()),
            initial: rat(3),
            route: TransformKind::Sine,
        };
        let report = solve(&p).unwrap();
        assert_eq!(
            report.solution,
            TimeExpr::single(alpha, rat(3), rat(2)).unwrap()
        );
    }

    #[test]
    fn zero_data_zero_solution() {
        let alpha = order(1, 2);
        let p = OdeProblem {
            alpha: alpha.clone(),
            c2: rat(1),
            c0: rat(-4),
            forcing: TimeExpr::zero(alpha),
            initial: rat(0),
            route: TransformKind::Sine,
        };
        let report = solve(&p).unwrap();
        assert!(report.solution.is_zero());
        assert!(report.residual_exact.is_zero());
    }

    #[test]
    fn normalized_coefficients() {
        // 2·y^(2α) − 8y = 0, y(0) = 3 → 3·E(−2t^α)
        let alpha = order(4, 5);
        let p = OdeProblem {
            alpha: alpha.clone(),
            c2: rat(2),
            c0: rat(-8),
            forcing: TimeExpr::zero(alpha.clone()),
            initial: rat(3),
            route: TransformKind::Sine,
        };
        let report = solve(&p).unwrap();
        assert_eq!(
            report.solution,
            TimeExpr::single(alpha, rat(3), rat(2)).unwrap()
        );
    }

    #[test]
    fn cosine_route_consumes_alpha_derivative() {
        // y^(2α) − 4y = 0, y^{(α)}(0) = −6, cosine route → 3·E(−2t^α)
        let alpha = order(1, 2);
        let p = OdeProblem {
            alpha: alpha.clone(),
            c2: rat(1),
            c0: rat(-4),
            forcing: TimeExpr::zero(alpha.clone()),
            initial: rat(-6),
            route: TransformKind::Cosine,
        };
        let report = solve(&p).unwrap();
        assert_eq!(
            report.solution,
            TimeExpr::single(alpha, rat(3), rat(2)).unwrap()
        );
        assert_eq!(report.solution.alpha_derivative_at_zero(), rat(-6));
    }

    #[test]
    fn rejections() {
        let alpha = order(1, 2);
        // resonance: forcing rate 2 hits q = 4
        let p = OdeProblem {
            alpha: alpha.clone(),
            c2: rat(1),
            c0: rat(-4),
            forcing: TimeExpr::single(alpha.clone(), rat(1), rat(2)).unwrap(),
            initial: rat(0),
            route: TransformKind::Sine,
        };
        assert_eq!(solve(&p).unwrap_err(), OdeError::Resonance("2".into()));
        // q ≤ 0: y'' + 4y = 0 has oscillatory poles, outside the table
        let p = OdeProblem {
            alpha: alpha.clone(),
            c2: rat(1),
            c0: rat(4),
            forcing: TimeExpr::zero(alpha.clone()),
            initial: rat(1),
            route: TransformKind::Sine,
        };
        assert_eq!(
            solve(&p).unwrap_err(),
            OdeError::CharacteristicNotPositive("-4".into())
        );
        // irrational decay rate: q = 2
        let p = OdeProblem {
            alpha: alpha.clone(),
            c2: rat(1),
            c0: rat(-2),
            forcing: TimeExpr::zero(alpha.clone()),
            initial: rat(1),
            route: TransformKind::Sine,
        };
        assert_eq!(
            solve(&p).unwrap_err(),
            OdeError::IrrationalCharacteristicRoot("2".into())
        );
        // c2 = 0
        let p = OdeProblem {
            alpha: alpha.clone(),
            c2: rat(0),
            c0: rat(-4),
            forcing: TimeExpr::zero(alpha),
            initial: rat(1),
            route: TransformKind::Sine,
        };
        assert_eq!(solve(&p).unwrap_err(), OdeError::ZeroLeadingCoefficient);
    }

    #[test]
    fn initial_datum_affine_dependence() {
        // solve(y0=u) − solve(y0=v) = (u−v)·E(−√q·t^α), exactly.
        let alpha = order(3, 4);
        let u = ratio(7, 2);
        let v = rat(-10);
        let s_u = solve(&forced_decay_problem(alpha.clone(), u.clone()))
            .unwrap()
            .solution;
        let s_v = solve(&forced_decay_problem(alpha.clone(), v.clone()))
            .unwrap()
            .solution;
        let diff = s_u.sub(&s_v).unwrap();
        let expected = TimeExpr::single(alpha, u - v, rat(3)).unwrap();
        assert_eq!(diff, expected);
    }

    #[test]
    fn verify_accepts_true_solution_and_rejects_wrong_one() {
        let alpha = order(1, 2);
        let p = OdeProblem {
            alpha: alpha.clone(),
            c2: rat(1),
            c0: rat(-4),
            forcing: TimeExpr::zero(alpha.clone()),
            initial: rat(1),
            route: TransformKind::Sine,
        };
        let y = TimeExpr::single(alpha.clone(), rat(1), rat(2)).unwrap();
        let report = verify(&p, &y, &DEFAULT_GRID).unwrap();
        assert!(report.exact_is_zero);
        // wrong candidate: E(−t^α) leaves residual −3·E(−t^α)
        let bad = TimeExpr::single(alpha.clone(), rat(1), rat(1)).unwrap();
        let report = verify(&p, &bad, &DEFAULT_GRID).unwrap();
        assert!(!report.exact_is_zero);
        assert_eq!(
            report.exact,
            TimeExpr::single(alpha, rat(-3), rat(1)).unwrap()
        );
    }

    #[test]
    fn classical_numeric_residual_small() {
        let p = forced_decay_problem(Order::one(), rat(1));
        let report = solve(&p).unwrap();
        let numeric = report.residual_numeric_alpha1.unwrap();
        assert!(numeric <= 1e-6, "numeric residual {numeric:.3e}");
    }

    #[test]
    fn classical_method_independence() {
        // At α = 1 the transform-method answer must match the textbook
        // undetermined-coefficients solution on a grid: decaying branch
        // A·e^{−√q t} plus particular terms cᵢ/(aᵢ²−q)·e^{−aᵢ t}.
        let p = forced_decay_problem(Order::one(), ratio(7, 2));
        let y = solve(&p).unwrap().solution;
        let cfg = crate::specfun::EvalConfig::default();
        let q = 9.0f64;
        let particular = 50.0 / (4.0 - q);
        let a_coef = 3.5 - particular;
        for i in 0..=20 {
            let t = 0.1 * i as f64;
            let classical = a_coef * (-q.sqrt() * t).exp() + particular * (-2.0 * t).exp();
            let engine = y.eval(t, &cfg).unwrap();
            assert!(
                (engine - classical).abs() <= 1e-6,
                "t={t}: {engine} vs {classical}"
            );
        }
    }

    #[test]
    fn verify_zero_solution_of_zero_equation() {
        let p = OdeProblem {
            alpha: Order::one(),
            c2: rat(1),
            c0: rat(-1),
            forcing: TimeExpr::zero(Order::one()),
            initial: rat(0),
            route: TransformKind::Sine,
        };
        let y = TimeExpr::zero(Order::one());
        let report = verify(&p, &y, &DEFAULT_GRID).unwrap();
        assert!(report.exact_is_zero);
        assert!(report.numeric_alpha1.unwrap() <= 1e-12);
    }
}
