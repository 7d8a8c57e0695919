//! The closed time-domain family: finite sums Σ c_i · E_α(−a_i t^α).
//!
//! Decay atoms are the common currency between the parser, the transform
//! table and the equation solver. The family is closed under the order-α
//! and order-2α local derivatives (each atom is an eigenfunction with
//! eigenvalue −a), and every member has an exact sine/cosine transform.
//! Coefficients and rates are exact rationals throughout.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::order::Order;
use crate::rational::{render, to_f64, Rational};
use crate::series::{FractalSeries, SeriesBasis};
use crate::specfun::{self, EvalConfig, SpecfunError};

#[derive(Debug, Error, PartialEq)]
pub enum AtomsError {
    #[error("expression orders differ")]
    AlphaMismatch,
    #[error("atom rate must be positive, got {0}")]
    NonPositiveRate(String),
    #[error("classical semantics require order 1, got {0}")]
    NotClassical(String),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

/// One decay atom c · E_α(−a t^α) with c, a exact rationals and a > 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub coef: Rational,
    pub rate: Rational,
}

/// Supported local derivative orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivOrder {
    Alpha,
    TwoAlpha,
}

/// Canonical finite linear combination of decay atoms.
///
/// Canonical form: rates strictly increasing, duplicate rates merged, zero
/// coefficients dropped. Construction from any permutation of the same atom
/// multiset yields an identical value.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeExpr {
    alpha: Order,
    atoms: Vec<Atom>,
}

impl TimeExpr {
    pub fn new<I>(alpha: Order, atoms: I) -> Result<Self, AtomsError>
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let mut collected: Vec<Atom> = Vec::new();
        for (coef, rate) in atoms {
            if !rate.is_positive() {
                return Err(AtomsError::NonPositiveRate(render(&rate)));
            }
            collected.push(Atom { coef, rate });
        }
        collected.sort_by(|a, b| a.rate.cmp(&b.rate));
        let mut merged: Vec<Atom> = Vec::new();
        for atom in collected {
            match merged.last_mut() {
                Some(last) if last.rate == atom.rate => last.coef += atom.coef,
                _ => merged.push(atom),
            }
        }
        merged.retain(|a| !a.coef.is_zero());
        Ok(TimeExpr {
            alpha,
            atoms: merged,
        })
    }

    pub fn zero(alpha: Order) -> Self {
        TimeExpr {
            alpha,
            atoms: Vec::new(),
        }
    }

    pub fn single(alpha: Order, coef: Rational, rate: Rational) -> Result<Self, AtomsError> {
        Self::new(alpha, [(coef, rate)])
    }

    pub fn alpha(&self) -> &Order {
        &self.alpha
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self, AtomsError> {
        if self.alpha != other.alpha {
            return Err(AtomsError::AlphaMismatch);
        }
        Self::new(
            self.alpha.clone(),
            self.atoms
                .iter()
                .chain(other.atoms.iter())
                .map(|a| (a.coef.clone(), a.rate.clone())),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TimeExpr {
            alpha: self.alpha.clone(),
            atoms: if c.is_zero() {
                Vec::new()
            } else {
                self.atoms
                    .iter()
                    .map(|a| Atom {
                        coef: &a.coef * c,
                        rate: a.rate.clone(),
                    })
                    .collect()
            },
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AtomsError> {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Exact local derivative via the atom eigen-rule:
    /// E_α(−a t^α)^{(α)} = −a E_α(−a t^α); order 2α applies it twice.
    pub fn derivative(&self, order: DerivOrder) -> Self {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                coef: match order {
                    DerivOrder::Alpha => &a.coef * &(-a.rate.clone()),
                    DerivOrder::TwoAlpha => &a.coef * &(&a.rate * &a.rate),
                },
                rate: a.rate.clone(),
            })
            .collect();
        TimeExpr {
            alpha: self.alpha.clone(),
            atoms,
        }
    }

    /// Numeric evaluation Σ c_i E_α(−a_i t^α) at t ≥ 0.
    pub fn eval(&self, t: f64, cfg: &EvalConfig) -> Result<f64, AtomsError> {
        assert!(t >= 0.0, "evaluation point must be non-negative");
        let mut sum = 0.0;
        let talpha = t.powf(self.alpha.as_f64());
        for a in &self.atoms {
            let u = -to_f64(&a.rate) * talpha;
            sum += to_f64(&a.coef) * specfun::mittag_leffler(&self.alpha, u, cfg)?;
        }
        Ok(sum)
    }

    /// f(0) = Σ c_i, exact.
    pub fn value_at_zero(&self) -> Rational {
        self.atoms
            .iter()
            .fold(Rational::zero(), |acc, a| acc + &a.coef)
    }

    /// f^{(α)}(0) = Σ c_i · (−a_i), exact.
    pub fn alpha_derivative_at_zero(&self) -> Rational {
        self.atoms
            .iter()
            .fold(Rational::zero(), |acc, a| acc + &a.coef * &(-a.rate.clone()))
    }

    /// Truncated Taylor-basis series of the expression (for cross-checks
    /// against the series calculus).
    pub fn to_series(&self, order: usize) -> FractalSeries {
        let mut acc = FractalSeries::zero(self.alpha.clone(), SeriesBasis::Taylor);
        for a in &self.atoms {
            let s = FractalSeries::mittag_leffler_atom(self.alpha.clone(), &a.rate, order)
                .scale(&a.coef);
            acc = acc.add(&s).expect("same order and basis");
        }
        acc
    }

    /// The classical function t ↦ Σ c_i e^{−a_i t}. Only meaningful at α = 1;
    /// used by the quadrature oracle.
    pub fn classical_fn(&self) -> Result<impl Fn(f64) -> f64, AtomsError> {
        if !self.alpha.is_one() {
            return Err(AtomsError::NotClassical(self.alpha.to_string()));
        }
        let terms: Vec<(f64, f64)> = self
            .atoms
            .iter()
            .map(|a| (to_f64(&a.coef), to_f64(&a.rate)))
            .collect();
        Ok(move |t: f64| terms.iter().map(|(c, a)| c * (-a * t).exp()).sum())
    }
}

impl std::fmt::Display for TimeExpr {
    /// Canonical rendering: `c*E(-a*t^a)` terms joined by ` + ` / ` - `,
    /// rates and coefficients as integers or fractions. Unit coefficients
    /// are elided. The zero expression renders as `0`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "0");
        }
        for (i, atom) in self.atoms.iter().enumerate() {
            let mag = atom.coef.abs();
            if i == 0 {
                if atom.coef.is_negative() {
                    write!(f, "-")?;
                }
            } else if atom.coef.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if !mag.is_one() {
                write!(f, "{}*", render(&mag))?;
            }
            write!(f, "E(-{}*t^a)", render(&atom.rate))?;
        }
        Ok(())
    }
}
