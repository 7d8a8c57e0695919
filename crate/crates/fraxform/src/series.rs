//! Truncated fractal power series Σ c_k x^{kα} with exact coefficients.
//!
//! Two bases are supported, because no single rational-coefficient basis
//! carries both the multiplicative and the differential structure exactly
//! when α < 1:
//!
//! - [`SeriesBasis::Monomial`]: coefficient k multiplies `x^{kα}`. Products
//!   are plain Cauchy convolutions, exact for every α. The order-α
//!   derivative weight Γ(1+kα)/Γ(1+(k−1)α) is rational only at α = 1, so
//!   differentiation in this basis is restricted to α = 1.
//! - [`SeriesBasis::Taylor`]: coefficient k multiplies `x^{kα}/Γ(1+kα)`.
//!   Differentiation and integration are exact coefficient shifts for every
//!   α (the Γ weights telescope away), which is what makes the decay-atom
//!   eigen-identity exact. Products are exact only at α = 1, where the
//!   weights reduce to binomial coefficients.
//!
//! Decay atoms E_α(−a t^α) expand in the Taylor basis with coefficients
//! (−a)^k, all rational, so the whole derivative/integral calculus used by
//! the transform engine stays exact end to end.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::order::Order;
use crate::rational::{to_f64, Rational};
use crate::specfun::{self, EvalConfig, SpecfunError};

/// Default cap on the truncation order of a product.
pub const DEFAULT_PRODUCT_CAP: usize = 64;

#[derive(Debug, Error, PartialEq)]
pub enum SeriesError {
    #[error("series orders differ")]
    AlphaMismatch,
    #[error("series bases differ")]
    BasisMismatch,
    #[error("product needs truncation order {needed}, cap is {cap}")]
    ProductTruncated { needed: usize, cap: usize },
    #[error("monomial-basis derivative weights are irrational for order < 1")]
    MonomialDerivativeIrrational,
    #[error("taylor-basis product weights are irrational for order < 1")]
    TaylorProductIrrational,
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

/// Interpretation of the coefficient sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesBasis {
    /// c_k multiplies x^{kα}.
    Monomial,
    /// c_k multiplies x^{kα} / Γ(1+kα).
    Taylor,
}

/// Truncated power series in x^α with exact rational coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct FractalSeries {
    alpha: Order,
    basis: SeriesBasis,
    coeffs: Vec<Rational>,
}

fn trim(mut coeffs: Vec<Rational>) -> Vec<Rational> {
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    coeffs
}

impl FractalSeries {
    pub fn new(alpha: Order, basis: SeriesBasis, coeffs: Vec<Rational>) -> Self {
        FractalSeries {
            alpha,
            basis,
            coeffs: trim(coeffs),
        }
    }

    pub fn zero(alpha: Order, basis: SeriesBasis) -> Self {
        FractalSeries {
            alpha,
            basis,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(alpha: Order, basis: SeriesBasis, c: Rational) -> Self {
        Self::new(alpha, basis, vec![c])
    }

    /// The truncated expansion of E_α(−a t^α): Taylor-basis coefficients
    /// (−a)^k for k = 0..=order.
    pub fn mittag_leffler_atom(alpha: Order, a: &Rational, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut c = Rational::one();
        for _ in 0..=order {
            coeffs.push(c.clone());
            c = &c * &(-a.clone());
        }
        Self::new(alpha, SeriesBasis::Taylor, coeffs)
    }

    pub fn alpha(&self) -> &Order {
        &self.alpha
    }

    pub fn basis(&self) -> SeriesBasis {
        self.basis
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Truncation order K (highest retained power index), or None when zero.
    pub fn truncation_order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn check_compatible(&self, other: &Self) -> Result<(), SeriesError> {
        if self.alpha != other.alpha {
            return Err(SeriesError::AlphaMismatch);
        }
        if self.basis != other.basis && !self.is_zero() && !other.is_zero() {
            return Err(SeriesError::BasisMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            let a = self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero);
            let b = other.coeffs.get(k).cloned().unwrap_or_else(Rational::zero);
            coeffs.push(a + b);
        }
        let basis = if self.is_zero() { other.basis } else { self.basis };
        Ok(Self::new(self.alpha.clone(), basis, coeffs))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(
            self.alpha.clone(),
            self.basis,
            self.coeffs.iter().map(|x| x * c).collect(),
        )
    }

    /// Product truncated at `min(K_a + K_b, cap)`; refuses to truncate
    /// silently, so a product that would exceed `cap` is an error.
    pub fn mul(&self, other: &Self, cap: usize) -> Result<Self, SeriesError> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.alpha.clone(), self.basis));
        }
        let needed = (self.coeffs.len() - 1) + (other.coeffs.len() - 1);
        if needed > cap {
            return Err(SeriesError::ProductTruncated { needed, cap });
        }
        if self.basis == SeriesBasis::Taylor && !self.alpha.is_one() {
            return Err(SeriesError::TaylorProductIrrational);
        }
        let mut coeffs = vec![Rational::zero(); needed + 1];
        for (j, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (k, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let term = match self.basis {
                    SeriesBasis::Monomial => a * b,
                    // At α = 1 the Taylor weights are binomial coefficients:
                    // Γ(1+n)/(Γ(1+j)Γ(1+k)) = C(n, j).
                    SeriesBasis::Taylor => a * b * binomial(j + k, j),
                };
                coeffs[j + k] += term;
            }
        }
        Ok(Self::new(self.alpha.clone(), self.basis, coeffs))
    }

    /// The order-α local derivative as an exact coefficient map:
    /// d^α x^{kα} = (Γ(1+kα)/Γ(1+(k−1)α)) x^{(k−1)α}, d^α const = 0.
    ///
    /// In the Taylor basis the Γ weights cancel and the map is a pure shift,
    /// exact for every α. In the monomial basis the weights are rational
    /// only at α = 1.
    pub fn derivative(&self) -> Result<Self, SeriesError> {
        if self.coeffs.len() <= 1 {
            return Ok(Self::zero(self.alpha.clone(), self.basis));
        }
        let coeffs = match self.basis {
            SeriesBasis::Taylor => self.coeffs[1..].to_vec(),
            SeriesBasis::Monomial => {
                if !self.alpha.is_one() {
                    return Err(SeriesError::MonomialDerivativeIrrational);
                }
                self.coeffs[1..]
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c * Rational::from_integer(BigInt::from(i as i64 + 1)))
                    .collect()
            }
        };
        Ok(Self::new(self.alpha.clone(), self.basis, coeffs))
    }

    /// The local integral (1/Γ(1+α)) ∫_0^b · (dx)^α evaluated term-wise by
    /// the exact monomial rule, then summed numerically.
    pub fn integral(&self, b: f64, cfg: &EvalConfig) -> Result<f64, SeriesError> {
        assert!(b >= 0.0, "integration bound must be non-negative");
        if self.is_zero() || b == 0.0 {
            return Ok(0.0);
        }
        let alpha = self.alpha.as_f64();
        if b.powf(alpha) > cfg.domain_cap {
            return Err(SeriesError::Specfun(SpecfunError::DomainCap {
                value: b.powf(alpha),
                cap: cfg.domain_cap,
            }));
        }
        let mut sum = 0.0;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let kk = k as f64;
            let power = b.powf((kk + 1.0) * alpha);
            let weight = match self.basis {
                // ∫ x^{kα} ↦ Γ(1+kα)/Γ(1+(k+1)α) b^{(k+1)α}
                SeriesBasis::Monomial => {
                    specfun::gamma(1.0 + kk * alpha)? / specfun::gamma(1.0 + (kk + 1.0) * alpha)?
                }
                // ∫ φ_k ↦ φ_{k+1}(b) = b^{(k+1)α}/Γ(1+(k+1)α)
                SeriesBasis::Taylor => 1.0 / specfun::gamma(1.0 + (kk + 1.0) * alpha)?,
            };
            sum += to_f64(c) * weight * power;
        }
        Ok(sum)
    }

    /// ∫_a^b with 0 ≤ a ≤ b, by interval additivity over [0, ·].
    pub fn integral_between(&self, a: f64, b: f64, cfg: &EvalConfig) -> Result<f64, SeriesError> {
        assert!(0.0 <= a && a <= b, "need 0 <= a <= b");
        Ok(self.integral(b, cfg)? - self.integral(a, cfg)?)
    }

    /// Numeric evaluation at x ≥ 0.
    pub fn eval(&self, x: f64, cfg: &EvalConfig) -> Result<f64, SeriesError> {
        assert!(x >= 0.0, "evaluation point must be non-negative");
        if self.is_zero() {
            return Ok(0.0);
        }
        let alpha = self.alpha.as_f64();
        let y = x.powf(alpha);
        if y > cfg.domain_cap {
            return Err(SeriesError::Specfun(SpecfunError::DomainCap {
                value: y,
                cap: cfg.domain_cap,
            }));
        }
        match self.basis {
            SeriesBasis::Monomial => {
                // Horner in y = x^α.
                let mut acc = 0.0;
                for c in self.coeffs.iter().rev() {
                    acc = acc * y + to_f64(c);
                }
                Ok(acc)
            }
            SeriesBasis::Taylor => {
                let mut sum = 0.0;
                let mut ypow = 1.0;
                for (k, c) in self.coeffs.iter().enumerate() {
                    if !c.is_zero() {
                        sum += to_f64(c) * ypow / specfun::gamma(1.0 + k as f64 * alpha)?;
                    }
                    ypow *= y;
                }
                Ok(sum)
            }
        }
    }
}

fn binomial(n: usize, k: usize) -> Rational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k.min(n - k) {
        num *= BigInt::from((n - i) as u64);
        den *= BigInt::from((i + 1) as u64);
    }
    Rational::new(num, den)
}
