//! The fractional order α ∈ (0, 1] shared by every object in a computation.

use num_traits::{One, Signed};
use thiserror::Error;

use crate::rational::{render, to_f64, Rational};

#[derive(Debug, Error, PartialEq)]
pub enum OrderError {
    #[error("order must lie in (0, 1], got {0}")]
    OutOfRange(String),
}

/// Fractional order α ∈ (0, 1], carried as an exact rational.
///
/// α = 1 recovers classical calculus; every numeric identity check in this
/// crate is grounded there. For α < 1 the transform algebra is exact but
/// purely formal (see the `transform` module).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Order(Rational);

impl Order {
    pub fn new(alpha: Rational) -> Result<Self, OrderError> {
        if alpha.is_positive() && alpha <= Rational::one() {
            Ok(Order(alpha))
        } else {
            Err(OrderError::OutOfRange(render(&alpha)))
        }
    }

    /// The classical order α = 1.
    pub fn one() -> Self {
        Order(Rational::one())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn as_rational(&self) -> &Rational {
        &self.0
    }

    pub fn as_f64(&self) -> f64 {
        to_f64(&self.0)
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", render(&self.0))
    }
}
