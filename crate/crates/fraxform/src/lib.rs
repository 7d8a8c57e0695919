#![forbid(unsafe_code)]

//! Exact operational calculus for fractional-order Fourier sine and cosine
//! transforms on a family of Mittag-Leffler decay atoms.
//!
//! The engine keeps the transform table, its operational rules (scaling,
//! derivatives, convolution, Parseval) and the equation solver in exact
//! rational arithmetic for every order α ∈ (0, 1], and grounds the whole
//! algebra numerically at α = 1, where the defining integrals converge
//! classically and an independent adaptive-quadrature oracle can check them.
//!
//! Module map:
//!
//! - [`specfun`]: Γ and the Mittag-Leffler series family E_α, cos_α, sin_α.
//! - [`series`]: truncated fractal power series with exact derivative and
//!   integral coefficient maps.
//! - [`atoms`]: the closed time-domain family Σ cᵢ·E_α(−aᵢ t^α).
//! - [`spectral`]: exact polynomials and factored rational functions in
//!   s = ω^α, with partial fractions.
//! - [`transform`]: forward/inverse transforms and the operational rules.
//! - [`ode`]: the transform-method solver with full audit trail.
//! - [`oracle`]: the independent classical quadrature oracle.
//! - [`parse`]: text grammars for expressions, problems and spectral values.
//!
//! ```
//! use fraxform::{parse, ode, Order};
//!
//! let alpha = Order::new(fraxform::rational::ratio(9, 10)).unwrap();
//! let problem = parse::parse_problem("y^(2a) - 9*y = 50*E(-2*t^a); y(0)=1", &alpha).unwrap();
//! let report = ode::solve(&problem).unwrap();
//! assert_eq!(report.solution.to_string(), "-10*E(-2*t^a) + 11*E(-3*t^a)");
//! assert!(report.residual_exact.is_zero());
//! ```

pub mod atoms;
pub mod ode;
pub mod oracle;
pub mod order;
pub mod parse;
pub mod rational;
pub mod series;
pub mod specfun;
pub mod spectral;
pub mod transform;

pub use atoms::{Atom, DerivOrder, TimeExpr};
pub use ode::{OdeProblem, SolveReport};
pub use oracle::{QuadResult, QuadratureConfig};
pub use order::Order;
pub use rational::Rational;
pub use specfun::EvalConfig;
pub use spectral::{Parity, PfTerm, PolyS, RationalS};
pub use transform::{CheckReport, DerivativeRule, SpectralExpr, TransformKind, Verdict};
