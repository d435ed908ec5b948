//! Symbolic-numeric solver for fractional coupled thermoelastic systems.
//!
//! Solutions are built as sparse sums of generalized power terms
//! `c · x^m · t^(a+bβ) · ΠΓ(·)/ΠΓ(·)` whose coefficients are exact rationals.
//! The decomposition recurrence integrates each component with the
//! Riemann–Liouville kernel and handles products of unknowns through Adomian
//! polynomials. Numeric evaluation happens only at the very end, at a chosen β.

pub mod adomian;
pub mod benchmarks;
pub mod engine;
mod error;
pub mod fixtures;
pub mod linexp;
pub mod ops;
pub mod problem;
pub mod series;
pub mod specfun;
pub mod table;
pub mod transform;
pub mod verify;

pub use adomian::{DerivFactor, NonlinearitySpec, Product, Var};
pub use engine::{ComponentSolution, LinearTermSpec, NonlinearTerm, OuterOp, ProblemSpec, SourcePlacement};
pub use error::{Error, Result};
pub use linexp::LinExp;
pub use ops::FracOrder;
pub use series::{GammaRatio, LogValue, Monomial, Series, Term};
pub use transform::TransformSeries;
