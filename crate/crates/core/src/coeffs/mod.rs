//! Coefficient rings: rationals, rational functions of the base
//! coordinates, polynomials in `lam`, and square-root extensions.

pub mod lambda;
pub mod mpoly;
pub mod ratfunc;
pub mod rational;
pub mod rootext;
pub mod scalar;

pub use lambda::LamPoly;
pub use mpoly::{MPoly, MAX_U};
pub use ratfunc::RatFunc;
pub use rational::Rational;
pub use rootext::{field_ops, FieldOp, RootExt, RootTower};
pub use scalar::{EvalPoint, Scalar};
