//! Finitely presented C∞-rings and their algebraic de Rham complexes.

pub mod basis;
pub mod cring;
pub mod derham;
pub mod expr;
pub mod geometry;
pub mod integrate;
pub mod kaehler;
pub mod linalg;
pub mod poly;
pub mod random;
pub mod scalar;
pub mod selfcheck;

pub use expr::{compose, parse, ExprError, SmoothExpr};
pub use scalar::{Field, Scalar};

/// Exact rational numbers.
pub type Rational = num_rational::BigRational;
/// Polynomials with exact rational coefficients.
pub type Poly = poly::Polynomial<Rational>;
