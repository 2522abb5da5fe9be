//! Exact scalars, index sets, the coefficient ring and linear algebra.

pub mod blade;
pub mod expr;
pub mod matrix;
pub mod numeric;
pub mod rational;

pub use blade::{binomial, blades, Blade};
pub use expr::{ExprCoeff, Monomial, Poly};
pub use matrix::{QMatrix, SparseMatrix, SparseVec};
pub use numeric::{Numeric, Scalar, DEFAULT_DIGITS};
pub use rational::{fmt_q, parse_q, q, qi, Q};
