//! Exact sparse polynomials in `z`, `z̄` and `u` with Gaussian-rational coefficients.

mod circular;
mod complex;
mod hessian;
mod json;
mod monomial;
mod parse;
mod polynomial;

pub use circular::{CircularForm, LineRestrictor};
pub use complex::{fmt_ratio, parse_ratio, ratio_to_f64, ExactComplex};
pub use hessian::PreparedHessian;
pub use json::{PolynomialJson, TermJson};
pub use monomial::Monomial;
pub use parse::parse_defining_equation;
pub use polynomial::{Polynomial, Substitution};
