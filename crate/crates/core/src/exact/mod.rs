//! Exact arithmetic substrate: Gaussian rationals and sparse multivariate
//! polynomials over them.

mod gaussian;
mod monomial;
mod polynomial;

pub use gaussian::{format_rational, parse_rational, rational, signum, GaussianRational, Rational};
pub use monomial::Monomial;
pub use polynomial::{NumericPolynomial, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("variable count mismatch: {left} vs {right}")]
    VariableCount { left: usize, right: usize },
    #[error("substitution arity mismatch: expected {expected} arguments, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("cannot parse rational `{0}`")]
    Parse(String),
    #[error("exact division left a nonzero remainder: {0}")]
    Remainder(String),
}
