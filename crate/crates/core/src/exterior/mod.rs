//! Scalar exterior calculus on a single coordinate chart.

mod form;
mod polynomial;
pub mod term;

pub use form::{covector_indices, Chart, Covectors, ScalarForm};
pub use polynomial::{Monomial, Polynomial, EPS_VAR, MAX_DIM, MAX_INPUT_DEGREE, T_VAR};
