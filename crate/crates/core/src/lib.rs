//! Exact symbolic exterior calculus for 2-gauge theory over differential
//! crossed modules.
//!
//! Everything is computed over arbitrary-precision rationals, so every
//! identity of the theory (2-Bianchi identities, closedness of the higher
//! invariant form, the higher Chern-Weil transgression, gauge covariance)
//! is checked to a literal zero rather than to a tolerance.
//!
//! Layers, bottom up:
//! - [`exterior`]: polynomials and scalar differential forms on one chart.
//! - [`algebra`]: Lie algebras, crossed modules and invariant pairings.
//! - [`gauge`]: algebra-valued forms, 2-connections, curvatures, gauge
//!   transformations.
//! - [`chsas`]: the invariant form `⟨𝓕ⁿ, 𝓖⟩`, the 2ChSAS potential and the
//!   2AST transgression form.
//! - [`tgft`]: the transgression field theory built on the 2AST form.

#![forbid(unsafe_code)]

pub mod algebra;
pub mod chsas;
pub mod exterior;
pub mod gauge;
pub mod random;
pub mod tgft;

pub use algebra::{CrossedModule, InvariantPairing, LieAlgebra, ValidationReport};
pub use exterior::{Chart, Monomial, Polynomial, ScalarForm};
pub use gauge::{AlgebraForm, CurvaturePair, GaugeData, Side, TwoConnection};

/// Exact scalar type used everywhere.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{what}: expected dimension {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("forms live on different charts (dim {0} vs {1})")]
    ChartMismatch(usize, usize),
    #[error("{what}: expected degree {expected}, found {found}")]
    DegreeMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("expected a {expected}-valued form, found {found}-valued")]
    SideMismatch { expected: Side, found: Side },
    #[error("pairing arity {arity} does not match {found} g-slot arguments")]
    ArityMismatch { arity: usize, found: usize },
    #[error("chart dimension {0} outside 1..={max}", max = exterior::MAX_DIM)]
    ChartDimension(usize),
    #[error("coefficient degree {0} exceeds the cap {max}", max = exterior::MAX_INPUT_DEGREE)]
    DegreeCap(u32),
    #[error("form depends on the parameter t or eps")]
    ParameterPresent,
    #[error("{0} has no matrix representation")]
    MissingMatrixRep(String),
    #[error("unknown builtin module '{0}'")]
    UnknownModule(String),
    #[error("no invariant pairing of arity {arity} is available for '{module}'")]
    NoPairing { module: String, arity: usize },
    #[error("invalid gauge data: {0}")]
    InvalidGauge(String),
    #[error("matrix does not lie in the span of the algebra representation")]
    NotInAlgebra,
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

/// Small-integer rational constructor used throughout the builtins and tests.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
