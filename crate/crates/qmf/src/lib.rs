//! Exact quasimodular and Jacobi form arithmetic, the Igusa cusp form and
//! the K3 x E partition function, with constant-term machinery for
//! multivariate elliptic functions.
//!
//! The series kernel is generic over an exact [`Scalar`]; the rest of the
//! library fixes it to [`Rational`].

pub mod constraints;
pub mod elliptic;
pub mod error;
pub mod graphsum;
pub mod igusa;
pub mod jacobi;
pub mod linalg;
pub mod poly;
pub mod report;
pub mod qmod;
pub mod scalar;
pub mod series;

pub use error::{Error, Result};
pub use scalar::{int, rat, FieldScalar, Rational, Scalar};
pub use series::{Prec, TruncatedSeries, Var};

/// Rational series, used throughout.
pub type Series = TruncatedSeries<Rational>;
