//! Exact linear algebra over ℚ and prime fields.
//!
//! Rational elimination runs fraction-free on integer rows; nothing here
//! ever rounds.

mod integer;
mod matrix;
mod scalar;
mod span;

pub use integer::integer_rank;
pub use matrix::Matrix;
pub use scalar::{FieldSpec, Scalar};
pub use span::IncrementalSpan;
