//! Exact computations in double Burnside algebras of small finite groups.
//!
//! The crate is layered bottom-up: [`group`] builds groups and their
//! subgroup and section lattices, [`linalg`] does exact linear algebra over
//! ℚ and 𝔽_p, [`biset`] composes bisets by the Mackey formula, and
//! [`functor`] runs the decision procedures on top of them.

pub mod biset;
pub mod budget;
pub mod error;
pub mod functor;
pub mod group;
pub mod linalg;

pub use budget::Budget;
pub use error::{Error, Result};
