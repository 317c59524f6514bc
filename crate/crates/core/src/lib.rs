//! Numerical de Branges-Rovnyak spaces.
//!
//! Boundary calculus on the circle, Pythagorean mates, norms and kernels of
//! `H(b)`, finite measures on the closed disk, and analyzers deciding direct,
//! reverse and two-sided Carleson embeddings.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analyzers;
pub mod boundary;
pub mod error;
pub mod hb;
pub mod measure;
pub mod numeric;
pub mod scenarios;

pub use error::{HbError, Result};
