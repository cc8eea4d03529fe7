//! Exact constructions and counts for Aztec-diamond-like lattice graphs: characteristic
//! polynomials, spanning trees, weighted perfect matchings, similarity certificates
//! and certified evaluation of trigonometric product formulas.

// Dense matrix code reads best with explicit index loops.
#![allow(clippy::needless_range_loop)]

pub mod closed_forms;
pub mod decomposition;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod matching;
pub mod trees;

pub use error::{Error, Result};
