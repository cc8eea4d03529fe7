//! Exact linear algebra over the rationals and integers.

pub mod matrix;
pub mod poly;
pub mod smith;

pub use matrix::{bareiss_determinant, BigRationalMatrix};
pub use poly::{parse_rat_polynomial, parse_rational, IntPolynomial, Polynomial, RatPolynomial};
pub use smith::{smith_form_xi_minus_a, smith_form_xi_minus_a_capped, PolySmithForm};
