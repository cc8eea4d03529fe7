//! Weighted perfect matchings: exact counts, brute-force oracles, symmetry classes and
//! axis factorization.

pub mod count;
pub mod invariant;
pub mod split;

pub use count::{
    count_matchings, count_matchings_bruteforce, count_matchings_integer, count_matchings_with,
    enumerate_matchings, sweep_order, DpStrategy, MatchingOptions,
};
pub use invariant::{
    count_invariant_matchings, count_invariant_matchings_bruteforce,
    count_invariant_matchings_quotient, SymmetryGroup,
};
pub use split::{
    axis_from_symmetry, factorization_split, half_turn_cone, quarter_turn_cone, AxisSpec, Side,
    Split,
};
