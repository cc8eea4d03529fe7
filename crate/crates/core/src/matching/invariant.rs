//! Perfect matchings fixed by a group of lattice symmetries.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::count::{count_matchings, enumerate_matchings};
use crate::error::{Error, Result};
use crate::lattice::{
    invariant_matching_graph, symmetry_map, LatticeGraph, SymmetryKind, SymmetryMap,
};

/// Below this size invariant matchings are found by filtering all matchings.
pub const FILTER_CAP: usize = 18;

/// Symmetry groups generated by the reflections and rotations of the square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymmetryGroup {
    H,
    HV,
    R2,
    R,
    /// One diagonal reflection.
    D,
    /// Both diagonal reflections.
    DD,
}

impl SymmetryGroup {
    pub const ALL: [SymmetryGroup; 6] = [
        SymmetryGroup::H,
        SymmetryGroup::HV,
        SymmetryGroup::R2,
        SymmetryGroup::R,
        SymmetryGroup::D,
        SymmetryGroup::DD,
    ];

    pub fn generators(self) -> &'static [SymmetryKind] {
        match self {
            SymmetryGroup::H => &[SymmetryKind::H],
            SymmetryGroup::HV => &[SymmetryKind::H, SymmetryKind::V],
            SymmetryGroup::R2 => &[SymmetryKind::R2],
            SymmetryGroup::R => &[SymmetryKind::R],
            SymmetryGroup::D => &[SymmetryKind::Diag],
            SymmetryGroup::DD => &[SymmetryKind::Diag, SymmetryKind::AntiDiag],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SymmetryGroup::H => "h",
            SymmetryGroup::HV => "hv",
            SymmetryGroup::R2 => "r2",
            SymmetryGroup::R => "r",
            SymmetryGroup::D => "d",
            SymmetryGroup::DD => "dd",
        }
    }

    /// Verified generator maps on `g`.
    pub fn maps(self, g: &LatticeGraph) -> Result<Vec<SymmetryMap>> {
        self.generators()
            .iter()
            .map(|&k| symmetry_map(g, k))
            .collect()
    }
}

impl fmt::Display for SymmetryGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SymmetryGroup {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SymmetryGroup::ALL
            .into_iter()
            .find(|g| g.as_str() == s)
            .ok_or_else(|| Error::Unsupported(format!("symmetry group `{s}`")))
    }
}

fn is_invariant(m: &[(usize, usize)], gens: &[SymmetryMap]) -> bool {
    let set: BTreeSet<(usize, usize)> = m.iter().copied().collect();
    gens.iter().all(|s| {
        m.iter().all(|&(u, v)| {
            let (a, b) = (s.apply(u), s.apply(v));
            set.contains(&(a.min(b), a.max(b)))
        })
    })
}

/// Filters every perfect matching of `g` for invariance under `gens`.
pub fn count_invariant_matchings_bruteforce(
    g: &LatticeGraph,
    gens: &[SymmetryMap],
    vertex_cap: usize,
) -> Result<BigInt> {
    for s in gens {
        s.verify(g)?;
    }
    let all = enumerate_matchings(g, vertex_cap)?;
    Ok(BigInt::from(
        all.iter().filter(|m| is_invariant(m, gens)).count(),
    ))
}

/// Counts the perfect matchings of the orbit graph with self-cover loops.
pub fn count_invariant_matchings_quotient(
    g: &LatticeGraph,
    gens: &[SymmetryMap],
) -> Result<BigInt> {
    let q = invariant_matching_graph(g, gens)?;
    let v = count_matchings(&q)?;
    Ok(v.to_integer())
}

/// Number of perfect matchings of `g` invariant under the group; filters brute force on
/// small graphs and counts the orbit graph otherwise.
pub fn count_invariant_matchings(g: &LatticeGraph, group: SymmetryGroup) -> Result<BigInt> {
    if matches!(group, SymmetryGroup::D | SymmetryGroup::DD) {
        return Err(Error::Unsupported(format!(
            "matching classes under {group}"
        )));
    }
    let gens = group.maps(g)?;
    if g.vertex_count() <= FILTER_CAP {
        count_invariant_matchings_bruteforce(g, &gens, FILTER_CAP)
    } else {
        count_invariant_matchings_quotient(g, &gens)
    }
}
