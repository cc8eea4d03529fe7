use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::graph::{LatticeGraph, LatticePoint};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymmetryKind {
    /// Reflection across the horizontal axis.
    H,
    /// Reflection across the vertical axis.
    V,
    /// Quarter turn.
    R,
    /// Half turn.
    R2,
    /// Reflection across the main diagonal.
    Diag,
    /// Reflection across the other diagonal.
    AntiDiag,
    /// Swap of the two sheets of a pillowcase (third coordinate negated).
    Sheet,
}

impl SymmetryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SymmetryKind::H => "h",
            SymmetryKind::V => "v",
            SymmetryKind::R => "r",
            SymmetryKind::R2 => "r2",
            SymmetryKind::Diag => "diag",
            SymmetryKind::AntiDiag => "antidiag",
            SymmetryKind::Sheet => "sheet",
        }
    }
}

impl fmt::Display for SymmetryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SymmetryKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "h" => SymmetryKind::H,
            "v" => SymmetryKind::V,
            "r" => SymmetryKind::R,
            "r2" => SymmetryKind::R2,
            "diag" => SymmetryKind::Diag,
            "antidiag" => SymmetryKind::AntiDiag,
            "sheet" => SymmetryKind::Sheet,
            _ => return Err(Error::Unsupported(format!("symmetry `{s}`"))),
        })
    }
}

/// Vertex permutation induced by a lattice symmetry; always a verified automorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryMap {
    pub permutation: Vec<usize>,
    pub kind: SymmetryKind,
}

impl SymmetryMap {
    pub fn apply(&self, v: usize) -> usize {
        self.permutation[v]
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.permutation.len())
            .filter(|&v| self.permutation[v] == v)
            .collect()
    }

    /// Smallest k >= 1 with p^k = id.
    pub fn order(&self) -> usize {
        let n = self.permutation.len();
        let mut cur: Vec<usize> = (0..n).collect();
        for k in 1..=n.max(1) * 4 {
            cur = cur.iter().map(|&v| self.permutation[v]).collect();
            if cur.iter().enumerate().all(|(i, &v)| i == v) {
                return k;
            }
        }
        unreachable!("permutation order is finite")
    }

    pub fn is_involution(&self) -> bool {
        self.order() <= 2
    }

    /// Checks that the permutation preserves arcs, weights and marks.
    pub fn verify(&self, g: &LatticeGraph) -> Result<()> {
        let n = g.vertex_count();
        if self.permutation.len() != n {
            return Err(Error::NotAutomorphism("permutation length mismatch".into()));
        }
        let mut seen = vec![false; n];
        for &p in &self.permutation {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::NotAutomorphism("not a permutation".into()));
            }
        }
        for v in 0..n {
            if g.is_marked(v) != g.is_marked(self.permutation[v]) {
                return Err(Error::NotAutomorphism(format!(
                    "mark of vertex {v} not preserved"
                )));
            }
        }
        for (u, v, w) in g.arcs() {
            if &g.weight(self.permutation[u], self.permutation[v]) != w {
                return Err(Error::NotAutomorphism(format!(
                    "arc {u}->{v} not preserved"
                )));
            }
        }
        Ok(())
    }
}

fn bbox_sums(g: &LatticeGraph) -> (i64, i64) {
    let xs = g.vertices().iter().map(|v| v.point.x());
    let ys = g.vertices().iter().map(|v| v.point.y());
    let (x0, x1) = (xs.clone().min().unwrap_or(0), xs.max().unwrap_or(0));
    let (y0, y1) = (ys.clone().min().unwrap_or(0), ys.max().unwrap_or(0));
    (x0 + x1, y0 + y1)
}

/// The point map of a symmetry about the bounding-box center of `g`, or `None` when the
/// center makes the map leave the stored lattice.
pub fn point_map(
    g: &LatticeGraph,
    kind: SymmetryKind,
) -> Option<impl Fn(&LatticePoint) -> LatticePoint> {
    let (s, t) = bbox_sums(g);
    let needs_even = matches!(
        kind,
        SymmetryKind::R | SymmetryKind::Diag | SymmetryKind::AntiDiag
    );
    if needs_even && (s - t) % 2 != 0 {
        return None;
    }
    Some(move |p: &LatticePoint| {
        let mut c = p.coords.clone();
        let (x, y) = (p.x(), p.y());
        match kind {
            SymmetryKind::H => c[1] = t - y,
            SymmetryKind::V => c[0] = s - x,
            SymmetryKind::R2 => {
                c[0] = s - x;
                c[1] = t - y;
            }
            SymmetryKind::R => {
                c[0] = (s + t) / 2 - y;
                c[1] = (t - s) / 2 + x;
            }
            SymmetryKind::Diag => {
                c[0] = y + (s - t) / 2;
                c[1] = x + (t - s) / 2;
            }
            SymmetryKind::AntiDiag => {
                c[0] = (s + t) / 2 - y;
                c[1] = (s + t) / 2 - x;
            }
            SymmetryKind::Sheet => {
                if c.len() > 2 {
                    c[2] = -c[2];
                }
            }
        }
        LatticePoint::new(c)
    })
}

/// Coordinate-induced symmetry, verified to be an automorphism.
pub fn symmetry_map(g: &LatticeGraph, kind: SymmetryKind) -> Result<SymmetryMap> {
    if g.vertices().iter().any(|v| v.point.dimension() < 2) {
        return Err(Error::NotAutomorphism("needs planar coordinates".into()));
    }
    let f = point_map(g, kind)
        .ok_or_else(|| Error::NotAutomorphism(format!("{kind} does not preserve the lattice")))?;
    let index = g.point_index();
    let permutation = g
        .vertices()
        .iter()
        .map(|v| {
            let q = f(&v.point);
            index.get(&q).copied().ok_or_else(|| {
                Error::NotAutomorphism(format!(
                    "{kind} maps {:?} outside the vertex set",
                    v.point.coords
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let map = SymmetryMap { permutation, kind };
    map.verify(g)?;
    Ok(map)
}

/// Vertex orbits under the group generated by `gens`, each sorted, ordered by least member.
pub fn orbits(n: usize, gens: &[SymmetryMap]) -> Vec<Vec<usize>> {
    let mut orbit_of = vec![usize::MAX; n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![start];
        orbit_of[start] = id;
        let mut i = 0;
        while i < members.len() {
            let v = members[i];
            for g in gens {
                let w = g.apply(v);
                if orbit_of[w] == usize::MAX {
                    orbit_of[w] = id;
                    members.push(w);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

fn check_generators(g: &LatticeGraph, gens: &[SymmetryMap]) -> Result<()> {
    for s in gens {
        s.verify(g)?;
    }
    Ok(())
}

/// Orbit graph: one vertex per orbit (at its least member's coordinates); the weight from
/// O1 to O2 sums the weights from the least member of O1 into all members of O2.
pub fn quotient_by_group(g: &LatticeGraph, gens: &[SymmetryMap]) -> Result<LatticeGraph> {
    check_generators(g, gens)?;
    let orbs = orbits(g.vertex_count(), gens);
    let mut orbit_of = vec![0; g.vertex_count()];
    for (i, o) in orbs.iter().enumerate() {
        for &v in o {
            orbit_of[v] = i;
        }
    }
    let mut weights: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
    for (i, o) in orbs.iter().enumerate() {
        let rep = o[0];
        for (u, v, w) in g.arcs() {
            if u == rep {
                *weights
                    .entry((i, orbit_of[v]))
                    .or_insert_with(BigRational::zero) += w;
            }
        }
    }
    let symmetric = weights
        .iter()
        .all(|(&(a, b), w)| weights.get(&(b, a)) == Some(w));
    let mut q = LatticeGraph::new(g.is_directed() || !symmetric);
    for o in &orbs {
        q.add_vertex(g.point(o[0]).clone(), g.is_marked(o[0]));
    }
    for ((a, b), w) in weights {
        if !w.is_zero() {
            q.add_arc(a, b, w);
        }
    }
    Ok(q)
}

/// Graph whose weighted perfect matchings (loops allowed as self-covers) correspond to the
/// group-invariant perfect matchings of `g`. An edge orbit contributes only when it is a
/// matching covering exactly the union of its endpoint orbits; edge weights must be 1.
pub fn invariant_matching_graph(g: &LatticeGraph, gens: &[SymmetryMap]) -> Result<LatticeGraph> {
    if g.is_directed() {
        return Err(Error::Directed);
    }
    check_generators(g, gens)?;
    if g.edges().iter().any(|e| !e.2.is_one() || e.0 == e.1) {
        return Err(Error::Unsupported(
            "invariant matchings need unit-weight simple graphs".into(),
        ));
    }
    let orbs = orbits(g.vertex_count(), gens);
    let mut orbit_of = vec![0; g.vertex_count()];
    for (i, o) in orbs.iter().enumerate() {
        for &v in o {
            orbit_of[v] = i;
        }
    }
    let edges: BTreeSet<(usize, usize)> = g.edges().into_iter().map(|(u, v, _)| (u, v)).collect();
    let mut done: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut q = LatticeGraph::new(false);
    for o in &orbs {
        q.add_vertex(g.point(o[0]).clone(), false);
    }
    for &e in &edges {
        if done.contains(&e) {
            continue;
        }
        let mut eorb = vec![e];
        done.insert(e);
        let mut i = 0;
        while i < eorb.len() {
            let (a, b) = eorb[i];
            for s in gens {
                let (x, y) = (s.apply(a), s.apply(b));
                let f = (x.min(y), x.max(y));
                if done.insert(f) {
                    eorb.push(f);
                }
            }
            i += 1;
        }
        let mut cover: Vec<usize> = eorb.iter().flat_map(|&(a, b)| [a, b]).collect();
        cover.sort_unstable();
        let distinct = cover.windows(2).all(|w| w[0] != w[1]);
        let (oa, ob) = (orbit_of[e.0], orbit_of[e.1]);
        let mut want: Vec<usize> = orbs[oa].clone();
        if ob != oa {
            want.extend(&orbs[ob]);
            want.sort_unstable();
        }
        if distinct && cover == want {
            q.add_edge(oa, ob, BigRational::one());
        }
    }
    Ok(q)
}
