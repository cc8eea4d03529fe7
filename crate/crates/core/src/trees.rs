//! Spanning trees: Matrix-Tree counts, an enumeration oracle, symmetric-tree classes and the
//! Temperley correspondence with perfect matchings.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    family, outer_face_vertices, temperley_refinement, FamilyName, LatticeGraph, SymmetryMap,
};
use crate::linalg::bareiss_determinant;
use crate::matching::{count_matchings, SymmetryGroup};

/// Spanning-tree count (weighted: sum over trees of the product of edge weights) as the
/// determinant of the Laplacian with vertex 0 removed. Loops are ignored.
pub fn tree_count(g: &LatticeGraph) -> Result<BigInt> {
    if g.is_directed() {
        return Err(Error::Directed);
    }
    if !g.all_weights_integral() {
        return Err(Error::Unsupported(
            "spanning-tree counts need integer weights".into(),
        ));
    }
    let n = g.vertex_count();
    if n <= 1 {
        return Ok(BigInt::one());
    }
    let l = g.laplacian();
    let rows: Vec<Vec<BigInt>> = (1..n)
        .map(|i| (1..n).map(|j| l[(i, j)].to_integer()).collect())
        .collect();
    Ok(bareiss_determinant(rows))
}

/// A spanning tree as sorted (u, v) pairs with u < v.
pub type SpanningTree = Vec<(usize, usize)>;

#[derive(Debug, Clone, Copy)]
pub struct TreeCaps {
    pub max_vertices: usize,
    pub max_trees: usize,
}

impl Default for TreeCaps {
    fn default() -> Self {
        TreeCaps {
            max_vertices: 14,
            max_trees: 200_000,
        }
    }
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

/// Whether the current forest plus the edges still available connects everything.
fn connectable(parent: &[usize], rest: &[(usize, usize)], components: usize) -> bool {
    let mut p = parent.to_vec();
    let mut left = components;
    for &(u, v) in rest {
        let (a, b) = (find(&mut p, u), find(&mut p, v));
        if a != b {
            p[a] = b;
            left -= 1;
            if left == 1 {
                return true;
            }
        }
    }
    left == 1
}

fn enumerate(
    edges: &[(usize, usize)],
    i: usize,
    parent: Vec<usize>,
    components: usize,
    chosen: &mut Vec<(usize, usize)>,
    out: &mut Vec<SpanningTree>,
) {
    if components == 1 {
        out.push(chosen.clone());
        return;
    }
    if i == edges.len() {
        return;
    }
    let (u, v) = edges[i];
    let mut with = parent.clone();
    let (a, b) = (find(&mut with, u), find(&mut with, v));
    if a != b {
        with[a] = b;
        chosen.push((u, v));
        enumerate(edges, i + 1, with, components - 1, chosen, out);
        chosen.pop();
    }
    // Contracting the edge is done; now delete it if the rest still spans.
    if connectable(&parent, &edges[i + 1..], components) {
        enumerate(edges, i + 1, parent, components, chosen, out);
    }
}

/// Every spanning tree, by contraction and deletion over the edge list.
pub fn enumerate_trees(g: &LatticeGraph, caps: &TreeCaps) -> Result<Vec<SpanningTree>> {
    if g.is_directed() {
        return Err(Error::Directed);
    }
    let n = g.vertex_count();
    if n == 0 {
        return Ok(vec![Vec::new()]);
    }
    if !g.is_connected() {
        return Ok(Vec::new());
    }
    let edges: Vec<(usize, usize)> = g
        .edges()
        .into_iter()
        .filter(|e| e.0 != e.1)
        .map(|e| (e.0, e.1))
        .collect();
    if n > caps.max_vertices {
        let mut unit = LatticeGraph::new(false);
        for v in g.vertices() {
            unit.add_vertex(v.point.clone(), false);
        }
        for &(u, v) in &edges {
            unit.add_edge(u, v, BigRational::one());
        }
        let count = tree_count(&unit)?;
        if count > BigInt::from(caps.max_trees) {
            return Err(Error::CapExceeded {
                what: format!("{count} spanning trees on {n} vertices"),
                cap: caps.max_trees,
            });
        }
    }
    let mut out = Vec::new();
    enumerate(&edges, 0, (0..n).collect(), n, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Sum over the trees of the product of their edge weights.
pub fn weighted_tree_sum(g: &LatticeGraph, trees: &[SpanningTree]) -> BigRational {
    trees.iter().fold(BigRational::zero(), |acc, t| {
        acc + t
            .iter()
            .fold(BigRational::one(), |p, &(u, v)| p * g.weight(u, v))
    })
}

fn tree_is_invariant(t: &SpanningTree, gens: &[SymmetryMap]) -> bool {
    let set: BTreeSet<(usize, usize)> = t.iter().copied().collect();
    gens.iter().all(|s| {
        t.iter().all(|&(u, v)| {
            let (a, b) = (s.apply(u), s.apply(v));
            set.contains(&(a.min(b), a.max(b)))
        })
    })
}

/// Spanning trees fixed by every generator, by filtering the full enumeration.
pub fn count_invariant_trees(
    g: &LatticeGraph,
    gens: &[SymmetryMap],
    caps: &TreeCaps,
) -> Result<BigInt> {
    for s in gens {
        s.verify(g)?;
    }
    let trees = enumerate_trees(g, caps)?;
    Ok(BigInt::from(
        trees.iter().filter(|t| tree_is_invariant(t, gens)).count(),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCount {
    pub value: BigInt,
    /// Set when the class is empty for a structural reason rather than by computation.
    pub provably_empty: bool,
}

impl ClassCount {
    fn computed(value: BigInt) -> Self {
        ClassCount {
            value,
            provably_empty: false,
        }
    }

    fn empty() -> Self {
        ClassCount {
            value: BigInt::zero(),
            provably_empty: true,
        }
    }
}

fn matchings_of(name: FamilyName, n: i64) -> Result<BigInt> {
    Ok(count_matchings(&family(name, n.max(0)))?.to_integer())
}

/// Number of spanning trees of a diamond family fixed by a symmetry group, through the
/// reductions to Aztec half-diamonds and zig-zag matchings.
pub fn symmetry_class_count(name: FamilyName, n: i64, group: SymmetryGroup) -> Result<ClassCount> {
    use FamilyName::*;
    use SymmetryGroup::*;
    if n < 1 {
        return Err(Error::BadOrder { min: 1, got: n });
    }
    let open = |what: &str| {
        Err(Error::NoClosedForm(format!(
            "{what} trees; use count_invariant_trees for small n"
        )))
    };
    match (name, group) {
        (Aztec, H) => {
            let half = tree_count(&family(HalfMixed, n))?;
            Ok(ClassCount::computed(BigInt::from(2 * n) * half))
        }
        (Aztec, HV | R2 | R | D | DD) => Ok(ClassCount::empty()),
        (OddDiamond, H) => Ok(ClassCount::computed(matchings_of(ZigzagC, 2 * n - 1)?)),
        (OddDiamond, HV) => Ok(ClassCount::computed(matchings_of(ZigzagA, n - 1)?)),
        (OddDiamond, R) => open("quarter-turn symmetric"),
        (OddDiamond, R2) => open("half-turn symmetric"),
        (OddDiamond, D | DD) => open("diagonally symmetric"),
        (MixedDiamond, H) => Ok(ClassCount::computed(matchings_of(ZigzagC, 2 * n - 2)?)),
        (MixedDiamond, HV) => Ok(ClassCount::computed(matchings_of(ZigzagB, n - 1)?)),
        (MixedDiamond, R2) => open("half-turn symmetric"),
        _ => Err(Error::Unsupported(format!(
            "{} trees of {}",
            group,
            name.as_str()
        ))),
    }
}

/// Checks t(g) = M(T(g) minus v) for a vertex v of g on the infinite face.
pub fn temperley_check(g: &LatticeGraph, v: usize) -> Result<bool> {
    let outer = outer_face_vertices(g)?;
    if !outer.contains(&v) {
        return Err(Error::NotOnOuterFace(v));
    }
    let t = temperley_refinement(g)?;
    let p = g.point(v);
    let index = t.point_index();
    let target = crate::lattice::LatticePoint::xy(2 * p.x(), 2 * p.y());
    let tv = *index
        .get(&target)
        .expect("original vertices survive refinement");
    let lhs = tree_count(g)?;
    let rhs = count_matchings(&t.without_vertex(tv))?;
    Ok(BigRational::from_integer(lhs) == rhs)
}

/// Every (graph, boundary vertex) Temperley instance for a family at size n, as counts.
pub fn temperley_instances(g: &LatticeGraph) -> Result<Vec<(usize, bool)>> {
    outer_face_vertices(g)?
        .into_iter()
        .map(|v| Ok((v, temperley_check(g, v)?)))
        .collect()
}
