//! Factorization of matching counts of a bipartite planar graph across a reflection axis:
//! M(G) = 2^k M(G+) M(G-), where 2k vertices lie on the axis.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::count::count_matchings;
use crate::error::{Error, Result};
use crate::lattice::{
    lattice_graph, symmetry_map, LatticeGraph, LatticePoint, SymmetryKind, SymmetryMap,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Above,
    On,
    Below,
}

/// A reflection given combinatorially: the vertex involution, the axis vertices in their
/// order along the axis, and the side of every vertex.
#[derive(Debug, Clone)]
pub struct AxisSpec {
    pub involution: Vec<usize>,
    pub axis: Vec<usize>,
    pub side: Vec<Side>,
}

#[derive(Debug, Clone)]
pub struct Split {
    pub plus: LatticeGraph,
    pub minus: LatticeGraph,
    /// Half the number of axis vertices.
    pub k: usize,
}

impl Split {
    /// 2^k M(G+) M(G-).
    pub fn product(&self) -> Result<BigRational> {
        let two_k = BigRational::from_integer(BigInt::from(2).pow(self.k as u32));
        Ok(two_k * count_matchings(&self.plus)? * count_matchings(&self.minus)?)
    }
}

fn sign(v: i64) -> Side {
    match v.signum() {
        1 => Side::Above,
        0 => Side::On,
        _ => Side::Below,
    }
}

/// Axis data from a coordinate reflection about the bounding-box center. For `V` the left
/// side counts as above, for the diagonals the side with larger y.
pub fn axis_from_symmetry(g: &LatticeGraph, kind: SymmetryKind) -> Result<AxisSpec> {
    if !matches!(
        kind,
        SymmetryKind::H | SymmetryKind::V | SymmetryKind::Diag | SymmetryKind::AntiDiag
    ) {
        return Err(Error::BadSplit(format!(
            "{kind} is not a reflection in the plane"
        )));
    }
    let map: SymmetryMap = symmetry_map(g, kind)?;
    let xs = g.vertices().iter().map(|v| v.point.x());
    let ys = g.vertices().iter().map(|v| v.point.y());
    let s = xs.clone().min().unwrap_or(0) + xs.max().unwrap_or(0);
    let t = ys.clone().min().unwrap_or(0) + ys.max().unwrap_or(0);
    let n = g.vertex_count();
    let mut side = Vec::with_capacity(n);
    let mut along = Vec::with_capacity(n);
    for v in 0..n {
        let (x, y) = (g.point(v).x(), g.point(v).y());
        let (d, pos) = match kind {
            SymmetryKind::H => (2 * y - t, x),
            SymmetryKind::V => (s - 2 * x, y),
            SymmetryKind::Diag => (2 * (y - x) - (t - s), x + y),
            _ => (2 * (x + y) - (s + t), x - y),
        };
        side.push(sign(d));
        along.push(pos);
    }
    let mut axis: Vec<usize> = (0..n).filter(|&v| side[v] == Side::On).collect();
    axis.sort_by_key(|&v| along[v]);
    Ok(AxisSpec {
        involution: map.permutation,
        axis,
        side,
    })
}

/// Two-colouring with `first` white (true); `None` if the graph is not bipartite.
fn two_colouring(g: &LatticeGraph, first: usize) -> Option<Vec<bool>> {
    let n = g.vertex_count();
    let adj = g.neighbors();
    let mut colour: Vec<Option<bool>> = vec![None; n];
    let starts = std::iter::once(first).chain(0..n);
    for s in starts {
        if colour[s].is_some() {
            continue;
        }
        colour[s] = Some(true);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let cu = colour[u].expect("coloured");
            for &(v, _) in &adj[u] {
                match colour[v] {
                    None => {
                        colour[v] = Some(!cu);
                        queue.push_back(v);
                    }
                    Some(c) if c == cu => return None,
                    _ => {}
                }
            }
        }
    }
    Some(colour.into_iter().map(|c| c.unwrap_or(true)).collect())
}

fn check_spec(g: &LatticeGraph, spec: &AxisSpec) -> Result<()> {
    let n = g.vertex_count();
    if spec.involution.len() != n || spec.side.len() != n {
        return Err(Error::BadSplit("axis data does not match the graph".into()));
    }
    let map = SymmetryMap {
        permutation: spec.involution.clone(),
        kind: SymmetryKind::H,
    };
    map.verify(g)
        .map_err(|e| Error::BadSplit(format!("not symmetric: {e}")))?;
    if !map.is_involution() {
        return Err(Error::BadSplit("the map is not an involution".into()));
    }
    let mut on_axis = vec![false; n];
    for &a in &spec.axis {
        if a >= n || std::mem::replace(&mut on_axis[a], true) {
            return Err(Error::BadSplit("axis list is not a set of vertices".into()));
        }
    }
    for v in 0..n {
        let expected = match spec.side[v] {
            Side::Above => Side::Below,
            Side::Below => Side::Above,
            Side::On => Side::On,
        };
        if spec.side[spec.involution[v]] != expected {
            return Err(Error::BadSplit(format!(
                "vertex {v} is not mirrored to the other side"
            )));
        }
        if (spec.side[v] == Side::On) != on_axis[v] {
            return Err(Error::BadSplit(format!(
                "axis list and sides disagree at vertex {v}"
            )));
        }
        if on_axis[v] && spec.involution[v] != v {
            return Err(Error::BadSplit(format!(
                "axis vertex {v} is moved by the reflection"
            )));
        }
    }
    for (u, v, _) in g.edges() {
        if matches!(
            (spec.side[u], spec.side[v]),
            (Side::Above, Side::Below) | (Side::Below, Side::Above)
        ) {
            return Err(Error::BadSplit(
                "axis vertices do not form a cut set".into(),
            ));
        }
    }
    if spec.axis.len() % 2 == 1 {
        return Err(Error::BadSplit(format!(
            "{} vertices on the axis",
            spec.axis.len()
        )));
    }
    Ok(())
}

/// Splits `g` across the axis. Axis vertices alternate a1, b1, a2, b2, ...; with a1 white,
/// G+ holds the vertices above plus the black a's and white b's, G- the rest. Edges along
/// the axis are halved; edges from an axis vertex into the other half disappear because
/// each half is an induced subgraph.
pub fn factorization_split(g: &LatticeGraph, spec: &AxisSpec) -> Result<Split> {
    if g.is_directed() {
        return Err(Error::Directed);
    }
    check_spec(g, spec)?;
    let n = g.vertex_count();
    let first = spec.axis.first().copied().unwrap_or(0);
    let white =
        two_colouring(g, first).ok_or_else(|| Error::BadSplit("graph is not bipartite".into()))?;
    let mut in_plus = vec![false; n];
    for v in 0..n {
        in_plus[v] = spec.side[v] == Side::Above;
    }
    for (i, &a) in spec.axis.iter().enumerate() {
        let is_a = i % 2 == 0;
        in_plus[a] = is_a != white[a];
    }
    let in_minus: Vec<bool> = in_plus.iter().map(|&p| !p).collect();
    let halve = |h: LatticeGraph, keep: &[bool]| {
        let on: Vec<bool> = (0..n)
            .filter(|&v| keep[v])
            .map(|v| spec.side[v] == Side::On)
            .collect();
        let mut h = h;
        for (u, v, w) in h.edges() {
            if on[u] && on[v] && u != v {
                h.set_weight(u, v, w / BigRational::from_integer(2.into()));
            }
        }
        h
    };
    Ok(Split {
        plus: halve(g.induced(&in_plus), &in_plus),
        minus: halve(g.induced(&in_minus), &in_minus),
        k: spec.axis.len() / 2,
    })
}

/// Orbit graph of the holed square H_n under a rotation group, drawn in a fundamental
/// cone, together with the reflection used to split it.
struct Cone {
    graph: LatticeGraph,
    spec: AxisSpec,
}

/// Builds the orbit graph from a rotation `rot`, a representative test `kept`, the mirror
/// `mirror` (on real coordinates), the side function and the axis order key.
fn cone(
    n: i64,
    rot: fn((i64, i64)) -> (i64, i64),
    order: usize,
    kept: impl Fn((i64, i64)) -> bool,
    mirror: impl Fn((i64, i64)) -> (i64, i64),
    side: impl Fn((i64, i64)) -> i64,
    axis_key: impl Fn((i64, i64)) -> i64,
) -> Cone {
    let orbit = |p: (i64, i64)| {
        let mut o = vec![p];
        for _ in 1..order {
            o.push(rot(*o.last().expect("nonempty")));
        }
        o
    };
    let rep = |p: (i64, i64)| {
        orbit(p)
            .into_iter()
            .find(|&q| kept(q))
            .expect("every orbit meets the fundamental cone")
    };
    let square: Vec<(i64, i64)> = (-n..=n)
        .flat_map(|x| (-n..=n).map(move |y| (x, y)))
        .filter(|&p| p != (0, 0))
        .collect();
    let reps: Vec<(i64, i64)> = square.iter().copied().filter(|&p| kept(p)).collect();
    let base = lattice_graph(reps.iter().map(|&(x, y)| LatticePoint::xy(2 * x, 2 * y)), 2);
    let mut graph = LatticeGraph::new(false);
    for v in base.vertices() {
        graph.add_vertex(v.point.clone(), false);
    }
    let index: BTreeMap<(i64, i64), usize> = base
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| ((v.point.x() / 2, v.point.y() / 2), i))
        .collect();
    // One quotient edge per orbit of square-grid edges.
    let mut seen = std::collections::BTreeSet::new();
    for &p in &square {
        for q in [(p.0 + 1, p.1), (p.0, p.1 + 1)] {
            if q == (0, 0) || q.0.abs() > n || q.1.abs() > n {
                continue;
            }
            let key = orbit(p)
                .into_iter()
                .zip(orbit(q))
                .map(|(a, b)| (a.min(b), a.max(b)))
                .min()
                .expect("nonempty");
            if seen.insert(key) {
                graph.add_edge(
                    index[&rep(p)],
                    index[&rep(q)],
                    BigRational::from_integer(1.into()),
                );
            }
        }
    }
    let count = graph.vertex_count();
    let pts: Vec<(i64, i64)> = (0..count)
        .map(|v| (graph.point(v).x() / 2, graph.point(v).y() / 2))
        .collect();
    let involution: Vec<usize> = pts.iter().map(|&p| index[&rep(mirror(p))]).collect();
    let sides: Vec<Side> = (0..count)
        .map(|v| {
            if involution[v] == v {
                Side::On
            } else {
                sign(side(pts[v]))
            }
        })
        .collect();
    let mut axis: Vec<usize> = (0..count).filter(|&v| sides[v] == Side::On).collect();
    axis.sort_by_key(|&v| axis_key(pts[v]));
    Cone {
        graph,
        spec: AxisSpec {
            involution,
            axis,
            side: sides,
        },
    }
}

/// H_n modulo the half turn, in the cone y <= x with the two halves of the diagonal glued,
/// split across the perpendicular diagonal.
pub fn half_turn_cone(n: i64) -> (LatticeGraph, AxisSpec) {
    let c = cone(
        n,
        |(x, y)| (-x, -y),
        2,
        |(x, y)| y < x || (y == x && x > 0),
        |(x, y)| (-y, -x),
        |(x, y)| x + y,
        |(x, y)| if x == y { x } else { -x },
    );
    (c.graph, c.spec)
}

/// H_n modulo the quarter turn, in the cone y <= -|x| with its two boundary rays glued,
/// split across the vertical axis.
pub fn quarter_turn_cone(n: i64) -> (LatticeGraph, AxisSpec) {
    let c = cone(
        n,
        |(x, y)| (-y, x),
        4,
        |(x, y)| y < -x.abs() || (x > 0 && y == -x),
        |(x, y)| (-x, y),
        |(x, _)| -x,
        |(x, y)| if x == 0 { y } else { x },
    );
    (c.graph, c.spec)
}
