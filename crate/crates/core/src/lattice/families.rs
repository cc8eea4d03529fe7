//! Builders for every graph family. Coordinates are stored at half-unit scale, so
//! integer lattices use even stored values and half-integer lattices odd ones.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;

use super::graph::{lattice_graph, point_order, LatticeGraph, LatticePoint};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyName {
    /// n x n square grid G_n.
    Grid,
    /// d-dimensional grid G_n^(d).
    GridD,
    /// Aztec diamond AD_n.
    Aztec,
    /// Southeastern quarter QAD_n of AD_n.
    Quartered,
    /// Odd Aztec diamond OD_n.
    OddDiamond,
    /// Mixed Aztec diamond MD_n.
    MixedDiamond,
    /// Upper half HOD_n of OD_n.
    HalfOdd,
    /// Upper half HMD_n of MD_n.
    HalfMixed,
    /// (2n+1) x (2n+1) grid minus its center, H_n.
    HoledSquare,
    ZigzagA,
    ZigzagB,
    ZigzagC,
    ZigzagD,
    ZigzagATilde,
    ZigzagBTilde,
    /// Path with every edge weighted q.
    PathQ,
    /// Path with a loop of weight 2 at every vertex.
    LoopQ,
    /// Path with a loop of weight -2 at every vertex.
    LoopQp,
    /// Like LoopQ but the last loop has weight 1.
    LoopR,
    /// Like LoopQp but the last loop has weight -1.
    LoopRp,
    /// Directed block with the tridiagonal 2/4 pattern.
    BlockS,
    /// Negative of BlockS.
    BlockSp,
    /// Aztec pillowcase AP_n.
    Pillowcase,
    /// Odd pillowcase OP_n.
    OddPillowcase,
    MarkedQad,
    MarkedHmd,
    MarkedHod,
    MarkedAd,
}

impl FamilyName {
    pub const ALL: [FamilyName; 28] = [
        FamilyName::Grid,
        FamilyName::GridD,
        FamilyName::Aztec,
        FamilyName::Quartered,
        FamilyName::OddDiamond,
        FamilyName::MixedDiamond,
        FamilyName::HalfOdd,
        FamilyName::HalfMixed,
        FamilyName::HoledSquare,
        FamilyName::ZigzagA,
        FamilyName::ZigzagB,
        FamilyName::ZigzagC,
        FamilyName::ZigzagD,
        FamilyName::ZigzagATilde,
        FamilyName::ZigzagBTilde,
        FamilyName::PathQ,
        FamilyName::LoopQ,
        FamilyName::LoopQp,
        FamilyName::LoopR,
        FamilyName::LoopRp,
        FamilyName::BlockS,
        FamilyName::BlockSp,
        FamilyName::Pillowcase,
        FamilyName::OddPillowcase,
        FamilyName::MarkedQad,
        FamilyName::MarkedHmd,
        FamilyName::MarkedHod,
        FamilyName::MarkedAd,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyName::Grid => "GRID",
            FamilyName::GridD => "GRID_D",
            FamilyName::Aztec => "AZTEC",
            FamilyName::Quartered => "QUARTERED",
            FamilyName::OddDiamond => "ODD_DIAMOND",
            FamilyName::MixedDiamond => "MIXED_DIAMOND",
            FamilyName::HalfOdd => "HALF_ODD",
            FamilyName::HalfMixed => "HALF_MIXED",
            FamilyName::HoledSquare => "HOLED_SQUARE",
            FamilyName::ZigzagA => "ZIGZAG_A",
            FamilyName::ZigzagB => "ZIGZAG_B",
            FamilyName::ZigzagC => "ZIGZAG_C",
            FamilyName::ZigzagD => "ZIGZAG_D",
            FamilyName::ZigzagATilde => "ZIGZAG_A_TILDE",
            FamilyName::ZigzagBTilde => "ZIGZAG_B_TILDE",
            FamilyName::PathQ => "PATH_Q",
            FamilyName::LoopQ => "LOOP_Q",
            FamilyName::LoopQp => "LOOP_QP",
            FamilyName::LoopR => "LOOP_R",
            FamilyName::LoopRp => "LOOP_RP",
            FamilyName::BlockS => "BLOCK_S",
            FamilyName::BlockSp => "BLOCK_SP",
            FamilyName::Pillowcase => "PILLOWCASE",
            FamilyName::OddPillowcase => "ODD_PILLOWCASE",
            FamilyName::MarkedQad => "MARKED_QAD",
            FamilyName::MarkedHmd => "MARKED_HMD",
            FamilyName::MarkedHod => "MARKED_HOD",
            FamilyName::MarkedAd => "MARKED_AD",
        }
    }

    /// Path-like families are parameterised by length and need n >= 1.
    pub fn is_path_family(self) -> bool {
        matches!(
            self,
            FamilyName::PathQ
                | FamilyName::LoopQ
                | FamilyName::LoopQp
                | FamilyName::LoopR
                | FamilyName::LoopRp
                | FamilyName::BlockS
                | FamilyName::BlockSp
        )
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let up = s.to_ascii_uppercase().replace('-', "_");
        FamilyName::ALL
            .into_iter()
            .find(|f| f.as_str() == up)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyId {
    pub name: FamilyName,
    pub n: i64,
    /// Edge weight for PATH_Q (default 1).
    pub q: Option<BigRational>,
    /// Dimension for GRID_D (default 2).
    pub d: Option<usize>,
}

impl FamilyId {
    pub fn new(name: FamilyName, n: i64) -> Self {
        FamilyId {
            name,
            n,
            q: None,
            d: None,
        }
    }

    pub fn with_q(mut self, q: BigRational) -> Self {
        self.q = Some(q);
        self
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = Some(d);
        self
    }
}

fn xy(x: i64, y: i64) -> LatticePoint {
    LatticePoint::xy(x, y)
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Builds a family member. Degenerate orders give empty or tiny graphs, never errors.
pub fn build_family(id: &FamilyId) -> Result<LatticeGraph> {
    let n = id.n;
    if n < 0 {
        return Err(Error::BadOrder { min: 0, got: n });
    }
    if id.name.is_path_family() {
        let q = id.q.clone().unwrap_or_else(BigRational::one);
        return build_path_family(id.name, n, q);
    }
    Ok(match id.name {
        FamilyName::Grid => grid(n),
        FamilyName::GridD => grid_d(id.d.unwrap_or(2), n),
        FamilyName::Aztec => aztec(n),
        FamilyName::Quartered => quartered(n),
        FamilyName::OddDiamond => odd_diamond(n),
        FamilyName::MixedDiamond => mixed_diamond(n),
        FamilyName::HalfOdd => half_odd(n),
        FamilyName::HalfMixed => half_mixed(n),
        FamilyName::HoledSquare => holed_square(n),
        FamilyName::ZigzagA => zigzag_a(n),
        FamilyName::ZigzagB => zigzag_b(n),
        FamilyName::ZigzagC => zigzag_c(n),
        FamilyName::ZigzagD => zigzag_d(n),
        FamilyName::ZigzagATilde => zigzag_a_tilde(n),
        FamilyName::ZigzagBTilde => zigzag_b_tilde(n),
        FamilyName::Pillowcase => pillowcase(&aztec(n), 2 * n),
        FamilyName::OddPillowcase => pillowcase(&odd_diamond(n), 2 * n),
        FamilyName::MarkedQad => marked_qad(n),
        FamilyName::MarkedHmd => marked_hmd(n),
        FamilyName::MarkedHod => marked_hod(n),
        FamilyName::MarkedAd => marked_ad(n),
        _ => unreachable!("path families handled above"),
    })
}

/// Shorthand for `build_family(&FamilyId::new(name, n))` with a valid n.
pub fn family(name: FamilyName, n: i64) -> LatticeGraph {
    build_family(&FamilyId::new(name, n)).expect("valid family order")
}

pub fn build_path_family(name: FamilyName, n: i64, q: BigRational) -> Result<LatticeGraph> {
    if n < 1 {
        return Err(Error::BadOrder { min: 1, got: n });
    }
    let m = n as usize;
    let points = (0..n).map(|i| xy(2 * i, 0));
    let directed = matches!(name, FamilyName::BlockS | FamilyName::BlockSp);
    let mut g = LatticeGraph::new(directed);
    for p in points {
        g.add_vertex(p, false);
    }
    let last = m - 1;
    match name {
        FamilyName::PathQ => {
            for i in 0..last {
                g.add_edge(i, i + 1, q.clone());
            }
        }
        FamilyName::LoopQ | FamilyName::LoopQp | FamilyName::LoopR | FamilyName::LoopRp => {
            let sign = if matches!(name, FamilyName::LoopQ | FamilyName::LoopR) {
                1
            } else {
                -1
            };
            for i in 0..last {
                g.add_edge(i, i + 1, BigRational::one());
            }
            for i in 0..m {
                let w = if i == last && matches!(name, FamilyName::LoopR | FamilyName::LoopRp) {
                    sign
                } else {
                    2 * sign
                };
                g.add_edge(i, i, int(w));
            }
        }
        FamilyName::BlockS | FamilyName::BlockSp => {
            let s = if name == FamilyName::BlockS { 1 } else { -1 };
            // Tridiagonal 2s on the first m-1 vertices; the last row has 2 then 4.
            for i in 0..last.saturating_sub(1) {
                g.add_edge(i, i + 1, int(2 * s));
            }
            if m >= 2 {
                g.add_arc(last, last - 1, int(2 * s));
            }
            g.add_arc(last, last, int(4 * s));
        }
        _ => return Err(Error::UnknownFamily(name.to_string())),
    }
    Ok(g)
}

pub fn grid(n: i64) -> LatticeGraph {
    lattice_graph(
        (0..n).flat_map(|i| (0..n).map(move |j| xy(2 * i, 2 * j))),
        2,
    )
}

pub fn grid_d(d: usize, n: i64) -> LatticeGraph {
    let mut pts: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..d {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |i| {
                    let mut q = p.clone();
                    q.push(2 * i);
                    q
                })
            })
            .collect();
    }
    if n == 0 {
        pts.clear();
    }
    lattice_graph(pts.into_iter().map(LatticePoint::new), 2)
}

fn odd_range(r: i64) -> impl Iterator<Item = i64> + Clone {
    (-r..=r).filter(|v| v.rem_euclid(2) == 1)
}

fn even_range(r: i64) -> impl Iterator<Item = i64> + Clone {
    (-r..=r).filter(|v| v.rem_euclid(2) == 0)
}

/// Half-integer points with |x| + |y| <= n.
fn aztec_points(n: i64) -> Vec<LatticePoint> {
    let r = 2 * n;
    odd_range(r)
        .flat_map(|x| odd_range(r).map(move |y| (x, y)))
        .filter(|&(x, y)| x.abs() + y.abs() <= r)
        .map(|(x, y)| xy(x, y))
        .collect()
}

pub fn aztec(n: i64) -> LatticeGraph {
    lattice_graph(aztec_points(n), 2)
}

pub fn quartered(n: i64) -> LatticeGraph {
    lattice_graph(
        aztec_points(n)
            .into_iter()
            .filter(|p| p.x() >= 1 && p.y() <= -1),
        2,
    )
}

fn odd_diamond_points(n: i64) -> Vec<LatticePoint> {
    let r = 2 * n;
    even_range(r)
        .flat_map(|x| even_range(r).map(move |y| (x, y)))
        .filter(|&(x, y)| x.abs() + y.abs() <= r)
        .map(|(x, y)| xy(x, y))
        .collect()
}

fn mixed_diamond_points(n: i64) -> Vec<LatticePoint> {
    let r = 2 * n - 1;
    if n == 0 {
        return Vec::new();
    }
    odd_range(r)
        .flat_map(|x| even_range(r).map(move |y| (x, y)))
        .filter(|&(x, y)| x.abs() + y.abs() <= r)
        .map(|(x, y)| xy(x, y))
        .collect()
}

pub fn odd_diamond(n: i64) -> LatticeGraph {
    lattice_graph(odd_diamond_points(n), 2)
}

pub fn mixed_diamond(n: i64) -> LatticeGraph {
    lattice_graph(mixed_diamond_points(n), 2)
}

pub fn half_odd(n: i64) -> LatticeGraph {
    lattice_graph(odd_diamond_points(n).into_iter().filter(|p| p.y() >= 0), 2)
}

pub fn half_mixed(n: i64) -> LatticeGraph {
    lattice_graph(
        mixed_diamond_points(n).into_iter().filter(|p| p.y() >= 0),
        2,
    )
}

pub fn holed_square(n: i64) -> LatticeGraph {
    lattice_graph(
        even_range(2 * n)
            .flat_map(|x| even_range(2 * n).map(move |y| (x, y)))
            .filter(|&p| p != (0, 0))
            .map(|(x, y)| xy(x, y)),
        2,
    )
}

/// Points of [0,2n)^2 on or above the zig-zag path through (1,0): j >= 2 floor(i/2).
fn zigzag_a_points(n: i64) -> Vec<(i64, i64)> {
    (0..2 * n)
        .flat_map(|i| (0..2 * n).map(move |j| (i, j)))
        .filter(|&(i, j)| j >= 2 * (i / 2))
        .collect()
}

/// Upper half of G_2n across its diagonal, keeping the diagonal points with odd index.
fn zigzag_b_points(n: i64) -> Vec<(i64, i64)> {
    (0..2 * n)
        .flat_map(|i| (0..2 * n).map(move |j| (i, j)))
        .filter(|&(i, j)| j > i || (i == j && i % 2 == 1))
        .collect()
}

fn zigzag_c_points(n: i64) -> Vec<(i64, i64)> {
    let mut pts = Vec::new();
    for x in (-n + 1)..n {
        let top = (2 * (x + n - 1).div_euclid(2) + 1).min(2 * (n - 1 - x).div_euclid(2) + 1);
        pts.extend((0..=top).map(|y| (x, y)));
    }
    pts
}

fn zigzag_d_points(n: i64) -> Vec<(i64, i64)> {
    let mut pts = Vec::new();
    for x in -n..n {
        let top = (2 * (x + n).div_euclid(2)).min(2 * (n - 1 - x).div_euclid(2) + 1);
        pts.extend((0..=top).map(|y| (x, y)));
    }
    pts
}

fn unit_graph(points: Vec<(i64, i64)>) -> LatticeGraph {
    lattice_graph(points.into_iter().map(|(x, y)| xy(2 * x, 2 * y)), 2)
}

pub fn zigzag_a(n: i64) -> LatticeGraph {
    unit_graph(zigzag_a_points(n))
}

pub fn zigzag_b(n: i64) -> LatticeGraph {
    unit_graph(zigzag_b_points(n))
}

pub fn zigzag_c(n: i64) -> LatticeGraph {
    unit_graph(zigzag_c_points(n))
}

pub fn zigzag_d(n: i64) -> LatticeGraph {
    unit_graph(zigzag_d_points(n))
}

/// A_n with the horizontal edges of its top row weighted 1/2.
pub fn zigzag_a_tilde(n: i64) -> LatticeGraph {
    let mut g = zigzag_a(n);
    let top = 2 * (2 * n - 1);
    for (u, v, _) in g.edges() {
        if g.point(u).y() == top && g.point(v).y() == top {
            g.set_weight(u, v, half());
        }
    }
    g
}

/// B_n with the vertical edges of its long boundary column x = 0 weighted 1/2.
pub fn zigzag_b_tilde(n: i64) -> LatticeGraph {
    let mut g = zigzag_b(n);
    for (u, v, _) in g.edges() {
        if g.point(u).x() == 0 && g.point(v).x() == 0 {
            g.set_weight(u, v, half());
        }
    }
    g
}

fn is_hull(p: &LatticePoint, r: i64) -> bool {
    p.x().abs() + p.y().abs() == r
}

/// Two copies of a diamond glued along the hull |x| + |y| = r (stored scale).
/// Hull vertices get z = 0, the copies z = +2 and z = -2; parallel hull edges fold to weight 2.
fn pillowcase(base: &LatticeGraph, r: i64) -> LatticeGraph {
    let lift = |p: &LatticePoint, z: i64| {
        let z = if is_hull(p, r) { 0 } else { z };
        LatticePoint::new(vec![p.x(), p.y(), z])
    };
    let mut pts: Vec<LatticePoint> = Vec::new();
    for v in base.vertices() {
        if is_hull(&v.point, r) {
            pts.push(lift(&v.point, 0));
        } else {
            pts.push(lift(&v.point, 2));
            pts.push(lift(&v.point, -2));
        }
    }
    pts.sort_by(point_order);
    let mut g = LatticeGraph::new(false);
    for p in pts {
        g.add_vertex(p, false);
    }
    let index = g.point_index();
    for (u, v, w) in base.edges() {
        for z in [2, -2] {
            let a = index[&lift(base.point(u), z)];
            let b = index[&lift(base.point(v), z)];
            g.add_edge(a, b, w.clone());
        }
    }
    g
}

/// Directed copy of `g` with `marked` vertices flagged and every arc from a marked to an
/// unmarked vertex doubled.
fn mark_and_double(g: &LatticeGraph, marked: impl Fn(&LatticePoint) -> bool) -> LatticeGraph {
    let mut out = LatticeGraph::new(true);
    for v in g.vertices() {
        out.add_vertex(v.point.clone(), marked(&v.point));
    }
    for (u, v, w) in g.arcs() {
        let w = if out.is_marked(u) && !out.is_marked(v) {
            w * int(2)
        } else {
            w.clone()
        };
        out.add_arc(u, v, w);
    }
    out
}

pub fn marked_qad(n: i64) -> LatticeGraph {
    mark_and_double(&quartered(n), |p| is_hull(p, 2 * n))
}

pub fn marked_hmd(n: i64) -> LatticeGraph {
    mark_and_double(&half_mixed(n), |p| p.y() == 0)
}

pub fn marked_hod(n: i64) -> LatticeGraph {
    mark_and_double(&half_odd(n), |p| p.y() == 0)
}

/// AD_n with its hull marked; hull-to-hull edges carry weight 2 (the folded parallel pair).
pub fn marked_ad(n: i64) -> LatticeGraph {
    let r = 2 * n;
    let mut g = mark_and_double(&aztec(n), |p| is_hull(p, r));
    for (u, v, _) in g.clone().arcs() {
        if g.is_marked(u) && g.is_marked(v) {
            g.set_weight(u, v, int(2));
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(name: FamilyName, n: i64) -> usize {
        family(name, n).vertex_count()
    }

    #[test]
    fn vertex_counts() {
        for n in 1..=10i64 {
            let u = n as usize;
            assert_eq!(count(FamilyName::Aztec, n), 2 * u * (u + 1));
            assert_eq!(count(FamilyName::Quartered, n), u * (u + 1) / 2);
            assert_eq!(count(FamilyName::OddDiamond, n), 2 * u * u + 2 * u + 1);
            assert_eq!(count(FamilyName::MixedDiamond, n), 2 * u * u);
            assert_eq!(count(FamilyName::HalfMixed, n), u * u + u);
            assert_eq!(count(FamilyName::HalfOdd, n), (u + 1) * (u + 1));
            assert_eq!(
                count(FamilyName::HoledSquare, n),
                (2 * u + 1) * (2 * u + 1) - 1
            );
            assert_eq!(count(FamilyName::Pillowcase, n), 4 * u * u);
            assert_eq!(count(FamilyName::OddPillowcase, n), 4 * u * u + 2);
        }
    }

    #[test]
    fn small_examples() {
        let ad1 = family(FamilyName::Aztec, 1);
        assert_eq!((ad1.vertex_count(), ad1.edges().len()), (4, 4));
        assert_eq!(count(FamilyName::Quartered, 5), 15);
        let od1 = family(FamilyName::OddDiamond, 1);
        assert_eq!(od1.edges().len(), 4);
        let center = od1.point_index()[&LatticePoint::xy(0, 0)];
        assert_eq!(od1.neighbors()[center].len(), 4);
        assert_eq!(count(FamilyName::HoledSquare, 2), 24);
        assert_eq!(count(FamilyName::Aztec, 0), 0);
    }

    #[test]
    fn pillowcase_one_is_doubled_cycle() {
        let g = family(FamilyName::Pillowcase, 1);
        assert_eq!(g.vertex_count(), 4);
        for (_, _, w) in g.edges() {
            assert_eq!(w, int(2));
        }
        assert_eq!(g.edges().len(), 4);
    }

    #[test]
    fn pillowcase_degrees_are_four() {
        for n in 1..=4 {
            let g = family(FamilyName::Pillowcase, n);
            let lap = g.laplacian();
            for v in 0..g.vertex_count() {
                assert_eq!(lap[(v, v)], int(4));
            }
        }
    }

    #[test]
    fn block_s_two() {
        let g = build_path_family(FamilyName::BlockS, 2, BigRational::one()).unwrap();
        let a = g.adjacency_matrix();
        assert_eq!(
            a,
            crate::linalg::BigRationalMatrix::from_i64_rows(&[&[0, 0], &[2, 4]])
        );
    }

    #[test]
    fn loop_r_one() {
        let g = build_path_family(FamilyName::LoopR, 1, BigRational::one()).unwrap();
        assert_eq!(g.weight(0, 0), int(1));
    }

    #[test]
    fn marked_variants_double_outgoing_arcs() {
        for g in [marked_qad(4), marked_hmd(4), marked_hod(3), marked_ad(3)] {
            for (u, v, w) in g.arcs() {
                if u == v {
                    continue;
                }
                let back = g.weight(v, u);
                if g.is_marked(u) && !g.is_marked(v) {
                    assert_eq!(w, &(back * int(2)));
                } else if !g.is_marked(u) && g.is_marked(v) {
                    assert_eq!(back, w * int(2));
                } else {
                    assert_eq!(w, &back);
                }
            }
        }
        assert_eq!(
            marked_hmd(3).vertices().iter().filter(|v| v.marked).count(),
            6
        );
    }

    #[test]
    fn undirected_builders_are_symmetric() {
        for name in FamilyName::ALL {
            let g = build_family(&FamilyId::new(name, 3).with_d(3)).unwrap();
            if !g.is_directed() {
                assert!(g.is_symmetric(), "{name}");
            }
        }
    }

    #[test]
    fn names_round_trip_and_negative_order() {
        for name in FamilyName::ALL {
            assert_eq!(name.as_str().parse::<FamilyName>().unwrap(), name);
        }
        assert!("NOPE".parse::<FamilyName>().is_err());
        assert!(build_family(&FamilyId::new(FamilyName::Grid, -1)).is_err());
        assert!(build_path_family(FamilyName::PathQ, 0, BigRational::one()).is_err());
    }

    #[test]
    fn tilde_weights() {
        let a = zigzag_a_tilde(2);
        let halves = a.edges().iter().filter(|e| e.2 == half()).count();
        assert_eq!(halves, 3);
        let b = zigzag_b_tilde(3);
        let halves = b.edges().iter().filter(|e| e.2 == half()).count();
        assert_eq!(halves, 4);
    }
}
