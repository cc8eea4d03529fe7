//! Structural transforms on unit-square grid subgraphs: Temperley refinement, inner dual,
//! outer-face detection and a dihedral canonical form for isomorphism checks.

use std::collections::HashSet;

use num_traits::One;

use super::graph::{lattice_graph, LatticeGraph, LatticePoint};
use crate::error::{Error, Result};

fn components(g: &LatticeGraph) -> usize {
    let n = g.vertex_count();
    let adj = g.neighbors();
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    count
}

/// Lower-left corners of the unit squares whose four edges are all present.
fn unit_squares(g: &LatticeGraph) -> Vec<LatticePoint> {
    let index = g.point_index();
    let at = |x: i64, y: i64| index.get(&LatticePoint::xy(x, y)).copied();
    let mut out = Vec::new();
    for v in g.vertices() {
        let (x, y) = (v.point.x(), v.point.y());
        if let (Some(a), Some(b), Some(c), Some(d)) =
            (at(x, y), at(x + 2, y), at(x, y + 2), at(x + 2, y + 2))
        {
            if g.has_arc(a, b) && g.has_arc(a, c) && g.has_arc(b, d) && g.has_arc(c, d) {
                out.push(v.point.clone());
            }
        }
    }
    out
}

/// Checks the unit-grid preconditions and returns the unit squares, which are then exactly
/// the bounded faces.
pub fn grid_faces(g: &LatticeGraph) -> Result<Vec<LatticePoint>> {
    if g.is_directed() {
        return Err(Error::Directed);
    }
    if g.vertices().iter().any(|v| v.point.dimension() != 2) {
        return Err(Error::NotGrid("coordinates are not planar".into()));
    }
    if let Some(first) = g.vertices().first() {
        let (px, py) = (first.point.x().rem_euclid(2), first.point.y().rem_euclid(2));
        if g.vertices()
            .iter()
            .any(|v| v.point.x().rem_euclid(2) != px || v.point.y().rem_euclid(2) != py)
        {
            return Err(Error::NotGrid("mixed coordinate parities".into()));
        }
    }
    for (u, v, w) in g.edges() {
        let (p, q) = (g.point(u), g.point(v));
        let d = (p.x() - q.x()).abs() + (p.y() - q.y()).abs();
        if u == v || d != 2 || !w.is_one() {
            return Err(Error::NotGrid(format!(
                "edge {u}-{v} is not a unit grid edge"
            )));
        }
    }
    let squares = unit_squares(g);
    let bounded = g.edges().len() + components(g) - g.vertex_count();
    if squares.len() != bounded {
        return Err(Error::NotGrid(format!(
            "{} bounded faces but only {} unit squares",
            bounded,
            squares.len()
        )));
    }
    Ok(squares)
}

/// Refinement T(g): original vertices, edge midpoints and face centers, with coordinates
/// scaled by 2 so the result is again a unit grid graph.
pub fn temperley_refinement(g: &LatticeGraph) -> Result<LatticeGraph> {
    let faces = grid_faces(g)?;
    let mut pts: Vec<LatticePoint> = g
        .vertices()
        .iter()
        .map(|v| LatticePoint::xy(2 * v.point.x(), 2 * v.point.y()))
        .collect();
    for (u, v, _) in g.edges() {
        let (p, q) = (g.point(u), g.point(v));
        pts.push(LatticePoint::xy(p.x() + q.x(), p.y() + q.y()));
    }
    for f in faces {
        pts.push(LatticePoint::xy(2 * f.x() + 2, 2 * f.y() + 2));
    }
    Ok(lattice_graph(pts, 2))
}

/// Bounded faces as vertices, adjacent when the faces share an edge.
pub fn inner_dual(g: &LatticeGraph) -> Result<LatticeGraph> {
    let faces = grid_faces(g)?;
    Ok(lattice_graph(
        faces
            .into_iter()
            .map(|f| LatticePoint::xy(f.x() + 1, f.y() + 1)),
        2,
    ))
}

/// Vertices incident to the infinite face: those missing at least one of the four unit
/// squares around them.
pub fn outer_face_vertices(g: &LatticeGraph) -> Result<Vec<usize>> {
    let faces: HashSet<LatticePoint> = grid_faces(g)?.into_iter().collect();
    Ok((0..g.vertex_count())
        .filter(|&v| {
            let p = g.point(v);
            [(0, 0), (-2, 0), (0, -2), (-2, -2)]
                .iter()
                .any(|&(dx, dy)| !faces.contains(&LatticePoint::xy(p.x() + dx, p.y() + dy)))
        })
        .collect())
}

type PlaneMap = fn(i64, i64) -> (i64, i64);

/// A point (x, y, MIN, MIN, "") or an arc (x1, y1, x2, y2, weight) after normalisation.
pub type CanonicalEntry = (i64, i64, i64, i64, String);

const DIHEDRAL: [PlaneMap; 8] = [
    |x, y| (x, y),
    |x, y| (-y, x),
    |x, y| (-x, -y),
    |x, y| (y, -x),
    |x, y| (-x, y),
    |x, y| (x, -y),
    |x, y| (y, x),
    |x, y| (-y, -x),
];

/// Canonical form of a planar lattice graph up to the dihedral group and translation:
/// the lexicographically least sorted (points, edges) description.
pub fn canonical_form(g: &LatticeGraph) -> Vec<CanonicalEntry> {
    let mut best: Option<Vec<CanonicalEntry>> = None;
    for t in DIHEDRAL {
        let mapped: Vec<(i64, i64)> = g
            .vertices()
            .iter()
            .map(|v| t(v.point.x(), v.point.y()))
            .collect();
        let mx = mapped.iter().map(|p| p.0).min().unwrap_or(0);
        let my = mapped.iter().map(|p| p.1).min().unwrap_or(0);
        let norm: Vec<(i64, i64)> = mapped.iter().map(|&(x, y)| (x - mx, y - my)).collect();
        let mut desc: Vec<CanonicalEntry> = norm
            .iter()
            .map(|&(x, y)| (x, y, i64::MIN, i64::MIN, String::new()))
            .collect();
        for (u, v, w) in g.arcs() {
            let (a, b) = (norm[u], norm[v]);
            desc.push((a.0, a.1, b.0, b.1, w.to_string()));
        }
        desc.sort();
        if best.as_ref().is_none_or(|b| desc < *b) {
            best = Some(desc);
        }
    }
    best.unwrap_or_default()
}

pub fn isomorphic_by_embedding(a: &LatticeGraph, b: &LatticeGraph) -> bool {
    canonical_form(a) == canonical_form(b)
}

/// A vertex bijection from `a` to `b` induced by a dihedral transform plus translation that
/// preserves arcs, weights and marks; `map[v]` is the image of vertex v of `a`.
pub fn embedding_isomorphism(a: &LatticeGraph, b: &LatticeGraph) -> Option<Vec<usize>> {
    if a.vertex_count() != b.vertex_count()
        || a.arc_count() != b.arc_count()
        || a.is_directed() != b.is_directed()
    {
        return None;
    }
    let planar = |g: &LatticeGraph| g.vertices().iter().all(|v| v.point.dimension() == 2);
    if !planar(a) || !planar(b) {
        return None;
    }
    let index = b.point_index();
    let bx = b.vertices().iter().map(|v| v.point.x()).min().unwrap_or(0);
    let by = b.vertices().iter().map(|v| v.point.y()).min().unwrap_or(0);
    'transforms: for t in DIHEDRAL {
        let mapped: Vec<(i64, i64)> = a
            .vertices()
            .iter()
            .map(|v| t(v.point.x(), v.point.y()))
            .collect();
        let mx = mapped.iter().map(|p| p.0).min().unwrap_or(0);
        let my = mapped.iter().map(|p| p.1).min().unwrap_or(0);
        let mut map = Vec::with_capacity(mapped.len());
        for (v, &(x, y)) in mapped.iter().enumerate() {
            match index.get(&LatticePoint::xy(x - mx + bx, y - my + by)) {
                Some(&w) if a.is_marked(v) == b.is_marked(w) => map.push(w),
                _ => continue 'transforms,
            }
        }
        if a.arcs().all(|(u, v, w)| &b.weight(map[u], map[v]) == w) {
            return Some(map);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::families::{family, FamilyName};

    #[test]
    fn refined_grid() {
        for n in 1..=5 {
            let t = temperley_refinement(&family(FamilyName::Grid, n)).unwrap();
            assert!(isomorphic_by_embedding(
                &t,
                &family(FamilyName::Grid, 2 * n - 1)
            ));
        }
    }

    #[test]
    fn single_edge_refines_to_path() {
        let g = lattice_graph([LatticePoint::xy(0, 0), LatticePoint::xy(2, 0)], 2);
        let t = temperley_refinement(&g).unwrap();
        assert_eq!((t.vertex_count(), t.edges().len()), (3, 2));
    }

    #[test]
    fn quartered_three_refinement_count() {
        let t = temperley_refinement(&family(FamilyName::Quartered, 3)).unwrap();
        assert_eq!(t.vertex_count(), 13);
    }

    #[test]
    fn grid_dual() {
        let d = inner_dual(&family(FamilyName::Grid, 3)).unwrap();
        assert!(isomorphic_by_embedding(&d, &family(FamilyName::Grid, 2)));
    }

    #[test]
    fn quartered_dual_is_smaller_quartered() {
        for n in 4..=8 {
            let d = inner_dual(&family(FamilyName::Quartered, n)).unwrap();
            assert!(
                isomorphic_by_embedding(&d, &family(FamilyName::Quartered, n - 2)),
                "n={n}"
            );
        }
    }

    #[test]
    fn half_mixed_dual_is_half_odd() {
        for n in 3..=6 {
            let d = inner_dual(&family(FamilyName::HalfMixed, n)).unwrap();
            assert!(
                isomorphic_by_embedding(&d, &family(FamilyName::HalfOdd, n - 2)),
                "n={n}"
            );
        }
    }

    #[test]
    fn rejects_holes() {
        // H_1 is an 8-cycle around a missing center: one bounded face that is not a unit square.
        assert!(matches!(
            temperley_refinement(&family(FamilyName::HoledSquare, 1)),
            Err(Error::NotGrid(_))
        ));
    }

    #[test]
    fn explicit_isomorphism() {
        let a = inner_dual(&family(FamilyName::Quartered, 6)).unwrap();
        let b = family(FamilyName::Quartered, 4);
        let map = embedding_isomorphism(&a, &b).unwrap();
        for (u, v, w) in a.arcs() {
            assert_eq!(&b.weight(map[u], map[v]), w);
        }
        assert!(embedding_isomorphism(
            &family(FamilyName::Grid, 3),
            &family(FamilyName::Quartered, 4)
        )
        .is_none());
    }

    #[test]
    fn outer_face_of_grid() {
        let g = family(FamilyName::Grid, 3);
        assert_eq!(outer_face_vertices(&g).unwrap().len(), 8);
    }
}
