use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use squarish::closed_forms::{eval_formula, eval_formula_with, FormulaId};
use squarish::decomposition::{certify_similarity, involution_plan, involution_split, CertMode};
use squarish::lattice::{lattice_graph, symmetry_map, LatticeGraph, LatticePoint, SymmetryKind};
use squarish::linalg::IntPolynomial;
use squarish::matching::{count_matchings, count_matchings_bruteforce};
use squarish::trees::{enumerate_trees, tree_count, weighted_tree_sum, TreeCaps};

fn points(cells: &[(i64, i64)]) -> Vec<LatticePoint> {
    cells
        .iter()
        .map(|&(x, y)| LatticePoint::xy(2 * x, 2 * y))
        .collect()
}

/// Connected cell sets grown from the origin by a sequence of moves.
fn polyomino(max: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((0usize..64, 0usize..4), 1..max).prop_map(|steps| {
        let mut cells = vec![(0i64, 0i64)];
        for (pick, dir) in steps {
            let (x, y) = cells[pick % cells.len()];
            let (dx, dy) = [(1, 0), (-1, 0), (0, 1), (0, -1)][dir];
            let c = (x + dx, y + dy);
            if !cells.contains(&c) {
                cells.push(c);
            }
        }
        cells
    })
}

/// Cells in the upper half-plane (row 0 included) mirrored across the x axis.
fn mirrored(max: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::btree_set((0i64..4, 0i64..3), 1..max).prop_map(|upper| {
        let mut cells: Vec<(i64, i64)> = upper.iter().copied().collect();
        cells.extend(upper.iter().filter(|c| c.1 > 0).map(|&(x, y)| (x, -y)));
        cells
    })
}

fn charpoly(g: &LatticeGraph) -> IntPolynomial {
    if g.vertex_count() == 0 {
        return IntPolynomial::one();
    }
    g.adjacency_matrix()
        .charpoly()
        .unwrap()
        .to_integer()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn matrix_tree_matches_enumeration(cells in polyomino(9)) {
        let g = lattice_graph(points(&cells), 2);
        let all = enumerate_trees(&g, &TreeCaps::default()).unwrap();
        prop_assert_eq!(weighted_tree_sum(&g, &all), BigRational::from_integer(tree_count(&g).unwrap()));
    }

    #[test]
    fn dp_matches_brute_force(cells in polyomino(15), ws in prop::collection::vec(1i64..4, 40)) {
        let mut g = lattice_graph(points(&cells), 2);
        for (i, (u, v, _)) in g.edges().into_iter().enumerate() {
            let w = BigRational::new(ws[i % ws.len()].into(), 2.into());
            g.set_weight(u, v, w.clone());
            g.set_weight(v, u, w);
        }
        prop_assert_eq!(count_matchings(&g).unwrap(), count_matchings_bruteforce(&g).unwrap());
    }

    #[test]
    fn relabelling_keeps_invariants(cells in polyomino(9), seed in any::<u64>()) {
        let g = lattice_graph(points(&cells), 2);
        let n = g.vertex_count();
        let mut order: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let h = g.permuted(&order);
        prop_assert_eq!(charpoly(&g), charpoly(&h));
        prop_assert_eq!(tree_count(&g).unwrap(), tree_count(&h).unwrap());
        prop_assert_eq!(count_matchings(&g).unwrap(), count_matchings(&h).unwrap());
    }

    #[test]
    fn exchange_format_round_trips(cells in polyomino(12)) {
        let g = lattice_graph(points(&cells), 2);
        let back = LatticeGraph::parse(&g.serialize()).unwrap();
        prop_assert_eq!(back.serialize(), g.serialize());
    }

    #[test]
    fn compact_polynomials_round_trip(c in prop::collection::vec(-50i64..50, 1..8)) {
        let p = IntPolynomial::from_i64(&c);
        prop_assert_eq!(IntPolynomial::parse_compact(&p.to_compact_string()).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    /// Splitting along the reflection factors the characteristic polynomial, and the explicit
    /// half-sum and half-difference bases certify the similarity.
    #[test]
    fn involution_split_factors_charpoly(cells in mirrored(10)) {
        let g = lattice_graph(points(&cells), 2);
        let t = symmetry_map(&g, SymmetryKind::H).unwrap();
        let split = involution_split(&g, &t).unwrap();
        prop_assert_eq!(split.plus.vertex_count() + split.minus.vertex_count(), g.vertex_count());
        prop_assert_eq!(charpoly(&g), &charpoly(&split.plus) * &charpoly(&split.minus));
        let plan = involution_plan(&g, &t).unwrap();
        prop_assert!(certify_similarity(&plan, CertMode::ExplicitBasis).unwrap().pass);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn doubling_precision_keeps_value(i in 0usize..FormulaId::ALL.len(), k in 0i64..3) {
        let id = FormulaId::ALL[i];
        let n = id.min_n() + k;
        let a = eval_formula(id, n).unwrap();
        let b = eval_formula_with(id, n, 2 * a.certificate.bits).unwrap();
        prop_assert_eq!(a.value, b.value);
    }
}

#[test]
fn hexagon_has_two_matchings() {
    let mut g = LatticeGraph::new(false);
    let vs: Vec<usize> = (0..6)
        .map(|i| g.add_vertex(LatticePoint::xy(2 * i, 0), false))
        .collect();
    for i in 0..6 {
        g.add_edge(vs[i], vs[(i + 1) % 6], BigRational::one());
    }
    assert_eq!(
        count_matchings(&g).unwrap(),
        BigRational::from_integer(2.into())
    );
    assert_eq!(
        count_matchings_bruteforce(&g).unwrap(),
        BigRational::from_integer(2.into())
    );
    assert_eq!(tree_count(&g).unwrap(), BigInt::from(6));
}

#[test]
fn odd_vertex_count_has_no_matching() {
    let g = lattice_graph(points(&[(0, 0), (1, 0), (2, 0)]), 2);
    assert!(count_matchings(&g).unwrap().is_zero());
}
