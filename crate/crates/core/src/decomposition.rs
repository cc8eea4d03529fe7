//! Similarity decompositions: explicit change-of-basis vectors for the involution split and
//! the grid and mixed-diamond constructions, plus exact certificates.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    build_path_family, embedding_isomorphism, family, symmetry_map, FamilyName, LatticeGraph,
    LatticePoint, SymmetryKind, SymmetryMap,
};
use crate::linalg::{smith_form_xi_minus_a_capped, BigRationalMatrix, RatPolynomial};

/// Smith-form certificates are only attempted up to this dimension.
pub const SMITH_DIMENSION_CAP: usize = 40;

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Formal linear combination of vertex indeterminates; never stores a zero coefficient.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SparseVector {
    coeffs: BTreeMap<usize, BigRational>,
}

impl SparseVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(v: usize) -> Self {
        let mut s = Self::new();
        s.add_term(v, BigRational::one());
        s
    }

    pub fn add_term(&mut self, v: usize, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(v).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&v);
        }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: &BigRational, other: &SparseVector) {
        for (&v, x) in &other.coeffs {
            self.add_term(v, c * x);
        }
    }

    pub fn get(&self, v: usize) -> BigRational {
        self.coeffs
            .get(&v)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigRational)> {
        self.coeffs.iter().map(|(&v, c)| (v, c))
    }

    pub fn to_dense(&self, n: usize) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); n];
        for (v, c) in self.iter() {
            out[v] = c.clone();
        }
        out
    }
}

impl fmt::Display for SparseVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self.iter().map(|(v, c)| format!("{c}*e{v}")).collect();
        f.write_str(&terms.join(" + "))
    }
}

/// The linear map F(e_v) = sum over arcs v -> w of weight * e_w.
struct FAction {
    out: Vec<Vec<(usize, BigRational)>>,
}

impl FAction {
    fn new(g: &LatticeGraph) -> Self {
        let mut out = vec![Vec::new(); g.vertex_count()];
        for (u, v, w) in g.arcs() {
            out[u].push((v, w.clone()));
        }
        FAction { out }
    }

    fn apply(&self, x: &SparseVector) -> SparseVector {
        let mut r = SparseVector::new();
        for (v, c) in x.iter() {
            for (w, a) in &self.out[v] {
                r.add_term(*w, c * a);
            }
        }
        r
    }
}

/// Output of splitting a graph along an order-two automorphism whose fixed set separates
/// the two moved halves.
#[derive(Debug, Clone)]
pub struct InvolutionSplit {
    /// Induced subgraph on the chosen half V1.
    pub plus: LatticeGraph,
    /// V1 together with the fixed set, which is marked; arcs from fixed to moved vertices doubled.
    pub minus: LatticeGraph,
    /// Source vertex behind each vertex of `plus`.
    pub plus_vertices: Vec<usize>,
    /// Source vertex behind each vertex of `minus`.
    pub minus_vertices: Vec<usize>,
    involution: Vec<usize>,
}

impl InvolutionSplit {
    /// Vectors (e_v - e_Tv)/2 for v in V1, in the vertex order of `plus`.
    pub fn plus_basis(&self) -> Vec<SparseVector> {
        let half = BigRational::new(1.into(), 2.into());
        self.plus_vertices
            .iter()
            .map(|&v| {
                let mut s = SparseVector::new();
                s.add_term(v, half.clone());
                s.add_term(self.involution[v], -half.clone());
                s
            })
            .collect()
    }

    /// Carries a vector over the vertices of `minus` into the symmetric part of the source space.
    pub fn lift(&self, x: &SparseVector) -> SparseVector {
        let half = BigRational::new(1.into(), 2.into());
        let mut s = SparseVector::new();
        for (u, c) in x.iter() {
            let v = self.minus_vertices[u];
            let h = c * &half;
            s.add_term(v, h.clone());
            s.add_term(self.involution[v], h);
        }
        s
    }

    /// Vectors (e_v + e_Tv)/2 in the vertex order of `minus`.
    pub fn minus_basis(&self) -> Vec<SparseVector> {
        (0..self.minus_vertices.len())
            .map(|u| self.lift(&SparseVector::unit(u)))
            .collect()
    }
}

fn components(g: &LatticeGraph, keep: &[bool]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.vertex_count()];
    for (u, v, _) in g.arcs() {
        if u != v && keep[u] && keep[v] {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut seen = vec![false; g.vertex_count()];
    let mut out = Vec::new();
    for s in 0..g.vertex_count() {
        if !keep[s] || seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut i = 0;
        while i < comp.len() {
            for &w in &adj[comp[i]] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            i += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Splits `g` along the involution `t`. The moved vertices must fall into components that
/// `t` swaps in pairs; V1 collects one component of each pair (the one holding the smaller id).
pub fn involution_split(g: &LatticeGraph, t: &SymmetryMap) -> Result<InvolutionSplit> {
    let n = g.vertex_count();
    if t.permutation.len() != n || !t.is_involution() {
        return Err(Error::BadSplit(
            "map is not an involution of the graph".into(),
        ));
    }
    t.verify(g)?;
    let p = &t.permutation;
    let moved: Vec<bool> = (0..n).map(|v| p[v] != v).collect();
    let mut side = vec![false; n];
    for comp in components(g, &moved) {
        let set: BTreeSet<usize> = comp.iter().copied().collect();
        if comp.iter().any(|&v| set.contains(&p[v])) {
            return Err(Error::BadSplit(
                "fixed set does not separate a component from its image".into(),
            ));
        }
        let image_min = comp.iter().map(|&v| p[v]).min().unwrap_or(usize::MAX);
        if comp[0] < image_min {
            for &v in &comp {
                side[v] = true;
            }
        }
    }
    let plus_vertices: Vec<usize> = (0..n).filter(|&v| side[v]).collect();
    let minus_vertices: Vec<usize> = (0..n).filter(|&v| side[v] || !moved[v]).collect();
    let plus = g.induced(&side);
    let mut minus = LatticeGraph::new(true);
    let mut local = HashMap::new();
    for (i, &v) in minus_vertices.iter().enumerate() {
        minus.add_vertex(g.point(v).clone(), !moved[v]);
        local.insert(v, i);
    }
    for (u, v, w) in g.arcs() {
        if let (Some(&a), Some(&b)) = (local.get(&u), local.get(&v)) {
            let w = if !moved[u] && moved[v] {
                w * int(2)
            } else {
                w.clone()
            };
            minus.add_arc(a, b, w);
        }
    }
    Ok(InvolutionSplit {
        plus,
        minus,
        plus_vertices,
        minus_vertices,
        involution: p.clone(),
    })
}

/// Grid-triangle vectors on the marked quarter diamond of order n, located through `at(i, j)`
/// in matrix coordinates with (1, 1) the top-left vertex. Returns the v-vectors in the vertex
/// order of the quartered diamond of order n-1 and then w_1, ..., w_n.
fn triangle_vectors(
    n: i64,
    at: impl Fn(i64, i64) -> Option<usize>,
) -> (Vec<SparseVector>, Vec<SparseVector>) {
    let e = |i: i64, j: i64| {
        if (1..=n).contains(&i) && (1..=n).contains(&j) && i + j <= n + 1 {
            at(i, j)
        } else {
            None
        }
    };
    let mut vs = Vec::new();
    if n >= 2 {
        for p in family(FamilyName::Quartered, n - 1).vertices() {
            let (i, j) = ((1 - p.point.y()) / 2, (p.point.x() + 1) / 2);
            let mut s = SparseVector::new();
            for (di, dj, c) in [(-1, 0, 1), (0, -1, -1), (1, 0, 1), (0, 1, -1)] {
                if let Some(u) = e(i + di, j + dj) {
                    s.add_term(u, int(c));
                }
            }
            vs.push(s);
        }
    }
    let mut ws = Vec::new();
    for k in 1..=n {
        let mut s = SparseVector::new();
        for i in 1..=n {
            for j in 1..=n + 1 - i {
                let d = i - j;
                if i + j >= n - k + 2
                    && (d - (k - n)).rem_euclid(2) == 0
                    && k - n <= d
                    && d <= n - k
                {
                    if let Some(u) = e(i, j) {
                        s.add_term(u, int(if i + j <= n { 2 } else { 1 }));
                    }
                }
            }
        }
        ws.push(s);
    }
    (vs, ws)
}

/// The v- and w-vectors on the marked quarter diamond of order n.
pub fn build_grid_triangle_vectors(n: i64) -> Result<Vec<Vec<SparseVector>>> {
    if n < 1 {
        return Err(Error::BadOrder { min: 1, got: n });
    }
    let g = family(FamilyName::MarkedQad, n);
    let index = g.point_index();
    let (vs, ws) = triangle_vectors(n, |i, j| {
        index.get(&LatticePoint::xy(2 * j - 1, 1 - 2 * i)).copied()
    });
    Ok(vec![vs, ws])
}

/// Mixed-diamond vectors on the marked half diamond of order n, located through `at(X, y)`
/// with X the stored column and y the level (0 at the marked row). Returns the f-vectors in
/// the vertex order of the half mixed diamond of order n-1, then g_1..g_n and g'_1..g'_n.
fn half_diamond_vectors(n: i64, at: impl Fn(i64, i64) -> Option<usize>) -> Vec<Vec<SparseVector>> {
    let r = 2 * n - 1;
    let inside = |x: i64, y: i64| y >= 0 && x.abs() + 2 * y <= r && x.rem_euclid(2) == 1;
    let ray = |x: i64, y: i64, dx: i64, dy: i64| {
        let (mut a, mut b) = (x + dx, y + dy);
        while a.abs() <= r + 2 && (-1..=n).contains(&b) {
            if inside(a, b) {
                return at(a, b);
            }
            a += dx;
            b += dy;
        }
        None
    };
    let mut fs = Vec::new();
    if n >= 2 {
        for p in family(FamilyName::HalfMixed, n - 1).vertices() {
            let (x, y) = (p.point.x(), p.point.y() / 2 + 1);
            let width = r - 2 * y;
            let mut s = SparseVector::new();
            let mut put = |u: Option<usize>, c: i64| {
                if let Some(u) = u {
                    s.add_term(u, int(c));
                }
            };
            let (ne, nw, sw, se) = (
                ray(x, y, 2, 1),
                ray(x, y, -2, 1),
                ray(x, y, -2, -1),
                ray(x, y, 2, -1),
            );
            if x == width {
                put(at(x, y), 1);
                put(nw, 1);
                put(sw, -1);
                put(se, 1);
            } else if x == -width {
                put(at(x, y), -1);
                put(ne, -1);
                put(sw, -1);
                put(se, 1);
            } else {
                put(ne, -1);
                put(nw, 1);
                put(sw, -1);
                put(se, 1);
            }
            fs.push(s);
        }
    }
    // Columns are numbered 1..2n from the left; C_1 at the marked row is black.
    let col = |x: i64| (x + r) / 2 + 1;
    let black = |x: i64, y: i64| (col(x) - 1 + y) % 2 == 0;
    let wt = |y: i64| {
        if y == 0 {
            1
        } else if y % 2 == 0 {
            2
        } else {
            -2
        }
    };
    let mut gs = Vec::new();
    let mut gps = Vec::new();
    for k in 1..=n {
        let mut g = SparseVector::new();
        let mut gp = SparseVector::new();
        for y in 0..n {
            for x in (-r..=r).step_by(2) {
                if !inside(x, y) {
                    continue;
                }
                let c = col(x);
                let level = y + 1;
                let member = (black(x, y) && c <= k)
                    || (black(-x, y) && c > 2 * n - k)
                    || (k <= c && c <= 2 * n - k + 1 && level <= k && (k - level) % 2 == 0);
                if !member {
                    continue;
                }
                if let Some(u) = at(x, y) {
                    let sign = if k % 2 == 1 { 1 } else { -1 };
                    g.add_term(u, int(sign * wt(y)));
                    gp.add_term(u, int(if black(x, y) { wt(y) } else { -wt(y) }));
                }
            }
        }
        gs.push(g);
        gps.push(gp);
    }
    vec![fs, gs, gps]
}

/// The f-, g- and g'-vectors on the marked half mixed diamond of order n.
pub fn build_half_diamond_vectors(n: i64) -> Result<Vec<Vec<SparseVector>>> {
    if n < 1 {
        return Err(Error::BadOrder { min: 1, got: n });
    }
    let g = family(FamilyName::MarkedHmd, n);
    let index = g.point_index();
    Ok(half_diamond_vectors(n, |x, y| {
        index.get(&LatticePoint::xy(x, 2 * y)).copied()
    }))
}

/// Decompositions with a certificate routine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theorem {
    /// Square grid: two quartered diamonds and a weighted path.
    Grid,
    /// Mixed diamond: two half mixed diamonds and the two end-loop paths.
    Mixed,
    /// Odd diamond: two half odd diamonds, a point and the two looped paths.
    Odd,
    /// Aztec pillowcase: two Aztec diamonds and the two tridiagonal blocks.
    Pillow,
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [Theorem::Grid, Theorem::Mixed, Theorem::Odd, Theorem::Pillow];

    pub fn as_str(self) -> &'static str {
        match self {
            Theorem::Grid => "grid",
            Theorem::Mixed => "mixed",
            Theorem::Odd => "odd",
            Theorem::Pillow => "pillow",
        }
    }

    /// Smallest order at which the decomposition is stated.
    pub fn min_order(self) -> i64 {
        match self {
            Theorem::Grid | Theorem::Mixed | Theorem::Odd => 2,
            Theorem::Pillow => 1,
        }
    }

    pub fn default_mode(self) -> CertMode {
        match self {
            Theorem::Grid | Theorem::Mixed => CertMode::ExplicitBasis,
            Theorem::Odd | Theorem::Pillow => CertMode::CharpolyProduct,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Theorem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Unsupported(format!("theorem `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CertMode {
    ExplicitBasis,
    CharpolyProduct,
    SmithForm,
}

impl CertMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CertMode::ExplicitBasis => "explicit-basis",
            CertMode::CharpolyProduct => "charpoly",
            CertMode::SmithForm => "smith",
        }
    }
}

impl fmt::Display for CertMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CertMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "explicit-basis" | "explicit" => Ok(CertMode::ExplicitBasis),
            "charpoly" | "charpoly-product" => Ok(CertMode::CharpolyProduct),
            "smith" | "smith-form" => Ok(CertMode::SmithForm),
            _ => Err(Error::Unsupported(format!("certificate mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Block {
    pub name: String,
    pub graph: LatticeGraph,
}

impl Block {
    fn new(name: impl Into<String>, graph: LatticeGraph) -> Self {
        Block {
            name: name.into(),
            graph,
        }
    }
}

/// A claimed similarity between `source` and the disjoint union of `blocks`. When `vectors`
/// is present it holds one group per block, vector i of a group standing for vertex i.
#[derive(Debug, Clone)]
pub struct DecompositionPlan {
    pub label: String,
    pub n: i64,
    pub source: LatticeGraph,
    pub blocks: Vec<Block>,
    pub vectors: Option<Vec<Vec<SparseVector>>>,
}

fn path_block(name: FamilyName, n: i64, q: i64) -> Result<Block> {
    let g = build_path_family(name, n, int(q))?;
    let label = if name == FamilyName::PathQ {
        format!("{name}({n},{q})")
    } else {
        format!("{name}({n})")
    };
    Ok(Block::new(label, g))
}

/// Reorders the split's V1 basis so that vector i stands for vertex i of `target`.
fn aligned_plus_basis(split: &InvolutionSplit, target: &LatticeGraph) -> Result<Vec<SparseVector>> {
    let map = embedding_isomorphism(&split.plus, target)
        .ok_or_else(|| Error::BadSplit("half is not congruent to the expected family".into()))?;
    let basis = split.plus_basis();
    let mut out = vec![SparseVector::new(); basis.len()];
    for (i, b) in basis.into_iter().enumerate() {
        out[map[i]] = b;
    }
    Ok(out)
}

fn grid_plan(n: i64) -> Result<DecompositionPlan> {
    let g = family(FamilyName::Grid, n);
    let t = symmetry_map(&g, SymmetryKind::Diag)?;
    let split = involution_split(&g, &t)?;
    let quarter = family(FamilyName::Quartered, n - 1);
    let plus = aligned_plus_basis(&split, &quarter)?;
    let index = split.minus.point_index();
    // Matrix coordinates on the closed triangle above the diagonal: row from the top, column from the left.
    let (vs, ws) = triangle_vectors(n, |i, j| {
        index
            .get(&LatticePoint::xy(2 * (j - 1), 2 * (n - i)))
            .copied()
    });
    let vs = vs.iter().map(|v| split.lift(v)).collect();
    let ws = ws.iter().map(|w| split.lift(w)).collect();
    let name = format!("{}({})", FamilyName::Quartered, n - 1);
    Ok(DecompositionPlan {
        label: Theorem::Grid.to_string(),
        n,
        source: g,
        blocks: vec![
            Block::new(name.clone(), quarter.clone()),
            Block::new(name, quarter),
            path_block(FamilyName::PathQ, n, 2)?,
        ],
        vectors: Some(vec![plus, vs, ws]),
    })
}

fn mixed_plan(n: i64) -> Result<DecompositionPlan> {
    let g = family(FamilyName::MixedDiamond, n);
    let t = symmetry_map(&g, SymmetryKind::H)?;
    let split = involution_split(&g, &t)?;
    let half = family(FamilyName::HalfMixed, n - 1);
    let plus = aligned_plus_basis(&split, &half)?;
    let index = split.minus.point_index();
    let upper = split.minus.vertices().iter().all(|v| v.point.y() >= 0);
    let sign = if upper { 1 } else { -1 };
    let groups = half_diamond_vectors(n, |x, y| {
        index.get(&LatticePoint::xy(x, sign * 2 * y)).copied()
    });
    let mut vectors = vec![plus];
    vectors.extend(
        groups
            .into_iter()
            .map(|grp| grp.iter().map(|v| split.lift(v)).collect()),
    );
    let name = format!("{}({})", FamilyName::HalfMixed, n - 1);
    Ok(DecompositionPlan {
        label: Theorem::Mixed.to_string(),
        n,
        source: g,
        blocks: vec![
            Block::new(name.clone(), half.clone()),
            Block::new(name, half),
            path_block(FamilyName::LoopR, n, 1)?,
            path_block(FamilyName::LoopRp, n, 1)?,
        ],
        vectors: Some(vectors),
    })
}

fn odd_plan(n: i64) -> Result<DecompositionPlan> {
    let half = family(FamilyName::HalfOdd, n - 1);
    let name = format!("{}({})", FamilyName::HalfOdd, n - 1);
    Ok(DecompositionPlan {
        label: Theorem::Odd.to_string(),
        n,
        source: family(FamilyName::OddDiamond, n),
        blocks: vec![
            Block::new(name.clone(), half.clone()),
            Block::new(name, half),
            path_block(FamilyName::PathQ, 1, 1)?,
            path_block(FamilyName::LoopQ, n, 1)?,
            path_block(FamilyName::LoopQp, n, 1)?,
        ],
        vectors: None,
    })
}

fn pillow_plan(n: i64) -> Result<DecompositionPlan> {
    let ad = family(FamilyName::Aztec, n - 1);
    let name = format!("{}({})", FamilyName::Aztec, n - 1);
    Ok(DecompositionPlan {
        label: Theorem::Pillow.to_string(),
        n,
        source: family(FamilyName::Pillowcase, n),
        blocks: vec![
            Block::new(name.clone(), ad.clone()),
            Block::new(name, ad),
            path_block(FamilyName::BlockS, 2 * n, 1)?,
            path_block(FamilyName::BlockSp, 2 * n, 1)?,
        ],
        vectors: None,
    })
}

/// Builds the decomposition plan of `theorem` at order `n`.
pub fn plan(theorem: Theorem, n: i64) -> Result<DecompositionPlan> {
    let min = theorem.min_order();
    if n < min {
        return Err(Error::BadOrder { min, got: n });
    }
    match theorem {
        Theorem::Grid => grid_plan(n),
        Theorem::Mixed => mixed_plan(n),
        Theorem::Odd => odd_plan(n),
        Theorem::Pillow => pillow_plan(n),
    }
}

/// Plan for the generic involution split: blocks are the two halves with their own bases.
pub fn involution_plan(g: &LatticeGraph, t: &SymmetryMap) -> Result<DecompositionPlan> {
    let split = involution_split(g, t)?;
    let plus = split.plus_basis();
    let minus = split.minus_basis();
    Ok(DecompositionPlan {
        label: format!("split-{}", t.kind),
        n: g.vertex_count() as i64,
        source: g.clone(),
        blocks: vec![Block::new("G+", split.plus), Block::new("G-", split.minus)],
        vectors: Some(vec![plus, minus]),
    })
}

/// Result of checking F(b_i) = sum_j T_ij b_j for every explicit vector.
#[derive(Debug, Clone, Default)]
pub struct FActionReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl FActionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Applies F to every plan vector and compares with the block's prescribed combination.
pub fn verify_f_action(plan: &DecompositionPlan) -> Result<FActionReport> {
    let groups = plan
        .vectors
        .as_ref()
        .ok_or_else(|| Error::Unsupported(format!("explicit vectors for `{}`", plan.label)))?;
    let f = FAction::new(&plan.source);
    let mut report = FActionReport::default();
    for (block, group) in plan.blocks.iter().zip(groups) {
        if group.len() != block.graph.vertex_count() {
            report.failures.push(format!(
                "{}: {} vectors for {} vertices",
                block.name,
                group.len(),
                block.graph.vertex_count()
            ));
            continue;
        }
        let mut expected = vec![SparseVector::new(); group.len()];
        for (i, j, w) in block.graph.arcs() {
            expected[i].axpy(w, &group[j]);
        }
        for (i, b) in group.iter().enumerate() {
            report.checked += 1;
            let got = f.apply(b);
            if got != expected[i] {
                let v = got
                    .iter()
                    .map(|(v, _)| v)
                    .chain(expected[i].iter().map(|(v, _)| v))
                    .find(|&v| got.get(v) != expected[i].get(v))
                    .unwrap_or(0);
                report.failures.push(format!(
                    "{} vector {i} at source vertex {v}: got {} expected {}",
                    block.name,
                    got.get(v),
                    expected[i].get(v)
                ));
            }
        }
    }
    Ok(report)
}

/// Outcome of one similarity check, printed as a `CERT` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub theorem: String,
    pub n: i64,
    pub mode: CertMode,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(
            f,
            "CERT {} {} {} {verdict}",
            self.theorem, self.n, self.mode
        )?;
        if !self.detail.is_empty() {
            write!(f, " {}", self.detail)?;
        }
        Ok(())
    }
}

fn block_diagonal(blocks: &[Block]) -> BigRationalMatrix {
    let total = blocks.iter().map(|b| b.graph.vertex_count()).sum();
    let mut m = BigRationalMatrix::zeros(total, total);
    let mut off = 0;
    for b in blocks {
        for (u, v, w) in b.graph.arcs() {
            m[(off + u, off + v)] = w.clone();
        }
        off += b.graph.vertex_count();
    }
    m
}

fn first_mismatch(a: &BigRationalMatrix, b: &BigRationalMatrix) -> Option<String> {
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if a[(i, j)] != b[(i, j)] {
                return Some(format!(
                    "entry ({i},{j}) is {} expected {}",
                    a[(i, j)],
                    b[(i, j)]
                ));
            }
        }
    }
    None
}

fn first_coefficient_mismatch(a: &RatPolynomial, b: &RatPolynomial) -> Option<String> {
    let (ca, cb) = (a.coeffs(), b.coeffs());
    let zero = BigRational::zero();
    (0..ca.len().max(cb.len())).find_map(|k| {
        let (x, y) = (ca.get(k).unwrap_or(&zero), cb.get(k).unwrap_or(&zero));
        (x != y).then(|| format!("coefficient of x^{k} is {x} expected {y}"))
    })
}

fn explicit_certificate(plan: &DecompositionPlan) -> Result<(bool, String)> {
    let groups = plan
        .vectors
        .as_ref()
        .ok_or_else(|| Error::Unsupported(format!("explicit basis for `{}`", plan.label)))?;
    let n = plan.source.vertex_count();
    let rows: Vec<Vec<BigRational>> = groups.iter().flatten().map(|v| v.to_dense(n)).collect();
    if rows.len() != n {
        return Ok((false, format!("{} vectors for {n} vertices", rows.len())));
    }
    let p = BigRationalMatrix::from_rows(rows)?;
    let Some(p_inv) = p.inverse()? else {
        return Ok((false, "transition matrix is singular".into()));
    };
    let conj = &(&p * &plan.source.adjacency_matrix()) * &p_inv;
    let target = block_diagonal(&plan.blocks);
    if target.rows() != n {
        return Ok((
            false,
            format!("blocks have {} vertices, source {n}", target.rows()),
        ));
    }
    Ok(match first_mismatch(&conj, &target) {
        None => (true, format!("dim={n}")),
        Some(m) => (false, m),
    })
}

fn charpoly_certificate(plan: &DecompositionPlan) -> Result<(bool, String)> {
    let lhs = plan.source.adjacency_matrix().charpoly()?;
    let mut rhs = RatPolynomial::one();
    for b in &plan.blocks {
        rhs = &rhs * &b.graph.adjacency_matrix().charpoly()?;
    }
    Ok(match first_coefficient_mismatch(&lhs, &rhs) {
        None => (true, format!("degree={}", lhs.degree().unwrap_or(0))),
        Some(m) => (false, m),
    })
}

fn smith_certificate(plan: &DecompositionPlan) -> Result<(bool, String)> {
    let n = plan.source.vertex_count();
    if n > SMITH_DIMENSION_CAP {
        return Err(Error::CapExceeded {
            what: "smith-form dimension".into(),
            cap: SMITH_DIMENSION_CAP,
        });
    }
    let a = smith_form_xi_minus_a_capped(&plan.source.adjacency_matrix(), SMITH_DIMENSION_CAP)?;
    let b = smith_form_xi_minus_a_capped(&block_diagonal(&plan.blocks), SMITH_DIMENSION_CAP)?;
    let (fa, fb) = (a.nontrivial(), b.nontrivial());
    if fa.len() != fb.len() {
        return Ok((
            false,
            format!("{} invariant factors expected {}", fa.len(), fb.len()),
        ));
    }
    for (k, (x, y)) in fa.iter().zip(&fb).enumerate() {
        if let Some(m) = first_coefficient_mismatch(x, y) {
            return Ok((false, format!("invariant factor {k}: {m}")));
        }
    }
    Ok((true, format!("factors={}", fa.len())))
}

/// Certifies the plan in the given mode. Missing explicit vectors or an oversize Smith form
/// is an error; a failed identity is a failing certificate.
pub fn certify_similarity(plan: &DecompositionPlan, mode: CertMode) -> Result<Certificate> {
    let (pass, detail) = match mode {
        CertMode::ExplicitBasis => explicit_certificate(plan)?,
        CertMode::CharpolyProduct => charpoly_certificate(plan)?,
        CertMode::SmithForm => smith_certificate(plan)?,
    };
    Ok(Certificate {
        theorem: plan.label.clone(),
        n: plan.n,
        mode,
        pass,
        detail,
    })
}

pub fn certify(theorem: Theorem, n: i64, mode: CertMode) -> Result<Certificate> {
    certify_similarity(&plan(theorem, n)?, mode)
}

/// Largest absolute coefficient in a vector; handy for reporting.
pub fn max_abs_coefficient(v: &SparseVector) -> BigRational {
    v.iter()
        .map(|(_, c)| c.abs())
        .max()
        .unwrap_or_else(BigRational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_vector_drops_zeros() {
        let mut s = SparseVector::unit(3);
        s.add_term(3, int(-1));
        assert!(s.is_empty());
        s.add_term(1, int(2));
        s.axpy(&int(3), &SparseVector::unit(1));
        assert_eq!(s.get(1), int(5));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn path_end_swap() {
        let g = build_path_family(FamilyName::PathQ, 3, int(1)).unwrap();
        let t = SymmetryMap {
            permutation: vec![2, 1, 0],
            kind: SymmetryKind::V,
        };
        let split = involution_split(&g, &t).unwrap();
        assert_eq!(split.plus.vertex_count(), 1);
        assert_eq!(split.minus.vertex_count(), 2);
        let plan = involution_plan(&g, &t).unwrap();
        assert!(
            certify_similarity(&plan, CertMode::ExplicitBasis)
                .unwrap()
                .pass
        );
        assert!(
            certify_similarity(&plan, CertMode::CharpolyProduct)
                .unwrap()
                .pass
        );
    }

    #[test]
    fn grid_split_halves() {
        let g = family(FamilyName::Grid, 4);
        let split = involution_split(&g, &symmetry_map(&g, SymmetryKind::Diag).unwrap()).unwrap();
        assert!(embedding_isomorphism(&split.plus, &family(FamilyName::Quartered, 3)).is_some());
        assert!(embedding_isomorphism(&split.minus, &family(FamilyName::MarkedQad, 4)).is_some());
    }

    #[test]
    fn triangle_vector_counts() {
        for n in 1..=6 {
            let groups = build_grid_triangle_vectors(n).unwrap();
            let u = n as usize;
            assert_eq!(groups[0].len() + groups[1].len(), u * (u + 1) / 2);
        }
        let groups = build_grid_triangle_vectors(2).unwrap();
        assert_eq!(groups[0][0].len(), 2);
    }

    #[test]
    fn triangle_f_action() {
        for n in 2..=9 {
            let g = family(FamilyName::MarkedQad, n);
            let groups = build_grid_triangle_vectors(n).unwrap();
            let plan = DecompositionPlan {
                label: "triangle".into(),
                n,
                source: g,
                blocks: vec![
                    Block::new("q", family(FamilyName::Quartered, n - 1)),
                    path_block(FamilyName::PathQ, n, 2).unwrap(),
                ],
                vectors: Some(groups),
            };
            let report = verify_f_action(&plan).unwrap();
            assert!(report.passed(), "n={n}: {:?}", report.failures);
            assert!(
                certify_similarity(&plan, CertMode::ExplicitBasis)
                    .unwrap()
                    .pass
            );
        }
    }

    #[test]
    fn half_diamond_f_action() {
        for n in 2..=6 {
            let g = family(FamilyName::MarkedHmd, n);
            let groups = build_half_diamond_vectors(n).unwrap();
            let u = n as usize;
            assert_eq!(groups.iter().map(Vec::len).sum::<usize>(), u * u + u);
            let plan = DecompositionPlan {
                label: "half".into(),
                n,
                source: g,
                blocks: vec![
                    Block::new("h", family(FamilyName::HalfMixed, n - 1)),
                    path_block(FamilyName::LoopR, n, 1).unwrap(),
                    path_block(FamilyName::LoopRp, n, 1).unwrap(),
                ],
                vectors: Some(groups),
            };
            let report = verify_f_action(&plan).unwrap();
            assert!(report.passed(), "n={n}: {:?}", report.failures);
            assert!(
                certify_similarity(&plan, CertMode::ExplicitBasis)
                    .unwrap()
                    .pass
            );
        }
    }

    #[test]
    fn grid_certificates() {
        for n in 2..=5 {
            let c = certify(Theorem::Grid, n, CertMode::ExplicitBasis).unwrap();
            assert!(c.pass, "{c}");
        }
        assert!(
            certify(Theorem::Grid, 2, CertMode::CharpolyProduct)
                .unwrap()
                .pass
        );
        assert!(certify(Theorem::Grid, 3, CertMode::SmithForm).unwrap().pass);
    }

    #[test]
    fn mixed_certificates() {
        for n in 2..=4 {
            let c = certify(Theorem::Mixed, n, CertMode::ExplicitBasis).unwrap();
            assert!(c.pass, "{c}");
        }
    }

    #[test]
    fn charpoly_only_theorems() {
        assert!(
            certify(Theorem::Odd, 2, CertMode::CharpolyProduct)
                .unwrap()
                .pass
        );
        assert!(
            certify(Theorem::Pillow, 1, CertMode::CharpolyProduct)
                .unwrap()
                .pass
        );
        assert!(
            certify(Theorem::Pillow, 2, CertMode::SmithForm)
                .unwrap()
                .pass
        );
        assert!(certify(Theorem::Odd, 2, CertMode::ExplicitBasis).is_err());
    }

    #[test]
    fn broken_plan_fails() {
        let mut p = plan(Theorem::Grid, 3).unwrap();
        p.blocks.swap(0, 2);
        let c = certify_similarity(&p, CertMode::ExplicitBasis).unwrap();
        assert!(!c.pass);
        assert!(c.to_string().starts_with("CERT grid 3 explicit-basis FAIL"));
    }
}
