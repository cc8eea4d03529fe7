use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::{self, Write as _};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{parse_rational, BigRationalMatrix};

/// Lattice coordinates at half-unit scale: stored value c is the coordinate c/2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub coords: Vec<i64>,
}

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Self {
        assert!(!coords.is_empty(), "lattice points have dimension >= 1");
        LatticePoint { coords }
    }

    pub fn xy(x2: i64, y2: i64) -> Self {
        LatticePoint {
            coords: vec![x2, y2],
        }
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn x(&self) -> i64 {
        self.coords[0]
    }

    pub fn y(&self) -> i64 {
        self.coords.get(1).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub point: LatticePoint,
    pub marked: bool,
}

/// Weighted graph on lattice points. Undirected graphs store both arc directions with
/// equal weight; loops are stored once. Zero weights are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeGraph {
    directed: bool,
    vertices: Vec<Vertex>,
    arcs: BTreeMap<(usize, usize), BigRational>,
}

impl LatticeGraph {
    pub fn new(directed: bool) -> Self {
        LatticeGraph {
            directed,
            vertices: Vec::new(),
            arcs: BTreeMap::new(),
        }
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn point(&self, v: usize) -> &LatticePoint {
        &self.vertices[v].point
    }

    pub fn is_marked(&self, v: usize) -> bool {
        self.vertices[v].marked
    }

    pub fn add_vertex(&mut self, point: LatticePoint, marked: bool) -> usize {
        self.vertices.push(Vertex { point, marked });
        self.vertices.len() - 1
    }

    fn bump(&mut self, u: usize, v: usize, w: &BigRational) {
        let e = self.arcs.entry((u, v)).or_insert_with(BigRational::zero);
        *e += w;
        if e.is_zero() {
            self.arcs.remove(&(u, v));
        }
    }

    /// Adds weight to u -> v only (directed graphs).
    pub fn add_arc(&mut self, u: usize, v: usize, w: BigRational) {
        assert!(
            u < self.vertices.len() && v < self.vertices.len(),
            "arc endpoint out of range"
        );
        self.bump(u, v, &w);
    }

    /// Adds weight to the edge {u, v}; in a directed graph this adds both arcs.
    pub fn add_edge(&mut self, u: usize, v: usize, w: BigRational) {
        assert!(
            u < self.vertices.len() && v < self.vertices.len(),
            "edge endpoint out of range"
        );
        self.bump(u, v, &w);
        if u != v {
            self.bump(v, u, &w);
        }
    }

    /// Overwrites the weight of u -> v (and v -> u when undirected). Zero removes it.
    pub fn set_weight(&mut self, u: usize, v: usize, w: BigRational) {
        let pairs: &[(usize, usize)] = if self.directed || u == v {
            &[(u, v)][..]
        } else {
            &[(u, v), (v, u)][..]
        };
        for &p in pairs {
            if w.is_zero() {
                self.arcs.remove(&p);
            } else {
                self.arcs.insert(p, w.clone());
            }
        }
    }

    pub fn weight(&self, u: usize, v: usize) -> BigRational {
        self.arcs
            .get(&(u, v))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.arcs.contains_key(&(u, v))
    }

    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize, &BigRational)> {
        self.arcs.iter().map(|(&(u, v), w)| (u, v, w))
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Undirected edges as (u, v, w) with u <= v.
    pub fn edges(&self) -> Vec<(usize, usize, BigRational)> {
        self.arcs
            .iter()
            .filter(|(&(u, v), _)| u <= v)
            .map(|(&(u, v), w)| (u, v, w.clone()))
            .collect()
    }

    pub fn has_loops(&self) -> bool {
        self.arcs.keys().any(|&(u, v)| u == v)
    }

    /// Out-neighbours with weights, loops excluded, sorted by id.
    pub fn neighbors(&self) -> Vec<Vec<(usize, BigRational)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (&(u, v), w) in &self.arcs {
            if u != v {
                adj[u].push((v, w.clone()));
            }
        }
        adj
    }

    pub fn is_symmetric(&self) -> bool {
        self.arcs
            .iter()
            .all(|(&(u, v), w)| self.arcs.get(&(v, u)) == Some(w))
    }

    pub fn all_weights_integral(&self) -> bool {
        self.arcs.values().all(|w| w.is_integer())
    }

    pub fn point_index(&self) -> HashMap<LatticePoint, usize> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.point.clone(), i))
            .collect()
    }

    /// Row u, column v holds weight(u -> v).
    pub fn adjacency_matrix(&self) -> BigRationalMatrix {
        let n = self.vertices.len();
        let mut m = BigRationalMatrix::zeros(n, n);
        for (&(u, v), w) in &self.arcs {
            m[(u, v)] = w.clone();
        }
        m
    }

    /// Laplacian D - A of an undirected graph, loops ignored.
    pub fn laplacian(&self) -> BigRationalMatrix {
        let n = self.vertices.len();
        let mut m = BigRationalMatrix::zeros(n, n);
        for (&(u, v), w) in &self.arcs {
            if u != v {
                m[(u, v)] -= w;
                m[(u, u)] += w;
            }
        }
        m
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return true;
        }
        let adj = self.neighbors();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == n
    }

    /// Subgraph induced on the kept vertices, preserving relative order.
    pub fn induced(&self, keep: &[bool]) -> LatticeGraph {
        let mut map = vec![usize::MAX; self.vertices.len()];
        let mut g = LatticeGraph::new(self.directed);
        for (i, v) in self.vertices.iter().enumerate() {
            if keep[i] {
                map[i] = g.add_vertex(v.point.clone(), v.marked);
            }
        }
        for (&(u, v), w) in &self.arcs {
            if keep[u] && keep[v] {
                g.arcs.insert((map[u], map[v]), w.clone());
            }
        }
        g
    }

    pub fn without_vertex(&self, v: usize) -> LatticeGraph {
        let keep: Vec<bool> = (0..self.vertices.len()).map(|i| i != v).collect();
        self.induced(&keep)
    }

    /// Same graph with vertices renumbered in the canonical order (y descending, x ascending,
    /// further coordinates descending).
    pub fn canonically_ordered(&self) -> LatticeGraph {
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        order.sort_by(|&a, &b| point_order(&self.vertices[a].point, &self.vertices[b].point));
        self.permuted(&order)
    }

    /// Renumbers so that new vertex i is old vertex order[i].
    pub fn permuted(&self, order: &[usize]) -> LatticeGraph {
        let mut inv = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            inv[old] = new;
        }
        LatticeGraph {
            directed: self.directed,
            vertices: order.iter().map(|&o| self.vertices[o].clone()).collect(),
            arcs: self
                .arcs
                .iter()
                .map(|(&(u, v), w)| ((inv[u], inv[v]), w.clone()))
                .collect(),
        }
    }

    /// Marks the listed vertices; for use by builders of marked variants.
    pub fn set_marked(&mut self, v: usize, marked: bool) {
        self.vertices[v].marked = marked;
    }

    pub fn with_directed(mut self, directed: bool) -> LatticeGraph {
        self.directed = directed;
        self
    }

    /// Canonical text form of the exchange format.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let kind = if self.directed {
            "directed"
        } else {
            "undirected"
        };
        let _ = writeln!(s, "graph {kind} {}", self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = write!(s, "v {i}");
            for c in &v.point.coords {
                let _ = write!(s, " {c}");
            }
            if v.marked {
                s.push_str(" m");
            }
            s.push('\n');
        }
        for (&(u, v), w) in &self.arcs {
            let _ = writeln!(s, "a {u} {v} {}/{}", w.numer(), w.denom());
        }
        s
    }

    pub fn parse(text: &str) -> Result<LatticeGraph> {
        let err = |line: usize, column: usize, message: String| Error::Parse {
            line,
            column,
            message,
        };
        let mut graph: Option<(LatticeGraph, usize)> = None;
        let mut dimension: Option<usize> = None;
        for (ln, raw) in text.lines().enumerate() {
            let line_no = ln + 1;
            let body = raw.split('#').next().unwrap_or("");
            let tokens: Vec<(usize, &str)> = tokenize(body);
            let Some(&(col0, head)) = tokens.first() else {
                continue;
            };
            match head {
                "graph" => {
                    if graph.is_some() {
                        return Err(err(line_no, col0, "duplicate header".into()));
                    }
                    if tokens.len() != 3 {
                        return Err(err(line_no, col0, "expected `graph <kind> <count>`".into()));
                    }
                    let directed = match tokens[1].1 {
                        "directed" => true,
                        "undirected" => false,
                        other => {
                            return Err(err(
                                line_no,
                                tokens[1].0,
                                format!("unknown kind `{other}`"),
                            ))
                        }
                    };
                    let count: usize = tokens[2]
                        .1
                        .parse()
                        .map_err(|_| err(line_no, tokens[2].0, "bad vertex count".into()))?;
                    graph = Some((LatticeGraph::new(directed), count));
                }
                "v" => {
                    let (g, count) = graph
                        .as_mut()
                        .ok_or_else(|| err(line_no, col0, "vertex before header".into()))?;
                    let mut rest = &tokens[1..];
                    let marked = rest.last().is_some_and(|t| t.1 == "m");
                    if marked {
                        rest = &rest[..rest.len() - 1];
                    }
                    if rest.len() < 2 {
                        return Err(err(line_no, col0, "expected `v <id> <coords...>`".into()));
                    }
                    let id: usize = rest[0]
                        .1
                        .parse()
                        .map_err(|_| err(line_no, rest[0].0, "bad vertex id".into()))?;
                    if id != g.vertex_count() || id >= *count {
                        return Err(err(
                            line_no,
                            rest[0].0,
                            format!("vertex id {id} out of sequence"),
                        ));
                    }
                    let coords = rest[1..]
                        .iter()
                        .map(|&(c, t)| {
                            t.parse::<i64>()
                                .map_err(|_| err(line_no, c, "bad coordinate".into()))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    match dimension {
                        Some(d) if d != coords.len() => {
                            return Err(err(line_no, rest[1].0, "mixed dimensions".into()))
                        }
                        _ => dimension = Some(coords.len()),
                    }
                    g.add_vertex(LatticePoint::new(coords), marked);
                }
                "a" => {
                    let (g, count) = graph
                        .as_mut()
                        .ok_or_else(|| err(line_no, col0, "arc before header".into()))?;
                    if tokens.len() != 4 {
                        return Err(err(
                            line_no,
                            col0,
                            "expected `a <src> <dst> <p>/<q>`".into(),
                        ));
                    }
                    let mut ends = [0usize; 2];
                    for k in 0..2 {
                        let (c, t) = tokens[k + 1];
                        let id: usize = t
                            .parse()
                            .map_err(|_| err(line_no, c, "bad vertex id".into()))?;
                        if id >= *count {
                            return Err(err(line_no, c, format!("unknown vertex {id}")));
                        }
                        ends[k] = id;
                    }
                    let (c, t) = tokens[3];
                    let w = parse_rational(t)
                        .ok_or_else(|| err(line_no, c, format!("bad weight `{t}`")))?;
                    if w.is_zero() {
                        return Err(err(line_no, c, "zero weight".into()));
                    }
                    if g.arcs.insert((ends[0], ends[1]), w).is_some() {
                        return Err(err(line_no, col0, "duplicate arc".into()));
                    }
                }
                other => return Err(err(line_no, col0, format!("unknown record `{other}`"))),
            }
        }
        let (g, count) = graph.ok_or_else(|| err(1, 1, "missing header".into()))?;
        if g.vertex_count() != count {
            return Err(err(
                1,
                1,
                format!(
                    "header declares {count} vertices, found {}",
                    g.vertex_count()
                ),
            ));
        }
        if let Some(&(u, v)) = g
            .arcs
            .keys()
            .find(|&&(u, v)| u >= g.vertex_count() || v >= g.vertex_count())
        {
            return Err(err(
                1,
                1,
                format!("arc {u} {v} references a missing vertex"),
            ));
        }
        if !g.directed && !g.is_symmetric() {
            return Err(err(1, 1, "undirected graph with asymmetric weights".into()));
        }
        Ok(g)
    }
}

fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

/// y descending, x ascending, then remaining coordinates descending.
pub fn point_order(a: &LatticePoint, b: &LatticePoint) -> std::cmp::Ordering {
    b.y()
        .cmp(&a.y())
        .then(a.x().cmp(&b.x()))
        .then_with(|| b.coords.iter().skip(2).cmp(a.coords.iter().skip(2)))
}

/// Builds the graph on a point set joining points that differ by `step` in exactly one
/// coordinate, all weights 1, in canonical order.
pub fn lattice_graph(points: impl IntoIterator<Item = LatticePoint>, step: i64) -> LatticeGraph {
    let mut pts: Vec<LatticePoint> = points.into_iter().collect();
    pts.sort_by(point_order);
    pts.dedup();
    let mut g = LatticeGraph::new(false);
    for p in &pts {
        g.add_vertex(p.clone(), false);
    }
    let index = g.point_index();
    for (i, p) in pts.iter().enumerate() {
        for axis in 0..p.dimension() {
            let mut q = p.clone();
            q.coords[axis] += step;
            if let Some(&j) = index.get(&q) {
                g.add_edge(i, j, BigRational::one());
            }
        }
    }
    g
}

impl fmt::Display for LatticeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> LatticeGraph {
        lattice_graph(
            [(0, 0), (2, 0), (0, 2), (2, 2)].map(|(x, y)| LatticePoint::xy(x, y)),
            2,
        )
    }

    #[test]
    fn canonical_order_and_edges() {
        let g = square();
        assert_eq!(g.point(0), &LatticePoint::xy(0, 2));
        assert_eq!(g.point(3), &LatticePoint::xy(2, 0));
        assert_eq!(g.edges().len(), 4);
        assert!(g.is_symmetric());
    }

    #[test]
    fn round_trip() {
        let mut g = square();
        g.set_weight(0, 1, BigRational::new(1.into(), 2.into()));
        g.set_marked(2, true);
        let s = g.serialize();
        let h = LatticeGraph::parse(&s).unwrap();
        assert_eq!(h, g);
        assert_eq!(h.serialize(), s);
        assert!(s.contains("a 0 1 1/2"));
    }

    #[test]
    fn parse_rejects_unknown_vertex() {
        let s = "graph directed 2\nv 0 0 0\nv 1 2 0\na 0 5 1/1\n";
        let e = LatticeGraph::parse(s).unwrap_err();
        assert!(
            matches!(
                e,
                Error::Parse {
                    line: 4,
                    column: 5,
                    ..
                }
            ),
            "{e:?}"
        );
    }

    #[test]
    fn parse_half_weight_and_comments() {
        let s =
            "# two vertices\ngraph undirected 2\nv 0 0 0\nv 1 2 0 m\na 0 1 1/2 # half\na 1 0 1/2\n";
        let g = LatticeGraph::parse(s).unwrap();
        assert_eq!(g.weight(0, 1), BigRational::new(1.into(), 2.into()));
        assert!(g.is_marked(1));
    }

    #[test]
    fn parse_rejects_asymmetric_undirected() {
        let s = "graph undirected 2\nv 0 0 0\nv 1 2 0\na 0 1 1/1\n";
        assert!(LatticeGraph::parse(s).is_err());
    }

    #[test]
    fn laplacian_rows_sum_to_zero() {
        let l = square().laplacian();
        for i in 0..4 {
            let s = l.row(i).iter().fold(BigRational::zero(), |a, b| a + b);
            assert!(s.is_zero());
        }
    }
}
