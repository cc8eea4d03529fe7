//! Weighted perfect-matching counts by frontier dynamic programming over a vertex order.
//!
//! The state before vertex p is the set of vertices p, p+1, ..., p+B-1 that are already
//! covered by an edge from an earlier vertex (B = bandwidth of the order). Loops act as
//! self-covers, which is what invariant-matching orbit graphs need.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::LatticeGraph;

pub const DEFAULT_FRONTIER_CAP: usize = 28;
pub const BRUTE_FORCE_CAP: usize = 20;
/// Below this bandwidth the exact sparse DP is used; at or above it the dense modular one.
pub const DENSE_THRESHOLD: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpStrategy {
    Auto,
    Sparse,
    Dense,
}

#[derive(Debug, Clone, Copy)]
pub struct MatchingOptions {
    pub frontier_cap: usize,
    pub strategy: DpStrategy,
}

impl Default for MatchingOptions {
    fn default() -> Self {
        MatchingOptions {
            frontier_cap: DEFAULT_FRONTIER_CAP,
            strategy: DpStrategy::Auto,
        }
    }
}

/// Integer weights after scaling: edges by D^2 and loops by D, so every perfect matching
/// picks up exactly D^|V|.
struct ScaledGraph {
    n: usize,
    /// Forward neighbours (offset in the order, integer weight) per position.
    forward: Vec<Vec<(usize, BigInt)>>,
    loops: Vec<Option<BigInt>>,
    bandwidth: usize,
    scale: BigInt,
}

fn bandwidth_of(order_pos: &[usize], edges: &[(usize, usize)]) -> usize {
    edges
        .iter()
        .map(|&(u, v)| order_pos[u].abs_diff(order_pos[v]))
        .max()
        .unwrap_or(0)
}

/// Reverse Cuthill-McKee order.
fn rcm_order(g: &LatticeGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let adj = g.neighbors();
    let deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let start = (0..n)
            .filter(|&v| !seen[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("unvisited vertex exists");
        seen[start] = true;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            let mut next: Vec<usize> = adj[u]
                .iter()
                .map(|&(v, _)| v)
                .filter(|&v| !seen[v])
                .collect();
            next.sort_by_key(|&v| (deg[v], v));
            next.dedup();
            for v in next {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    order.reverse();
    order
}

/// Best of the column sweep, the row sweep and reverse Cuthill-McKee.
pub fn sweep_order(g: &LatticeGraph) -> (Vec<usize>, usize) {
    let n = g.vertex_count();
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .filter(|e| e.0 != e.1)
        .map(|e| (e.0, e.1))
        .collect();
    let mut by_x: Vec<usize> = (0..n).collect();
    by_x.sort_by_key(|&v| {
        let p = g.point(v);
        (p.x(), p.y(), p.coords.get(2).copied().unwrap_or(0))
    });
    let mut by_y: Vec<usize> = (0..n).collect();
    by_y.sort_by_key(|&v| {
        let p = g.point(v);
        (p.y(), p.x(), p.coords.get(2).copied().unwrap_or(0))
    });
    let mut best: Option<(Vec<usize>, usize)> = None;
    for order in [by_x, by_y, rcm_order(g)] {
        let mut pos = vec![0; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let b = bandwidth_of(&pos, &edges);
        if best.as_ref().is_none_or(|(_, bb)| b < *bb) {
            best = Some((order, b));
        }
    }
    best.unwrap_or((Vec::new(), 0))
}

fn prepare(g: &LatticeGraph, cap: usize) -> Result<ScaledGraph> {
    if g.is_directed() {
        return Err(Error::Directed);
    }
    if g.arcs().any(|(_, _, w)| w < &BigRational::zero()) {
        return Err(Error::Unsupported("negative edge weights".into()));
    }
    let n = g.vertex_count();
    let (order, bandwidth) = sweep_order(g);
    if bandwidth > cap {
        return Err(Error::CapExceeded {
            what: format!("frontier width {bandwidth}"),
            cap,
        });
    }
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let d = g
        .arcs()
        .fold(BigInt::one(), |acc, (_, _, w)| acc.lcm(w.denom()));
    let d2 = BigRational::from_integer(&d * &d);
    let d1 = BigRational::from_integer(d.clone());
    let mut forward = vec![Vec::new(); n];
    let mut loops = vec![None; n];
    for (u, v, w) in g.edges() {
        if u == v {
            loops[pos[u]] = Some((w * &d1).to_integer());
        } else {
            let (a, b) = (pos[u].min(pos[v]), pos[u].max(pos[v]));
            forward[a].push((b - a, (w * &d2).to_integer()));
        }
    }
    Ok(ScaledGraph {
        n,
        forward,
        loops,
        bandwidth,
        scale: d,
    })
}

fn sparse_dp(s: &ScaledGraph) -> BigInt {
    let mut states: HashMap<u32, BigInt> = HashMap::from([(0u32, BigInt::one())]);
    for p in 0..s.n {
        let mut next: HashMap<u32, BigInt> = HashMap::with_capacity(states.len() * 2);
        for (mask, val) in states {
            if mask & 1 == 1 {
                *next.entry(mask >> 1).or_insert_with(BigInt::zero) += val;
                continue;
            }
            if let Some(w) = &s.loops[p] {
                *next.entry(mask >> 1).or_insert_with(BigInt::zero) += &val * w;
            }
            for (d, w) in &s.forward[p] {
                if mask >> d & 1 == 0 {
                    *next
                        .entry((mask | 1 << d) >> 1)
                        .or_insert_with(BigInt::zero) += &val * w;
                }
            }
        }
        states = next;
    }
    states.remove(&0).unwrap_or_default()
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut r) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct primes just below 2^62, largest first.
fn large_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = (1u64 << 62) - 1;
    while out.len() < count {
        if is_prime_u64(c) {
            out.push(c);
        }
        c -= 2;
    }
    out
}

/// Residue with its prime modulus.
#[derive(Clone, Copy, PartialEq)]
struct Modular {
    v: u64,
    m: u64,
}

impl Modular {
    fn add(self, o: Self) -> Self {
        let c = self.v + o.v;
        Modular {
            v: if c >= self.m { c - self.m } else { c },
            m: self.m,
        }
    }
    fn mul(self, o: Self) -> Self {
        Modular {
            v: mul_mod(self.v, o.v, self.m),
            m: self.m,
        }
    }
}

/// Dense table over all 2^B frontier masks. `unit` marks weights equal to one, which skip
/// the multiplication.
fn dense_pass<T: Copy + PartialEq>(
    s: &ScaledGraph,
    zero: T,
    one: T,
    conv: impl Fn(&BigInt) -> T,
    add: impl Fn(T, T) -> T,
    mul: impl Fn(T, T) -> T,
    mut observe: impl FnMut(T),
) -> T {
    let conv_opt = |w: &BigInt| if w.is_one() { None } else { Some(conv(w)) };
    let forward: Vec<Vec<(usize, Option<T>)>> = s
        .forward
        .iter()
        .map(|f| f.iter().map(|(d, w)| (*d, conv_opt(w))).collect())
        .collect();
    let loops: Vec<Option<Option<T>>> = s.loops.iter().map(|l| l.as_ref().map(conv_opt)).collect();
    let size = 1usize << s.bandwidth;
    let mut cur = vec![zero; size];
    let mut next = vec![zero; size];
    cur[0] = one;
    for p in 0..s.n {
        next.iter_mut().for_each(|x| *x = zero);
        for mask in 0..size {
            let val = cur[mask];
            if val == zero {
                continue;
            }
            observe(val);
            let t = mask >> 1;
            if mask & 1 == 1 {
                next[t] = add(next[t], val);
                continue;
            }
            if let Some(w) = loops[p] {
                let term = w.map_or(val, |w| mul(val, w));
                next[t] = add(next[t], term);
            }
            for &(d, w) in &forward[p] {
                if mask >> d & 1 == 0 {
                    let t = (mask | 1 << d) >> 1;
                    let term = w.map_or(val, |w| mul(val, w));
                    next[t] = add(next[t], term);
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    cur[0]
}

/// Fixed-width unsigned integer of L limbs; enough for the exact pass once the magnitude
/// of every intermediate state is known.
#[derive(Clone, Copy, PartialEq)]
struct Wide<const L: usize>([u64; L]);

impl<const L: usize> Wide<L> {
    fn small(v: u64) -> Self {
        let mut w = [0u64; L];
        w[0] = v;
        Wide(w)
    }

    fn add(self, o: Self) -> Self {
        let mut out = [0u64; L];
        let mut carry = false;
        for i in 0..L {
            let (a, c1) = self.0[i].overflowing_add(o.0[i]);
            let (b, c2) = a.overflowing_add(carry as u64);
            out[i] = b;
            carry = c1 || c2;
        }
        debug_assert!(!carry, "wide accumulator overflow");
        Wide(out)
    }

    /// Product with a weight stored in the low limb.
    fn mul(self, o: Self) -> Self {
        let m = o.0[0] as u128;
        let mut out = [0u64; L];
        let mut carry = 0u128;
        for i in 0..L {
            let t = self.0[i] as u128 * m + carry;
            out[i] = t as u64;
            carry = t >> 64;
        }
        debug_assert!(carry == 0, "wide accumulator overflow");
        Wide(out)
    }

    fn to_bigint(self) -> BigInt {
        let digits: Vec<u32> = self
            .0
            .iter()
            .flat_map(|&l| [l as u32, (l >> 32) as u32])
            .collect();
        BigInt::from(BigUint::new(digits))
    }
}

fn wide_pass<const L: usize>(s: &ScaledGraph) -> BigInt {
    let conv = |w: &BigInt| Wide::<L>::small(w.to_u64().expect("weight fits one limb"));
    dense_pass(
        s,
        Wide::<L>::small(0),
        Wide::<L>::small(1),
        conv,
        Wide::add,
        Wide::mul,
        |_| {},
    )
    .to_bigint()
}

/// Memory ceiling for the two dense tables of the exact wide pass.
const WIDE_TABLE_BUDGET: usize = 3 << 30;

fn dense_dp(s: &ScaledGraph) -> Result<BigInt> {
    // Magnitude first: sums of positive terms in f64 carry small relative error, so the
    // largest state seen bounds the width every exact pass needs.
    let mut largest = 0.0f64;
    let approx = dense_pass(
        s,
        0.0f64,
        1.0,
        |w| w.to_f64().unwrap_or(f64::INFINITY),
        |a, b| a + b,
        |a, b| a * b,
        |v| largest = largest.max(v),
    );
    if !approx.is_finite() || !largest.is_finite() {
        return Err(Error::Unsupported(
            "matching count too large for the dense path".into(),
        ));
    }
    if approx == 0.0 {
        return Ok(BigInt::zero());
    }
    let bits = approx.log2().max(0.0).ceil() as usize + 4;
    let max_bits = largest.log2().max(0.0).ceil() as usize + 4;
    let small_weights = s
        .forward
        .iter()
        .flatten()
        .map(|(_, w)| w)
        .chain(s.loops.iter().flatten())
        .all(|w| w.bits() <= 32);
    let limbs = max_bits.div_ceil(64).max(1) + usize::from(!small_weights);
    let table = (1usize << s.bandwidth) * 16 * limbs;
    if small_weights && table <= WIDE_TABLE_BUDGET {
        let exact = match limbs {
            1 => wide_pass::<1>(s),
            2 => wide_pass::<2>(s),
            3 => wide_pass::<3>(s),
            4 => wide_pass::<4>(s),
            5 => wide_pass::<5>(s),
            6 => wide_pass::<6>(s),
            7 => wide_pass::<7>(s),
            8 => wide_pass::<8>(s),
            _ => return crt_dp(s, bits),
        };
        return Ok(exact);
    }
    crt_dp(s, bits)
}

/// Residues modulo primes near 2^62 and Chinese remaindering, with one extra prime as a
/// consistency check on the reconstruction.
fn crt_dp(s: &ScaledGraph, bits: usize) -> Result<BigInt> {
    let primes = large_primes(bits / 61 + 2);
    let residues: Vec<u64> = primes
        .iter()
        .map(|&m| {
            let z = Modular { v: 0, m };
            let o = Modular { v: 1, m };
            let conv = |w: &BigInt| Modular {
                v: w.mod_floor(&BigInt::from(m))
                    .to_u64()
                    .expect("residue fits"),
                m,
            };
            dense_pass(s, z, o, conv, Modular::add, Modular::mul, |_| {}).v
        })
        .collect();
    let (value, modulus) = crt(&residues[..residues.len() - 1], &primes[..primes.len() - 1]);
    let last = primes[primes.len() - 1];
    let check = (&value % BigUint::from(last))
        .to_u64()
        .expect("residue fits");
    if check != residues[residues.len() - 1] || value.bits() as usize + 1 >= modulus.bits() as usize
    {
        return Err(Error::Unsupported(
            "modular reconstruction failed its consistency check".into(),
        ));
    }
    Ok(BigInt::from(value))
}

fn crt(residues: &[u64], primes: &[u64]) -> (BigUint, BigUint) {
    let mut value = BigUint::zero();
    let mut modulus = BigUint::one();
    for (&r, &p) in residues.iter().zip(primes) {
        // value + modulus * t = r (mod p)
        let pm = BigUint::from(p);
        let cur = (&value % &pm).to_u64().expect("fits");
        let mi = (&modulus % &pm).to_u64().expect("fits");
        let inv = pow_mod(mi, p - 2, p);
        let diff = (r + p - cur) % p;
        let t = mul_mod(diff, inv, p);
        value += &modulus * BigUint::from(t);
        modulus *= pm;
    }
    (value, modulus)
}

/// Exact weighted perfect-matching count (loops count as self-covers).
pub fn count_matchings(g: &LatticeGraph) -> Result<BigRational> {
    count_matchings_with(g, &MatchingOptions::default())
}

pub fn count_matchings_with(g: &LatticeGraph, opts: &MatchingOptions) -> Result<BigRational> {
    let s = prepare(g, opts.frontier_cap)?;
    if s.n % 2 == 1 && s.loops.iter().all(Option::is_none) {
        return Ok(BigRational::zero());
    }
    let dense = match opts.strategy {
        DpStrategy::Sparse => false,
        DpStrategy::Dense => true,
        DpStrategy::Auto => s.bandwidth >= DENSE_THRESHOLD,
    };
    let raw = if dense { dense_dp(&s)? } else { sparse_dp(&s) };
    let denom = num_traits::pow(s.scale.clone(), s.n);
    Ok(BigRational::new(raw, denom))
}

/// Integer count; fails if the graph has non-integral weights.
pub fn count_matchings_integer(g: &LatticeGraph) -> Result<BigInt> {
    let v = count_matchings(g)?;
    if !v.is_integer() {
        return Err(Error::Unsupported("non-integral matching count".into()));
    }
    Ok(v.to_integer())
}

/// Every perfect matching (loops as self-covers) as a list of (u, v) pairs, u <= v.
pub fn enumerate_matchings(
    g: &LatticeGraph,
    vertex_cap: usize,
) -> Result<Vec<Vec<(usize, usize)>>> {
    if g.is_directed() {
        return Err(Error::Directed);
    }
    let n = g.vertex_count();
    if n > vertex_cap {
        return Err(Error::CapExceeded {
            what: format!("brute force on {n} vertices"),
            cap: vertex_cap,
        });
    }
    let mut adj = vec![Vec::new(); n];
    for (u, v, _) in g.edges() {
        adj[u].push(v);
        if u != v {
            adj[v].push(u);
        }
    }
    let mut out = Vec::new();
    let mut used = vec![false; n];
    let mut cur = Vec::new();
    fn rec(
        adj: &[Vec<usize>],
        used: &mut [bool],
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let Some(u) = used.iter().position(|&b| !b) else {
            out.push(cur.clone());
            return;
        };
        used[u] = true;
        for &v in &adj[u] {
            if v == u {
                cur.push((u, u));
                rec(adj, used, cur, out);
                cur.pop();
            } else if !used[v] {
                used[v] = true;
                cur.push((u.min(v), u.max(v)));
                rec(adj, used, cur, out);
                cur.pop();
                used[v] = false;
            }
        }
        used[u] = false;
    }
    rec(&adj, &mut used, &mut cur, &mut out);
    Ok(out)
}

/// Exhaustive count, recursing on the lowest unmatched vertex.
pub fn count_matchings_bruteforce(g: &LatticeGraph) -> Result<BigRational> {
    let all = enumerate_matchings(g, BRUTE_FORCE_CAP)?;
    Ok(all.iter().fold(BigRational::zero(), |acc, m| {
        acc + m
            .iter()
            .fold(BigRational::one(), |p, &(u, v)| p * g.weight(u, v))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{family, lattice_graph, FamilyName, LatticePoint};

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn rect(w: i64, h: i64) -> LatticeGraph {
        lattice_graph(
            (0..w).flat_map(|x| (0..h).map(move |y| LatticePoint::xy(2 * x, 2 * y))),
            2,
        )
    }

    fn both(g: &LatticeGraph) -> (BigRational, BigRational) {
        let a = count_matchings_with(
            g,
            &MatchingOptions {
                strategy: DpStrategy::Sparse,
                ..Default::default()
            },
        )
        .unwrap();
        let b = count_matchings_with(
            g,
            &MatchingOptions {
                strategy: DpStrategy::Dense,
                ..Default::default()
            },
        )
        .unwrap();
        (a, b)
    }

    #[test]
    fn small_known_counts() {
        assert_eq!(
            count_matchings(&family(FamilyName::HoledSquare, 1)).unwrap(),
            q(2)
        );
        assert_eq!(
            count_matchings(&family(FamilyName::HoledSquare, 2)).unwrap(),
            q(196)
        );
        assert_eq!(count_matchings(&family(FamilyName::Grid, 2)).unwrap(), q(2));
        assert_eq!(count_matchings_bruteforce(&rect(3, 4)).unwrap(), q(11));
        assert_eq!(count_matchings(&rect(3, 4)).unwrap(), q(11));
    }

    #[test]
    fn single_edge_and_cycle() {
        assert_eq!(count_matchings_bruteforce(&rect(2, 1)).unwrap(), q(1));
        let c6 = family(FamilyName::HoledSquare, 1)
            .without_vertex(0)
            .without_vertex(0);
        // Removing two adjacent corner-side vertices leaves a path of six vertices: one matching.
        assert_eq!(
            count_matchings(&c6).unwrap(),
            count_matchings_bruteforce(&c6).unwrap()
        );
    }

    #[test]
    fn sparse_and_dense_agree() {
        for n in 1..=4 {
            let g = family(FamilyName::Aztec, n);
            let (a, b) = both(&g);
            assert_eq!(a, b);
            assert_eq!(a, q(1 << (n * (n + 1) / 2)));
        }
        let (a, b) = both(&family(FamilyName::ZigzagATilde, 3));
        assert_eq!(a, b);
    }

    #[test]
    fn odd_graphs_have_no_matchings() {
        assert_eq!(count_matchings(&family(FamilyName::Grid, 3)).unwrap(), q(0));
    }

    #[test]
    fn rational_weights() {
        // A~_1: two vertices of the top row joined by a half edge plus a 2x2 block below.
        let g = family(FamilyName::ZigzagATilde, 1);
        assert_eq!(
            count_matchings(&g).unwrap(),
            count_matchings_bruteforce(&g).unwrap()
        );
        assert_eq!(
            count_matchings(&g).unwrap(),
            BigRational::new(3.into(), 2.into())
        );
    }

    #[test]
    fn loops_are_self_covers() {
        let mut g = rect(2, 1);
        g.add_edge(0, 0, q(3));
        g.add_edge(1, 1, q(5));
        // {01} or {00, 11}
        assert_eq!(count_matchings(&g).unwrap(), q(16));
        assert_eq!(count_matchings_bruteforce(&g).unwrap(), q(16));
    }

    #[test]
    fn frontier_cap() {
        let g = rect(6, 6);
        let opts = MatchingOptions {
            frontier_cap: 3,
            ..Default::default()
        };
        assert!(matches!(
            count_matchings_with(&g, &opts),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn modular_path_agrees() {
        for n in 1..=4 {
            let g = family(FamilyName::HoledSquare, n);
            let sg = prepare(&g, DEFAULT_FRONTIER_CAP).unwrap();
            let approx_bits = 4 * (n as usize + 1) * (n as usize + 1);
            assert_eq!(crt_dp(&sg, approx_bits).unwrap(), sparse_dp(&sg));
            assert_eq!(dense_dp(&sg).unwrap(), sparse_dp(&sg));
        }
    }

    #[test]
    fn wide_arithmetic() {
        let a = Wide::<2>([u64::MAX, 0]);
        let b = a.add(Wide::small(1));
        assert_eq!(b.0, [0, 1]);
        assert_eq!(
            a.mul(Wide::small(4)).to_bigint(),
            BigInt::from(u64::MAX) * 4
        );
    }

    #[test]
    fn primes_are_prime() {
        let ps = large_primes(3);
        assert!(ps.iter().all(|&p| is_prime_u64(p) && p < 1 << 62));
        assert!(!is_prime_u64(1 << 61));
    }

    #[test]
    fn crt_reconstructs() {
        let ps = large_primes(3);
        let v = BigUint::parse_bytes(b"123456789012345678901234567890123456789", 10).unwrap();
        let rs: Vec<u64> = ps
            .iter()
            .map(|&p| (&v % BigUint::from(p)).to_u64().unwrap())
            .collect();
        assert_eq!(crt(&rs, &ps).0, v);
    }
}
