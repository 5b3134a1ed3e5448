//! Hamiltonian cycles of `K_n`: canonical enumeration and closed-form
//! counts of the cycles that contain a prescribed edge set.
//!
//! A set of `k` edges forming `m` vertex-disjoint paths lies in exactly
//! `2^(m-1) (n-k-1)!` Hamiltonian cycles. Any other edge set (a vertex of
//! degree three, a short cycle) lies in none, and a full tour lies in one.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::combinatorics::{cycle_count, factorial, falling, pow2};
use crate::rational::{from_big, Rational};
use crate::{Error, Limits, Result};

pub type Vertex = u32;

/// Largest `n` whose edges fit in an [`EdgeMask`].
pub const MAX_MASK_N: usize = 16;

/// Unordered edge `{u, v}` of `K_n`, stored with `u < v`, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: Vertex,
    v: Vertex,
}

impl Edge {
    pub fn new(a: Vertex, b: Vertex) -> Result<Edge> {
        if a == 0 || b == 0 {
            return Err(Error::invalid("vertices are 1-based"));
        }
        if a == b {
            return Err(Error::invalid(alloc::format!("loop edge {a}-{b}")));
        }
        Ok(Edge {
            u: a.min(b),
            v: a.max(b),
        })
    }

    /// Like [`Edge::new`] but also requires both endpoints to be at most `n`.
    pub fn checked(n: usize, a: Vertex, b: Vertex) -> Result<Edge> {
        let e = Edge::new(a, b)?;
        if e.v as usize > n {
            return Err(Error::invalid(alloc::format!("edge {e} outside K_{n}")));
        }
        Ok(e)
    }

    pub fn u(self) -> Vertex {
        self.u
    }

    pub fn v(self) -> Vertex {
        self.v
    }

    pub fn touches(self, x: Vertex) -> bool {
        self.u == x || self.v == x
    }

    pub fn other(self, x: Vertex) -> Option<Vertex> {
        if x == self.u {
            Some(self.v)
        } else if x == self.v {
            Some(self.u)
        } else {
            None
        }
    }

    pub fn shares_vertex(self, other: Edge) -> bool {
        self.touches(other.u) || self.touches(other.v)
    }

    /// Position in the order `x12, x13, ..., x1n, x23, ...`.
    pub fn lex_index(self, n: usize) -> usize {
        let u = self.u as usize;
        let v = self.v as usize;
        (u - 1) * (2 * n - u) / 2 + (v - u - 1)
    }

    pub fn from_lex_index(n: usize, mut idx: usize) -> Edge {
        let mut u = 1;
        loop {
            let row = n - u;
            if idx < row {
                return Edge {
                    u: u as Vertex,
                    v: (u + 1 + idx) as Vertex,
                };
            }
            idx -= row;
            u += 1;
        }
    }

    /// Bit position in an [`EdgeMask`], independent of `n`.
    pub fn bit(self) -> u32 {
        (self.v - 1) * (self.v - 2) / 2 + (self.u - 1)
    }

    pub fn is_valid_for(self, n: usize) -> bool {
        self.v as usize <= n
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

impl FromStr for Edge {
    type Err = Error;

    fn from_str(s: &str) -> Result<Edge> {
        let bad = || Error::invalid(alloc::format!("edge must look like u-v, got {s:?}"));
        let (a, b) = s.trim().split_once('-').ok_or_else(bad)?;
        let a = a.trim().parse().map_err(|_| bad())?;
        let b = b.trim().parse().map_err(|_| bad())?;
        Edge::new(a, b)
    }
}

/// Parses a comma-separated `u-v` list, e.g. `"1-2,3-4"`.
pub fn parse_edge_list(s: &str) -> Result<Vec<Edge>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect()
}

pub fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Every edge of `K_n` in lex order.
pub fn all_edges(n: usize) -> Vec<Edge> {
    let mut out = Vec::with_capacity(edge_count(n));
    for u in 1..=n as Vertex {
        for v in u + 1..=n as Vertex {
            out.push(Edge { u, v });
        }
    }
    out
}

/// Set of edges of `K_n` for `n <= 16`, one bit per edge.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeMask(pub u128);

impl EdgeMask {
    pub fn from_edges<'a>(edges: impl IntoIterator<Item = &'a Edge>) -> EdgeMask {
        let mut m = EdgeMask(0);
        for e in edges {
            m.insert(*e);
        }
        m
    }

    pub fn insert(&mut self, e: Edge) {
        self.0 |= 1u128 << e.bit();
    }

    pub fn contains(self, e: Edge) -> bool {
        self.0 >> e.bit() & 1 == 1
    }

    pub fn contains_all(self, other: EdgeMask) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

/// A tour of `K_n` in canonical form: starts at vertex 1 and its second
/// vertex is smaller than its last, so each tour has one representative.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HamiltonianCycle {
    order: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl HamiltonianCycle {
    /// Builds a cycle from any visiting order, canonicalizing rotation and
    /// direction.
    pub fn from_order(order: &[Vertex]) -> Result<HamiltonianCycle> {
        let n = order.len();
        if n < 3 {
            return Err(Error::invalid("a Hamiltonian cycle needs n >= 3"));
        }
        let mut seen = vec![false; n + 1];
        for &x in order {
            let x = x as usize;
            if x == 0 || x > n || seen[x] {
                return Err(Error::invalid("order is not a permutation of 1..n"));
            }
            seen[x] = true;
        }
        let start = order.iter().position(|&x| x == 1).unwrap_or(0);
        let mut canon: Vec<Vertex> = (0..n).map(|i| order[(start + i) % n]).collect();
        if canon[1] > canon[n - 1] {
            canon[1..].reverse();
        }
        Ok(Self::from_canonical(canon))
    }

    fn from_canonical(order: Vec<Vertex>) -> HamiltonianCycle {
        let n = order.len();
        let mut edges: Vec<Edge> = (0..n)
            .map(|i| {
                let (a, b) = (order[i], order[(i + 1) % n]);
                Edge {
                    u: a.min(b),
                    v: a.max(b),
                }
            })
            .collect();
        edges.sort_unstable();
        HamiltonianCycle { order, edges }
    }

    /// The tour `1-2-...-n`.
    pub fn canonical(n: usize) -> Result<HamiltonianCycle> {
        let order: Vec<Vertex> = (1..=n as Vertex).collect();
        Self::from_order(&order)
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    /// Edges in lex order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edges in visiting order: `{o0,o1}, {o1,o2}, ..., {o(n-1),o0}`.
    pub fn tour_edges(&self) -> Vec<Edge> {
        let n = self.n();
        (0..n)
            .map(|i| Edge {
                u: self.order[i].min(self.order[(i + 1) % n]),
                v: self.order[i].max(self.order[(i + 1) % n]),
            })
            .collect()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    /// 0/1 incidence vector in lex edge order.
    pub fn incidence(&self) -> Vec<u8> {
        let n = self.n();
        let mut out = vec![0u8; edge_count(n)];
        for e in &self.edges {
            out[e.lex_index(n)] = 1;
        }
        out
    }

    pub fn mask(&self) -> Option<EdgeMask> {
        (self.n() <= MAX_MASK_N).then(|| EdgeMask::from_edges(&self.edges))
    }
}

impl fmt::Display for HamiltonianCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.order.iter().enumerate() {
            if i > 0 {
                f.write_str("-")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Steps through permutations of `2..=n` in lexicographic order, keeping
/// only canonical ones.
#[derive(Clone, Debug)]
struct CanonicalPermutations {
    tail: Vec<Vertex>,
    started: bool,
    done: bool,
}

impl CanonicalPermutations {
    fn new(n: usize) -> Self {
        CanonicalPermutations {
            tail: (2..=n as Vertex).collect(),
            started: false,
            done: false,
        }
    }

    fn advance(&mut self) -> Option<&[Vertex]> {
        loop {
            if self.done {
                return None;
            }
            if self.started {
                if !next_permutation(&mut self.tail) {
                    self.done = true;
                    return None;
                }
            } else {
                self.started = true;
            }
            if self.tail[0] < self.tail[self.tail.len() - 1] {
                return Some(&self.tail);
            }
        }
    }
}

fn next_permutation(xs: &mut [Vertex]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// Lazily enumerates canonical Hamiltonian cycles in lexicographic order.
#[derive(Clone, Debug)]
pub struct CycleIter {
    perms: CanonicalPermutations,
}

impl Iterator for CycleIter {
    type Item = HamiltonianCycle;

    fn next(&mut self) -> Option<HamiltonianCycle> {
        let tail = self.perms.advance()?;
        let mut order = Vec::with_capacity(tail.len() + 1);
        order.push(1);
        order.extend_from_slice(tail);
        Some(HamiltonianCycle::from_canonical(order))
    }
}

/// Same order as [`CycleIter`], yielding only edge masks.
#[derive(Clone, Debug)]
pub struct MaskIter {
    perms: CanonicalPermutations,
}

impl Iterator for MaskIter {
    type Item = EdgeMask;

    fn next(&mut self) -> Option<EdgeMask> {
        let tail = self.perms.advance()?;
        let mut m = 0u128;
        let mut prev = 1;
        for &x in tail.iter().chain(core::iter::once(&1)) {
            let (a, b) = (prev.min(x), prev.max(x));
            m |= 1u128 << ((b - 1) * (b - 2) / 2 + (a - 1));
            prev = x;
        }
        Some(EdgeMask(m))
    }
}

fn check_enumeration(n: usize, limits: &Limits) -> Result<()> {
    if n < 3 {
        return Err(Error::invalid(alloc::format!(
            "cycle enumeration needs n >= 3, got {n}"
        )));
    }
    let total = cycle_count(n as u64);
    let cap = BigUint::from(limits.max_cycles);
    if n > MAX_MASK_N || total > cap {
        let requested = u64::try_from(&total).unwrap_or(u64::MAX);
        return Err(Error::ResourceLimit {
            what: "Hamiltonian cycles",
            requested,
            cap: limits.max_cycles,
        });
    }
    Ok(())
}

pub fn cycles(n: usize, limits: &Limits) -> Result<CycleIter> {
    check_enumeration(n, limits)?;
    Ok(CycleIter {
        perms: CanonicalPermutations::new(n),
    })
}

pub fn cycle_masks(n: usize, limits: &Limits) -> Result<MaskIter> {
    check_enumeration(n, limits)?;
    Ok(MaskIter {
        perms: CanonicalPermutations::new(n),
    })
}

/// All `(n-1)!/2` Hamiltonian cycles of `K_n`, canonical, in lexicographic
/// order of their permutations.
pub fn enumerate_cycles(n: usize, limits: &Limits) -> Result<Vec<HamiltonianCycle>> {
    Ok(cycles(n, limits)?.collect())
}

/// Vertex-disjoint simple paths in `K_n`, each given by its vertex sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSystem {
    n: usize,
    paths: Vec<Vec<Vertex>>,
}

impl PathSystem {
    pub fn new(n: usize, paths: Vec<Vec<Vertex>>) -> Result<PathSystem> {
        if n < 3 {
            return Err(Error::invalid("path systems live in K_n with n >= 3"));
        }
        let mut seen = vec![false; n + 1];
        for p in &paths {
            if p.len() < 2 {
                return Err(Error::invalid("every path needs at least one edge"));
            }
            for &x in p {
                let xi = x as usize;
                if xi == 0 || xi > n {
                    return Err(Error::invalid(alloc::format!("vertex {x} outside K_{n}")));
                }
                if seen[xi] {
                    return Err(Error::invalid(alloc::format!(
                        "vertex {x} is shared by two paths or repeated"
                    )));
                }
                seen[xi] = true;
            }
        }
        let ps = PathSystem { n, paths };
        if ps.edge_count() + ps.path_count() > n {
            return Err(Error::invalid("k + m exceeds n"));
        }
        Ok(ps)
    }

    /// Splits an edge set into its paths; `None` if it is not a disjoint
    /// union of simple paths.
    pub fn from_edges(n: usize, edges: &[Edge]) -> Option<PathSystem> {
        let mut es: Vec<Edge> = edges.to_vec();
        es.sort_unstable();
        es.dedup();
        if es.iter().any(|e| !e.is_valid_for(n)) {
            return None;
        }
        match classify_edges(n, &es) {
            EdgeSetShape::Paths { .. } => {}
            _ => return None,
        }
        let mut adj: Vec<Vec<Vertex>> = vec![Vec::new(); n + 1];
        for e in &es {
            adj[e.u as usize].push(e.v);
            adj[e.v as usize].push(e.u);
        }
        let mut used = vec![false; n + 1];
        let mut paths = Vec::new();
        for start in 1..=n {
            if used[start] || adj[start].len() != 1 {
                continue;
            }
            let mut path = vec![start as Vertex];
            used[start] = true;
            let mut prev = 0;
            let mut cur = start as Vertex;
            loop {
                let next = adj[cur as usize].iter().copied().find(|&w| w != prev);
                match next {
                    Some(w) if !used[w as usize] => {
                        used[w as usize] = true;
                        path.push(w);
                        prev = cur;
                        cur = w;
                    }
                    _ => break,
                }
            }
            paths.push(path);
        }
        PathSystem::new(n, paths).ok()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn paths(&self) -> &[Vec<Vertex>] {
        &self.paths
    }

    /// Number of paths `m`.
    pub fn path_count(&self) -> usize {
        self.paths.len()
    }

    /// Total number of edges `k`.
    pub fn edge_count(&self) -> usize {
        self.paths.iter().map(|p| p.len() - 1).sum()
    }

    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for p in &self.paths {
            for w in p.windows(2) {
                out.push(Edge {
                    u: w[0].min(w[1]),
                    v: w[0].max(w[1]),
                });
            }
        }
        out
    }
}

/// Number of Hamiltonian cycles of `K_n` containing every path of the
/// system: `2^(m-1) (n-k-1)!`.
pub fn count_cycles_containing(ps: &PathSystem) -> BigUint {
    paths_count(ps.n, ps.edge_count(), ps.path_count())
}

fn paths_count(n: usize, k: usize, m: usize) -> BigUint {
    if m == 0 {
        return cycle_count(n as u64);
    }
    pow2(m as u64 - 1) * factorial((n - k - 1) as u64)
}

/// How an edge set sits inside `K_n` relative to Hamiltonian cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeSetShape {
    /// `edges` edges forming `paths` vertex-disjoint paths.
    Paths { edges: usize, paths: usize },
    /// The edge set of a full Hamiltonian cycle.
    Tour,
    /// Contained in no Hamiltonian cycle.
    Infeasible,
}

/// Classifies a duplicate-free edge set by degree counting and union-find.
pub fn classify_edges(n: usize, edges: &[Edge]) -> EdgeSetShape {
    // Local vertex table; edge sets here are small so linear lookup is fine.
    let mut verts: Vec<Vertex> = Vec::with_capacity(2 * edges.len());
    let mut deg: Vec<u8> = Vec::with_capacity(2 * edges.len());
    let mut parent: Vec<usize> = Vec::with_capacity(2 * edges.len());
    let mut closed_cycle = false;

    fn slot(verts: &mut Vec<Vertex>, deg: &mut Vec<u8>, parent: &mut Vec<usize>, x: Vertex) -> usize {
        match verts.iter().position(|&y| y == x) {
            Some(i) => i,
            None => {
                verts.push(x);
                deg.push(0);
                parent.push(verts.len() - 1);
                verts.len() - 1
            }
        }
    }
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }

    for e in edges {
        if !e.is_valid_for(n) {
            return EdgeSetShape::Infeasible;
        }
        let a = slot(&mut verts, &mut deg, &mut parent, e.u);
        let b = slot(&mut verts, &mut deg, &mut parent, e.v);
        deg[a] += 1;
        deg[b] += 1;
        if deg[a] > 2 || deg[b] > 2 {
            return EdgeSetShape::Infeasible;
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            closed_cycle = true;
        } else {
            parent[ra] = rb;
        }
    }
    let components = (0..verts.len()).filter(|&i| find(&mut parent, i) == i).count();
    if closed_cycle {
        if edges.len() == n && components == 1 {
            EdgeSetShape::Tour
        } else {
            EdgeSetShape::Infeasible
        }
    } else {
        EdgeSetShape::Paths {
            edges: edges.len(),
            paths: components,
        }
    }
}

/// Number of Hamiltonian cycles of `K_n` containing every edge of `edges`.
/// Duplicates are ignored; edges outside `K_n` give 0.
pub fn count_cycles_with_edge_set(n: usize, edges: &[Edge]) -> BigUint {
    let mut es: Vec<Edge> = edges.to_vec();
    es.sort_unstable();
    es.dedup();
    match classify_edges(n, &es) {
        EdgeSetShape::Paths { edges, paths } => paths_count(n, edges, paths),
        EdgeSetShape::Tour => BigUint::from(1u32),
        EdgeSetShape::Infeasible => BigUint::zero(),
    }
}

/// Fraction of Hamiltonian cycles with the given shape:
/// `2^m / ((n-1)(n-2)...(n-k))` for `k` edges in `m` paths.
pub fn containment_probability(n: usize, shape: EdgeSetShape) -> Rational {
    match shape {
        EdgeSetShape::Paths { edges, paths } => {
            Rational::new(pow2(paths as u64).into(), falling(n as u64 - 1, edges as u64).into())
        }
        EdgeSetShape::Tour => Rational::new(2.into(), factorial(n as u64 - 1).into()),
        EdgeSetShape::Infeasible => from_big(0.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn e(a: Vertex, b: Vertex) -> Edge {
        Edge::new(a, b).unwrap()
    }

    fn brute(n: usize, es: &[Edge]) -> usize {
        let m = EdgeMask::from_edges(es);
        cycle_masks(n, &Limits::default())
            .unwrap()
            .filter(|x| x.contains_all(m))
            .count()
    }

    #[test]
    fn small_counts() {
        let lim = Limits::default();
        assert_eq!(enumerate_cycles(4, &lim).unwrap().len(), 3);
        assert_eq!(enumerate_cycles(5, &lim).unwrap().len(), 12);
        let c8 = enumerate_cycles(8, &lim).unwrap();
        assert_eq!(c8.len(), 2520);
        assert!(c8.iter().all(|c| c.edges().len() == 8));
    }

    #[test]
    fn enumeration_is_canonical_sorted_and_unique() {
        let cs = enumerate_cycles(7, &Limits::default()).unwrap();
        for w in cs.windows(2) {
            assert!(w[0].order() < w[1].order());
        }
        for c in &cs {
            assert_eq!(c.order()[0], 1);
            assert!(c.order()[1] < c.order()[6]);
            assert_eq!(&HamiltonianCycle::from_order(c.order()).unwrap(), c);
        }
        let masks: Vec<EdgeMask> = cycle_masks(7, &Limits::default()).unwrap().collect();
        for (c, m) in cs.iter().zip(&masks) {
            assert_eq!(c.mask().unwrap(), *m);
        }
    }

    #[test]
    fn enumeration_errors() {
        let lim = Limits::default();
        assert!(matches!(enumerate_cycles(2, &lim), Err(Error::InvalidArgument(_))));
        match enumerate_cycles(13, &lim) {
            Err(Error::ResourceLimit { cap, .. }) => assert_eq!(cap, Limits::DEFAULT_MAX_CYCLES),
            other => panic!("expected resource limit, got {other:?}"),
        }
    }

    #[test]
    fn canonicalization_kills_rotation_and_reflection() {
        let a = HamiltonianCycle::from_order(&[3, 4, 5, 1, 2]).unwrap();
        let b = HamiltonianCycle::from_order(&[1, 5, 4, 3, 2]).unwrap();
        assert_eq!(a.order(), &[1, 2, 3, 4, 5]);
        assert_eq!(a, b);
        assert!(HamiltonianCycle::from_order(&[1, 2, 2]).is_err());
    }

    #[test]
    fn lex_index_round_trip() {
        for n in 3..12 {
            for (i, ed) in all_edges(n).into_iter().enumerate() {
                assert_eq!(ed.lex_index(n), i);
                assert_eq!(Edge::from_lex_index(n, i), ed);
            }
        }
    }

    #[test]
    fn lemma_paths_examples() {
        let ham = PathSystem::new(6, vec![vec![3, 1, 2, 6, 5, 4]]).unwrap();
        assert_eq!(count_cycles_containing(&ham), BigUint::from(1u32));
        let two = PathSystem::new(6, vec![vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(count_cycles_containing(&two), BigUint::from(12u32));
        assert_eq!(brute(6, &two.edges()), 12);
        let one = PathSystem::new(6, vec![vec![1, 2]]).unwrap();
        assert_eq!(count_cycles_containing(&one), BigUint::from(24u32));
        assert_eq!(brute(6, &one.edges()), 24);
    }

    #[test]
    fn path_system_validation() {
        assert!(PathSystem::new(6, vec![vec![1, 2], vec![2, 3]]).is_err());
        assert!(PathSystem::new(6, vec![vec![1]]).is_err());
        assert!(PathSystem::new(6, vec![vec![1, 7]]).is_err());
        assert!(PathSystem::new(4, vec![vec![1, 2], vec![3, 4]]).is_ok());
    }

    #[test]
    fn edge_set_totality() {
        assert_eq!(count_cycles_with_edge_set(6, &[]), BigUint::from(60u32));
        let claw = [e(1, 2), e(1, 3), e(1, 4)];
        assert!(count_cycles_with_edge_set(6, &claw).is_zero());
        let tri = [e(1, 2), e(2, 3), e(1, 3)];
        assert!(count_cycles_with_edge_set(6, &tri).is_zero());
        let tour = HamiltonianCycle::canonical(6).unwrap();
        assert_eq!(count_cycles_with_edge_set(6, tour.edges()), BigUint::from(1u32));
        assert!(count_cycles_with_edge_set(6, &[e(1, 9)]).is_zero());
        assert_eq!(count_cycles_with_edge_set(6, &[e(1, 2), e(1, 2)]), BigUint::from(24u32));
    }

    #[test]
    fn from_edges_recovers_paths() {
        let ps = PathSystem::from_edges(8, &[e(2, 3), e(1, 2), e(5, 6)]).unwrap();
        assert_eq!(ps.edge_count(), 3);
        assert_eq!(ps.path_count(), 2);
        assert!(PathSystem::from_edges(8, &[e(1, 2), e(2, 3), e(1, 3)]).is_none());
    }

    #[test]
    fn probability_matches_count() {
        let n = 7;
        let x = Rational::from_integer(cycle_count(n as u64).into());
        for es in [
            vec![],
            vec![e(1, 2)],
            vec![e(1, 2), e(2, 3)],
            vec![e(1, 2), e(4, 5), e(6, 7)],
        ] {
            let shape = classify_edges(n, &es);
            let p = containment_probability(n, shape);
            let c = Rational::from_integer(count_cycles_with_edge_set(n, &es).into());
            assert_eq!(p, c / &x);
        }
    }

    #[test]
    fn edge_parse() {
        assert_eq!(parse_edge_list("1-2, 4-3").unwrap(), vec![e(1, 2), e(3, 4)]);
        assert!("1-1".parse::<Edge>().is_err());
        assert!("12".parse::<Edge>().is_err());
        assert_eq!(e(3, 1).to_string(), "1-3");
    }
}
