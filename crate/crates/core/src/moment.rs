//! Moment matrices `A_f` of the quadratic form
//! `q_f(h) = (1/|X|) Σ_x f(x) h(x)²` in the monomial basis of degree `<= k`.
//!
//! Two routes build the same matrix on cycle ground sets: direct summation
//! over all Hamiltonian cycles, and a closed form that only needs the
//! containment probabilities of small edge sets. A generic finite ground set
//! of rational vectors is supported by summation.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::combinatorics::{binomial, cycle_count};
use crate::cycles::{classify_edges, containment_probability, cycle_masks, edge_count, Edge, EdgeMask, EdgeSetShape};
use crate::functionals::LinearFunctional;
use crate::linalg::{Scalar, SquareMatrix};
use crate::psd::CertificatePolynomial;
use crate::rational::{from_big, int, Rational};
use crate::{Error, Limits, Result};

/// The variables the monomials are built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Space {
    /// Edge variables `x_e` of `K_n`, indexed in lex order.
    Edges { n: usize },
    /// Coordinates `x_1..x_d` of a generic ground set.
    Coordinates { d: usize },
}

impl Space {
    pub fn var_count(self) -> usize {
        match self {
            Space::Edges { n } => edge_count(n),
            Space::Coordinates { d } => d,
        }
    }

    pub fn var_label(self, i: usize) -> String {
        match self {
            Space::Edges { n } => Edge::from_lex_index(n, i).to_string(),
            Space::Coordinates { .. } => alloc::format!("x{}", i + 1),
        }
    }
}

/// A monomial as a sorted multiset of variable indices; empty is `1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialIndex(Vec<usize>);

impl MonomialIndex {
    pub fn new(mut vars: Vec<usize>) -> Self {
        vars.sort_unstable();
        MonomialIndex(vars)
    }

    pub fn one() -> Self {
        MonomialIndex(Vec::new())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn vars(&self) -> &[usize] {
        &self.0
    }

    /// Distinct variables, which is all that matters on 0/1 points.
    pub fn support(&self) -> Vec<usize> {
        let mut s = self.0.clone();
        s.dedup();
        s
    }

    pub fn edges(&self, n: usize) -> Vec<Edge> {
        self.0.iter().map(|&i| Edge::from_lex_index(n, i)).collect()
    }

    pub fn label(&self, space: Space) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let parts: Vec<String> = self.0.iter().map(|&i| space.var_label(i)).collect();
        parts.join("*")
    }
}

/// Basis of monomials of degree `<= k` in `vars` variables, ordered by
/// degree and then lexicographically. Has `C(vars + k, k)` elements.
pub fn monomial_basis(vars: usize, k: usize) -> Vec<MonomialIndex> {
    let mut out = vec![MonomialIndex::one()];
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for m in &layer {
            let start = m.last().copied().unwrap_or(0);
            for v in start..vars {
                let mut w = m.clone();
                w.push(v);
                next.push(w);
            }
        }
        out.extend(next.iter().cloned().map(MonomialIndex));
        layer = next;
    }
    out
}

pub fn basis_size(vars: usize, k: usize) -> u64 {
    u64::try_from(binomial((vars + k) as i64, k as i64)).unwrap_or(u64::MAX)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentMatrix {
    pub space: Space,
    pub k: usize,
    pub basis: Vec<MonomialIndex>,
    pub entries: SquareMatrix<Rational>,
}

impl MomentMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn labels(&self) -> Vec<String> {
        self.basis.iter().map(|m| m.label(self.space)).collect()
    }

    pub fn index_of(&self, m: &MonomialIndex) -> Option<usize> {
        self.basis.iter().position(|b| b == m)
    }

    /// Coefficient vector of a certificate in this basis, if every monomial
    /// of its expansion is present.
    pub fn coordinates(&self, p: &CertificatePolynomial) -> Option<Vec<Rational>> {
        let mut v = vec![Rational::zero(); self.dim()];
        for (mono, c) in p.expand() {
            let i = self.index_of(&mono)?;
            v[i] += from_big(c);
        }
        Some(v)
    }

    pub fn trace(&self) -> Rational {
        self.entries.trace()
    }
}

fn check_dim(vars: usize, k: usize, limits: &Limits) -> Result<()> {
    if k == 0 {
        return Err(Error::invalid("degree k must be at least 1"));
    }
    let size = basis_size(vars, k);
    if size > limits.max_matrix_dim as u64 {
        return Err(Error::ResourceLimit {
            what: "moment matrix dimension",
            requested: size,
            cap: limits.max_matrix_dim as u64,
        });
    }
    Ok(())
}

/// `A_f` by summing over every Hamiltonian cycle of `K_n`.
pub fn moment_matrix_enumerated(f: &LinearFunctional, k: usize, limits: &Limits) -> Result<MomentMatrix> {
    let n = f.n();
    check_dim(edge_count(n), k, limits)?;
    let masks = cycle_masks(n, limits)?;
    let basis = monomial_basis(edge_count(n), k);
    let dim = basis.len();
    let supports: Vec<EdgeMask> = basis.iter().map(|m| EdgeMask::from_edges(&m.edges(n))).collect();

    // Integer numerators over a common denominator.
    let den = f
        .coeffs()
        .iter()
        .fold(f.constant().denom().clone(), |acc, c| acc.lcm(c.denom()));
    let scale = |r: &Rational| r.numer() * (&den / r.denom());
    let c0 = scale(f.constant());
    let cs: Vec<(u32, BigInt)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (Edge::from_lex_index(n, i).bit(), scale(c)))
        .collect();

    let mut acc = vec![BigInt::zero(); dim * dim];
    let mut present = Vec::with_capacity(dim);
    let mut cycles = 0u64;
    for x in masks {
        cycles += 1;
        let mut fx = c0.clone();
        for (bit, c) in &cs {
            if x.0 >> bit & 1 == 1 {
                fx += c;
            }
        }
        if fx.is_zero() {
            continue;
        }
        present.clear();
        present.extend((0..dim).filter(|&i| x.contains_all(supports[i])));
        for (a, &i) in present.iter().enumerate() {
            for &j in &present[a..] {
                acc[i * dim + j] += &fx;
            }
        }
    }
    let total = den * BigInt::from(cycles);
    let mut entries = SquareMatrix::zeros(dim);
    for i in 0..dim {
        for j in i..dim {
            let v = Rational::new(acc[i * dim + j].clone(), total.clone());
            entries.set(j, i, v.clone());
            entries.set(i, j, v);
        }
    }
    Ok(MomentMatrix {
        space: Space::Edges { n },
        k,
        basis,
        entries,
    })
}

/// Entry `(1/|X|) Σ_{x ⊇ S} f(x)` for a duplicate-free edge set `S`, from
/// containment probabilities alone.
struct ClosedFormEntries<T> {
    n: usize,
    constant: T,
    coeffs: Vec<T>,
    vertex_sums: Vec<T>,
    total: T,
    /// `probs[k][c]` = probability of `k` edges in `c` paths.
    probs: Vec<Vec<T>>,
    tour: T,
}

impl<T: Scalar> ClosedFormEntries<T> {
    fn new(f: &LinearFunctional, max_edges: usize) -> Self {
        let n = f.n();
        let coeffs: Vec<T> = f.coeffs().iter().map(T::from_rational).collect();
        let mut vertex_sums = vec![T::zero(); n + 1];
        let mut total = T::zero();
        for (i, c) in coeffs.iter().enumerate() {
            let e = Edge::from_lex_index(n, i);
            vertex_sums[e.u() as usize] += c.clone();
            vertex_sums[e.v() as usize] += c.clone();
            total += c.clone();
        }
        let kmax = (max_edges + 1).min(n.saturating_sub(1));
        let probs = (0..=kmax)
            .map(|k| {
                (0..=k)
                    .map(|c| T::from_rational(&containment_probability(n, EdgeSetShape::Paths { edges: k, paths: c })))
                    .collect()
            })
            .collect();
        let tour = T::from_rational(&containment_probability(n, EdgeSetShape::Tour));
        ClosedFormEntries {
            n,
            constant: T::from_rational(f.constant()),
            coeffs,
            vertex_sums,
            total,
            probs,
            tour,
        }
    }

    fn coeff(&self, e: Edge) -> T {
        self.coeffs[e.lex_index(self.n)].clone()
    }

    fn entry(&self, s: &[Edge], scratch: &mut Scratch) -> T {
        let Some((k, c)) = scratch.load(s) else {
            return match classify_edges(self.n, s) {
                EdgeSetShape::Tour => {
                    s.iter().fold(self.constant.clone(), |a, e| a + self.coeff(*e)) * self.tour.clone()
                }
                _ => T::zero(),
            };
        };
        let inside = s.iter().fold(self.constant.clone(), |a, e| a + self.coeff(*e));
        let mut value = inside * self.probs[k][c].clone();
        let verts = &scratch.verts;

        if verts.len() < self.n {
            // Edges with no endpoint in V(S): one more path.
            let mut outside = self.total.clone();
            for (x, _, _) in verts {
                outside = outside - self.vertex_sums[*x as usize].clone();
            }
            for (a, (x, _, _)) in verts.iter().enumerate() {
                for (y, _, _) in &verts[a + 1..] {
                    outside += self.coeff(Edge::new(*x, *y).expect("distinct vertices"));
                }
            }
            value += outside * self.probs[k + 1][c + 1].clone();

            // Edges leaving a path end to a fresh vertex: same path count.
            let mut extend = T::zero();
            for (x, d, _) in verts {
                if *d != 1 {
                    continue;
                }
                let mut sum = self.vertex_sums[*x as usize].clone();
                for (y, _, _) in verts {
                    if y != x {
                        sum = sum - self.coeff(Edge::new(*x, *y).expect("distinct vertices"));
                    }
                }
                extend += sum;
            }
            value += extend * self.probs[k + 1][c].clone();
        }

        // Edges joining two path ends: they merge two paths or close one.
        for (a, (x, dx, rx)) in verts.iter().enumerate() {
            for (y, dy, ry) in &verts[a + 1..] {
                if *dx == 2 || *dy == 2 {
                    continue;
                }
                let e = Edge::new(*x, *y).expect("distinct vertices");
                if s.contains(&e) {
                    continue;
                }
                let p = if rx != ry {
                    self.probs[k + 1][c - 1].clone()
                } else if k + 1 == self.n {
                    self.tour.clone()
                } else {
                    continue;
                };
                value += self.coeff(e) * p;
            }
        }
        value
    }
}

/// Vertices of an edge set with their degree and path label, reused across entries.
#[derive(Default)]
struct Scratch {
    verts: Vec<(u32, u8, usize)>,
    parent: Vec<usize>,
}

impl Scratch {
    /// Loads a duplicate-free edge set. Returns `(edges, paths)` when it is a
    /// union of vertex-disjoint paths.
    fn load(&mut self, s: &[Edge]) -> Option<(usize, usize)> {
        self.verts.clear();
        self.parent.clear();
        for e in s {
            let mut ends = [0; 2];
            for (slot, x) in ends.iter_mut().zip([e.u(), e.v()]) {
                *slot = match self.verts.iter().position(|(y, _, _)| *y == x) {
                    Some(i) => i,
                    None => {
                        self.verts.push((x, 0, 0));
                        self.parent.push(self.parent.len());
                        self.verts.len() - 1
                    }
                };
                self.verts[*slot].1 += 1;
                if self.verts[*slot].1 > 2 {
                    return None;
                }
            }
            let (ra, rb) = (self.find(ends[0]), self.find(ends[1]));
            if ra == rb {
                return None;
            }
            self.parent[ra] = rb;
        }
        let mut paths = 0;
        for i in 0..self.verts.len() {
            let r = self.find(i);
            paths += usize::from(r == i);
            self.verts[i].2 = r;
        }
        Some((s.len(), paths))
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }
}

/// `A_f` in closed form for any degree `k`, in the requested scalar type.
pub fn closed_form_entries<T: Scalar>(
    f: &LinearFunctional,
    k: usize,
    limits: &Limits,
) -> Result<(Vec<MonomialIndex>, SquareMatrix<T>)> {
    let n = f.n();
    check_dim(edge_count(n), k, limits)?;
    let basis = monomial_basis(edge_count(n), k);
    let dim = basis.len();
    let edges: Vec<Vec<Edge>> = basis.iter().map(|m| support_edges(m, n)).collect();
    let table = ClosedFormEntries::<T>::new(f, 2 * k);
    let mut out = SquareMatrix::zeros(dim);
    let mut s: Vec<Edge> = Vec::with_capacity(2 * k);
    let mut scratch = Scratch::default();
    for i in 0..dim {
        for j in i..dim {
            s.clear();
            s.extend_from_slice(&edges[i]);
            for e in &edges[j] {
                if !s.contains(e) {
                    s.push(*e);
                }
            }
            let v = table.entry(&s, &mut scratch);
            out.set(j, i, v.clone());
            out.set(i, j, v);
        }
    }
    Ok((basis, out))
}

fn support_edges(m: &MonomialIndex, n: usize) -> Vec<Edge> {
    m.support().into_iter().map(|i| Edge::from_lex_index(n, i)).collect()
}

/// Exact closed-form `A_f` for any `k` (no enumeration, works at any `n`).
pub fn moment_matrix_closed_form(f: &LinearFunctional, k: usize, limits: &Limits) -> Result<MomentMatrix> {
    let (basis, entries) = closed_form_entries::<Rational>(f, k, limits)?;
    Ok(MomentMatrix {
        space: Space::Edges { n: f.n() },
        k,
        basis,
        entries,
    })
}

pub fn moment_matrix_closed_form_k1(f: &LinearFunctional, limits: &Limits) -> Result<MomentMatrix> {
    moment_matrix_closed_form(f, 1, limits)
}

/// Floating-point closed-form `A_f` for large `n`.
pub fn moment_matrix_closed_form_f64(f: &LinearFunctional, k: usize, limits: &Limits) -> Result<SquareMatrix<f64>> {
    closed_form_entries::<f64>(f, k, limits).map(|(_, m)| m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceCheck {
    pub trace: Rational,
    /// `C(n+k, k)` times the average of `f`.
    pub expected: Rational,
}

impl TraceCheck {
    pub fn holds(&self) -> bool {
        self.trace == self.expected
    }
}

/// Trace of a cycle moment matrix against `C(n+k, k) · avg(f)`.
pub fn trace_of(m: &MomentMatrix, average: &Rational) -> Result<TraceCheck> {
    let n = match m.space {
        Space::Edges { n } => n,
        Space::Coordinates { .. } => return Err(Error::invalid("trace identity applies to cycle ground sets only")),
    };
    let c = binomial((n + m.k) as i64, m.k as i64);
    Ok(TraceCheck {
        trace: m.trace(),
        expected: from_big(c.into()) * average,
    })
}

/// `q_f(p) = (1/|X|) Σ_x f(x) p(x)²` by enumeration over the cycles.
pub fn quadratic_form_value(f: &LinearFunctional, p: &CertificatePolynomial, limits: &Limits) -> Result<Rational> {
    let n = f.n();
    match p.space() {
        Space::Edges { n: pn } if pn == n => {}
        _ => return Err(Error::invalid("certificate is not over the edges of the same K_n")),
    }
    let mut acc = Rational::zero();
    let mut count = 0u64;
    for x in cycle_masks(n, limits)? {
        count += 1;
        if p.holds_on_mask(x) {
            acc += f.evaluate_mask(x);
        }
    }
    Ok(acc / from_big(BigInt::from(count)))
}

/// Number of cycles `|X|` as a rational.
pub fn ground_size(n: usize) -> Rational {
    from_big(cycle_count(n as u64).into())
}

/// A nonempty, duplicate-free finite set of rational points in `R^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet {
    d: usize,
    points: Vec<Vec<Rational>>,
}

impl GroundSet {
    pub fn new(d: usize, points: Vec<Vec<Rational>>) -> Result<GroundSet> {
        if points.is_empty() {
            return Err(Error::invalid("ground set must be nonempty"));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != d {
                return Err(Error::invalid(alloc::format!(
                    "point {i} has dimension {} not {d}",
                    p.len()
                )));
            }
            if points[..i].contains(p) {
                return Err(Error::invalid(alloc::format!("point {i} is a duplicate")));
            }
        }
        Ok(GroundSet { d, points })
    }

    /// Ground set of 0/1 points given as bit vectors.
    pub fn zero_one(d: usize, points: &[Vec<u8>]) -> Result<GroundSet> {
        let pts = points
            .iter()
            .map(|p| p.iter().map(|&b| int(b as i64)).collect())
            .collect();
        let g = GroundSet::new(d, pts)?;
        if !g.is_zero_one() {
            return Err(Error::invalid("points must have 0/1 coordinates"));
        }
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn points(&self) -> &[Vec<Rational>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_zero_one(&self) -> bool {
        self.points.iter().flatten().all(|x| x.is_zero() || x.is_one())
    }

    pub fn position(&self, y: &[Rational]) -> Option<usize> {
        self.points.iter().position(|p| p.as_slice() == y)
    }
}

/// `constant + Σ coeffs[i] x_i` on `R^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFunction {
    pub constant: Rational,
    pub coeffs: Vec<Rational>,
}

impl AffineFunction {
    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .zip(x)
            .fold(self.constant.clone(), |acc, (c, v)| acc + c * v)
    }

    pub fn values_on(&self, ground: &GroundSet) -> Vec<Rational> {
        ground.points().iter().map(|p| self.evaluate(p)).collect()
    }
}

fn monomial_value(m: &MonomialIndex, x: &[Rational]) -> Rational {
    m.vars().iter().fold(Rational::one(), |acc, &i| acc * &x[i])
}

/// `A_f` over a generic ground set, `values[i] = f(points[i])`.
pub fn moment_matrix_ground_set(
    ground: &GroundSet,
    values: &[Rational],
    k: usize,
    limits: &Limits,
) -> Result<MomentMatrix> {
    if values.len() != ground.len() {
        return Err(Error::invalid("one value per ground-set point is required"));
    }
    check_dim(ground.dim(), k, limits)?;
    let basis = monomial_basis(ground.dim(), k);
    let dim = basis.len();
    let mut entries = SquareMatrix::zeros(dim);
    let size = int(ground.len() as i64);
    for i in 0..dim {
        for j in i..dim {
            let mut acc = Rational::zero();
            for (x, fx) in ground.points().iter().zip(values) {
                acc += fx * monomial_value(&basis[i], x) * monomial_value(&basis[j], x);
            }
            let v = acc / &size;
            entries.set(j, i, v.clone());
            entries.set(i, j, v);
        }
    }
    Ok(MomentMatrix {
        space: Space::Coordinates { d: ground.dim() },
        k,
        basis,
        entries,
    })
}

/// `q_f(p)` over a generic 0/1 ground set.
pub fn quadratic_form_value_ground(ground: &GroundSet, values: &[Rational], p: &CertificatePolynomial) -> Rational {
    let mut acc = Rational::zero();
    for (x, fx) in ground.points().iter().zip(values) {
        let px = p.evaluate_point(x);
        acc += fx * &px * &px;
    }
    acc / int(ground.len() as i64)
}

/// `p_y(x) = Π_{y_i = 0} (1 - x_i) Π_{y_j = 1} x_j`, which is 1 at `y` and 0
/// at every other 0/1 point.
pub fn zero_one_certificate(y: &[Rational], ground: &GroundSet) -> Result<CertificatePolynomial> {
    if !ground.is_zero_one() {
        return Err(Error::invalid("ground set must consist of 0/1 points"));
    }
    if ground.position(y).is_none() {
        return Err(Error::invalid("y is not a point of the ground set"));
    }
    Ok(CertificatePolynomial::zero_one_product(y))
}

/// Exact check of `A·s = 0` for the star vector `2 - Σ_j x_ij` of a `k = 1`
/// cycle moment matrix.
pub fn star_vector(n: usize, i: u32) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); edge_count(n) + 1];
    v[0] = int(2);
    for j in 1..=n as u32 {
        if j != i {
            v[1 + Edge::new(i, j).expect("distinct").lex_index(n)] = int(-1);
        }
    }
    v
}
