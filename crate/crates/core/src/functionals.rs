//! Affine functionals on the Hamiltonian cycles of `K_n` and the
//! normalized facet families.
//!
//! Every generator is scaled so its average over all cycles is 1, using the
//! edge average `2/(n-1)` rather than enumeration, so they work at any `n`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::cycles::{edge_count, Edge, EdgeMask, HamiltonianCycle, Vertex};
use crate::rational::{int, ratio, Rational};
use crate::{Error, Result};

/// `f(x) = constant + Σ_e coeff(e) x_e`, coefficients dense in lex edge order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFunctional {
    n: usize,
    constant: Rational,
    coeffs: Vec<Rational>,
}

impl LinearFunctional {
    pub fn zero(n: usize) -> LinearFunctional {
        LinearFunctional {
            n,
            constant: Rational::zero(),
            coeffs: vec![Rational::zero(); edge_count(n)],
        }
    }

    pub fn from_parts(
        n: usize,
        constant: Rational,
        coeffs: impl IntoIterator<Item = (Edge, Rational)>,
    ) -> Result<LinearFunctional> {
        if n < 3 {
            return Err(Error::invalid("functionals need n >= 3"));
        }
        let mut f = LinearFunctional::zero(n);
        f.constant = constant;
        for (e, c) in coeffs {
            if !e.is_valid_for(n) {
                return Err(Error::invalid(alloc::format!("edge {e} outside K_{n}")));
            }
            f.coeffs[e.lex_index(n)] += c;
        }
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn coeff(&self, e: Edge) -> &Rational {
        &self.coeffs[e.lex_index(self.n)]
    }

    /// Coefficients in lex edge order.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn evaluate(&self, cycle: &HamiltonianCycle) -> Rational {
        cycle
            .edges()
            .iter()
            .fold(self.constant.clone(), |acc, e| acc + self.coeff(*e))
    }

    pub fn evaluate_edges(&self, edges: &[Edge]) -> Rational {
        edges.iter().fold(self.constant.clone(), |acc, e| acc + self.coeff(*e))
    }

    pub fn evaluate_mask(&self, mask: EdgeMask) -> Rational {
        let mut acc = self.constant.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() && mask.contains(Edge::from_lex_index(self.n, i)) {
                acc += c;
            }
        }
        acc
    }

    /// Average over all cycles: `constant + (2/(n-1)) Σ coeff`.
    pub fn average_on_x(&self) -> Rational {
        let total: Rational = self.coeffs.iter().sum();
        &self.constant + total * ratio(2, self.n as i64 - 1)
    }

    /// The purely linear representative with the same values on cycles:
    /// the constant is spread as `constant/n` over every edge.
    pub fn linearized(&self) -> LinearFunctional {
        let share = &self.constant / int(self.n as i64);
        LinearFunctional {
            n: self.n,
            constant: Rational::zero(),
            coeffs: self.coeffs.iter().map(|c| c + &share).collect(),
        }
    }

    pub fn scaled(&self, s: &Rational) -> LinearFunctional {
        LinearFunctional {
            n: self.n,
            constant: &self.constant * s,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }
}

/// `a·f + b·g`.
pub fn combine(a: &Rational, f: &LinearFunctional, b: &Rational, g: &LinearFunctional) -> Result<LinearFunctional> {
    if f.n != g.n {
        return Err(Error::invalid(alloc::format!(
            "cannot combine functionals on K_{} and K_{}",
            f.n,
            g.n
        )));
    }
    Ok(LinearFunctional {
        n: f.n,
        constant: a * &f.constant + b * &g.constant,
        coeffs: f.coeffs.iter().zip(&g.coeffs).map(|(x, y)| a * x + b * y).collect(),
    })
}

pub fn average_on_x(f: &LinearFunctional) -> Rational {
    f.average_on_x()
}

fn vertex_set(n: usize, set: &[Vertex]) -> Result<Vec<bool>> {
    let mut member = vec![false; n + 1];
    for &x in set {
        let xi = x as usize;
        if xi == 0 || xi > n {
            return Err(Error::invalid(alloc::format!("vertex {x} outside K_{n}")));
        }
        if member[xi] {
            return Err(Error::invalid(alloc::format!("vertex {x} listed twice")));
        }
        member[xi] = true;
    }
    Ok(member)
}

/// Normalization `(n-1) / (2 (m(n-m) + 1 - n))` of the subtour constraint.
pub fn subtour_scale(n: usize, m: usize) -> Rational {
    let (n, m) = (n as i64, m as i64);
    ratio(n - 1, 2 * (m * (n - m) + 1 - n))
}

/// `h_U(x) = c (Σ_{cut(U)} x - 2)` scaled to average 1.
pub fn make_subtour(n: usize, u: &[Vertex]) -> Result<LinearFunctional> {
    let member = vertex_set(n, u)?;
    let m = u.len();
    if m < 2 || m + 2 > n {
        return Err(Error::invalid(alloc::format!(
            "subtour set needs 2 <= |U| <= n-2, got |U| = {m} with n = {n}"
        )));
    }
    let c = subtour_scale(n, m);
    let mut f = LinearFunctional::zero(n);
    f.constant = -(int(2) * &c);
    for (i, coeff) in f.coeffs.iter_mut().enumerate() {
        let e = Edge::from_lex_index(n, i);
        if member[e.u() as usize] != member[e.v() as usize] {
            *coeff = c.clone();
        }
    }
    Ok(f)
}

/// The constant function 1 written linearly: `1/n` on every edge.
pub fn make_ones(n: usize) -> Result<LinearFunctional> {
    if n < 3 {
        return Err(Error::invalid("make_ones needs n >= 3"));
    }
    let mut f = LinearFunctional::zero(n);
    let share = ratio(1, n as i64);
    for c in f.coeffs.iter_mut() {
        *c = share.clone();
    }
    Ok(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `x_e <= 1`, as `((n-1)/(n-3)) (1 - x_e)`.
    Upper,
    /// `x_e >= 0`, as `((n-1)/2) x_e`.
    Lower,
}

pub fn make_edge_bound(n: usize, e: Edge, side: Side) -> Result<LinearFunctional> {
    if n < 3 || !e.is_valid_for(n) {
        return Err(Error::invalid(alloc::format!("edge {e} not in K_{n}")));
    }
    let mut f = LinearFunctional::zero(n);
    let idx = e.lex_index(n);
    match side {
        Side::Upper => {
            if n == 3 {
                return Err(Error::invalid(
                    "upper edge bound is constant on K_3 and cannot be normalized",
                ));
            }
            let s = ratio(n as i64 - 1, n as i64 - 3);
            f.coeffs[idx] = -s.clone();
            f.constant = s;
        }
        Side::Lower => {
            f.coeffs[idx] = ratio(n as i64 - 1, 2);
        }
    }
    Ok(f)
}

/// Validates `(U, F)` for the 2-matching constraint and returns `U`'s
/// membership table.
fn check_two_matching(n: usize, u: &[Vertex], matching: &[Edge]) -> Result<Vec<bool>> {
    let member = vertex_set(n, u)?;
    if u.is_empty() || u.len() >= n {
        return Err(Error::invalid("2-matching needs a nonempty proper U"));
    }
    let s = matching.len();
    if s < 3 || s.is_multiple_of(2) {
        return Err(Error::invalid(alloc::format!(
            "|F| must be odd and at least 3, got {s}"
        )));
    }
    let mut used = vec![false; n + 1];
    for e in matching {
        if !e.is_valid_for(n) {
            return Err(Error::invalid(alloc::format!("edge {e} outside K_{n}")));
        }
        for x in [e.u(), e.v()] {
            if used[x as usize] {
                return Err(Error::invalid(alloc::format!("F is not a matching at vertex {x}")));
            }
            used[x as usize] = true;
        }
        if member[e.u() as usize] == member[e.v() as usize] {
            return Err(Error::invalid(alloc::format!(
                "F edge {e} must have exactly one endpoint in U"
            )));
        }
    }
    Ok(member)
}

/// `c (Σ_{cut(U) \ F} x - Σ_F x - 1 + |F|)` scaled to average 1.
pub fn make_two_matching(n: usize, u: &[Vertex], matching: &[Edge]) -> Result<LinearFunctional> {
    let member = check_two_matching(n, u, matching)?;
    let mut g = LinearFunctional::zero(n);
    g.constant = int(matching.len() as i64 - 1);
    for (i, coeff) in g.coeffs.iter_mut().enumerate() {
        let e = Edge::from_lex_index(n, i);
        if member[e.u() as usize] != member[e.v() as usize] {
            *coeff = if matching.contains(&e) {
                -Rational::one()
            } else {
                Rational::one()
            };
        }
    }
    let avg = g.average_on_x();
    Ok(g.scaled(&avg.recip()))
}

/// Parameterized description of a functional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FacetSpec {
    Subtour {
        n: usize,
        u: Vec<Vertex>,
    },
    EdgeUpper {
        n: usize,
        edge: Edge,
    },
    EdgeLower {
        n: usize,
        edge: Edge,
    },
    TwoMatching {
        n: usize,
        u: Vec<Vertex>,
        matching: Vec<Edge>,
    },
    Ones {
        n: usize,
    },
    Explicit(LinearFunctional),
    Combination(Vec<(Rational, FacetSpec)>),
}

impl FacetSpec {
    pub fn n(&self) -> Option<usize> {
        match self {
            FacetSpec::Subtour { n, .. }
            | FacetSpec::EdgeUpper { n, .. }
            | FacetSpec::EdgeLower { n, .. }
            | FacetSpec::TwoMatching { n, .. }
            | FacetSpec::Ones { n } => Some(*n),
            FacetSpec::Explicit(f) => Some(f.n()),
            FacetSpec::Combination(terms) => terms.first().and_then(|(_, t)| t.n()),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            FacetSpec::Subtour { .. } => "subtour",
            FacetSpec::EdgeUpper { .. } => "edge-upper",
            FacetSpec::EdgeLower { .. } => "edge-lower",
            FacetSpec::TwoMatching { .. } => "two-matching",
            FacetSpec::Ones { .. } => "ones",
            FacetSpec::Explicit(_) => "explicit",
            FacetSpec::Combination(_) => "combination",
        }
    }

    pub fn build(&self) -> Result<LinearFunctional> {
        match self {
            FacetSpec::Subtour { n, u } => make_subtour(*n, u),
            FacetSpec::EdgeUpper { n, edge } => make_edge_bound(*n, *edge, Side::Upper),
            FacetSpec::EdgeLower { n, edge } => make_edge_bound(*n, *edge, Side::Lower),
            FacetSpec::TwoMatching { n, u, matching } => make_two_matching(*n, u, matching),
            FacetSpec::Ones { n } => make_ones(*n),
            FacetSpec::Explicit(f) => Ok(f.clone()),
            FacetSpec::Combination(terms) => {
                let mut iter = terms.iter();
                let (s0, t0) = iter
                    .next()
                    .ok_or_else(|| Error::invalid("combination needs at least one term"))?;
                let mut acc = t0.build()?.scaled(s0);
                for (s, t) in iter {
                    let g = t.build()?;
                    acc = combine(&Rational::one(), &acc, s, &g)?;
                }
                Ok(acc)
            }
        }
    }

    /// `scale_f · f + scale_g · g` as a spec.
    pub fn pair(a: Rational, f: FacetSpec, b: Rational, g: FacetSpec) -> FacetSpec {
        FacetSpec::Combination(vec![(a, f), (b, g)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::enumerate_cycles;
    use crate::Limits;

    fn e(a: Vertex, b: Vertex) -> Edge {
        Edge::new(a, b).unwrap()
    }

    fn enum_avg(f: &LinearFunctional) -> Rational {
        let cs = enumerate_cycles(f.n(), &Limits::default()).unwrap();
        let total: Rational = cs.iter().map(|c| f.evaluate(c)).sum();
        total / int(cs.len() as i64)
    }

    #[test]
    fn subtour_example() {
        let f = make_subtour(6, &[1, 2, 3]).unwrap();
        assert_eq!(f.constant(), &ratio(-5, 4));
        let cut: Vec<_> = f.coeffs().iter().filter(|c| !c.is_zero()).collect();
        assert_eq!(cut.len(), 9);
        assert!(cut.iter().all(|c| **c == ratio(5, 8)));
        assert_eq!(f.average_on_x(), int(1));
        // Oracle: average of the raw cut form over the 60 tours of K_6.
        let raw = f.scaled(&ratio(8, 5));
        assert_eq!(enum_avg(&raw), ratio(8, 5));
    }

    #[test]
    fn subtour_raw_average_closed_form() {
        for n in 5..=9usize {
            for m in 2..=n - 2 {
                let u: Vec<Vertex> = (1..=m as Vertex).collect();
                let f = make_subtour(n, &u).unwrap();
                let raw = f.scaled(&subtour_scale(n, m).recip());
                let (ni, mi) = (n as i64, m as i64);
                assert_eq!(raw.average_on_x(), ratio(2 * (mi * (ni - mi) + 1 - ni), ni - 1));
            }
        }
    }

    #[test]
    fn subtour_rejects_bad_sets() {
        assert!(make_subtour(6, &[1]).is_err());
        assert!(make_subtour(6, &[1, 2, 3, 4, 5]).is_err());
        assert!(make_subtour(6, &[1, 1, 2]).is_err());
        assert!(make_subtour(6, &[1, 7]).is_err());
    }

    #[test]
    fn subtour_complement_is_same_functional() {
        assert_eq!(
            make_subtour(8, &[1, 2, 3]).unwrap(),
            make_subtour(8, &[4, 5, 6, 7, 8]).unwrap()
        );
    }

    #[test]
    fn ones_and_edge_bounds() {
        let one = make_ones(6).unwrap();
        assert!(one.coeffs().iter().all(|c| *c == ratio(1, 6)));
        assert_eq!(make_ones(7).unwrap().average_on_x(), int(1));
        for c in enumerate_cycles(5, &Limits::default()).unwrap() {
            assert_eq!(make_ones(5).unwrap().evaluate(&c), int(1));
        }
        let lo = make_edge_bound(5, e(1, 2), Side::Lower).unwrap();
        assert_eq!(lo.coeff(e(1, 2)), &int(2));
        assert!(lo.constant().is_zero());
        let up = make_edge_bound(5, e(1, 2), Side::Upper).unwrap();
        assert_eq!(up.constant(), &int(2));
        assert_eq!(up.coeff(e(1, 2)), &int(-2));
        assert_eq!(enum_avg(&lo), int(1));
        assert_eq!(enum_avg(&up), int(1));
        let c = HamiltonianCycle::canonical(7).unwrap();
        let lo7 = make_edge_bound(7, e(1, 2), Side::Lower).unwrap();
        assert_eq!(lo7.evaluate(&c), int(3));
        assert!(make_edge_bound(3, e(1, 2), Side::Upper).is_err());
    }

    #[test]
    fn two_matching_example() {
        let f = make_two_matching(7, &[1, 2, 3], &[e(1, 4), e(2, 5), e(3, 6)]).unwrap();
        // The raw form averages to 4, so c = 1/4.
        assert_eq!(f.constant(), &ratio(2, 4));
        assert_eq!(enum_avg(&f), int(1));
        let tour = HamiltonianCycle::from_order(&[4, 1, 2, 5, 6, 3, 7]).unwrap();
        assert!(f.evaluate(&tour).is_zero());
    }

    #[test]
    fn two_matching_validation() {
        let bad_parity = make_two_matching(8, &[1, 2, 3, 4], &[e(1, 5), e(2, 6), e(3, 7), e(4, 8)]);
        assert!(bad_parity.is_err());
        let not_matching = make_two_matching(8, &[1, 2, 3], &[e(1, 5), e(2, 5), e(3, 6)]);
        assert!(not_matching.is_err());
        let inside = make_two_matching(8, &[1, 2, 3], &[e(1, 2), e(3, 6), e(4, 7)]);
        assert!(inside.is_err());
    }

    #[test]
    fn combine_is_affine() {
        let h = make_subtour(7, &[1, 2, 3]).unwrap();
        let one = make_ones(7).unwrap();
        assert_eq!(combine(&int(1), &h, &int(0), &one).unwrap(), h);
        assert_eq!(combine(&int(0), &h, &int(1), &one).unwrap(), one);
        let mix = combine(&ratio(3, 7), &h, &ratio(4, 7), &one).unwrap();
        assert_eq!(mix.average_on_x(), int(1));
        assert!(combine(&int(1), &h, &int(1), &make_ones(6).unwrap()).is_err());
    }

    #[test]
    fn average_examples() {
        let f = LinearFunctional::from_parts(9, Rational::zero(), [(e(1, 2), int(1))]).unwrap();
        assert_eq!(f.average_on_x(), ratio(1, 4));
    }

    #[test]
    fn linearized_agrees_on_cycles() {
        let f = make_edge_bound(6, e(2, 4), Side::Upper).unwrap();
        let g = f.linearized();
        assert!(g.constant().is_zero());
        for c in enumerate_cycles(6, &Limits::default()).unwrap() {
            assert_eq!(f.evaluate(&c), g.evaluate(&c));
        }
    }

    #[test]
    fn combination_spec_builds() {
        let spec = FacetSpec::pair(
            int(3),
            FacetSpec::Subtour { n: 8, u: vec![1, 2, 3] },
            int(-2),
            FacetSpec::Ones { n: 8 },
        );
        let f = spec.build().unwrap();
        assert_eq!(f.average_on_x(), int(1));
        assert_eq!(spec.n(), Some(8));
    }
}
