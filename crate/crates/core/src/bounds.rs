//! Metric constants `a_k = n/k + α_k`: every `f ∈ P_k` satisfies
//! `f(y) >= 1 - a_k` on every cycle `y`.
//!
//! The constants come from summing the squared "every other edge"
//! polynomials `p_{I,Γ}` over a fixed cycle. The sums take two values,
//! `b_k` (edge off the cycle) and `c_k` (edge on it), with closed forms
//! `f_1, f_2` for even `n` and `g_1, g_2` for odd `n`.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::combinatorics::{binomial, factorial, pow2};
use crate::cycles::{cycle_masks, Edge, EdgeMask, HamiltonianCycle, Vertex};
use crate::functionals::LinearFunctional;
use crate::rational::{from_big, int, ratio, Rational};
use crate::{Error, Limits, Result};

/// `⌊n/2⌋` pairwise disjoint edges of a cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EoSubset {
    pub edges: Vec<Edge>,
    /// The vertex left uncovered (odd `n` only).
    pub omitted: Option<Vertex>,
}

impl EoSubset {
    pub fn mask(&self) -> EdgeMask {
        EdgeMask::from_edges(&self.edges)
    }
}

/// The two alternating classes (even `n`) or the `n` subsets `Γ_v`
/// avoiding one vertex `v` each (odd `n`, ordered by `v`).
pub fn eo_subsets(y: &HamiltonianCycle) -> Vec<EoSubset> {
    let order = y.order();
    let n = order.len();
    let edge_at = |i: usize| Edge::new(order[i % n], order[(i + 1) % n]).expect("tour edge");
    if n.is_multiple_of(2) {
        return (0..2)
            .map(|start| EoSubset {
                edges: (0..n / 2).map(|t| edge_at(start + 2 * t)).collect(),
                omitted: None,
            })
            .collect();
    }
    let mut out: Vec<EoSubset> = (0..n)
        .map(|i| EoSubset {
            edges: (0..n / 2).map(|t| edge_at(i + 1 + 2 * t)).collect(),
            omitted: Some(order[i]),
        })
        .collect();
    out.sort_by_key(|g| g.omitted);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: usize) -> Parity {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if n < 4 {
        return Err(Error::invalid("bounds need n >= 4"));
    }
    if k == 0 || k > n / 2 {
        return Err(Error::invalid(alloc::format!(
            "need 1 <= k <= {} for n = {n}, got k = {k}",
            n / 2
        )));
    }
    Ok(())
}

/// `C(top, j) · 2^j · fact`, zero when `j < 0` or `j > top`.
fn term(top: i64, j: i64, fact: &BigUint) -> BigUint {
    if j < 0 {
        return BigUint::zero();
    }
    binomial(top, j) * pow2(j as u64) * fact
}

/// Subsets meeting both end-classes of the fixed edge, summed.
fn inner(top: i64, k: i64, t: &BigUint) -> BigUint {
    term(top, k - 2, t) + 2u32 * term(top, k - 1, t) + term(top, k, t)
}

/// `(f_1, f_2)` for even `n`.
pub fn f_counts(n: usize, k: usize) -> Result<(BigUint, BigUint)> {
    check_k(n, k)?;
    if !n.is_multiple_of(2) {
        return Err(Error::invalid("f counts need even n"));
    }
    let (h, ki) = ((n / 2) as i64, k as i64);
    let t = factorial((n - k - 2) as u64);
    let t1 = factorial((n - k - 1) as u64);
    let f1 = 2u32 * inner(h - 2, ki, &t);
    let f2 = term(h - 1, ki - 1, &t1) + term(h - 1, ki, &t) + inner(h - 2, ki, &t);
    Ok((f1, f2))
}

/// `(g_1, g_2)` for odd `n`.
pub fn g_counts(n: usize, k: usize) -> Result<(BigUint, BigUint)> {
    check_k(n, k)?;
    if n % 2 != 1 {
        return Err(Error::invalid("g counts need odd n"));
    }
    let (h, ki) = (((n - 1) / 2) as i64, k as i64);
    let t = factorial((n - k - 2) as u64);
    let t1 = factorial((n - k - 1) as u64);
    let b = inner(h - 2, ki, &t);
    let c = term(h - 1, ki - 1, &t) + term(h - 1, ki, &t);
    let g1 = BigUint::from(n - 2) * &b + 2u32 * &c;
    let g2 = BigUint::from(h as u64) * (term(h - 1, ki - 1, &t1) + term(h - 1, ki, &t))
        + BigUint::from((h - 1) as u64) * b
        + 2u32 * c;
    Ok((g1, g2))
}

/// `(b_k, c_k)` for either parity.
pub fn counts(n: usize, k: usize) -> Result<(BigUint, BigUint)> {
    match Parity::of(n) {
        Parity::Even => f_counts(n, k),
        Parity::Odd => g_counts(n, k),
    }
}

/// `-b(n-1) / (2(c-b))`.
pub fn lemma_bound(b: &BigInt, c: &BigInt, n: usize) -> Result<Rational> {
    if !b.is_positive() || b >= c {
        return Err(Error::invalid("need 0 < b < c"));
    }
    Ok(-from_big(b * BigInt::from(n - 1)) / from_big(2 * (c - b)))
}

/// Closed form of the lemma bound, by parity.
pub fn proposition_bound(n: usize, k: usize) -> Result<Rational> {
    check_k(n, k)?;
    let (ni, ki) = (n as i64, k as i64);
    let den = match Parity::of(n) {
        Parity::Even => ni * ni - ki * ni - 3 * ni + ki + 3,
        Parity::Odd => ni * ni - ni * ki - 4 * ni + 4 + 2 * ki,
    };
    Ok(ratio(-ni, ki) + int(1) - ratio(ni * (ki - 1), ki * den))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub n: usize,
    pub k: usize,
    pub parity: Parity,
    /// `f_1` or `g_1`.
    pub b: BigUint,
    /// `f_2` or `g_2`.
    pub c: BigUint,
    /// Lower bound on `f(y)` over `P_k`.
    pub bound: Rational,
    /// `proposition_bound(n, k)`, equal to `bound`.
    pub closed_form: Rational,
    pub a_k: Rational,
    pub alpha_k: Rational,
}

impl BoundReport {
    pub fn bounds_agree(&self) -> bool {
        self.bound == self.closed_form
    }

    /// `|α_k| <= 10/n`.
    pub fn alpha_within(&self) -> bool {
        self.alpha_k.abs() <= ratio(10, self.n as i64)
    }
}

pub fn bound_report(n: usize, k: usize) -> Result<BoundReport> {
    let (b, c) = counts(n, k)?;
    let bound = lemma_bound(&b.clone().into(), &c.clone().into(), n)?;
    let closed_form = proposition_bound(n, k)?;
    let a_k = int(1) - &bound;
    let alpha_k = &a_k - ratio(n as i64, k as i64);
    Ok(BoundReport {
        n,
        k,
        parity: Parity::of(n),
        b,
        c,
        bound,
        closed_form,
        a_k,
        alpha_k,
    })
}

/// The constants of the metric approximation theorem (`n >= 9`).
pub fn theorem1_constants(n: usize, k: usize) -> Result<BoundReport> {
    if n < 9 {
        return Err(Error::invalid("the metric constants are stated for n >= 9"));
    }
    bound_report(n, k)
}

/// Per-edge sums `Σ_{I,Γ} #{x ⊇ I ∪ {e}}` over a fixed cycle `y`, in lex
/// edge order, by enumeration.
pub fn bound_oracle_all(n: usize, k: usize, y: &HamiltonianCycle, limits: &Limits) -> Result<Vec<BigUint>> {
    check_k(n, k)?;
    if y.n() != n {
        return Err(Error::invalid("cycle is on a different vertex count"));
    }
    let gammas: Vec<EdgeMask> = eo_subsets(y).iter().map(EoSubset::mask).collect();
    let edges = crate::cycles::all_edges(n);
    let mut totals = alloc::vec![0u64; edges.len()];
    for x in cycle_masks(n, limits)? {
        let s: u64 = gammas
            .iter()
            .map(|g| {
                let common = (x.0 & g.0).count_ones() as i64;
                u64::try_from(binomial(common, k as i64)).expect("small")
            })
            .sum();
        if s == 0 {
            continue;
        }
        for (i, e) in edges.iter().enumerate() {
            if x.contains(*e) {
                totals[i] += s;
            }
        }
    }
    Ok(totals.into_iter().map(BigUint::from).collect())
}

/// Brute-force value of the sum for one edge.
pub fn bound_oracle(n: usize, k: usize, y: &HamiltonianCycle, edge: Edge, limits: &Limits) -> Result<BigUint> {
    if !edge.is_valid_for(n) {
        return Err(Error::invalid("edge is not in K_n"));
    }
    Ok(bound_oracle_all(n, k, y, limits)?.swap_remove(edge.lex_index(n)))
}

/// Distinct oracle values on edges off and on the cycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleValues {
    pub off_cycle: Vec<BigUint>,
    pub on_cycle: Vec<BigUint>,
}

impl OracleValues {
    /// Exactly one value per class, as the lemma needs.
    pub fn two_valued(&self) -> Option<(BigUint, BigUint)> {
        match (self.off_cycle.as_slice(), self.on_cycle.as_slice()) {
            ([b], [c]) => Some((b.clone(), c.clone())),
            _ => None,
        }
    }
}

pub fn oracle_values(n: usize, k: usize, y: &HamiltonianCycle, limits: &Limits) -> Result<OracleValues> {
    let all = bound_oracle_all(n, k, y, limits)?;
    let mut off = Vec::new();
    let mut on = Vec::new();
    for (i, v) in all.into_iter().enumerate() {
        let target = if y.contains(Edge::from_lex_index(n, i)) {
            &mut on
        } else {
            &mut off
        };
        if !target.contains(&v) {
            target.push(v);
        }
    }
    off.sort();
    on.sort();
    Ok(OracleValues {
        off_cycle: off,
        on_cycle: on,
    })
}

/// `(n-1)/2 - f(y) = Σ_{e ∉ y} f(e)` for an average-1 functional, with the
/// constant term spread over the edges.
pub fn equation_one_holds(f: &LinearFunctional, y: &HamiltonianCycle) -> bool {
    let n = f.n();
    let g = f.linearized();
    let lhs = ratio(n as i64 - 1, 2) - g.evaluate(y);
    let rhs = crate::cycles::all_edges(n)
        .into_iter()
        .filter(|e| !y.contains(*e))
        .fold(Rational::zero(), |acc, e| acc + g.coeff(e));
    lhs == rhs
}
