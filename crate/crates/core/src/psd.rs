//! Positive-semidefiniteness decisions and boundary certificates.
//!
//! The exact test is a symmetric LDLᵀ elimination with full diagonal
//! pivoting in rational arithmetic; it tolerates the rank deficiency every
//! cycle moment matrix has. A NOT_PSD answer always carries a rational
//! witness `v` with `vᵀ A v < 0`, checked against the original matrix.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::cycles::{Edge, EdgeMask, Vertex};
use crate::functionals::{FacetSpec, LinearFunctional};
use crate::linalg::{jacobi_eigen, symmetric_eigenvalues, SquareMatrix, JACOBI_MAX_DIM};
use crate::moment::{
    closed_form_entries, moment_matrix_closed_form_k1, moment_matrix_enumerated, quadratic_form_value,
    quadratic_form_value_ground, zero_one_certificate, AffineFunction, GroundSet, MonomialIndex, Space,
};
use crate::rational::{from_big, from_f64, int, to_pq, Rational};
use crate::{Error, Limits, Result};

/// Relative tolerance of the floating-point test.
pub const DEFAULT_FLOAT_TOL: f64 = 1e-10;

/// One factor of a certificate: `x_i` or `1 - x_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Literal {
    Var(usize),
    Complement(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    MonomialProduct,
    OneMinusEdgeProduct,
    ZeroOneProduct,
}

impl CertificateKind {
    pub fn name(self) -> &'static str {
        match self {
            CertificateKind::MonomialProduct => "monomial-product",
            CertificateKind::OneMinusEdgeProduct => "one-minus-edge-product",
            CertificateKind::ZeroOneProduct => "zero-one-product",
        }
    }
}

/// A product of literals; takes only the values 0 and 1 on 0/1 points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificatePolynomial {
    kind: CertificateKind,
    space: Space,
    literals: Vec<Literal>,
}

impl CertificatePolynomial {
    /// `Π_{e ∈ edges} x_e`; the empty product is the constant 1.
    pub fn monomial(n: usize, edges: &[Edge]) -> Self {
        CertificatePolynomial {
            kind: CertificateKind::MonomialProduct,
            space: Space::Edges { n },
            literals: edges.iter().map(|e| Literal::Var(e.lex_index(n))).collect(),
        }
    }

    /// `Π_{e ∈ edges} (1 - x_e)`.
    pub fn one_minus_edges(n: usize, edges: &[Edge]) -> Self {
        CertificatePolynomial {
            kind: CertificateKind::OneMinusEdgeProduct,
            space: Space::Edges { n },
            literals: edges.iter().map(|e| Literal::Complement(e.lex_index(n))).collect(),
        }
    }

    /// `Π_{y_i = 0} (1 - x_i) Π_{y_j = 1} x_j` in coordinate order.
    pub fn zero_one_product(y: &[Rational]) -> Self {
        CertificatePolynomial {
            kind: CertificateKind::ZeroOneProduct,
            space: Space::Coordinates { d: y.len() },
            literals: y
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    if v.is_zero() {
                        Literal::Complement(i)
                    } else {
                        Literal::Var(i)
                    }
                })
                .collect(),
        }
    }

    pub fn kind(&self) -> CertificateKind {
        self.kind
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn degree(&self) -> usize {
        self.literals.len()
    }

    /// Edges of the positive literals, for certificates over `K_n`.
    pub fn edges(&self) -> Vec<Edge> {
        match self.space {
            Space::Edges { n } => self
                .literals
                .iter()
                .map(|l| match *l {
                    Literal::Var(i) | Literal::Complement(i) => Edge::from_lex_index(n, i),
                })
                .collect(),
            Space::Coordinates { .. } => Vec::new(),
        }
    }

    /// Value on a cycle given by its edge mask.
    pub fn holds_on_mask(&self, x: EdgeMask) -> bool {
        let n = match self.space {
            Space::Edges { n } => n,
            Space::Coordinates { .. } => return false,
        };
        self.literals.iter().all(|l| match *l {
            Literal::Var(i) => x.contains(Edge::from_lex_index(n, i)),
            Literal::Complement(i) => !x.contains(Edge::from_lex_index(n, i)),
        })
    }

    /// Value at an arbitrary point of coordinate space.
    pub fn evaluate_point(&self, x: &[Rational]) -> Rational {
        self.literals.iter().fold(Rational::one(), |acc, l| match *l {
            Literal::Var(i) => acc * &x[i],
            Literal::Complement(i) => acc * (Rational::one() - &x[i]),
        })
    }

    /// Monomial expansion with integer coefficients, sorted by monomial.
    pub fn expand(&self) -> Vec<(MonomialIndex, BigInt)> {
        let vars: Vec<usize> = self
            .literals
            .iter()
            .filter_map(|l| match *l {
                Literal::Var(i) => Some(i),
                Literal::Complement(_) => None,
            })
            .collect();
        let comps: Vec<usize> = self
            .literals
            .iter()
            .filter_map(|l| match *l {
                Literal::Complement(i) => Some(i),
                Literal::Var(_) => None,
            })
            .collect();
        let mut terms: Vec<(MonomialIndex, BigInt)> = Vec::with_capacity(1 << comps.len());
        for subset in 0u64..(1u64 << comps.len()) {
            let mut m = vars.clone();
            let mut sign = 1i32;
            for (b, &c) in comps.iter().enumerate() {
                if subset >> b & 1 == 1 {
                    m.push(c);
                    sign = -sign;
                }
            }
            terms.push((MonomialIndex::new(m), BigInt::from(sign)));
        }
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(MonomialIndex, BigInt)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        out
    }

    pub fn label(&self) -> String {
        if self.literals.is_empty() {
            return "1".into();
        }
        let var = |i: usize| match self.space {
            Space::Edges { n } => alloc::format!("x({})", Edge::from_lex_index(n, i)),
            Space::Coordinates { .. } => alloc::format!("x{}", i + 1),
        };
        let parts: Vec<String> = self
            .literals
            .iter()
            .map(|l| match *l {
                Literal::Var(i) => var(i),
                Literal::Complement(i) => alloc::format!("(1-{})", var(i)),
            })
            .collect();
        parts.join("*")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsdStatus {
    Psd,
    NotPsd,
}

impl PsdStatus {
    pub fn name(self) -> &'static str {
        match self {
            PsdStatus::Psd => "PSD",
            PsdStatus::NotPsd => "NOT_PSD",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    Float,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PsdVerdict {
    pub status: PsdStatus,
    pub method: Method,
    /// Rational `v` with `vᵀ A v < 0`, when one was found.
    pub witness: Option<Vec<Rational>>,
    /// `vᵀ A v` for the witness.
    pub witness_value: Option<Rational>,
    /// Exact rank (exact path, PSD case).
    pub rank: Option<usize>,
    pub min_eigenvalue: Option<f64>,
    pub tolerance: Option<f64>,
}

impl PsdVerdict {
    pub fn is_psd(&self) -> bool {
        self.status == PsdStatus::Psd
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Exact up to the exact-dimension cap, floating point above it.
    Auto,
    Exact,
    Float,
}

/// Pivot index, pivot value and `(row, w_ip)` pairs of one elimination step.
type Step = (usize, BigInt, Vec<(usize, BigInt)>);

/// Exact PSD decision by pivoted LDLᵀ.
///
/// Runs fraction-free (Bareiss) on the integer matrix `D·A`: after each
/// step the active block is the Schur complement times the last pivot, so
/// divisions are exact and no gcd is ever taken. Multipliers `l_ip` are the
/// ratios `w_ip / w_pp` of one step and need no rescaling.
pub fn is_psd_exact(a: &SquareMatrix<Rational>) -> PsdVerdict {
    let dim = a.dim();
    let den = a.rows().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut w: Vec<Vec<BigInt>> = a
        .rows()
        .map(|r| r.iter().map(|x| x.numer() * (&den / x.denom())).collect())
        .collect();
    let mut active: Vec<usize> = (0..dim).collect();
    let mut prev = BigInt::one();
    let mut steps: Vec<Step> = Vec::new();

    let reduced_witness = loop {
        if active.is_empty() {
            break None;
        }
        let most_negative = active
            .iter()
            .copied()
            .filter(|&i| w[i][i].is_negative())
            .min_by(|&i, &j| w[i][i].cmp(&w[j][j]).then(i.cmp(&j)));
        if let Some(i) = most_negative {
            break Some(vec![(i, Rational::one())]);
        }
        let pos = (0..active.len())
            .max_by(|&x, &y| w[active[x]][active[x]].cmp(&w[active[y]][active[y]]).then(y.cmp(&x)))
            .expect("nonempty");
        let p = active[pos];
        if w[p][p].is_zero() {
            let mut found = None;
            'outer: for (x, &i) in active.iter().enumerate() {
                for &j in &active[x + 1..] {
                    if !w[i][j].is_zero() {
                        found = Some((i, j));
                        break 'outer;
                    }
                }
            }
            match found {
                Some((i, j)) => {
                    let s = if w[i][j].is_positive() { int(-1) } else { int(1) };
                    break Some(vec![(i, Rational::one()), (j, s)]);
                }
                None => break None,
            }
        }
        active.remove(pos);
        let pv = w[p][p].clone();
        let col: Vec<(usize, BigInt)> = active.iter().map(|&i| (i, w[i][p].clone())).collect();
        for (x, (i, ci)) in col.iter().enumerate() {
            for (j, cj) in &col[x..] {
                let v = (&pv * &w[*i][*j] - ci * cj) / &prev;
                w[*j][*i] = v.clone();
                w[*i][*j] = v;
            }
        }
        prev = pv.clone();
        steps.push((p, pv, col.into_iter().filter(|(_, c)| !c.is_zero()).collect()));
    };

    match reduced_witness {
        None => PsdVerdict {
            status: PsdStatus::Psd,
            method: Method::Exact,
            witness: None,
            witness_value: None,
            rank: Some(steps.len()),
            min_eigenvalue: None,
            tolerance: None,
        },
        Some(seed) => {
            let mut v = vec![Rational::zero(); dim];
            for (i, x) in seed {
                v[i] = x;
            }
            for (p, pv, col) in steps.iter().rev() {
                let mut acc = Rational::zero();
                for (j, c) in col {
                    if !v[*j].is_zero() {
                        acc += from_big(c.clone()) * &v[*j];
                    }
                }
                v[*p] = -acc / from_big(pv.clone());
            }
            let value = a.quad_form(&v);
            assert!(value.is_negative(), "LDLᵀ witness failed exact re-verification");
            PsdVerdict {
                status: PsdStatus::NotPsd,
                method: Method::Exact,
                witness: Some(v),
                witness_value: Some(value),
                rank: None,
                min_eigenvalue: None,
                tolerance: None,
            }
        }
    }
}

/// Floating-point PSD decision: `λ_min >= -tol · max(1, ‖A‖_∞)`.
pub fn is_psd_float_f64(a: &SquareMatrix<f64>, tol: f64) -> PsdVerdict {
    let scale = a.norm_inf().max(1.0);
    let lmin = symmetric_eigenvalues(a).first().copied().unwrap_or(0.0);
    PsdVerdict {
        status: if lmin >= -tol * scale {
            PsdStatus::Psd
        } else {
            PsdStatus::NotPsd
        },
        method: Method::Float,
        witness: None,
        witness_value: None,
        rank: None,
        min_eigenvalue: Some(lmin),
        tolerance: Some(tol),
    }
}

/// Floating-point decision on an exact matrix. A NOT_PSD answer gets a
/// rational witness from the bottom eigenvector when that vector passes the
/// exact check.
pub fn is_psd_float(a: &SquareMatrix<Rational>, tol: f64) -> PsdVerdict {
    let af = a.to_f64();
    let mut verdict = is_psd_float_f64(&af, tol);
    if verdict.status == PsdStatus::NotPsd && a.dim() <= JACOBI_MAX_DIM {
        let eig = jacobi_eigen(&af);
        let v: Vec<Rational> = eig.vectors[0].iter().map(|x| from_f64(*x)).collect();
        let value = a.quad_form(&v);
        if value.is_negative() {
            verdict.witness = Some(v);
            verdict.witness_value = Some(value);
        }
    }
    verdict
}

pub fn decide(a: &SquareMatrix<Rational>, mode: Mode, limits: &Limits) -> Result<PsdVerdict> {
    let exact_ok = a.dim() <= limits.max_exact_dim;
    match mode {
        Mode::Exact if !exact_ok => Err(Error::ResourceLimit {
            what: "exact PSD dimension",
            requested: a.dim() as u64,
            cap: limits.max_exact_dim as u64,
        }),
        Mode::Exact => Ok(is_psd_exact(a)),
        Mode::Auto if exact_ok => Ok(is_psd_exact(a)),
        _ => Ok(is_psd_float(a, DEFAULT_FLOAT_TOL)),
    }
}

fn require_average_one(f: &LinearFunctional) -> Result<()> {
    let avg = f.average_on_x();
    if !avg.is_one() {
        return Err(Error::invalid(alloc::format!(
            "functional must have average 1 over the cycles, found {}",
            to_pq(&avg)
        )));
    }
    Ok(())
}

/// Membership in `P_1` from the closed-form moment matrix.
pub fn membership_p1(f: &LinearFunctional, mode: Mode, limits: &Limits) -> Result<PsdVerdict> {
    require_average_one(f)?;
    let dim = crate::cycles::edge_count(f.n()) + 1;
    let float_only = mode == Mode::Float || (mode == Mode::Auto && dim > limits.max_exact_dim);
    if float_only && dim > JACOBI_MAX_DIM {
        // Large instances: assemble directly in floating point.
        let (_, m) = closed_form_entries::<f64>(f, 1, limits)?;
        return Ok(is_psd_float_f64(&m, DEFAULT_FLOAT_TOL));
    }
    let m = moment_matrix_closed_form_k1(f, limits)?;
    decide(&m.entries, mode, limits)
}

/// Membership in `P_k` from the enumerated moment matrix.
pub fn membership_pk_enumerated(f: &LinearFunctional, k: usize, mode: Mode, limits: &Limits) -> Result<PsdVerdict> {
    require_average_one(f)?;
    let m = moment_matrix_enumerated(f, k, limits)?;
    decide(&m.entries, mode, limits)
}

fn ordered_edge(a: Vertex, b: Vertex) -> Edge {
    Edge::new(a, b).expect("distinct vertices")
}

/// The 0/1-valued polynomial on which a facet functional's form vanishes.
pub fn boundary_certificate(spec: &FacetSpec) -> Result<CertificatePolynomial> {
    // Building validates the specification.
    spec.build()?;
    match spec {
        FacetSpec::EdgeUpper { n, edge } => Ok(CertificatePolynomial::monomial(*n, &[*edge])),
        FacetSpec::EdgeLower { n, edge } => Ok(CertificatePolynomial::one_minus_edges(*n, &[*edge])),
        FacetSpec::Subtour { n, u } => {
            let path: Vec<Edge> = u.windows(2).map(|w| ordered_edge(w[0], w[1])).collect();
            Ok(CertificatePolynomial::monomial(*n, &path))
        }
        FacetSpec::TwoMatching { n, u, matching } => {
            let in_u = |x: Vertex| u.contains(&x);
            let mut ell: Vec<Vertex> = Vec::with_capacity(u.len());
            let mut edges: Vec<Edge> = Vec::new();
            for e in matching {
                let (inside, _) = if in_u(e.u()) { (e.u(), e.v()) } else { (e.v(), e.u()) };
                ell.push(inside);
                edges.push(*e);
            }
            let rest: Vec<Vertex> = u.iter().copied().filter(|x| !ell.contains(x)).collect();
            ell.extend(rest);
            let s = (matching.len() - 1) / 2;
            for j in 0..s {
                edges.push(ordered_edge(ell[2 * j], ell[2 * j + 1]));
            }
            for k in 2 * s..ell.len() - 1 {
                edges.push(ordered_edge(ell[k], ell[k + 1]));
            }
            Ok(CertificatePolynomial::monomial(*n, &edges))
        }
        _ => Err(Error::invalid(alloc::format!(
            "no boundary certificate for functional kind {}",
            spec.kind()
        ))),
    }
}

/// True iff `q_f(p) = 0` exactly.
pub fn verify_certificate(f: &LinearFunctional, p: &CertificatePolynomial, limits: &Limits) -> Result<bool> {
    Ok(quadratic_form_value(f, p, limits)?.is_zero())
}

#[derive(Clone, Debug, PartialEq)]
pub enum CollapseVerdict {
    /// `f >= 0` on the ground set.
    InQ { min_value: Rational },
    /// `f(y) < 0` and `q_f(p_y) = f(y)/|X| < 0`.
    Rejected {
        y: Vec<Rational>,
        certificate: CertificatePolynomial,
        f_y: Rational,
        q_value: Rational,
    },
}

/// Tests an affine function against a 0/1 ground set; a negative value at
/// `y` is certified by `p_y`.
pub fn zero_one_collapse_check(ground: &GroundSet, f: &AffineFunction) -> Result<CollapseVerdict> {
    if !ground.is_zero_one() {
        return Err(Error::invalid("ground set must consist of 0/1 points"));
    }
    if f.coeffs.len() != ground.dim() {
        return Err(Error::invalid("affine function dimension differs from the ground set"));
    }
    let values = f.values_on(ground);
    let (idx, min) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1).then(Ordering::Equal))
        .expect("ground set is nonempty");
    if !min.is_negative() {
        return Ok(CollapseVerdict::InQ { min_value: min.clone() });
    }
    let y = ground.points()[idx].clone();
    let certificate = zero_one_certificate(&y, ground)?;
    let q_value = quadratic_form_value_ground(ground, &values, &certificate);
    Ok(CollapseVerdict::Rejected {
        y,
        certificate,
        f_y: min.clone(),
        q_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::{combine, make_ones, make_subtour, make_two_matching};
    use crate::rational::ratio;

    fn e(a: u32, b: u32) -> Edge {
        Edge::new(a, b).unwrap()
    }

    fn diag(v: &[i64]) -> SquareMatrix<Rational> {
        let mut m = SquareMatrix::zeros(v.len());
        for (i, x) in v.iter().enumerate() {
            m.set(i, i, int(*x));
        }
        m
    }

    #[test]
    fn small_exact_cases() {
        assert!(is_psd_exact(&diag(&[0, 1])).is_psd());
        assert_eq!(is_psd_exact(&diag(&[0, 1])).rank, Some(1));
        let v = is_psd_exact(&diag(&[-1, 1]));
        assert_eq!(v.status, PsdStatus::NotPsd);
        assert!(v.witness_value.unwrap().is_negative());
        // Zero diagonal with off-diagonal mass.
        let m = SquareMatrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
        let v = is_psd_exact(&m);
        assert_eq!(v.status, PsdStatus::NotPsd);
        assert_eq!(m.quad_form(v.witness.as_ref().unwrap()), int(-2));
        // Indefinite only after elimination.
        let m = SquareMatrix::from_rows(vec![
            vec![int(1), int(2), int(0)],
            vec![int(2), int(3), int(0)],
            vec![int(0), int(0), int(5)],
        ]);
        assert_eq!(is_psd_exact(&m).status, PsdStatus::NotPsd);
    }

    #[test]
    fn float_cases() {
        let v = is_psd_float(&diag(&[0, 1]), DEFAULT_FLOAT_TOL);
        assert!(v.is_psd());
        assert_eq!(v.min_eigenvalue, Some(0.0));
        let v = is_psd_float(&diag(&[-1, 1]), DEFAULT_FLOAT_TOL);
        assert!(!v.is_psd());
        assert!(v.witness_value.unwrap().is_negative());
    }

    #[test]
    fn membership_examples() {
        let lim = Limits::default();
        assert!(membership_p1(&make_ones(7).unwrap(), Mode::Exact, &lim)
            .unwrap()
            .is_psd());
        let h = make_subtour(8, &[1, 2, 3]).unwrap();
        let v = membership_p1(&h, Mode::Exact, &lim).unwrap();
        assert!(v.is_psd());
        // Star kernel: rank at most dim - n.
        assert!(v.rank.unwrap() <= 29 - 8);
        let ones = make_ones(8).unwrap();
        let out = combine(&int(8), &h, &int(-7), &ones).unwrap();
        let v = membership_p1(&out, Mode::Exact, &lim).unwrap();
        assert_eq!(v.status, PsdStatus::NotPsd);
        let err = membership_p1(&h.scaled(&int(2)), Mode::Exact, &lim).unwrap_err();
        assert!(alloc::format!("{err}").contains("2/1"));
    }

    #[test]
    fn certificate_shapes() {
        let tm = FacetSpec::TwoMatching {
            n: 7,
            u: vec![1, 2, 3],
            matching: vec![e(1, 4), e(2, 5), e(3, 6)],
        };
        let p = boundary_certificate(&tm).unwrap();
        assert_eq!(p.degree(), 4);
        assert_eq!(p.edges(), [e(1, 4), e(2, 5), e(3, 6), e(1, 2)]);
        let f = make_two_matching(7, &[1, 2, 3], &[e(1, 4), e(2, 5), e(3, 6)]).unwrap();
        assert!(verify_certificate(&f, &p, &Limits::default()).unwrap());
        let st = FacetSpec::Subtour { n: 7, u: vec![1, 2, 3] };
        assert_eq!(boundary_certificate(&st).unwrap().label(), "x(1-2)*x(2-3)");
        let lower = FacetSpec::EdgeLower { n: 6, edge: e(1, 2) };
        let p = boundary_certificate(&lower).unwrap();
        assert_eq!(p.expand().len(), 2);
        assert!(boundary_certificate(&FacetSpec::Ones { n: 6 }).is_err());
        let ones = make_ones(6).unwrap();
        assert!(!verify_certificate(
            &ones,
            &CertificatePolynomial::monomial(6, &[e(1, 2)]),
            &Limits::default()
        )
        .unwrap());
    }

    #[test]
    fn collapse_examples() {
        let sq = GroundSet::zero_one(2, &[vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]).unwrap();
        let f = AffineFunction {
            constant: int(1),
            coeffs: vec![int(1), int(-3)],
        };
        match zero_one_collapse_check(&sq, &f).unwrap() {
            CollapseVerdict::Rejected {
                y,
                certificate,
                f_y,
                q_value,
            } => {
                assert_eq!(y, [int(0), int(1)]);
                assert_eq!(certificate.label(), "(1-x1)*x2");
                assert_eq!(f_y, int(-2));
                assert_eq!(q_value, ratio(-2, 4));
            }
            other => panic!("{other:?}"),
        }
        let g = AffineFunction {
            constant: ratio(-1, 2),
            coeffs: vec![int(1), int(1)],
        };
        match zero_one_collapse_check(&sq, &g).unwrap() {
            CollapseVerdict::Rejected { q_value, .. } => assert_eq!(q_value, ratio(-1, 8)),
            other => panic!("{other:?}"),
        }
        let h = AffineFunction {
            constant: int(1),
            coeffs: vec![int(0), int(0)],
        };
        assert!(matches!(
            zero_one_collapse_check(&sq, &h).unwrap(),
            CollapseVerdict::InQ { .. }
        ));
    }
}
