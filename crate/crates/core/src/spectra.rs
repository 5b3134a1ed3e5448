//! Eigensystems of `A = a·A_U + (1-a)·A_1`, the `k = 1` moment matrix of
//! `a·h_U + (1-a)·1`, for a subtour functional `h_U` with `|U| = m`.
//!
//! Six eigenvalue families are affine in `a` and come with explicit
//! eigenvectors. The remaining two eigenvalues are `(c ± √d)/den` for integer
//! polynomials `c`, `d`, `den` in `(n, m, a)`. With `a = √n`, `c` and `d`
//! live in `Q(√n)`, so signs are still decided exactly.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cycles::{edge_count, Edge, Vertex};
use crate::functionals::{combine, make_ones, make_subtour};
use crate::linalg::{exact_rank, linear_combination, symmetric_eigenvalues, SquareMatrix};
use crate::moment::{closed_form_entries, moment_matrix_closed_form_k1, star_vector};
use crate::rational::{from_big, int, ratio, to_f64, Rational};
use crate::{Error, Limits, Result};

/// Absolute tolerance for matching the numerical spectrum.
pub const SPECTRUM_TOL: f64 = 1e-9;
/// Relative tolerance of the `a = √n` sign claim.
pub const SQRT_N_TOL: f64 = 1e-12;

// c(n, m, a) as (coefficient, power of a, power of m, power of n).
const C_TERMS: &[(i64, u32, u32, u32)] = &[
    (3, 0, 1, 4),
    (-3, 0, 0, 4),
    (-2, 1, 0, 3),
    (-3, 0, 2, 3),
    (17, 0, 0, 3),
    (-14, 0, 1, 3),
    (4, 1, 0, 2),
    (8, 1, 1, 2),
    (-27, 0, 0, 2),
    (14, 0, 2, 2),
    (13, 0, 1, 2),
    (-13, 0, 2, 1),
    (-16, 1, 1, 1),
    (-8, 1, 2, 1),
    (6, 0, 1, 1),
    (2, 1, 0, 1),
    (7, 0, 0, 1),
    (-6, 0, 2, 0),
    (16, 1, 2, 0),
    (-4, 1, 0, 0),
    (6, 0, 0, 0),
];

// d(n, m, a) = (n² - 3n + 2) times this polynomial.
const D_TERMS: &[(i64, u32, u32, u32)] = &[
    (162, 0, 0, 0),
    (-72, 1, 0, 0),
    (-675, 0, 0, 1),
    (324, 0, 1, 1),
    (-324, 0, 2, 0),
    (-120, 1, 0, 3),
    (-12, 1, 0, 5),
    (72, 1, 0, 4),
    (333, 0, 2, 3),
    (702, 0, 3, 2),
    (-288, 1, 4, 0),
    (252, 1, 2, 3),
    (9, 0, 2, 6),
    (8, 2, 0, 0),
    (-4, 2, 0, 3),
    (4, 2, 0, 4),
    (200, 2, 4, 0),
    (-12, 2, 0, 2),
    (4, 2, 0, 1),
    (-136, 2, 2, 0),
    (-104, 2, 2, 3),
    (80, 2, 2, 2),
    (-400, 2, 3, 1),
    (136, 2, 1, 1),
    (256, 2, 3, 2),
    (24, 2, 2, 4),
    (232, 2, 2, 1),
    (-24, 2, 1, 4),
    (-232, 2, 1, 2),
    (120, 2, 1, 3),
    (-128, 2, 4, 1),
    (24, 2, 4, 2),
    (-48, 2, 3, 3),
    (-60, 1, 2, 2),
    (576, 1, 3, 1),
    (-360, 1, 1, 1),
    (-351, 0, 4, 1),
    (180, 0, 1, 5),
    (-18, 0, 1, 6),
    (432, 0, 0, 4),
    (-684, 0, 1, 4),
    (-954, 0, 0, 3),
    (162, 0, 4, 0),
    (-324, 0, 3, 1),
    (-63, 0, 2, 5),
    (-480, 1, 3, 2),
    (12, 1, 1, 5),
    (1125, 0, 0, 2),
    (132, 1, 0, 1),
    (360, 1, 2, 0),
    (-522, 0, 3, 3),
    (261, 0, 4, 2),
    (-99, 0, 0, 5),
    (9, 0, 0, 6),
    (-1026, 0, 1, 2),
    (-1062, 0, 2, 2),
    (1224, 0, 1, 3),
    (1026, 0, 2, 1),
    (-60, 1, 2, 4),
    (-588, 1, 2, 1),
    (-12, 1, 1, 4),
    (588, 1, 1, 2),
    (-228, 1, 1, 3),
    (240, 1, 4, 1),
    (-48, 1, 4, 2),
    (96, 1, 3, 3),
    (-18, 0, 3, 5),
    (9, 0, 4, 4),
    (81, 0, 2, 4),
    (162, 0, 3, 4),
    (-81, 0, 4, 3),
];

/// Weight `a` of `h_U` in the combination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weight {
    Rational(Rational),
    SqrtN,
}

impl Weight {
    pub fn to_f64(&self, n: usize) -> f64 {
        match self {
            Weight::Rational(a) => to_f64(a),
            Weight::SqrtN => libm::sqrt(n as f64),
        }
    }

    fn surd(&self, n: usize) -> Surd {
        match self {
            Weight::Rational(a) => Surd::rational(a.clone()),
            Weight::SqrtN => Surd {
                rational: Rational::zero(),
                irrational: Rational::one(),
                radicand: n as u64,
            },
        }
    }

    pub fn label(&self) -> String {
        match self {
            Weight::Rational(a) => crate::rational::to_pq(a),
            Weight::SqrtN => "sqrt-n".into(),
        }
    }
}

/// `rational + irrational·√radicand` with an exact sign test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub rational: Rational,
    pub irrational: Rational,
    pub radicand: u64,
}

impl Surd {
    pub fn rational(r: Rational) -> Surd {
        Surd {
            rational: r,
            irrational: Rational::zero(),
            radicand: 1,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.irrational.is_zero()
    }

    fn radicand_q(&self) -> Rational {
        int(self.radicand as i64)
    }

    pub fn add(&self, o: &Surd) -> Surd {
        Surd {
            rational: &self.rational + &o.rational,
            irrational: &self.irrational + &o.irrational,
            radicand: self.radicand.max(o.radicand),
        }
    }

    pub fn scale(&self, s: &Rational) -> Surd {
        Surd {
            rational: &self.rational * s,
            irrational: &self.irrational * s,
            radicand: self.radicand,
        }
    }

    pub fn mul(&self, o: &Surd) -> Surd {
        let r = self.radicand.max(o.radicand);
        let rq = int(r as i64);
        Surd {
            rational: &self.rational * &o.rational + &self.irrational * &o.irrational * rq,
            irrational: &self.rational * &o.irrational + &self.irrational * &o.rational,
            radicand: r,
        }
    }

    pub fn sign(&self) -> Ordering {
        let a = self.rational.cmp(&Rational::zero());
        let b = self.irrational.cmp(&Rational::zero());
        match (a, b) {
            (x, Ordering::Equal) => x,
            (Ordering::Equal, y) => y,
            (x, y) if x == y => x,
            (x, _) => {
                // Opposite signs: compare a² with b²r.
                let a2 = &self.rational * &self.rational;
                let b2r = &self.irrational * &self.irrational * self.radicand_q();
                match a2.cmp(&b2r) {
                    Ordering::Greater => x,
                    Ordering::Less => x.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    /// Float value without cancellation between the two parts.
    pub fn to_f64(&self) -> f64 {
        let a = to_f64(&self.rational);
        let b = to_f64(&self.irrational);
        let root = libm::sqrt(self.radicand as f64);
        if self.rational.is_negative() == self.irrational.is_negative() || self.irrational.is_zero() {
            return a + b * root;
        }
        let num = &self.rational * &self.rational - &self.irrational * &self.irrational * self.radicand_q();
        to_f64(&num) / (a - b * root)
    }
}

fn poly_in_a(terms: &[(i64, u32, u32, u32)], n: usize, m: usize) -> [BigInt; 3] {
    let mut out = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
    let (nb, mb) = (BigInt::from(n), BigInt::from(m));
    for &(c, pa, pm, pn) in terms {
        out[pa as usize] +=
            BigInt::from(c) * num_traits::pow(mb.clone(), pm as usize) * num_traits::pow(nb.clone(), pn as usize);
    }
    out
}

fn eval_in_a(coeffs: &[BigInt; 3], a: &Surd) -> Surd {
    let a2 = a.mul(a);
    Surd::rational(from_big(coeffs[0].clone()))
        .add(&a.scale(&from_big(coeffs[1].clone())))
        .add(&a2.scale(&from_big(coeffs[2].clone())))
}

/// `den(n, m) = 2(mn³ - n³ - 5mn² + 6n² - m²n² - 11n + 5m²n + 6mn + 6 - 6m²)(n - 1)`.
pub fn residual_denominator(n: usize, m: usize) -> BigInt {
    let (n, m) = (BigInt::from(n), BigInt::from(m));
    let n2 = &n * &n;
    let n3 = &n2 * &n;
    let m2 = &m * &m;
    let inner =
        &m * &n3 - &n3 - 5 * &m * &n2 + 6 * &n2 - &m2 * &n2 - 11 * &n + 5 * &m2 * &n + 6 * &m * &n + 6 - 6 * &m2;
    2 * inner * (n - 1)
}

/// The two eigenvalues left after the tabled families.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualPair {
    pub n: usize,
    pub m: usize,
    pub weight: Weight,
    pub c: Surd,
    pub d: Surd,
    pub denominator: BigInt,
    /// `d < 0`: the formula gives a complex pair.
    pub d_negative: bool,
    pub lambda_plus: Option<f64>,
    pub lambda_minus: Option<f64>,
    /// Exact sign of `λ₋`, when `d >= 0`.
    pub minus_sign: Option<Ordering>,
}

impl ResidualPair {
    /// `λ₊ + λ₋ = 2c/den`, exact for rational weights.
    pub fn sum_exact(&self) -> Option<Rational> {
        self.c
            .is_rational()
            .then(|| int(2) * &self.c.rational / from_big(self.denominator.clone()))
    }

    /// `λ₊² + λ₋² = (2c² + 2d)/den²`, exact for rational weights.
    pub fn sum_of_squares_exact(&self) -> Option<Rational> {
        if !self.c.is_rational() || !self.d.is_rational() {
            return None;
        }
        let den = from_big(self.denominator.clone());
        Some(int(2) * (&self.c.rational * &self.c.rational + &self.d.rational) / (&den * &den))
    }

    /// Exact decision of `λ₋ <= 0`.
    pub fn minus_nonpositive(&self) -> Option<bool> {
        self.minus_sign.map(|s| s != Ordering::Greater)
    }

    pub fn alpha(&self) -> f64 {
        self.c.to_f64() / to_f64(&from_big(self.denominator.clone()))
    }
}

fn check_range(n: usize, m: usize) -> Result<()> {
    if n < 6 {
        return Err(Error::invalid("the subtour eigensystem needs n >= 6"));
    }
    if m < 3 || 2 * m > n {
        return Err(Error::invalid(alloc::format!(
            "need 3 <= m <= n/2, got m = {m} for n = {n}"
        )));
    }
    Ok(())
}

/// `(c ± √d)/den` from the integer polynomials.
pub fn residual_pair(n: usize, m: usize, weight: &Weight) -> Result<ResidualPair> {
    check_range(n, m)?;
    let den = residual_denominator(n, m);
    if den.is_zero() {
        return Err(Error::invalid("residual denominator vanishes"));
    }
    let a = weight.surd(n);
    let c = eval_in_a(&poly_in_a(C_TERMS, n, m), &a);
    let prefactor = from_big(BigInt::from(n * n + 2) - BigInt::from(3 * n));
    let d = eval_in_a(&poly_in_a(D_TERMS, n, m), &a).scale(&prefactor);
    let d_negative = d.sign() == Ordering::Less;
    let mut pair = ResidualPair {
        n,
        m,
        weight: weight.clone(),
        c,
        d,
        denominator: den,
        d_negative,
        lambda_plus: None,
        lambda_minus: None,
        minus_sign: None,
    };
    if d_negative {
        return Ok(pair);
    }
    // c² - d, whose sign and value avoid the cancellation in c - √d.
    let prod = pair.c.mul(&pair.c).add(&pair.d.scale(&int(-1)));
    let (cf, df, pf) = (pair.c.to_f64(), pair.d.to_f64().max(0.0), prod.to_f64());
    let denf = to_f64(&from_big(pair.denominator.clone()));
    let root = libm::sqrt(df);
    let (plus, minus) = if cf >= 0.0 {
        let s = cf + root;
        let other = if s == 0.0 { 0.0 } else { pf / (s * denf) };
        (s / denf, other)
    } else {
        let s = cf - root;
        (pf / (s * denf), s / denf)
    };
    pair.lambda_plus = Some(plus);
    pair.lambda_minus = Some(minus);
    // Sign of c - √d, then of the quotient.
    let numerator_sign = match pair.c.sign() {
        Ordering::Greater => prod.sign(),
        Ordering::Equal if pair.d.sign() == Ordering::Equal => Ordering::Equal,
        _ => Ordering::Less,
    };
    pair.minus_sign = Some(if pair.denominator.is_positive() {
        numerator_sign
    } else {
        numerator_sign.reverse()
    });
    Ok(pair)
}

/// One tabled family: eigenvalue `a·mu + (1-a)·ones`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenFamily {
    pub label: &'static str,
    /// Eigenvalue of `A_U` on this family.
    pub mu: Rational,
    /// Eigenvalue of `A_1` on this family.
    pub ones: Rational,
    pub multiplicity: u64,
}

impl EigenFamily {
    pub fn value(&self, a: &Rational) -> Rational {
        a * &self.mu + (Rational::one() - a) * &self.ones
    }

    pub fn value_f64(&self, a: f64) -> f64 {
        a * to_f64(&self.mu) + (1.0 - a) * to_f64(&self.ones)
    }

    pub fn value_weight(&self, w: &Weight, n: usize) -> f64 {
        match w {
            Weight::Rational(a) => to_f64(&self.value(a)),
            Weight::SqrtN => {
                // ones + (mu - ones)·√n
                Surd {
                    rational: self.ones.clone(),
                    irrational: &self.mu - &self.ones,
                    radicand: n as u64,
                }
                .to_f64()
            }
        }
    }
}

fn q(v: i64) -> Rational {
    int(v)
}

/// Row 4 of the table as printed in the eigenvalue theorem.
pub fn row4_theorem(n: usize, m: usize) -> Rational {
    let (n, m) = (n as i64, m as i64);
    q(2) * q(m * n * n - n * m * m - n * n + 4 * n - 3 * m * n + 3 * m * m - 4)
        / q((n - 2) * (n - 3) * (m * n - m * m - n + 1))
}

/// Row 4 as printed in the eigenvector lemma.
pub fn row4_lemma(n: usize, m: usize) -> Rational {
    let (n, m) = (n as i64, m as i64);
    q(2) * q(m * (n - 3) * (n - m) - (n - 2) * (n - 2)) / q((n - 2) * (n - 3) * (m - 1) * (n - m - 1))
}

/// The six tabled families, eigenvalue 0 first.
pub fn eigen_families(n: usize, m: usize) -> Result<Vec<EigenFamily>> {
    check_range(n, m)?;
    let (ni, mi) = (n as i64, m as i64);
    let o = ratio(2, ni - 1);
    let mult = |v: i64| v as u64;
    Ok(vec![
        EigenFamily {
            label: "star",
            mu: Rational::zero(),
            ones: Rational::zero(),
            multiplicity: n as u64,
        },
        EigenFamily {
            label: "four-cycle-in-U",
            mu: ratio(2 * (mi - 2), (ni - 2) * (mi - 1)),
            ones: o.clone(),
            multiplicity: mult(mi * (mi - 3) / 2),
        },
        EigenFamily {
            label: "four-cycle-outside-U",
            mu: ratio(2 * (ni - mi - 2), (ni - 2) * (ni - mi - 1)),
            ones: o.clone(),
            multiplicity: mult((ni - mi) * (ni - mi - 3) / 2),
        },
        EigenFamily {
            label: "mixed-four-cycle",
            mu: row4_theorem(n, m),
            ones: o.clone(),
            multiplicity: mult((ni - mi - 1) * (mi - 1)),
        },
        EigenFamily {
            label: "U-pair-difference",
            mu: ratio(2 * (mi - 2), (ni - 3) * (mi - 1)),
            ones: o.clone(),
            multiplicity: mult(mi - 1),
        },
        EigenFamily {
            label: "outside-pair-difference",
            mu: ratio(2 * (ni - mi - 2), (ni - 3) * (ni - mi - 1)),
            ones: o,
            multiplicity: mult(ni - mi - 1),
        },
    ])
}

pub fn multiplicity_total(families: &[EigenFamily]) -> u64 {
    families.iter().map(|f| f.multiplicity).sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    pub n: usize,
    pub m: usize,
    pub weight: Weight,
    pub families: Vec<EigenFamily>,
    pub residual: ResidualPair,
    /// Family multiplicities plus the two residual eigenvalues.
    pub multiplicity_total: u64,
}

impl SpectrumReport {
    /// Every eigenvalue as a float, ascending; `None` for a complex pair.
    pub fn eigenvalues_f64(&self) -> Option<Vec<f64>> {
        let mut out = Vec::with_capacity(self.multiplicity_total as usize);
        for f in &self.families {
            let v = f.value_weight(&self.weight, self.n);
            out.extend(core::iter::repeat_n(v, f.multiplicity as usize));
        }
        out.push(self.residual.lambda_plus?);
        out.push(self.residual.lambda_minus?);
        out.sort_by(f64::total_cmp);
        Some(out)
    }
}

pub fn closed_form_spectrum(n: usize, m: usize, weight: &Weight) -> Result<SpectrumReport> {
    let families = eigen_families(n, m)?;
    let residual = residual_pair(n, m, weight)?;
    let multiplicity_total = multiplicity_total(&families) + 2;
    Ok(SpectrumReport {
        n,
        m,
        weight: weight.clone(),
        families,
        residual,
        multiplicity_total,
    })
}

/// Exact PSD decision for `A_U` (`a = 1`) from the closed-form spectrum:
/// every tabled eigenvalue and `λ₋` are nonnegative.
pub fn subtour_psd_from_spectrum(n: usize, m: usize) -> Result<bool> {
    let spectrum = closed_form_spectrum(n, m, &Weight::Rational(Rational::one()))?;
    let tabled = spectrum
        .families
        .iter()
        .all(|f| f.multiplicity == 0 || !f.mu.is_negative());
    let residual = !spectrum.residual.d_negative && spectrum.residual.minus_sign != Some(Ordering::Less);
    Ok(tabled && residual)
}

/// Sparse builder for vectors in the `k = 1` basis `{1, x_12, x_13, ...}`.
struct VecBuilder {
    n: usize,
    v: Vec<Rational>,
}

impl VecBuilder {
    fn new(n: usize) -> Self {
        VecBuilder {
            n,
            v: vec![Rational::zero(); edge_count(n) + 1],
        }
    }

    fn add(&mut self, a: Vertex, b: Vertex, c: &Rational) -> &mut Self {
        let i = 1 + Edge::new(a, b).expect("distinct").lex_index(self.n);
        self.v[i] += c;
        self
    }

    fn done(&mut self) -> Vec<Rational> {
        core::mem::take(&mut self.v)
    }
}

fn four_cycles(n: usize, set: &[Vertex], out: &mut Vec<Vec<Rational>>) {
    let (p, m1) = (int(1), int(-1));
    let s = set.len();
    for a in 0..s {
        for b in a + 1..s {
            for c in b + 1..s {
                for d in c + 1..s {
                    let (i, j, k, l) = (set[a], set[b], set[c], set[d]);
                    for (w, x, y, z) in [(i, j, k, l), (i, j, l, k), (i, k, j, l)] {
                        out.push(
                            VecBuilder::new(n)
                                .add(w, x, &p)
                                .add(x, y, &m1)
                                .add(y, z, &p)
                                .add(z, w, &m1)
                                .done(),
                        );
                    }
                }
            }
        }
    }
}

fn pair_differences(n: usize, set: &[Vertex], rest: &[Vertex], out: &mut Vec<Vec<Rational>>) {
    let w = ratio(rest.len() as i64, set.len() as i64 - 2);
    let (p, m1) = (int(1), int(-1));
    for a in 0..set.len() {
        for b in a + 1..set.len() {
            let (i, j) = (set[a], set[b]);
            let mut v = VecBuilder::new(n);
            for &l in set.iter().filter(|&&l| l != i && l != j) {
                v.add(i, l, &w).add(j, l, &-&w);
            }
            for &t in rest {
                v.add(i, t, &m1).add(j, t, &p);
            }
            out.push(v.done());
        }
    }
}

/// A labeled family of spanning vectors.
pub type Family = (&'static str, Vec<Vec<Rational>>);

/// Labeled spanning sets for the six families, with `U = {1, ..., m}`.
pub fn eigenvector_families(n: usize, m: usize) -> Result<Vec<Family>> {
    check_range(n, m)?;
    let u: Vec<Vertex> = (1..=m as Vertex).collect();
    let rest: Vec<Vertex> = (m as Vertex + 1..=n as Vertex).collect();

    let star = (1..=n as Vertex).map(|i| star_vector(n, i)).collect();
    let mut in_u = Vec::new();
    four_cycles(n, &u, &mut in_u);
    let mut out_u = Vec::new();
    four_cycles(n, &rest, &mut out_u);

    let (p, m1) = (int(1), int(-1));
    let mut mixed = Vec::new();
    for a in 0..u.len() {
        for b in a + 1..u.len() {
            for c in 0..rest.len() {
                for d in c + 1..rest.len() {
                    let (i, j, pp, qq) = (u[a], u[b], rest[c], rest[d]);
                    mixed.push(
                        VecBuilder::new(n)
                            .add(i, pp, &p)
                            .add(i, qq, &m1)
                            .add(j, qq, &p)
                            .add(j, pp, &m1)
                            .done(),
                    );
                }
            }
        }
    }
    let mut u_pairs = Vec::new();
    pair_differences(n, &u, &rest, &mut u_pairs);
    let mut rest_pairs = Vec::new();
    pair_differences(n, &rest, &u, &mut rest_pairs);

    Ok(vec![
        ("star", star),
        ("four-cycle-in-U", in_u),
        ("four-cycle-outside-U", out_u),
        ("mixed-four-cycle", mixed),
        ("U-pair-difference", u_pairs),
        ("outside-pair-difference", rest_pairs),
    ])
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyCheck {
    pub label: &'static str,
    pub eigenvalue: Rational,
    pub multiplicity: u64,
    pub vectors: usize,
    pub rank: usize,
    /// Every generated vector is nonzero and satisfies `A·v = λ·v` exactly.
    pub eigen_ok: bool,
}

impl FamilyCheck {
    pub fn passed(&self) -> bool {
        self.eigen_ok && self.rank as u64 == self.multiplicity
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenVerification {
    pub n: usize,
    pub m: usize,
    pub a: Rational,
    pub families: Vec<FamilyCheck>,
    /// Rank of all generated vectors together.
    pub union_rank: usize,
    pub multiplicity_sum: u64,
    pub trace: Rational,
    pub residual: ResidualPair,
    /// `trace - Σ tabled = λ₊ + λ₋` exactly.
    pub trace_ok: bool,
    /// `trace(A²) - Σ tabled² = λ₊² + λ₋²` exactly.
    pub trace_square_ok: bool,
    /// Largest gap between the numerical and the closed-form spectrum.
    pub numeric_delta: Option<f64>,
}

impl EigenVerification {
    pub fn passed(&self) -> bool {
        self.families.iter().all(FamilyCheck::passed)
            && self.union_rank as u64 == self.multiplicity_sum
            && self.multiplicity_sum == (self.n * (self.n - 1) / 2 - 1) as u64
            && self.trace_ok
            && self.trace_square_ok
            && self.numeric_delta.is_some_and(|d| d <= SPECTRUM_TOL)
    }
}

/// Exact moment matrix of `a·h_U + (1-a)·1` with `U = {1..m}`.
pub fn combined_matrix(n: usize, m: usize, a: &Rational, limits: &Limits) -> Result<SquareMatrix<Rational>> {
    let u: Vec<Vertex> = (1..=m as Vertex).collect();
    let f = combine(a, &make_subtour(n, &u)?, &(Rational::one() - a), &make_ones(n)?)?;
    Ok(moment_matrix_closed_form_k1(&f, limits)?.entries)
}

/// Float moment matrix of `a·h_U + (1-a)·1`, any real `a`.
pub fn combined_matrix_f64(n: usize, m: usize, a: f64, limits: &Limits) -> Result<SquareMatrix<f64>> {
    let u: Vec<Vertex> = (1..=m as Vertex).collect();
    let (_, au) = closed_form_entries::<f64>(&make_subtour(n, &u)?, 1, limits)?;
    let (_, a1) = closed_form_entries::<f64>(&make_ones(n)?, 1, limits)?;
    Ok(linear_combination(a, &au, 1.0 - a, &a1))
}

/// Largest elementwise gap between two ascending spectra.
fn sorted_delta(mut numeric: Vec<f64>, expected: &[f64]) -> f64 {
    numeric.sort_by(f64::total_cmp);
    numeric
        .iter()
        .zip(expected)
        .map(|(x, y)| libm::fabs(x - y))
        .fold(0.0, f64::max)
}

/// Largest gap between the closed-form spectrum and the numerical spectrum
/// of the assembled matrix; `None` for a complex residual pair.
pub fn numeric_spectrum_delta(n: usize, m: usize, weight: &Weight, limits: &Limits) -> Result<Option<f64>> {
    let spectrum = closed_form_spectrum(n, m, weight)?;
    let Some(expected) = spectrum.eigenvalues_f64() else {
        return Ok(None);
    };
    let mat = combined_matrix_f64(n, m, weight.to_f64(n), limits)?;
    Ok(Some(sorted_delta(symmetric_eigenvalues(&mat), &expected)))
}

pub fn verify_eigenpairs_exact(n: usize, m: usize, a: &Rational, limits: &Limits) -> Result<EigenVerification> {
    let spectrum = closed_form_spectrum(n, m, &Weight::Rational(a.clone()))?;
    let mat = combined_matrix(n, m, a, limits)?;
    let generated = eigenvector_families(n, m)?;

    let mut families = Vec::with_capacity(6);
    let mut all = Vec::new();
    let mut tabled_sum = Rational::zero();
    let mut tabled_sq = Rational::zero();
    for (fam, (label, vectors)) in spectrum.families.iter().zip(&generated) {
        let lambda = fam.value(a);
        let eigen_ok = vectors
            .iter()
            .all(|v| !v.iter().all(Zero::is_zero) && mat.mul_vec(v).iter().zip(v).all(|(av, x)| *av == &lambda * x));
        let rank = exact_rank(vectors);
        let mult = int(fam.multiplicity as i64);
        tabled_sum += &lambda * &mult;
        tabled_sq += &lambda * &lambda * &mult;
        families.push(FamilyCheck {
            label,
            eigenvalue: lambda,
            multiplicity: fam.multiplicity,
            vectors: vectors.len(),
            rank,
            eigen_ok,
        });
        all.extend(vectors.iter().cloned());
    }
    let union_rank = exact_rank(&all);
    let trace = mat.trace();
    let residual = spectrum.residual.clone();
    let trace_ok = residual.sum_exact().is_some_and(|s| s == &trace - &tabled_sum);
    let trace_square_ok = residual
        .sum_of_squares_exact()
        .is_some_and(|s| s == mat.trace_of_square() - &tabled_sq);
    let numeric_delta = spectrum
        .eigenvalues_f64()
        .map(|exp| sorted_delta(symmetric_eigenvalues(&mat.to_f64()), &exp));
    Ok(EigenVerification {
        n,
        m,
        a: a.clone(),
        families,
        union_rank,
        multiplicity_sum: multiplicity_total(&spectrum.families),
        trace,
        residual,
        trace_ok,
        trace_square_ok,
        numeric_delta,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SqrtNRow {
    pub m: usize,
    pub lambda_minus: Option<f64>,
    /// Exact sign decision of `λ₋ <= 0` in `Q(√n)`.
    pub exact_nonpositive: Option<bool>,
    /// Numerical eigenvalue matched to `λ₋`.
    pub numeric_lambda_minus: f64,
    pub numeric_min: f64,
    pub numeric_delta: f64,
}

impl SqrtNRow {
    pub fn passed(&self) -> bool {
        let Some(lm) = self.lambda_minus else { return false };
        let scale = 1f64.max(libm::fabs(lm));
        lm <= SQRT_N_TOL * scale
            && self.exact_nonpositive == Some(true)
            && self.numeric_lambda_minus
                <= SQRT_N_TOL * 1f64.max(libm::fabs(self.numeric_lambda_minus)) + self.numeric_delta
            && self.numeric_delta <= SPECTRUM_TOL
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SqrtNReport {
    pub n: usize,
    pub rows: Vec<SqrtNRow>,
}

impl SqrtNReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(SqrtNRow::passed)
    }
}

/// `λ₋ <= 0` at `a = √n` for every `3 <= m <= n/2`, by formula and numerically.
pub fn sqrt_n_nonpositivity(n: usize, limits: &Limits) -> Result<SqrtNReport> {
    if n < 6 {
        return Err(Error::invalid("the subtour eigensystem needs n >= 6"));
    }
    let a = libm::sqrt(n as f64);
    let (_, a1) = closed_form_entries::<f64>(&make_ones(n)?, 1, limits)?;
    let mut rows = Vec::new();
    for m in 3..=n / 2 {
        let spectrum = closed_form_spectrum(n, m, &Weight::SqrtN)?;
        let u: Vec<Vertex> = (1..=m as Vertex).collect();
        let (_, au) = closed_form_entries::<f64>(&make_subtour(n, &u)?, 1, limits)?;
        let mut numeric = symmetric_eigenvalues(&linear_combination(a, &au, 1.0 - a, &a1));
        numeric.sort_by(f64::total_cmp);
        let numeric_min = numeric[0];
        let lambda_minus = spectrum.residual.lambda_minus;
        let (numeric_lambda_minus, numeric_delta) = match spectrum.eigenvalues_f64() {
            Some(exp) => {
                let delta = sorted_delta(numeric.clone(), &exp);
                let lm = lambda_minus.expect("real pair");
                let idx = exp.iter().position(|x| *x == lm).expect("present");
                (numeric[idx], delta)
            }
            None => (numeric_min, f64::INFINITY),
        };
        rows.push(SqrtNRow {
            m,
            lambda_minus,
            exact_nonpositive: spectrum.residual.minus_nonpositive(),
            numeric_lambda_minus,
            numeric_min,
            numeric_delta,
        });
    }
    Ok(SqrtNReport { n, rows })
}

#[derive(Clone, Debug, PartialEq)]
pub struct OnesSpectrum {
    pub n: usize,
    /// Star vectors lie in the kernel.
    pub star_ok: bool,
    /// Every 4-cycle vector has eigenvalue `2/(n-1)`.
    pub four_cycle_ok: bool,
    pub four_cycle_rank: usize,
    pub tabled_value: Rational,
    pub trace: Rational,
    /// `trace - (2/(n-1))·rank`, the eigenvalue the table leaves out.
    pub residual_exact: Rational,
    /// Numerical eigenvalues outside the two tabled families.
    pub extra: Vec<f64>,
}

impl OnesSpectrum {
    pub fn passed(&self) -> bool {
        self.star_ok
            && self.four_cycle_ok
            && self.extra.len() == 1
            && libm::fabs(self.extra[0] - to_f64(&self.residual_exact)) <= SPECTRUM_TOL
    }
}

pub fn ones_spectrum(n: usize, limits: &Limits) -> Result<OnesSpectrum> {
    if n < 5 {
        return Err(Error::invalid("the ones spectrum needs n >= 5"));
    }
    let mat = moment_matrix_closed_form_k1(&make_ones(n)?, limits)?.entries;
    let star_ok = (1..=n as Vertex).all(|i| mat.mul_vec(&star_vector(n, i)).iter().all(Zero::is_zero));
    let all: Vec<Vertex> = (1..=n as Vertex).collect();
    let mut cycles = Vec::new();
    four_cycles(n, &all, &mut cycles);
    let tabled_value = ratio(2, n as i64 - 1);
    let four_cycle_ok = cycles
        .iter()
        .all(|v| mat.mul_vec(v).iter().zip(v).all(|(av, x)| *av == &tabled_value * x));
    let four_cycle_rank = exact_rank(&cycles);
    let trace = mat.trace();
    let residual_exact = &trace - &tabled_value * int(four_cycle_rank as i64);

    let tv = to_f64(&tabled_value);
    let extra = symmetric_eigenvalues(&mat.to_f64())
        .into_iter()
        .filter(|x| libm::fabs(*x) > SPECTRUM_TOL && libm::fabs(x - tv) > SPECTRUM_TOL)
        .collect();
    Ok(OnesSpectrum {
        n,
        star_ok,
        four_cycle_ok,
        four_cycle_rank,
        tabled_value,
        trace,
        residual_exact,
        extra,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairSubtourKernel {
    pub n: usize,
    /// The row of `x_ij` vanishes in `A_U` for `U = {i, j}`.
    pub row_vanishes: bool,
    /// Rank of the star vectors together with `e_{x_ij}`.
    pub kernel_rank: usize,
}

impl PairSubtourKernel {
    pub fn passed(&self) -> bool {
        self.row_vanishes && self.kernel_rank == self.n + 1
    }
}

/// For `U = {1, 2}` the basis vector of `x_12` joins the star kernel.
pub fn pair_subtour_kernel(n: usize, limits: &Limits) -> Result<PairSubtourKernel> {
    let mat = moment_matrix_closed_form_k1(&make_subtour(n, &[1, 2])?, limits)?.entries;
    let idx = 1 + Edge::new(1, 2).expect("distinct").lex_index(n);
    let row_vanishes = mat.row(idx).iter().all(Zero::is_zero);
    let mut e = vec![Rational::zero(); mat.dim()];
    e[idx] = Rational::one();
    let mut vs: Vec<Vec<Rational>> = (1..=n as Vertex).map(|i| star_vector(n, i)).collect();
    let kernel_ok = mat.mul_vec(&e).iter().all(Zero::is_zero);
    vs.push(e);
    Ok(PairSubtourKernel {
        n,
        row_vanishes: row_vanishes && kernel_ok,
        kernel_rank: exact_rank(&vs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn table_examples() {
        let fams = eigen_families(8, 4).unwrap();
        assert_eq!(fams[1].value(&int(1)), ratio(2, 9));
        assert_eq!(fams[1].multiplicity, 2);
        for f in &fams[1..] {
            assert_eq!(f.value(&int(0)), ratio(2, 7));
        }
        assert_eq!(row4_lemma(10, 3), row4_theorem(10, 3));
    }

    #[test]
    fn multiplicities_sum() {
        for n in 6..30 {
            for m in 3..=n / 2 {
                let f = eigen_families(n, m).unwrap();
                assert_eq!(multiplicity_total(&f), (n * (n - 1) / 2 - 1) as u64);
            }
        }
    }

    #[test]
    fn range_checks() {
        assert!(eigen_families(5, 2).is_err());
        assert!(eigen_families(8, 5).is_err());
        assert!(residual_pair(8, 2, &Weight::SqrtN).is_err());
    }

    #[test]
    fn surd_signs() {
        let s = |a: i64, b: i64, r: u64| Surd {
            rational: int(a),
            irrational: int(b),
            radicand: r,
        };
        assert_eq!(s(3, -1, 9).sign(), Ordering::Equal);
        assert_eq!(s(3, -1, 8).sign(), Ordering::Greater);
        assert_eq!(s(-3, 1, 10).sign(), Ordering::Greater);
        assert_eq!(s(-3, 1, 8).sign(), Ordering::Less);
        assert!((s(-3, 1, 10).to_f64() - (10f64.sqrt() - 3.0)).abs() < 1e-15);
    }

    #[test]
    fn eigenpairs_8_4() {
        let r = verify_eigenpairs_exact(8, 4, &int(1), &lim()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.trace, int(9));
    }

    #[test]
    fn eigenpairs_a_zero_gives_ones_residuals() {
        // At a = 0 the residual pair is the ones matrix' leftover eigenvalue
        // together with one more copy of 2/(n-1).
        for n in [7usize, 9] {
            let r = residual_pair(n, 3, &Weight::Rational(int(0))).unwrap();
            let ones = ones_spectrum(n, &lim()).unwrap();
            let lp = r.lambda_plus.unwrap();
            let lm = r.lambda_minus.unwrap();
            let extra = to_f64(&ones.residual_exact);
            let o = 2.0 / (n as f64 - 1.0);
            let ok = ((lp - extra).abs() < 1e-12 && (lm - o).abs() < 1e-12)
                || ((lm - extra).abs() < 1e-12 && (lp - o).abs() < 1e-12);
            assert!(ok, "{lp} {lm} {extra}");
        }
    }

    #[test]
    fn ones_residual_value() {
        let r = ones_spectrum(9, &lim()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.residual_exact, ratio(13, 4));
        assert_eq!(r.four_cycle_rank, 27);
    }

    #[test]
    fn sqrt_n_small() {
        for n in [9usize, 12, 16] {
            let r = sqrt_n_nonpositivity(n, &lim()).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn subtour_spectrum_psd() {
        for n in [6usize, 13, 40, 101] {
            for m in 3..=n / 2 {
                assert!(subtour_psd_from_spectrum(n, m).unwrap());
            }
        }
    }

    #[test]
    fn pair_subtour() {
        let r = pair_subtour_kernel(6, &lim()).unwrap();
        assert!(r.passed());
    }
}
