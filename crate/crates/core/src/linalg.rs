//! Dense matrices: exact rational helpers and deterministic symmetric
//! eigensolvers (cyclic Jacobi, Householder + implicit QL).

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{to_f64, Rational};

/// Arithmetic needed to assemble moment matrices in either exact or
/// floating-point mode.
pub trait Scalar:
    Clone
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
{
    fn from_rational(r: &Rational) -> Self;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }
}

/// Square matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Clone + Zero> SquareMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        SquareMatrix {
            dim,
            data: vec![T::zero(); dim * dim],
        }
    }
}

impl<T> SquareMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let dim = rows.len();
        let data: Vec<T> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), dim * dim, "matrix rows must be square");
        SquareMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.dim + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.dim.max(1))
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> SquareMatrix<U> {
        SquareMatrix {
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T> SquareMatrix<T>
where
    T: Clone + Zero + PartialEq,
{
    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }
}

impl<T> SquareMatrix<T>
where
    T: Clone + Zero + Add<Output = T>,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.dim);
        self.rows()
            .map(|r| r.iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    /// `vᵀ A v`.
    pub fn quad_form(&self, v: &[T]) -> T {
        let av = self.mul_vec(v);
        av.iter().zip(v).fold(T::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn trace(&self) -> T {
        (0..self.dim).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    /// `trace(A²) = Σ_ij a_ij a_ji`.
    pub fn trace_of_square(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc = acc + self.get(i, j) * self.get(j, i);
            }
        }
        acc
    }
}

impl SquareMatrix<Rational> {
    pub fn to_f64(&self) -> SquareMatrix<f64> {
        self.map(to_f64)
    }
}

impl SquareMatrix<f64> {
    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.rows()
            .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// `a·A + b·B`.
pub fn linear_combination(a: f64, x: &SquareMatrix<f64>, b: f64, y: &SquareMatrix<f64>) -> SquareMatrix<f64> {
    assert_eq!(x.dim, y.dim);
    SquareMatrix {
        dim: x.dim,
        data: x.data.iter().zip(&y.data).map(|(p, q)| a * p + b * q).collect(),
    }
}

/// Exact rank over the rationals of a list of vectors.
pub fn exact_rank(vectors: &[Vec<Rational>]) -> usize {
    let rows: Vec<Vec<BigInt>> = vectors.iter().map(|v| primitive_integer_row(v)).collect();
    let mut basis: Vec<(usize, Vec<BigInt>)> = Vec::new();
    let full = vectors.first().map_or(0, Vec::len);
    for mut row in rows {
        if basis.len() == full {
            break;
        }
        for (p, b) in &basis {
            if row[*p].is_zero() {
                continue;
            }
            let g = row[*p].gcd(&b[*p]);
            let fr = &b[*p] / &g;
            let fb = &row[*p] / &g;
            for (x, y) in row.iter_mut().zip(b) {
                *x = &*x * &fr - &fb * y;
            }
            make_primitive(&mut row);
        }
        if let Some(p) = row.iter().position(|x| !x.is_zero()) {
            // Keep the pivot positive so reductions stay consistent.
            if row[p].is_negative() {
                for x in row.iter_mut() {
                    *x = -&*x;
                }
            }
            basis.push((p, row));
        }
    }
    basis.len()
}

fn primitive_integer_row(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut row: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    make_primitive(&mut row);
    row
}

fn make_primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Eigenvalues ascending with matching unit eigenvectors (columns).
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    /// `vectors[j]` is the eigenvector for `values[j]`.
    pub vectors: Vec<Vec<f64>>,
}

/// Cyclic Jacobi with a fixed row-by-row sweep order.
pub fn jacobi_eigen(a: &SquareMatrix<f64>) -> Eigen {
    const MAX_SWEEPS: usize = 100;
    let n = a.dim();
    let mut m: Vec<f64> = a.data.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = a.norm_inf().max(f64::MIN_POSITIVE);
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        if libm::sqrt(off) <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    Eigen {
        values: order.iter().map(|&i| m[i * n + i]).collect(),
        vectors: order.iter().map(|&j| (0..n).map(|k| v[k * n + j]).collect()).collect(),
    }
}

/// Eigenvalues only, ascending, by Householder tridiagonalization followed
/// by implicit QL with Wilkinson shifts. `O(dim³)` with a small constant.
pub fn tridiagonal_eigenvalues(a: &SquareMatrix<f64>) -> Vec<f64> {
    let n = a.dim();
    if n == 0 {
        return Vec::new();
    }
    let mut m = a.data.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| m[i * n + k].abs()).sum();
            if scale == 0.0 {
                e[i] = m[i * n + l];
            } else {
                for k in 0..=l {
                    m[i * n + k] /= scale;
                    h += m[i * n + k] * m[i * n + k];
                }
                let f = m[i * n + l];
                let g = if f >= 0.0 { -libm::sqrt(h) } else { libm::sqrt(h) };
                e[i] = scale * g;
                h -= f * g;
                m[i * n + l] = f - g;
                // p = A·u / h from the lower triangle, row by row.
                let u: Vec<f64> = m[i * n..i * n + l + 1].to_vec();
                e[..=l].fill(0.0);
                for j in 0..=l {
                    let row = &m[j * n..j * n + j + 1];
                    let mut g = row[j] * u[j];
                    for k in 0..j {
                        g += row[k] * u[k];
                        e[k] += row[k] * u[j];
                    }
                    e[j] += g;
                }
                let mut f = 0.0;
                for j in 0..=l {
                    e[j] /= h;
                    f += e[j] * u[j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = m[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        m[j * n + k] -= f * e[k] + g * m[i * n + k];
                    }
                }
            }
        } else {
            e[i] = m[i * n + l];
        }
        d[i] = h;
    }
    for i in 0..n {
        d[i] = m[i * n + i];
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    implicit_ql(&mut d, &mut e);
    d.sort_by(f64::total_cmp);
    d
}

fn implicit_ql(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 200 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = libm::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + if g >= 0.0 { r.abs() } else { -r.abs() });
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = libm::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// Largest dimension solved with Jacobi; above it the tridiagonal QL path
/// is used.
pub const JACOBI_MAX_DIM: usize = 128;

/// Ascending eigenvalues of a symmetric matrix.
pub fn symmetric_eigenvalues(a: &SquareMatrix<f64>) -> Vec<f64> {
    if a.dim() <= JACOBI_MAX_DIM {
        jacobi_eigen(a).values
    } else {
        tridiagonal_eigenvalues(a)
    }
}

/// Largest elementwise gap between two ascending spectra of equal length.
pub fn spectrum_distance(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn to_f64_vec(v: &[Rational]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64().unwrap_or_else(|| to_f64(x))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn sample(n: usize, seed: u64) -> SquareMatrix<f64> {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut m = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let x = next();
                m.set(i, j, x);
                m.set(j, i, x);
            }
        }
        m
    }

    #[test]
    fn jacobi_diagonal_cases() {
        let m = SquareMatrix::from_rows(vec![vec![0.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(jacobi_eigen(&m).values, vec![0.0, 1.0]);
        let m = SquareMatrix::from_rows(vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
        let e = jacobi_eigen(&m);
        assert!((e.values[0] - 1.0).abs() < 1e-14 && (e.values[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_vectors_satisfy_eigen_equation() {
        let m = sample(12, 3);
        let e = jacobi_eigen(&m);
        for (lam, v) in e.values.iter().zip(&e.vectors) {
            let mv = m.mul_vec(v);
            for (a, b) in mv.iter().zip(v) {
                assert!((a - lam * b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn two_solvers_agree() {
        for (n, seed) in [(1, 1), (2, 2), (7, 5), (40, 9), (90, 11)] {
            let m = sample(n, seed);
            let a = jacobi_eigen(&m).values;
            let b = tridiagonal_eigenvalues(&m);
            assert!(spectrum_distance(&a, &b) < 1e-11, "n={n}");
        }
    }

    #[test]
    fn rank_of_dependent_rows() {
        let v = |xs: &[i64]| xs.iter().map(|&x| int(x)).collect::<Vec<_>>();
        let rows = vec![v(&[1, 2, 3]), v(&[2, 4, 6]), v(&[0, 1, 1]), v(&[1, 3, 4])];
        assert_eq!(exact_rank(&rows), 2);
        let half = vec![vec![ratio(1, 2), ratio(1, 3)], vec![int(3), int(2)]];
        assert_eq!(exact_rank(&half), 1);
        assert_eq!(exact_rank(&[]), 0);
    }

    #[test]
    fn exact_trace_identities() {
        let m = SquareMatrix::from_rows(vec![vec![int(1), ratio(1, 2)], vec![ratio(1, 2), int(3)]]);
        assert_eq!(m.trace(), int(4));
        assert_eq!(m.trace_of_square(), ratio(21, 2));
        assert_eq!(m.quad_form(&[int(1), int(-1)]), int(3));
    }
}
