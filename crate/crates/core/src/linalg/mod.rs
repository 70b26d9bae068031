//! Exact rational and complex floating linear algebra.
//!
//! Exact routines work over [`Rational`] by fraction-free elimination on
//! integer-scaled rows; numeric routines work over [`Complex`] through a
//! singular value decomposition with a relative rank threshold.

mod exact;
mod numeric;
mod roots;

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

pub use exact::{det_exact, kernel_exact, rank_exact, rank_of_rows, solve_exact, Solve};
pub use numeric::{
    kernel_numeric, least_squares, numeric_rank, svd, svd_values, Svd, DEFAULT_TAU,
};
pub use roots::{group_roots, polynomial_from_roots, roots_univariate, UnivariateRoots};

pub type Rational = BigRational;
pub type Complex = num::complex::Complex64;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

pub type RationalMatrix = Matrix<Rational>;
pub type ComplexMatrix = Matrix<Complex>;

impl<K: Clone + Zero> Matrix<K> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![K::zero(); rows * cols],
        }
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<K>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        Matrix {
            rows: n,
            cols,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> K) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self
    where
        K: One,
    {
        Self::from_fn(n, n, |i, j| if i == j { K::one() } else { K::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &K {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: K) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[K] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<K>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Appends the rows of `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn map<L: Clone + Zero>(&self, f: impl Fn(&K) -> L) -> Matrix<L> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<K> Matrix<K>
where
    K: Clone + Zero + Mul<Output = K> + Add<Output = K>,
{
    pub fn mul_vec(&self, v: &[K]) -> Vec<K> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(K::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }
}

impl ComplexMatrix {
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl RationalMatrix {
    pub fn to_complex(&self) -> ComplexMatrix {
        self.map(|q| q.to_complex())
    }
}

/// Scalars a form or matrix may carry: exact rationals or double complex.
///
/// The linear-algebra hooks (`kernel`, `rank`) dispatch to the exact or
/// numeric routines so that the algebraic modules can be written once.
pub trait Scalar:
    Clone
    + Debug
    + std::fmt::Display
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Self;
    fn modulus(&self) -> f64;
    fn to_complex(&self) -> Complex;
    /// Right null space basis.
    fn kernel(m: &Matrix<Self>) -> Vec<Vec<Self>>;
    fn rank(m: &Matrix<Self>) -> usize;
    /// Index used to normalize a projective vector: first nonzero entry for
    /// exact scalars, largest modulus for floating ones.
    fn pivot_index(v: &[Self]) -> Option<usize>;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        Rational::from_integer(v.clone())
    }

    fn modulus(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn to_complex(&self) -> Complex {
        Complex::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn kernel(m: &Matrix<Self>) -> Vec<Vec<Self>> {
        kernel_exact(m)
    }

    fn rank(m: &Matrix<Self>) -> usize {
        rank_exact(m)
    }

    fn pivot_index(v: &[Self]) -> Option<usize> {
        v.iter().position(|x| !x.is_zero())
    }
}

impl Scalar for Complex {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        Complex::new(v as f64, 0.0)
    }

    fn from_bigint(v: &BigInt) -> Self {
        Complex::new(v.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn to_complex(&self) -> Complex {
        *self
    }

    fn kernel(m: &Matrix<Self>) -> Vec<Vec<Self>> {
        kernel_numeric(m, DEFAULT_TAU)
    }

    fn rank(m: &Matrix<Self>) -> usize {
        numeric_rank(m, DEFAULT_TAU)
    }

    fn pivot_index(v: &[Self]) -> Option<usize> {
        let mut best = None;
        let mut best_abs = 0.0;
        for (i, z) in v.iter().enumerate() {
            let a = z.norm();
            if a > best_abs {
                best_abs = a;
                best = Some(i);
            }
        }
        best
    }
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Euclidean norm of a complex vector.
pub fn norm(v: &[Complex]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Scales a projective vector so that its pivot entry is one.
pub fn normalize_projective<K: Scalar>(v: &[K]) -> Vec<K> {
    match K::pivot_index(v) {
        Some(i) => {
            let p = v[i].clone();
            v.iter().map(|x| x.clone() / p.clone()).collect()
        }
        None => v.to_vec(),
    }
}

/// Distance between two points of a projective space, after normalizing
/// both representatives to unit norm and aligning phases. Zero iff equal.
pub fn projective_distance(a: &[Complex], b: &[Complex]) -> f64 {
    let na = norm(a);
    let nb = norm(b);
    if na == 0.0 || nb == 0.0 {
        return f64::INFINITY;
    }
    // sine of the angle, from the 2x2 minors (Lagrange's identity)
    let mut s = 0.0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            s += (a[i] * b[j] - a[j] * b[i]).norm_sqr();
        }
    }
    s.sqrt() / (na * nb)
}
