//! Sylvester's algorithm for binary forms.
//!
//! A binary dual form of degree `d` is stored by its values on the monomials
//! `s0^(d-k) s1^k` under the plain-derivative pairing, so the dual of `l^d`
//! with `l = a s0 + b s1` has values `d! a^(d-k) b^k`.

use num::traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    kernel_numeric, least_squares, norm, numeric_rank, projective_distance, roots_univariate,
    Complex, ComplexMatrix, Matrix, Scalar, DEFAULT_TAU,
};
use crate::multigraded::factorial;

#[derive(Clone, Debug, PartialEq)]
pub struct BinaryDualForm<K> {
    pub degree: usize,
    pub values: Vec<K>,
}

impl<K: Scalar> BinaryDualForm<K> {
    pub fn new(values: Vec<K>) -> Self {
        assert!(!values.is_empty(), "a binary dual form needs at least one value");
        BinaryDualForm {
            degree: values.len() - 1,
            values,
        }
    }

    pub fn to_complex(&self) -> BinaryDualForm<Complex> {
        BinaryDualForm {
            degree: self.degree,
            values: self.values.iter().map(|v| v.to_complex()).collect(),
        }
    }
}

/// Hankel matrix of the degree-`k` action: `(d-k+1) x (k+1)`, entry
/// `(i, j) = v_{i+j}`.
pub fn binary_catalecticant<K: Scalar>(f: &BinaryDualForm<K>, k: usize) -> Matrix<K> {
    assert!(k <= f.degree, "k must not exceed the degree");
    Matrix::from_fn(f.degree - k + 1, k + 1, |i, j| f.values[i + j].clone())
}

/// Point of `P1` scaled so its largest coordinate is one.
pub fn normalize_binary(p: [Complex; 2]) -> [Complex; 2] {
    if p[0].norm() >= p[1].norm() {
        [Complex::new(1.0, 0.0), p[1] / p[0]]
    } else {
        [p[0] / p[1], Complex::new(1.0, 0.0)]
    }
}

/// Values of the dual of `(a s0 + b s1)^d`.
pub fn dual_power(p: [Complex; 2], d: usize) -> Vec<Complex> {
    let df = factorial(d as u32).to_f64().unwrap_or(f64::INFINITY);
    (0..=d)
        .map(|k| df * p[0].powu((d - k) as u32) * p[1].powu(k as u32))
        .collect()
}

pub fn reconstruct(points: &[[Complex; 2]], coeffs: &[Complex], d: usize) -> BinaryDualForm<Complex> {
    assert_eq!(points.len(), coeffs.len());
    let mut values = vec![Complex::zero(); d + 1];
    for (p, c) in points.iter().zip(coeffs) {
        for (v, w) in values.iter_mut().zip(dual_power(*p, d)) {
            *v += c * w;
        }
    }
    BinaryDualForm { degree: d, values }
}

#[derive(Clone, Debug, Serialize)]
pub struct BinaryDecomposition {
    /// Normalized points of `P1`.
    pub points: Vec<[Complex; 2]>,
    pub coeffs: Vec<Complex>,
    /// Degree of the kernel element used.
    pub k: usize,
    /// `|reconstruct - F| / |F|`.
    pub residual: f64,
}

/// Roots of a kernel element closer than this count as repeated.
const ROOT_SEPARATION: f64 = 1e-6;

/// Points of `P1` where the binary form `sum g_j s0^(k-j) s1^j` vanishes,
/// or the repeated factor if it is not square-free.
fn square_free_roots(g: &[Complex], k: usize) -> std::result::Result<Vec<[Complex; 2]>, String> {
    let r = roots_univariate(g).map_err(|e| e.to_string())?;
    let pts: Vec<[Complex; 2]> = r.projective().into_iter().map(normalize_binary).collect();
    debug_assert_eq!(pts.len(), k);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if projective_distance(&pts[i], &pts[j]) < ROOT_SEPARATION {
                let p = pts[i];
                return Err(format!("({:.6} s0 - {:.6} s1)^2", p[1], p[0]));
            }
        }
    }
    Ok(pts)
}

/// Kernel basis of a pencil with the last two coordinates set to the
/// identity, so that pencil parameters have a reproducible meaning.
fn canonical_pencil(kernel: &[Vec<Complex>]) -> [Vec<Complex>; 2] {
    let n = kernel[0].len();
    let (a, b) = (&kernel[0], &kernel[1]);
    let det = |i: usize, j: usize| a[i] * b[j] - a[j] * b[i];
    let mut best = (n - 2, n - 1);
    if det(n - 2, n - 1).norm() < 1e-3 {
        let mut best_abs = -1.0;
        for i in 0..n {
            for j in i + 1..n {
                let d = det(i, j).norm();
                if d > best_abs {
                    best_abs = d;
                    best = (i, j);
                }
            }
        }
    }
    let (i, j) = best;
    let d = det(i, j);
    // [a b] * inv([[a_i b_i], [a_j b_j]]) has rows i, j equal to the identity
    let c1: Vec<Complex> = (0..n).map(|r| (a[r] * b[j] - b[r] * a[j]) / d).collect();
    let c2: Vec<Complex> = (0..n).map(|r| (b[r] * a[i] - a[r] * b[i]) / d).collect();
    [c1, c2]
}

/// Coefficients of `F` in the duals of the given powers, least squares.
pub fn solve_coefficients(f: &BinaryDualForm<Complex>, points: &[[Complex; 2]]) -> (Vec<Complex>, f64) {
    let d = f.degree;
    let cols: Vec<Vec<Complex>> = points.iter().map(|p| dual_power(*p, d)).collect();
    let m = ComplexMatrix::from_fn(d + 1, points.len(), |i, j| cols[j][i]);
    let (c, res) = least_squares(&m, &f.values);
    (c, res / norm(&f.values).max(f64::MIN_POSITIVE))
}

/// Decomposes `F` as a sum of powers of linear forms.
///
/// The degree `k` of the kernel element increases from 1 until the kernel
/// holds a square-free form. A one-dimensional kernel fixes the points; for
/// a larger kernel the member `lambda * c1 + mu * c2` of the canonical pencil
/// basis is used, with `pencil = [lambda, mu]` (default `[1, 0]`).
pub fn sylvester_decompose<K: Scalar>(
    f: &BinaryDualForm<K>,
    pencil: Option<[Complex; 2]>,
) -> Result<BinaryDecomposition> {
    sylvester_decompose_with(f, pencil, DEFAULT_TAU)
}

pub fn sylvester_decompose_with<K: Scalar>(
    f: &BinaryDualForm<K>,
    pencil: Option<[Complex; 2]>,
    tau: f64,
) -> Result<BinaryDecomposition> {
    let f = f.to_complex();
    if norm(&f.values) == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let d = f.degree;
    let mut last_failure = None;
    for k in 1..=d {
        let cat = binary_catalecticant(&f, k);
        let rank = numeric_rank(&cat, tau);
        if rank == k + 1 {
            continue;
        }
        let kernel = kernel_numeric(&cat, tau);
        let (g, is_pencil) = if kernel.len() == 1 {
            (kernel[0].clone(), false)
        } else {
            let [c1, c2] = canonical_pencil(&kernel);
            let [l, m] = pencil.unwrap_or([Complex::new(1.0, 0.0), Complex::zero()]);
            let g: Vec<Complex> = c1.iter().zip(&c2).map(|(x, y)| l * x + m * y).collect();
            (g, true)
        };
        match square_free_roots(&g, k) {
            Ok(points) => {
                let (coeffs, residual) = solve_coefficients(&f, &points);
                return Ok(BinaryDecomposition {
                    points,
                    coeffs,
                    k,
                    residual,
                });
            }
            Err(factor) if is_pencil => return Err(Error::NotSquareFree { k, factor }),
            Err(factor) => last_failure = Some((k, factor)),
        }
    }
    let (k, factor) = last_failure.unwrap_or((d, "no kernel".into()));
    Err(Error::NotSquareFree { k, factor })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{complex_normal, rng};

    fn c(x: f64) -> Complex {
        Complex::new(x, 0.0)
    }

    fn random_dual(d: usize, r: usize, seed: u64) -> (BinaryDualForm<Complex>, Vec<[Complex; 2]>) {
        let mut g = rng(seed);
        let pts: Vec<[Complex; 2]> = (0..r)
            .map(|_| normalize_binary([complex_normal(&mut g), complex_normal(&mut g)]))
            .collect();
        let cs: Vec<Complex> = (0..r).map(|_| complex_normal(&mut g)).collect();
        (reconstruct(&pts, &cs, d), pts)
    }

    #[test]
    fn rank_one_catalecticant() {
        let f = BinaryDualForm::new(vec![c(120.0), c(0.0), c(0.0), c(0.0), c(0.0), c(0.0)]);
        assert_eq!(numeric_rank(&binary_catalecticant(&f, 2), 1e-8), 1);
        assert_eq!(f.values, dual_power([c(1.0), c(0.0)], 5));
    }

    #[test]
    fn planted_rank_two_quintic() {
        let mut v = vec![c(0.0); 6];
        v[0] = c(120.0);
        v[5] = c(120.0);
        let dec = sylvester_decompose(&BinaryDualForm::new(v), None).unwrap();
        assert_eq!(dec.k, 2);
        assert_eq!(dec.points.len(), 2);
        assert!(dec.residual < 1e-12);
        let has = |p: [Complex; 2]| dec.points.iter().any(|q| projective_distance(q, &p) < 1e-12);
        assert!(has([c(1.0), c(0.0)]) && has([c(0.0), c(1.0)]));
    }

    #[test]
    fn generic_quintic_has_three_points() {
        let (f, _) = random_dual(5, 6, 1);
        let cat = binary_catalecticant(&f, 3);
        assert_eq!((cat.rows(), cat.cols()), (3, 4));
        assert_eq!(numeric_rank(&cat, 1e-8), 3);
        let dec = sylvester_decompose(&f, None).unwrap();
        assert_eq!(dec.points.len(), 3);
        assert!(dec.residual < 1e-9);
    }

    #[test]
    fn sextic_pencil() {
        let (f, _) = random_dual(6, 7, 2);
        assert_eq!(kernel_numeric(&binary_catalecticant(&f, 4), 1e-8).len(), 2);
        let a = sylvester_decompose(&f, Some([c(1.0), c(0.0)])).unwrap();
        let b = sylvester_decompose(&f, Some([c(1.0), c(2.0)])).unwrap();
        assert_eq!(a.points.len(), 4);
        assert!(a.residual < 1e-9 && b.residual < 1e-9);
        assert!(projective_distance(&a.points[0], &b.points[0]) > 1e-6);
    }

    #[test]
    fn reconstruct_single_and_permuted() {
        let f = reconstruct(&[[c(1.0), c(0.0)]], &[c(1.0)], 3);
        assert_eq!(f.values, vec![c(6.0), c(0.0), c(0.0), c(0.0)]);
        let pts = [[c(1.0), c(0.5)], [c(0.2), c(1.0)]];
        let a = reconstruct(&pts, &[c(1.0), c(-2.0)], 4);
        let b = reconstruct(&[pts[1], pts[0]], &[c(-2.0), c(1.0)], 4);
        assert_eq!(a, b);
    }

    #[test]
    fn zero_form_rejected() {
        let f = BinaryDualForm::new(vec![c(0.0); 4]);
        assert!(matches!(sylvester_decompose(&f, None), Err(Error::ZeroPolynomial)));
    }
}
