use nalgebra::{DMatrix, DVector};
use num::traits::Zero;

use super::{Complex, ComplexMatrix};

/// Default relative rank threshold: singular values at or below
/// `DEFAULT_TAU * sigma_1` count as zero.
pub const DEFAULT_TAU: f64 = 1e-8;

fn to_dmatrix(m: &ComplexMatrix) -> DMatrix<Complex> {
    debug_assert!(m.is_finite(), "non-finite matrix entry");
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| *m.get(i, j))
}

/// Full singular value decomposition data.
#[derive(Clone, Debug)]
pub struct Svd {
    /// Singular values in descending order.
    pub values: Vec<f64>,
    /// Right singular vectors, one per row, matching `values`; rows beyond
    /// `values.len()` span the remaining null directions.
    pub right: Vec<Vec<Complex>>,
}

/// SVD with a complete set of right singular vectors (wide inputs are padded
/// with zero rows so the null space is fully represented).
pub fn svd(m: &ComplexMatrix) -> Svd {
    let (rows, cols) = (m.rows(), m.cols());
    if cols == 0 {
        return Svd {
            values: vec![],
            right: vec![],
        };
    }
    let padded_rows = rows.max(cols);
    let mut a = DMatrix::<Complex>::zeros(padded_rows, cols);
    if rows > 0 {
        a.view_mut((0, 0), (rows, cols)).copy_from(&to_dmatrix(m));
    }
    let dec = a.svd(false, true);
    let v_t = dec.v_t.expect("requested right vectors");
    let mut idx: Vec<usize> = (0..dec.singular_values.len()).collect();
    idx.sort_by(|&i, &j| {
        dec.singular_values[j]
            .partial_cmp(&dec.singular_values[i])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = idx.iter().map(|&i| dec.singular_values[i]).collect();
    let right = idx
        .iter()
        .map(|&i| (0..cols).map(|j| v_t[(i, j)].conj()).collect())
        .collect();
    Svd { values, right }
}

/// Singular values in descending order (length `min(rows, cols)`).
pub fn svd_values(m: &ComplexMatrix) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return vec![];
    }
    let mut s: Vec<f64> = to_dmatrix(m).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    s
}

/// Number of singular values strictly above `tau * sigma_1`.
pub fn numeric_rank(m: &ComplexMatrix, tau: f64) -> usize {
    assert!(tau > 0.0, "tau must be positive");
    let s = svd_values(m);
    match s.first() {
        Some(&s1) if s1 > 0.0 => s.iter().filter(|&&x| x > tau * s1).count(),
        _ => 0,
    }
}

/// Orthonormal basis of the numeric right null space.
pub fn kernel_numeric(m: &ComplexMatrix, tau: f64) -> Vec<Vec<Complex>> {
    let cols = m.cols();
    if m.rows() == 0 {
        return (0..cols)
            .map(|j| {
                let mut e = vec![Complex::zero(); cols];
                e[j] = Complex::new(1.0, 0.0);
                e
            })
            .collect();
    }
    let rank = numeric_rank(m, tau);
    let dec = svd(m);
    dec.right.into_iter().skip(rank).collect()
}

/// Minimum-norm least-squares solution of `M x = b` and `||M x - b||`.
pub fn least_squares(m: &ComplexMatrix, b: &[Complex]) -> (Vec<Complex>, f64) {
    assert!(m.rows() >= 1, "least squares needs at least one row");
    assert_eq!(b.len(), m.rows());
    let a = to_dmatrix(m);
    let rhs = DVector::from_column_slice(b);
    let dec = a.clone().svd(true, true);
    let smax = dec.singular_values.iter().cloned().fold(0.0, f64::max);
    let eps = (smax * 1e-13).max(f64::MIN_POSITIVE);
    let x = dec.solve(&rhs, eps).expect("svd computed with both factors");
    let r = &a * &x - rhs;
    (x.iter().copied().collect(), r.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    #[test]
    fn diagonal_rank() {
        let m = Matrix::from_fn(3, 3, |i, j| {
            if i != j {
                c(0.0)
            } else {
                [c(3.0), c(2e-12), c(0.0)][i]
            }
        });
        assert_eq!(numeric_rank(&m, 1e-8), 1);
        assert_eq!(svd_values(&m)[0], 3.0);
    }

    #[test]
    fn unitary_has_full_rank() {
        // discrete Fourier matrix scaled to be unitary
        let n = 5;
        let m = Matrix::from_fn(n, n, |i, j| {
            Complex::from_polar(1.0 / (n as f64).sqrt(), 2.0 * std::f64::consts::PI * (i * j) as f64 / n as f64)
        });
        assert_eq!(numeric_rank(&m, 1e-8), 5);
        for s in svd_values(&m) {
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_matrix_rank_zero() {
        let m = ComplexMatrix::zeros(3, 2);
        assert_eq!(numeric_rank(&m, 1e-8), 0);
        assert_eq!(kernel_numeric(&m, 1e-8).len(), 2);
    }

    #[test]
    fn wide_kernel_is_complete() {
        let m = Matrix::from_rows(4, vec![vec![c(1.0), c(2.0), c(3.0), c(4.0)]]);
        let k = kernel_numeric(&m, 1e-8);
        assert_eq!(k.len(), 3);
        for v in &k {
            let r = m.mul_vec(v);
            assert!(r[0].norm() < 1e-12);
        }
    }

    #[test]
    fn identity_least_squares() {
        let m = ComplexMatrix::identity(3);
        let b = vec![Complex::new(1.0, 2.0), c(-3.0), Complex::new(0.0, 0.5)];
        let (x, r) = least_squares(&m, &b);
        assert!(r < 1e-14);
        for (a, b) in x.iter().zip(&b) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn overdetermined_consistent() {
        let m = Matrix::from_rows(2, vec![
            vec![c(1.0), c(1.0)],
            vec![c(1.0), c(-1.0)],
            vec![c(2.0), c(3.0)],
        ]);
        let x0 = [Complex::new(0.5, 1.0), c(-2.0)];
        let b = m.mul_vec(&x0);
        let (x, r) = least_squares(&m, &b);
        assert!(r < 1e-12);
        assert!((x[0] - x0[0]).norm() < 1e-12);
    }
}
