use nalgebra::DMatrix;
use num::traits::Zero;

use super::Complex;
use crate::error::{Error, Result};

/// Roots of a univariate polynomial read as a binary form.
///
/// `coeffs[i]` multiplies `s^i`; as a binary form the same vector is
/// `sum coeffs[i] s0^(d-i) s1^i` with `s = s1 / s0`. Vanishing top
/// coefficients mean roots at `s0 = 0`, reported in `at_infinity`.
#[derive(Clone, Debug)]
pub struct UnivariateRoots {
    pub roots: Vec<Complex>,
    pub at_infinity: usize,
}

impl UnivariateRoots {
    /// Total root count of the binary form (finite plus infinite).
    pub fn count(&self) -> usize {
        self.roots.len() + self.at_infinity
    }

    /// Roots as points `[s0 : s1]` of the projective line.
    pub fn projective(&self) -> Vec<[Complex; 2]> {
        let one = Complex::new(1.0, 0.0);
        let mut pts: Vec<[Complex; 2]> = self.roots.iter().map(|&r| [one, r]).collect();
        pts.extend(std::iter::repeat_n([Complex::zero(), one], self.at_infinity));
        pts
    }
}

fn horner(coeffs: &[Complex], x: Complex) -> (Complex, Complex) {
    let mut p = Complex::zero();
    let mut dp = Complex::zero();
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Roots via eigenvalues of the companion matrix, refined by Newton steps on
/// the original coefficients.
pub fn roots_univariate(coeffs: &[Complex]) -> Result<UnivariateRoots> {
    let Some(top) = coeffs.iter().rposition(|c| !c.is_zero()) else {
        return Err(Error::ZeroPolynomial);
    };
    let at_infinity = coeffs.len() - 1 - top;
    let low = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let mut roots = vec![Complex::zero(); low];
    let core = &coeffs[low..=top];
    let n = core.len() - 1;
    if n > 0 {
        let lead = core[n];
        let mut comp = DMatrix::<Complex>::zeros(n, n);
        for i in 1..n {
            comp[(i, i - 1)] = Complex::new(1.0, 0.0);
        }
        for i in 0..n {
            comp[(i, n - 1)] = -core[i] / lead;
        }
        let eig = comp
            .clone()
            .schur()
            .eigenvalues()
            .map(|v| v.iter().copied().collect::<Vec<_>>())
            .unwrap_or_else(|| comp.diagonal().iter().copied().collect());
        for mut z in eig {
            for _ in 0..3 {
                let (p, dp) = horner(core, z);
                if dp.norm() == 0.0 {
                    break;
                }
                let step = p / dp;
                let next = z - step;
                if !(next.re.is_finite() && next.im.is_finite()) {
                    break;
                }
                if horner(core, next).0.norm() > p.norm() {
                    break;
                }
                z = next;
            }
            roots.push(z);
        }
    }
    Ok(UnivariateRoots { roots, at_infinity })
}

/// Groups numerically coincident roots; returns representatives with
/// multiplicities.
pub fn group_roots(roots: &[Complex], tol: f64) -> Vec<(Complex, usize)> {
    let mut groups: Vec<(Complex, usize)> = Vec::new();
    for &r in roots {
        let scale = 1.0 + r.norm();
        match groups
            .iter_mut()
            .find(|(g, _)| (*g - r).norm() <= tol * scale)
        {
            Some(g) => g.1 += 1,
            None => groups.push((r, 1)),
        }
    }
    groups
}

/// Coefficients (ascending) of the monic polynomial with the given roots.
pub fn polynomial_from_roots(roots: &[Complex]) -> Vec<Complex> {
    let mut p = vec![Complex::new(1.0, 0.0)];
    for &r in roots {
        let mut next = vec![Complex::zero(); p.len() + 1];
        for (i, &c) in p.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * r;
        }
        p = next;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex {
        Complex::new(re, 0.0)
    }

    fn sorted_re(mut v: Vec<Complex>) -> Vec<f64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        v.iter().map(|z| z.re).collect()
    }

    #[test]
    fn square_minus_one() {
        let r = roots_univariate(&[c(-1.0), c(0.0), c(1.0)]).unwrap();
        let re = sorted_re(r.roots);
        assert!((re[0] + 1.0).abs() < 1e-14 && (re[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn cube_at_origin() {
        let r = roots_univariate(&[c(0.0), c(0.0), c(0.0), c(1.0)]).unwrap();
        assert_eq!(r.roots, vec![Complex::zero(); 3]);
        assert_eq!(r.at_infinity, 0);
    }

    #[test]
    fn leading_zeros_are_roots_at_infinity() {
        let r = roots_univariate(&[c(-2.0), c(1.0), c(0.0), c(0.0)]).unwrap();
        assert_eq!(r.at_infinity, 2);
        assert_eq!(r.roots.len(), 1);
        assert!((r.roots[0] - c(2.0)).norm() < 1e-14);
        assert_eq!(r.count(), 3);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(matches!(
            roots_univariate(&[c(0.0), c(0.0)]),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn grouping() {
        let g = group_roots(&[c(1.0), c(1.0 + 1e-12), c(2.0)], 1e-9);
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].1, 2);
    }
}
