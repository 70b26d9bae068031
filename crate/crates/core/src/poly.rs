//! Dense univariate polynomials over the rationals, coefficients ascending.

use num::traits::{One, Zero};

use crate::linalg::{Complex, Rational, Scalar};

pub type Poly = Vec<Rational>;

pub fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Degree, `None` for the zero polynomial.
pub fn degree(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn add(a: &[Rational], b: &[Rational]) -> Poly {
    let n = a.len().max(b.len());
    let z = Rational::zero();
    trim((0..n)
        .map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z))
        .collect())
}

pub fn scale(a: &[Rational], c: &Rational) -> Poly {
    trim(a.iter().map(|x| x * c).collect())
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Poly {
    add(a, &scale(b, &-Rational::one()))
}

pub fn mul(a: &[Rational], b: &[Rational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem(a: &[Rational], b: &[Rational]) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead = b[db].clone();
    let mut r = trim(a.to_vec());
    let mut q = vec![Rational::zero(); r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lead;
        let shift = dr - db;
        for (i, y) in b.iter().enumerate().take(db + 1) {
            r[shift + i] -= &c * y;
        }
        q[shift] = c;
        r = trim(r);
    }
    (trim(q), r)
}

/// Monic greatest common divisor (`[]` when both are zero).
pub fn gcd(a: &[Rational], b: &[Rational]) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    match degree(&x) {
        None => vec![],
        Some(d) => {
            let lead = x[d].clone();
            x.iter().map(|c| c / &lead).collect()
        }
    }
}

pub fn derivative(p: &[Rational]) -> Poly {
    trim(p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
        .collect())
}

pub fn eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// The polynomial of degree `< xs.len()` through the given values (Newton
/// divided differences).
pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> Poly {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut p: Poly = vec![];
    for i in (0..n).rev() {
        p = mul(&p, &[-xs[i].clone(), Rational::one()]);
        p = add(&p, &[coef[i].clone()]);
    }
    p
}

pub fn to_complex(p: &[Rational]) -> Vec<Complex> {
    p.iter().map(|c| c.to_complex()).collect()
}

pub fn mul_c(a: &[Complex], b: &[Complex]) -> Vec<Complex> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Complex::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn add_c(a: &[Complex], b: &[Complex]) -> Vec<Complex> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or_default() + b.get(i).copied().unwrap_or_default())
        .collect()
}

pub fn eval_c(p: &[Complex], x: Complex) -> Complex {
    p.iter().rev().fold(Complex::zero(), |acc, c| acc * x + c)
}

pub fn derivative_c(p: &[Complex]) -> Vec<Complex> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * i as f64)
        .collect()
}

/// Common root of several binary forms `sum p_i s0^(d-i) s1^i` of a common
/// formal degree `d`, decided exactly: a shared finite factor or a shared
/// root at `s0 = 0`.
pub fn binary_forms_share_root(forms: &[Poly], d: usize) -> bool {
    let nonzero: Vec<&Poly> = forms.iter().filter(|p| degree(p).is_some()).collect();
    if nonzero.is_empty() {
        return true;
    }
    let at_infinity = nonzero.iter().all(|p| degree(p).is_none_or(|k| k < d));
    if at_infinity {
        return true;
    }
    let g = nonzero
        .iter()
        .fold(vec![], |acc: Poly, p| gcd(&acc, p));
    degree(&g).is_some_and(|k| k > 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational;

    fn p(v: &[i64]) -> Poly {
        trim(v.iter().map(|&x| rational(x, 1)).collect())
    }

    #[test]
    fn gcd_of_products() {
        let a = mul(&p(&[1, 1]), &p(&[-2, 1]));
        let b = mul(&p(&[1, 1]), &p(&[3, 0, 1]));
        assert_eq!(gcd(&a, &b), p(&[1, 1]));
        assert_eq!(gcd(&p(&[1, 1]), &p(&[2, 1])), p(&[1]));
    }

    #[test]
    fn divrem_roundtrip() {
        let a = p(&[5, -3, 0, 2, 7]);
        let b = p(&[1, 0, 3]);
        let (q, r) = divrem(&a, &b);
        assert_eq!(add(&mul(&q, &b), &r), a);
        assert!(degree(&r).unwrap_or(0) < 2);
    }

    #[test]
    fn interpolation_recovers() {
        let f = p(&[3, -1, 4, 1, -5]);
        let xs: Vec<Rational> = (0..5).map(|i| rational(i, 1)).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| eval(&f, x)).collect();
        assert_eq!(interpolate(&xs, &ys), f);
    }

    #[test]
    fn shared_roots() {
        // s0*s1 and s0^2 share s0 = 0, i.e. the root at infinity of s = s1/s0
        assert!(binary_forms_share_root(&[p(&[0, 1]), p(&[1])], 2));
        assert!(!binary_forms_share_root(&[p(&[0, 1, 0]), p(&[1, 0, 1])], 2));
        assert!(binary_forms_share_root(&[p(&[-1, 1]), p(&[-1, 0, 1])], 2));
    }

    #[test]
    fn derivative_of_cube() {
        assert_eq!(derivative(&p(&[0, 0, 0, 1])), p(&[0, 0, 3]));
    }
}
