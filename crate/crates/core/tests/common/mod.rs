//! Oracles shared by the integration tests. They use nalgebra and direct
//! formulas, not the crate's catalecticant or kernel code.
#![allow(dead_code)]

use multiapolar::linalg::{Complex, Rational};
use multiapolar::multigraded::{eval_monomial, exp_factorial, Degree, MultiForm, Surface};
use nalgebra::DMatrix;
use num::ToPrimitive;
use rand::Rng;

/// Monomial count of a degree class, in closed form.
pub fn closed_form_dim(surface: Surface, d: Degree) -> usize {
    let Degree(a, b) = d;
    if a < 0 || b < 0 {
        return 0;
    }
    match surface {
        Surface::P1xP1 => ((a + 1) * (b + 1)) as usize,
        // sum over j <= min(a, b) of (b - j + 1)
        Surface::F1 => {
            let m = a.min(b);
            ((m + 1) * (b + 1) - m * (m + 1) / 2) as usize
        }
    }
}

/// Generic rank of a bidegree `(a,b)` form: `2d+2` for `(2,2d)` (either
/// order), `ceil((a+1)(b+1)/3)` otherwise.
pub fn rank_oracle(a: i64, b: i64) -> usize {
    let two_even = |x: i64, y: i64| x == 2 && y % 2 == 0;
    if two_even(a, b) {
        (b + 2) as usize
    } else if two_even(b, a) {
        (a + 2) as usize
    } else {
        let n = (a + 1) * (b + 1);
        ((n + 2) / 3) as usize
    }
}

/// `dim VPS` from the dimension proposition: 3 for `(2,2d)`, otherwise
/// `3 (ceil(n/3) - n/3)` with `n = (a+1)(b+1)`.
pub fn vps_oracle(a: i64, b: i64) -> i64 {
    if (a == 2 && b % 2 == 0) || (b == 2 && a % 2 == 0) {
        3
    } else {
        let n = (a + 1) * (b + 1);
        3 * ((n + 2) / 3) - n
    }
}

pub fn dmatrix(rows: &[Vec<Complex>]) -> DMatrix<Complex> {
    let cols = rows.first().map_or(0, |r| r.len());
    DMatrix::from_fn(rows.len(), cols, |i, j| rows[i][j])
}

pub fn singular_values(rows: &[Vec<Complex>]) -> Vec<f64> {
    let mut s: Vec<f64> = dmatrix(rows).singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn numeric_rank(rows: &[Vec<Complex>], tau: f64) -> usize {
    let s = singular_values(rows);
    let top = s.first().copied().unwrap_or(0.0);
    s.iter().filter(|&&x| x > tau * top).count()
}

/// Orthonormal basis of the null space, through the SVD of `M^H M`.
pub fn null_space(rows: &[Vec<Complex>], tau: f64) -> Vec<Vec<Complex>> {
    let m = dmatrix(rows);
    let n = m.ncols();
    let h = m.adjoint() * &m;
    let svd = h.svd(false, true);
    let vt = svd.v_t.expect("requested");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    (0..n)
        .filter(|&i| svd.singular_values[i] <= tau * tau * top)
        .map(|i| vt.row(i).iter().map(|c| c.conj()).collect())
        .collect()
}

/// Value vector of `f` (`m! f_m` over the monomials of its degree).
pub fn values(f: &MultiForm<Rational>) -> Vec<Complex> {
    f.surface()
        .monomials(f.degree())
        .iter()
        .map(|e| {
            let v = f.coeff(e) * Rational::from_integer(exp_factorial(e));
            Complex::new(v.to_f64().unwrap(), 0.0)
        })
        .collect()
}

/// Row of monomial values at `p`, unit-normalized.
pub fn evaluation_row(surface: Surface, d: Degree, p: &[Complex; 4]) -> Vec<Complex> {
    let row: Vec<Complex> = surface.monomials(d).iter().map(|e| eval_monomial(e, p)).collect();
    let n = row.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    row.into_iter().map(|c| c / n).collect()
}

/// Distance of the value vector of `f` from the span of the point
/// evaluations, relative to `|f|` (least squares by SVD).
pub fn span_residual(f: &MultiForm<Rational>, points: &[[Complex; 4]]) -> f64 {
    let v = values(f);
    let rows: Vec<Vec<Complex>> = points
        .iter()
        .map(|p| evaluation_row(f.surface(), f.degree(), p))
        .collect();
    let a = dmatrix(&rows).transpose();
    let b = nalgebra::DVector::from_vec(v.clone());
    let x = a.clone().svd(true, true).solve(&b, 1e-13).expect("svd solve");
    let r = &a * x - &b;
    r.norm() / b.norm()
}

/// `|g(p)|` relative to `|g|` and the monomial vector of `p`.
pub fn normalized_value(surface: Surface, d: Degree, coeffs: &[Complex], p: &[Complex; 4]) -> f64 {
    let mons = surface.monomials(d);
    let raw: Vec<Complex> = mons.iter().map(|e| eval_monomial(e, p)).collect();
    let v: Complex = raw.iter().zip(coeffs).map(|(m, c)| m * c).sum();
    let nm = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let nc = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.norm() / (nm * nc)
}

/// Numeric catalecticant `T_B -> S_{A-B}` from the coefficients of `f`,
/// with the entry at `(rho, gamma)` equal to `(gamma+rho)! f_{gamma+rho}`.
pub fn numeric_catalecticant(f: &MultiForm<Rational>, b: Degree) -> Vec<Vec<Complex>> {
    let s = f.surface();
    let rows = s.monomials(f.degree() - b);
    let cols = s.monomials(b);
    rows.iter()
        .map(|r| {
            cols.iter()
                .map(|c| {
                    let e = [r[0] + c[0], r[1] + c[1], r[2] + c[2], r[3] + c[3]];
                    let v = f.coeff(&e) * Rational::from_integer(exp_factorial(&e));
                    Complex::new(v.to_f64().unwrap(), 0.0)
                })
                .collect()
        })
        .collect()
}

/// Affine dimension of the `k`-th secant cone by a floating Jacobian at
/// random complex points.
pub fn numeric_terracini(surface: Surface, d: Degree, k: usize, seed: u64) -> usize {
    let mut g = multiapolar::rng::rng(seed ^ 0xa5a5);
    let mons = surface.monomials(d);
    let mut rows = Vec::new();
    for _ in 0..k {
        let p: [Complex; 4] = std::array::from_fn(|_| Complex::new(g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0)));
        for c in 0..4 {
            rows.push(
                mons.iter()
                    .map(|m| {
                        if m[c] == 0 {
                            Complex::new(0.0, 0.0)
                        } else {
                            let mut e = *m;
                            e[c] -= 1;
                            eval_monomial(&e, &p) * m[c] as f64
                        }
                    })
                    .collect(),
            );
        }
    }
    numeric_rank(&rows, 1e-9)
}

/// `sum c_i ev_{p_i}` for rational points: the form with values
/// `sum c_i p_i^m`.
pub fn planted_form(surface: Surface, d: Degree, points: &[[Rational; 4]], coeffs: &[Rational]) -> MultiForm<Rational> {
    let mons = surface.monomials(d);
    let vals: Vec<Rational> = mons
        .iter()
        .map(|e| {
            points
                .iter()
                .zip(coeffs)
                .map(|(p, c)| c * eval_monomial(e, p))
                .fold(Rational::from_integer(0.into()), |a, b| a + b)
        })
        .collect();
    MultiForm::from_values(surface, d, &vals)
}

pub fn set_distance(surface: Surface, a: &[[Complex; 4]], b: &[[Complex; 4]]) -> f64 {
    a.iter()
        .map(|p| b.iter().map(|q| surface.point_distance(p, q)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max)
}

/// Complex number from its `[re, im]` JSON encoding.
pub fn complex_of(v: &serde_json::Value) -> Complex {
    Complex::new(v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

pub fn point_of(v: &serde_json::Value) -> [Complex; 4] {
    std::array::from_fn(|i| complex_of(&v[i]))
}
