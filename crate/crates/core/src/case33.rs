//! Forms of bidegree `(3,3)`: the harmonic cubic in `z0..z3`, its
//! pentahedron, twisted cubics through six points and apolar length-6
//! schemes cut on the Segre quadric.

use std::time::Instant;

use num::traits::{One, Zero};
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use crate::apolarity::{generation_check, is_apolar, orthogonal_dimension, span_dimension, ApolarityVerdict, PointScheme};
use crate::decompose::{
    decompose_successes, monomial_value, projective_monomials, DecomposeOptions, Decomposition, DecompositionProblem,
};
use crate::error::{Error, Result};
use crate::linalg::{
    kernel_exact, kernel_numeric, least_squares, norm, numeric_rank, projective_distance, rank_of_rows,
    roots_univariate, solve_exact, Complex, ComplexMatrix, Rational, RationalMatrix, Scalar, Solve,
};
use crate::multigraded::{diff_apply, random_form, Degree, MultiForm, Side, Surface};
use crate::poly::{add_c, mul_c};
use crate::report::{CaseReport, Tolerances};
use crate::rng::{complex_normal, derive_seed, rng};

const A: Degree = Degree(3, 3);

fn cubic_monomials() -> Vec<Vec<u32>> {
    projective_monomials(4, 3)
}

fn factorial(m: &[u32]) -> i64 {
    m.iter().map(|&e| (1..=e as i64).product::<i64>()).product()
}

/// Exponent of the image of `z^m` under `z = (x0y0, x0y1, x1y0, x1y1)`.
fn segre_exponent(m: &[u32]) -> [u32; 4] {
    [m[0] + m[1], m[2] + m[3], m[0] + m[2], m[1] + m[3]]
}

/// The cubic `F` in `z0..z3` with `F(x0y0, x0y1, x1y0, x1y1) = f` and
/// `(d0 d3 - d1 d2) F = 0`.
#[derive(Clone, Debug)]
pub struct CubicLift {
    pub f: MultiForm<Rational>,
    /// Coefficients on the cubic monomials (lex descending).
    pub coefficients: Vec<Rational>,
}

impl CubicLift {
    /// Dual values `m! F_m`, the target of a power-sum decomposition.
    pub fn values(&self) -> Vec<Rational> {
        cubic_values(&self.coefficients)
    }

    pub fn display(&self) -> Vec<String> {
        self.coefficients.iter().map(|c| c.to_string()).collect()
    }
}

pub fn cubic_values(coefficients: &[Rational]) -> Vec<Rational> {
    cubic_monomials()
        .iter()
        .zip(coefficients)
        .map(|(m, c)| c * Rational::from_integer(factorial(m).into()))
        .collect()
}

/// Rows of `F -> (d0 d3 - d1 d2) F`, a linear form in `z`.
fn segre_laplacian_rows() -> Vec<Vec<Rational>> {
    let mons = cubic_monomials();
    let mut rows = vec![vec![Rational::zero(); mons.len()]; 4];
    for (j, m) in mons.iter().enumerate() {
        for (a, b, sign) in [(0, 3, 1), (1, 2, -1)] {
            let mut e = m.clone();
            if e[a] == 0 || e[b] == 0 {
                continue;
            }
            e[a] -= 1;
            e[b] -= 1;
            let i = e.iter().position(|&x| x == 1).expect("linear monomial");
            rows[i][j] += Rational::from_integer((sign * (m[a] * m[b]) as i64).into());
        }
    }
    rows
}

pub fn harmonic_lift(f: &MultiForm<Rational>) -> Result<CubicLift> {
    if f.surface() != Surface::P1xP1 || f.degree() != A || f.side() != Side::S {
        return Err(Error::Invalid("the lift needs an S-form of bidegree (3,3) on P1xP1".into()));
    }
    let mons = cubic_monomials();
    let targets = Surface::P1xP1.monomials(A);
    let mut rows: Vec<Vec<Rational>> = targets
        .iter()
        .map(|t| {
            mons.iter()
                .map(|m| if segre_exponent(m) == *t { Rational::one() } else { Rational::zero() })
                .collect()
        })
        .collect();
    let mut rhs: Vec<Rational> = targets.iter().map(|t| f.coeff(t)).collect();
    rows.extend(segre_laplacian_rows());
    rhs.extend(vec![Rational::zero(); 4]);
    let m = RationalMatrix::from_rows(mons.len(), rows);
    assert_eq!(crate::linalg::rank_exact(&m), 20, "the lift system is always invertible");
    match solve_exact(&m, &rhs) {
        Solve::Solution(coefficients) => Ok(CubicLift {
            f: f.clone(),
            coefficients,
        }),
        Solve::Inconsistent => unreachable!("square invertible system"),
    }
}

/// Matrix of `Q -> Q(d) F` from quadrics to linear forms.
pub fn cubic_catalecticant(coefficients: &[Rational]) -> RationalMatrix {
    let v = cubic_values(coefficients);
    let mons = cubic_monomials();
    let quads = projective_monomials(4, 2);
    RationalMatrix::from_fn(4, quads.len(), |j, a| {
        let mut e = quads[a].clone();
        e[j] += 1;
        v[mons.iter().position(|x| *x == e).expect("cubic monomial")].clone()
    })
}

/// Quadrics `Q(w)` with `Q(d) F = 0`, as coefficient vectors on
/// `projective_monomials(4, 2)`.
pub fn cubic_perp2(coefficients: &[Rational]) -> Vec<Vec<Rational>> {
    kernel_exact(&cubic_catalecticant(coefficients))
}

/// `w^a -> t0^(a0+a1) t1^(a2+a3) u0^(a0+a2) u1^(a1+a3)`.
pub fn substitute_quadric(q: &[Rational]) -> MultiForm<Rational> {
    let mut out = MultiForm::zero(Surface::P1xP1, Side::T, Degree(2, 2));
    for (a, c) in projective_monomials(4, 2).iter().zip(q) {
        let term = MultiForm::monomial(Surface::P1xP1, Side::T, segre_exponent(a), c.clone());
        out = out.add(&term).expect("same degree");
    }
    out
}

fn segre_quadric_coefficients() -> Vec<Rational> {
    projective_monomials(4, 2)
        .iter()
        .map(|a| match a.as_slice() {
            [1, 0, 0, 1] => Rational::one(),
            [0, 1, 1, 0] => -Rational::one(),
            _ => Rational::zero(),
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PerpReport {
    /// `dim F⊥` in degree 2.
    pub perp_dim: usize,
    pub contains_segre: bool,
    /// Dimension of the image of `F⊥_2` in `T_{2,2}`.
    pub image_dim: usize,
    pub image_inside_ideal: bool,
    pub ideal_dim: usize,
    /// Substitution residual `F(z(x,y)) - f` (exact: zero or not).
    pub substitution_exact: bool,
    pub harmonic: bool,
}

impl PerpReport {
    pub fn ok(&self) -> bool {
        self.perp_dim == 6
            && self.contains_segre
            && self.image_dim == 5
            && self.image_inside_ideal
            && self.ideal_dim == 5
            && self.substitution_exact
            && self.harmonic
    }
}

pub fn perp_report(lift: &CubicLift) -> PerpReport {
    let perp = cubic_perp2(&lift.coefficients);
    let with_segre: Vec<Vec<Rational>> = perp.iter().cloned().chain([segre_quadric_coefficients()]).collect();
    let contains_segre = rank_of_rows(&with_segre) == perp.len();
    let images: Vec<MultiForm<Rational>> = perp.iter().map(|q| substitute_quadric(q)).collect();
    let image_inside_ideal = images
        .iter()
        .all(|g| diff_apply(g, &lift.f).is_ok_and(|h| h.is_zero()));
    let mut sub = MultiForm::zero(Surface::P1xP1, Side::S, A);
    for (m, c) in cubic_monomials().iter().zip(&lift.coefficients) {
        sub = sub
            .add(&MultiForm::monomial(Surface::P1xP1, Side::S, segre_exponent(m), c.clone()))
            .expect("same degree");
    }
    let substitution_exact = sub == lift.f;
    let harmonic = segre_laplacian_rows().iter().all(|r| {
        r.iter()
            .zip(&lift.coefficients)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            .is_zero()
    });
    PerpReport {
        perp_dim: perp.len(),
        contains_segre,
        image_dim: span_dimension(&images),
        image_inside_ideal,
        ideal_dim: orthogonal_dimension(&lift.f, Degree(2, 2)),
        substitution_exact,
        harmonic,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Pentahedron {
    /// Points of `P^3` (unit norm), the coefficient vectors of the `L_i`.
    pub points: Vec<[Complex; 4]>,
    pub coeffs: Vec<Complex>,
    pub residual: f64,
    /// Successful starts that agree with the first one.
    pub agreeing_starts: usize,
    pub successful_starts: usize,
    /// Largest point mismatch between agreeing starts.
    pub max_disagreement: f64,
    /// Dimension of quadrics through the five points.
    pub quadric_dim: usize,
    /// Largest `|Q(d) F| / |F|` over those quadrics.
    pub quadric_perp_residual: f64,
    /// Smallest `|p0 p3 - p1 p2|` over the unit points.
    pub min_segre_value: f64,
}

impl Pentahedron {
    pub fn ok(&self) -> bool {
        self.agreeing_starts >= 3
            && self.max_disagreement < 1e-6
            && self.quadric_dim == 5
            && self.quadric_perp_residual < 1e-8
            && self.min_segre_value > 1e-6
    }
}

pub const PENTAHEDRON_AGREEMENT: f64 = 1e-6;

fn unit(v: &[Complex]) -> [Complex; 4] {
    let n = norm(v);
    std::array::from_fn(|i| v[i] / n)
}

/// Largest distance after the best matching of `a` to `b` (greedy on the
/// nearest remaining point).
fn set_distance(a: &[[Complex; 4]], b: &[[Complex; 4]]) -> f64 {
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for p in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, q)| (j, projective_distance(p, q)))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("same length");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

fn segre_value(p: &[Complex; 4]) -> Complex {
    p[0] * p[3] - p[1] * p[2]
}

/// Quadric evaluation rows for points of `P^3`.
fn quadric_rows(points: &[[Complex; 4]]) -> ComplexMatrix {
    let quads = projective_monomials(4, 2);
    ComplexMatrix::from_rows(
        quads.len(),
        points
            .iter()
            .map(|p| quads.iter().map(|m| monomial_value(m, p)).collect())
            .collect(),
    )
}

/// Power-sum decomposition of a cubic in four variables with five terms,
/// certified by agreement of several independent starts.
pub fn pentahedron_of_cubic(coefficients: &[Rational], seed: u64, restarts: usize) -> Result<Pentahedron> {
    let values: Vec<Complex> = cubic_values(coefficients).iter().map(|x| x.to_complex()).collect();
    let options = DecomposeOptions {
        restarts,
        ..DecomposeOptions::default()
    };
    let problem = DecompositionProblem::projective(4, 3, values.clone(), 5, options);
    let (found, best) = decompose_successes(&problem, seed, 3);
    let Some(first) = found.first() else {
        return Err(Error::Exhausted {
            restarts,
            best_residual: best,
        });
    };
    let as_points = |d: &Decomposition| -> Vec<[Complex; 4]> { d.points.iter().map(|p| unit(p)).collect() };
    let reference = as_points(first);
    let mut agreeing = 0;
    let mut disagreement: f64 = 0.0;
    for d in &found {
        let dist = set_distance(&as_points(d), &reference);
        disagreement = disagreement.max(dist);
        if dist < PENTAHEDRON_AGREEMENT {
            agreeing += 1;
        }
    }
    let rows = quadric_rows(&reference);
    let quadrics = kernel_numeric(&rows, 1e-8);
    let cat = cubic_catalecticant(coefficients).to_complex();
    let cat_norm = norm(&(0..cat.rows()).flat_map(|i| cat.row(i).to_vec()).collect::<Vec<_>>());
    let quadric_perp_residual = quadrics
        .iter()
        .map(|q| norm(&cat.mul_vec(q)) / (cat_norm * norm(q)))
        .fold(0.0, f64::max);
    Ok(Pentahedron {
        min_segre_value: reference.iter().map(|p| segre_value(p).norm()).fold(f64::INFINITY, f64::min),
        points: reference,
        coeffs: first.coeffs.clone(),
        residual: first.residual,
        agreeing_starts: agreeing,
        successful_starts: found.len(),
        max_disagreement: disagreement,
        quadric_dim: quadrics.len(),
        quadric_perp_residual,
    })
}

pub fn pentahedron(lift: &CubicLift, seed: u64, restarts: usize) -> Result<Pentahedron> {
    pentahedron_of_cubic(&lift.coefficients, seed, restarts)
}

type VecPoly = Vec<Vec<Complex>>;

/// Symmetric matrix of a quadric given on `projective_monomials(n, 2)`.
fn quadric_matrix(n: usize, q: &[Complex]) -> Vec<Vec<Complex>> {
    let mut s = vec![vec![Complex::zero(); n]; n];
    for (m, &c) in projective_monomials(n, 2).iter().zip(q) {
        let idx: Vec<usize> = (0..n).flat_map(|i| std::iter::repeat_n(i, m[i] as usize)).collect();
        if idx[0] == idx[1] {
            s[idx[0]][idx[0]] += c;
        } else {
            s[idx[0]][idx[1]] += c * 0.5;
            s[idx[1]][idx[0]] += c * 0.5;
        }
    }
    s
}

fn bilinear(s: &[Vec<Complex>], a: &[Complex], b: &[Complex]) -> Complex {
    let mut acc = Complex::zero();
    for (i, row) in s.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            acc += a[i] * x * b[j];
        }
    }
    acc
}

fn bilinear_poly(s: &[Vec<Complex>], a: &VecPoly, b: &VecPoly) -> Vec<Complex> {
    let mut acc = Vec::new();
    for (i, row) in s.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let term: Vec<Complex> = mul_c(&a[i], &b[j]).iter().map(|c| c * x).collect();
            acc = add_c(&acc, &term);
        }
    }
    acc
}

fn mat_vec(m: &[Vec<Complex>], v: &[Complex]) -> Vec<Complex> {
    m.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// `M^T S M`.
fn pull_back(s: &[Vec<Complex>], m: &[Vec<Complex>]) -> Vec<Vec<Complex>> {
    let n = m[0].len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let ci: Vec<Complex> = m.iter().map(|r| r[i]).collect();
                    let cj: Vec<Complex> = m.iter().map(|r| r[j]).collect();
                    bilinear(s, &ci, &cj)
                })
                .collect()
        })
        .collect()
}

/// A twisted cubic `s -> sum_k c_k s0^(3-k) s1^k` in `P^3`.
#[derive(Clone, Debug, Serialize)]
pub struct TwistedCubic {
    /// `coeffs[k]` is the coefficient vector of `s0^(3-k) s1^k`.
    pub coeffs: [[Complex; 4]; 4],
    pub coefficient_rank: usize,
    /// Largest distance from an input point to the curve.
    pub max_point_residual: f64,
}

impl TwistedCubic {
    pub fn eval(&self, s: [Complex; 2]) -> [Complex; 4] {
        std::array::from_fn(|i| {
            (0..4)
                .map(|k| self.coeffs[k][i] * s[0].powu(3 - k as u32) * s[1].powu(k as u32))
                .sum()
        })
    }

    /// Component `i` as a polynomial in `s = s1 / s0` (ascending).
    fn component(&self, i: usize) -> Vec<Complex> {
        (0..4).map(|k| self.coeffs[k][i]).collect()
    }

    /// Distance from `p` to the curve and the closest parameter.
    pub fn distance_to(&self, p: &[Complex; 4]) -> (f64, [Complex; 2]) {
        let j = Complex::pivot_index(p).expect("nonzero point");
        let mut best = (f64::INFINITY, [Complex::one(), Complex::zero()]);
        for i in (0..4).filter(|&i| i != j) {
            let h: Vec<Complex> = self
                .component(i)
                .iter()
                .zip(self.component(j))
                .map(|(a, b)| a * p[j] - b * p[i])
                .collect();
            let Ok(r) = roots_univariate(&h) else { continue };
            for s in r.projective() {
                let d = projective_distance(&self.eval(s), p);
                if d < best.0 {
                    best = (d, s);
                }
            }
        }
        best
    }
}

/// Rank conditions for Castelnuovo's construction.
fn check_general_position(points: &[[Complex; 4]]) -> Result<()> {
    let rank = |idx: &[usize]| {
        let m = ComplexMatrix::from_rows(4, idx.iter().map(|&i| points[i].to_vec()).collect());
        numeric_rank(&m, 1e-8)
    };
    let n = points.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if rank(&[a, b, c]) < 3 {
                    return Err(Error::SpecialPosition(format!("points {a}, {b}, {c} are collinear")));
                }
            }
        }
    }
    for skip in 0..n {
        let idx: Vec<usize> = (0..n).filter(|&i| i != skip).collect();
        if rank(&idx) < 4 {
            return Err(Error::SpecialPosition(format!("the points other than {skip} are coplanar")));
        }
    }
    Ok(())
}

/// Rows spanning the annihilator of `p`: a projection `P^3 -> P^2` from `p`.
fn projection_from(p: &[Complex; 4]) -> Vec<Vec<Complex>> {
    kernel_numeric(&ComplexMatrix::from_rows(4, vec![p.to_vec()]), 1e-12)
}

/// Cone over the conic through the projections of `others` from `vertex`.
type Rows = Vec<Vec<Complex>>;

fn cone(vertex: &[Complex; 4], others: &[[Complex; 4]]) -> Result<(Rows, Rows, Rows)> {
    let m = projection_from(vertex);
    let images: Vec<Vec<Complex>> = others.iter().map(|q| mat_vec(&m, q)).collect();
    let conics = projective_monomials(3, 2);
    let rows = ComplexMatrix::from_rows(
        6,
        images.iter().map(|q| conics.iter().map(|c| monomial_value(c, q)).collect()).collect(),
    );
    let kernel = kernel_numeric(&rows, 1e-10);
    if kernel.len() != 1 {
        return Err(Error::SpecialPosition(format!(
            "{} conics through the projected points",
            kernel.len()
        )));
    }
    let conic = quadric_matrix(3, &kernel[0]);
    let cone = pull_back(&conic, &m);
    Ok((m, conic, cone))
}

/// The twisted cubic through six points in general position, built from
/// the quadric cones with vertices at the two anchors.
pub fn twisted_cubic_through(points: &[[Complex; 4]], anchors: (usize, usize)) -> Result<TwistedCubic> {
    if points.len() != 6 {
        return Err(Error::Invalid("a twisted cubic needs six points".into()));
    }
    check_general_position(points)?;
    let (a, b) = anchors;
    let p1 = points[a];
    let p2 = points[b];
    let rest = |skip: usize| -> Vec<[Complex; 4]> {
        (0..6).filter(|&i| i != skip).map(|i| points[i]).collect()
    };
    let (m1, conic1, _) = cone(&p1, &rest(a))?;
    let (_, _, cone2) = cone(&p2, &rest(b))?;

    // lines of P^2 through q = image of p2, tangent direction sent to s = ∞
    let q = mat_vec(&m1, &p2);
    let grad = mat_vec(&conic1, &q);
    let plane = kernel_numeric(&ComplexMatrix::from_rows(3, vec![grad]), 1e-12);
    let qh = |v: &[Complex]| -> Complex { q.iter().zip(v).map(|(x, y)| x.conj() * y).sum() };
    let d0: Vec<Complex> = plane[0]
        .iter()
        .zip(&plane[1])
        .map(|(x, y)| x * qh(&plane[1]) - y * qh(&plane[0]))
        .collect();
    let mut g = rng(0x7c);
    let d1: Vec<Complex> = (0..3).map(|_| complex_normal(&mut g)).collect();
    let d: VecPoly = (0..3).map(|i| vec![d1[i], d0[i]]).collect();
    let cd = bilinear_poly(&conic1, &d, &d);
    let bqd = bilinear(&conic1, &q, &d1);
    // c(s) = C(d) q - 2 B(q, d) d
    let c: VecPoly = (0..3)
        .map(|i| {
            let first: Vec<Complex> = cd.iter().map(|x| x * q[i]).collect();
            let second: Vec<Complex> = d[i].iter().map(|x| -(x * bqd * 2.0)).collect();
            add_c(&first, &second)
        })
        .collect();
    // right inverse of the projection
    let mc = ComplexMatrix::from_rows(4, m1.clone());
    let r: Vec<Vec<Complex>> = (0..3)
        .map(|j| {
            let e: Vec<Complex> = (0..3).map(|i| if i == j { Complex::one() } else { Complex::zero() }).collect();
            least_squares(&mc, &e).0
        })
        .collect();
    let x: VecPoly = (0..4)
        .map(|i| (0..3).fold(Vec::new(), |acc, j| add_c(&acc, &c[j].iter().map(|v| v * r[j][i]).collect::<Vec<_>>())))
        .collect();
    // second intersection of the ruling {α p1 + β X} with the other cone
    let q2x = bilinear_poly(&cone2, &x, &x);
    let p1poly: VecPoly = p1.iter().map(|&v| vec![v]).collect();
    let b2 = bilinear_poly(&cone2, &p1poly, &x);
    let z: VecPoly = (0..4)
        .map(|i| {
            let first: Vec<Complex> = q2x.iter().map(|v| v * p1[i]).collect();
            let second: Vec<Complex> = mul_c(&b2, &x[i]).iter().map(|v| -(v * 2.0)).collect();
            let mut p = add_c(&first, &second);
            p.resize(5, Complex::zero());
            p
        })
        .collect();
    let scale = z.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    let top = (0..4).map(|i| z[i][4].norm()).fold(0.0, f64::max);
    if top > 1e-8 * scale {
        return Err(Error::Degenerate(format!("quartic term {:.2e} does not vanish", top / scale)));
    }
    let coeffs: [[Complex; 4]; 4] = std::array::from_fn(|k| std::array::from_fn(|i| z[i][k] / scale));
    let cm = ComplexMatrix::from_rows(4, coeffs.iter().map(|r| r.to_vec()).collect());
    let mut curve = TwistedCubic {
        coefficient_rank: numeric_rank(&cm, 1e-8),
        coeffs,
        max_point_residual: 0.0,
    };
    curve.max_point_residual = points.iter().map(|p| curve.distance_to(p).0).fold(0.0, f64::max);
    Ok(curve)
}

/// The unit point of `P^3` on the Segre quadric for `(x, y)`.
pub fn segre_point(p: &[Complex; 4]) -> [Complex; 4] {
    unit(&[p[0] * p[2], p[0] * p[3], p[1] * p[2], p[1] * p[3]])
}

/// `([x], [y])` from a point of the Segre quadric.
pub fn segre_factor(w: &[Complex; 4]) -> [Complex; 4] {
    let (c0, c1) = ([w[0], w[2]], [w[1], w[3]]);
    let x = if norm(&c0) >= norm(&c1) { c0 } else { c1 };
    let (r0, r1) = ([w[0], w[1]], [w[2], w[3]]);
    let y = if norm(&r0) >= norm(&r1) { r0 } else { r1 };
    let x = unit2(x);
    let y = unit2(y);
    [x[0], x[1], y[0], y[1]]
}

fn unit2(v: [Complex; 2]) -> [Complex; 2] {
    let n = norm(&v);
    [v[0] / n, v[1] / n]
}

#[derive(Clone, Debug, Serialize)]
pub struct Vps33Sample {
    pub points: Vec<[Complex; 4]>,
    pub quadric_point: [Complex; 4],
    pub curve_residual: f64,
    /// Largest `|det|` of the 2x2 arrangement of the six unit quadric points.
    pub max_determinant: f64,
    /// Distance from the drawn quadric point to the nearest of the six.
    pub planted_distance: f64,
    pub apolarity: ApolarityVerdict,
    pub resamples: usize,
}

fn no_three_coincide(points: &[[Complex; 4]], tol: f64) -> bool {
    let xs: Vec<[Complex; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
    for a in 0..xs.len() {
        let close = (0..xs.len())
            .filter(|&b| b != a && projective_distance(&xs[a], &xs[b]) < tol)
            .count();
        if close >= 2 {
            return false;
        }
    }
    true
}

fn try_sample<R: Rng>(f: &MultiForm<Complex>, penta: &Pentahedron, g: &mut R, tol: f64) -> Result<Vps33Sample> {
    let raw = [complex_normal(g), complex_normal(g), complex_normal(g), complex_normal(g)];
    let w = segre_point(&raw);
    let mut six = penta.points.clone();
    six.push(w);
    let curve = twisted_cubic_through(&six, (0, 1))?;
    let comps: Vec<Vec<Complex>> = (0..4).map(|i| curve.component(i)).collect();
    let sextic = add_c(
        &mul_c(&comps[0], &comps[3]),
        &mul_c(&comps[1], &comps[2]).iter().map(|v| -v).collect::<Vec<_>>(),
    );
    let roots = roots_univariate(&sextic)?.projective();
    if roots.len() != 6 {
        return Err(Error::Degenerate(format!("{} intersection points", roots.len())));
    }
    let on_quadric: Vec<[Complex; 4]> = roots.iter().map(|&s| unit(&curve.eval(s))).collect();
    for i in 0..6 {
        for j in i + 1..6 {
            if projective_distance(&on_quadric[i], &on_quadric[j]) < 1e-6 {
                return Err(Error::Degenerate("clustered intersection points".into()));
            }
        }
    }
    let max_determinant = on_quadric.iter().map(|p| segre_value(p).norm()).fold(0.0, f64::max);
    let planted_distance = on_quadric
        .iter()
        .map(|p| projective_distance(p, &w))
        .fold(f64::INFINITY, f64::min);
    let points: Vec<[Complex; 4]> = on_quadric.iter().map(segre_factor).collect();
    if !no_three_coincide(&points, 1e-6) {
        return Err(Error::SpecialPosition("three points share a first factor".into()));
    }
    let scheme = PointScheme::new(Surface::P1xP1, points.clone())?;
    let apolarity = is_apolar(&scheme, f, tol)?;
    Ok(Vps33Sample {
        points,
        quadric_point: w,
        curve_residual: curve.max_point_residual,
        max_determinant,
        planted_distance,
        apolarity,
        resamples: 0,
    })
}

/// A length-6 scheme apolar to `f`: the Segre quadric cut with the twisted
/// cubic through the pentahedron and a random quadric point.
pub fn vps33_sample(lift: &CubicLift, penta: &Pentahedron, seed: u64) -> Result<Vps33Sample> {
    let f = lift.f.to_complex();
    let mut last = None;
    for attempt in 0..8 {
        let mut g = rng(derive_seed(seed, attempt));
        match try_sample(&f, penta, &mut g, crate::apolarity::APOLARITY_TOL) {
            Ok(mut s) => {
                s.resamples = attempt as usize;
                return Ok(s);
            }
            Err(e @ (Error::Degenerate(_) | Error::SpecialPosition(_) | Error::DuplicatePoint(..))) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

const PROFILE: [(Degree, usize); 6] = [
    (Degree(2, 2), 5),
    (Degree(3, 1), 5),
    (Degree(1, 3), 5),
    (Degree(2, 3), 10),
    (Degree(3, 2), 10),
    (Degree(3, 3), 15),
];

pub fn check_profile(f: &MultiForm<Rational>) -> Result<()> {
    for (b, expected) in PROFILE {
        let found = orthogonal_dimension(f, b);
        if found != expected {
            return Err(Error::NotGeneral {
                check: format!("I_{{f,{b}}}"),
                expected,
                found,
            });
        }
    }
    Ok(())
}

pub fn general_form(seed: u64) -> Result<(MultiForm<Rational>, u64, usize)> {
    let mut last = None;
    for attempt in 0..8 {
        let s = derive_seed(seed, attempt);
        let f = random_form(Surface::P1xP1, Side::S, A, s);
        match check_profile(&f) {
            Ok(()) => return Ok((f, s, attempt as usize)),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

pub fn run(seed: u64, samples: usize, tol: &Tolerances) -> CaseReport {
    let mut report = CaseReport::new("case33", Some(Surface::P1xP1), Some(A), seed, tol.clone());
    let t = Instant::now();
    let (f, form_seed, rejections) = match general_form(seed) {
        Ok(x) => x,
        Err(e) => {
            report.reject("profile", json!({ "error": e.to_string() }));
            return report;
        }
    };
    report.form_seed = Some(form_seed);
    report.rejections = rejections;
    let generators = [Degree(2, 2), Degree(3, 1), Degree(1, 3)];
    let gen = generation_check(&f, &generators, Some(&[Degree(2, 3), Degree(3, 2), Degree(3, 3)]));
    report.check(
        "profile",
        gen.all_ok(),
        json!({ "dims": PROFILE.iter().map(|(b, d)| (b.to_string(), d)).collect::<Vec<_>>(), "generation": gen }),
    );
    report.time("profile", t);

    let t = Instant::now();
    let lift = harmonic_lift(&f).expect("checked input");
    let perp = perp_report(&lift);
    report.check("lift", perp.ok(), json!({ "cubic": lift.display(), "perp": perp }));
    report.time("lift", t);

    let t = Instant::now();
    let penta = match pentahedron(&lift, derive_seed(form_seed, 1), tol.restarts) {
        Ok(p) => {
            report.check("pentahedron", p.ok(), json!(p));
            p
        }
        Err(e) => {
            report.check("pentahedron", false, json!({ "error": e.to_string() }));
            return report;
        }
    };
    report.time("pentahedron", t);

    let t = Instant::now();
    let mut sample_reports = Vec::new();
    let mut all_ok = true;
    let mut first = None;
    for i in 0..samples {
        match vps33_sample(&lift, &penta, derive_seed(form_seed, 100 + i as u64)) {
            Ok(s) => {
                let ok = s.apolarity.apolar
                    && s.apolarity.span_residual < 1e-7
                    && s.curve_residual < 1e-8
                    && s.max_determinant < 1e-10
                    && s.planted_distance < 1e-6;
                all_ok &= ok;
                if first.is_none() {
                    first = Some(s.quadric_point);
                }
                sample_reports.push(json!(s));
            }
            Err(e) => {
                all_ok = false;
                sample_reports.push(json!({ "error": e.to_string() }));
            }
        }
    }
    report.check("vps-samples", all_ok && samples > 0, json!(sample_reports));
    report.time("samples", t);

    let t = Instant::now();
    if let Some(w) = first {
        let mut six = penta.points.clone();
        six.push(w);
        match (twisted_cubic_through(&six, (0, 1)), twisted_cubic_through(&six, (2, 5))) {
            (Ok(c1), Ok(c2)) => {
                let mut g = rng(derive_seed(form_seed, 2));
                let spread = (0..10)
                    .map(|_| c2.distance_to(&c1.eval([complex_normal(&mut g), complex_normal(&mut g)])).0)
                    .fold(0.0, f64::max);
                let ok = c1.coefficient_rank == 4 && c1.max_point_residual < 1e-8 && spread < 1e-7;
                report.check(
                    "twisted-cubic",
                    ok,
                    json!({ "rank": c1.coefficient_rank, "point_residual": c1.max_point_residual, "anchor_spread": spread }),
                );
            }
            (Err(e), _) | (_, Err(e)) => report.check("twisted-cubic", false, json!({ "error": e.to_string() })),
        }
    } else {
        report.check("twisted-cubic", false, json!({ "error": "no sample" }));
    }
    report.time("twisted-cubic", t);
    report
}

/// Cubic coefficients of `sum c_i (L_i . z)^3` for integer `L_i`.
pub fn planted_cubic(forms: &[[i64; 4]], coeffs: &[i64]) -> Vec<Rational> {
    cubic_monomials()
        .iter()
        .map(|m| {
            let multinomial = Rational::from_integer((6 / factorial(m)).into());
            forms
                .iter()
                .zip(coeffs)
                .map(|(l, c)| {
                    let v: i64 = (0..4).map(|i| l[i].pow(m[i])).product();
                    Rational::from_integer((c * v).into())
                })
                .fold(Rational::zero(), |a, b| a + b)
                * multinomial
        })
        .collect()
}
