//! Cubic forms on the scroll `F1` (class `3E+6F`): the pencil `K` of
//! apolar `(2E+3F)`-curves, its base points, apolar schemes of length 8
//! and their residual points.

use std::time::Instant;

use nalgebra::DMatrix;
use num::traits::{One, Zero};
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use crate::apolarity::{is_apolar, orthogonal_component, orthogonal_dimension, ApolarityVerdict, PointScheme};
use crate::decompose::{gauss_newton_decompose, polish, DecomposeOptions, DecompositionProblem};
use crate::error::{Error, Result};
use crate::linalg::{
    det_exact, kernel_numeric, norm, numeric_rank, roots_univariate, svd, Complex, ComplexMatrix, Rational,
    RationalMatrix,
};
use crate::multigraded::{eval_monomial, random_form, Degree, MultiForm, Side, Surface};
use crate::poly::{self, binary_forms_share_root, Poly};
use crate::report::{CaseReport, Tolerances};
use crate::rng::{complex_normal, derive_seed, rng};

const A: Degree = Degree(3, 6);
const K: Degree = Degree(2, 3);
const N: Degree = Degree(3, 3);

/// Intersection number of two classes on `F1` (`E^2 = -1`, `E.F = 1`, `F^2 = 0`).
pub fn intersection_number(c: Degree, d: Degree) -> i64 {
    -c.0 * d.0 + c.0 * d.1 + c.1 * d.0
}

#[derive(Clone, Debug, Serialize)]
pub struct DimsTable {
    pub t_e_2f: usize,
    pub t_2e_3f: usize,
    pub s_e_3f: usize,
    pub t_3e_3f: usize,
    pub t_3e_6f: usize,
    pub i_2e_3f: usize,
    pub i_2e_2f: usize,
    pub i_e_3f: usize,
}

impl DimsTable {
    pub fn ok(&self) -> bool {
        (self.t_e_2f, self.t_2e_3f, self.s_e_3f, self.t_3e_3f, self.t_3e_6f) == (5, 9, 7, 10, 22)
            && (self.i_2e_3f, self.i_2e_2f, self.i_e_3f) == (2, 0, 0)
    }
}

#[derive(Clone, Debug)]
pub struct F1Context {
    pub f: MultiForm<Rational>,
    /// Basis `g1, g2` of `I_{f,2E+3F}`.
    pub pencil: [MultiForm<Rational>; 2],
    pub dims: DimsTable,
}

pub fn build_f1_context(f: &MultiForm<Rational>) -> Result<F1Context> {
    if f.surface() != Surface::F1 || f.degree() != A || f.side() != Side::S {
        return Err(Error::Invalid("the F1 case needs an S-form of class 3E+6F".into()));
    }
    let s = Surface::F1;
    let dims = DimsTable {
        t_e_2f: s.dim(Degree(1, 2)),
        t_2e_3f: s.dim(K),
        s_e_3f: s.dim(Degree(1, 3)),
        t_3e_3f: s.dim(N),
        t_3e_6f: s.dim(A),
        i_2e_3f: orthogonal_dimension(f, K),
        i_2e_2f: orthogonal_dimension(f, Degree(2, 2)),
        i_e_3f: orthogonal_dimension(f, Degree(1, 3)),
    };
    for (name, found, expected) in [
        ("I_{f,2E+3F}", dims.i_2e_3f, 2),
        ("I_{f,2E+2F}", dims.i_2e_2f, 0),
        ("I_{f,E+3F}", dims.i_e_3f, 0),
    ] {
        if found != expected {
            return Err(Error::NotGeneral {
                check: name.into(),
                expected,
                found,
            });
        }
    }
    let basis = orthogonal_component(f, K);
    Ok(F1Context {
        f: f.clone(),
        pencil: [basis[0].clone(), basis[1].clone()],
        dims,
    })
}

/// `|g(p)|` relative to `|g|` and the monomial vector of `p`; invariant
/// under the torus.
pub fn normalized_value(g: &MultiForm<Complex>, p: &[Complex; 4]) -> f64 {
    let mons = g.surface().monomials(g.degree());
    let v: Vec<Complex> = mons.iter().map(|e| eval_monomial(e, p)).collect();
    let coeffs = g.coefficients();
    g.evaluate_unchecked(p).norm() / (norm(&v) * norm(&coeffs))
}

/// Coefficients `[j][k]` of `a^j b^k`.
type Bivar = Vec<Vec<Complex>>;

fn bivar_eval(p: &Bivar, a: Complex, b: Complex) -> Complex {
    p.iter()
        .rev()
        .fold(Complex::zero(), |acc, row| acc * a + poly::eval_c(row, b))
}

fn bivar_in_b(p: &Bivar, a: Complex) -> Vec<Complex> {
    let n = p.iter().map(|r| r.len()).max().unwrap_or(0);
    (0..n)
        .map(|k| {
            p.iter()
                .rev()
                .fold(Complex::zero(), |acc, row| acc * a + row.get(k).copied().unwrap_or_default())
        })
        .collect()
}

fn bivar_grad(p: &Bivar, a: Complex, b: Complex) -> (Complex, Complex) {
    let mut da = Complex::zero();
    let mut db = Complex::zero();
    for (j, row) in p.iter().enumerate() {
        if j > 0 {
            da += a.powu(j as u32 - 1) * poly::eval_c(row, b) * j as f64;
        }
        db += a.powu(j as u32) * poly::eval_c(&poly::derivative_c(row), b);
    }
    (da, db)
}

/// Chart `(a, b) -> (1, a, r00 + r01 b, r10 + r11 b)` of the complement of
/// `E` and of the fiber where the first rotated `u` coordinate vanishes.
#[derive(Clone, Copy, Debug)]
struct Chart {
    r: [[Complex; 2]; 2],
}

impl Chart {
    fn random<R: Rng>(g: &mut R) -> Self {
        let a = complex_normal(g);
        let b = complex_normal(g);
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (a, b) = (a / n, b / n);
        Chart {
            r: [[a, -b.conj()], [b, a.conj()]],
        }
    }

    fn point(&self, a: Complex, b: Complex) -> [Complex; 4] {
        [
            Complex::one(),
            a,
            self.r[0][0] + self.r[0][1] * b,
            self.r[1][0] + self.r[1][1] * b,
        ]
    }

    fn restrict(&self, g: &MultiForm<Complex>) -> Bivar {
        let mut out: Bivar = vec![Vec::new(); g.degree().0 as usize + 1];
        let u0 = [self.r[0][0], self.r[0][1]];
        let u1 = [self.r[1][0], self.r[1][1]];
        for (e, c) in g.terms() {
            let mut p = vec![*c];
            for _ in 0..e[2] {
                p = poly::mul_c(&p, &u0);
            }
            for _ in 0..e[3] {
                p = poly::mul_c(&p, &u1);
            }
            let j = e[1] as usize;
            out[j] = poly::add_c(&out[j], &p);
        }
        out
    }
}

/// Determinant of the Sylvester matrix of two univariate polynomials of
/// formal degrees `p.len() - 1` and `q.len() - 1`.
fn sylvester_det(p: &[Complex], q: &[Complex]) -> Complex {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let size = m + n;
    let mut s = DMatrix::<Complex>::zeros(size, size);
    for i in 0..n {
        for (k, c) in p.iter().enumerate() {
            s[(i, i + k)] = *c;
        }
    }
    for i in 0..m {
        for (k, c) in q.iter().enumerate() {
            s[(n + i, i + k)] = *c;
        }
    }
    s.determinant()
}

fn pad(mut v: Vec<Complex>, len: usize) -> Vec<Complex> {
    v.resize(len, Complex::zero());
    v
}

fn binary_roots(c: &[Complex]) -> Result<Vec<[Complex; 2]>> {
    // c[i] multiplies u0^(d-i) u1^i; with s = u1 / u0 this is sum c[i] s^i
    Ok(roots_univariate(c)?.projective())
}

/// Coefficients of the restriction to `E` (`t0 = 0`): `t1^a` times a binary
/// form of degree `b - a` in `u`, ascending in `u1`.
fn restrict_to_e(g: &MultiForm<Complex>) -> Vec<Complex> {
    let Degree(a, b) = g.degree();
    if a > b {
        return Vec::new();
    }
    let d = (b - a) as u32;
    (0..=d).map(|i| g.coeff(&[0, a as u32, d - i, i])).collect()
}

/// Newton steps on the square system `p = q = 0`.
fn newton_polish(p: &Bivar, q: &Bivar, mut a: Complex, mut b: Complex) -> (Complex, Complex) {
    for _ in 0..8 {
        let fp = bivar_eval(p, a, b);
        let fq = bivar_eval(q, a, b);
        let (pa, pb) = bivar_grad(p, a, b);
        let (qa, qb) = bivar_grad(q, a, b);
        let det = pa * qb - pb * qa;
        if det.norm() == 0.0 {
            break;
        }
        let da = (fp * qb - fq * pb) / det;
        let db = (pa * fq - qa * fp) / det;
        if !(da.re.is_finite() && db.re.is_finite()) {
            break;
        }
        a -= da;
        b -= db;
        if da.norm() + db.norm() < 1e-15 * (1.0 + a.norm() + b.norm()) {
            break;
        }
    }
    (a, b)
}

/// Finite chart solutions over the given `a`-roots: `b` from the roots of
/// `p(a, .)` closest to a zero of `q`, then Newton refinement.
fn back_substitute(chart: &Chart, p: &Bivar, q: &Bivar, a_roots: &[Complex]) -> Result<Vec<[Complex; 4]>> {
    let mut out = Vec::new();
    for &a in a_roots {
        let pb = bivar_in_b(p, a);
        let candidates = roots_univariate(&pb)?.roots;
        let qb = bivar_in_b(q, a);
        let b = candidates
            .into_iter()
            .min_by(|x, y| poly::eval_c(&qb, *x).norm().total_cmp(&poly::eval_c(&qb, *y).norm()))
            .ok_or_else(|| Error::Degenerate("no chart root over an a-root".into()))?;
        let (a, b) = newton_polish(p, q, a, b);
        out.push(Surface::F1.normalize_point(&chart.point(a, b)));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Intersection {
    pub points: Vec<[Complex; 4]>,
    /// Points on the exceptional curve `E`.
    pub on_exceptional: usize,
    /// Size of the discarded top resultant coefficients.
    pub truncation: f64,
    /// Largest normalized value of either curve at a returned point.
    pub max_residual: f64,
}

/// Intersection points of two curves on `F1` without common components,
/// counted with multiplicity (a numeric resultant on a random chart plus
/// the points on `E`).
pub fn intersect(g: &MultiForm<Complex>, h: &MultiForm<Complex>, seed: u64) -> Result<Intersection> {
    let total = intersection_number(g.degree(), h.degree());
    let (eg, eh) = (restrict_to_e(g), restrict_to_e(h));
    let zero = |v: &[Complex], scale: f64| norm(v) <= 1e-12 * scale;
    let (zg, zh) = (zero(&eg, norm(&g.coefficients())), zero(&eh, norm(&h.coefficients())));
    let mut points: Vec<[Complex; 4]> = Vec::new();
    let on_e = |u: [Complex; 2]| [Complex::zero(), Complex::one(), u[0], u[1]];
    match (zg, zh) {
        (true, true) => return Err(Error::Degenerate("both curves contain E".into())),
        (true, false) => points.extend(binary_roots(&eh)?.into_iter().map(on_e)),
        (false, true) => points.extend(binary_roots(&eg)?.into_iter().map(on_e)),
        (false, false) => {
            let hn = norm(&eh);
            for u in binary_roots(&eg)? {
                let d = eh.len() - 1;
                let v: Complex = eh
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c * u[0].powu((d - i) as u32) * u[1].powu(i as u32))
                    .sum();
                if v.norm() <= 1e-8 * hn * norm(&u).powi(d as i32) {
                    points.push(on_e(u));
                }
            }
        }
    }
    let on_exceptional = points.len();
    let finite = total - on_exceptional as i64;
    if finite < 0 {
        return Err(Error::Degenerate("more points on E than the intersection number".into()));
    }

    let chart = Chart::random(&mut rng(seed));
    let p = chart.restrict(g);
    let q = chart.restrict(h);
    let (bp, bq) = (g.degree().1 as usize, h.degree().1 as usize);
    let bound = bq * g.degree().0 as usize + bp * h.degree().0 as usize;
    let samples = (bound + 1).next_power_of_two().max(16);
    let values: Vec<Complex> = (0..samples)
        .map(|k| {
            let w = Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / samples as f64);
            sylvester_det(&pad(bivar_in_b(&p, w), bp + 1), &pad(bivar_in_b(&q, w), bq + 1))
        })
        .collect();
    let coeffs: Vec<Complex> = (0..samples)
        .map(|j| {
            values
                .iter()
                .enumerate()
                .map(|(k, v)| {
                    v * Complex::from_polar(1.0, -2.0 * std::f64::consts::PI * (j * k) as f64 / samples as f64)
                })
                .sum::<Complex>()
                / samples as f64
        })
        .collect();
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let finite = finite as usize;
    let truncation = coeffs[finite + 1..].iter().map(|c| c.norm()).fold(0.0, f64::max) / scale;
    if truncation > 1e-6 {
        return Err(Error::Degenerate(format!(
            "resultant has degree above {finite} (tail {truncation:.1e})"
        )));
    }
    let a_roots = roots_univariate(&coeffs[..=finite])?;
    if a_roots.at_infinity > 0 {
        return Err(Error::Degenerate("resultant degree dropped".into()));
    }
    points.extend(back_substitute(&chart, &p, &q, &a_roots.roots)?);
    let max_residual = points
        .iter()
        .map(|x| normalized_value(g, x).max(normalized_value(h, x)))
        .fold(0.0, f64::max);
    Ok(Intersection {
        points,
        on_exceptional,
        truncation,
        max_residual,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BasePointSet {
    pub points: Vec<[Complex; 4]>,
    /// Degree of the exact resultant in the main chart.
    pub resultant_degree: usize,
    /// The resultant has no repeated factor.
    pub square_free: bool,
    pub on_exceptional: usize,
    pub on_boundary_fiber: usize,
    pub max_residual: f64,
    pub min_separation: f64,
    pub apolarity: ApolarityVerdict,
    /// Rank of the evaluation rows of the points stacked with `f`.
    pub stack_rank: usize,
}

impl BasePointSet {
    pub fn ok(&self) -> bool {
        self.points.len() == 8
            && self.resultant_degree == 8
            && self.square_free
            && self.on_exceptional == 0
            && self.on_boundary_fiber == 0
            && self.max_residual < 1e-10
            && self.min_separation > 1e-7
            && self.apolarity.apolar
            && self.stack_rank == 8
    }
}

/// Coefficients of `g(1, a, 1, b)` as exact polynomials in `b` whose
/// coefficients are polynomials in `a`, evaluated at `a`.
fn exact_in_b(g: &MultiForm<Rational>, a: &Rational) -> Vec<Rational> {
    let b = g.degree().1 as usize;
    let mut out = vec![Rational::zero(); b + 1];
    for (e, c) in g.terms() {
        let mut v = c.clone();
        for _ in 0..e[1] {
            v *= a;
        }
        out[e[3] as usize] += v;
    }
    out
}

fn exact_sylvester(p: &[Rational], q: &[Rational]) -> Rational {
    let m = p.len() - 1;
    let n = q.len() - 1;
    let size = m + n;
    let mut s = RationalMatrix::zeros(size, size);
    for i in 0..n {
        for (k, c) in p.iter().enumerate() {
            s.set(i, i + k, c.clone());
        }
    }
    for i in 0..m {
        for (k, c) in q.iter().enumerate() {
            s.set(n + i, i + k, c.clone());
        }
    }
    det_exact(&s)
}

/// `Res_b(g1, g2)` on the chart `t0 = u0 = 1`, exactly, by interpolation.
pub fn exact_resultant(g1: &MultiForm<Rational>, g2: &MultiForm<Rational>) -> Poly {
    let bound = g2.degree().1 * g1.degree().0 + g1.degree().1 * g2.degree().0;
    let xs: Vec<Rational> = (0..=bound).map(|i| Rational::from_integer(i.into())).collect();
    let ys: Vec<Rational> = xs
        .iter()
        .map(|a| exact_sylvester(&exact_in_b(g1, a), &exact_in_b(g2, a)))
        .collect();
    poly::interpolate(&xs, &ys)
}

/// Exact count of common zeros on `E` and on the fiber `u0 = 0`.
fn exact_boundary(g: &[MultiForm<Rational>; 2]) -> (usize, usize) {
    let on_e: Vec<Poly> = g
        .iter()
        .map(|h| poly::trim(vec![h.coeff(&[0, 2, 1, 0]), h.coeff(&[0, 2, 0, 1])]))
        .collect();
    let fiber: Vec<Poly> = g
        .iter()
        .map(|h| poly::trim((0..3u32).map(|j| h.coeff(&[2 - j, j, 0, 3 - j])).collect()))
        .collect();
    (
        usize::from(binary_forms_share_root(&on_e, 1)),
        usize::from(binary_forms_share_root(&fiber, 2)),
    )
}

/// The eight base points of `K`, certified distinct by an exact resultant.
pub fn pencil_basepoints(ctx: &F1Context) -> Result<BasePointSet> {
    let [g1, g2] = &ctx.pencil;
    let (on_exceptional, on_boundary_fiber) = exact_boundary(&ctx.pencil);
    if on_exceptional + on_boundary_fiber > 0 {
        return Err(Error::SpecialPosition(format!(
            "base points on E ({on_exceptional}) or on the fiber u0 = 0 ({on_boundary_fiber})"
        )));
    }
    let r = exact_resultant(g1, g2);
    let degree = poly::degree(&r).unwrap_or(0);
    let total = intersection_number(K, K) as usize;
    if degree != total {
        return Err(Error::Degenerate(format!("resultant degree {degree}, expected {total}")));
    }
    let square_free = poly::degree(&poly::gcd(&r, &poly::derivative(&r))) == Some(0);
    if !square_free {
        return Err(Error::NotGeneral {
            check: "distinct base points".into(),
            expected: 0,
            found: 1,
        });
    }
    let roots = roots_univariate(&poly::to_complex(&r))?.roots;
    let chart = Chart {
        r: [[Complex::one(), Complex::zero()], [Complex::zero(), Complex::one()]],
    };
    let (c1, c2) = (g1.to_complex(), g2.to_complex());
    let points = back_substitute(&chart, &chart.restrict(&c1), &chart.restrict(&c2), &roots)?;
    let max_residual = points
        .iter()
        .map(|p| normalized_value(&c1, p).max(normalized_value(&c2, p)))
        .fold(0.0, f64::max);
    let mut min_separation = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            min_separation = min_separation.min(Surface::F1.point_distance(&points[i], &points[j]));
        }
    }
    let scheme = PointScheme::new(Surface::F1, points.clone())?;
    let fc = ctx.f.to_complex();
    let apolarity = is_apolar(&scheme, &fc, crate::apolarity::APOLARITY_TOL)?;
    let stack = scheme.evaluation_matrix(A).vstack(&ComplexMatrix::from_rows(22, vec![fc.values()]));
    Ok(BasePointSet {
        points,
        resultant_degree: degree,
        square_free,
        on_exceptional,
        on_boundary_fiber,
        max_residual,
        min_separation,
        apolarity,
        stack_rank: numeric_rank(&stack, 1e-8),
    })
}

/// Membership of a point set in a curve of `K`.
#[derive(Clone, Debug, Serialize)]
pub struct Membership {
    /// `(λ : μ)` with `λ g1 + μ g2` vanishing on the points.
    pub pencil: [Complex; 2],
    /// `σ2 / σ1` of the scaled value matrix.
    pub residual: f64,
    /// Numeric rank of the value matrix (1: a unique curve, 0: all curves).
    pub rank: usize,
    pub singular_values: Vec<f64>,
}

pub fn pencil_membership(ctx: &F1Context, points: &[[Complex; 4]]) -> Membership {
    let g: Vec<MultiForm<Complex>> = ctx.pencil.iter().map(|h| h.to_complex()).collect();
    let gn: Vec<f64> = g.iter().map(|h| norm(&h.coefficients())).collect();
    let mons = Surface::F1.monomials(K);
    let m = ComplexMatrix::from_rows(
        2,
        points
            .iter()
            .map(|p| {
                let s = norm(&mons.iter().map(|e| eval_monomial(e, p)).collect::<Vec<_>>());
                (0..2).map(|j| g[j].evaluate_unchecked(p) / (s * gn[j])).collect()
            })
            .collect(),
    );
    let d = svd(&m);
    let v = &d.right[1];
    let pencil = crate::sylvester::normalize_binary([v[0] / gn[0], v[1] / gn[1]]);
    let s1 = d.values[0];
    Membership {
        pencil,
        residual: if s1 > 0.0 { d.values[1] / s1 } else { 0.0 },
        rank: if s1 < 1e-12 { 0 } else { numeric_rank(&m, 1e-8) },
        singular_values: d.values,
    }
}

pub fn pencil_member(ctx: &F1Context, pencil: [Complex; 2]) -> MultiForm<Complex> {
    let [g1, g2] = &ctx.pencil;
    g1.to_complex()
        .scale(&pencil[0])
        .add(&g2.to_complex().scale(&pencil[1]))
        .expect("same degree")
}

/// Smallest relative residuals of the factor ansätze for a curve in
/// `|2E+3F|`; all of them bounded away from zero means irreducible.
#[derive(Clone, Debug, Serialize)]
pub struct Irreducibility {
    /// `C = t0 h`.
    pub e_factor: f64,
    /// `C = l(u) h`.
    pub f_factor: f64,
    /// `C = (t1 - t0 l(u)) h`.
    pub e_plus_f_factor: f64,
}

pub const IRREDUCIBLE_GAP: f64 = 1e-6;

impl Irreducibility {
    pub fn irreducible(&self) -> bool {
        self.e_factor > IRREDUCIBLE_GAP && self.f_factor > IRREDUCIBLE_GAP && self.e_plus_f_factor > IRREDUCIBLE_GAP
    }
}

fn binary_value(c: &[Complex], u: [Complex; 2]) -> Complex {
    let d = c.len() - 1;
    c.iter()
        .enumerate()
        .map(|(i, x)| x * u[0].powu((d - i) as u32) * u[1].powu(i as u32))
        .sum()
}

pub fn irreducibility(c: &MultiForm<Complex>) -> Result<Irreducibility> {
    if c.surface() != Surface::F1 || c.degree() != K {
        return Err(Error::Invalid("factor ansätze are set up for class 2E+3F".into()));
    }
    let total = norm(&c.coefficients());
    // C = sum_j t0^(2-j) t1^j c_j(u), deg c_j = 3 - j
    let parts: Vec<Vec<Complex>> = (0..3u32)
        .map(|j| (0..=3 - j).map(|i| c.coeff(&[2 - j, j, 3 - j - i, i])).collect())
        .collect();
    let e_factor = norm(&parts[2]) / total;

    let mut f_factor = f64::INFINITY;
    for u in binary_roots(&parts[0])? {
        let u = crate::sylvester::normalize_binary(u);
        let r = parts
            .iter()
            .filter(|p| norm(p) > 0.0)
            .map(|p| binary_value(p, u).norm() / norm(p))
            .fold(0.0, f64::max);
        f_factor = f_factor.min(r);
    }

    // t1 = t0 (α u0 + β u1): the u0^3 and u1^3 coefficients give α and β
    let alphas = roots_univariate(&[parts[0][0], parts[1][0], parts[2][0]])?.roots;
    let betas = roots_univariate(&[parts[0][3], parts[1][2], parts[2][1]])?.roots;
    let mut e_plus_f_factor = f64::INFINITY;
    for &alpha in &alphas {
        for &beta in &betas {
            let l = [alpha, beta];
            let l2 = poly::mul_c(&l, &l);
            let p = poly::add_c(
                &poly::add_c(&parts[0], &poly::mul_c(&l, &parts[1])),
                &poly::mul_c(&l2, &parts[2]),
            );
            let ln = norm(&l);
            let scale = norm(&parts[0]) + norm(&parts[1]) * ln + norm(&parts[2]) * ln * ln;
            e_plus_f_factor = e_plus_f_factor.min(norm(&p) / scale);
        }
    }
    Ok(Irreducibility {
        e_factor,
        f_factor,
        e_plus_f_factor,
    })
}

/// The point `E ∩ C` for `C` in `|2E+3F|`.
pub fn exceptional_point(c: &MultiForm<Complex>) -> [Complex; 4] {
    let e = restrict_to_e(c);
    [Complex::zero(), Complex::one(), e[1], -e[0]]
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualPoint {
    pub point: [Complex; 4],
    /// `dim I_{Γ,3E+3F}`.
    pub n_dim: usize,
    /// How the ninth point was found: `"base-locus"` of `N_Γ`, or
    /// `"curve"` (`C` against a member of `N_Γ`) when `N_Γ` has `E` as a
    /// fixed component.
    pub route: String,
    pub intersection_count: usize,
    /// Normalized value of the curve `C` at the point.
    pub on_curve: f64,
    /// Distance to the nearest point of `Γ`.
    pub separation: f64,
    pub max_intersection_residual: f64,
}

pub const MATCH_TOL: f64 = 1e-4;

/// The ninth base point of `N_Γ = I_{Γ,3E+3F}`, a point of the curve `C`
/// of `K` through `Γ`.
pub fn residual_point(gamma: &[[Complex; 4]], curve: &MultiForm<Complex>, seed: u64) -> Result<ResidualPoint> {
    let scheme = PointScheme::new(Surface::F1, gamma.to_vec())?;
    let e = scheme.evaluation_matrix(N);
    let kernel = kernel_numeric(&e, 1e-8);
    if kernel.len() != 2 {
        return Err(Error::Degenerate(format!("dim N_Γ = {}", kernel.len())));
    }
    let forms: Vec<MultiForm<Complex>> = kernel
        .iter()
        .map(|v| MultiForm::from_coefficients(Surface::F1, Side::T, N, v))
        .collect();
    let (inter, route) = match intersect(&forms[0], &forms[1], seed) {
        Ok(i) => (i, "base-locus"),
        Err(Error::Degenerate(_)) => {
            let mut g = rng(derive_seed(seed, 1));
            let (x, y) = (complex_normal(&mut g), complex_normal(&mut g));
            let member = forms[0].scale(&x).add(&forms[1].scale(&y)).expect("same degree");
            (intersect(curve, &member, seed)?, "curve")
        }
        Err(e) => return Err(e),
    };
    let dist = |p: &[Complex; 4]| {
        gamma
            .iter()
            .map(|q| Surface::F1.point_distance(p, q))
            .fold(f64::INFINITY, f64::min)
    };
    let unmatched: Vec<&[Complex; 4]> = inter.points.iter().filter(|p| dist(p) > MATCH_TOL).collect();
    let all_covered = gamma.iter().all(|q| {
        inter
            .points
            .iter()
            .any(|p| Surface::F1.point_distance(p, q) <= MATCH_TOL)
    });
    if unmatched.len() != 1 || !all_covered {
        return Err(Error::Degenerate(format!(
            "{} points off Γ among {} intersection points",
            unmatched.len(),
            inter.points.len()
        )));
    }
    let point = Surface::F1.normalize_point(unmatched[0]);
    Ok(ResidualPoint {
        on_curve: normalized_value(curve, &point),
        separation: dist(&point),
        point,
        n_dim: kernel.len(),
        route: route.into(),
        intersection_count: inter.points.len(),
        max_intersection_residual: inter.max_residual,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct F1Sample {
    pub points: Vec<[Complex; 4]>,
    pub coeffs: Vec<Complex>,
    pub decomposition_residual: f64,
    pub start: usize,
    pub membership: Membership,
    pub apolarity: ApolarityVerdict,
    pub irreducibility: Irreducibility,
    pub residual_point: ResidualPoint,
    /// Distance from `p_Γ` to `E ∩ C`, the residual point of `Γ0` on `C`.
    pub distance_to_exceptional_point: f64,
}

impl F1Sample {
    pub fn ok(&self) -> bool {
        self.decomposition_residual < 1e-8
            && self.membership.residual < 1e-8
            && self.membership.rank == 1
            && self.apolarity.apolar
            && self.irreducibility.irreducible()
            && self.residual_point.on_curve < 1e-7
            && self.distance_to_exceptional_point > MATCH_TOL
    }
}

/// An apolar scheme of length 8 from a Gauss–Newton decomposition, with its
/// curve in `K` and residual point.
pub fn vps_f1_sample(ctx: &F1Context, seed: u64, restarts: usize) -> Result<F1Sample> {
    let options = DecomposeOptions {
        restarts,
        ..DecomposeOptions::default()
    };
    let problem = DecompositionProblem::for_form(&ctx.f, 8, options);
    let dec = gauss_newton_decompose(&problem, seed)?;
    let (dec, _) = polish(&problem, &dec);
    let points: Vec<[Complex; 4]> = dec
        .points
        .iter()
        .map(|p| Surface::F1.normalize_point(&[p[0], p[1], p[2], p[3]]))
        .collect();
    let scheme = PointScheme::new(Surface::F1, points.clone())?;
    let apolarity = is_apolar(&scheme, &ctx.f.to_complex(), crate::apolarity::APOLARITY_TOL)?;
    let membership = pencil_membership(ctx, &points);
    let curve = pencil_member(ctx, membership.pencil);
    let irreducibility = irreducibility(&curve)?;
    let residual_point = residual_point(&points, &curve, derive_seed(seed, 7))?;
    Ok(F1Sample {
        distance_to_exceptional_point: Surface::F1.point_distance(&residual_point.point, &exceptional_point(&curve)),
        points,
        coeffs: dec.coeffs,
        decomposition_residual: dec.residual,
        start: dec.start,
        membership,
        apolarity,
        irreducibility,
        residual_point,
    })
}

pub fn general_form(seed: u64) -> Result<(F1Context, u64, usize)> {
    let mut last = None;
    for attempt in 0..8 {
        let s = derive_seed(seed, attempt);
        let f = random_form(Surface::F1, Side::S, A, s);
        match build_f1_context(&f) {
            Ok(ctx) => return Ok((ctx, s, attempt as usize)),
            Err(e @ Error::NotGeneral { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

pub fn run(seed: u64, samples: usize, tol: &Tolerances) -> CaseReport {
    let mut report = CaseReport::new("casef1", Some(Surface::F1), Some(A), seed, tol.clone());
    let t = Instant::now();
    let (ctx, form_seed, rejections) = match general_form(seed) {
        Ok(x) => x,
        Err(e) => {
            report.reject("context", json!({ "error": e.to_string() }));
            return report;
        }
    };
    report.form_seed = Some(form_seed);
    report.rejections = rejections;
    report.check(
        "context",
        ctx.dims.ok(),
        json!({ "dims": ctx.dims, "pencil": ctx.pencil.iter().map(|g| g.display()).collect::<Vec<_>>() }),
    );
    report.time("context", t);

    let t = Instant::now();
    let base = match pencil_basepoints(&ctx) {
        Ok(b) => {
            report.check("basepoints", b.ok(), json!(b));
            Some(b)
        }
        Err(e) => {
            report.check("basepoints", false, json!({ "error": e.to_string() }));
            None
        }
    };
    report.time("basepoints", t);

    let t = Instant::now();
    let mut payloads = Vec::new();
    let mut pencils: Vec<[Complex; 2]> = Vec::new();
    let mut curves = Vec::new();
    let mut all_ok = true;
    for i in 0..samples {
        match vps_f1_sample(&ctx, derive_seed(form_seed, 100 + i as u64), tol.restarts) {
            Ok(s) => {
                all_ok &= s.ok() && s.decomposition_residual < tol.tol_res.max(1e-8);
                pencils.push(s.membership.pencil);
                curves.push(pencil_member(&ctx, s.membership.pencil));
                payloads.push(json!(s));
            }
            Err(e) => {
                all_ok = false;
                payloads.push(json!({ "error": e.to_string() }));
            }
        }
    }
    report.check("vps-samples", all_ok && samples > 0, json!(payloads));
    let spread = pencils
        .iter()
        .enumerate()
        .flat_map(|(i, a)| pencils[i + 1..].iter().map(move |b| crate::linalg::projective_distance(a, b)))
        .fold(f64::INFINITY, f64::min);
    report.check(
        "pencil-spread",
        pencils.len() >= 2 && spread > 1e-6,
        json!({ "min_distance": spread, "pencils": pencils }),
    );
    report.time("samples", t);

    let t = Instant::now();
    if let Some(b) = base {
        let membership = pencil_membership(&ctx, &b.points);
        let mut entries = Vec::new();
        let mut ok = membership.rank == 0;
        for (i, c) in curves.iter().enumerate() {
            match residual_point(&b.points, c, derive_seed(form_seed, 200 + i as u64)) {
                Ok(r) => {
                    let d = Surface::F1.point_distance(&r.point, &exceptional_point(c));
                    ok &= d < 1e-7;
                    entries.push(json!({ "distance_to_exceptional_point": d, "residual_point": r }));
                }
                Err(e) => {
                    ok = false;
                    entries.push(json!({ "error": e.to_string() }));
                }
            }
        }
        ok &= !curves.is_empty();
        report.check(
            "base-residual",
            ok,
            json!({ "membership_singular_values": membership.singular_values, "curves": entries }),
        );
    } else {
        report.check("base-residual", false, json!({ "error": "no base points" }));
    }
    report.time("base-residual", t);
    report
}
