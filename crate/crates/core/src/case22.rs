//! Forms of bidegree `(2,2)` on `P1xP1`: the maps given by `I_{f,(2,1)}`,
//! apolar schemes of length 4 from curve restriction, their Plücker
//! vectors, the quartic image surface and its double curve.

use std::time::Instant;

use num::traits::Zero;
use rand::Rng;
use serde::Serialize;
use serde_json::json;

use crate::apolarity::{is_apolar, orthogonal_component, orthogonal_dimension, span_dimension, ApolarityVerdict, PointScheme};
use crate::decompose::{monomial_value, projective_monomials};
use crate::error::{Error, Result};
use crate::linalg::{
    kernel_exact, kernel_numeric, least_squares, norm, numeric_rank, projective_distance, rational, solve_exact,
    svd, svd_values, Complex, ComplexMatrix, Rational, RationalMatrix, Scalar, Solve,
};
use crate::multigraded::{
    diff_apply, random_form, random_rational_point, swap_factors, Degree, MultiForm, Side, Surface,
};
use crate::poly::{self, add_c, binary_forms_share_root, eval_c, mul_c, Poly};
use crate::report::{CaseReport, Tolerances};
use crate::rng::{complex_normal, derive_seed, rng, small_int};
use crate::sylvester::{sylvester_decompose, BinaryDualForm};

const A: Degree = Degree(2, 2);
const B21: Degree = Degree(2, 1);

/// Objects attached to a general `f` of bidegree `(2,2)`.
#[derive(Clone, Debug)]
pub struct Case22Context {
    pub f: MultiForm<Rational>,
    /// Basis of `I_{f,(2,1)}`; its members are the coordinates of `δ_{2,1}`.
    pub basis21: Vec<MultiForm<Rational>>,
    pub basis12: Vec<MultiForm<Rational>>,
    /// `∂f/∂y0`, `∂f/∂y1`.
    pub partials_y: Vec<MultiForm<Rational>>,
    /// `∂f/∂x0`, `∂f/∂x1`.
    pub partials_x: Vec<MultiForm<Rational>>,
    /// `dim I_{f,B}` for `B = (2,1), (1,2), (1,1)`.
    pub dims: [usize; 3],
}

fn t_monomial(e: [u32; 4]) -> MultiForm<Rational> {
    MultiForm::monomial(Surface::P1xP1, Side::T, e, Rational::from_integer(1.into()))
}

pub fn build_context(f: &MultiForm<Rational>) -> Result<Case22Context> {
    if f.surface() != Surface::P1xP1 || f.degree() != A || f.side() != Side::S {
        return Err(Error::Invalid("case (2,2) needs an S-form of bidegree (2,2) on P1xP1".into()));
    }
    let dims = [
        orthogonal_dimension(f, B21),
        orthogonal_dimension(f, Degree(1, 2)),
        orthogonal_dimension(f, Degree(1, 1)),
    ];
    for (name, found, expected) in [
        ("I_{f,(2,1)}", dims[0], 4),
        ("I_{f,(1,2)}", dims[1], 4),
        ("I_{f,(1,1)}", dims[2], 0),
    ] {
        if found != expected {
            return Err(Error::NotGeneral {
                check: name.into(),
                expected,
                found,
            });
        }
    }
    let partials_y: Vec<_> = [[0, 0, 1, 0], [0, 0, 0, 1]]
        .iter()
        .map(|&e| diff_apply(&t_monomial(e), f))
        .collect::<Result<_>>()?;
    let partials_x: Vec<_> = [[1, 0, 0, 0], [0, 1, 0, 0]]
        .iter()
        .map(|&e| diff_apply(&t_monomial(e), f))
        .collect::<Result<_>>()?;
    for (name, p) in [("y-partials", &partials_y), ("x-partials", &partials_x)] {
        let d = span_dimension(p);
        if d != 2 {
            return Err(Error::NotGeneral {
                check: name.into(),
                expected: 2,
                found: d,
            });
        }
    }
    Ok(Case22Context {
        f: f.clone(),
        basis21: orthogonal_component(f, B21),
        basis12: orthogonal_component(f, Degree(1, 2)),
        partials_y,
        partials_x,
        dims,
    })
}

/// Coefficients of `y_j` in a form of bidegree `(a,1)`, as binary forms in
/// `x` (ascending in `x1`).
fn y_parts<K: Scalar>(g: &MultiForm<K>) -> [Vec<K>; 2] {
    let a = g.degree().0 as u32;
    let part = |j: usize| -> Vec<K> {
        (0..=a)
            .map(|i| {
                let mut e = [a - i, i, 0, 0];
                e[2 + j] = 1;
                g.coeff(&e)
            })
            .collect()
    };
    [part(0), part(1)]
}

fn side_has_no_split(f: &MultiForm<Rational>) -> bool {
    let d = |e: [u32; 4]| diff_apply(&t_monomial(e), f).expect("T acts on S");
    let [a0, a1] = y_parts(&d([0, 0, 1, 0]));
    let [b0, b1] = y_parts(&d([0, 0, 0, 1]));
    // Q0 = λ a0 + μ b0, Q1 = λ a1 + μ b1; the 2x2 minors of [Q0; Q1] are
    // binary quadratics in (λ, μ)
    let mut minors: Vec<Poly> = Vec::new();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let ll = &a0[i] * &a1[j] - &a0[j] * &a1[i];
        let lm = &a0[i] * &b1[j] + &b0[i] * &a1[j] - &a0[j] * &b1[i] - &b0[j] * &a1[i];
        let mm = &b0[i] * &b1[j] - &b0[j] * &b1[i];
        minors.push(poly::trim(vec![ll, lm, mm]));
    }
    !binary_forms_share_root(&minors, 2)
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitCheck {
    /// No member of the pencil of `y`-partials is `q(x) l(y)`.
    pub y_side: bool,
    /// No member of the pencil of `x`-partials is `l(x) q(y)`.
    pub x_side: bool,
}

impl SplitCheck {
    pub fn ok(&self) -> bool {
        self.y_side && self.x_side
    }
}

pub fn check_partials_not_split(f: &MultiForm<Rational>) -> Result<SplitCheck> {
    Ok(SplitCheck {
        y_side: side_has_no_split(f),
        x_side: side_has_no_split(&swap_factors(f)?),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ApolarSample {
    pub points: Vec<[Complex; 4]>,
    /// Parameters on `C_g` (values of `t`).
    pub parameters: Vec<[Complex; 2]>,
    /// Relative residual of the linear system for the binary dual form.
    pub system_residual: f64,
    pub sylvester_residual: f64,
    pub apolarity: ApolarityVerdict,
    /// Rank of the four image points under `δ_{2,1}`.
    pub image_rank: usize,
}

impl ApolarSample {
    pub fn scheme(&self) -> PointScheme<Complex> {
        PointScheme::new(Surface::P1xP1, self.points.clone()).expect("validated at construction")
    }
}

fn binary_eval(c: &[Complex], p: [Complex; 2]) -> Complex {
    let d = c.len() - 1;
    c.iter()
        .enumerate()
        .map(|(j, cj)| cj * p[0].powu((d - j) as u32) * p[1].powu(j as u32))
        .sum()
}

/// A length-4 scheme apolar to `f` on the curve `C_g = {g = 0}`.
///
/// `C_g` is parametrized by `t -> (t, [g1(t) : -g0(t)])`; restricting `T_{2,2}`
/// to it gives binary sextics, and the dual sextic `F_C` with
/// `<σ(m), F_C> = m ⌟ f` exists because `g * T_{0,1}` lies in `f⊥`. Its
/// decomposition along the pencil member `pencil` gives the four points.
pub fn generate_apolar_22(
    ctx: &Case22Context,
    g: &MultiForm<Rational>,
    pencil: [Complex; 2],
    tol: f64,
) -> Result<ApolarSample> {
    if g.surface() != Surface::P1xP1 || g.degree() != B21 || g.side() != Side::T {
        return Err(Error::Invalid("g must be a T-form of bidegree (2,1)".into()));
    }
    let [g0, g1] = y_parts(g);
    if binary_forms_share_root(&[poly::trim(g0.clone()), poly::trim(g1.clone())], 2) {
        return Err(Error::Degenerate("g0 and g1 have a common factor".into()));
    }
    let neg_g0: Poly = g0.iter().map(|c| -c).collect();
    let mons = Surface::P1xP1.monomials(A);
    let sigma: Vec<Poly> = mons
        .iter()
        .map(|e| {
            let mut p: Poly = vec![Rational::zero(); e[1] as usize];
            p.push(Rational::from_integer(1.into()));
            for _ in 0..e[2] {
                p = poly::mul(&p, &g1);
            }
            for _ in 0..e[3] {
                p = poly::mul(&p, &neg_g0);
            }
            p.resize(7, Rational::zero());
            p
        })
        .collect();
    let m = RationalMatrix::from_rows(7, sigma);
    let v = ctx.f.values();
    let w = match solve_exact(&m, &v) {
        Solve::Solution(w) => w,
        Solve::Inconsistent => {
            return Err(Error::Inconsistent(
                "no binary dual form restricts f to C_g; g is not in f⊥".into(),
            ))
        }
    };
    let mc = m.to_complex();
    let wc: Vec<Complex> = w.iter().map(|x| x.to_complex()).collect();
    let vc: Vec<Complex> = v.iter().map(|x| x.to_complex()).collect();
    let diff: Vec<Complex> = mc.mul_vec(&wc).iter().zip(&vc).map(|(a, b)| a - b).collect();
    let system_residual = norm(&diff) / norm(&vc);

    let dec = sylvester_decompose(&BinaryDualForm::new(w), Some(pencil))?;
    if dec.points.len() != 4 {
        return Err(Error::Degenerate(format!(
            "restricted sextic has rank {} instead of 4",
            dec.points.len()
        )));
    }
    let g0c: Vec<Complex> = g0.iter().map(|c| c.to_complex()).collect();
    let g1c: Vec<Complex> = g1.iter().map(|c| c.to_complex()).collect();
    let points: Vec<[Complex; 4]> = dec
        .points
        .iter()
        .map(|&p| {
            let u = crate::sylvester::normalize_binary([binary_eval(&g1c, p), -binary_eval(&g0c, p)]);
            [p[0], p[1], u[0], u[1]]
        })
        .collect();
    let scheme = PointScheme::new(Surface::P1xP1, points.clone())?;
    let apolarity = is_apolar(&scheme, &ctx.f.to_complex(), tol)?;
    let image = ComplexMatrix::from_fn(4, 4, |i, j| {
        ctx.basis21[j].to_complex().evaluate_unchecked(&points[i])
    });
    Ok(ApolarSample {
        points,
        parameters: dec.points,
        system_residual,
        sylvester_residual: dec.residual,
        apolarity,
        image_rank: numeric_rank(&image, 1e-6),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PlueckerVector {
    /// Coordinates `p01, p02, p03, p12, p13, p23`.
    pub coords: [Complex; 6],
    /// Largest relative distance of a basis vector of `I_{Γ,(2,1)}` from
    /// the span of the context basis.
    pub containment_residual: f64,
    /// `|p01 p23 - p02 p13 + p03 p12|` of the unit vector.
    pub relation_residual: f64,
}

pub fn pluecker_relation(p: &[Complex; 6]) -> Complex {
    p[0] * p[5] - p[1] * p[4] + p[2] * p[3]
}

/// Unit norm, first entry of non-negligible size made positive real.
pub fn normalize_phase(v: &[Complex]) -> Vec<Complex> {
    let n = norm(v);
    let lead = v
        .iter()
        .find(|z| z.norm() > 1e-8 * n)
        .copied()
        .unwrap_or(Complex::new(1.0, 0.0));
    let s = lead.conj() / (lead.norm() * n);
    v.iter().map(|z| z * s).collect()
}

/// The point `I_{Γ,(2,1)}` of `G(2, I_{f,(2,1)})` in Plücker coordinates
/// with respect to the context basis.
pub fn pluecker_vector(ctx: &Case22Context, gamma: &PointScheme<Complex>) -> Result<PlueckerVector> {
    let e = gamma.evaluation_matrix(B21);
    let rank = numeric_rank(&e, 1e-6);
    let kernel = kernel_numeric(&e, 1e-6);
    if kernel.len() != 2 {
        return Err(Error::Degenerate(format!(
            "I_Γ,(2,1) has dimension {} (evaluation rank {rank})",
            kernel.len()
        )));
    }
    let basis = ComplexMatrix::from_fn(6, 4, |i, j| ctx.basis21[j].coefficients()[i].to_complex());
    let mut coords = Vec::new();
    let mut containment_residual: f64 = 0.0;
    for k in &kernel {
        let (x, r) = least_squares(&basis, k);
        containment_residual = containment_residual.max(r / norm(k));
        coords.push(x);
    }
    let (a, b) = (&coords[0], &coords[1]);
    let minor = |i: usize, j: usize| a[i] * b[j] - a[j] * b[i];
    let raw = [minor(0, 1), minor(0, 2), minor(0, 3), minor(1, 2), minor(1, 3), minor(2, 3)];
    let unit = normalize_phase(&raw);
    let coords: [Complex; 6] = std::array::from_fn(|i| unit[i]);
    Ok(PlueckerVector {
        relation_residual: pluecker_relation(&coords).norm(),
        coords,
        containment_residual,
    })
}

fn random_member<R: Rng>(basis: &[MultiForm<Rational>], g: &mut R) -> MultiForm<Rational> {
    let mut out = MultiForm::zero(basis[0].surface(), basis[0].side(), basis[0].degree());
    for b in basis {
        let c = rational(small_int(g, 9, false), 1);
        out = out.add(&b.scale(&c)).expect("same degree");
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct HyperplaneReport {
    pub samples: usize,
    pub attempts: usize,
    pub singular_values: Vec<f64>,
    /// Number of singular values above `1e-6 * σ1`.
    pub rank: usize,
    pub sigma_ratio: f64,
    /// Coefficients of the common linear form on the Plücker vectors.
    pub linear_form: Vec<Complex>,
    pub max_relation_residual: f64,
    pub max_containment_residual: f64,
    pub max_apolarity_residual: f64,
    pub max_system_residual: f64,
    pub all_apolar: bool,
    pub all_collinear: bool,
    /// Rank after replacing one vector by a random unit vector.
    pub control_rank: usize,
    pub vectors: Vec<[Complex; 6]>,
}

pub const PLUECKER_GAP: f64 = 1e-6;

/// Samples apolar schemes over random `g` and pencil parameters and checks
/// that their Plücker vectors span a hyperplane.
pub fn hyperplane_section_check(ctx: &Case22Context, n_samples: usize, seed: u64, tol: f64) -> Result<HyperplaneReport> {
    assert!(n_samples >= 7, "need at least 7 samples");
    let mut vectors = Vec::new();
    let mut rel: f64 = 0.0;
    let mut cont: f64 = 0.0;
    let mut apol: f64 = 0.0;
    let mut sys: f64 = 0.0;
    let mut all_apolar = true;
    let mut all_collinear = true;
    let mut attempts = 0;
    while vectors.len() < n_samples {
        if attempts >= 8 * n_samples {
            return Err(Error::Degenerate(format!(
                "only {} of {n_samples} samples after {attempts} attempts",
                vectors.len()
            )));
        }
        let mut g = rng(derive_seed(seed, attempts as u64));
        attempts += 1;
        let member = random_member(&ctx.basis21, &mut g);
        let pencil = [complex_normal(&mut g), complex_normal(&mut g)];
        let Ok(sample) = generate_apolar_22(ctx, &member, pencil, tol) else {
            continue;
        };
        let Ok(p) = pluecker_vector(ctx, &sample.scheme()) else {
            continue;
        };
        rel = rel.max(p.relation_residual);
        cont = cont.max(p.containment_residual);
        apol = apol.max(sample.apolarity.span_residual.max(sample.apolarity.kernel_residual));
        sys = sys.max(sample.system_residual);
        all_apolar &= sample.apolarity.apolar;
        all_collinear &= sample.image_rank == 2;
        vectors.push(p.coords);
    }
    let m = ComplexMatrix::from_rows(6, vectors.iter().map(|v| v.to_vec()).collect());
    let dec = svd(&m);
    let s1 = dec.values[0];
    let rank = dec.values.iter().filter(|&&s| s > PLUECKER_GAP * s1).count();
    let sigma_ratio = dec.values.get(5).copied().unwrap_or(0.0) / s1;
    let linear_form = normalize_phase(&dec.right[5]);

    let mut g = rng(derive_seed(seed, u64::MAX));
    let mut control = vectors.clone();
    let random: Vec<Complex> = (0..6).map(|_| complex_normal(&mut g)).collect();
    let random = normalize_phase(&random);
    control[0] = std::array::from_fn(|i| random[i]);
    let cm = ComplexMatrix::from_rows(6, control.iter().map(|v| v.to_vec()).collect());
    let control_rank = numeric_rank(&cm, PLUECKER_GAP);

    Ok(HyperplaneReport {
        samples: vectors.len(),
        attempts,
        singular_values: dec.values,
        rank,
        sigma_ratio,
        linear_form,
        max_relation_residual: rel,
        max_containment_residual: cont,
        max_apolarity_residual: apol,
        max_system_residual: sys,
        all_apolar,
        all_collinear,
        control_rank,
        vectors,
    })
}

/// Forms in `forms[0..4]` composed with every degree-`d` monomial in four
/// variables; the kernel of the resulting matrix is the space of degree-`d`
/// relations among the forms.
fn relation_matrix(forms: &[MultiForm<Rational>], d: u32) -> RationalMatrix {
    let s = forms[0].surface();
    let target = Degree(forms[0].degree().0 * d as i64, forms[0].degree().1 * d as i64);
    let nrows = s.dim(target);
    let mons = projective_monomials(forms.len(), d);
    let one = MultiForm::monomial(s, Side::T, [0; 4], Rational::from_integer(1.into()));
    let cols: Vec<Vec<Rational>> = mons
        .iter()
        .map(|m| {
            let mut p = one.clone();
            for (k, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    p = p.multiply(&forms[k]).expect("same ring");
                }
            }
            p.coefficients()
        })
        .collect();
    RationalMatrix::from_fn(nrows, mons.len(), |i, j| cols[j][i].clone())
}

#[derive(Clone, Debug, Serialize)]
pub struct QuarticReport {
    pub matrix_shape: (usize, usize),
    pub kernel_dim: usize,
    /// Kernel dimensions of the analogous systems in degrees 1, 2, 3.
    pub lower_kernel_dims: [usize; 3],
    /// Quartic coefficients on the degree-4 monomials of `z0..z3`.
    #[serde(skip)]
    pub quartic: Vec<Rational>,
    pub quartic_display: Vec<String>,
    /// Random rational surface points whose image the quartic kills exactly.
    pub exact_vanishing: usize,
    pub vanishing_trials: usize,
}

/// The quartic relation among the four forms of `basis` (the image of
/// `δ_{2,1}`), with control kernels in lower degrees.
pub fn implicitize_quartic(basis: &[MultiForm<Rational>], seed: u64) -> Result<QuarticReport> {
    assert_eq!(basis.len(), 4, "need four forms");
    let m = relation_matrix(basis, 4);
    let kernel = kernel_exact(&m);
    let lower = [1, 2, 3].map(|d| kernel_exact(&relation_matrix(basis, d)).len());
    if kernel.len() != 1 {
        return Err(Error::NotGeneral {
            check: "quartic relations".into(),
            expected: 1,
            found: kernel.len(),
        });
    }
    let quartic = kernel[0].clone();
    let mons = projective_monomials(4, 4);
    let mut g = rng(seed);
    let trials = 50;
    let mut exact = 0;
    for _ in 0..trials {
        let p = random_rational_point(&mut g, 20);
        let z: Vec<Rational> = basis.iter().map(|b| b.evaluate_unchecked(&p)).collect();
        let value = mons.iter().zip(&quartic).fold(Rational::zero(), |acc, (m, c)| {
            let mut t = c.clone();
            for (k, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t *= &z[k];
                }
            }
            acc + t
        });
        if value.is_zero() {
            exact += 1;
        }
    }
    Ok(QuarticReport {
        matrix_shape: (m.rows(), m.cols()),
        kernel_dim: kernel.len(),
        lower_kernel_dims: lower,
        quartic_display: quartic.iter().map(|q| q.to_string()).collect(),
        quartic,
        exact_vanishing: exact,
        vanishing_trials: trials,
    })
}

fn quartic_gradient(quartic: &[Complex], z: &[Complex]) -> Vec<Complex> {
    let mons = projective_monomials(4, 4);
    (0..4)
        .map(|c| {
            mons.iter()
                .zip(quartic)
                .filter(|(m, _)| m[c] > 0)
                .map(|(m, q)| {
                    let mut e = m.clone();
                    e[c] -= 1;
                    q * m[c] as f64 * monomial_value(&e, z)
                })
                .sum()
        })
        .collect()
}

/// `(s^k s'^l - s^l s'^k) / (s - s')` for `k < l`, with its partial
/// derivatives in `s` and `s'`.
fn divided_term(k: u32, l: u32, s: Complex, t: Complex) -> (Complex, Complex, Complex) {
    let m = l - k;
    let mut sum = Complex::zero();
    let mut ds = Complex::zero();
    let mut dt = Complex::zero();
    for i in 0..m {
        let j = m - 1 - i;
        sum += s.powu(i) * t.powu(j);
        if i > 0 {
            ds += s.powu(i - 1) * t.powu(j) * i as f64;
        }
        if j > 0 {
            dt += s.powu(i) * t.powu(j - 1) * j as f64;
        }
    }
    let st = (s * t).powu(k);
    let d_st_s = if k > 0 { t.powu(k) * s.powu(k - 1) * k as f64 } else { Complex::zero() };
    let d_st_t = if k > 0 { s.powu(k) * t.powu(k - 1) * k as f64 } else { Complex::zero() };
    (-(st * sum), -(d_st_s * sum + st * ds), -(d_st_t * sum + st * dt))
}

#[derive(Clone, Debug, Serialize)]
pub struct DoubleCurveReport {
    pub points: Vec<[Complex; 4]>,
    pub planes: usize,
    /// Dimension of quadrics through the collected image points.
    pub quadric_dim: usize,
    pub quadric_singular_values: Vec<f64>,
    pub max_gradient: f64,
    /// Quadric dimension after adding a random point of the image.
    pub control_quadric_dim: usize,
}

/// Curve of the plane section `{sum l_i z_i = 0}` of the image: the image
/// of `C_g` with `g = sum l_i basis_i`, as four polynomials in `s`
/// (coordinates of `δ(1, s, g1(s), -g0(s))`).
fn plane_section_curve(basis: &[MultiForm<Complex>], l: &[Complex]) -> Vec<Vec<Complex>> {
    let mut g = MultiForm::zero(Surface::P1xP1, Side::T, B21);
    for (b, c) in basis.iter().zip(l) {
        g = g.add(&b.scale(c)).expect("same degree");
    }
    let [g0, g1] = y_parts(&g);
    let neg_g0: Vec<Complex> = g0.iter().map(|c| -c).collect();
    basis
        .iter()
        .map(|b| {
            let mut q: Vec<Complex> = Vec::new();
            for (e, c) in b.terms() {
                let mut term = vec![Complex::zero(); e[1] as usize];
                term.push(*c);
                for _ in 0..e[2] {
                    term = mul_c(&term, &g1);
                }
                for _ in 0..e[3] {
                    term = mul_c(&term, &neg_g0);
                }
                q = add_c(&q, &term);
            }
            q
        })
        .collect()
}

/// Pairs `s != s'` with `q(s)` proportional to `q(s')`, by Gauss–Newton on
/// the divided 2x2 minors.
fn find_node<R: Rng>(q: &[Vec<Complex>], g: &mut R) -> Option<(Complex, Complex)> {
    let pairs: Vec<(usize, usize)> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
    let eval = |s: Complex, t: Complex| -> (Vec<Complex>, ComplexMatrix) {
        let mut r = Vec::new();
        let mut jac = Vec::new();
        for &(i, j) in &pairs {
            let (mut v, mut ds, mut dt) = (Complex::zero(), Complex::zero(), Complex::zero());
            for (k, a) in q[i].iter().enumerate() {
                for (l, b) in q[j].iter().enumerate() {
                    if k == l {
                        continue;
                    }
                    // a_k b_l (s^k s'^l - s^l s'^k)
                    let (lo, hi, sign) = if k < l { (k, l, 1.0) } else { (l, k, -1.0) };
                    let (h, hs, ht) = divided_term(lo as u32, hi as u32, s, t);
                    let c = a * b * sign;
                    v += c * h;
                    ds += c * hs;
                    dt += c * ht;
                }
            }
            r.push(v);
            jac.push(vec![ds, dt]);
        }
        (r, ComplexMatrix::from_rows(2, jac))
    };
    let mut s = complex_normal(g);
    let mut t = complex_normal(g);
    for _ in 0..80 {
        let (r, j) = eval(s, t);
        if !j.is_finite() {
            return None;
        }
        let rhs: Vec<Complex> = r.iter().map(|x| -x).collect();
        let (step, _) = least_squares(&j, &rhs);
        s += step[0];
        t += step[1];
        if s.norm() > 1e3 || t.norm() > 1e3 {
            return None;
        }
        if step[0].norm() + step[1].norm() < 1e-14 * (1.0 + s.norm() + t.norm()) {
            break;
        }
    }
    let qs: Vec<Complex> = q.iter().map(|p| eval_c(p, s)).collect();
    let qt: Vec<Complex> = q.iter().map(|p| eval_c(p, t)).collect();
    if (s - t).norm() < 1e-4 || projective_distance(&qs, &qt) > 1e-9 {
        return None;
    }
    Some((s, t))
}

/// Double points of the image found as nodes of random plane sections.
pub fn double_curve_probe(ctx: &Case22Context, quartic: &[Rational], n_points: usize, seed: u64) -> Result<DoubleCurveReport> {
    let basis: Vec<MultiForm<Complex>> = ctx.basis21.iter().map(|b| b.to_complex()).collect();
    let quartic: Vec<Complex> = quartic.iter().map(|q| q.to_complex()).collect();
    let qnorm = norm(&quartic);
    let mut points: Vec<[Complex; 4]> = Vec::new();
    let mut planes = 0;
    let mut g = rng(seed);
    while points.len() < n_points {
        if planes >= 4 * n_points {
            return Err(Error::Degenerate(format!(
                "found {} of {n_points} double points",
                points.len()
            )));
        }
        planes += 1;
        let l: Vec<Complex> = (0..4).map(|_| complex_normal(&mut g)).collect();
        let q = plane_section_curve(&basis, &l);
        let mut found = 0;
        for _ in 0..40 {
            if found == 3 || points.len() >= n_points {
                break;
            }
            if let Some((s, _)) = find_node(&q, &mut g) {
                let z: Vec<Complex> = q.iter().map(|p| eval_c(p, s)).collect();
                let z = normalize_phase(&z);
                if points.iter().all(|p| projective_distance(p, &z) > 1e-6) {
                    points.push(std::array::from_fn(|i| z[i]));
                    found += 1;
                }
            }
        }
    }
    let quadrics = projective_monomials(4, 2);
    let eval_rows = |pts: &[[Complex; 4]]| {
        ComplexMatrix::from_rows(
            10,
            pts.iter()
                .map(|p| quadrics.iter().map(|m| monomial_value(m, p)).collect())
                .collect(),
        )
    };
    let m = eval_rows(&points);
    let quadric_dim = 10 - numeric_rank(&m, 1e-8);
    let max_gradient = points
        .iter()
        .map(|p| norm(&quartic_gradient(&quartic, p)) / qnorm)
        .fold(0.0, f64::max);
    let p = random_rational_point(&mut g, 20);
    let extra: Vec<Complex> = basis.iter().map(|b| b.evaluate_unchecked(&p.clone().map(|x| x.to_complex()))).collect();
    let extra = normalize_phase(&extra);
    let mut with_extra = points.clone();
    with_extra.push(std::array::from_fn(|i| extra[i]));
    let control_quadric_dim = 10 - numeric_rank(&eval_rows(&with_extra), 1e-8);
    Ok(DoubleCurveReport {
        quadric_singular_values: svd_values(&m),
        points,
        planes,
        quadric_dim,
        max_gradient,
        control_quadric_dim,
    })
}

/// First generic `f` at or after `seed`, with the number of rejections.
pub fn general_form(seed: u64) -> Result<(MultiForm<Rational>, Case22Context, u64, usize)> {
    let mut last = None;
    for attempt in 0..8 {
        let s = derive_seed(seed, attempt);
        let f = random_form(Surface::P1xP1, Side::S, A, s);
        match build_context(&f) {
            Ok(ctx) => return Ok((f, ctx, s, attempt as usize)),
            Err(e @ Error::NotGeneral { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// The full `(2,2)` pipeline.
pub fn run(seed: u64, samples: usize, tol: &Tolerances) -> CaseReport {
    let mut report = CaseReport::new("case22", Some(Surface::P1xP1), Some(A), seed, tol.clone());
    let t = Instant::now();
    let (f, ctx, form_seed, rejections) = match general_form(seed) {
        Ok(x) => x,
        Err(e) => {
            report.reject("context", json!({ "error": e.to_string() }));
            return report;
        }
    };
    report.form_seed = Some(form_seed);
    report.rejections = rejections;
    report.check("context", true, json!({ "dims": ctx.dims, "form": f.display() }));
    report.time("context", t);

    let t = Instant::now();
    match check_partials_not_split(&f) {
        Ok(s) => report.check("partials-not-split", s.ok(), json!(s)),
        Err(e) => report.check("partials-not-split", false, json!({ "error": e.to_string() })),
    }
    report.time("split", t);

    let t = Instant::now();
    match hyperplane_section_check(&ctx, samples.max(7), derive_seed(form_seed, 1), 1e-7) {
        Ok(h) => {
            let ok = h.rank == 5
                && h.sigma_ratio < PLUECKER_GAP
                && h.max_relation_residual < 1e-10
                && h.max_containment_residual < 1e-9
                && h.all_apolar
                && h.all_collinear
                && h.control_rank == 6;
            report.check("pluecker-hyperplane", ok, json!(h));
        }
        Err(e) => report.check("pluecker-hyperplane", false, json!({ "error": e.to_string() })),
    }
    report.time("pluecker", t);

    let t = Instant::now();
    let mut quartic = None;
    for (name, basis) in [("quartic-21", &ctx.basis21), ("quartic-12", &ctx.basis12)] {
        match implicitize_quartic(basis, derive_seed(form_seed, 2)) {
            Ok(q) => {
                let ok = q.kernel_dim == 1
                    && q.lower_kernel_dims == [0, 0, 0]
                    && q.exact_vanishing == q.vanishing_trials;
                if quartic.is_none() {
                    quartic = Some(q.quartic.clone());
                }
                report.check(name, ok, json!(q));
            }
            Err(e) => report.check(name, false, json!({ "error": e.to_string() })),
        }
    }
    report.time("quartic", t);

    let t = Instant::now();
    if let Some(q) = quartic {
        match double_curve_probe(&ctx, &q, 8, derive_seed(form_seed, 3)) {
            Ok(d) => {
                let ok = d.quadric_dim == 3 && d.max_gradient < 1e-6 && d.control_quadric_dim <= 2;
                report.check("double-curve", ok, json!(d));
            }
            Err(e) => report.check("double-curve", false, json!({ "error": e.to_string() })),
        }
    } else {
        report.check("double-curve", false, json!({ "error": "no quartic" }));
    }
    report.time("double-curve", t);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(seed: u64) -> Case22Context {
        general_form(seed).unwrap().1
    }

    #[test]
    fn rank_one_form_is_rejected() {
        let f = MultiForm::monomial(Surface::P1xP1, Side::S, [2, 0, 2, 0], rational(1, 1));
        match build_context(&f) {
            Err(Error::NotGeneral { expected, found, .. }) => assert_ne!(expected, found),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn dims_and_split() {
        let c = ctx(1);
        assert_eq!(c.dims, [4, 4, 0]);
        assert!(check_partials_not_split(&c.f).unwrap().ok());
    }

    #[test]
    fn planted_split_is_detected() {
        let a = random_form(Surface::P1xP1, Side::S, Degree(2, 0), 4);
        let c = random_form(Surface::P1xP1, Side::S, Degree(2, 0), 5);
        let y = |e: [u32; 4], k: i64| MultiForm::monomial(Surface::P1xP1, Side::S, e, rational(k, 1));
        let f = y([0, 0, 2, 0], 1)
            .multiply(&a)
            .unwrap()
            .add(&y([0, 0, 1, 1], 2).multiply(&c).unwrap())
            .unwrap()
            .add(&y([0, 0, 0, 2], 1).multiply(&c).unwrap())
            .unwrap();
        assert!(!check_partials_not_split(&f).unwrap().y_side);
    }

    #[test]
    fn one_sample_is_apolar() {
        let c = ctx(2);
        let g = random_member(&c.basis21, &mut rng(3));
        let s = generate_apolar_22(&c, &g, [Complex::new(1.0, 0.0), Complex::zero()], 1e-8).unwrap();
        assert!(s.apolarity.apolar, "{:?}", s.apolarity);
        assert!(s.system_residual < 1e-12);
        assert_eq!(s.image_rank, 2);
        let p = pluecker_vector(&c, &s.scheme()).unwrap();
        assert!(p.relation_residual < 1e-10);
        assert!(p.containment_residual < 1e-9);
    }

    #[test]
    fn g_outside_perp_is_inconsistent() {
        let c = ctx(2);
        let g = t_monomial([2, 0, 1, 0])
            .add(&t_monomial([0, 2, 0, 1]))
            .unwrap();
        let r = generate_apolar_22(&c, &g, [Complex::new(1.0, 0.0), Complex::zero()], 1e-8);
        assert!(matches!(r, Err(Error::Inconsistent(_))), "{r:?}");
    }
}
