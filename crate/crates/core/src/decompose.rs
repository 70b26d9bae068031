//! Multi-start damped Gauss–Newton for powersum decompositions
//! `f = sum c_i nu(p_i)`.
//!
//! Points live in affine charts (one coordinate per block fixed to one) and
//! the coefficients are eliminated by linear least squares at every
//! iteration (variable projection). The step solves
//! `min |D dθ + Φ dc + r|^2 + λ |dθ|^2`, whose `dθ` part is the projected
//! step `min |P⊥ D dθ + r|^2 + λ |dθ|^2`.

use serde::Serialize;

use crate::apolarity::PointScheme;
use crate::error::{Error, Result};
use crate::linalg::{least_squares, norm, projective_distance, Complex, ComplexMatrix, Scalar};
use crate::multigraded::{MultiForm, Surface};
use crate::rng::{complex_normal, derive_seed, rng};

/// How a point is parametrized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PointModel {
    /// Cox coordinates of a surface point, blocks `(t0, t1)` and `(u0, u1)`.
    Surface(Surface),
    /// Homogeneous coordinates in `P^(n-1)`.
    Projective(usize),
}

impl PointModel {
    pub fn nvars(&self) -> usize {
        match self {
            PointModel::Surface(_) => 4,
            PointModel::Projective(n) => *n,
        }
    }

    /// Scales `p` into the chart given by its largest coordinates; returns
    /// the pivot indices, which hold exactly one afterwards.
    fn normalize(&self, p: &mut [Complex]) -> Vec<usize> {
        let argmax = |v: &[Complex]| -> usize {
            Complex::pivot_index(v).expect("point must be nonzero in each block")
        };
        let one = Complex::new(1.0, 0.0);
        match self {
            PointModel::Surface(s) => {
                let iu = 2 + argmax(&p[2..4]);
                let mu = one / p[iu];
                let q = s.rescale(&[p[0], p[1], p[2], p[3]], &one, &mu);
                let it = argmax(&q[0..2]);
                let lambda = one / q[it];
                let q = s.rescale(&q, &lambda, &one);
                p.copy_from_slice(&q);
                p[it] = one;
                p[iu] = one;
                vec![it, iu]
            }
            PointModel::Projective(_) => {
                let i = argmax(p);
                let s = one / p[i];
                for x in p.iter_mut() {
                    *x *= s;
                }
                p[i] = one;
                vec![i]
            }
        }
    }

    pub fn distance(&self, p: &[Complex], q: &[Complex]) -> f64 {
        match self {
            PointModel::Surface(s) => s.point_distance(
                &[p[0], p[1], p[2], p[3]],
                &[q[0], q[1], q[2], q[3]],
            ),
            PointModel::Projective(_) => projective_distance(p, q),
        }
    }

    fn random_point<R: rand::Rng>(&self, g: &mut R) -> Vec<Complex> {
        (0..self.nvars()).map(|_| complex_normal(g)).collect()
    }
}

/// Monomials of degree `d` in `n` variables, lexicographically descending.
pub fn projective_monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 1 {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n - 1, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

pub fn monomial_value(m: &[u32], p: &[Complex]) -> Complex {
    m.iter()
        .zip(p)
        .fold(Complex::new(1.0, 0.0), |acc, (&e, &x)| acc * x.powu(e))
}

/// `d/dp_c p^m`.
fn monomial_derivative(m: &[u32], p: &[Complex], c: usize) -> Complex {
    if m[c] == 0 {
        return Complex::new(0.0, 0.0);
    }
    let mut acc = Complex::new(m[c] as f64, 0.0);
    for (i, (&e, &x)) in m.iter().zip(p).enumerate() {
        let e = if i == c { e - 1 } else { e };
        acc *= x.powu(e);
    }
    acc
}

#[derive(Clone, Debug, Serialize)]
pub struct DecomposeOptions {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Relative residual below which a start counts as a success.
    pub tolerance: f64,
    pub initial_damping: f64,
    pub damping_up: f64,
    pub damping_down: f64,
    /// Free chart coordinates above this modulus trigger a chart switch.
    pub chart_bound: f64,
    /// Minimal distance between points of an accepted decomposition.
    pub min_separation: f64,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        DecomposeOptions {
            restarts: 64,
            max_iterations: 400,
            tolerance: 1e-10,
            initial_damping: 1e-3,
            damping_up: 10.0,
            damping_down: 0.1,
            chart_bound: 2.0,
            min_separation: 1e-6,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DecompositionProblem {
    pub model: PointModel,
    pub monomials: Vec<Vec<u32>>,
    /// Target in value coordinates, one entry per monomial.
    pub target: Vec<Complex>,
    pub k: usize,
    pub options: DecomposeOptions,
}

impl DecompositionProblem {
    /// Decomposition of a surface form by `k` evaluation points; the target
    /// is the value vector of `f`.
    pub fn for_form<K: Scalar>(f: &MultiForm<K>, k: usize, options: DecomposeOptions) -> Self {
        let s = f.surface();
        DecompositionProblem {
            model: PointModel::Surface(s),
            monomials: s.monomials(f.degree()).iter().map(|e| e.to_vec()).collect(),
            target: f.values().iter().map(|v| v.to_complex()).collect(),
            k,
            options,
        }
    }

    /// Decomposition of a form of degree `d` in `n` variables given by its
    /// values on [`projective_monomials`].
    pub fn projective(n: usize, d: u32, target: Vec<Complex>, k: usize, options: DecomposeOptions) -> Self {
        let monomials = projective_monomials(n, d);
        assert_eq!(monomials.len(), target.len(), "target length");
        DecompositionProblem {
            model: PointModel::Projective(n),
            monomials,
            target,
            k,
            options,
        }
    }

    fn column(&self, p: &[Complex]) -> Vec<Complex> {
        self.monomials.iter().map(|m| monomial_value(m, p)).collect()
    }

    fn design(&self, points: &[Vec<Complex>]) -> ComplexMatrix {
        let cols: Vec<Vec<Complex>> = points.iter().map(|p| self.column(p)).collect();
        ComplexMatrix::from_fn(self.monomials.len(), points.len(), |i, j| cols[j][i])
    }

    /// `|sum c_i nu(p_i) - f| / |f|`, computed from scratch.
    pub fn relative_residual(&self, points: &[Vec<Complex>], coeffs: &[Complex]) -> f64 {
        let mut acc = vec![Complex::new(0.0, 0.0); self.monomials.len()];
        for (p, c) in points.iter().zip(coeffs) {
            for (a, m) in acc.iter_mut().zip(&self.monomials) {
                *a += c * monomial_value(m, p);
            }
        }
        let diff: Vec<Complex> = acc.iter().zip(&self.target).map(|(a, b)| a - b).collect();
        norm(&diff) / norm(&self.target)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub model: PointModel,
    /// Chart-normalized points.
    pub points: Vec<Vec<Complex>>,
    pub coeffs: Vec<Complex>,
    pub residual: f64,
    pub iterations: usize,
    pub start: usize,
}

impl Decomposition {
    pub fn scheme(&self) -> Result<PointScheme<Complex>> {
        match self.model {
            PointModel::Surface(s) => PointScheme::new(
                s,
                self.points.iter().map(|p| [p[0], p[1], p[2], p[3]]).collect(),
            ),
            PointModel::Projective(_) => Err(Error::Invalid(
                "projective decompositions have no surface scheme".into(),
            )),
        }
    }
}

struct State {
    points: Vec<Vec<Complex>>,
    pivots: Vec<Vec<usize>>,
    coeffs: Vec<Complex>,
    residual: f64,
}

fn resolve(problem: &DecompositionProblem, points: Vec<Vec<Complex>>, pivots: Vec<Vec<usize>>, scale: f64) -> State {
    let phi = problem.design(&points);
    let target: Vec<Complex> = problem.target.iter().map(|t| t / scale).collect();
    let (coeffs, res) = least_squares(&phi, &target);
    let residual = if res.is_finite() { res } else { f64::INFINITY };
    State {
        points,
        pivots,
        coeffs,
        residual,
    }
}

fn free_indices(model: &PointModel, pivots: &[usize]) -> Vec<usize> {
    (0..model.nvars()).filter(|i| !pivots.contains(i)).collect()
}

/// Damped Gauss–Newton iterations from `state`; only decreasing steps are
/// accepted, so the residual never increases.
fn iterate(problem: &DecompositionProblem, mut state: State, scale: f64, max_iter: usize, tol: f64) -> (State, usize) {
    let o = &problem.options;
    let model = problem.model;
    let mut damping = o.initial_damping;
    let mut iters = 0;
    let mut settled = 0;
    while iters < max_iter {
        iters += 1;
        let frees: Vec<Vec<usize>> = state.pivots.iter().map(|pv| free_indices(&model, pv)).collect();
        let ntheta: usize = frees.iter().map(Vec::len).sum();
        let nrows = problem.monomials.len();
        let k = state.points.len();
        // columns: D (ntheta) then Φ (k)
        let mut cols: Vec<Vec<Complex>> = Vec::with_capacity(ntheta + k);
        for (i, p) in state.points.iter().enumerate() {
            for &c in &frees[i] {
                cols.push(
                    problem
                        .monomials
                        .iter()
                        .map(|m| state.coeffs[i] * monomial_derivative(m, p, c))
                        .collect(),
                );
            }
        }
        for p in &state.points {
            cols.push(problem.column(p));
        }
        let phi_c: Vec<Complex> = (0..nrows)
            .map(|r| (0..k).map(|j| cols[ntheta + j][r] * state.coeffs[j]).sum())
            .collect();
        let resid: Vec<Complex> = phi_c
            .iter()
            .zip(&problem.target)
            .map(|(a, t)| a - t / scale)
            .collect();
        let sq = damping.sqrt();
        let a = ComplexMatrix::from_fn(nrows + ntheta, ntheta + k, |r, c| {
            if r < nrows {
                cols[c][r]
            } else if c == r - nrows {
                Complex::new(sq, 0.0)
            } else {
                Complex::new(0.0, 0.0)
            }
        });
        let mut rhs: Vec<Complex> = resid.iter().map(|x| -x).collect();
        rhs.extend(std::iter::repeat_n(Complex::new(0.0, 0.0), ntheta));
        if !a.is_finite() {
            break;
        }
        let (step, _) = least_squares(&a, &rhs);
        let mut points = state.points.clone();
        let mut pivots = state.pivots.clone();
        let mut idx = 0;
        for (i, p) in points.iter_mut().enumerate() {
            for &c in &frees[i] {
                p[c] += step[idx];
                idx += 1;
            }
            if frees[i].iter().any(|&c| p[c].norm() > o.chart_bound) {
                pivots[i] = model.normalize(p);
            }
        }
        let ok = points.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite());
        let cand = if ok {
            Some(resolve(problem, points, pivots, scale))
        } else {
            None
        };
        match cand {
            Some(c) if c.residual < state.residual => {
                let gain = state.residual - c.residual;
                state = c;
                damping = (damping * o.damping_down).max(1e-14);
                if state.residual < tol * 1e-3 || (state.residual < tol && gain < 1e-3 * state.residual) {
                    settled += 1;
                    if settled >= 2 {
                        break;
                    }
                }
            }
            _ => {
                damping *= o.damping_up;
                if damping > 1e12 {
                    break;
                }
            }
        }
    }
    (state, iters)
}

fn finish(problem: &DecompositionProblem, mut state: State, scale: f64, iterations: usize, start: usize) -> Decomposition {
    for (p, piv) in state.points.iter_mut().zip(state.pivots.iter_mut()) {
        *piv = problem.model.normalize(p);
    }
    let state = resolve(problem, state.points, state.pivots, scale);
    let coeffs: Vec<Complex> = state.coeffs.iter().map(|c| c * scale).collect();
    let residual = problem.relative_residual(&state.points, &coeffs);
    Decomposition {
        model: problem.model,
        points: state.points,
        coeffs,
        residual,
        iterations,
        start,
    }
}

fn separated(problem: &DecompositionProblem, points: &[Vec<Complex>]) -> bool {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if problem.model.distance(&points[i], &points[j]) < problem.options.min_separation {
                return false;
            }
        }
    }
    true
}

/// One start from the sub-seed of `start`.
fn run_start(problem: &DecompositionProblem, seed: u64, start: usize) -> Decomposition {
    let scale = norm(&problem.target);
    let mut g = rng(derive_seed(seed, start as u64));
    let mut points = Vec::with_capacity(problem.k);
    let mut pivots = Vec::with_capacity(problem.k);
    for _ in 0..problem.k {
        let mut p = problem.model.random_point(&mut g);
        pivots.push(problem.model.normalize(&mut p));
        points.push(p);
    }
    let state = resolve(problem, points, pivots, scale);
    let o = &problem.options;
    let (state, iters) = iterate(problem, state, scale, o.max_iterations, o.tolerance);
    finish(problem, state, scale, iters, start)
}

fn accept(problem: &DecompositionProblem, d: &Decomposition) -> bool {
    d.residual < problem.options.tolerance && separated(problem, &d.points)
}

/// The lowest-index successful start, or the best residual seen.
pub fn gauss_newton_decompose(problem: &DecompositionProblem, seed: u64) -> Result<Decomposition> {
    assert!(problem.k >= 1, "k must be positive");
    assert!(problem.options.tolerance > 0.0, "tolerance must be positive");
    let mut best = f64::INFINITY;
    for start in 0..problem.options.restarts {
        let d = run_start(problem, seed, start);
        if accept(problem, &d) {
            return Ok(d);
        }
        best = best.min(d.residual);
    }
    Err(Error::Exhausted {
        restarts: problem.options.restarts,
        best_residual: best,
    })
}

/// Successful starts in index order, stopping once `wanted` are found.
pub fn decompose_successes(problem: &DecompositionProblem, seed: u64, wanted: usize) -> (Vec<Decomposition>, f64) {
    let mut out = Vec::new();
    let mut best = f64::INFINITY;
    for start in 0..problem.options.restarts {
        let d = run_start(problem, seed, start);
        best = best.min(d.residual);
        if accept(problem, &d) {
            out.push(d);
            if out.len() >= wanted {
                break;
            }
        }
    }
    (out, best)
}

/// Coefficients re-solved with the points fixed.
pub fn resolve_coefficients(problem: &DecompositionProblem, dec: &Decomposition) -> Decomposition {
    let scale = norm(&problem.target);
    let pivots = dec.points.iter().map(|p| {
        let mut q = p.clone();
        problem.model.normalize(&mut q)
    });
    let state = resolve(problem, dec.points.clone(), pivots.collect(), scale);
    let coeffs: Vec<Complex> = state.coeffs.iter().map(|c| c * scale).collect();
    let residual = problem.relative_residual(&state.points, &coeffs);
    if residual > dec.residual {
        return dec.clone();
    }
    Decomposition {
        coeffs,
        residual,
        ..dec.clone()
    }
}

/// Further iterations driving the residual towards machine precision.
/// Returns the input unchanged and `false` when it is not close enough to a
/// solution to polish.
pub fn polish(problem: &DecompositionProblem, dec: &Decomposition) -> (Decomposition, bool) {
    if dec.residual.is_nan() || dec.residual >= 1e-2 {
        return (dec.clone(), false);
    }
    let scale = norm(&problem.target);
    let mut points = dec.points.clone();
    let pivots: Vec<Vec<usize>> = points.iter_mut().map(|p| problem.model.normalize(p)).collect();
    let state = resolve(problem, points, pivots, scale);
    let (state, iters) = iterate(problem, state, scale, problem.options.max_iterations, 1e-15);
    let out = finish(problem, state, scale, dec.iterations + iters, dec.start);
    if out.residual <= dec.residual {
        (out, true)
    } else {
        (dec.clone(), true)
    }
}
