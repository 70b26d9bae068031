//! Catalecticants, orthogonal components `I_{f,B}`, ideals of point schemes
//! in a fixed degree, and apolarity tests.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{least_squares, norm, Complex, Matrix, Scalar};
use crate::multigraded::{
    eval_monomial, exp_add, exp_factorial, Degree, Exponent, MultiForm, Side, Surface,
};

/// Matrix of `g -> g ⌟ f` from `T_B` to `S_{A-B}`.
///
/// Columns are indexed by the monomials of `T_B`. Row `rho` reads the
/// pairing of the image with the dual monomial `t^rho`, so the entry at
/// `(rho, gamma)` is `(gamma+rho)! * f_{gamma+rho}` and the matrix for `B`
/// is the exact transpose of the matrix for `A-B`.
#[derive(Clone, Debug)]
pub struct Catalecticant<K> {
    pub form_degree: Degree,
    pub degree: Degree,
    pub row_labels: Vec<Exponent>,
    pub col_labels: Vec<Exponent>,
    pub matrix: Matrix<K>,
}

pub fn catalecticant<K: Scalar>(f: &MultiForm<K>, b: Degree) -> Catalecticant<K> {
    let surface = f.surface();
    let a = f.degree();
    let cols = surface.monomials(b);
    let rows = surface.monomials(a - b);
    let matrix = Matrix::from_fn(rows.len(), cols.len(), |i, j| {
        let e = exp_add(&rows[i], &cols[j]);
        let c = f.coeff(&e);
        if c.is_zero() {
            c
        } else {
            c * K::from_bigint(&exp_factorial(&e))
        }
    });
    Catalecticant {
        form_degree: a,
        degree: b,
        row_labels: rows,
        col_labels: cols,
        matrix,
    }
}

fn forms_from_vectors<K: Scalar>(
    surface: Surface,
    degree: Degree,
    vectors: Vec<Vec<K>>,
) -> Vec<MultiForm<K>> {
    vectors
        .into_iter()
        .map(|v| MultiForm::from_coefficients(surface, Side::T, degree, &v))
        .collect()
}

/// Basis of `I_{f,B}`; all of `T_B` when `A-B` is not effective.
pub fn orthogonal_component<K: Scalar>(f: &MultiForm<K>, b: Degree) -> Vec<MultiForm<K>> {
    let cat = catalecticant(f, b);
    forms_from_vectors(f.surface(), b, K::kernel(&cat.matrix))
}

pub fn orthogonal_dimension<K: Scalar>(f: &MultiForm<K>, b: Degree) -> usize {
    let cat = catalecticant(f, b);
    cat.matrix.cols() - K::rank(&cat.matrix)
}

/// Dimension of the span of a list of forms of one degree.
pub fn span_dimension<K: Scalar>(forms: &[MultiForm<K>]) -> usize {
    match forms.first() {
        None => 0,
        Some(first) => {
            let n = first.surface().dim(first.degree());
            let m = Matrix::from_rows(n, forms.iter().map(|g| g.coefficients()).collect());
            K::rank(&m)
        }
    }
}

/// All products `m * g` with `m` a monomial of degree `shift`.
pub fn shift_products<K: Scalar>(forms: &[MultiForm<K>], shift: Degree) -> Vec<MultiForm<K>> {
    let mut out = Vec::new();
    for g in forms {
        for e in g.surface().monomials(shift) {
            let m = MultiForm::monomial(g.surface(), Side::T, e, K::one());
            out.push(m.multiply(g).expect("same ring and side"));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct GenerationEntry {
    pub degree: Degree,
    pub target_dim: usize,
    pub generated_dim: usize,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenerationReport {
    pub generators: Vec<Degree>,
    pub entries: Vec<GenerationEntry>,
}

impl GenerationReport {
    pub fn all_ok(&self) -> bool {
        self.entries.iter().all(|e| e.ok)
    }

    pub fn entry(&self, d: Degree) -> Option<&GenerationEntry> {
        self.entries.iter().find(|e| e.degree == d)
    }
}

/// Effective degrees `C` with `0 <= C <= A` componentwise, in order.
pub fn degrees_below(surface: Surface, a: Degree) -> Vec<Degree> {
    let mut out = Vec::new();
    for c0 in 0..=a.0.max(-1) {
        for c1 in 0..=a.1.max(-1) {
            let c = Degree(c0, c1);
            if surface.is_effective(c) && surface.is_effective(a - c) {
                out.push(c);
            }
        }
    }
    out
}

/// Checks `sum_B T_{C-B} * I_{f,B} = I_{f,C}` over generator degrees `B`.
///
/// With `targets` unset every effective `C <= A` with `I_{f,C} != 0` is
/// checked.
pub fn generation_check<K: Scalar>(
    f: &MultiForm<K>,
    generators: &[Degree],
    targets: Option<&[Degree]>,
) -> GenerationReport {
    let surface = f.surface();
    let bases: Vec<(Degree, Vec<MultiForm<K>>)> = generators
        .iter()
        .map(|&b| (b, orthogonal_component(f, b)))
        .collect();
    let targets: Vec<Degree> = match targets {
        Some(t) => t.to_vec(),
        None => degrees_below(surface, f.degree())
            .into_iter()
            .filter(|&c| orthogonal_dimension(f, c) > 0)
            .collect(),
    };
    let entries = targets
        .into_iter()
        .map(|c| {
            let target = orthogonal_component(f, c);
            let mut generated = Vec::new();
            for (b, basis) in &bases {
                if surface.is_effective(c - *b) {
                    generated.extend(shift_products(basis, c - *b));
                }
            }
            let generated_dim = span_dimension(&generated);
            let mut both = target.clone();
            both.extend(generated);
            let joint = span_dimension(&both);
            GenerationEntry {
                degree: c,
                target_dim: target.len(),
                generated_dim,
                ok: generated_dim == target.len() && joint == target.len(),
            }
        })
        .collect();
    GenerationReport {
        generators: generators.to_vec(),
        entries,
    }
}

/// A reduced finite set of surface points in Cox coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct PointScheme<K> {
    surface: Surface,
    points: Vec<[K; 4]>,
}

/// Points closer than this (on the very ample image) count as equal.
pub const POINT_DISTINCTNESS: f64 = 1e-9;

impl<K: Scalar> PointScheme<K> {
    pub fn new(surface: Surface, points: Vec<[K; 4]>) -> Result<Self> {
        for p in &points {
            if surface.in_irrelevant_locus(p) {
                return Err(Error::IrrelevantPoint(format!("{p:?}")));
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                let same = if K::EXACT {
                    surface.normalize_point(&points[i]) == surface.normalize_point(&points[j])
                } else {
                    surface.point_distance(&points[i], &points[j]) < POINT_DISTINCTNESS
                };
                if same {
                    return Err(Error::DuplicatePoint(i, j));
                }
            }
        }
        Ok(PointScheme { surface, points })
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn points(&self) -> &[[K; 4]] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn to_complex(&self) -> PointScheme<Complex> {
        PointScheme {
            surface: self.surface,
            points: self
                .points
                .iter()
                .map(|p| std::array::from_fn(|k| p[k].to_complex()))
                .collect(),
        }
    }

    /// Rows `p^m` over the monomials `m` of `T_B`, one row per point.
    pub fn evaluation_matrix(&self, b: Degree) -> Matrix<K> {
        let mons = self.surface.monomials(b);
        Matrix::from_fn(self.points.len(), mons.len(), |i, j| {
            eval_monomial(&mons[j], &self.points[i])
        })
    }
}

/// Basis of `I_{Γ,B}`, the forms of degree `B` vanishing on every point.
pub fn scheme_ideal_component<K: Scalar>(gamma: &PointScheme<K>, b: Degree) -> Vec<MultiForm<K>> {
    let e = gamma.evaluation_matrix(b);
    forms_from_vectors(gamma.surface, b, K::kernel(&e))
}

#[derive(Clone, Debug, Serialize)]
pub struct ApolarityVerdict {
    pub apolar: bool,
    /// Test (i): pairings of `I_{Γ,A}` with `f`, relative to `|f|`.
    pub kernel_residual: f64,
    /// Test (ii): distance of `f` from the span of the evaluation points,
    /// relative to `|f|`.
    pub span_residual: f64,
    pub kernel_test: bool,
    pub span_test: bool,
}

/// Default tolerance for floating apolarity tests.
pub const APOLARITY_TOL: f64 = 1e-7;

/// Decides whether `Γ` is apolar to `f` by two independent tests; `tol` is
/// only used in floating mode. Disagreement beyond `tol` is an error.
pub fn is_apolar<K: Scalar>(
    gamma: &PointScheme<K>,
    f: &MultiForm<K>,
    tol: f64,
) -> Result<ApolarityVerdict> {
    if gamma.surface != f.surface() {
        return Err(Error::SurfaceMismatch(gamma.surface, f.surface()));
    }
    if f.side() != Side::S {
        return Err(Error::SideMismatch {
            expected: Side::S,
            found: f.side(),
        });
    }
    let a = f.degree();
    let e = gamma.evaluation_matrix(a);
    let v = f.values();
    let kernel = K::kernel(&e);
    let pairings: Vec<K> = kernel
        .iter()
        .map(|g| {
            g.iter()
                .zip(&v)
                .fold(K::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
        })
        .collect();

    if K::EXACT {
        let kernel_test = pairings.iter().all(|p| p.is_zero());
        let with_f = e.vstack(&Matrix::from_rows(v.len(), vec![v.clone()]));
        let span_test = K::rank(&with_f) == K::rank(&e);
        if kernel_test != span_test {
            return Err(Error::ApolarityInconsistent {
                kernel: if kernel_test { 0.0 } else { 1.0 },
                span: if span_test { 0.0 } else { 1.0 },
            });
        }
        let r = if kernel_test { 0.0 } else { 1.0 };
        return Ok(ApolarityVerdict {
            apolar: kernel_test,
            kernel_residual: r,
            span_residual: r,
            kernel_test,
            span_test,
        });
    }

    let vc: Vec<Complex> = v.iter().map(|x| x.to_complex()).collect();
    let scale = norm(&vc);
    if scale == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let pc: Vec<Complex> = pairings.iter().map(|x| x.to_complex()).collect();
    let kernel_residual = norm(&pc) / scale;
    let span_residual = if gamma.is_empty() {
        1.0
    } else {
        let et = e.transpose().map(|x| x.to_complex());
        least_squares(&et, &vc).1 / scale
    };
    let kernel_test = kernel_residual <= tol;
    let span_test = span_residual <= tol;
    if kernel_test != span_test && (kernel_residual - span_residual).abs() > tol {
        return Err(Error::ApolarityInconsistent {
            kernel: kernel_residual,
            span: span_residual,
        });
    }
    Ok(ApolarityVerdict {
        apolar: kernel_test,
        kernel_residual,
        span_residual,
        kernel_test,
        span_test,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaCheck {
    /// `I_{Γ,B} ⊆ I_{f,B}` for every effective `B <= A`.
    pub all_degrees: bool,
    /// `I_{Γ,A} ⊆ H_f`.
    pub top_degree: bool,
    pub first_failure: Option<Degree>,
}

impl LemmaCheck {
    pub fn equivalent(&self) -> bool {
        self.all_degrees == self.top_degree
    }
}

/// Both sides of the apolarity lemma, by direct containment in every degree.
pub fn apolarity_lemma_check<K: Scalar>(gamma: &PointScheme<K>, f: &MultiForm<K>) -> LemmaCheck {
    let a = f.degree();
    let contained = |b: Degree| -> bool {
        let cat = catalecticant(f, b);
        K::kernel(&gamma.evaluation_matrix(b))
            .iter()
            .all(|g| cat.matrix.mul_vec(g).iter().all(|x| x.is_zero()))
    };
    let mut first_failure = None;
    for b in degrees_below(gamma.surface, a) {
        if !contained(b) {
            first_failure = Some(b);
            break;
        }
    }
    let top_degree = if first_failure == Some(a) {
        false
    } else {
        contained(a)
    };
    LemmaCheck {
        all_degrees: first_failure.is_none(),
        top_degree,
        first_failure,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rational, Rational};
    use crate::multigraded::random_form;

    fn q(v: i64) -> Rational {
        rational(v, 1)
    }

    fn pt(v: [i64; 4]) -> [Rational; 4] {
        v.map(q)
    }

    #[test]
    fn lemma_31_dimensions() {
        let f = random_form(Surface::P1xP1, Side::S, Degree(2, 2), 3);
        assert_eq!(orthogonal_dimension(&f, Degree(2, 1)), 4);
        assert_eq!(orthogonal_dimension(&f, Degree(1, 2)), 4);
        assert_eq!(orthogonal_dimension(&f, Degree(1, 1)), 0);
        assert_eq!(orthogonal_component(&f, Degree(2, 1)).len(), 4);
        for g in orthogonal_component(&f, Degree(2, 1)) {
            let r = crate::multigraded::diff_apply(&g, &f).unwrap();
            assert!(r.is_zero());
        }
    }

    #[test]
    fn beyond_a_everything_is_orthogonal() {
        let f = random_form(Surface::P1xP1, Side::S, Degree(2, 2), 3);
        assert_eq!(orthogonal_dimension(&f, Degree(3, 0)), 4);
        assert_eq!(orthogonal_dimension(&f, Degree(0, 3)), 4);
    }

    #[test]
    fn transpose_duality_small() {
        let f = random_form(Surface::F1, Side::S, Degree(2, 3), 9);
        let c1 = catalecticant(&f, Degree(1, 1));
        let c2 = catalecticant(&f, Degree(1, 2));
        assert_eq!(c1.matrix, c2.matrix.transpose());
    }

    #[test]
    fn generation_22() {
        let f = random_form(Surface::P1xP1, Side::S, Degree(2, 2), 4);
        let r = generation_check(&f, &[Degree(2, 1)], Some(&[Degree(2, 2)]));
        assert_eq!(r.entries[0].generated_dim, 8);
        assert!(r.all_ok());
        let full = generation_check(
            &f,
            &[Degree(2, 1), Degree(1, 2), Degree(3, 0), Degree(0, 3)],
            None,
        );
        assert!(full.all_ok(), "{full:?}");
    }

    #[test]
    fn scheme_ideal_examples() {
        let g = PointScheme::new(Surface::P1xP1, vec![pt([1, 2, 3, 4])]).unwrap();
        assert_eq!(scheme_ideal_component(&g, Degree(1, 0)).len(), 1);
        let g = PointScheme::new(
            Surface::P1xP1,
            vec![pt([1, 2, 3, 4]), pt([1, -1, 2, 5]), pt([3, 1, 1, 1]), pt([2, 7, -1, 3])],
        )
        .unwrap();
        assert_eq!(scheme_ideal_component(&g, Degree(2, 1)).len(), 2);
    }

    #[test]
    fn duplicates_and_irrelevant_points_rejected() {
        let r = PointScheme::new(Surface::P1xP1, vec![pt([1, 2, 3, 4]), pt([2, 4, -3, -4])]);
        assert!(matches!(r, Err(Error::DuplicatePoint(0, 1))));
        let r = PointScheme::new(Surface::F1, vec![pt([0, 0, 1, 1])]);
        assert!(matches!(r, Err(Error::IrrelevantPoint(_))));
        // on F1, (t0, t1, u0, u1) ~ (t0, mu t1, mu u0, mu u1)
        let r = PointScheme::new(Surface::F1, vec![pt([1, 2, 3, 4]), pt([1, 4, 6, 8])]);
        assert!(matches!(r, Err(Error::DuplicatePoint(0, 1))));
    }

    #[test]
    fn planted_pair_is_apolar() {
        let f = MultiForm::from_terms(
            Surface::P1xP1,
            Side::S,
            Degree(2, 2),
            [([2, 0, 2, 0], q(1)), ([0, 2, 0, 2], q(1))],
        )
        .unwrap();
        let g = PointScheme::new(Surface::P1xP1, vec![pt([1, 0, 1, 0]), pt([0, 1, 0, 1])]).unwrap();
        assert!(is_apolar(&g, &f, 0.0).unwrap().apolar);
        let l = apolarity_lemma_check(&g, &f);
        assert!(l.all_degrees && l.top_degree);

        let f = MultiForm::monomial(Surface::P1xP1, Side::S, [2, 0, 2, 0], q(1));
        let g = PointScheme::new(Surface::P1xP1, vec![pt([0, 1, 0, 1])]).unwrap();
        assert!(!is_apolar(&g, &f, 0.0).unwrap().apolar);
        let l = apolarity_lemma_check(&g, &f);
        assert!(!l.all_degrees && !l.top_degree);
    }

    #[test]
    fn float_mode_agrees_with_exact() {
        let f = MultiForm::from_terms(
            Surface::P1xP1,
            Side::S,
            Degree(2, 2),
            [([2, 0, 2, 0], q(1)), ([0, 2, 0, 2], q(1))],
        )
        .unwrap();
        let g = PointScheme::new(Surface::P1xP1, vec![pt([1, 0, 1, 0]), pt([0, 1, 0, 1])]).unwrap();
        let v = is_apolar(&g.to_complex(), &f.to_complex(), 1e-9).unwrap();
        assert!(v.apolar && v.kernel_residual < 1e-12 && v.span_residual < 1e-12);
    }
}
