//! Cox rings of `P1xP1` and of the Hirzebruch surface `F1` as `Z^2`-graded
//! polynomial rings in four variables.
//!
//! The `T` side carries the ring variables `t0, t1, u0, u1`; the `S` side
//! carries the dual variables `x0, x1, y0, y1` on which `T` acts by plain
//! differentiation (`ti = d/dxi`, `ui = d/dyi`). Exponent vectors are always
//! ordered `(t0, t1, u0, u1)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Complex, Rational, Scalar};

pub type Exponent = [u32; 4];

/// Descriptor of the Cox ring: which surface, hence which variable weights.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Surface {
    /// `t0, t1 -> (1,0)`, `u0, u1 -> (0,1)`.
    #[serde(rename = "p1xp1")]
    P1xP1,
    /// `t0 -> E = (1,0)`, `t1 -> E+F = (1,1)`, `u0, u1 -> F = (0,1)`.
    #[serde(rename = "f1")]
    F1,
}

/// A degree class: a bidegree on `P1xP1`, the class `aE + bF` on `F1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Degree(pub i64, pub i64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    T,
    S,
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, o: Degree) -> Degree {
        Degree(self.0 + o.0, self.1 + o.1)
    }
}

impl Sub for Degree {
    type Output = Degree;
    fn sub(self, o: Degree) -> Degree {
        Degree(self.0 - o.0, self.1 - o.1)
    }
}

impl FromStr for Degree {
    type Err = Error;

    /// Parses `"a,b"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(Error::Invalid(format!("degree must be written a,b: {s:?}")));
        }
        let parse = |p: &str| {
            p.parse::<i64>()
                .map_err(|e| Error::Invalid(format!("bad degree entry {p:?}: {e}")))
        };
        Ok(Degree(parse(parts[0])?, parse(parts[1])?))
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Surface::P1xP1 => write!(f, "p1xp1"),
            Surface::F1 => write!(f, "f1"),
        }
    }
}

impl FromStr for Surface {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "p1xp1" => Ok(Surface::P1xP1),
            "f1" => Ok(Surface::F1),
            _ => Err(Error::Invalid(format!("unknown surface {s:?}"))),
        }
    }
}

impl Surface {
    pub fn weights(self) -> [(i64, i64); 4] {
        match self {
            Surface::P1xP1 => [(1, 0), (1, 0), (0, 1), (0, 1)],
            Surface::F1 => [(1, 0), (1, 1), (0, 1), (0, 1)],
        }
    }

    pub fn variable_names(self, side: Side) -> [&'static str; 4] {
        match side {
            Side::T => ["t0", "t1", "u0", "u1"],
            Side::S => ["x0", "x1", "y0", "y1"],
        }
    }

    pub fn degree_of(self, e: &Exponent) -> Degree {
        let w = self.weights();
        let mut d = Degree(0, 0);
        for (k, &ek) in e.iter().enumerate() {
            d.0 += w[k].0 * ek as i64;
            d.1 += w[k].1 * ek as i64;
        }
        d
    }

    /// Monomials of a degree, lexicographically descending on exponents.
    /// Non-effective degrees give the empty list.
    pub fn monomials(self, deg: Degree) -> Vec<Exponent> {
        let Degree(a, b) = deg;
        let mut out = Vec::new();
        if a < 0 || b < 0 {
            return out;
        }
        let (a, b) = (a as u32, b as u32);
        match self {
            Surface::P1xP1 => {
                for i in 0..=a {
                    for j in 0..=b {
                        out.push([a - i, i, b - j, j]);
                    }
                }
            }
            Surface::F1 => {
                for j in 0..=a.min(b) {
                    let rest = b - j;
                    for k in 0..=rest {
                        out.push([a - j, j, rest - k, k]);
                    }
                }
            }
        }
        out.sort_by(|x, y| y.cmp(x));
        out
    }

    /// Dimension of the graded piece, from closed forms.
    pub fn dim(self, deg: Degree) -> usize {
        let Degree(a, b) = deg;
        if a < 0 || b < 0 {
            return 0;
        }
        match self {
            Surface::P1xP1 => ((a + 1) * (b + 1)) as usize,
            Surface::F1 => (0..=a.min(b)).map(|j| (b - j + 1) as usize).sum(),
        }
    }

    pub fn is_effective(self, deg: Degree) -> bool {
        self.dim(deg) > 0
    }

    pub fn in_irrelevant_locus<K: Scalar>(self, p: &[K; 4]) -> bool {
        (p[0].is_zero() && p[1].is_zero()) || (p[2].is_zero() && p[3].is_zero())
    }

    /// Acts by the torus element `(lambda, mu)` on Cox coordinates.
    pub fn rescale<K: Scalar>(self, p: &[K; 4], lambda: &K, mu: &K) -> [K; 4] {
        let l = lambda.clone();
        let m = mu.clone();
        match self {
            Surface::P1xP1 => [
                p[0].clone() * l.clone(),
                p[1].clone() * l,
                p[2].clone() * m.clone(),
                p[3].clone() * m,
            ],
            Surface::F1 => [
                p[0].clone() * l.clone(),
                p[1].clone() * l * m.clone(),
                p[2].clone() * m.clone(),
                p[3].clone() * m,
            ],
        }
    }

    /// Degree of a very ample class: `(1,1)` on `P1xP1`, `E+2F` on `F1`.
    pub fn ample(self) -> Degree {
        match self {
            Surface::P1xP1 => Degree(1, 1),
            Surface::F1 => Degree(1, 2),
        }
    }

    /// Distance of two surface points, measured on their images under the
    /// very ample embedding; independent of Cox representatives.
    pub fn point_distance<K: Scalar>(self, p: &[K; 4], q: &[K; 4]) -> f64 {
        let mons = self.monomials(self.ample());
        let pc: [Complex; 4] = std::array::from_fn(|k| p[k].to_complex());
        let qc: [Complex; 4] = std::array::from_fn(|k| q[k].to_complex());
        let a: Vec<Complex> = mons.iter().map(|e| eval_monomial(e, &pc)).collect();
        let b: Vec<Complex> = mons.iter().map(|e| eval_monomial(e, &qc)).collect();
        crate::linalg::projective_distance(&a, &b)
    }

    /// Canonical torus representative: the pivot of the `u` block and then
    /// of the `t` block are scaled to one.
    pub fn normalize_point<K: Scalar>(self, p: &[K; 4]) -> [K; 4] {
        let one = K::one();
        let q = match K::pivot_index(&p[2..4]) {
            Some(i) => {
                let mu = one.clone() / p[2 + i].clone();
                self.rescale(p, &one, &mu)
            }
            None => p.clone(),
        };
        match K::pivot_index(&q[0..2]) {
            Some(i) => {
                let lambda = one.clone() / q[i].clone();
                // For F1, t1 has weight (1,1); rescaling by lambda alone
                // keeps the u block fixed.
                self.rescale(&q, &lambda, &one)
            }
            None => q,
        }
    }
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `e0! e1! e2! e3!`, the pairing of a monomial with its dual.
pub fn exp_factorial(e: &Exponent) -> BigInt {
    e.iter().fold(BigInt::one(), |acc, &k| acc * factorial(k))
}

pub fn exp_add(a: &Exponent, b: &Exponent) -> Exponent {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

pub fn exp_sub(a: &Exponent, b: &Exponent) -> Option<Exponent> {
    let mut out = [0; 4];
    for k in 0..4 {
        out[k] = a[k].checked_sub(b[k])?;
    }
    Some(out)
}

/// `p^e` for a Cox coordinate vector.
pub fn eval_monomial<K: Scalar>(e: &Exponent, p: &[K; 4]) -> K {
    let mut acc = K::one();
    for k in 0..4 {
        for _ in 0..e[k] {
            acc = acc * p[k].clone();
        }
    }
    acc
}

/// Homogeneous element of one graded piece.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiForm<K> {
    surface: Surface,
    side: Side,
    degree: Degree,
    terms: BTreeMap<Exponent, K>,
}

impl<K: Scalar> MultiForm<K> {
    pub fn zero(surface: Surface, side: Side, degree: Degree) -> Self {
        MultiForm {
            surface,
            side,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a form from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed and zero coefficients dropped.
    pub fn from_terms(
        surface: Surface,
        side: Side,
        degree: Degree,
        terms: impl IntoIterator<Item = (Exponent, K)>,
    ) -> Result<Self> {
        let mut out = Self::zero(surface, side, degree);
        for (e, c) in terms {
            if surface.degree_of(&e) != degree {
                return Err(Error::WrongDegree { exp: e, degree });
            }
            out.add_term(e, c);
        }
        Ok(out)
    }

    pub fn monomial(surface: Surface, side: Side, e: Exponent, c: K) -> Self {
        let degree = surface.degree_of(&e);
        let mut out = Self::zero(surface, side, degree);
        out.add_term(e, c);
        out
    }

    /// Coefficients listed in the fixed monomial order of the degree.
    pub fn from_coefficients(surface: Surface, side: Side, degree: Degree, coeffs: &[K]) -> Self {
        let mons = surface.monomials(degree);
        assert_eq!(mons.len(), coeffs.len(), "coefficient count");
        let mut out = Self::zero(surface, side, degree);
        for (e, c) in mons.into_iter().zip(coeffs) {
            out.add_term(e, c.clone());
        }
        out
    }

    /// Inverse of [`MultiForm::values`] for `S`-side forms.
    pub fn from_values(surface: Surface, degree: Degree, values: &[K]) -> Self {
        let mons = surface.monomials(degree);
        assert_eq!(mons.len(), values.len(), "value count");
        let mut out = Self::zero(surface, Side::S, degree);
        for (e, v) in mons.into_iter().zip(values) {
            out.add_term(e, v.clone() / K::from_bigint(&exp_factorial(&e)));
        }
        out
    }

    fn add_term(&mut self, e: Exponent, c: K) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(K::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn degree(&self) -> Degree {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, K> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &Exponent) -> K {
        self.terms.get(e).cloned().unwrap_or_else(K::zero)
    }

    pub fn coefficients(&self) -> Vec<K> {
        self.surface
            .monomials(self.degree)
            .iter()
            .map(|e| self.coeff(e))
            .collect()
    }

    /// Pairing values `m ⌟ self` for every monomial `m` of `T` in the same
    /// degree: `e! * coeff(e)`. These are the coordinates in which
    /// evaluation functionals read `p^e`.
    pub fn values(&self) -> Vec<K> {
        self.surface
            .monomials(self.degree)
            .iter()
            .map(|e| self.coeff(e) * K::from_bigint(&exp_factorial(e)))
            .collect()
    }

    pub fn scale(&self, c: &K) -> Self {
        let mut out = Self::zero(self.surface, self.side, self.degree);
        for (e, v) in &self.terms {
            out.add_term(*e, v.clone() * c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::Invalid(format!(
                "cannot add degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (e, v) in &other.terms {
            out.add_term(*e, v.clone());
        }
        Ok(out)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.surface != other.surface {
            return Err(Error::SurfaceMismatch(self.surface, other.surface));
        }
        if self.side != other.side {
            return Err(Error::SideMismatch {
                expected: self.side,
                found: other.side,
            });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.surface, self.side, self.degree + other.degree);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(exp_add(e1, e2), c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    /// Value at a Cox coordinate vector outside the irrelevant locus.
    pub fn evaluate(&self, p: &[K; 4]) -> Result<K> {
        if self.surface.in_irrelevant_locus(p) {
            return Err(Error::IrrelevantPoint(format!("{p:?}")));
        }
        Ok(self.evaluate_unchecked(p))
    }

    pub(crate) fn evaluate_unchecked(&self, p: &[K; 4]) -> K {
        self.terms
            .iter()
            .fold(K::zero(), |acc, (e, c)| acc + c.clone() * eval_monomial(e, p))
    }

    pub fn to_complex(&self) -> MultiForm<Complex> {
        MultiForm {
            surface: self.surface,
            side: self.side,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.to_complex()))
                .collect(),
        }
    }

    /// Same coefficients read on the other side of the pairing.
    pub fn with_side(&self, side: Side) -> Self {
        MultiForm {
            side,
            ..self.clone()
        }
    }

    pub fn display(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let names = self.surface.variable_names(self.side);
        self.surface
            .monomials(self.degree)
            .iter()
            .filter_map(|e| self.terms.get(e).map(|c| (e, c)))
            .map(|(e, c)| {
                let mono: Vec<String> = (0..4)
                    .filter(|&k| e[k] > 0)
                    .map(|k| {
                        if e[k] == 1 {
                            names[k].to_string()
                        } else {
                            format!("{}^{}", names[k], e[k])
                        }
                    })
                    .collect();
                format!("({c})*{}", if mono.is_empty() { "1".into() } else { mono.join("*") })
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// `g ⌟ f`: `g` in `T_B` acting on `f` in `S_A` by plain differentiation,
/// giving an element of `S_{A-B}`.
pub fn diff_apply<K: Scalar>(g: &MultiForm<K>, f: &MultiForm<K>) -> Result<MultiForm<K>> {
    if g.side != Side::T {
        return Err(Error::SideMismatch {
            expected: Side::T,
            found: g.side,
        });
    }
    if f.side != Side::S {
        return Err(Error::SideMismatch {
            expected: Side::S,
            found: f.side,
        });
    }
    if g.surface != f.surface {
        return Err(Error::SurfaceMismatch(g.surface, f.surface));
    }
    let mut out = MultiForm::zero(f.surface, Side::S, f.degree - g.degree);
    for (eg, cg) in &g.terms {
        for (ef, cf) in &f.terms {
            if let Some(rest) = exp_sub(ef, eg) {
                let falling = exp_factorial(ef) / exp_factorial(&rest);
                out.add_term(rest, cg.clone() * cf.clone() * K::from_bigint(&falling));
            }
        }
    }
    Ok(out)
}

/// Full pairing of `g` in `T_A` with `f` in `S_A`.
pub fn pairing<K: Scalar>(g: &MultiForm<K>, f: &MultiForm<K>) -> Result<K> {
    if g.degree != f.degree {
        return Err(Error::Invalid(format!(
            "pairing needs equal degrees, got {} and {}",
            g.degree, f.degree
        )));
    }
    let r = diff_apply(g, f)?;
    Ok(r.coeff(&[0; 4]))
}

/// Exchanges the two factors of `P1xP1`: `(t, u) -> (u, t)`.
pub fn swap_factors<K: Scalar>(f: &MultiForm<K>) -> Result<MultiForm<K>> {
    if f.surface() != Surface::P1xP1 {
        return Err(Error::Invalid("only P1xP1 has interchangeable factors".into()));
    }
    let d = f.degree();
    MultiForm::from_terms(
        Surface::P1xP1,
        f.side(),
        Degree(d.1, d.0),
        f.terms().iter().map(|(e, c)| ([e[2], e[3], e[0], e[1]], c.clone())),
    )
}

/// `f(M x, N y)` on `P1xP1`: each first-factor variable `v_i` becomes
/// `sum_j m[i][j] v_j`, and likewise with `n` on the second factor.
pub fn linear_change<K: Scalar>(f: &MultiForm<K>, m: &[[K; 2]; 2], n: &[[K; 2]; 2]) -> Result<MultiForm<K>> {
    if f.surface() != Surface::P1xP1 {
        return Err(Error::Invalid("linear changes are only defined on P1xP1".into()));
    }
    let (s, side) = (Surface::P1xP1, f.side());
    let lin = |k: usize| -> MultiForm<K> {
        let (row, off) = if k < 2 { (&m[k], 0) } else { (&n[k - 2], 2) };
        let mut e0 = [0u32; 4];
        e0[off] = 1;
        let mut e1 = [0u32; 4];
        e1[off + 1] = 1;
        MultiForm::monomial(s, side, e0, row[0].clone())
            .add(&MultiForm::monomial(s, side, e1, row[1].clone()))
            .unwrap_or_else(|_| MultiForm::zero(s, side, s.degree_of(&e0)))
    };
    let images: Vec<MultiForm<K>> = (0..4).map(lin).collect();
    let mut out = MultiForm::zero(s, side, f.degree());
    for (e, c) in f.terms() {
        let mut term = MultiForm::monomial(s, side, [0; 4], c.clone());
        for k in 0..4 {
            for _ in 0..e[k] {
                term = term.multiply(&images[k])?;
            }
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

/// Random form with integer coefficients in `[-99, 99]`; the same
/// `(surface, side, degree, seed)` always gives the same form.
pub fn random_form(surface: Surface, side: Side, degree: Degree, seed: u64) -> MultiForm<Rational> {
    let mut rng = crate::rng::rng(seed);
    let coeffs: Vec<Rational> = surface
        .monomials(degree)
        .iter()
        .map(|_| Rational::from_integer(BigInt::from(rng.gen_range(-99i64..=99))))
        .collect();
    MultiForm::from_coefficients(surface, side, degree, &coeffs)
}

/// Random rational point with small nonzero integer coordinates.
pub fn random_rational_point<R: Rng>(rng: &mut R, bound: i64) -> [Rational; 4] {
    std::array::from_fn(|_| Rational::from_integer(BigInt::from(crate::rng::small_int(rng, bound, true))))
}

/// Random complex point, already torus-normalized.
pub fn random_complex_point<R: Rng>(surface: Surface, rng: &mut R) -> [Complex; 4] {
    let p = std::array::from_fn(|_| crate::rng::complex_normal(rng));
    surface.normalize_point(&p)
}
