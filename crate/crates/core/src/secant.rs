//! Generic ranks and VPS dimensions, checked against Terracini's lemma.

use serde::Serialize;

use crate::linalg::{rank_exact, Rational, RationalMatrix};
use crate::multigraded::{eval_monomial, random_rational_point, Degree, Surface};
use crate::rng;

fn is_two_even(a: i64, b: i64) -> bool {
    a == 2 && b >= 2 && b % 2 == 0
}

/// Generic rank of forms of bidegree `(a,b)` on `P1xP1`.
pub fn rank_formula(a: i64, b: i64) -> usize {
    assert!(a >= 1 && b >= 1, "bidegree entries must be positive");
    if is_two_even(a, b) {
        (b + 2) as usize
    } else if is_two_even(b, a) {
        (a + 2) as usize
    } else {
        ((a + 1) * (b + 1)).div_euclid(3) as usize + usize::from((a + 1) * (b + 1) % 3 != 0)
    }
}

/// Dimension of `VPS([f], r)` at the generic rank `r`.
pub fn vps_dimension(a: i64, b: i64) -> i64 {
    if is_two_even(a, b) || is_two_even(b, a) {
        3
    } else {
        3 * rank_formula(a, b) as i64 - (a + 1) * (b + 1)
    }
}

pub fn vps_dimension_from_rank(r: usize, a: i64, b: i64) -> i64 {
    3 * r as i64 - 1 - (a * b + a + b)
}

const POINT_BOUND: i64 = 40;

/// Rows `d/dp_c (p^m)_m` for one point, `c = 0..4`.
pub fn tangent_rows(surface: Surface, deg: Degree, p: &[Rational; 4]) -> Vec<Vec<Rational>> {
    let mons = surface.monomials(deg);
    (0..4)
        .map(|c| {
            mons.iter()
                .map(|m| {
                    if m[c] == 0 {
                        Rational::from_integer(0.into())
                    } else {
                        let mut e = *m;
                        e[c] -= 1;
                        Rational::from_integer(m[c].into()) * eval_monomial(&e, p)
                    }
                })
                .collect()
        })
        .collect()
}

fn terracini_points(seed: u64, k: usize) -> Vec<[Rational; 4]> {
    let mut g = rng::rng(seed);
    (0..k).map(|_| random_rational_point(&mut g, POINT_BOUND)).collect()
}

/// Exact rank of the stacked tangent rows at `k` random integer points,
/// the affine dimension of the `k`-th secant cone. The points for `k` are a
/// prefix of those for `k + 1`.
pub fn terracini_dimension(surface: Surface, deg: Degree, k: usize, seed: u64) -> usize {
    let n = surface.dim(deg);
    let rows: Vec<Vec<Rational>> = terracini_points(seed, k)
        .iter()
        .flat_map(|p| tangent_rows(surface, deg, p))
        .collect();
    rank_exact(&RationalMatrix::from_rows(n, rows))
}

#[derive(Clone, Debug, Serialize)]
pub struct TerraciniEntry {
    pub k: usize,
    pub dim: usize,
    pub expected: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RankCertificate {
    pub surface: Surface,
    pub degree: Degree,
    pub ambient_dim: usize,
    /// Only available on `P1xP1`.
    pub formula_rank: Option<usize>,
    pub terracini_dims: Vec<TerraciniEntry>,
    pub verified_rank: Option<usize>,
    pub defective_ks: Vec<usize>,
    pub vps_dimension: Option<i64>,
    pub vps_dimension_from_rank: Option<i64>,
}

impl RankCertificate {
    /// Formula and Terracini agree (always true where there is no formula
    /// but a full secant was reached).
    pub fn agrees(&self) -> bool {
        match (self.formula_rank, self.verified_rank) {
            (Some(f), Some(v)) => f == v && self.vps_dimension == self.vps_dimension_from_rank,
            (None, Some(_)) => true,
            _ => false,
        }
    }

    pub fn dim_at(&self, k: usize) -> Option<usize> {
        self.terracini_dims.iter().find(|e| e.k == k).map(|e| e.dim)
    }
}

/// Terracini dimensions for `k = 1, 2, ...` (maximum over seeds) until the
/// secant fills the ambient space, and at least up to the formula rank + 1.
pub fn certify_rank(surface: Surface, deg: Degree, seeds: &[u64]) -> RankCertificate {
    assert!(!seeds.is_empty(), "need at least one seed");
    let n = surface.dim(deg);
    let formula_rank = match surface {
        Surface::P1xP1 if deg.0 >= 1 && deg.1 >= 1 => Some(rank_formula(deg.0, deg.1)),
        _ => None,
    };
    let min_k = formula_rank.map_or(1, |r| r + 1);
    let mut terracini_dims = Vec::new();
    let mut verified_rank = None;
    let mut k = 1;
    while k <= n.max(1) {
        let dim = seeds
            .iter()
            .map(|&s| terracini_dimension(surface, deg, k, s))
            .max()
            .unwrap_or(0);
        let expected = (3 * k).min(n);
        terracini_dims.push(TerraciniEntry { k, dim, expected });
        if dim == n && verified_rank.is_none() {
            verified_rank = Some(k);
        }
        if verified_rank.is_some() && k >= min_k {
            break;
        }
        k += 1;
    }
    let defective_ks = terracini_dims
        .iter()
        .filter(|e| e.dim < e.expected)
        .map(|e| e.k)
        .collect();
    let (vps, vps_r) = match (surface, formula_rank) {
        (Surface::P1xP1, Some(r)) => (
            Some(vps_dimension(deg.0, deg.1)),
            Some(vps_dimension_from_rank(r, deg.0, deg.1)),
        ),
        _ => (None, None),
    };
    RankCertificate {
        surface,
        degree: deg,
        ambient_dim: n,
        formula_rank,
        terracini_dims,
        verified_rank,
        defective_ks,
        vps_dimension: vps,
        vps_dimension_from_rank: vps_r,
    }
}
