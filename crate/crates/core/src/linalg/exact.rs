use num::bigint::BigInt;
use num::integer::Integer;
use num::traits::{One, Signed, Zero};

use super::{Rational, RationalMatrix};

/// Outcome of an exact linear solve.
#[derive(Clone, Debug, PartialEq)]
pub enum Solve {
    Solution(Vec<Rational>),
    Inconsistent,
}

/// Clears denominators row by row.
fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter()
                .map(|q| q.numer() * (&lcm / q.denom()))
                .collect()
        })
        .collect()
}

/// Fraction-free (Bareiss) reduction to row echelon form in place.
///
/// Every entry below the current pivot row stays an integer minor of the
/// input, so the division by the previous pivot is exact. Returns the pivot
/// columns; their count is the rank.
fn bareiss(a: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let rows = a.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in bottom.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let v = pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = pivot.clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn echelon(m: &RationalMatrix) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut a = integer_rows(&m.row_vecs());
    let pivots = bareiss(&mut a, m.cols());
    (a, pivots)
}

pub fn rank_exact(m: &RationalMatrix) -> usize {
    echelon(m).1.len()
}

/// Rank of a list of equal-length rational vectors.
pub fn rank_of_rows(rows: &[Vec<Rational>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut a = integer_rows(rows);
    bareiss(&mut a, cols).len()
}

/// Back substitution on an echelon form, with the free variables given.
fn back_substitute(
    a: &[Vec<BigInt>],
    pivots: &[usize],
    cols: usize,
    x: &mut [Rational],
    rhs: Option<usize>,
) {
    for (r, &pc) in pivots.iter().enumerate().rev() {
        let mut acc = match rhs {
            Some(b) => Rational::from_integer(a[r][b].clone()),
            None => Rational::zero(),
        };
        for j in pc + 1..cols {
            if !a[r][j].is_zero() && !x[j].is_zero() {
                acc -= Rational::from_integer(a[r][j].clone()) * &x[j];
            }
        }
        x[pc] = acc / Rational::from_integer(a[r][pc].clone());
    }
}

/// Scales a rational vector to a primitive integer vector with a positive
/// leading entry.
fn primitive(v: Vec<Rational>) -> Vec<Rational> {
    let lcm = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v;
    }
    if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        g = -g;
    }
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &g))
        .collect()
}

/// Basis of the right null space, one vector per free column.
///
/// Vectors are primitive integer vectors; `M v = 0` holds exactly.
pub fn kernel_exact(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let cols = m.cols();
    let (a, pivots) = echelon(m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut x = vec![Rational::zero(); cols];
            x[fc] = Rational::one();
            back_substitute(&a, &pivots, cols, &mut x, None);
            primitive(x)
        })
        .collect()
}

/// Determinant of a square matrix by rational elimination.
pub fn det_exact(m: &RationalMatrix) -> Rational {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    let mut a = m.row_vecs();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let pivot = a[c][c].clone();
        det *= &pivot;
        let (top, rest) = a.split_at_mut(c + 1);
        let prow = &top[c];
        for row in rest.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let factor = &row[c] / &pivot;
            for (x, y) in row[c..].iter_mut().zip(&prow[c..]) {
                *x -= &factor * y;
            }
        }
    }
    det
}

/// One solution of `M x = b`, free variables set to zero.
pub fn solve_exact(m: &RationalMatrix, b: &[Rational]) -> Solve {
    assert_eq!(b.len(), m.rows());
    let cols = m.cols();
    let rows: Vec<Vec<Rational>> = (0..m.rows())
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.push(b[i].clone());
            r
        })
        .collect();
    let mut a = integer_rows(&rows);
    let pivots = bareiss(&mut a, cols + 1);
    if pivots.last() == Some(&cols) {
        return Solve::Inconsistent;
    }
    let mut x = vec![Rational::zero(); cols];
    back_substitute(&a, &pivots, cols, &mut x, Some(cols));
    Solve::Solution(x)
}
