//! Exact linear algebra on small dense matrices.
//!
//! Elimination is fraction-free (Bareiss): rows are cleared of denominators
//! once, then every intermediate entry stays an integer minor of the input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

/// Row echelon form of an integer matrix plus its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

/// Bareiss elimination to row echelon form.
pub fn echelon(mut a: Vec<Vec<BigInt>>) -> Echelon {
    let m = a.len();
    let k = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..k {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..m {
            for j in c + 1..k {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                debug_assert!((&v % &prev).is_zero());
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    Echelon { rows: a, pivots }
}

/// Clears denominators row by row; the row space is unchanged.
pub fn integer_rows(a: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    a.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
        })
        .collect()
}

pub fn rank(a: &[Vec<BigInt>]) -> usize {
    echelon(a.to_vec()).pivots.len()
}

/// Back-substitution on an echelon form with the free variables given.
fn back_substitute(e: &Echelon, ncols: usize, mut x: Vec<Rational>) -> Vec<Rational> {
    for (r, &c) in e.pivots.iter().enumerate().rev() {
        let mut s = Rational::zero();
        for j in c + 1..ncols {
            if !e.rows[r][j].is_zero() {
                s += Rational::from_integer(e.rows[r][j].clone()) * &x[j];
            }
        }
        x[c] = -s / Rational::from_integer(e.rows[r][c].clone());
    }
    x
}

/// Unique solution of `a·x = b`, or `None` if the system is inconsistent
/// or underdetermined.
pub fn solve_unique(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let k = a.first().map_or(0, Vec::len);
    let aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(-bi.clone());
            r
        })
        .collect();
    let e = echelon(integer_rows(&aug));
    if e.pivots.contains(&k) || e.pivots.len() != k {
        return None;
    }
    // augmented column carries -b, so fix it as a "free" variable equal to 1
    let mut x = vec![Rational::zero(); k + 1];
    x[k] = Rational::one();
    let mut sol = back_substitute(&e, k + 1, x);
    sol.truncate(k);
    Some(sol)
}

/// A nonzero vector in the kernel of `a` (columns are the unknowns), if any.
/// The first free column is set to one.
pub fn kernel_vector(a: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let k = a.first().map_or(0, Vec::len);
    let e = echelon(integer_rows(a));
    let free = (0..k).find(|c| !e.pivots.contains(c))?;
    let mut x = vec![Rational::zero(); k];
    x[free] = Rational::one();
    let x = back_substitute(&e, k, x);
    debug_assert!(x.iter().any(|v| !v.is_zero()));
    Some(x)
}

/// `a·x` for a dense rational matrix.
pub fn mat_vec(a: &[Vec<Rational>], x: &[Rational]) -> Vec<Rational> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum())
        .collect()
}

/// Absolute value of an integer determinant, used in tests.
pub fn abs_det(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    let e = echelon(a.to_vec());
    if e.pivots.len() < n {
        return BigInt::zero();
    }
    e.rows[n - 1][n - 1].abs()
}
