//! Small exact elimination helpers for the guided LP path: rational
//! Gaussian elimination and fraction-free (Bareiss) integer solves.

use crate::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Solves the square integer system `A x = b` fraction-free: returns the
/// numerators and the common denominator (`x_j = num_j / den`, `den != 0`,
/// sign-normalized to `den > 0`); `None` if singular. All divisions are
/// checked exact, so a would-be rounding bug surfaces as `None` instead of
/// a wrong answer.
pub(crate) fn bareiss_solve(a: &[Vec<BigInt>], b: &[BigInt]) -> Option<(Vec<BigInt>, BigInt)> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|r| r.len() == n));
    if n == 0 {
        return Some((Vec::new(), BigInt::from(1)));
    }
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut prev = BigInt::from(1);
    for k in 0..n {
        let pivot_row = (k..n).find(|&r| !m[r][k].is_zero())?;
        m.swap(k, pivot_row);
        for i in (k + 1)..n {
            for j in (k + 1)..=n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                let (q, rem) = num.div_rem(&prev);
                if !rem.is_zero() {
                    return None;
                }
                m[i][j] = q;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    // back substitution: num_i = (rhs_i * det - sum_{j>i} a_ij num_j) / a_ii
    let det = m[n - 1][n - 1].clone();
    if det.is_zero() {
        return None;
    }
    let mut nums = vec![BigInt::zero(); n];
    for i in (0..n).rev() {
        let mut acc = &m[i][n] * &det;
        for j in (i + 1)..n {
            acc -= &m[i][j] * &nums[j];
        }
        let (q, rem) = acc.div_rem(&m[i][i]);
        if !rem.is_zero() {
            return None;
        }
        nums[i] = q;
    }
    if det.is_negative() {
        for v in &mut nums {
            *v = -v.clone();
        }
        Some((nums, -det))
    } else {
        Some((nums, det))
    }
}

/// Solves the square system `A x = b` exactly; `None` if singular.
/// Partial pivoting picks the first nonzero entry (deterministic).
pub(crate) fn solve_square(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|r| r.len() == n));
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot_row);
        let inv = m[col][col].clone().recip();
        for j in col..=n {
            if !m[col][j].is_zero() {
                m[col][j] = &m[col][j] * &inv;
            }
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for j in col..=n {
                if !m[col][j].is_zero() {
                    let delta = &factor * &m[col][j];
                    m[r][j] -= delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut row| row.pop().unwrap()).collect())
}
