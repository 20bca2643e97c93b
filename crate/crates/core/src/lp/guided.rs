//! Exact reconstruction of LP results from floating-point hints.
//!
//! The float solve only proposes which constraints matter. For an optimal
//! hint, the witness and multipliers are rebuilt over the integer-scaled
//! rows by fraction-free elimination and every claim is re-checked in
//! integer arithmetic: support rows hold with equality, all rows hold as
//! inequalities, multipliers have the right signs and satisfy stationarity
//! by construction, and strong duality then follows algebraically
//! (`c.x* = lambda.A_S x* = lambda.b_S`). For an infeasible hint, the
//! dual's support rows form a small subsystem that the exact simplex
//! refutes outright, yielding a Farkas combination that is valid for the
//! full system with zeros elsewhere. Any mismatch returns `None` and the
//! caller falls back to the exact simplex on the full program, so nothing
//! unproven ever leaves this path.

use super::float::{self, FloatOutcome};
use super::linalg::bareiss_solve;
use super::simplex;
use super::{LinearProgram, LpCertificate, LpResult, LpStatus, Oriented, Sense};
use crate::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

const DUAL_TOL: f64 = 1e-7;
const TIGHT_TOL: f64 = 1e-7;

pub(crate) fn try_exactify(lp: &LinearProgram, or: &Oriented) -> Option<LpResult> {
    if or.n() == 0 {
        return None;
    }
    match float::solve_oriented(or) {
        FloatOutcome::Optimal { witness, duals, .. } => exactify_optimal(lp, or, &witness, &duals),
        FloatOutcome::Infeasible { duals } => exactify_infeasible(or, &duals),
        _ => None,
    }
}

/// One oriented row cleared to integers: `coeffs . x (<=|=) rhs` times the
/// positive `scale`.
struct IntRow {
    coeffs: Vec<BigInt>,
    rhs: BigInt,
    scale: BigInt,
}

fn integerize_row(coeffs: &[Rational], rhs: &Rational) -> IntRow {
    let mut scale = rhs.denom().clone();
    for c in coeffs {
        scale = scale.lcm(c.denom());
    }
    IntRow {
        coeffs: coeffs
            .iter()
            .map(|c| c.numer() * (&scale / c.denom()))
            .collect(),
        rhs: rhs.numer() * (&scale / rhs.denom()),
        scale,
    }
}

fn exactify_optimal(
    lp: &LinearProgram,
    or: &Oriented,
    witness_hint: &[f64],
    duals: &[f64],
) -> Option<LpResult> {
    let n = or.n();
    // active set: equalities and inequality rows with clearly positive duals
    let mut support: Vec<usize> = Vec::new();
    for (i, row) in or.rows.iter().enumerate() {
        if row.eq || duals[i] > DUAL_TOL {
            support.push(i);
        }
    }
    if support.len() > n {
        // keep equalities, then the largest duals, deterministically
        let mut ranked = support;
        ranked.sort_by(|&a, &b| {
            let ka = (!or.rows[a].eq, -duals[a]);
            let kb = (!or.rows[b].eq, -duals[b]);
            ka.partial_cmp(&kb).unwrap().then(a.cmp(&b))
        });
        ranked.truncate(n);
        ranked.sort_unstable();
        support = ranked;
    }
    if support.len() < n {
        // pad with rows tight at the float witness
        for (i, row) in or.rows.iter().enumerate() {
            if support.len() == n {
                break;
            }
            if support.contains(&i) {
                continue;
            }
            let mut lhs = 0.0;
            for (slot, c) in row.coeffs.iter().enumerate() {
                lhs += crate::rational::to_f64(c) * witness_hint[slot];
            }
            let scale = 1.0 + crate::rational::to_f64(&row.rhs).abs();
            if (lhs - crate::rational::to_f64(&row.rhs)).abs() <= TIGHT_TOL * scale {
                support.push(i);
            }
        }
        support.sort_unstable();
        if support.len() < n {
            return None;
        }
    }

    let int_rows: Vec<IntRow> = or
        .rows
        .iter()
        .map(|row| integerize_row(&row.coeffs, &row.rhs))
        .collect();

    // witness: solve the support system exactly
    let a_sup: Vec<Vec<BigInt>> = support.iter().map(|&i| int_rows[i].coeffs.clone()).collect();
    let b_sup: Vec<BigInt> = support.iter().map(|&i| int_rows[i].rhs.clone()).collect();
    let (x_num, x_den) = bareiss_solve(&a_sup, &b_sup)?;

    // every row must hold at x*; support rows with equality
    let in_support = {
        let mut flags = vec![false; or.rows.len()];
        for &i in &support {
            flags[i] = true;
        }
        flags
    };
    for (i, row) in int_rows.iter().enumerate() {
        let mut lhs = BigInt::zero();
        for (c, xn) in row.coeffs.iter().zip(&x_num) {
            if !c.is_zero() {
                lhs += c * xn;
            }
        }
        let rhs = &row.rhs * &x_den;
        if or.rows[i].eq || in_support[i] {
            if lhs != rhs {
                return None;
            }
        } else if lhs > rhs {
            return None;
        }
    }

    // multipliers: solve A_S^T lambda = c over the scaled rows
    let obj = integerize_row(&or.objective, &Rational::zero());
    let at: Vec<Vec<BigInt>> = (0..n)
        .map(|slot| support.iter().map(|&i| int_rows[i].coeffs[slot].clone()).collect())
        .collect();
    let (l_num, l_den) = bareiss_solve(&at, &obj.coeffs)?;
    for (pos, &i) in support.iter().enumerate() {
        if !or.rows[i].eq && l_num[pos].is_negative() {
            return None;
        }
    }

    // assemble exact result
    let mut multipliers = vec![Rational::zero(); or.rows.len()];
    for (pos, &i) in support.iter().enumerate() {
        if l_num[pos].is_zero() {
            continue;
        }
        // scaled-row multiplier, mapped back through the row and objective scales
        multipliers[i] = Rational::new(&l_num[pos] * &int_rows[i].scale, &l_den * &obj.scale);
    }
    let mut max_value = or.obj_constant.clone();
    for (slot, c) in or.objective.iter().enumerate() {
        if !c.is_zero() {
            max_value += c * &Rational::new(x_num[slot].clone(), x_den.clone());
        }
    }
    let value = match lp.sense {
        Sense::Maximize => max_value,
        Sense::Minimize => -max_value,
    };
    let witness: BTreeMap<usize, Rational> = or
        .vars
        .iter()
        .enumerate()
        .map(|(slot, var)| (*var, Rational::new(x_num[slot].clone(), x_den.clone())))
        .collect();
    Some(LpResult {
        status: LpStatus::Optimal,
        value: Some(value),
        witness: Some(witness),
        certificate: Some(LpCertificate::Optimality { multipliers }),
    })
}

/// Refutes the system from the float dual's support: first by an exact
/// integer nullspace solve on the (generically minimal) support, then by
/// running the exact simplex on a slightly wider subsystem. Either way the
/// produced Farkas combination, extended by zeros, refutes the full
/// program.
fn exactify_infeasible(or: &Oriented, duals: &[f64]) -> Option<LpResult> {
    let n = or.n();
    let max_dual = duals.iter().cloned().fold(0.0f64, f64::max);
    if max_dual <= 0.0 {
        return None;
    }
    let ranked_by_dual = |threshold: f64, cap: usize| -> Vec<usize> {
        let mut rows: Vec<usize> = (0..or.rows.len())
            .filter(|&i| duals[i] > threshold * max_dual)
            .collect();
        rows.sort_by(|&a, &b| duals[b].partial_cmp(&duals[a]).unwrap().then(a.cmp(&b)));
        rows.truncate(cap);
        rows.sort_unstable();
        rows
    };

    let tight_support = ranked_by_dual(1e-6, n + 3);
    if let Some(result) = farkas_from_nullspace(or, &tight_support) {
        return Some(result);
    }

    // wider subsystem, refuted by the exact simplex
    let wide = ranked_by_dual(1e-9, 2 * n + 4);
    if wide.is_empty() {
        return None;
    }
    let sub = Oriented {
        vars: or.vars.clone(),
        rows: wide.iter().map(|&i| or.rows[i].clone()).collect(),
        objective: vec![Rational::zero(); n],
        obj_constant: Rational::zero(),
        minimize: false,
    };
    let result = simplex::solve(&sub);
    if result.status != LpStatus::Infeasible {
        return None;
    }
    let sub_multipliers = match result.certificate {
        Some(LpCertificate::Infeasibility { multipliers }) => multipliers,
        _ => return None,
    };
    let mut multipliers = vec![Rational::zero(); or.rows.len()];
    for (&i, m) in wide.iter().zip(sub_multipliers) {
        multipliers[i] = m;
    }
    Some(LpResult {
        status: LpStatus::Infeasible,
        value: None,
        witness: None,
        certificate: Some(LpCertificate::Infeasibility { multipliers }),
    })
}

/// Integer-exact Farkas vector supported on `support`: a nonzero
/// `lambda >= 0` with `sum lambda_i row_i = 0` and `sum lambda_i rhs_i < 0`
/// over the scaled rows, checked entry by entry.
fn farkas_from_nullspace(or: &Oriented, support: &[usize]) -> Option<LpResult> {
    let n = or.n();
    let k = support.len();
    if k < 2 || k > n + 3 {
        return None;
    }
    let rows: Vec<IntRow> = support
        .iter()
        .map(|&i| integerize_row(&or.rows[i].coeffs, &or.rows[i].rhs))
        .collect();
    // columns of M are the scaled coefficient vectors of the support rows
    let m: Vec<Vec<BigInt>> = (0..n)
        .map(|slot| rows.iter().map(|r| r.coeffs[slot].clone()).collect())
        .collect();

    // fraction-free echelon to find pivot columns and the rank; `perm`
    // tracks which original rows ended up as pivot rows
    let mut e = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut prev = BigInt::one();
    let mut row_cursor = 0usize;
    for col in 0..k {
        let Some(pr) = (row_cursor..n).find(|&r| !e[r][col].is_zero()) else {
            continue;
        };
        e.swap(row_cursor, pr);
        perm.swap(row_cursor, pr);
        for r in (row_cursor + 1)..n {
            for c in (col + 1)..k {
                let num = &e[r][c] * &e[row_cursor][col] - &e[r][col] * &e[row_cursor][c];
                let (q, rem) = num.div_rem(&prev);
                if !rem.is_zero() {
                    return None;
                }
                e[r][c] = q;
            }
            e[r][col] = BigInt::zero();
        }
        prev = e[row_cursor][col].clone();
        pivot_cols.push(col);
        row_cursor += 1;
        if row_cursor == n {
            break;
        }
    }
    // a one-dimensional nullspace pins the combination up to scale
    if k != pivot_cols.len() + 1 {
        return None;
    }
    let free = (0..k).find(|c| !pivot_cols.contains(c))?;

    // solve the pivot square system for the free column
    let r = pivot_cols.len();
    let square: Vec<Vec<BigInt>> = (0..r)
        .map(|ri| pivot_cols.iter().map(|&c| m[perm[ri]][c].clone()).collect())
        .collect();
    let rhs: Vec<BigInt> = (0..r).map(|ri| -m[perm[ri]][free].clone()).collect();
    let mut lambda = vec![BigInt::zero(); k];
    if r > 0 {
        // use the first r rows; the verification below covers the rest
        let (nums, den) = bareiss_solve(&square, &rhs)?;
        for (pos, &c) in pivot_cols.iter().enumerate() {
            lambda[c] = nums[pos].clone();
        }
        lambda[free] = den;
    } else {
        lambda[free] = BigInt::one();
    }

    // global sign flip is allowed; then every inequality multiplier must be
    // nonnegative
    let combined_rhs = |l: &[BigInt]| -> BigInt {
        l.iter()
            .zip(&rows)
            .map(|(li, row)| li * &row.rhs)
            .sum::<BigInt>()
    };
    let candidates = [lambda.clone(), lambda.iter().map(|v| -v.clone()).collect::<Vec<_>>()];
    'candidate: for cand in candidates {
        for (pos, &i) in support.iter().enumerate() {
            if !or.rows[i].eq && cand[pos].is_negative() {
                continue 'candidate;
            }
        }
        // exact check: the combination annihilates every coefficient slot
        for slot in 0..n {
            let mut acc = BigInt::zero();
            for (pos, row) in rows.iter().enumerate() {
                if !cand[pos].is_zero() && !row.coeffs[slot].is_zero() {
                    acc += &cand[pos] * &row.coeffs[slot];
                }
            }
            if !acc.is_zero() {
                continue 'candidate;
            }
        }
        if !combined_rhs(&cand).is_negative() {
            continue 'candidate;
        }
        let mut multipliers = vec![Rational::zero(); or.rows.len()];
        for (pos, &i) in support.iter().enumerate() {
            if !cand[pos].is_zero() {
                multipliers[i] =
                    Rational::from_integer(cand[pos].clone() * &rows[pos].scale);
            }
        }
        return Some(LpResult {
            status: LpStatus::Infeasible,
            value: None,
            witness: None,
            certificate: Some(LpCertificate::Infeasibility { multipliers }),
        });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::AffineForm;
    use crate::lp::{lp_solve_guided, verify_result, Relation};
    use crate::rational::int;

    #[test]
    fn one_is_one() {
        // a degenerate sanity check of the integerizer
        let row = integerize_row(&[crate::rational::rat(1, 3), int(2)], &crate::rational::rat(5, 6));
        assert_eq!(row.scale, BigInt::from(6));
        assert_eq!(row.coeffs, vec![BigInt::from(2), BigInt::from(12)]);
        assert_eq!(row.rhs, BigInt::from(5));
    }

    #[test]
    fn guided_certificates_survive_generic_verification() {
        let lp = LinearProgram::new(
            vec![1, 2],
            AffineForm::variable(1),
            Sense::Maximize,
            vec![
                (
                    &AffineForm::variable(2) - &AffineForm::variable(1),
                    Relation::GeqZero,
                ),
                (
                    &AffineForm::constant(int(1)) - &AffineForm::variable(2),
                    Relation::GeqZero,
                ),
                (AffineForm::variable(1), Relation::GeqZero),
            ],
        );
        let res = lp_solve_guided(&lp).unwrap();
        assert!(verify_result(&lp, &res).is_ok());
    }
}
