//! Floating-point two-phase simplex.
//!
//! Used in two places: as the screening evaluator inside the parameter
//! search, and as the basis oracle for the guided exact solver. It follows
//! the same standard-form construction as the exact simplex but pivots by
//! steepest reduced cost with tolerances and an iteration cap; it proves
//! nothing by itself.

use super::{LinearProgram, Oriented};
use crate::rational::to_f64;

const EPS: f64 = 1e-9;
const PIVOT_EPS: f64 = 1e-11;

#[derive(Clone, Debug)]
pub enum FloatOutcome {
    Optimal {
        value: f64,
        witness: Vec<f64>,
        /// per-constraint multipliers in the `<=` orientation
        duals: Vec<f64>,
    },
    Infeasible {
        duals: Vec<f64>,
    },
    Unbounded,
    /// iteration cap hit or numerically stuck
    Unknown,
}

/// Solves with plain f64 arithmetic. Witness entries follow the sorted
/// variable order of the program.
pub fn solve_f64(lp: &LinearProgram) -> FloatOutcome {
    match Oriented::build(lp) {
        Ok(or) => solve_oriented(&or),
        Err(_) => FloatOutcome::Unknown,
    }
}

pub(crate) fn solve_oriented(or: &Oriented) -> FloatOutcome {
    let n = or.n();
    let m = or.rows.len();
    let nsplit = 2 * n;
    let nslack = or.rows.iter().filter(|r| !r.eq).count();
    let art_start = nsplit + nslack;
    let ncols = art_start + m;

    let mut rows = vec![vec![0.0f64; ncols]; m];
    let mut rhs = vec![0.0f64; m];
    let mut basis = vec![0usize; m];
    let mut init_col = vec![0usize; m];
    let mut rho = vec![1.0f64; m];
    let mut has_artificials = false;
    let mut slack_cursor = nsplit;

    for (i, row) in or.rows.iter().enumerate() {
        let mut coeffs: Vec<f64> = row.coeffs.iter().map(to_f64).collect();
        let mut b = to_f64(&row.rhs);
        let flip = b < 0.0;
        if flip {
            for c in &mut coeffs {
                *c = -*c;
            }
            b = -b;
            rho[i] = -1.0;
        }
        for (slot, &c) in coeffs.iter().enumerate() {
            rows[i][2 * slot] = c;
            rows[i][2 * slot + 1] = -c;
        }
        let slack_col = if row.eq {
            None
        } else {
            let col = slack_cursor;
            slack_cursor += 1;
            rows[i][col] = if flip { -1.0 } else { 1.0 };
            Some(col)
        };
        let art_col = art_start + i;
        let start = match slack_col {
            Some(col) if !flip => col,
            _ => {
                rows[i][art_col] = 1.0;
                has_artificials = true;
                art_col
            }
        };
        basis[i] = start;
        init_col[i] = start;
        rhs[i] = b;
    }

    let max_iter = 60 * (m + n + 8);
    let mut obj = vec![0.0f64; ncols];

    let load_objective = |obj: &mut Vec<f64>, cost: &[f64], rows: &Vec<Vec<f64>>, basis: &[usize]| {
        obj.copy_from_slice(cost);
        for (i, &b) in basis.iter().enumerate() {
            if cost[b] != 0.0 {
                let f = cost[b];
                for j in 0..ncols {
                    obj[j] -= f * rows[i][j];
                }
            }
        }
    };

    let mut iterations = 0usize;

    macro_rules! iterate {
        ($limit:expr) => {{
            let mut outcome = Ok(());
            loop {
                if iterations > max_iter {
                    return FloatOutcome::Unknown;
                }
                iterations += 1;
                let mut entering = None;
                let mut best = -EPS;
                for j in 0..$limit {
                    if obj[j] < best {
                        best = obj[j];
                        entering = Some(j);
                    }
                }
                let Some(k) = entering else { break };
                let mut leave: Option<(usize, f64)> = None;
                for r in 0..m {
                    if rows[r][k] > PIVOT_EPS {
                        let ratio = rhs[r] / rows[r][k];
                        let better = match leave {
                            None => true,
                            Some((br, bv)) => {
                                ratio < bv - PIVOT_EPS
                                    || ((ratio - bv).abs() <= PIVOT_EPS && basis[r] < basis[br])
                            }
                        };
                        if better {
                            leave = Some((r, ratio));
                        }
                    }
                }
                let Some((r, _)) = leave else {
                    outcome = Err(k);
                    break;
                };
                // pivot
                let pivot = rows[r][k];
                for j in 0..ncols {
                    rows[r][j] /= pivot;
                }
                rhs[r] /= pivot;
                for i in 0..m {
                    if i != r && rows[i][k] != 0.0 {
                        let f = rows[i][k];
                        for j in 0..ncols {
                            rows[i][j] -= f * rows[r][j];
                        }
                        rhs[i] -= f * rhs[r];
                        rows[i][k] = 0.0;
                        // roundoff drift only; real negativity cannot occur
                        if rhs[i] < 0.0 && rhs[i] > -1e-9 {
                            rhs[i] = 0.0;
                        }
                    }
                }
                if obj[k] != 0.0 {
                    let f = obj[k];
                    for j in 0..ncols {
                        obj[j] -= f * rows[r][j];
                    }
                    obj[k] = 0.0;
                }
                basis[r] = k;
            }
            outcome
        }};
    }

    if has_artificials {
        let mut phase1 = vec![0.0f64; ncols];
        for &c in &init_col {
            if c >= art_start {
                phase1[c] = 1.0;
            }
        }
        load_objective(&mut obj, &phase1, &rows, &basis);
        if iterate!(ncols).is_err() {
            return FloatOutcome::Unknown;
        }
        let mut infeas = 0.0;
        for (i, &b) in basis.iter().enumerate() {
            if b >= art_start && phase1[b] != 0.0 {
                infeas += rhs[i];
            }
        }
        if infeas > 1e-7 {
            let duals: Vec<f64> = init_col
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    let pi = phase1[c] - obj[c];
                    -rho[i] * pi
                })
                .collect();
            return FloatOutcome::Infeasible { duals };
        }
        // drive out basic artificials where possible
        for r in 0..m {
            if basis[r] >= art_start {
                if let Some(k) = (0..art_start).find(|&j| rows[r][j].abs() > 1e-9) {
                    let pivot = rows[r][k];
                    for j in 0..ncols {
                        rows[r][j] /= pivot;
                    }
                    rhs[r] /= pivot;
                    for i in 0..m {
                        if i != r && rows[i][k] != 0.0 {
                            let f = rows[i][k];
                            for j in 0..ncols {
                                rows[i][j] -= f * rows[r][j];
                            }
                            rhs[i] -= f * rhs[r];
                            rows[i][k] = 0.0;
                        }
                    }
                    basis[r] = k;
                }
            }
        }
    }

    let mut phase2 = vec![0.0f64; ncols];
    for (slot, c) in or.objective.iter().enumerate() {
        let cf = to_f64(c);
        phase2[2 * slot] = -cf;
        phase2[2 * slot + 1] = cf;
    }
    load_objective(&mut obj, &phase2, &rows, &basis);
    match iterate!(art_start) {
        Err(_) => FloatOutcome::Unbounded,
        Ok(()) => {
            let mut col_value = vec![0.0f64; ncols];
            for (i, &b) in basis.iter().enumerate() {
                col_value[b] = rhs[i];
            }
            let witness: Vec<f64> = (0..n)
                .map(|slot| col_value[2 * slot] - col_value[2 * slot + 1])
                .collect();
            let mut max_value = to_f64(&or.obj_constant);
            for (slot, c) in or.objective.iter().enumerate() {
                max_value += to_f64(c) * witness[slot];
            }
            let duals: Vec<f64> = init_col
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    let pi = -obj[c];
                    -rho[i] * pi
                })
                .collect();
            let value = if or.minimize { -max_value } else { max_value };
            FloatOutcome::Optimal {
                value,
                witness,
                duals,
            }
        }
    }
}
