//! Exact two-phase tableau simplex with Bland's rule.
//!
//! Free variables are split into nonnegative pairs, rows are cleared to
//! integer coefficients (a positive rescaling, so statuses, values and
//! multipliers are mapped back exactly), and rows oriented `<= rhs` with
//! `rhs >= 0` start from their slack; everything else starts from an
//! artificial. Bland's rule (entering: lowest eligible column; leaving:
//! lowest basic column among ratio ties) guarantees termination.

use super::{LpCertificate, LpResult, LpStatus, Oriented};
use crate::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

pub(crate) fn solve(oriented: &Oriented) -> LpResult {
    Tableau::new(oriented).run(oriented)
}

struct Tableau {
    ncols: usize,
    art_start: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// reduced costs of the current phase's min objective
    obj: Vec<Rational>,
    /// column that held row i's initial identity (slack or artificial)
    init_col: Vec<usize>,
    /// +1 if row i kept its orientation, -1 if it was negated for rhs >= 0
    rho: Vec<i8>,
    /// positive integerizing scale applied to row i
    row_scale: Vec<Rational>,
    /// positive integerizing scale applied to the objective
    obj_scale: Rational,
    /// phase-2 min objective over all columns (scaled)
    phase2_cost: Vec<Rational>,
    has_artificials: bool,
}

fn lcm_of_denominators(values: impl Iterator<Item = BigInt>) -> BigInt {
    let mut acc = BigInt::one();
    for d in values {
        acc = acc.lcm(&d);
    }
    acc
}

impl Tableau {
    fn new(or: &Oriented) -> Tableau {
        let n = or.n();
        let m = or.rows.len();
        let nsplit = 2 * n;
        let nslack = or.rows.iter().filter(|r| !r.eq).count();
        let art_start = nsplit + nslack;
        let ncols = art_start + m;

        let obj_scale_int =
            lcm_of_denominators(or.objective.iter().map(|c| c.denom().clone()));
        let obj_scale = Rational::from_integer(obj_scale_int);
        let mut phase2_cost = vec![Rational::zero(); ncols];
        for (slot, c) in or.objective.iter().enumerate() {
            // internal problem is min(-c . x) on split columns
            let scaled = c * &obj_scale;
            phase2_cost[2 * slot] = -scaled.clone();
            phase2_cost[2 * slot + 1] = scaled;
        }

        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut init_col = Vec::with_capacity(m);
        let mut rho = Vec::with_capacity(m);
        let mut row_scale = Vec::with_capacity(m);
        let mut slack_cursor = nsplit;
        let mut has_artificials = false;

        for (i, row) in or.rows.iter().enumerate() {
            let scale_int = lcm_of_denominators(
                row.coeffs
                    .iter()
                    .map(|c| c.denom().clone())
                    .chain(std::iter::once(row.rhs.denom().clone())),
            );
            let scale = Rational::from_integer(scale_int);
            let mut coeffs: Vec<Rational> = row.coeffs.iter().map(|c| c * &scale).collect();
            let mut b = &row.rhs * &scale;
            let flip = b.is_negative();
            if flip {
                for c in &mut coeffs {
                    *c = -c.clone();
                }
                b = -b;
            }
            let mut trow = vec![Rational::zero(); ncols];
            for (slot, c) in coeffs.iter().enumerate() {
                if !c.is_zero() {
                    trow[2 * slot] = c.clone();
                    trow[2 * slot + 1] = -c.clone();
                }
            }
            let slack_col = if row.eq {
                None
            } else {
                let col = slack_cursor;
                slack_cursor += 1;
                trow[col] = if flip {
                    -Rational::one()
                } else {
                    Rational::one()
                };
                Some(col)
            };
            let art_col = art_start + i;
            let start_col = match slack_col {
                Some(col) if !flip => col,
                _ => {
                    trow[art_col] = Rational::one();
                    has_artificials = true;
                    art_col
                }
            };
            rows.push(trow);
            rhs.push(b);
            basis.push(start_col);
            init_col.push(start_col);
            rho.push(if flip { -1 } else { 1 });
            row_scale.push(scale);
        }

        Tableau {
            ncols,
            art_start,
            rows,
            rhs,
            basis,
            obj: vec![Rational::zero(); ncols],
            init_col,
            rho,
            row_scale,
            obj_scale,
            phase2_cost,
            has_artificials,
        }
    }

    /// Loads reduced costs for a cost vector: `obj_j = d_j - sum_basic d_B T`.
    fn load_objective(&mut self, cost: &[Rational]) {
        self.obj = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            let factor = cost[b].clone();
            for j in 0..self.ncols {
                if !self.rows[i][j].is_zero() {
                    let delta = &factor * &self.rows[i][j];
                    self.obj[j] -= delta;
                }
            }
        }
    }

    /// Current objective value of the phase's min problem.
    fn objective_value(&self, cost: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            if !cost[b].is_zero() {
                acc += &cost[b] * &self.rhs[i];
            }
        }
        acc
    }

    fn pivot(&mut self, r: usize, k: usize) {
        let pivot = self.rows[r][k].clone();
        if !pivot.is_one() {
            let inv = pivot.recip();
            for j in 0..self.ncols {
                if !self.rows[r][j].is_zero() {
                    self.rows[r][j] = &self.rows[r][j] * &inv;
                }
            }
            self.rhs[r] = &self.rhs[r] * &inv;
        }
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][k].is_zero() {
                continue;
            }
            let factor = self.rows[i][k].clone();
            for j in 0..self.ncols {
                if !self.rows[r][j].is_zero() {
                    let delta = &factor * &self.rows[r][j];
                    self.rows[i][j] -= delta;
                }
            }
            let delta = &factor * &self.rhs[r];
            self.rhs[i] -= delta;
            self.rows[i][k] = Rational::zero();
        }
        if !self.obj[k].is_zero() {
            let factor = self.obj[k].clone();
            for j in 0..self.ncols {
                if !self.rows[r][j].is_zero() {
                    let delta = &factor * &self.rows[r][j];
                    self.obj[j] -= delta;
                }
            }
            self.obj[k] = Rational::zero();
        }
        self.basis[r] = k;
    }

    /// Bland iteration until optimal (Ok) or unbounded (Err = entering col).
    fn iterate(&mut self, allow_artificials: bool) -> Result<(), usize> {
        loop {
            let limit = if allow_artificials {
                self.ncols
            } else {
                self.art_start
            };
            let entering = (0..limit).find(|&j| self.obj[j].is_negative());
            let Some(k) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                if !self.rows[r][k].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / &self.rows[r][k];
                let better = match &leave {
                    None => true,
                    Some((br, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return Err(k);
            };
            self.pivot(r, k);
        }
    }

    /// Pivots remaining basic artificials out (or leaves them on all-zero
    /// rows, which stay inert).
    fn drive_out_artificials(&mut self) {
        for r in 0..self.rows.len() {
            if self.basis[r] < self.art_start {
                continue;
            }
            debug_assert!(self.rhs[r].is_zero());
            if let Some(k) = (0..self.art_start).find(|&j| !self.rows[r][j].is_zero()) {
                self.pivot(r, k);
            }
        }
    }

    /// Row multipliers of the current phase: `pi_i = d(init_i) - obj(init_i)`.
    fn row_multipliers(&self, cost: &[Rational]) -> Vec<Rational> {
        self.init_col
            .iter()
            .map(|&c| &cost[c] - &self.obj[c])
            .collect()
    }

    fn run(mut self, or: &Oriented) -> LpResult {
        if self.has_artificials {
            let mut phase1 = vec![Rational::zero(); self.ncols];
            for j in self.art_start..self.ncols {
                // only rows that actually start from their artificial use it
                if self.init_col.contains(&j) {
                    phase1[j] = Rational::one();
                }
            }
            self.load_objective(&phase1);
            self.iterate(true).expect("phase 1 is bounded below by zero");
            if self.objective_value(&phase1).is_positive() {
                let pi = self.row_multipliers(&phase1);
                let multipliers = self.to_constraint_multipliers(&pi, &Rational::one());
                return LpResult {
                    status: LpStatus::Infeasible,
                    value: None,
                    witness: None,
                    certificate: Some(LpCertificate::Infeasibility { multipliers }),
                };
            }
            self.drive_out_artificials();
        }
        let phase2 = self.phase2_cost.clone();
        self.load_objective(&phase2);
        match self.iterate(false) {
            Err(_) => LpResult {
                status: LpStatus::Unbounded,
                value: None,
                witness: None,
                certificate: None,
            },
            Ok(()) => {
                let witness = self.extract_witness(or);
                let max_value = evaluate_objective(or, &witness);
                let value = if or.minimize { -max_value } else { max_value };
                let pi = self.row_multipliers(&phase2);
                let multipliers = self.to_constraint_multipliers(&pi, &self.obj_scale.clone());
                LpResult {
                    status: LpStatus::Optimal,
                    value: Some(value),
                    witness: Some(witness),
                    certificate: Some(LpCertificate::Optimality { multipliers }),
                }
            }
        }
    }

    /// Maps tableau row multipliers back to per-constraint multipliers in
    /// the documented `<=` orientation: `mult_i = scale_i * (-rho_i pi_i) / obj_scale`.
    fn to_constraint_multipliers(&self, pi: &[Rational], obj_scale: &Rational) -> Vec<Rational> {
        pi.iter()
            .enumerate()
            .map(|(i, p)| {
                let mut m = -(p.clone());
                if self.rho[i] < 0 {
                    m = -m;
                }
                m * &self.row_scale[i] / obj_scale
            })
            .collect()
    }

    fn extract_witness(&self, or: &Oriented) -> BTreeMap<usize, Rational> {
        let mut col_value = vec![Rational::zero(); self.ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            col_value[b] = self.rhs[i].clone();
        }
        or.vars
            .iter()
            .enumerate()
            .map(|(slot, var)| {
                let v = &col_value[2 * slot] - &col_value[2 * slot + 1];
                (*var, v)
            })
            .collect()
    }
}

fn evaluate_objective(or: &Oriented, witness: &BTreeMap<usize, Rational>) -> Rational {
    // max-oriented objective value; caller maps back to the original sense
    let mut acc = or.obj_constant.clone();
    for (slot, var) in or.vars.iter().enumerate() {
        if !or.objective[slot].is_zero() {
            acc += &or.objective[slot] * &witness[var];
        }
    }
    acc
}
