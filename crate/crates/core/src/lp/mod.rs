//! Linear programs over exact rationals, with certificates.
//!
//! [`lp_solve`] is a two-phase primal simplex over `Rational` using Bland's
//! rule, so it terminates on every input and is bit-deterministic. Optimal
//! results carry dual multipliers, infeasible results carry a Farkas
//! combination; both are re-checkable by plain substitution, see
//! [`verify_result`].
//!
//! [`lp_solve_guided`] produces the same statuses and values through a
//! cheaper route: a floating-point solve proposes an active set, the exact
//! witness and multipliers are reconstructed from it by rational elimination
//! and verified; any discrepancy falls back to the exact simplex. Nothing
//! unverified ever leaves this module.
//!
//! Multiplier convention: constraint `i` is reoriented as `g_i . x <= h_i`
//! (a `>= 0` form contributes `g = -A`, `h = k`; a `<= 0` form `g = A`,
//! `h = -k`; equalities analogous with `=`). For a maximization the
//! certificate satisfies `sum_i mult_i * g_i = c` and
//! `value = c0 + sum_i mult_i * h_i`, with `mult_i >= 0` on inequalities;
//! for a minimization the same identities hold with `c`, `c0`, `value`
//! negated. A Farkas certificate satisfies `sum_i mult_i * g_i = 0` and
//! `sum_i mult_i * h_i < 0`.

mod float;
mod guided;
mod linalg;
mod simplex;

pub use float::{solve_f64, FloatOutcome};

use crate::affine::AffineForm;
use crate::rational::Rational;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

/// Relation of an affine form to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// form >= 0
    GeqZero,
    /// form <= 0
    LeqZero,
    /// form == 0
    EqZero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub variables: Vec<usize>,
    pub objective: AffineForm,
    pub sense: Sense,
    pub constraints: Vec<(AffineForm, Relation)>,
}

impl LinearProgram {
    pub fn new(
        variables: Vec<usize>,
        objective: AffineForm,
        sense: Sense,
        constraints: Vec<(AffineForm, Relation)>,
    ) -> Self {
        LinearProgram {
            variables,
            objective,
            sense,
            constraints,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Exact multipliers, one per constraint, in the orientation documented at
/// module level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpCertificate {
    Optimality { multipliers: Vec<Rational> },
    Infeasibility { multipliers: Vec<Rational> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpResult {
    pub status: LpStatus,
    pub value: Option<Rational>,
    pub witness: Option<BTreeMap<usize, Rational>>,
    pub certificate: Option<LpCertificate>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpError {
    #[error("variable w{var} appears in the program but not in the variable list")]
    UnlistedVariable { var: usize },
    #[error("duplicate variable w{var} in the variable list")]
    DuplicateVariable { var: usize },
    #[error("solver produced a result that failed exact re-verification: {0}")]
    Internal(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("witness does not assign variable w{0}")]
    MissingAssignment(usize),
    #[error("constraint {0} violated by witness")]
    ConstraintViolated(usize),
    #[error("objective at witness differs from reported value")]
    ValueMismatch,
    #[error("certificate has {got} multipliers for {want} constraints")]
    MultiplierCount { got: usize, want: usize },
    #[error("multiplier {0} negative on an inequality constraint")]
    NegativeMultiplier(usize),
    #[error("dual stationarity fails at variable w{0}")]
    Stationarity(usize),
    #[error("dual objective differs from reported value")]
    DualValueMismatch,
    #[error("Farkas combination does not refute the system")]
    FarkasInvalid,
    #[error("missing certificate")]
    MissingCertificate,
    #[error("missing witness or value")]
    MissingWitness,
}

/// One constraint reoriented to `coeffs . x <= rhs` (or `=` when `eq`),
/// dense over the program's sorted variable list.
#[derive(Clone, Debug)]
pub(crate) struct OrientedRow {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
    pub eq: bool,
}

/// A program in oriented dense form; `objective`/`obj_constant` are the
/// coefficients of the *maximization* objective (negated for `Minimize`).
#[derive(Clone, Debug)]
pub(crate) struct Oriented {
    pub vars: Vec<usize>,
    pub rows: Vec<OrientedRow>,
    pub objective: Vec<Rational>,
    pub obj_constant: Rational,
    pub minimize: bool,
}

impl Oriented {
    pub fn build(lp: &LinearProgram) -> Result<Oriented, LpError> {
        let mut vars: Vec<usize> = lp.variables.clone();
        vars.sort_unstable();
        for pair in vars.windows(2) {
            if pair[0] == pair[1] {
                return Err(LpError::DuplicateVariable { var: pair[0] });
            }
        }
        let index: BTreeMap<usize, usize> = vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let listed = |form: &AffineForm| -> Result<Vec<Rational>, LpError> {
            let mut dense = vec![Rational::zero(); vars.len()];
            for (j, c) in form.coeffs() {
                let slot = index
                    .get(&j)
                    .ok_or(LpError::UnlistedVariable { var: j })?;
                dense[*slot] = c.clone();
            }
            Ok(dense)
        };

        let negate = lp.sense == Sense::Minimize;
        let mut objective = listed(&lp.objective)?;
        let mut obj_constant = lp.objective.constant_part().clone();
        if negate {
            for c in &mut objective {
                *c = -c.clone();
            }
            obj_constant = -obj_constant;
        }

        let mut rows = Vec::with_capacity(lp.constraints.len());
        for (form, rel) in &lp.constraints {
            let dense = listed(form)?;
            let k = form.constant_part().clone();
            let row = match rel {
                Relation::GeqZero => OrientedRow {
                    coeffs: dense.iter().map(|c| -c.clone()).collect(),
                    rhs: k,
                    eq: false,
                },
                Relation::LeqZero => OrientedRow {
                    coeffs: dense,
                    rhs: -k,
                    eq: false,
                },
                Relation::EqZero => OrientedRow {
                    coeffs: dense,
                    rhs: -k,
                    eq: true,
                },
            };
            rows.push(row);
        }
        Ok(Oriented {
            vars,
            rows,
            objective,
            obj_constant,
            minimize: negate,
        })
    }

    pub fn n(&self) -> usize {
        self.vars.len()
    }
}

/// Solves the program with the exact two-phase simplex (Bland's rule;
/// pivot ties broken by lowest variable index). The returned result has
/// already passed [`verify_result`].
pub fn lp_solve(lp: &LinearProgram) -> Result<LpResult, LpError> {
    let oriented = Oriented::build(lp)?;
    let result = simplex::solve(&oriented);
    finish(lp, result)
}

/// Same contract as [`lp_solve`], but a floating-point solve proposes the
/// optimal basis (or an infeasibility support) first and only the exact
/// reconstruction from that hint is attempted before falling back to the
/// full exact simplex. Status and value always agree with [`lp_solve`];
/// with multiple optima the witness vertex may differ. The guided path
/// proves its result during construction (integer-exact tightness,
/// feasibility, multiplier signs and stationarity), so the generic
/// re-verification is not repeated here; [`verify_result`] accepts its
/// output all the same.
pub fn lp_solve_guided(lp: &LinearProgram) -> Result<LpResult, LpError> {
    let oriented = Oriented::build(lp)?;
    if let Some(result) = guided::try_exactify(lp, &oriented) {
        return Ok(result);
    }
    let result = simplex::solve(&oriented);
    finish(lp, result)
}

fn finish(lp: &LinearProgram, result: LpResult) -> Result<LpResult, LpError> {
    verify_result(lp, &result).map_err(|e| LpError::Internal(e.to_string()))?;
    Ok(result)
}

/// Re-checks a result against its program by exact substitution: witness
/// feasibility, objective agreement, multiplier signs, dual stationarity
/// and strong duality for optimal results; the Farkas contradiction for
/// infeasible ones. Unbounded results carry nothing to check.
pub fn verify_result(lp: &LinearProgram, result: &LpResult) -> Result<(), VerifyError> {
    let oriented = Oriented::build(lp).map_err(|_| VerifyError::MissingCertificate)?;
    match result.status {
        LpStatus::Optimal => {
            let witness = result.witness.as_ref().ok_or(VerifyError::MissingWitness)?;
            let value = result.value.as_ref().ok_or(VerifyError::MissingWitness)?;
            for v in &oriented.vars {
                if !witness.contains_key(v) {
                    return Err(VerifyError::MissingAssignment(*v));
                }
            }
            for (i, (form, rel)) in lp.constraints.iter().enumerate() {
                let val = form.eval(witness).map_err(|_| VerifyError::ConstraintViolated(i))?;
                let ok = match rel {
                    Relation::GeqZero => !val.is_negative(),
                    Relation::LeqZero => !val.is_positive(),
                    Relation::EqZero => val.is_zero(),
                };
                if !ok {
                    return Err(VerifyError::ConstraintViolated(i));
                }
            }
            let obj = lp
                .objective
                .eval(witness)
                .map_err(|e| match e {
                    crate::affine::EvalError::MissingVariable(v) => VerifyError::MissingAssignment(v),
                })?;
            if &obj != value {
                return Err(VerifyError::ValueMismatch);
            }
            let multipliers = match result.certificate.as_ref() {
                Some(LpCertificate::Optimality { multipliers }) => multipliers,
                _ => return Err(VerifyError::MissingCertificate),
            };
            check_duality(lp, &oriented, multipliers, value)
        }
        LpStatus::Infeasible => {
            let multipliers = match result.certificate.as_ref() {
                Some(LpCertificate::Infeasibility { multipliers }) => multipliers,
                _ => return Err(VerifyError::MissingCertificate),
            };
            check_farkas(&oriented, multipliers)
        }
        LpStatus::Unbounded => Ok(()),
    }
}

fn check_duality(
    lp: &LinearProgram,
    oriented: &Oriented,
    multipliers: &[Rational],
    value: &Rational,
) -> Result<(), VerifyError> {
    if multipliers.len() != oriented.rows.len() {
        return Err(VerifyError::MultiplierCount {
            got: multipliers.len(),
            want: oriented.rows.len(),
        });
    }
    for (i, (row, m)) in oriented.rows.iter().zip(multipliers).enumerate() {
        if !row.eq && m.is_negative() {
            return Err(VerifyError::NegativeMultiplier(i));
        }
    }
    // stationarity: sum_i mult_i g_i = c (max orientation)
    for (slot, var) in oriented.vars.iter().enumerate() {
        let mut acc = Rational::zero();
        for (row, m) in oriented.rows.iter().zip(multipliers) {
            if !row.coeffs[slot].is_zero() && !m.is_zero() {
                acc += m * &row.coeffs[slot];
            }
        }
        if acc != oriented.objective[slot] {
            return Err(VerifyError::Stationarity(*var));
        }
    }
    // strong duality: value = c0 + sum_i mult_i h_i (max orientation)
    let mut dual = oriented.obj_constant.clone();
    for (row, m) in oriented.rows.iter().zip(multipliers) {
        if !m.is_zero() {
            dual += m * &row.rhs;
        }
    }
    let max_value = match lp.sense {
        Sense::Maximize => value.clone(),
        Sense::Minimize => -value.clone(),
    };
    if dual != max_value {
        return Err(VerifyError::DualValueMismatch);
    }
    Ok(())
}

fn check_farkas(oriented: &Oriented, multipliers: &[Rational]) -> Result<(), VerifyError> {
    if multipliers.len() != oriented.rows.len() {
        return Err(VerifyError::MultiplierCount {
            got: multipliers.len(),
            want: oriented.rows.len(),
        });
    }
    for (i, (row, m)) in oriented.rows.iter().zip(multipliers).enumerate() {
        if !row.eq && m.is_negative() {
            return Err(VerifyError::NegativeMultiplier(i));
        }
    }
    for slot in 0..oriented.n() {
        let mut acc = Rational::zero();
        for (row, m) in oriented.rows.iter().zip(multipliers) {
            if !row.coeffs[slot].is_zero() && !m.is_zero() {
                acc += m * &row.coeffs[slot];
            }
        }
        if !acc.is_zero() {
            return Err(VerifyError::FarkasInvalid);
        }
    }
    let mut combined = Rational::zero();
    for (row, m) in oriented.rows.iter().zip(multipliers) {
        if !m.is_zero() {
            combined += m * &row.rhs;
        }
    }
    if !combined.is_negative() {
        return Err(VerifyError::FarkasInvalid);
    }
    Ok(())
}

/// Variables actually referenced by a set of forms; used by callers that
/// assemble programs from parts.
pub fn referenced_variables(forms: &[&AffineForm]) -> Vec<usize> {
    let mut set = BTreeSet::new();
    for f in forms {
        set.extend(f.variables());
    }
    set.into_iter().collect()
}
