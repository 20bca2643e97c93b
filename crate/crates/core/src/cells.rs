//! Interlacing enumeration and the piecewise-affine cell machinery.
//!
//! The scaled-window bound is only piecewise affine in the cutoff vector:
//! the pieces ("cells") correspond to the ways the shifted breakpoints
//! `q_j = w_j + c` interlace the plain ones `r_j = w_j`. An [`Interlacing`]
//! records, for each `j`, the largest index `s_j` with `r_{s_j} <= q_j`.
//! [`build_cell`] turns one interlacing into its closed polytope (affine
//! constraints), its merged breakpoint sequence `p`, the segment index maps
//! `zeta`/`eta`, and the affine bound valid on that cell. Cells are closed,
//! so they overlap on boundaries and cover the whole cutoff cube; the
//! casework later takes a maximum over cells, which makes the overlap
//! harmless.

use crate::affine::{interval_sq_distance, AffineForm, LevelValue};
use crate::lp::{lp_solve, LinearProgram, LpStatus, Relation, Sense};
use crate::rational::{int, Rational};
use crate::sidon::CutoffVector;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CellError {
    #[error("window scale must be positive")]
    NonPositiveTau,
    #[error("levels must be positive, finite and strictly increasing")]
    InvalidLevels,
    #[error("window ratios must lie strictly between 0 and 1")]
    InvalidRatio,
    #[error("thinness parameter must be at least 1")]
    InvalidThinness,
    #[error("at least one window ratio is required")]
    NoRatios,
    #[error("interlacing {0:?} is not valid for K = {1}")]
    InvalidInterlacing(Vec<usize>, usize),
    #[error("no cell contains the point; the closed cells must cover the cube")]
    NotCovered,
    #[error("cutoff vector has K = {got}, cells have K = {want}")]
    DimensionMismatch { got: usize, want: usize },
}

/// Parameters of one certification run: the main window scale `tau`, the
/// levels `alpha_1 < ... < alpha_K`, the scaled-window ratios `c` (one per
/// extra window), and the thinness `g` (1 for plain Sidon sets).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundParams {
    pub tau: Rational,
    pub alphas: Vec<Rational>,
    pub cs: Vec<Rational>,
    pub g: u64,
}

impl BoundParams {
    pub fn new(
        tau: Rational,
        alphas: Vec<Rational>,
        cs: Vec<Rational>,
        g: u64,
    ) -> Result<Self, CellError> {
        if !tau.is_positive() {
            return Err(CellError::NonPositiveTau);
        }
        if alphas.iter().any(|a| !a.is_positive()) {
            return Err(CellError::InvalidLevels);
        }
        if alphas.windows(2).any(|p| p[0] >= p[1]) {
            return Err(CellError::InvalidLevels);
        }
        if cs.is_empty() {
            return Err(CellError::NoRatios);
        }
        let one = Rational::one();
        if cs.iter().any(|c| !c.is_positive() || *c >= one) {
            return Err(CellError::InvalidRatio);
        }
        if g == 0 {
            return Err(CellError::InvalidThinness);
        }
        Ok(BoundParams { tau, alphas, cs, g })
    }

    /// Number of levels K.
    pub fn k(&self) -> usize {
        self.alphas.len()
    }

    /// Extended level: zero at and below index 0, `+inf` above index K.
    pub fn level(&self, j: isize) -> LevelValue {
        if j <= 0 {
            LevelValue::finite(Rational::zero())
        } else if (j as usize) <= self.alphas.len() {
            LevelValue::finite(self.alphas[j as usize - 1].clone())
        } else {
            LevelValue::PosInf
        }
    }

    pub fn g_rational(&self) -> Rational {
        int(self.g as i64)
    }

    /// Levels as `LevelValue`s, for cutoff extraction.
    pub fn level_values(&self) -> Vec<LevelValue> {
        self.alphas.iter().cloned().map(LevelValue::finite).collect()
    }
}

/// The affine bound from the primary window: deviation credit accrues on
/// each cutoff gap `[w_j, w_{j+1}]` at the squared distance from the level
/// band `[alpha_j, alpha_{j+1}]` to the mean. Affine in `w_1..w_K`.
pub fn primary_window_form(params: &BoundParams) -> AffineForm {
    let k = params.k();
    let g2 = &params.g_rational() * &params.g_rational();
    let one = Rational::one();
    let base = &params.tau + &one / (&params.tau * &g2);
    let factor = int(2) * &params.tau / &g2;
    let mut form = AffineForm::constant(base);
    for j in 0..=k {
        let weight = interval_sq_distance(&params.level(j as isize), &params.level(j as isize + 1), &one)
            .expect("level intervals are ordered");
        if weight.is_zero() {
            continue;
        }
        let scale = &factor * &weight;
        // (w_{j+1} - w_j) with w_0 = 0 and w_{K+1} = 1 substituted
        if j + 1 <= k {
            form.add_coeff(j + 1, &-scale.clone());
        } else {
            form.add_constant(&-scale.clone());
        }
        if j >= 1 {
            form.add_coeff(j, &scale);
        }
    }
    form
}

/// The order pattern of the shifted breakpoints among the plain ones:
/// `s_j = max { t : w_t <= w_j + c }`, recorded for `j = 0..=K+1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Interlacing(Vec<usize>);

impl Interlacing {
    pub fn new(s: Vec<usize>, k: usize) -> Result<Self, CellError> {
        let valid = s.len() == k + 2
            && s.last() == Some(&(k + 1))
            && s.iter().enumerate().all(|(j, &v)| v >= j && v <= k + 1)
            && s.windows(2).all(|p| p[0] <= p[1]);
        if !valid {
            return Err(CellError::InvalidInterlacing(s, k));
        }
        Ok(Interlacing(s))
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len() - 2
    }
}

/// All interlacings for K levels, in lexicographic order.
pub fn enumerate_interlacings(k: usize) -> Vec<Interlacing> {
    let len = k + 2;
    let mut out = Vec::new();
    let mut current = vec![0usize; len];
    fn recurse(current: &mut Vec<usize>, pos: usize, len: usize, k: usize, out: &mut Vec<Interlacing>) {
        if pos == len - 1 {
            current[pos] = k + 1;
            out.push(Interlacing(current.clone()));
            return;
        }
        let lo = if pos == 0 { 0 } else { current[pos - 1].max(pos) };
        for v in lo..=(k + 1) {
            current[pos] = v;
            recurse(current, pos + 1, len, k, out);
        }
    }
    recurse(&mut current, 0, len, k, &mut out);
    out
}

/// One closed cell: its interlacing, bounding constraints (each form meant
/// as `>= 0`), merged breakpoint sequence `p_0..p_L`, the per-segment level
/// index maps `zeta`/`eta` (1-indexed by segment), and the affine bound
/// valid on the cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub interlacing: Interlacing,
    pub constraints: Vec<AffineForm>,
    pub breakpoints: Vec<AffineForm>,
    pub zeta: Vec<usize>,
    pub eta: Vec<usize>,
    pub function: AffineForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Marker {
    R(usize),
    Q(usize),
}

pub fn build_cell(s: &Interlacing, c: &Rational, params: &BoundParams) -> Result<Cell, CellError> {
    let k = params.k();
    if s.k() != k {
        return Err(CellError::InvalidInterlacing(s.values().to_vec(), k));
    }
    let sv = s.values();

    // merged breakpoint order: r_t, then every q_j with s_j = t, then r_{t+1};
    // q's with s_j = K+1 exceed 1 and are excluded
    let mut markers = Vec::with_capacity(2 * (k + 2));
    for t in 0..=(k + 1) {
        markers.push(Marker::R(t));
        for (j, &sj) in sv.iter().enumerate() {
            if sj == t && t <= k {
                markers.push(Marker::Q(j));
            }
        }
    }

    let q_form = |j: usize| -> AffineForm {
        if j == 0 {
            AffineForm::constant(c.clone())
        } else if j == k + 1 {
            AffineForm::constant(int(1) + c.clone())
        } else {
            AffineForm::constant(c.clone()).with_coeff(j, int(1))
        }
    };
    let r_form = |t: usize| -> AffineForm {
        if t == 0 {
            AffineForm::zero()
        } else if t == k + 1 {
            AffineForm::constant(int(1))
        } else {
            AffineForm::variable(t)
        }
    };
    let form_of = |m: Marker| -> AffineForm {
        match m {
            Marker::R(t) => r_form(t),
            Marker::Q(j) => q_form(j),
        }
    };

    let breakpoints: Vec<AffineForm> = markers.iter().map(|&m| form_of(m)).collect();
    let last = breakpoints.len() - 1;

    // zeta_j: index of the first q at or after position j (q's with
    // s_t = K+1 sit beyond 1, so the smallest such t closes the list);
    // eta_j: index of the first r at or after position j
    let first_excluded_q = sv.iter().position(|&v| v == k + 1).expect("s_{K+1} = K+1");
    let mut zeta = Vec::with_capacity(last);
    let mut eta = Vec::with_capacity(last);
    for pos in 1..=last {
        let z = markers[pos..]
            .iter()
            .find_map(|m| match m {
                Marker::Q(j) => Some(*j),
                _ => None,
            })
            .unwrap_or(first_excluded_q);
        let e = markers[pos..]
            .iter()
            .find_map(|m| match m {
                Marker::R(t) => Some(*t),
                _ => None,
            })
            .expect("r_{K+1} closes the sequence");
        zeta.push(z);
        eta.push(e);
    }

    // constraints: the fixed chain 0 <= w_1 <= ... <= w_K <= 1, breakpoint
    // ordering, and the interlacing-defining inequalities
    let mut constraints: BTreeSet<AffineForm> = BTreeSet::new();
    let push = |form: AffineForm, constraints: &mut BTreeSet<AffineForm>| {
        if form.is_constant() {
            // constants stay only when they witness infeasibility
            if form.constant_part().is_negative() {
                constraints.insert(form);
            }
        } else {
            constraints.insert(form);
        }
    };
    if k >= 1 {
        push(AffineForm::variable(1), &mut constraints);
        for j in 1..k {
            push(&AffineForm::variable(j + 1) - &AffineForm::variable(j), &mut constraints);
        }
        push(&AffineForm::constant(int(1)) - &AffineForm::variable(k), &mut constraints);
    }
    for pos in 1..=last {
        push(&breakpoints[pos] - &breakpoints[pos - 1], &mut constraints);
    }
    for (j, &sj) in sv.iter().enumerate() {
        push(&q_form(j) - &r_form(sj), &mut constraints);
        if sj <= k {
            push(&r_form(sj + 1) - &q_form(j), &mut constraints);
        }
    }

    // cell function: c*tau + 1/(c*tau*g^2)
    //   - (2*tau/(c^2*g^2)) * sum_j (p_j - p_{j-1}) * minsq_j
    let g2 = &params.g_rational() * &params.g_rational();
    let base = c * &params.tau + Rational::one() / (c * &params.tau * &g2);
    let factor = int(2) * &params.tau / (c * c * &g2);
    let mut function = AffineForm::constant(base);
    for seg in 1..=last {
        let lo = params
            .level(eta[seg - 1] as isize - 1)
            .sub(&params.level(zeta[seg - 1] as isize));
        let hi = params
            .level(eta[seg - 1] as isize)
            .sub(&params.level(zeta[seg - 1] as isize - 1));
        let weight = interval_sq_distance(&lo, &hi, c).expect("segment level band is ordered");
        if weight.is_zero() {
            continue;
        }
        let scale = &factor * &weight;
        let segment = &breakpoints[seg] - &breakpoints[seg - 1];
        function = &function - &segment.scaled(&scale);
    }

    Ok(Cell {
        interlacing: s.clone(),
        constraints: constraints.into_iter().collect(),
        breakpoints,
        zeta,
        eta,
        function,
    })
}

/// Feasibility of a cell's closed constraint system, via the exact solver.
pub fn cell_is_nonempty(cell: &Cell, k: usize) -> bool {
    let variables: Vec<usize> = (1..=k).collect();
    let constraints: Vec<(AffineForm, Relation)> = cell
        .constraints
        .iter()
        .map(|f| (f.clone(), Relation::GeqZero))
        .collect();
    let lp = LinearProgram::new(variables, AffineForm::zero(), Sense::Maximize, constraints);
    matches!(
        lp_solve(&lp).map(|r| r.status),
        Ok(LpStatus::Optimal)
    )
}

/// Builds every interlacing's cell and keeps the nonempty ones, in
/// lexicographic interlacing order.
pub fn nonempty_cells(params: &BoundParams, c: &Rational) -> Vec<Cell> {
    debug_assert!(params.cs.contains(c), "ratio must come from the parameter set");
    let k = params.k();
    enumerate_interlacings(k)
        .into_par_iter()
        .map(|s| build_cell(&s, c, params).expect("enumerated interlacings are valid"))
        .filter(|cell| cell_is_nonempty(cell, k))
        .collect()
}

/// First cell (in the deterministic list order) whose closed constraints
/// the cutoff vector satisfies. Closed cells cover the cube, so this only
/// fails on an internal inconsistency.
pub fn locate_cell<'a>(cells: &'a [Cell], w: &CutoffVector) -> Result<&'a Cell, CellError> {
    let point = w.as_point();
    for cell in cells {
        let inside = cell.constraints.iter().all(|f| {
            f.eval(&point)
                .map(|v| !v.is_negative())
                .unwrap_or(false)
        });
        if inside {
            return Ok(cell);
        }
    }
    Err(CellError::NotCovered)
}

/// Difference-constraint view of a cell used for fast exact feasibility
/// screening of cell combinations: every cell constraint has the shape
/// `w_u - w_v <= bound` over nodes `0..=K`, with node 0 pinned to zero.
#[derive(Clone, Debug)]
pub struct DiffSystem {
    /// `(u, v, bound)` meaning `w_u - w_v <= bound`
    pub edges: Vec<(usize, usize, Rational)>,
}

impl Cell {
    /// `None` when some constraint is not a difference form (does not occur
    /// for cells built here; callers then fall back to the LP).
    pub fn difference_system(&self) -> Option<DiffSystem> {
        let mut edges = Vec::with_capacity(self.constraints.len());
        for form in &self.constraints {
            let vars: Vec<(usize, Rational)> =
                form.coeffs().map(|(j, c)| (j, c.clone())).collect();
            let k = form.constant_part().clone();
            match vars.as_slice() {
                [] => {
                    if k.is_negative() {
                        edges.push((0, 0, k));
                    }
                }
                [(u, c)] if c.is_one() => edges.push((0, *u, k)),
                [(u, c)] if (-c).is_one() => edges.push((*u, 0, k)),
                [(u, cu), (v, cv)] if cu.is_one() && (-cv).is_one() => {
                    edges.push((*v, *u, k));
                }
                [(u, cu), (v, cv)] if cv.is_one() && (-cu).is_one() => {
                    edges.push((*u, *v, k));
                }
                _ => return None,
            }
        }
        Some(DiffSystem { edges })
    }
}

/// Floyd-Warshall feasibility of merged difference systems over nodes
/// `0..=k`: feasible iff no negative cycle.
pub fn difference_systems_feasible(systems: &[&DiffSystem], k: usize) -> bool {
    difference_systems_box(systems, k).is_some()
}

/// Like [`difference_systems_feasible`], but on success also returns the
/// exact per-coordinate range `[lo_j, hi_j]` of each `w_j` over the merged
/// system (shortest paths to and from the zero node).
pub fn difference_systems_box(
    systems: &[&DiffSystem],
    k: usize,
) -> Option<Vec<(Rational, Rational)>> {
    let n = k + 1;
    let mut dist: Vec<Option<Rational>> = vec![None; n * n];
    for i in 0..n {
        dist[i * n + i] = Some(Rational::zero());
    }
    for sys in systems {
        for (u, v, bound) in &sys.edges {
            let slot = u * n + v;
            let better = match &dist[slot] {
                None => true,
                Some(existing) => bound < existing,
            };
            if better {
                dist[slot] = Some(bound.clone());
            }
        }
    }
    for mid in 0..n {
        for a in 0..n {
            let Some(left) = dist[a * n + mid].clone() else { continue };
            for b in 0..n {
                let Some(right) = &dist[mid * n + b] else { continue };
                let through = &left + right;
                let slot = a * n + b;
                let better = match &dist[slot] {
                    None => true,
                    Some(existing) => &through < existing,
                };
                if better {
                    dist[slot] = Some(through);
                }
            }
        }
    }
    if (0..n).any(|i| dist[i * n + i].as_ref().unwrap().is_negative()) {
        return None;
    }
    let box_bounds = (1..=k)
        .map(|j| {
            let hi = dist[j].clone().unwrap_or_else(Rational::one);
            let lo = dist[j * n]
                .clone()
                .map(|d| -d)
                .unwrap_or_else(Rational::zero);
            (lo, hi)
        })
        .collect();
    Some(box_bounds)
}

#[cfg(test)]
mod tests;
