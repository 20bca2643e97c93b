//! The max-min casework: assembles every bound form, enumerates feasible
//! cell combinations, solves one exact LP per (combination, governing
//! bound) case, and emits a certificate.
//!
//! The certified semantics: `certified_bound` is the exact maximum over the
//! cutoff cube of the minimum of all bound forms (the primary-window form
//! plus one scaled-window cell function per ratio), hence an upper bound on
//! the diameter constant. Each case fixes a governing bound `B_g`, takes
//! one cell per ratio, and maximizes `B_g` subject to the cells' closed
//! constraints and `B_g <= B_t` for every other bound; the maximum over all
//! feasible cases is the max-min. Combination feasibility is pre-screened
//! exactly (the cell systems are pure difference constraints) before the
//! governing-bound cases are expanded.

use crate::affine::AffineForm;
use crate::cells::{
    difference_systems_feasible, nonempty_cells, primary_window_form, BoundParams, Cell, CellError,
    DiffSystem, Interlacing,
};
use crate::lp::{lp_solve_guided, LinearProgram, LpError, LpStatus, Relation, Sense};
use crate::rational::{decimal_round_up, exact_decimal, int, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Params(#[from] CellError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("no feasible case; the closed cells must cover the cube")]
    NoFeasibleCase,
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("two-window levels must satisfy 0 < alpha1 < 1 < alpha2")]
    TwoWindowLevels,
}

/// The worst (= binding) case of a certificate: where the max-min is
/// attained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorstCase {
    /// rank of the cell combination in lexicographic enumeration order
    pub combo_index: usize,
    /// 0 = primary-window bound, t >= 1 = cell function of ratio t
    pub governing: usize,
    /// chosen cell index per ratio instance
    pub cell_indices: Vec<usize>,
    /// the chosen cells' interlacings, enough to rebuild the bound forms
    pub interlacings: Vec<Interlacing>,
    /// exact optimum `w_1..w_K`
    pub witness: Vec<Rational>,
}

/// One solved feasible case.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseRecord {
    pub combo_index: usize,
    pub cell_indices: Vec<usize>,
    pub governing: usize,
    pub value: Rational,
}

/// The auditable outcome of a certification run. All numbers are exact;
/// `printed_bound` is the only rounded field and it is rounded upward, so
/// it never understates the bound.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub params: BoundParams,
    pub per_instance_cell_counts: Vec<usize>,
    pub feasible_combo_count: usize,
    pub feasible_case_count: usize,
    pub certified_bound: Rational,
    pub printed_bound: String,
    pub worst_case: WorstCase,
    pub notes: Vec<String>,
    pub cases: Vec<CaseRecord>,
}

pub const PRINTED_DIGITS: u32 = 6;

/// Cells and feasible cell combinations for a parameter set; depends only
/// on K and the ratio list, not on tau, the levels, or g. Each combination
/// carries the exact coordinate box of its intersection polytope, used to
/// discard cases whose governing bound provably exceeds another bound on
/// the whole box.
pub(crate) struct Geometry {
    pub cells: Vec<Vec<Cell>>,
    pub combos: Vec<Vec<usize>>,
    pub boxes: Vec<Vec<(Rational, Rational)>>,
}

pub(crate) fn build_geometry(params: &BoundParams) -> Geometry {
    let cells: Vec<Vec<Cell>> = params
        .cs
        .iter()
        .map(|c| nonempty_cells(params, c))
        .collect();
    let (combos, boxes) = feasible_combinations(&cells, params.k());
    Geometry {
        cells,
        combos,
        boxes,
    }
}

/// Difference edges scaled to a common denominator for fast exact
/// feasibility checks; falls back to rational arithmetic when the common
/// denominator does not fit machine words.
enum ScreenEdges {
    Scaled(Vec<Vec<Vec<(usize, usize, i64)>>>),
    Exact(Vec<Vec<DiffSystem>>),
}

fn scale_edges(systems: &[Vec<DiffSystem>]) -> ScreenEdges {
    let mut denom = BigInt::one();
    for per_instance in systems {
        for sys in per_instance {
            for (_, _, b) in &sys.edges {
                denom = denom.lcm(b.denom());
            }
        }
    }
    let limit = BigInt::from(1i64 << 40);
    if denom > limit {
        return ScreenEdges::Exact(systems.to_vec());
    }
    let mut scaled = Vec::with_capacity(systems.len());
    for per_instance in systems {
        let mut out = Vec::with_capacity(per_instance.len());
        for sys in per_instance {
            let mut edges = Vec::with_capacity(sys.edges.len());
            for (u, v, b) in &sys.edges {
                let num = b.numer() * (&denom / b.denom());
                let Some(w) = num.to_i64() else {
                    return ScreenEdges::Exact(systems.to_vec());
                };
                if w.abs() > (1i64 << 50) {
                    return ScreenEdges::Exact(systems.to_vec());
                }
                edges.push((*u, *v, w));
            }
            out.push(edges);
        }
        scaled.push(out);
    }
    ScreenEdges::Scaled(scaled)
}

fn scaled_feasible(edge_lists: &[&[(usize, usize, i64)]], nodes: usize) -> bool {
    const INF: i128 = i128::MAX / 4;
    let mut dist = vec![INF; nodes * nodes];
    for i in 0..nodes {
        dist[i * nodes + i] = 0;
    }
    for edges in edge_lists {
        for &(u, v, w) in *edges {
            let slot = u * nodes + v;
            let w = w as i128;
            if w < dist[slot] {
                dist[slot] = w;
            }
        }
    }
    for mid in 0..nodes {
        for a in 0..nodes {
            let left = dist[a * nodes + mid];
            if left == INF {
                continue;
            }
            for b in 0..nodes {
                let right = dist[mid * nodes + b];
                if right == INF {
                    continue;
                }
                let through = left + right;
                let slot = a * nodes + b;
                if through < dist[slot] {
                    dist[slot] = through;
                }
            }
        }
    }
    (0..nodes).all(|i| dist[i * nodes + i] >= 0)
}

/// Lexicographic enumeration of cell combinations whose joint constraint
/// system is feasible. Pairwise feasibility masks prune the search; every
/// surviving combination is checked in full.
fn feasible_combinations(cells: &[Vec<Cell>], k: usize) -> Vec<Vec<usize>> {
    let nodes = k + 1;
    let n = cells.len();
    let systems: Vec<Vec<DiffSystem>> = cells
        .iter()
        .map(|list| {
            list.iter()
                .map(|cell| {
                    cell.difference_system()
                        .expect("cell constraints are difference forms")
                })
                .collect()
        })
        .collect();
    let edges = scale_edges(&systems);

    // feasibility of any selection given as (instance, cell index) pairs
    let feasible_selection = |selection: &[(usize, usize)]| -> bool {
        match &edges {
            ScreenEdges::Scaled(scaled) => {
                let lists: Vec<&[(usize, usize, i64)]> = selection
                    .iter()
                    .map(|&(inst, ci)| scaled[inst][ci].as_slice())
                    .collect();
                scaled_feasible(&lists, nodes)
            }
            ScreenEdges::Exact(exact) => {
                let lists: Vec<&DiffSystem> = selection
                    .iter()
                    .map(|&(inst, ci)| &exact[inst][ci])
                    .collect();
                difference_systems_feasible(&lists, k)
            }
        }
    };

    if n == 1 {
        // single instance: every nonempty cell stands alone
        return (0..cells[0].len()).map(|i| vec![i]).collect();
    }

    // pairwise masks
    let mut pair_ok: BTreeMap<(usize, usize), Vec<Vec<bool>>> = BTreeMap::new();
    for a in 0..n {
        for b in (a + 1)..n {
            let rows: Vec<Vec<bool>> = (0..cells[a].len())
                .into_par_iter()
                .map(|i| {
                    (0..cells[b].len())
                        .map(|j| feasible_selection(&[(a, i), (b, j)]))
                        .collect()
                })
                .collect();
            pair_ok.insert((a, b), rows);
        }
    }

    // depth-first lexicographic enumeration with mask pruning
    let mut combos = Vec::new();
    let mut current = vec![0usize; n];
    fn recurse(
        depth: usize,
        n: usize,
        cells: &[Vec<Cell>],
        pair_ok: &BTreeMap<(usize, usize), Vec<Vec<bool>>>,
        current: &mut Vec<usize>,
        feasible_selection: &dyn Fn(&[(usize, usize)]) -> bool,
        combos: &mut Vec<Vec<usize>>,
    ) {
        if depth == n {
            let selection: Vec<(usize, usize)> =
                current.iter().enumerate().map(|(inst, &ci)| (inst, ci)).collect();
            if feasible_selection(&selection) {
                combos.push(current.clone());
            }
            return;
        }
        'next: for i in 0..cells[depth].len() {
            for prev in 0..depth {
                if !pair_ok[&(prev, depth)][current[prev]][i] {
                    continue 'next;
                }
            }
            current[depth] = i;
            recurse(
                depth + 1,
                n,
                cells,
                pair_ok,
                current,
                feasible_selection,
                combos,
            );
        }
    }
    recurse(
        0,
        n,
        cells,
        &pair_ok,
        &mut current,
        &feasible_selection,
        &mut combos,
    );
    combos
}

/// Bound forms of one combination: index 0 is the primary-window form,
/// index t >= 1 the cell function of instance t's chosen cell.
fn combo_bounds<'a>(primary: &'a AffineForm, geometry: &'a Geometry, combo: &[usize]) -> Vec<&'a AffineForm> {
    let mut bounds = Vec::with_capacity(combo.len() + 1);
    bounds.push(primary);
    for (inst, &ci) in combo.iter().enumerate() {
        bounds.push(&geometry.cells[inst][ci].function);
    }
    bounds
}

fn merged_constraints(geometry: &Geometry, combo: &[usize]) -> Vec<AffineForm> {
    let mut set: std::collections::BTreeSet<AffineForm> = std::collections::BTreeSet::new();
    for (inst, &ci) in combo.iter().enumerate() {
        for f in &geometry.cells[inst][ci].constraints {
            set.insert(f.clone());
        }
    }
    set.into_iter().collect()
}

struct ComboOutcome {
    records: Vec<CaseRecord>,
    best: Option<(Rational, usize, usize, Vec<Rational>)>, // value, combo, governing, witness
}

fn solve_combo(
    params: &BoundParams,
    geometry: &Geometry,
    primary: &AffineForm,
    combo_index: usize,
    combo: &[usize],
) -> Result<ComboOutcome, CertifyError> {
    let k = params.k();
    let variables: Vec<usize> = (1..=k).collect();
    let bounds = combo_bounds(primary, geometry, combo);
    let shared = merged_constraints(geometry, combo);
    let mut records = Vec::new();
    let mut best: Option<(Rational, usize, usize, Vec<Rational>)> = None;

    for governing in 0..bounds.len() {
        let mut constraints: Vec<(AffineForm, Relation)> = shared
            .iter()
            .map(|f| (f.clone(), Relation::GeqZero))
            .collect();
        for (t, other) in bounds.iter().enumerate() {
            if t != governing {
                constraints.push((*other - bounds[governing], Relation::GeqZero));
            }
        }
        let lp = LinearProgram::new(
            variables.clone(),
            bounds[governing].clone(),
            Sense::Maximize,
            constraints,
        );
        let result = lp_solve_guided(&lp)?;
        match result.status {
            LpStatus::Optimal => {
                let value = result.value.expect("optimal result carries a value");
                let witness_map = result.witness.expect("optimal result carries a witness");
                // re-verify every bound at the witness: the governing one is
                // active at the optimum, the others dominate it
                let govern_at = bounds[governing]
                    .eval(&witness_map)
                    .map_err(|e| CertifyError::Internal(e.to_string()))?;
                if govern_at != value {
                    return Err(CertifyError::Internal(
                        "governing bound does not reproduce the optimum".into(),
                    ));
                }
                for (t, other) in bounds.iter().enumerate() {
                    if t == governing {
                        continue;
                    }
                    let at = other
                        .eval(&witness_map)
                        .map_err(|e| CertifyError::Internal(e.to_string()))?;
                    if at < value {
                        return Err(CertifyError::Internal(
                            "a dominated bound dips below the optimum".into(),
                        ));
                    }
                }
                let witness: Vec<Rational> =
                    (1..=k).map(|j| witness_map[&j].clone()).collect();
                records.push(CaseRecord {
                    combo_index,
                    cell_indices: combo.to_vec(),
                    governing,
                    value: value.clone(),
                });
                let better = match &best {
                    None => true,
                    Some((bv, bc, bg, _)) => {
                        value > *bv
                            || (value == *bv && (combo_index, governing) < (*bc, *bg))
                    }
                };
                if better {
                    best = Some((value, combo_index, governing, witness));
                }
            }
            LpStatus::Infeasible => {}
            LpStatus::Unbounded => {
                return Err(CertifyError::Internal(
                    "case LP unbounded on a bounded cell".into(),
                ));
            }
        }
    }
    Ok(ComboOutcome { records, best })
}

fn merge_best(
    a: Option<(Rational, usize, usize, Vec<Rational>)>,
    b: Option<(Rational, usize, usize, Vec<Rational>)>,
) -> Option<(Rational, usize, usize, Vec<Rational>)> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => {
            let keep_x = x.0 > y.0 || (x.0 == y.0 && (x.1, x.2) <= (y.1, y.2));
            Some(if keep_x { x } else { y })
        }
    }
}

/// Runs the full casework for a parameter set and returns the certificate.
pub fn certify(params: &BoundParams) -> Result<Certificate, CertifyError> {
    let params = BoundParams::new(
        params.tau.clone(),
        params.alphas.clone(),
        params.cs.clone(),
        params.g,
    )?;
    let geometry = build_geometry(&params);
    certify_with_geometry(&params, &geometry)
}

pub(crate) fn certify_with_geometry(
    params: &BoundParams,
    geometry: &Geometry,
) -> Result<Certificate, CertifyError> {
    let primary = primary_window_form(params);
    let outcomes: Vec<Result<ComboOutcome, CertifyError>> = geometry
        .combos
        .par_iter()
        .enumerate()
        .map(|(idx, combo)| solve_combo(params, geometry, &primary, idx, combo))
        .collect();

    let mut cases = Vec::new();
    let mut best: Option<(Rational, usize, usize, Vec<Rational>)> = None;
    for outcome in outcomes {
        let outcome = outcome?;
        cases.extend(outcome.records);
        best = merge_best(best, outcome.best);
    }
    let (certified_bound, combo_index, governing, witness) =
        best.ok_or(CertifyError::NoFeasibleCase)?;

    let combo = &geometry.combos[combo_index];
    let interlacings: Vec<Interlacing> = combo
        .iter()
        .enumerate()
        .map(|(inst, &ci)| geometry.cells[inst][ci].interlacing.clone())
        .collect();
    let printed_bound = decimal_round_up(&certified_bound, PRINTED_DIGITS);
    Ok(Certificate {
        params: params.clone(),
        per_instance_cell_counts: geometry.cells.iter().map(|c| c.len()).collect(),
        feasible_combo_count: geometry.combos.len(),
        feasible_case_count: cases.len(),
        certified_bound,
        printed_bound,
        worst_case: WorstCase {
            combo_index,
            governing,
            cell_indices: combo.clone(),
            interlacings,
            witness,
        },
        notes: Vec::new(),
        cases,
    })
}

/// Floating-point evaluation of the max-min over the same geometry; the
/// screening value for the parameter search. `None` when no case solved
/// cleanly.
pub(crate) fn max_min_float(params: &BoundParams, geometry: &Geometry) -> Option<f64> {
    use crate::lp::{solve_f64, FloatOutcome};
    let primary = primary_window_form(params);
    let k = params.k();
    let variables: Vec<usize> = (1..=k).collect();
    let best = geometry
        .combos
        .par_iter()
        .map(|combo| {
            let bounds = combo_bounds(&primary, geometry, combo);
            let shared = merged_constraints(geometry, combo);
            let mut local: Option<f64> = None;
            for governing in 0..bounds.len() {
                let mut constraints: Vec<(AffineForm, Relation)> = shared
                    .iter()
                    .map(|f| (f.clone(), Relation::GeqZero))
                    .collect();
                for (t, other) in bounds.iter().enumerate() {
                    if t != governing {
                        constraints.push((*other - bounds[governing], Relation::GeqZero));
                    }
                }
                let lp = LinearProgram::new(
                    variables.clone(),
                    bounds[governing].clone(),
                    Sense::Maximize,
                    constraints,
                );
                if let FloatOutcome::Optimal { value, .. } = solve_f64(&lp) {
                    local = Some(local.map_or(value, |b: f64| b.max(value)));
                }
            }
            local
        })
        .reduce(
            || None,
            |a, b| match (a, b) {
                (None, x) | (x, None) => x,
                (Some(x), Some(y)) => Some(x.max(y)),
            },
        );
    best
}

/// Two-window convenience path: K = 2 with a single ratio. Requires
/// `0 < alpha1 < 1 < alpha2`. The certificate notes record the two bound
/// forms and the doubled-cutoff scale mapping.
pub fn certify_two_window(
    tau: &Rational,
    alpha1: &Rational,
    alpha2: &Rational,
    c: &Rational,
) -> Result<Certificate, CertifyError> {
    let one = Rational::one();
    if !(alpha1 > &Rational::zero() && alpha1 < &one && alpha2 > &one) {
        return Err(CertifyError::TwoWindowLevels);
    }
    let params = BoundParams::new(
        tau.clone(),
        vec![alpha1.clone(), alpha2.clone()],
        vec![c.clone()],
        1,
    )?;
    let mut cert = certify(&params)?;
    let primary = primary_window_form(&params);
    let scaled_form = cert
        .worst_case
        .interlacings
        .first()
        .map(|s| {
            crate::cells::build_cell(s, c, &params)
                .expect("worst-case interlacing is valid")
                .function
        })
        .expect("two-window runs have one instance");
    cert.notes = vec![
        "scale: doubled-cutoff convention w' = 2w; forms below are on the w scale".to_string(),
        format!("bound-1: {primary}"),
        format!("bound-2 (governing cell): {scaled_form}"),
    ];
    Ok(cert)
}

/// The headline constant from a deviation coefficient: with windows of
/// scale `tau` and a certified deviation `v * k^(5/2)`, the diameter
/// constant is at most `tau + 1/tau - v/tau^2`.
pub fn bound_from_deviation(tau: &Rational, v: &Rational) -> Result<Rational, CertifyError> {
    if !tau.is_positive() {
        return Err(CertifyError::Params(CellError::NonPositiveTau));
    }
    if v.is_negative() {
        return Err(CertifyError::Internal("deviation must be nonnegative".into()));
    }
    Ok(tau + Rational::one() / tau - v / (tau * tau))
}

/// Minimum of all bound forms at a cutoff point: the primary-window form
/// and, per ratio instance, the cell function of a cell containing the
/// point (closed cells agree on shared boundaries, so any containing cell
/// gives the same piecewise value).
pub fn min_bound_at(
    params: &BoundParams,
    cells_per_instance: &[Vec<Cell>],
    w: &crate::sidon::CutoffVector,
) -> Result<Rational, CertifyError> {
    let point = w.as_point();
    let primary = primary_window_form(params);
    let mut best = primary
        .eval(&point)
        .map_err(|e| CertifyError::Internal(e.to_string()))?;
    for cells in cells_per_instance {
        let cell = crate::cells::locate_cell(cells, w)?;
        let v = cell
            .function
            .eval(&point)
            .map_err(|e| CertifyError::Internal(e.to_string()))?;
        if v < best {
            best = v;
        }
    }
    Ok(best)
}

/// Exact decimal (or fraction) rendering used in certificate text.
pub(crate) fn render_exact(r: &Rational) -> String {
    match exact_decimal(r) {
        Some(d) => d,
        None => format!("{}/{}", r.numer(), r.denom()),
    }
}


/// Stage benchmarks for development profiling.
pub fn bench_geometry(params: &BoundParams) -> (usize, usize) {
    let g = build_geometry(params);
    (g.cells.iter().map(|c| c.len()).sum(), g.combos.len())
}

/// Solves the first `limit` combos and returns the feasible-case count.
pub fn bench_cases(params: &BoundParams, limit: usize) -> usize {
    let geometry = build_geometry(params);
    let primary = primary_window_form(params);
    let mut count = 0;
    for (idx, combo) in geometry.combos.iter().take(limit).enumerate() {
        let outcome = solve_combo(params, &geometry, &primary, idx, combo).unwrap();
        count += outcome.records.len();
    }
    count
}
