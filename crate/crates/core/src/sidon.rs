//! Sidon / g-thin sets, sliding-window statistics, and the exact diameter
//! identity.
//!
//! For a set `A` with k elements and a window length `T`, the window count
//! `A_i` is the number of elements in `[i-T, i)`. Writing `V` for the total
//! squared deviation of the window counts from their mean `kT/(T+diam)` and
//! `S_g` for the weighted deficit of under-represented differences below
//! `T`, every g-thin set satisfies exactly
//!
//! ```text
//! diam(A) = k^2 T^2 / (g T(T-1) + kT - (2 S_g + V)) - T
//! ```
//!
//! which is what `diameter_identity_residual` checks (it returns the
//! difference of the two sides, always zero). All statistics are exact.

use crate::affine::LevelValue;
use crate::rational::{int, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SidonError {
    #[error("a set needs at least one element")]
    Empty,
    #[error("elements must be strictly increasing (violated at position {position})")]
    NotStrictlyIncreasing { position: usize },
    #[error("set is not {g}-thin: some difference has {required} ordered representations")]
    NotThin { g: u64, required: u64 },
    #[error("window length T={t} makes the identity denominator vanish")]
    DegenerateDenominator { t: u64 },
    #[error("window length must be positive")]
    ZeroWindow,
    #[error("exhaustive search is capped at k = {max} with g = 1; use the greedy method")]
    ExhaustiveOutOfRange { max: u64 },
    #[error("levels must be finite, positive and strictly increasing")]
    InvalidLevels,
    #[error("negative constant")]
    NegativeConstant,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A finite set of integers, strictly increasing. The Sidon / g-thin
/// property is *not* an invariant of the type; it is measured by
/// [`check_thin`] and demanded by the operations that need it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SidonSet {
    elements: Vec<i64>,
}

impl SidonSet {
    pub fn new(elements: Vec<i64>) -> Result<Self, SidonError> {
        if elements.is_empty() {
            return Err(SidonError::Empty);
        }
        for (pos, pair) in elements.windows(2).enumerate() {
            if pair[0] >= pair[1] {
                return Err(SidonError::NotStrictlyIncreasing { position: pos + 1 });
            }
        }
        Ok(SidonSet { elements })
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn k(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn min(&self) -> i64 {
        self.elements[0]
    }

    pub fn max(&self) -> i64 {
        *self.elements.last().unwrap()
    }

    pub fn diameter(&self) -> u64 {
        (self.max() - self.min()) as u64
    }

    /// Number of elements strictly below `x`.
    pub fn prefix_count(&self, x: i64) -> u64 {
        self.elements.partition_point(|&e| e < x) as u64
    }

    /// `A_i = |A  ∩ [i-T, i)|`.
    pub fn window_count(&self, t: u64, i: i64) -> u64 {
        self.prefix_count(i) - self.prefix_count(i - t as i64)
    }

    /// Symmetrized window count: the average of `A_i` and the count of the
    /// window mirrored about the midpoint, an exact half-integer.
    pub fn symmetrized_count(&self, t: u64, i: i64) -> Rational {
        let mirror = self.min() as i128 + self.max() as i128 + t as i128 + 1 - i as i128;
        let total = self.window_count(t, i) + self.window_count(t, mirror as i64);
        Rational::new(BigInt::from(total), BigInt::from(2))
    }

    /// Mean window count `kT / (T + diam)` over `i in [min+1, max+T]`.
    pub fn window_mean(&self, t: u64) -> Rational {
        Rational::new(
            BigInt::from(self.k() * t),
            BigInt::from(t + self.diameter()),
        )
    }

    /// Parses the set file format: one integer per line, ascending, with
    /// `#` comments and blank lines allowed.
    pub fn parse(text: &str) -> Result<Self, SidonError> {
        let mut elements = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let value: i64 = line.parse().map_err(|_| SidonError::Parse {
                line: idx + 1,
                message: format!("not an integer: {line:?}"),
            })?;
            elements.push(value);
        }
        SidonSet::new(elements)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.elements {
            let _ = writeln!(out, "{e}");
        }
        out
    }
}

/// Difference histogram and the smallest g for which the set is g-thin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThinReport {
    /// positive difference -> number of ordered pairs realizing it
    pub histogram: BTreeMap<i64, u64>,
    pub g_required: u64,
}

/// Counts ordered representations of every positive difference and compares
/// the worst one against `g`.
pub fn check_thin(set: &SidonSet, g: u64) -> (bool, ThinReport) {
    let mut histogram = BTreeMap::new();
    let elems = set.elements();
    for (i, &a) in elems.iter().enumerate() {
        for &b in &elems[..i] {
            *histogram.entry(a - b).or_insert(0u64) += 1;
        }
    }
    let g_required = histogram.values().copied().max().unwrap_or(0);
    (
        g_required <= g,
        ThinReport {
            histogram,
            g_required,
        },
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileKind {
    Raw,
    Symmetrized,
}

/// Materialized window-count profile over `i in [min+1, max+T]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowProfile {
    pub t: u64,
    pub kind: ProfileKind,
    /// index of the first entry (`min + 1`)
    pub start: i64,
    pub counts: Vec<Rational>,
    pub mean: Rational,
}

pub fn window_profile(set: &SidonSet, t: u64, kind: ProfileKind) -> WindowProfile {
    let start = set.min() + 1;
    let end = set.max() + t as i64;
    let raw: Vec<u64> = (start..=end).map(|i| set.window_count(t, i)).collect();
    let counts: Vec<Rational> = match kind {
        ProfileKind::Raw => raw.iter().map(|&c| int(c as i64)).collect(),
        ProfileKind::Symmetrized => {
            let n = raw.len();
            (0..n)
                .map(|idx| {
                    Rational::new(
                        BigInt::from(raw[idx] + raw[n - 1 - idx]),
                        BigInt::from(2),
                    )
                })
                .collect()
        }
    };
    WindowProfile {
        t,
        kind,
        start,
        counts,
        mean: set.window_mean(t),
    }
}

/// Constant-count segments of the raw window profile: `(length, count)`
/// pairs covering `i in [min+1, max+T]` in order.
fn profile_segments(set: &SidonSet, t: u64) -> Vec<(u64, u64)> {
    let mut deltas: BTreeMap<i64, i64> = BTreeMap::new();
    for &a in set.elements() {
        *deltas.entry(a + 1).or_insert(0) += 1;
        *deltas.entry(a + 1 + t as i64).or_insert(0) -= 1;
    }
    let start = set.min() + 1;
    let end = set.max() + t as i64;
    let mut segments = Vec::new();
    let mut count: i64 = 0;
    let mut cursor = start;
    for (&pos, &delta) in deltas.range(..) {
        if pos > end {
            break;
        }
        if pos > cursor {
            segments.push(((pos - cursor) as u64, count as u64));
            cursor = pos;
        }
        count += delta;
    }
    if cursor <= end {
        segments.push(((end - cursor + 1) as u64, count as u64));
    }
    segments
}

/// Exact total squared deviation `V = sum_i (A_i - mean)^2`.
pub fn total_squared_deviation(set: &SidonSet, t: u64) -> Rational {
    // V = sum A_i^2 - (kT)^2 / N with N = diam + T windows
    let mut sum_squares = BigInt::zero();
    for (len, count) in profile_segments(set, t) {
        sum_squares += BigInt::from(len) * BigInt::from(count) * BigInt::from(count);
    }
    let kt = BigInt::from(set.k() * t);
    let n = BigInt::from(set.diameter() + t);
    Rational::from_integer(sum_squares) - Rational::new(&kt * &kt, n)
}

/// Ordered-representation counts restricted to differences in `[1, T-1]`.
fn representation_counts_below(set: &SidonSet, t: u64) -> BTreeMap<i64, u64> {
    let mut counts = BTreeMap::new();
    let elems = set.elements();
    for (i, &a) in elems.iter().enumerate() {
        for &b in elems[..i].iter().rev() {
            let d = a - b;
            if d >= t as i64 {
                break;
            }
            *counts.entry(d).or_insert(0u64) += 1;
        }
    }
    counts
}

/// The weighted deficit `S_g = sum_{s<g} sum_{r in D_s} (g-s)(T-r)`, where
/// `D_s` collects the differences in `[1, T)` with exactly `s` ordered
/// representations. Errors if the set is not g-thin.
pub fn difference_deficit(set: &SidonSet, t: u64, g: u64) -> Result<u64, SidonError> {
    if t == 0 {
        return Err(SidonError::ZeroWindow);
    }
    let (ok, report) = check_thin(set, g);
    if !ok {
        return Err(SidonError::NotThin {
            g,
            required: report.g_required,
        });
    }
    // g*C(T,2) minus the weight of represented differences
    let mut total: u128 = (g as u128) * (t as u128) * (t as u128 - 1) / 2;
    for (&r, &s) in representation_counts_below(set, t).iter() {
        total -= (s as u128) * (t as u128 - r as u128);
    }
    Ok(u64::try_from(total).expect("deficit fits in u64 at supported scales"))
}

/// Both sides of the pair-count identity
/// `sum_i C(A_i, 2) = g*C(T,2) - S_g` for a g-thin set.
pub fn pair_count_identity(set: &SidonSet, t: u64, g: u64) -> Result<(BigInt, BigInt), SidonError> {
    let deficit = difference_deficit(set, t, g)?;
    let mut lhs = BigInt::zero();
    for (len, count) in profile_segments(set, t) {
        let c = BigInt::from(count);
        lhs += BigInt::from(len) * (&c * (&c - BigInt::one())) / BigInt::from(2);
    }
    let t_big = BigInt::from(t);
    let rhs = BigInt::from(g) * (&t_big * (&t_big - BigInt::one())) / BigInt::from(2)
        - BigInt::from(deficit);
    Ok((lhs, rhs))
}

/// Residual of the exact diameter identity; zero for every g-thin set and
/// valid window length.
pub fn diameter_identity_residual(set: &SidonSet, t: u64, g: u64) -> Result<Rational, SidonError> {
    if t == 0 {
        return Err(SidonError::ZeroWindow);
    }
    let deficit = difference_deficit(set, t, g)?; // also enforces thinness
    let v = total_squared_deviation(set, t);
    let denominator = int((g * t * (t - 1)) as i64) + int((set.k() * t) as i64)
        - (int(2) * int(deficit as i64) + v);
    if denominator.is_zero() {
        return Err(SidonError::DegenerateDenominator { t });
    }
    let kt = int((set.k() * t) as i64);
    let predicted = &kt * &kt / denominator - int(t as i64);
    Ok(int(set.diameter() as i64) - predicted)
}

/// Cutoff positions `w_0 = 0 <= w_1 <= ... <= w_K <= w_{K+1} = 1`: `w_j` is
/// the first scaled position in the leading window at which the symmetrized
/// profile reaches `alpha_j * mean`, or 1 if it never does.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutoffVector {
    w: Vec<Rational>,
}

impl CutoffVector {
    pub fn from_values(w: Vec<Rational>) -> Self {
        debug_assert!(w.len() >= 2);
        CutoffVector { w }
    }

    /// Number of interior cutoffs K.
    pub fn k(&self) -> usize {
        self.w.len() - 2
    }

    /// `w_j` for `0 <= j <= K+1`.
    pub fn get(&self, j: usize) -> &Rational {
        &self.w[j]
    }

    pub fn values(&self) -> &[Rational] {
        &self.w
    }

    /// The interior cutoffs as an evaluation point `w_1..w_K`.
    pub fn as_point(&self) -> BTreeMap<usize, Rational> {
        (1..=self.k()).map(|j| (j, self.w[j].clone())).collect()
    }
}

pub fn cutoff_vector(
    set: &SidonSet,
    t: u64,
    alphas: &[LevelValue],
) -> Result<CutoffVector, SidonError> {
    let mut finite = Vec::with_capacity(alphas.len());
    for a in alphas {
        match a.as_finite() {
            Some(r) if r.is_positive() => finite.push(r.clone()),
            _ => return Err(SidonError::InvalidLevels),
        }
    }
    if finite.windows(2).any(|p| p[0] >= p[1]) {
        return Err(SidonError::InvalidLevels);
    }
    if t == 0 {
        return Err(SidonError::ZeroWindow);
    }
    let mean = set.window_mean(t);
    let thresholds: Vec<Rational> = finite.iter().map(|a| a * &mean).collect();
    let mut w = vec![Rational::zero()];
    let mut level = 0usize;
    for offset in 0..=t {
        if level == thresholds.len() {
            break;
        }
        let b = set.symmetrized_count(t, set.min() + offset as i64);
        while level < thresholds.len() && b >= thresholds[level] {
            w.push(Rational::new(BigInt::from(offset), BigInt::from(t)));
            level += 1;
        }
    }
    while level < thresholds.len() {
        w.push(Rational::one());
        level += 1;
    }
    w.push(Rational::one());
    Ok(CutoffVector::from_values(w))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenerateMethod {
    Greedy,
    ExhaustiveMinDiameter,
}

const EXHAUSTIVE_MAX_K: u64 = 12;

/// Deterministic test-set supply. `Greedy` extends by the smallest next
/// element that keeps the set g-thin (zero-based); `ExhaustiveMinDiameter`
/// finds a k-element Sidon set of provably minimal diameter by iterative
/// deepening (capped at k = 12, g = 1).
pub fn generate_sidon(k: u64, method: GenerateMethod, g: u64) -> Result<SidonSet, SidonError> {
    if k == 0 {
        return Err(SidonError::Empty);
    }
    match method {
        GenerateMethod::Greedy => Ok(generate_greedy(k, g)),
        GenerateMethod::ExhaustiveMinDiameter => {
            if k > EXHAUSTIVE_MAX_K || g != 1 {
                return Err(SidonError::ExhaustiveOutOfRange {
                    max: EXHAUSTIVE_MAX_K,
                });
            }
            Ok(generate_exhaustive(k as usize))
        }
    }
}

fn generate_greedy(k: u64, g: u64) -> SidonSet {
    let mut elements: Vec<i64> = vec![0];
    let mut counts: Vec<u64> = vec![0; 16];
    while (elements.len() as u64) < k {
        let mut candidate = *elements.last().unwrap() + 1;
        'search: loop {
            if counts.len() <= candidate as usize {
                counts.resize(candidate as usize + 16, 0);
            }
            // small differences come from the largest elements; check those
            // first for an early exit
            for &a in elements.iter().rev() {
                if counts[(candidate - a) as usize] >= g {
                    candidate += 1;
                    continue 'search;
                }
            }
            break;
        }
        for &a in &elements {
            counts[(candidate - a) as usize] += 1;
        }
        elements.push(candidate);
    }
    SidonSet { elements }
}

fn generate_exhaustive(k: usize) -> SidonSet {
    if k == 1 {
        return SidonSet { elements: vec![0] };
    }
    // all C(k,2) differences must be distinct in [1, d]
    let mut target = (k * (k - 1) / 2) as i64;
    loop {
        let mut marks = vec![0i64];
        let mut used = vec![false; target as usize + 1];
        if dfs_ruler(k, target, &mut marks, &mut used) {
            return SidonSet { elements: marks };
        }
        target += 1;
    }
}

fn dfs_ruler(k: usize, target: i64, marks: &mut Vec<i64>, used: &mut Vec<bool>) -> bool {
    if marks.len() == k {
        return true;
    }
    let remaining = (k - marks.len()) as i64;
    let lo = marks.last().unwrap() + 1;
    let mut hi = target - (remaining - 1);
    if marks.len() == 1 {
        // mirror symmetry: the first gap may be assumed at most half
        hi = hi.min(target / 2);
    }
    'next: for pos in lo..=hi {
        for &m in marks.iter() {
            if used[(pos - m) as usize] {
                continue 'next;
            }
        }
        for &m in marks.iter() {
            used[(pos - m) as usize] = true;
        }
        marks.push(pos);
        if dfs_ruler(k, target, marks, used) {
            return true;
        }
        marks.pop();
        for &m in marks.iter() {
            used[(pos - m) as usize] = false;
        }
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundDirection {
    /// halve: from a diameter-form constant to a counting-form one
    DiameterToCount,
    /// double: from a counting-form constant to a diameter-form one
    CountToDiameter,
}

/// Converts the leading constant between the two equivalent bound shapes:
/// a diameter bound `diam >= k^2 - c*k^(3/2)` corresponds to a counting
/// bound with constant `c/2`, and conversely.
pub fn convert_bound_constant(
    c: &Rational,
    direction: BoundDirection,
) -> Result<Rational, SidonError> {
    if c.is_negative() {
        return Err(SidonError::NegativeConstant);
    }
    Ok(match direction {
        BoundDirection::DiameterToCount => c / int(2),
        BoundDirection::CountToDiameter => c * int(2),
    })
}

/// Smallest integer `T >= tau * k^(3/2)`, computed exactly.
pub fn main_window_length(tau: &Rational, k: u64) -> u64 {
    let num = tau.numer().clone();
    let den = tau.denom().clone();
    let k3 = BigInt::from(k).pow(3);
    let rhs = &num * &num * k3; // need (T*den)^2 >= num^2 k^3
    let mut t = (rhs.sqrt() / &den).max(BigInt::zero());
    while (&t * &den) * (&t * &den) < rhs {
        t += 1;
    }
    while t > BigInt::zero() && ((&t - 1) * &den) * ((&t - 1) * &den) >= rhs {
        t -= 1;
    }
    u64::try_from(t).expect("window length fits in u64")
}

/// `ceil(c * T)` exactly.
pub fn scaled_window_length(c: &Rational, t: u64) -> u64 {
    let num = c.numer() * BigInt::from(t);
    let q = num.div_ceil(c.denom());
    u64::try_from(q).expect("window length fits in u64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{parse_decimal, rat};
    use proptest::prelude::*;

    fn set(elems: &[i64]) -> SidonSet {
        SidonSet::new(elems.to_vec()).unwrap()
    }

    #[test]
    fn validates_ordering() {
        assert_eq!(SidonSet::new(vec![]), Err(SidonError::Empty));
        assert_eq!(
            SidonSet::new(vec![0, 3, 3]),
            Err(SidonError::NotStrictlyIncreasing { position: 2 })
        );
    }

    #[test]
    fn thinness_examples() {
        let (ok, report) = check_thin(&set(&[0, 1, 3]), 1);
        assert!(ok);
        assert_eq!(report.g_required, 1);
        assert_eq!(report.histogram.get(&2), Some(&1));

        // {0,1,2}: difference 1 realized by (1,0) and (2,1)
        let (ok1, report) = check_thin(&set(&[0, 1, 2]), 1);
        assert!(!ok1);
        assert_eq!(report.g_required, 2);
        let (ok2, _) = check_thin(&set(&[0, 1, 2]), 2);
        assert!(ok2);

        // all six positive differences of {0,1,4,6} are distinct
        let (ok, report) = check_thin(&set(&[0, 1, 4, 6]), 1);
        assert!(ok);
        assert_eq!(report.histogram.len(), 6);
    }

    #[test]
    fn raw_profile_example() {
        let p = window_profile(&set(&[0, 1, 3]), 2, ProfileKind::Raw);
        let expect: Vec<Rational> = [1, 2, 1, 1, 1].iter().map(|&c| int(c)).collect();
        assert_eq!(p.counts, expect);
        assert_eq!(p.start, 1);
        assert_eq!(p.mean, rat(6, 5));
        let total: Rational = p.counts.iter().sum();
        assert_eq!(total, int(6)); // k*T
    }

    #[test]
    fn symmetrized_profile_is_palindromic() {
        let p = window_profile(&set(&[0, 1, 3]), 2, ProfileKind::Symmetrized);
        let expect = vec![int(1), rat(3, 2), int(1), rat(3, 2), int(1)];
        assert_eq!(p.counts, expect);
        let mut reversed = p.counts.clone();
        reversed.reverse();
        assert_eq!(p.counts, reversed);
    }

    #[test]
    fn singleton_profile() {
        let p = window_profile(&set(&[5]), 3, ProfileKind::Raw);
        assert_eq!(p.counts, vec![int(1), int(1), int(1)]);
        assert_eq!(p.mean, int(1));
    }

    #[test]
    fn squared_deviation_examples() {
        assert_eq!(total_squared_deviation(&set(&[0, 1, 3]), 2), rat(4, 5));
        assert_eq!(total_squared_deviation(&set(&[0]), 1), int(0));
        assert_eq!(total_squared_deviation(&set(&[0, 1]), 1), int(0));
    }

    #[test]
    fn deficit_examples() {
        // r = 4 is the only difference of {0,1,3} missing below T = 5
        assert_eq!(difference_deficit(&set(&[0, 1, 3]), 5, 1).unwrap(), 1);
        assert_eq!(difference_deficit(&set(&[0, 1, 3]), 2, 1).unwrap(), 0);
        // r = 1 has two representations in {0,1,2}, exactly g = 2
        assert_eq!(difference_deficit(&set(&[0, 1, 2]), 2, 2).unwrap(), 0);
        assert!(matches!(
            difference_deficit(&set(&[0, 1, 2]), 2, 1),
            Err(SidonError::NotThin { required: 2, .. })
        ));
    }

    #[test]
    fn identity_residual_examples() {
        assert_eq!(
            diameter_identity_residual(&set(&[0, 1, 3]), 2, 1).unwrap(),
            int(0)
        );
        assert_eq!(
            diameter_identity_residual(&set(&[0, 1, 2]), 2, 2).unwrap(),
            int(0)
        );
        assert_eq!(
            diameter_identity_residual(&set(&[0, 1]), 1, 1).unwrap(),
            int(0)
        );
    }

    #[test]
    fn pair_count_identity_examples() {
        for (elems, t, g) in [
            (vec![0i64, 1, 3], 2u64, 1u64),
            (vec![0, 1, 3], 5, 1),
            (vec![0, 1, 2], 2, 2),
            (vec![0, 1], 1, 1),
        ] {
            let s = SidonSet::new(elems).unwrap();
            let (lhs, rhs) = pair_count_identity(&s, t, g).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn cutoff_examples() {
        let s = set(&[0, 1, 3]);
        let alphas = vec![
            LevelValue::finite(rat(1, 2)),
            LevelValue::finite(rat(3, 2)),
        ];
        let w = cutoff_vector(&s, 2, &alphas).unwrap();
        assert_eq!(
            w.values(),
            &[int(0), rat(1, 2), int(1), int(1)]
        );

        // unreachable threshold pins the cutoff at 1
        let huge = vec![LevelValue::finite(int(1_000_000))];
        let w = cutoff_vector(&s, 2, &huge).unwrap();
        assert_eq!(w.values(), &[int(0), int(1), int(1)]);

        // tiny threshold crosses at the first offset
        let tiny = vec![LevelValue::finite(rat(1, 100))];
        let w = cutoff_vector(&s, 2, &tiny).unwrap();
        assert_eq!(w.values(), &[int(0), rat(1, 2), int(1)]);
    }

    #[test]
    fn cutoff_rejects_bad_levels() {
        let s = set(&[0, 1, 3]);
        assert!(cutoff_vector(&s, 2, &[LevelValue::PosInf]).is_err());
        let decreasing = vec![
            LevelValue::finite(int(2)),
            LevelValue::finite(int(1)),
        ];
        assert!(cutoff_vector(&s, 2, &decreasing).is_err());
    }

    #[test]
    fn greedy_generation() {
        assert_eq!(
            generate_sidon(5, GenerateMethod::Greedy, 1).unwrap().elements(),
            &[0, 1, 3, 7, 12]
        );
        assert_eq!(
            generate_sidon(1, GenerateMethod::Greedy, 1).unwrap().elements(),
            &[0]
        );
        // g = 2 admits a denser greedy start
        let g2 = generate_sidon(5, GenerateMethod::Greedy, 2).unwrap();
        let (ok, _) = check_thin(&g2, 2);
        assert!(ok);
        assert!(g2.diameter() < generate_sidon(5, GenerateMethod::Greedy, 1).unwrap().diameter());
    }

    #[test]
    fn exhaustive_minimal_diameter() {
        let s = generate_sidon(4, GenerateMethod::ExhaustiveMinDiameter, 1).unwrap();
        assert_eq!(s.diameter(), 6);
        let (ok, _) = check_thin(&s, 1);
        assert!(ok);
        // known minimal diameters for small k
        for (k, d) in [(2u64, 1u64), (3, 3), (5, 11), (6, 17), (7, 25)] {
            let s = generate_sidon(k, GenerateMethod::ExhaustiveMinDiameter, 1).unwrap();
            assert_eq!(s.diameter(), d, "k = {k}");
        }
        assert!(matches!(
            generate_sidon(13, GenerateMethod::ExhaustiveMinDiameter, 1),
            Err(SidonError::ExhaustiveOutOfRange { .. })
        ));
        assert!(matches!(
            generate_sidon(4, GenerateMethod::ExhaustiveMinDiameter, 2),
            Err(SidonError::ExhaustiveOutOfRange { .. })
        ));
    }

    #[test]
    fn bound_constant_conversion() {
        assert_eq!(
            convert_bound_constant(&int(2), BoundDirection::DiameterToCount).unwrap(),
            int(1)
        );
        let c = parse_decimal("1.96365").unwrap();
        assert_eq!(
            convert_bound_constant(&c, BoundDirection::DiameterToCount).unwrap(),
            rat(39273, 40000)
        );
        assert_eq!(
            convert_bound_constant(&int(0), BoundDirection::CountToDiameter).unwrap(),
            int(0)
        );
        assert!(convert_bound_constant(&int(-1), BoundDirection::DiameterToCount).is_err());
    }

    #[test]
    fn window_lengths_are_exact_ceilings() {
        // k = 100: k^(3/2) = 1000 exactly
        assert_eq!(main_window_length(&parse_decimal("1.12733").unwrap(), 100), 1128);
        assert_eq!(main_window_length(&int(1), 4), 8);
        // k = 2: 2.8284...; tau = 1 -> 3
        assert_eq!(main_window_length(&int(1), 2), 3);
        assert_eq!(scaled_window_length(&rat(2, 3), 10), 7);
        assert_eq!(scaled_window_length(&rat(1, 2), 10), 5);
    }

    #[test]
    fn set_file_round_trip() {
        let text = "# comment\n0\n1 # inline\n\n3\n";
        let s = SidonSet::parse(text).unwrap();
        assert_eq!(s.elements(), &[0, 1, 3]);
        let back = SidonSet::parse(&s.render()).unwrap();
        assert_eq!(back, s);
        assert!(matches!(
            SidonSet::parse("1\nx\n"),
            Err(SidonError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            SidonSet::parse("2\n1\n"),
            Err(SidonError::NotStrictlyIncreasing { .. })
        ));
    }

    proptest! {
        #[test]
        fn window_sum_conservation(mut elems in proptest::collection::btree_set(-200i64..200, 1..20), t in 1u64..12) {
            let elements: Vec<i64> = std::mem::take(&mut elems).into_iter().collect();
            let s = SidonSet::new(elements).unwrap();
            let p = window_profile(&s, t, ProfileKind::Raw);
            let total: Rational = p.counts.iter().sum();
            prop_assert_eq!(total, int((s.k() * t) as i64));
        }

        #[test]
        fn symmetrization_never_overshoots(mut elems in proptest::collection::btree_set(0i64..120, 2..14), t in 1u64..10) {
            // sum over one end of 2*(B - mean)^2 is at most V, provided the
            // two end ranges do not overlap (T <= diam)
            let elements: Vec<i64> = std::mem::take(&mut elems).into_iter().collect();
            let s = SidonSet::new(elements).unwrap();
            prop_assume!(t <= s.diameter());
            let mean = s.window_mean(t);
            let mut end_sum = Rational::zero();
            for offset in 1..=t {
                let b = s.symmetrized_count(t, s.min() + offset as i64);
                let d = &b - &mean;
                end_sum += int(2) * &d * &d;
            }
            prop_assert!(end_sum <= total_squared_deviation(&s, t));
        }

        #[test]
        fn cutoffs_are_monotone(mut elems in proptest::collection::btree_set(0i64..200, 1..16), t in 1u64..10) {
            let elements: Vec<i64> = std::mem::take(&mut elems).into_iter().collect();
            let s = SidonSet::new(elements).unwrap();
            let alphas = vec![
                LevelValue::finite(rat(1, 2)),
                LevelValue::finite(rat(9, 10)),
                LevelValue::finite(rat(13, 10)),
            ];
            let w = cutoff_vector(&s, t, &alphas).unwrap();
            for pair in w.values().windows(2) {
                prop_assert!(pair[0] <= pair[1]);
            }
        }
    }
}
