//! Affine forms over the cutoff variables `w_1..w_K` and extended level
//! values.
//!
//! Every symbolic bound in the certifier is an [`AffineForm`]: an exact
//! constant plus rational coefficients on named variables. Level arithmetic
//! needs one-sided infinities (the top level is `+inf`, and differences of
//! levels can be `-inf`), hence [`LevelValue`].

use crate::rational::{int, Rational};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// A level threshold or a difference of levels: a rational or an infinity.
/// `PosInf` compares greater than every rational, `NegInf` less.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LevelValue {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl LevelValue {
    pub fn finite(r: Rational) -> Self {
        LevelValue::Finite(r)
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            LevelValue::Finite(r) => Some(r),
            _ => None,
        }
    }

    /// `self - other`; `Finite - PosInf = NegInf` and `PosInf - Finite =
    /// PosInf`. The certifier never subtracts two infinities.
    pub fn sub(&self, other: &LevelValue) -> LevelValue {
        match (self, other) {
            (LevelValue::Finite(a), LevelValue::Finite(b)) => LevelValue::Finite(a - b),
            (LevelValue::PosInf, LevelValue::Finite(_)) => LevelValue::PosInf,
            (LevelValue::Finite(_), LevelValue::PosInf) => LevelValue::NegInf,
            (LevelValue::NegInf, LevelValue::Finite(_)) => LevelValue::NegInf,
            (LevelValue::Finite(_), LevelValue::NegInf) => LevelValue::PosInf,
            _ => panic!("undefined difference of infinities"),
        }
    }
}

impl fmt::Display for LevelValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelValue::NegInf => write!(f, "-inf"),
            LevelValue::Finite(r) => write!(f, "{r}"),
            LevelValue::PosInf => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IntervalError {
    #[error("empty interval: lower endpoint {lo} exceeds upper endpoint {hi}")]
    Empty { lo: String, hi: String },
}

/// Squared distance from `center` to the closed interval `[lo, hi]`:
/// zero when the center lies inside, otherwise the squared gap to the
/// nearer finite endpoint. This is the per-segment factor of every bound
/// form, with `center = 1` for the primary window and `center = c` for a
/// scaled window.
pub fn interval_sq_distance(
    lo: &LevelValue,
    hi: &LevelValue,
    center: &Rational,
) -> Result<Rational, IntervalError> {
    if lo > hi {
        return Err(IntervalError::Empty {
            lo: lo.to_string(),
            hi: hi.to_string(),
        });
    }
    if let LevelValue::Finite(l) = lo {
        if center < l {
            let d = l - center;
            return Ok(&d * &d);
        }
    }
    if let LevelValue::Finite(h) = hi {
        if center > h {
            let d = center - h;
            return Ok(&d * &d);
        }
    }
    Ok(Rational::zero())
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("no value assigned to variable w{0}")]
    MissingVariable(usize),
}

/// An exact affine function `constant + sum_j coeff_j * w_j`. Absent
/// coefficients are zero; zero coefficients are never stored, so structural
/// equality is semantic equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct AffineForm {
    constant: Rational,
    coeffs: BTreeMap<usize, Rational>,
}

impl AffineForm {
    pub fn constant(c: Rational) -> Self {
        AffineForm {
            constant: c,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn zero() -> Self {
        AffineForm::default()
    }

    /// The bare variable `w_j`.
    pub fn variable(j: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(j, int(1));
        AffineForm {
            constant: Rational::zero(),
            coeffs,
        }
    }

    pub fn with_coeff(mut self, j: usize, coeff: Rational) -> Self {
        self.set_coeff(j, coeff);
        self
    }

    pub fn set_coeff(&mut self, j: usize, coeff: Rational) {
        if coeff.is_zero() {
            self.coeffs.remove(&j);
        } else {
            self.coeffs.insert(j, coeff);
        }
    }

    pub fn add_coeff(&mut self, j: usize, coeff: &Rational) {
        let updated = match self.coeffs.get(&j) {
            Some(existing) => existing + coeff,
            None => coeff.clone(),
        };
        self.set_coeff(j, updated);
    }

    pub fn add_constant(&mut self, c: &Rational) {
        self.constant += c;
    }

    pub fn constant_part(&self) -> &Rational {
        &self.constant
    }

    pub fn coeff(&self, j: usize) -> Rational {
        self.coeffs.get(&j).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().map(|(j, c)| (*j, c))
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn variables(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    /// Exact value at a point; every variable with a nonzero coefficient
    /// must be assigned.
    pub fn eval(&self, point: &BTreeMap<usize, Rational>) -> Result<Rational, EvalError> {
        let mut acc = self.constant.clone();
        for (j, coeff) in &self.coeffs {
            let v = point.get(j).ok_or(EvalError::MissingVariable(*j))?;
            acc += coeff * v;
        }
        Ok(acc)
    }

    pub fn scaled(&self, factor: &Rational) -> AffineForm {
        if factor.is_zero() {
            return AffineForm::zero();
        }
        AffineForm {
            constant: &self.constant * factor,
            coeffs: self
                .coeffs
                .iter()
                .map(|(j, c)| (*j, c * factor))
                .collect(),
        }
    }
}

impl Add for &AffineForm {
    type Output = AffineForm;
    fn add(self, rhs: &AffineForm) -> AffineForm {
        let mut out = self.clone();
        out.constant += &rhs.constant;
        for (j, c) in &rhs.coeffs {
            out.add_coeff(*j, c);
        }
        out
    }
}

impl Sub for &AffineForm {
    type Output = AffineForm;
    fn sub(self, rhs: &AffineForm) -> AffineForm {
        let mut out = self.clone();
        out.constant -= &rhs.constant;
        for (j, c) in &rhs.coeffs {
            out.add_coeff(*j, &(-c.clone()));
        }
        out
    }
}

impl Neg for &AffineForm {
    type Output = AffineForm;
    fn neg(self) -> AffineForm {
        self.scaled(&int(-1))
    }
}

impl Mul<&Rational> for &AffineForm {
    type Output = AffineForm;
    fn mul(self, factor: &Rational) -> AffineForm {
        self.scaled(factor)
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.constant)?;
        for (j, c) in &self.coeffs {
            write!(f, " + {c}*w{j}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn point(vals: &[(usize, Rational)]) -> BTreeMap<usize, Rational> {
        vals.iter().cloned().collect()
    }

    #[test]
    fn eval_substitutes_exactly() {
        // 1 + 2*w1 - w2 at (w1=1/2, w2=1) -> 1
        let form = AffineForm::constant(int(1))
            .with_coeff(1, int(2))
            .with_coeff(2, int(-1));
        let p = point(&[(1, rat(1, 2)), (2, int(1))]);
        assert_eq!(form.eval(&p).unwrap(), int(1));
    }

    #[test]
    fn constant_form_ignores_point() {
        let form = AffineForm::constant(rat(7, 3));
        assert_eq!(form.eval(&BTreeMap::new()).unwrap(), rat(7, 3));
        let p = point(&[(1, int(99))]);
        assert_eq!(form.eval(&p).unwrap(), rat(7, 3));
    }

    #[test]
    fn antisymmetric_form_vanishes_on_diagonal() {
        let form = AffineForm::zero()
            .with_coeff(1, int(-1))
            .with_coeff(2, int(1));
        for t in [rat(0, 1), rat(3, 7), int(-2)] {
            let p = point(&[(1, t.clone()), (2, t.clone())]);
            assert_eq!(form.eval(&p).unwrap(), int(0));
        }
    }

    #[test]
    fn eval_names_missing_variable() {
        let form = AffineForm::variable(3);
        assert_eq!(
            form.eval(&BTreeMap::new()),
            Err(EvalError::MissingVariable(3))
        );
    }

    #[test]
    fn zero_coefficients_are_not_stored() {
        let mut a = AffineForm::variable(1);
        a.add_coeff(1, &int(-1));
        assert_eq!(a, AffineForm::zero());
        let b = AffineForm::constant(int(2)).with_coeff(4, int(3));
        let c = AffineForm::constant(int(2))
            .with_coeff(4, int(3))
            .with_coeff(7, int(0));
        assert_eq!(b, c);
    }

    #[test]
    fn interval_distance_cases() {
        // monotone on the interval: center right of [1/2, 9/10]
        assert_eq!(
            interval_sq_distance(
                &LevelValue::finite(rat(1, 2)),
                &LevelValue::finite(rat(9, 10)),
                &int(1)
            )
            .unwrap(),
            rat(1, 100)
        );
        // center inside
        assert_eq!(
            interval_sq_distance(
                &LevelValue::finite(rat(4, 5)),
                &LevelValue::finite(rat(6, 5)),
                &int(1)
            )
            .unwrap(),
            int(0)
        );
        // left endpoint closest, upper endpoint infinite
        assert_eq!(
            interval_sq_distance(&LevelValue::finite(rat(6, 5)), &LevelValue::PosInf, &int(1))
                .unwrap(),
            rat(1, 25)
        );
        // negative lower endpoint passes through unclamped
        assert_eq!(
            interval_sq_distance(
                &LevelValue::finite(rat(-3, 2)),
                &LevelValue::finite(rat(-1, 2)),
                &int(0)
            )
            .unwrap(),
            rat(1, 4)
        );
        // unbounded below never triggers the left branch
        assert_eq!(
            interval_sq_distance(&LevelValue::NegInf, &LevelValue::PosInf, &int(5)).unwrap(),
            int(0)
        );
        assert!(interval_sq_distance(
            &LevelValue::finite(int(2)),
            &LevelValue::finite(int(1)),
            &int(0)
        )
        .is_err());
    }

    #[test]
    fn level_ordering() {
        assert!(LevelValue::NegInf < LevelValue::finite(int(-1_000_000)));
        assert!(LevelValue::finite(int(1_000_000)) < LevelValue::PosInf);
        assert!(LevelValue::finite(rat(1, 2)) < LevelValue::finite(rat(2, 3)));
    }
}
