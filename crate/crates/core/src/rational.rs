//! Exact rational scalars and decimal conversions.
//!
//! Every numeric parameter of the certifier (window scales, levels, window
//! ratios) enters as a decimal literal and is held exactly as a fraction; no
//! binary floating point is involved anywhere on the certification path.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// The universal scalar of the certifier: an arbitrary-precision fraction,
/// always normalized (positive denominator, reduced).
pub type Rational = BigRational;

/// Shorthand for small constants.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for integers.
pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecimalError {
    #[error("empty decimal literal")]
    Empty,
    #[error("invalid character {ch:?} at position {pos} in decimal literal")]
    InvalidChar { ch: char, pos: usize },
    #[error("missing digits at position {pos} in decimal literal")]
    MissingDigits { pos: usize },
}

/// Parses a decimal literal (optional sign, digits, optional fraction part)
/// into exactly `d / 10^p`. No float intermediate: `"1.07950"` becomes
/// `2159/2000` exactly.
pub fn parse_decimal(text: &str) -> Result<Rational, DecimalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(DecimalError::Empty);
    }
    let bytes = s.as_bytes();
    let mut pos = 0;
    let mut negative = false;
    if bytes[pos] == b'+' || bytes[pos] == b'-' {
        negative = bytes[pos] == b'-';
        pos += 1;
    }
    let int_start = pos;
    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
        pos += 1;
    }
    if pos == int_start {
        return Err(DecimalError::MissingDigits { pos });
    }
    let mut numer: BigInt = s[int_start..pos].parse().expect("digit run");
    let mut scale: u32 = 0;
    if pos < bytes.len() && bytes[pos] == b'.' {
        pos += 1;
        let frac_start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if pos == frac_start {
            return Err(DecimalError::MissingDigits { pos });
        }
        let frac: BigInt = s[frac_start..pos].parse().expect("digit run");
        scale = (pos - frac_start) as u32;
        numer = numer * BigInt::from(10u32).pow(scale) + frac;
    }
    if pos != bytes.len() {
        return Err(DecimalError::InvalidChar {
            ch: s[pos..].chars().next().unwrap(),
            pos,
        });
    }
    if negative {
        numer = -numer;
    }
    Ok(BigRational::new(numer, BigInt::from(10u32).pow(scale)))
}

/// Exact decimal expansion when the denominator is of the form `2^a 5^b`,
/// with trailing zeros trimmed; `None` otherwise.
pub fn exact_decimal(r: &Rational) -> Option<String> {
    let mut den = r.denom().clone();
    let mut twos = 0u32;
    let mut fives = 0u32;
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let digits = twos.max(fives);
    let scaled = r.numer() * BigInt::from(10u32).pow(digits) / r.denom();
    Some(format_scaled(&scaled, digits, true))
}

/// Decimal string of `r` rounded **up** (towards +infinity) at `digits`
/// fractional digits. Used when printing upper bounds so the printed value
/// is always at least the exact one.
pub fn decimal_round_up(r: &Rational, digits: u32) -> String {
    let pow = BigInt::from(10u32).pow(digits);
    let scaled = (r * BigRational::from_integer(pow)).ceil().to_integer();
    format_scaled(&scaled, digits, false)
}

/// Decimal string rounded to nearest (ties away from zero) at `digits`.
pub fn decimal_round_nearest(r: &Rational, digits: u32) -> String {
    let pow = BigInt::from(10u32).pow(digits);
    let scaled = (r * BigRational::from_integer(pow)).round().to_integer();
    format_scaled(&scaled, digits, false)
}

fn format_scaled(scaled: &BigInt, digits: u32, trim: bool) -> String {
    let pow = BigInt::from(10u32).pow(digits);
    let (q, rem) = scaled.abs().div_rem(&pow);
    let sign = if scaled.is_negative() { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{q}");
    }
    let mut frac = format!("{:0width$}", rem, width = digits as usize);
    if trim {
        while frac.len() > 1 && frac.ends_with('0') {
            frac.pop();
        }
        if frac == "0" {
            return format!("{sign}{q}");
        }
    }
    format!("{sign}{q}.{frac}")
}

/// Nearest f64, for screening and display only.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses either a fraction `p/q` or a decimal literal.
pub fn parse_fraction_or_decimal(text: &str) -> Result<Rational, DecimalError> {
    let s = text.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| DecimalError::MissingDigits { pos: 0 })?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| DecimalError::MissingDigits { pos: num.len() + 1 })?;
        if d.is_zero() {
            return Err(DecimalError::MissingDigits { pos: num.len() + 1 });
        }
        Ok(BigRational::new(n, d))
    } else {
        parse_decimal(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_reference_literals_exactly() {
        assert_eq!(parse_decimal("1.07950").unwrap(), rat(2159, 2000));
        assert_eq!(parse_decimal("0.5").unwrap(), rat(1, 2));
        assert_eq!(parse_decimal("1.96365").unwrap(), rat(39273, 20000));
    }

    #[test]
    fn parses_signs_and_integers() {
        assert_eq!(parse_decimal("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_decimal("+3").unwrap(), int(3));
        assert_eq!(parse_decimal("12").unwrap(), int(12));
    }

    #[test]
    fn rejects_malformed_literals_with_position() {
        assert_eq!(parse_decimal(""), Err(DecimalError::Empty));
        assert_eq!(
            parse_decimal("1.2x"),
            Err(DecimalError::InvalidChar { ch: 'x', pos: 3 })
        );
        assert_eq!(
            parse_decimal(".5"),
            Err(DecimalError::MissingDigits { pos: 0 })
        );
        assert_eq!(
            parse_decimal("3."),
            Err(DecimalError::MissingDigits { pos: 2 })
        );
        assert_eq!(
            parse_decimal("--1"),
            Err(DecimalError::MissingDigits { pos: 1 })
        );
    }

    #[test]
    fn exact_decimal_round_trips() {
        for text in ["1.07950", "0.66461", "1.24610", "-2.5", "7"] {
            let r = parse_decimal(text).unwrap();
            let printed = exact_decimal(&r).unwrap();
            assert_eq!(parse_decimal(&printed).unwrap(), r);
            // printing is a fixpoint after one normalization pass
            assert_eq!(exact_decimal(&parse_decimal(&printed).unwrap()).unwrap(), printed);
        }
        assert_eq!(exact_decimal(&rat(1, 3)), None);
    }

    #[test]
    fn directed_rounding_is_upward() {
        let r = rat(19636449, 10_000_000); // 1.9636449
        assert_eq!(decimal_round_up(&r, 6), "1.963645");
        assert_eq!(decimal_round_up(&rat(1, 3), 3), "0.334");
        assert_eq!(decimal_round_up(&rat(-1, 3), 3), "-0.333");
        assert_eq!(decimal_round_up(&int(2), 2), "2.00");
    }

    #[test]
    fn nearest_rounding() {
        assert_eq!(decimal_round_nearest(&rat(1, 3), 4), "0.3333");
        assert_eq!(decimal_round_nearest(&rat(2, 3), 4), "0.6667");
    }

    #[test]
    fn fraction_or_decimal() {
        assert_eq!(parse_fraction_or_decimal("2159/2000").unwrap(), rat(2159, 2000));
        assert_eq!(parse_fraction_or_decimal("-3/9").unwrap(), rat(-1, 3));
        assert_eq!(parse_fraction_or_decimal("1.5").unwrap(), rat(3, 2));
    }
}
