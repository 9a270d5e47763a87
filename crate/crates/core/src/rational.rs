//! Exact rational numbers.
//!
//! [`Rational`] is an arbitrary-precision fraction kept in lowest terms with
//! a positive denominator. Parsing accepts integers, `num/den` fractions and
//! finite decimals (`-0.125`, `3.`, `.5`), all converted exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den`, reduced. Panics if `den == 0`.
pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError {
    input: String,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot parse {:?} as an exact rational", self.input)
    }
}

impl std::error::Error for ParseRationalError {}

pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError {
        input: s.to_string(),
    };
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let num: BigInt = parse_integer(n.trim()).ok_or_else(err)?;
        let den: BigInt = parse_integer(d.trim()).ok_or_else(err)?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(num, den));
    }
    let (negative, body) = match t.as_bytes()[0] {
        b'-' => (true, &t[1..]),
        b'+' => (false, &t[1..]),
        _ => (false, t),
    };
    let (whole, fraction) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && fraction.is_empty() {
        return Err(err());
    }
    let all_digits = |x: &str| x.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(whole) || !all_digits(fraction) {
        return Err(err());
    }
    let digits = format!("{whole}{fraction}");
    let num: BigInt = digits.parse().map_err(|_| err())?;
    let den = num_traits::pow(BigInt::from(10), fraction.len());
    let value = Rational::new(num, den);
    Ok(if negative { -value } else { value })
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Canonical text form: `n` for integers, `n/d` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Decimal rendering rounded half away from zero to `places` digits.
pub fn format_decimal(r: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = r.abs() * Rational::from_integer(scale.clone());
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let rounded = (scaled + half).floor().to_integer();
    let int_part = &rounded / &scale;
    let frac_part = &rounded % &scale;
    let sign = if r.is_negative() && !rounded.is_zero() {
        "-"
    } else {
        ""
    };
    if places == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{:0>width$}", frac_part, width = places)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/6").unwrap(), frac(1, 2));
        assert_eq!(parse_rational(" -4 / 8 ").unwrap(), frac(-1, 2));
        assert_eq!(parse_rational("0.125").unwrap(), frac(1, 8));
        assert_eq!(parse_rational("-2.5").unwrap(), frac(-5, 2));
        assert_eq!(parse_rational(".5").unwrap(), frac(1, 2));
        assert_eq!(parse_rational("7.").unwrap(), int(7));
        assert_eq!(parse_rational("+12").unwrap(), int(12));
    }

    #[test]
    fn rejects_garbage() {
        for bad in [
            "", "1/0", "abc", "1.2.3", "1/2/3", ".", "-", "1e5", "--1", "1/-",
        ] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should not parse");
        }
    }

    #[test]
    fn denominators_stay_positive() {
        let r = parse_rational("3/-9").unwrap();
        assert_eq!(format_rational(&r), "-1/3");
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(format_decimal(&frac(10, 3), 6), "3.333333");
        assert_eq!(format_decimal(&frac(2, 3), 2), "0.67");
        assert_eq!(format_decimal(&frac(-1, 8), 2), "-0.13");
        assert_eq!(format_decimal(&frac(-1, 1000), 2), "0.00");
        assert_eq!(format_decimal(&int(5), 0), "5");
    }

    proptest! {
        #[test]
        fn canonical_text_round_trips(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = frac(n, d);
            let text = format_rational(&r);
            prop_assert_eq!(parse_rational(&text).unwrap(), r);
        }
    }
}
