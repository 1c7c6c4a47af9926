//! Exact rational parsing and rendering.
//!
//! Distances enter the library as text and stay exact from then on: decimal
//! literals are read digit by digit (`"1.25"` is exactly `5/4`), fractions are
//! accepted as `p/q`, and values leave again either as `p/q` strings or as a
//! rounded decimal for people to read.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Parses a non-negative exact number.
///
/// Accepted forms: `12`, `+3.5`, `.25`, `1e-3`, `2.5E2`, `7/3`.
/// Negative values, `nan` and `inf` are rejected.
pub fn parse_exact(token: &str) -> Result<BigRational, Error> {
    let t = token.trim();
    let bad = |reason: &str| Error::Number {
        token: token.to_string(),
        reason: reason.to_string(),
    };
    if t.is_empty() {
        return Err(bad("empty"));
    }
    let lower = t.to_ascii_lowercase();
    let unsigned = lower.trim_start_matches('+');
    if matches!(unsigned, "nan" | "inf" | "infinity") {
        return Err(bad("not finite"));
    }
    if t.starts_with('-') {
        return Err(bad("negative"));
    }
    let t = t.strip_prefix('+').unwrap_or(t);

    if let Some((num, den)) = t.split_once('/') {
        let num = parse_digits(num.trim()).ok_or_else(|| bad("malformed numerator"))?;
        let den = parse_digits(den.trim()).ok_or_else(|| bad("malformed denominator"))?;
        if den.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(BigRational::new(num, den));
    }

    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = t[pos + 1..].parse().map_err(|_| bad("malformed exponent"))?;
            (&t[..pos], exp)
        }
        None => (t, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad("no digits"));
    }
    let all_digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(int_part) || !all_digits(frac_part) {
        return Err(bad("unexpected character"));
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().map_err(|_| bad("no digits"))?;
    let shift = exponent - frac_part.len() as i64;
    if shift.unsigned_abs() > 4096 {
        return Err(bad("exponent out of range"));
    }
    let ten = BigInt::from(10u8);
    let value = if shift >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, shift as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-shift) as usize))
    };
    Ok(value)
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Renders `p/q` in lowest terms, always with a denominator (`0/1`, `3/1`).
pub fn fraction_string(value: &BigRational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Shortest exact rendering: an integer, a terminating decimal, or `p/q`.
pub fn plain_string(value: &BigRational) -> String {
    if value.is_integer() {
        return value.numer().to_string();
    }
    let mut den = value.denom().clone();
    let two = BigInt::from(2u8);
    let five = BigInt::from(5u8);
    let (mut twos, mut fives) = (0usize, 0usize);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return fraction_string(value);
    }
    let places = twos.max(fives);
    let scaled = value * BigRational::from_integer(num_traits::pow(BigInt::from(10u8), places));
    insert_point(&scaled.to_integer(), places)
}

/// Decimal approximation with `significant` significant digits, rounded half
/// away from zero, trailing zeros trimmed.
pub fn decimal_string(value: &BigRational, significant: usize) -> String {
    assert!(significant > 0);
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let magnitude = value.abs();
    let (p, q) = (magnitude.numer(), magnitude.denom());

    // exponent e with 10^e <= |value| < 10^(e+1)
    let mut e = p.to_string().len() as i64 - q.to_string().len() as i64;
    let ten = BigRational::from_integer(BigInt::from(10u8));
    let pow10 = |k: i64| -> BigRational {
        if k >= 0 {
            num_traits::pow(ten.clone(), k as usize)
        } else {
            num_traits::pow(ten.recip(), (-k) as usize)
        }
    };
    while magnitude < pow10(e) {
        e -= 1;
    }
    while magnitude >= pow10(e + 1) {
        e += 1;
    }

    let shift = significant as i64 - 1 - e;
    let scaled = &magnitude * pow10(shift);
    let half = BigRational::new(BigInt::one(), BigInt::from(2u8));
    let mut digits = (scaled + half).floor().to_integer();
    let mut shift = shift;
    if digits.to_string().len() > significant {
        digits /= BigInt::from(10u8);
        shift -= 1;
    }

    let body = if shift <= 0 {
        let zeros = "0".repeat((-shift) as usize);
        format!("{digits}{zeros}")
    } else {
        insert_point(&digits, shift as usize)
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

fn insert_point(digits: &BigInt, places: usize) -> String {
    let (sign, raw) = match digits.sign() {
        Sign::Minus => ("-", (-digits).to_string()),
        _ => ("", digits.to_string()),
    };
    if places == 0 {
        return format!("{sign}{raw}");
    }
    let padded = if raw.len() <= places {
        format!("{}{}", "0".repeat(places - raw.len() + 1), raw)
    } else {
        raw
    };
    let (int_part, frac_part) = padded.split_at(padded.len() - places);
    let frac_part = frac_part.trim_end_matches('0');
    if frac_part.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

pub(crate) fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_parse_exactly() {
        assert_eq!(parse_exact("1.25").unwrap(), ratio(5, 4));
        assert_eq!(parse_exact("0.1").unwrap(), ratio(1, 10));
        assert_eq!(parse_exact(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_exact("3.").unwrap(), ratio(3, 1));
        assert_eq!(parse_exact("+2").unwrap(), ratio(2, 1));
        assert_eq!(parse_exact("2.5e2").unwrap(), ratio(250, 1));
        assert_eq!(parse_exact("15E-1").unwrap(), ratio(3, 2));
        assert_eq!(parse_exact("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_exact(" 0 ").unwrap(), ratio(0, 1));
    }

    #[test]
    fn rejects_bad_tokens() {
        for t in ["", "-1", "nan", "NaN", "inf", "-inf", "1.2.3", "1/0", "abc", "e5", ".", "1e", "3/-2"] {
            assert!(parse_exact(t).is_err(), "{t:?} should be rejected");
        }
    }

    #[test]
    fn fraction_form_keeps_denominator() {
        assert_eq!(fraction_string(&ratio(0, 1)), "0/1");
        assert_eq!(fraction_string(&ratio(2, 12)), "1/6");
        assert_eq!(fraction_string(&ratio(4, 2)), "2/1");
    }

    #[test]
    fn plain_form() {
        assert_eq!(plain_string(&ratio(2, 1)), "2");
        assert_eq!(plain_string(&ratio(5, 4)), "1.25");
        assert_eq!(plain_string(&ratio(1, 40)), "0.025");
        assert_eq!(plain_string(&ratio(1, 3)), "1/3");
        assert_eq!(plain_string(&ratio(0, 1)), "0");
        for r in [ratio(5, 4), ratio(1, 3), ratio(123_456, 1000), ratio(7, 1)] {
            assert_eq!(parse_exact(&plain_string(&r)).unwrap(), r);
        }
    }

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(decimal_string(&ratio(1, 6), 12), "0.166666666667");
        assert_eq!(decimal_string(&ratio(1, 14), 12), "0.0714285714286");
        assert_eq!(decimal_string(&ratio(0, 1), 12), "0");
        assert_eq!(decimal_string(&ratio(7, 3), 12), "2.33333333333");
        assert_eq!(decimal_string(&ratio(1, 2), 12), "0.5");
        assert_eq!(decimal_string(&ratio(123_456_789_012_345, 1), 12), "123456789012000");
        assert_eq!(decimal_string(&ratio(-1, 3), 4), "-0.3333");
        // rounding carries into a new digit
        assert_eq!(decimal_string(&ratio(99_999, 100_000), 3), "1");
        assert_eq!(decimal_string(&ratio(10, 1), 12), "10");
    }
}
