//! Exact rational coefficients.
//!
//! Coefficients are arbitrary-precision fractions kept in lowest terms with a
//! positive denominator. The textual form is `p`, `-p` or `p/q`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use num_rational::BigRational as Rational;

use crate::error::ParseError;

/// Builds `num/den` in lowest terms. Panics if `den` is zero.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses a decimal coefficient: `p`, `-p`, `+p` or `p/q` (with optional sign).
pub fn parse_rational(token: &str) -> Result<Rational, ParseError> {
    let bad = || ParseError::MalformedCoefficient {
        token: token.to_string(),
    };
    let (num, den) = match token.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (token, None),
    };
    let num = parse_signed(num).ok_or_else(bad)?;
    let den = match den {
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let d: BigInt = d.parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            d
        }
        None => BigInt::one(),
    };
    Ok(Rational::new(num, den))
}

fn parse_signed(text: &str) -> Option<BigInt> {
    let digits = text.strip_prefix(['-', '+']).unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// Renders `p` for integers and `p/q` otherwise.
pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_three_shapes() {
        assert_eq!(parse_rational("7").unwrap(), integer(7));
        assert_eq!(parse_rational("-7").unwrap(), integer(-7));
        assert_eq!(parse_rational("-21/8").unwrap(), ratio(-21, 8));
        assert_eq!(parse_rational("10/4").unwrap(), ratio(5, 2));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "-", "1/", "/2", "1/0", "1.5", "a", "1/-2", "--1"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn formats_in_lowest_terms() {
        assert_eq!(format_rational(&ratio(10, 4)), "5/2");
        assert_eq!(format_rational(&ratio(-147, 16)), "-147/16");
        assert_eq!(format_rational(&integer(0)), "0");
        assert_eq!(format_rational(&ratio(6, -3)), "-2");
    }
}
