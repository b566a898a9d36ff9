//! Exact conversions between decimal text and `Ratio<u64>`.

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Rational = Ratio<u64>;

const MAX_FRACTION_DIGITS: usize = 18;

/// Parses a non-negative decimal such as `0.7`, `1`, or `.5` without going
/// through floating point.
pub fn parse_decimal(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Config(format!("not a non-negative decimal: {text:?}"));
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    if (int.is_empty() && frac.is_empty())
        || !int.bytes().all(|b| b.is_ascii_digit())
        || !frac.bytes().all(|b| b.is_ascii_digit())
        || frac.len() > MAX_FRACTION_DIGITS
    {
        return Err(bad());
    }
    let frac = frac.trim_end_matches('0');
    let denom = 10u64.pow(frac.len() as u32);
    let int: u64 = if int.is_empty() {
        0
    } else {
        int.parse().map_err(|_| bad())?
    };
    let frac_val: u64 = if frac.is_empty() {
        0
    } else {
        frac.parse().map_err(|_| bad())?
    };
    int.checked_mul(denom)
        .and_then(|v| v.checked_add(frac_val))
        .map(|numer| Rational::new(numer, denom))
        .ok_or_else(bad)
}

/// Parses a decimal threshold that must lie in `[0, 1]`.
pub fn parse_unit_interval(text: &str) -> Result<Rational> {
    let value = parse_decimal(text)?;
    if value > Rational::from_integer(1) {
        return Err(Error::Config(format!("{text} is outside [0, 1]")));
    }
    Ok(value)
}

/// Rounds `value` half-up to `digits` fractional digits.
fn fixed(value: Rational, digits: u32) -> String {
    let scale = 10u128.pow(digits);
    let numer = *value.numer() as u128;
    let denom = *value.denom() as u128;
    let scaled = (numer * scale * 2 + denom) / (denom * 2);
    let int = scaled / scale;
    let frac = scaled % scale;
    if digits == 0 {
        int.to_string()
    } else {
        format!("{int}.{frac:0width$}", width = digits as usize)
    }
}

/// Decimal text with at least six significant digits, used for metric
/// columns: `9/16` renders as `0.562500`, `1` as `1.000000`.
pub fn render_metric(value: Rational) -> String {
    if *value.numer() == 0 {
        return fixed(value, 6);
    }
    // one extra fractional digit per leading zero below 0.1
    let mut digits = 6;
    let mut probe = value;
    while probe < Rational::new(1, 10) && digits < 30 {
        probe *= Rational::from_integer(10);
        digits += 1;
    }
    fixed(value, digits)
}

/// Shortest exact decimal when the expansion terminates, otherwise 17
/// fractional digits. Used for SQL threshold literals.
pub fn render_literal(value: Rational) -> String {
    let mut d = *value.denom();
    let (mut twos, mut fives) = (0u32, 0u32);
    while d.is_multiple_of(2) {
        d /= 2;
        twos += 1;
    }
    while d.is_multiple_of(5) {
        d /= 5;
        fives += 1;
    }
    let digits = twos.max(fives);
    if d != 1 || digits > 17 {
        return fixed(value, 17);
    }
    let text = fixed(value, digits);
    if digits == 0 {
        text
    } else {
        text.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

pub fn to_f64(value: Rational) -> f64 {
    *value.numer() as f64 / *value.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_is_exact() {
        assert_eq!(parse_decimal("0.7").unwrap(), Rational::new(7, 10));
        assert_eq!(parse_decimal("0.5625").unwrap(), Rational::new(9, 16));
        assert_eq!(parse_decimal(".5").unwrap(), Rational::new(1, 2));
        assert_eq!(parse_decimal("1").unwrap(), Rational::from_integer(1));
        assert_eq!(parse_decimal("1.000").unwrap(), Rational::from_integer(1));
        for bad in ["", ".", "-0.1", "1e-3", "0.5x", "abc"] {
            assert!(parse_decimal(bad).is_err(), "{bad}");
        }
        assert!(parse_unit_interval("1.1").is_err());
        assert!(parse_unit_interval("1.0").is_ok());
    }

    #[test]
    fn metric_rendering() {
        assert_eq!(render_metric(Rational::new(9, 16)), "0.562500");
        assert_eq!(render_metric(Rational::new(3, 4)), "0.750000");
        assert_eq!(render_metric(Rational::new(1, 3)), "0.333333");
        assert_eq!(render_metric(Rational::new(2, 3)), "0.666667");
        assert_eq!(render_metric(Rational::from_integer(1)), "1.000000");
        assert_eq!(render_metric(Rational::from_integer(0)), "0.000000");
        assert_eq!(render_metric(Rational::new(1, 100_000)), "0.0000100000");
        assert_eq!(render_metric(Rational::new(1, 10)), "0.100000");
    }

    #[test]
    fn literal_rendering() {
        assert_eq!(render_literal(Rational::new(7, 10)), "0.7");
        assert_eq!(render_literal(Rational::new(1, 2)), "0.5");
        assert_eq!(render_literal(Rational::new(9, 16)), "0.5625");
        assert_eq!(render_literal(Rational::from_integer(1)), "1");
        assert_eq!(render_literal(Rational::from_integer(0)), "0");
        assert_eq!(render_literal(Rational::new(1, 3)), "0.33333333333333333");
    }
}
