//! Exact rationals. Everything that is a share or a density goes through here.

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational in lowest terms with a positive denominator.
pub type Rational = num_rational::Ratio<i64>;

/// `1 + 1/2 + ... ` style sums over small domination counts are accumulated
/// over this common denominator (lcm of 1..=9) and converted once.
pub const SHARE_DENOMINATOR: u32 = 2520;

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}

/// Parses `p/q`, `p` or a finite decimal such as `3.5`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::format(format!("not a rational number: {text:?}"));
    if let Some((p, q)) = text.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole: i64 = if whole.is_empty() || whole == "-" { 0 } else { whole.parse().map_err(|_| bad())? };
        let scale = 10_i64.pow(frac.len() as u32);
        let frac: i64 = frac.parse().map_err(|_| bad())?;
        let magnitude = whole.abs() * scale + frac;
        return Ok(Rational::new(if negative { -magnitude } else { magnitude }, scale));
    }
    text.parse::<i64>().map(Rational::from_integer).map_err(|_| bad())
}

/// Renders `value` as a decimal with `digits` significant digits.
pub fn to_decimal(value: &Rational, digits: usize) -> String {
    let x = value.numer().to_f64().unwrap_or(f64::NAN) / value.denom().to_f64().unwrap_or(f64::NAN);
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (digits as i32 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Converts an accumulated `numerator / SHARE_DENOMINATOR` into a rational.
pub fn from_share_units(units: u32) -> Rational {
    Rational::new(units as i64, SHARE_DENOMINATOR as i64)
}

/// Smallest integer `>= value`.
pub fn ceil_to_usize(value: &Rational) -> usize {
    if value.is_negative() || value.is_zero() {
        return 0;
    }
    let (q, r) = value.numer().div_rem(value.denom());
    (q + i64::from(!r.is_zero())) as usize
}

/// Serde adapter that writes rationals as `"p/q"` strings.
pub mod as_string {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Same as [`as_string`] for optional values.
pub mod opt_as_string {
    use super::Rational;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }
}
