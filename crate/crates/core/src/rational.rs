//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Parses `p/q`, a plain integer, or a finite decimal such as `0.3` or `1e-5` into an exact value.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Domain(format!("not a rational number: {s:?}"));
    if let Some((mantissa, exp)) = s.split_once(['e', 'E']) {
        let exp: i32 = exp.parse().map_err(|_| bad())?;
        if exp.unsigned_abs() > 1000 {
            return Err(bad());
        }
        let scale = Rational::from_integer(num_traits::pow(
            BigInt::from(10),
            exp.unsigned_abs() as usize,
        ));
        let m = parse_rational(mantissa)?;
        return Ok(if exp >= 0 { m * scale } else { m / scale });
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(Error::Domain(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        let digits = format!("{whole_digits}{frac}");
        let mut num: BigInt = if digits.is_empty() {
            return Err(bad());
        } else {
            digits.parse().map_err(|_| bad())?
        };
        if negative {
            num = -num;
        }
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(num, den));
    }
    let v: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(v))
}

/// Renders `num/den`, or just `num` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    match r.to_f64() {
        Some(v) => v,
        None if r.is_negative() => f64::NEG_INFINITY,
        None => f64::INFINITY,
    }
}

pub(crate) fn in_unit_interval(t: &Rational) -> bool {
    !t.is_negative() && *t <= Rational::one()
}

/// Inserts `key` as an exact string and `key_f64` as its float mirror.
pub fn put_rational(map: &mut serde_json::Map<String, serde_json::Value>, key: &str, r: &Rational) {
    map.insert(key.to_string(), format_rational(r).into());
    map.insert(format!("{key}_f64"), to_f64(r).into());
}
