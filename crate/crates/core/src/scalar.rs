//! Scalar arithmetic: exact rationals for verification, `f64` for speed.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Exact rational scalar used for all stored data.
pub type Rational = num_rational::BigRational;

/// Arithmetic mode of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float { tolerance: f64 },
}

impl Mode {
    pub const DEFAULT_TOLERANCE: f64 = 1e-9;

    pub fn float() -> Self {
        Mode::Float {
            tolerance: Self::DEFAULT_TOLERANCE,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float { .. } => "float",
        }
    }
}

impl Default for Mode {
    fn default() -> Self {
        Mode::Exact
    }
}

/// A value produced in either arithmetic mode.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Exact(Rational),
    Float(f64),
}

impl Value {
    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(r) => to_f64(r),
            Value::Float(x) => *x,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(r) => f.write_str(&format_rational(r)),
            Value::Float(x) => write!(f, "{x:e}"),
        }
    }
}

/// Numeric operations the transportation solver needs from its scalar.
pub trait Scalar: Clone + PartialOrd + fmt::Debug + Signed + num_traits::NumAssign {
    fn from_rational(r: &Rational) -> Self;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl Scalar for f64 {
    fn from_rational(r: &Rational) -> Self {
        to_f64(r)
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// `2^k` for any integer `k`.
pub fn pow2(k: i64) -> Rational {
    let mag = BigInt::one() << k.unsigned_abs();
    if k >= 0 {
        Rational::from_integer(mag)
    } else {
        Rational::new(BigInt::one(), mag)
    }
}

/// Smallest integer `k` with `2^k >= r`. `r` must be positive.
pub fn ceil_log2(r: &Rational) -> i64 {
    assert!(r.is_positive(), "ceil_log2 of non-positive value");
    // bit-length difference gives an estimate within one of the answer
    let est = r.numer().bits() as i64 - r.denom().bits() as i64;
    let mut k = est - 1;
    while pow2(k) < *r {
        k += 1;
    }
    while pow2(k - 1) >= *r {
        k -= 1;
    }
    k
}

/// Largest integer `k` with `2^k <= r`. `r` must be positive.
pub fn floor_log2(r: &Rational) -> i64 {
    let k = ceil_log2(r);
    if pow2(k) == *r {
        k
    } else {
        k - 1
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"`, integers and decimals (optionally with an exponent) exactly.
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let s = text.trim();
    let bad = || Error::BadScalar(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: String = format!("{whole}{frac}");
    let numer = BigInt::from_str(if all.is_empty() { "0" } else { &all }).map_err(|_| bad())?;
    let scale = exponent - frac.len() as i64;
    let ten = BigInt::from(10u32);
    let mut value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Parses a JSON scalar: a string in any accepted text form, or a number.
pub fn rational_from_json(v: &serde_json::Value) -> Result<Rational, Error> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(Error::BadScalar(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_forms() {
        assert_eq!(parse_rational("3/4").unwrap(), ratio(3, 4));
        assert_eq!(parse_rational("-6/8").unwrap(), ratio(-3, 4));
        assert_eq!(parse_rational("0.1").unwrap(), ratio(1, 10));
        assert_eq!(parse_rational("-2.50").unwrap(), ratio(-5, 2));
        assert_eq!(parse_rational("2e-3").unwrap(), ratio(1, 500));
        assert_eq!(parse_rational("1.5E2").unwrap(), int(150));
        assert_eq!(parse_rational(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        for bad in ["", "a", "1/0", "1..2", "-", "1e"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn json_numbers_parse_exactly() {
        let v: serde_json::Value = serde_json::from_str("[0.1, 2, \"1/3\"]").unwrap();
        let parsed: Vec<_> = v
            .as_array()
            .unwrap()
            .iter()
            .map(|x| rational_from_json(x).unwrap())
            .collect();
        assert_eq!(parsed, vec![ratio(1, 10), int(2), ratio(1, 3)]);
    }

    #[test]
    fn log2_bounds() {
        assert_eq!(ceil_log2(&int(1)), 0);
        assert_eq!(ceil_log2(&int(3)), 2);
        assert_eq!(ceil_log2(&int(4)), 2);
        assert_eq!(ceil_log2(&ratio(1, 3)), -1);
        assert_eq!(ceil_log2(&ratio(1, 4)), -2);
        assert_eq!(floor_log2(&int(3)), 1);
        assert_eq!(floor_log2(&ratio(1, 3)), -2);
        assert_eq!(floor_log2(&ratio(1, 4)), -2);
        assert_eq!(pow2(-3), ratio(1, 8));
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(format_rational(&ratio(6, 4)), "3/2");
        assert_eq!(format_rational(&int(-2)), "-2");
    }
}
