//! Exact rationals and their textual forms.
//!
//! Every number in the workbench is a [`Q`]; on disk a rational is either a
//! JSON integer or a `"p/q"` string in lowest terms.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Formats `x` as `n` or `p/q`.
pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `n`, `-n`, `p/q` (signs allowed on either part).
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(num.strip_prefix('+').unwrap_or(num)).map_err(|_| bad())?;
    let d = BigInt::from_str(den).map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Q::new(n, d))
}

/// Converts an integral rational to `i64`, if it fits.
pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

/// Serde adapter: integers become JSON numbers when they fit in an `i64`,
/// everything else becomes a `"p/q"` string.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        match to_i64(x) {
            Some(n) => s.serialize_i64(n),
            None => s.serialize_str(&format_q(x)),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        d.deserialize_any(QVisitor)
    }

    pub(crate) struct QVisitor;

    impl<'de> Visitor<'de> for QVisitor {
        type Value = Q;

        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            f.write_str("an integer or a \"p/q\" string")
        }

        fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Q, E> {
            Ok(q(v))
        }

        fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Q, E> {
            Ok(Q::from_integer(BigInt::from(v)))
        }

        fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Q, E> {
            Err(E::custom(format!("non-exact number {v}; use a \"p/q\" string")))
        }

        fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Q, E> {
            parse_q(v).map_err(E::custom)
        }
    }
}

/// Serde adapter for `Vec<Q>`.
pub mod serde_qvec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::Deserialize;

    #[derive(Deserialize)]
    struct Wrap(#[serde(with = "super::serde_q")] Q);

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            match to_i64(x) {
                Some(n) => seq.serialize_element(&n)?,
                None => seq.serialize_element(&format_q(x))?,
            }
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let v: Vec<Wrap> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|w| w.0).collect())
    }
}

/// A rational that (de)serializes with the [`serde_q`] convention; handy
/// inside nested containers.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct QJson(#[serde(with = "serde_q")] pub Q);

/// JSON value for a rational, following the same convention as [`serde_q`].
pub fn to_json(x: &Q) -> serde_json::Value {
    match to_i64(x) {
        Some(n) => serde_json::Value::from(n),
        None => serde_json::Value::from(format_q(x)),
    }
}

pub fn from_json(v: &serde_json::Value) -> Result<Q> {
    match v {
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(q(i))
            } else if let Some(u) = n.as_u64() {
                Ok(Q::from_integer(BigInt::from(u)))
            } else {
                Err(Error::Parse(format!("non-exact number {n}")))
            }
        }
        serde_json::Value::String(s) => parse_q(s),
        other => Err(Error::Parse(format!("expected a rational, got {other}"))),
    }
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("3").unwrap(), q(3));
        assert_eq!(parse_q("-6/4").unwrap(), qf(-3, 2));
        assert_eq!(format_q(&qf(-3, 2)), "-3/2");
        assert_eq!(format_q(&q(7)), "7");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
    }

    #[test]
    fn json_round_trip() {
        for x in [q(0), q(-5), qf(7, 3), qf(-1, 9)] {
            let v = to_json(&x);
            assert_eq!(from_json(&v).unwrap(), x);
        }
        let big = parse_q("123456789012345678901234567890").unwrap();
        assert_eq!(from_json(&to_json(&big)).unwrap(), big);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 5), BigInt::from(0));
        assert_eq!(factorial(6), BigInt::from(720));
    }
}
