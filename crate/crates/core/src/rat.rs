//! Exact rational scalars and their text forms.
//!
//! All combinatorial computations in this crate run on arbitrary-precision
//! rationals; floating point only appears inside the closed-form bound
//! evaluators. Text form is `num/den` (or a bare integer when the denominator
//! is 1); parsing additionally accepts terminating decimals such as `0.25`,
//! which are exact by construction.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

/// Shorthand constructor used pervasively in tests and generators.
pub fn q(num: i64, den: i64) -> Q {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn fmt(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Q) -> f64 {
    // BigRational::to_f64 is None only on overflow, which our bounded inputs
    // cannot reach; fall back to a lossy division just in case.
    x.to_f64().unwrap_or_else(|| {
        x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
    })
}

/// Parses `a/b`, a bare integer, or a terminating decimal.
pub fn parse(s: &str) -> Result<Q> {
    let t = s.trim();
    let bad = || Error::BadRational(s.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.trim_start().starts_with('-');
        let int_part: BigInt = if int == "-" || int.is_empty() {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part: BigInt = frac.parse().map_err(|_| bad())?;
        let mut num = int_part.abs() * &scale + frac_part;
        if negative {
            num = -num;
        }
        return Ok(BigRational::new(num, scale));
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// Largest dyadic `r = k / 2^bits` with `r^2 <= x`; requires `x >= 0`.
///
/// Used to scale randomly drawn vectors into a norm ball while keeping every
/// constraint check exact.
pub fn sqrt_floor_dyadic(x: &Q, bits: u32) -> Q {
    assert!(!x.is_negative(), "sqrt of a negative rational");
    let two_pow = BigInt::one() << bits;
    // floor(sqrt(x * 4^bits)) = floor(sqrt(num * 4^bits / den))
    let scaled = x.numer() * (&two_pow * &two_pow) / x.denom();
    let root = scaled.sqrt();
    let mut r = BigRational::new(root, two_pow);
    // Integer sqrt floors the scaled value, which can still round the
    // quotient up; nudge down until exact.
    while &r * &r > *x {
        r -= BigRational::new(BigInt::one(), BigInt::one() << bits);
    }
    r
}

/// Serde adapter: rationals as `num/den` strings (integers allowed on input).
pub mod serde_q {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(i) => Ok(qi(i)),
            Raw::Str(s) => parse(&s).map_err(de::Error::custom),
        }
    }
}

/// Serde adapter for optional rationals.
pub mod serde_q_opt {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&fmt(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Q>, D::Error> {
        let raw: Option<String> = Option::deserialize(d)?;
        match raw {
            None => Ok(None),
            Some(s) => parse(&s).map(Some).map_err(serde::de::Error::custom),
        }
    }
}

/// Serde adapter for vectors of rationals.
pub mod serde_q_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(xs.iter().map(fmt))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter()
            .map(|s| parse(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(parse("3/4").unwrap(), q(3, 4));
        assert_eq!(parse("-7").unwrap(), qi(-7));
        assert_eq!(parse("0.25").unwrap(), q(1, 4));
        assert_eq!(parse("-1.5").unwrap(), q(-3, 2));
        assert_eq!(parse("0.51").unwrap(), q(51, 100));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "1/0", "1e3", "0.2.5", "abc", "1/ b"] {
            assert!(parse(s).is_err(), "should reject {s:?}");
        }
    }

    #[test]
    fn formats_round_trip() {
        for s in ["3/4", "-2", "0", "17/8"] {
            let v = parse(s).unwrap();
            assert_eq!(parse(&fmt(&v)).unwrap(), v);
        }
    }

    #[test]
    fn dyadic_sqrt_floor_is_sound() {
        for (n, d) in [(2i64, 1i64), (1, 2), (9, 4), (7, 5), (0, 1)] {
            let x = q(n, d);
            let r = sqrt_floor_dyadic(&x, 20);
            assert!(&r * &r <= x, "r^2 must not exceed x for {n}/{d}");
            let step = q(1, 1 << 20);
            let r2 = &r + &step;
            assert!(&r2 * &r2 > x, "floor must be tight for {n}/{d}");
        }
    }
}
