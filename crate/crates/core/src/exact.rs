//! Exact scalar helpers: rationals as `"p/q"` strings, integer vector utilities.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serializer};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qq(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_to_q(n: &BigInt) -> Q {
    Q::from_integer(n.clone())
}

pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_q(s: &str) -> Result<Q, String> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| format!("invalid rational `{s}`"))
    };
    match s.split_once('/') {
        None => Ok(Q::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(format!("zero denominator in `{s}`"));
            }
            Ok(Q::new(parse_int(n)?, d))
        }
    }
}

/// Scale a rational vector to the primitive integer vector on the same ray.
/// Returns `None` for the zero vector.
pub fn primitive_direction(v: &[Q]) -> Option<Vec<BigInt>> {
    if v.iter().all(Zero::is_zero) {
        return None;
    }
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * int_to_q(&lcm)).to_integer()).collect();
    Some(primitive_int(&ints))
}

/// Divide an integer vector by the gcd of its entries (sign preserved).
pub fn primitive_int(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn dot_q(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn to_q_vec(v: &[BigInt]) -> Vec<Q> {
    v.iter().map(int_to_q).collect()
}

pub fn abs_int(x: &BigInt) -> BigInt {
    x.abs()
}

pub mod q_string {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let text = String::deserialize(d)?;
        parse_q(&text).map_err(de::Error::custom)
    }
}

pub mod q_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&format_q(x))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|t| parse_q(t).map_err(de::Error::custom))
            .collect()
    }
}

pub mod q_mat {
    use super::*;
    use serde::Serialize;

    pub fn serialize<S: Serializer>(m: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(format_q).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Q>>, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(d)?;
        raw.iter()
            .map(|r| r.iter().map(|t| parse_q(t).map_err(de::Error::custom)).collect())
            .collect()
    }
}

pub mod int_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|t| {
                t.trim()
                    .parse::<BigInt>()
                    .map_err(|_| de::Error::custom(format!("invalid integer `{t}`")))
            })
            .collect()
    }
}
