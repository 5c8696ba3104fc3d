use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact::{self, Q};

/// A point of the character sphere: a primitive integer direction.
///
/// Antipodes are distinct rays; no sign normalization is applied.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalRay {
    direction: Vec<BigInt>,
}

impl RationalRay {
    /// Ray through a nonzero rational vector.
    pub fn from_rational(v: &[Q]) -> Option<Self> {
        exact::primitive_direction(v).map(|direction| RationalRay { direction })
    }

    pub fn from_ints(v: &[BigInt]) -> Option<Self> {
        if v.iter().all(Zero::is_zero) {
            return None;
        }
        Some(RationalRay {
            direction: exact::primitive_int(v),
        })
    }

    /// Convenience for tests and fixtures. Panics on the zero vector.
    pub fn new(v: &[i64]) -> Self {
        let ints: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        RationalRay::from_ints(&ints).expect("nonzero direction")
    }

    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    pub fn direction(&self) -> &[BigInt] {
        &self.direction
    }

    pub fn to_q(&self) -> Vec<Q> {
        exact::to_q_vec(&self.direction)
    }

    pub fn antipode(&self) -> Self {
        RationalRay {
            direction: self.direction.iter().map(|x| -x).collect(),
        }
    }

    /// Split into the rays of the two coordinate blocks (`None` when a block
    /// is zero).
    pub fn split(&self, left: usize) -> (Option<RationalRay>, Option<RationalRay>) {
        let (u, v) = self.direction.split_at(left);
        (RationalRay::from_ints(u), RationalRay::from_ints(v))
    }
}

impl fmt::Display for RationalRay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.direction.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for RationalRay {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        exact::int_vec::serialize(&self.direction, s)
    }
}

impl<'de> Deserialize<'de> for RationalRay {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let v = exact::int_vec::deserialize(d)?;
        RationalRay::from_ints(&v).ok_or_else(|| D::Error::custom("zero vector is not a ray"))
    }
}
