//! Extended integers `Z ∪ {±∞}` used as exponent tail sets.
//!
//! A finite value `v` stands for the set `Z_{≥v}`; `PosInf` is the empty set
//! and `NegInf` is all of `Z`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtInt {
    NegInf,
    Fin(i64),
    PosInf,
}

pub use ExtInt::{Fin, NegInf, PosInf};

impl ExtInt {
    pub const ZERO: ExtInt = Fin(0);

    pub fn finite(self) -> Option<i64> {
        match self {
            Fin(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Fin(_))
    }

    /// Minkowski sum of tail sets. The empty set absorbs, so `+∞ + −∞ = +∞`.
    pub fn tropical_add(self, rhs: ExtInt) -> ExtInt {
        match (self, rhs) {
            (PosInf, _) | (_, PosInf) => PosInf,
            (NegInf, _) | (_, NegInf) => NegInf,
            (Fin(a), Fin(b)) => Fin(a + b),
        }
    }

    /// `(self)_+` on finite values; infinities map to themselves except `−∞ ↦ 0`.
    pub fn positive_part(self) -> ExtInt {
        match self {
            NegInf => Fin(0),
            Fin(v) => Fin(v.max(0)),
            PosInf => PosInf,
        }
    }
}

impl Default for ExtInt {
    fn default() -> Self {
        PosInf
    }
}

impl From<i64> for ExtInt {
    fn from(v: i64) -> Self {
        Fin(v)
    }
}

impl Add for ExtInt {
    type Output = ExtInt;
    fn add(self, rhs: ExtInt) -> ExtInt {
        self.tropical_add(rhs)
    }
}

impl Add<i64> for ExtInt {
    type Output = ExtInt;
    fn add(self, rhs: i64) -> ExtInt {
        self.tropical_add(Fin(rhs))
    }
}

impl Sub<i64> for ExtInt {
    type Output = ExtInt;
    fn sub(self, rhs: i64) -> ExtInt {
        self.tropical_add(Fin(-rhs))
    }
}

impl Neg for ExtInt {
    type Output = ExtInt;
    fn neg(self) -> ExtInt {
        match self {
            NegInf => PosInf,
            Fin(v) => Fin(-v),
            PosInf => NegInf,
        }
    }
}

impl PartialEq<i64> for ExtInt {
    fn eq(&self, other: &i64) -> bool {
        *self == Fin(*other)
    }
}

impl PartialOrd<i64> for ExtInt {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Fin(*other)))
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NegInf => f.pad("-inf"),
            Fin(v) => f.pad(&v.to_string()),
            PosInf => f.pad("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not an extended integer: {0:?}")]
pub struct ParseExtIntError(pub String);

impl FromStr for ExtInt {
    type Err = ParseExtIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "inf" | "+inf" | "∞" => Ok(PosInf),
            "-inf" | "−∞" | "Z" | "ℤ" => Ok(NegInf),
            t => t
                .parse::<i64>()
                .map(Fin)
                .map_err(|_| ParseExtIntError(s.to_string())),
        }
    }
}

/// Finite values are JSON numbers; the infinities are the strings `"inf"` and `"-inf"`.
impl serde::Serialize for ExtInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Fin(v) => s.serialize_i64(*v),
            PosInf => s.serialize_str("inf"),
            NegInf => s.serialize_str("-inf"),
        }
    }
}

impl<'de> serde::Deserialize<'de> for ExtInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(Fin(v)),
            Raw::Str(s) => match s.as_str() {
                "inf" => Ok(PosInf),
                "-inf" => Ok(NegInf),
                _ => Err(serde::de::Error::custom(format!("expected \"inf\" or \"-inf\", got {s:?}"))),
            },
        }
    }
}
