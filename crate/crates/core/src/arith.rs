//! Rational scalars and additive valuations.
//!
//! Every norm in this crate is stored as an additive valuation
//! `v = -log ||.||`, so larger values mean smaller elements and the zero
//! vector has valuation `+inf`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in canonical form.
pub type Rat = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-3/4"`, `" 1/2 "` or a plain decimal such as `"-0.125"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not a rational number: {s:?}"));
    if let Some((whole, frac)) = s.split_once('.') {
        let digits_ok = |t: &str| t.chars().all(|c| c.is_ascii_digit());
        let (neg, whole) = match whole.strip_prefix('-') {
            Some(w) => (true, w),
            None => (false, whole.strip_prefix('+').unwrap_or(whole)),
        };
        if !digits_ok(whole) || !digits_ok(frac) || (whole.is_empty() && frac.is_empty()) {
            return Err(bad());
        }
        let numer: BigInt = format!("{whole}{frac}").parse().map_err(|_| bad())?;
        let denom = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rat::new(numer, denom);
        return Ok(if neg { -r } else { r });
    }
    Rat::from_str(s).map_err(|_| bad())
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact binary value of a finite float.
pub fn from_f64(x: f64) -> Result<Rat> {
    Rat::from_float(x).ok_or_else(|| Error::invalid(format!("non-finite number {x}")))
}

pub fn min_rat<'a>(a: &'a Rat, b: &'a Rat) -> &'a Rat {
    if a <= b {
        a
    } else {
        b
    }
}

pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    use num_integer::Integer;
    values.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// An additive valuation: a rational, or `+inf` for the zero element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LogVal {
    Finite(Rat),
    Infinite,
}

impl LogVal {
    pub fn zero() -> Self {
        LogVal::Finite(Rat::zero())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, LogVal::Infinite)
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            LogVal::Finite(r) => Some(r),
            LogVal::Infinite => None,
        }
    }

    pub fn into_finite(self) -> Option<Rat> {
        match self {
            LogVal::Finite(r) => Some(r),
            LogVal::Infinite => None,
        }
    }

    pub fn min(self, other: LogVal) -> LogVal {
        std::cmp::min(self, other)
    }

    pub fn add_rat(&self, r: &Rat) -> LogVal {
        match self {
            LogVal::Finite(v) => LogVal::Finite(v + r),
            LogVal::Infinite => LogVal::Infinite,
        }
    }

    pub fn cmp_rat(&self, r: &Rat) -> Ordering {
        match self {
            LogVal::Finite(v) => v.cmp(r),
            LogVal::Infinite => Ordering::Greater,
        }
    }
}

impl From<Rat> for LogVal {
    fn from(r: Rat) -> Self {
        LogVal::Finite(r)
    }
}

impl Add for LogVal {
    type Output = LogVal;
    fn add(self, rhs: LogVal) -> LogVal {
        match (self, rhs) {
            (LogVal::Finite(a), LogVal::Finite(b)) => LogVal::Finite(a + b),
            _ => LogVal::Infinite,
        }
    }
}

impl Add<&LogVal> for &LogVal {
    type Output = LogVal;
    fn add(self, rhs: &LogVal) -> LogVal {
        match (self, rhs) {
            (LogVal::Finite(a), LogVal::Finite(b)) => LogVal::Finite(a + b),
            _ => LogVal::Infinite,
        }
    }
}

/// `inf - r = inf`; subtracting an infinite value is not meaningful.
impl Sub<&Rat> for &LogVal {
    type Output = LogVal;
    fn sub(self, rhs: &Rat) -> LogVal {
        match self {
            LogVal::Finite(a) => LogVal::Finite(a - rhs),
            LogVal::Infinite => LogVal::Infinite,
        }
    }
}

impl Neg for &LogVal {
    type Output = Option<Rat>;
    fn neg(self) -> Option<Rat> {
        self.finite().map(|r| -r)
    }
}

impl fmt::Display for LogVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogVal::Finite(r) => write!(f, "{r}"),
            LogVal::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for LogVal {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" | "infinity" => Ok(LogVal::Infinite),
            other => parse_rat(other).map(LogVal::Finite),
        }
    }
}

/// Serde helpers: rationals travel as strings (`"3/4"`) and are also
/// accepted as bare integers.
pub mod serde_rat {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum RatRepr {
        Int(i64),
        Text(String),
    }

    impl RatRepr {
        fn into_rat<E: de::Error>(self) -> std::result::Result<Rat, E> {
            match self {
                RatRepr::Int(n) => Ok(int(n)),
                RatRepr::Text(s) => parse_rat(&s).map_err(E::custom),
            }
        }
    }

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
        RatRepr::deserialize(d)?.into_rat()
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&r.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rat>, D::Error> {
            Vec::<RatRepr>::deserialize(d)?
                .into_iter()
                .map(RatRepr::into_rat)
                .collect()
        }
    }

    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
            match v {
                Some(r) => s.collect_str(r),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Rat>, D::Error> {
            Option::<RatRepr>::deserialize(d)?.map(RatRepr::into_rat).transpose()
        }
    }
}
