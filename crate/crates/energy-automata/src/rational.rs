//! Exact rational scalars and the energy value lattice L = [0, ⊤]⊥.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use thiserror::Error;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// Renders `p` when the denominator is 1, else `p/q`.
pub fn render_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RatParseError {
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `p` or `p/q` into a rational in lowest terms.
pub fn parse_rat(s: &str) -> Result<Rat, RatParseError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n = BigInt::from_str(num).map_err(|_| RatParseError::Invalid(s.to_string()))?;
    let d = match den {
        Some(d) => BigInt::from_str(d).map_err(|_| RatParseError::Invalid(s.to_string()))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(RatParseError::ZeroDenominator(s.to_string()));
    }
    Ok(Rat::new(n, d))
}

/// An element of the complete lattice L: ⊥, a finite nonnegative rational, or ⊤.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnergyValue {
    Bottom,
    Finite(Rat),
    Top,
}

impl EnergyValue {
    pub fn finite(n: i64, d: i64) -> Self {
        EnergyValue::Finite(rat(n, d))
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, EnergyValue::Bottom)
    }

    pub fn is_top(&self) -> bool {
        matches!(self, EnergyValue::Top)
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            EnergyValue::Finite(r) => Some(r),
            _ => None,
        }
    }
}

impl PartialOrd for EnergyValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EnergyValue {
    fn cmp(&self, other: &Self) -> Ordering {
        use EnergyValue::*;
        match (self, other) {
            (Bottom, Bottom) | (Top, Top) => Ordering::Equal,
            (Bottom, _) => Ordering::Less,
            (_, Bottom) => Ordering::Greater,
            (Top, _) => Ordering::Greater,
            (_, Top) => Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for EnergyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnergyValue::Bottom => write!(f, "bottom"),
            EnergyValue::Finite(r) => write!(f, "{}", render_rat(r)),
            EnergyValue::Top => write!(f, "top"),
        }
    }
}

impl From<Rat> for EnergyValue {
    fn from(r: Rat) -> Self {
        debug_assert!(!r.is_negative());
        EnergyValue::Finite(r)
    }
}
