//! Exact rational accuracy parameter.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A rational accuracy parameter `num/den` in the open interval (0, 1),
/// always stored in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Epsilon {
    num: u64,
    den: u64,
}

impl Epsilon {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter(
                "epsilon denominator is zero".into(),
            ));
        }
        let g = num.gcd(&den);
        let (num, den) = match (num.checked_div(g), den.checked_div(g)) {
            (Some(n), Some(d)) => (n, d),
            _ => (num, den),
        };
        if num == 0 || num >= den {
            return Err(Error::InvalidParameter(format!(
                "epsilon {num}/{den} must lie strictly between 0 and 1"
            )));
        }
        Ok(Epsilon { num, den })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    /// `1 - ε` numerator over the same denominator.
    pub fn complement_num(&self) -> u64 {
        self.den - self.num
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `⌊x/ε⌋` for a non-negative integer `x`.
    pub fn floor_div(&self, x: u64) -> u64 {
        ((x as u128 * self.den as u128) / self.num as u128) as u64
    }

    /// `⌈1/ε⌉`.
    pub fn ceil_inverse(&self) -> u64 {
        self.den.div_ceil(self.num)
    }

    /// True when `ε ≤ a/b`.
    pub fn at_most(&self, a: u64, b: u64) -> bool {
        (self.num as u128) * (b as u128) <= (a as u128) * (self.den as u128)
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Epsilon {
    type Err = Error;

    /// Accepts `NUM/DEN` or a terminating decimal such as `0.3`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("cannot parse epsilon '{s}'"));
        if let Some((n, d)) = s.split_once('/') {
            let n: u64 = n.trim().parse().map_err(|_| bad())?;
            let d: u64 = d.trim().parse().map_err(|_| bad())?;
            return Epsilon::new(n, d);
        }
        let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
        if frac_part.len() > 18 || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let int: u64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let den = 10u64.pow(frac_part.len() as u32);
        let frac: u64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| bad())?
        };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(bad)?;
        Epsilon::new(num, den)
    }
}

impl Serialize for Epsilon {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Epsilon {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
