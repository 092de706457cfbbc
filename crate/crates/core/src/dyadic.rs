//! Exact nonnegative dyadic rationals `p / 2^q`.
//!
//! Every metric value in this crate is a dyadic: the disagreement sets of two
//! representable partial bijections are finite or cofinite, and the weights are
//! powers of two, so sums never leave this type.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// `numerator / 2^exponent`, kept in lowest terms (odd numerator, or zero over `2^0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    numerator: BigUint,
    exponent: u32,
}

impl Dyadic {
    pub fn new(numerator: BigUint, exponent: u32) -> Self {
        let mut d = Dyadic { numerator, exponent };
        d.reduce();
        d
    }

    pub fn zero() -> Self {
        Dyadic {
            numerator: BigUint::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            numerator: BigUint::one(),
            exponent: 0,
        }
    }

    pub fn from_integer(n: u64) -> Self {
        Dyadic::new(BigUint::from(n), 0)
    }

    /// `2^-k`.
    pub fn pow2_neg(k: u32) -> Self {
        Dyadic {
            numerator: BigUint::one(),
            exponent: k,
        }
    }

    /// Weight of the point `n` in the metric series: `2^-(n+1)`.
    pub fn weight(n: u32) -> Self {
        Dyadic::pow2_neg(n + 1)
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Numerator over the common denominator `2^exponent`; `exponent` must be at
    /// least `self.exponent()`.
    pub fn scaled_numerator(&self, exponent: u32) -> BigUint {
        assert!(exponent >= self.exponent, "cannot scale down a dyadic");
        &self.numerator << (exponent - self.exponent) as usize
    }

    pub fn double(&self) -> Self {
        if self.exponent == 0 {
            Dyadic::new(&self.numerator << 1usize, 0)
        } else {
            Dyadic::new(self.numerator.clone(), self.exponent - 1)
        }
    }

    /// `self - other`, or `None` when the result would be negative.
    pub fn checked_sub(&self, other: &Dyadic) -> Option<Dyadic> {
        let e = self.exponent.max(other.exponent);
        let a = self.scaled_numerator(e);
        let b = other.scaled_numerator(e);
        (a >= b).then(|| Dyadic::new(a - b, e))
    }

    fn reduce(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let tz = self.numerator.trailing_zeros().unwrap_or(0);
        let shift = tz.min(self.exponent as u64) as u32;
        if shift > 0 {
            self.numerator >>= shift as usize;
            self.exponent -= shift;
        }
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::zero()
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exponent.max(rhs.exponent);
        Dyadic::new(self.scaled_numerator(e) + rhs.scaled_numerator(e), e)
    }
}

impl Add for Dyadic {
    type Output = Dyadic;

    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = &*self + rhs;
    }
}

impl AddAssign for Dyadic {
    fn add_assign(&mut self, rhs: Dyadic) {
        *self = &*self + &rhs;
    }
}

impl Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Self {
        iter.fold(Dyadic::zero(), |acc, d| acc + d)
    }
}

impl<'a> Sum<&'a Dyadic> for Dyadic {
    fn sum<I: Iterator<Item = &'a Dyadic>>(iter: I) -> Self {
        iter.fold(Dyadic::zero(), |acc, d| &acc + d)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        self.scaled_numerator(e).cmp(&other.scaled_numerator(e))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.numerator, self.exponent)
    }
}

impl FromStr for Dyadic {
    type Err = Error;

    /// Accepts `p/2^q` (any, not necessarily reduced) or a bare integer `p`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let (num, exp) = match s.split_once('/') {
            Some((n, d)) => {
                let d = d.trim();
                let e = d
                    .strip_prefix("2^")
                    .ok_or_else(|| Error::parse(0, format!("expected denominator 2^q in `{s}`")))?;
                (n.trim(), e.trim())
            }
            None => (s, "0"),
        };
        let numerator = num
            .parse::<BigUint>()
            .map_err(|_| Error::parse(0, format!("bad numerator in `{s}`")))?;
        let exponent = exp
            .parse::<u32>()
            .map_err(|_| Error::parse(0, format!("bad exponent in `{s}`")))?;
        Ok(Dyadic::new(numerator, exponent))
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
