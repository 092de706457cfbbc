use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pbij::Point;

/// `offset` or `k + offset`, where `k` is the sequence index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Affine {
    pub moving: bool,
    pub offset: i64,
}

impl Affine {
    pub fn constant(c: Point) -> Self {
        Affine {
            moving: false,
            offset: i64::from(c),
        }
    }

    pub fn index_plus(offset: i64) -> Self {
        Affine { moving: true, offset }
    }

    pub fn as_constant(&self) -> Option<Point> {
        (!self.moving).then_some(self.offset as Point)
    }

    /// The value at index `k`; `None` when it would be negative.
    pub fn at(&self, k: u32) -> Option<Point> {
        let v = if self.moving { i64::from(k) } else { 0 } + self.offset;
        Point::try_from(v).ok()
    }

    pub fn magnitude(&self) -> u32 {
        self.offset.unsigned_abs().min(u64::from(u32::MAX / 4)) as u32
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.moving, self.offset) {
            (false, c) => write!(f, "{c}"),
            (true, 0) => f.write_str("k"),
            (true, c) if c > 0 => write!(f, "k+{c}"),
            (true, c) => write!(f, "k-{}", -c),
        }
    }
}

impl FromStr for Affine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::parse(0, format!("expected `c`, `k`, `k+c` or `k-c`, found `{s}`"));
        if let Some(rest) = compact.strip_prefix('k') {
            let offset = match rest.chars().next() {
                None => 0,
                Some('+') => rest[1..].parse::<i64>().map_err(|_| bad())?,
                Some('-') => -rest[1..].parse::<i64>().map_err(|_| bad())?,
                Some(_) => return Err(bad()),
            };
            Ok(Affine::index_plus(offset))
        } else {
            let c: Point = compact.parse().map_err(|_| bad())?;
            Ok(Affine::constant(c))
        }
    }
}

impl Serialize for Affine {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Affine {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(Point),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(c) => Ok(Affine::constant(c)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}
