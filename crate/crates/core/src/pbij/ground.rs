use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Elements of every ground set are naturals starting at zero.
pub type Point = u32;

/// The carrier `X` of `I(X)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroundSet {
    /// `{0, .., n-1}`.
    Finite(u32),
    /// All naturals; elements of `I(N)` are carried in eventually-trivial form.
    Naturals,
}

impl GroundSet {
    pub fn contains(&self, p: Point) -> bool {
        match *self {
            GroundSet::Finite(n) => p < n,
            GroundSet::Naturals => true,
        }
    }

    pub fn check(&self, p: Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::PointOutOfRange {
                point: p,
                ground: *self,
            })
        }
    }

    pub fn size(&self) -> Option<u32> {
        match *self {
            GroundSet::Finite(n) => Some(n),
            GroundSet::Naturals => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, GroundSet::Finite(_))
    }
}

impl fmt::Display for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundSet::Finite(n) => write!(f, "Finite({n})"),
            GroundSet::Naturals => f.write_str("N"),
        }
    }
}

/// A finite or cofinite subset of the naturals.
///
/// Over a finite ground set only the `Finite` form is produced; `normalize`
/// converts a cofinite descriptor into its finite equivalent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SetDescriptor {
    Finite(BTreeSet<Point>),
    /// Everything except the listed points.
    Cofinite(BTreeSet<Point>),
}

impl SetDescriptor {
    pub fn empty() -> Self {
        SetDescriptor::Finite(BTreeSet::new())
    }

    pub fn all() -> Self {
        SetDescriptor::Cofinite(BTreeSet::new())
    }

    pub fn finite<I: IntoIterator<Item = Point>>(points: I) -> Self {
        SetDescriptor::Finite(points.into_iter().collect())
    }

    pub fn cofinite<I: IntoIterator<Item = Point>>(missing: I) -> Self {
        SetDescriptor::Cofinite(missing.into_iter().collect())
    }

    /// `[lo, hi)`.
    pub fn range(lo: Point, hi: Point) -> Self {
        SetDescriptor::Finite((lo..hi).collect())
    }

    pub fn contains(&self, p: Point) -> bool {
        match self {
            SetDescriptor::Finite(s) => s.contains(&p),
            SetDescriptor::Cofinite(c) => !c.contains(&p),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, SetDescriptor::Finite(_))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, SetDescriptor::Finite(s) if s.is_empty())
    }

    /// Rewrites the descriptor relative to `ground` and checks that finite
    /// members lie inside it.
    pub fn normalize(&self, ground: GroundSet) -> Result<SetDescriptor> {
        match (ground, self) {
            (GroundSet::Finite(n), SetDescriptor::Cofinite(c)) => {
                Ok(SetDescriptor::Finite((0..n).filter(|p| !c.contains(p)).collect()))
            }
            (_, SetDescriptor::Finite(s)) => {
                for &p in s {
                    ground.check(p)?;
                }
                Ok(self.clone())
            }
            (GroundSet::Naturals, SetDescriptor::Cofinite(_)) => Ok(self.clone()),
        }
    }

    pub fn complement(&self) -> SetDescriptor {
        match self {
            SetDescriptor::Finite(s) => SetDescriptor::Cofinite(s.clone()),
            SetDescriptor::Cofinite(c) => SetDescriptor::Finite(c.clone()),
        }
    }

    /// Complement inside `ground`.
    pub fn complement_in(&self, ground: GroundSet) -> SetDescriptor {
        match ground {
            GroundSet::Naturals => self.complement(),
            GroundSet::Finite(n) => SetDescriptor::Finite((0..n).filter(|&p| !self.contains(p)).collect()),
        }
    }

    pub fn union(&self, other: &SetDescriptor) -> SetDescriptor {
        use SetDescriptor::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a | b),
            (Finite(a), Cofinite(c)) | (Cofinite(c), Finite(a)) => Cofinite(c - a),
            (Cofinite(c), Cofinite(d)) => Cofinite(c & d),
        }
    }

    pub fn intersection(&self, other: &SetDescriptor) -> SetDescriptor {
        use SetDescriptor::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a & b),
            (Finite(a), Cofinite(c)) | (Cofinite(c), Finite(a)) => Finite(a - c),
            (Cofinite(c), Cofinite(d)) => Cofinite(c | d),
        }
    }

    pub fn symmetric_difference(&self, other: &SetDescriptor) -> SetDescriptor {
        use SetDescriptor::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a ^ b),
            (Finite(a), Cofinite(c)) | (Cofinite(c), Finite(a)) => Cofinite(a ^ c),
            (Cofinite(c), Cofinite(d)) => Finite(c ^ d),
        }
    }

    pub fn is_subset(&self, other: &SetDescriptor) -> bool {
        self.intersection(&other.complement()).is_empty()
    }

    /// The explicitly listed points (members when finite, non-members when cofinite).
    pub fn listed(&self) -> &BTreeSet<Point> {
        match self {
            SetDescriptor::Finite(s) | SetDescriptor::Cofinite(s) => s,
        }
    }
}

impl fmt::Display for SetDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list(f: &mut fmt::Formatter<'_>, s: &BTreeSet<Point>) -> fmt::Result {
            f.write_str("{")?;
            for (i, p) in s.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str("}")
        }
        match self {
            SetDescriptor::Finite(s) => list(f, s),
            SetDescriptor::Cofinite(c) => {
                f.write_str("co")?;
                list(f, c)
            }
        }
    }
}

impl Serialize for SetDescriptor {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(s: &SetDescriptor) -> Vec<Point> {
        (0..12).filter(|&p| s.contains(p)).collect()
    }

    #[test]
    fn boolean_operations_agree_pointwise() {
        let sets = [
            SetDescriptor::finite([1, 3, 5]),
            SetDescriptor::finite([]),
            SetDescriptor::cofinite([0, 3]),
            SetDescriptor::cofinite([]),
            SetDescriptor::cofinite([1, 2, 9]),
        ];
        for a in &sets {
            for b in &sets {
                for p in 0..12 {
                    assert_eq!(a.union(b).contains(p), a.contains(p) || b.contains(p));
                    assert_eq!(a.intersection(b).contains(p), a.contains(p) && b.contains(p));
                    assert_eq!(a.symmetric_difference(b).contains(p), a.contains(p) != b.contains(p));
                }
                let sub = brute(a).iter().all(|p| b.contains(*p)) && (a.is_finite() || !b.is_finite());
                assert_eq!(a.is_subset(b), sub, "{a} <= {b}");
            }
        }
    }

    #[test]
    fn normalize_on_finite_ground() {
        let s = SetDescriptor::cofinite([1]);
        assert_eq!(
            s.normalize(GroundSet::Finite(3)).unwrap(),
            SetDescriptor::finite([0, 2])
        );
        assert!(SetDescriptor::finite([4]).normalize(GroundSet::Finite(3)).is_err());
    }
}
