//! Finitely described sequences in `I(N)`.
//!
//! A sequence is an explicit prefix followed by a tail rule. Indices are
//! absolute: `f_i` is `prefix[i]` while `i < prefix.len()`, and the tail rule
//! evaluated at `k = i` afterwards.
//!
//! Schedule tails are affine families: every pair and identity block is
//! written with coordinates `c` or `k + c`. For such a family every point has
//! an eventual fate that is reached at an index computable from the offsets,
//! and all points above the largest offset behave alike. This is what makes
//! convergence and Cauchyness decidable from the description.

mod affine;
mod generator;

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use affine::Affine;
pub use generator::{generate, GENERATORS};

use crate::error::{Error, Result};
use crate::pbij::{GroundSet, PartialBijection, Point, SetDescriptor, Tail};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchedulePair {
    pub from: Affine,
    pub to: Affine,
}

/// The identity on `[start, end)`, or on `[start, inf)` when `end` is absent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityBlock {
    pub start: Affine,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<Affine>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    #[serde(default)]
    pub pairs: Vec<SchedulePair>,
    #[serde(default)]
    pub identity: Vec<IdentityBlock>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum SequenceTail {
    Constant {
        value: PartialBijection,
    },
    Schedule(Schedule),
    Generator {
        rule: String,
        horizon: u32,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        inverted: bool,
    },
}

/// A declared limit: a partial bijection, or `"diverges"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Declared {
    Limit(PartialBijection),
    Diverges,
}

impl Serialize for Declared {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Declared::Limit(f) => f.serialize(s),
            Declared::Diverges => s.serialize_str("diverges"),
        }
    }
}

impl<'de> Deserialize<'de> for Declared {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s.trim() == "diverges" {
            Ok(Declared::Diverges)
        } else {
            s.parse().map(Declared::Limit).map_err(serde::de::Error::custom)
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau1: Option<Declared>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau2: Option<Declared>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub taupp: Option<Declared>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default)]
    pub prefix: Vec<PartialBijection>,
    pub tail: SequenceTail,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Expected>,
}

/// Where a point ends up along the sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Fate {
    MapsTo(Point),
    Outside,
    /// In the domain from some index on, with a different value at every index.
    Unstable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PointFate {
    pub point: Point,
    /// From this index on the point has its eventual status.
    pub settle: u32,
    pub fate: Fate,
}

impl SequenceSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: SequenceSpec = serde_json::from_str(text).map_err(|e| Error::InvalidSequence(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::InvalidSequence(format!("{}: {e}", path.display())))?;
        SequenceSpec::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("specs serialize")
    }

    pub fn constant(f: PartialBijection) -> Self {
        SequenceSpec {
            name: None,
            description: None,
            prefix: Vec::new(),
            tail: SequenceTail::Constant { value: f },
            expected: None,
        }
    }

    pub fn schedule(prefix: Vec<PartialBijection>, schedule: Schedule) -> Self {
        SequenceSpec {
            name: None,
            description: None,
            prefix,
            tail: SequenceTail::Schedule(schedule),
            expected: None,
        }
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| "<unnamed>".into())
    }

    /// Index of the first tail element.
    pub fn first(&self) -> u32 {
        self.prefix.len() as u32
    }

    pub fn is_certified(&self) -> bool {
        !matches!(self.tail, SequenceTail::Generator { .. })
    }

    /// Largest constant or offset magnitude in the tail description.
    pub fn offset_bound(&self) -> u32 {
        match &self.tail {
            SequenceTail::Constant { value } => value.support_bound(),
            SequenceTail::Schedule(s) => s
                .pairs
                .iter()
                .flat_map(|p| [p.from, p.to])
                .chain(s.identity.iter().flat_map(|b| std::iter::once(b.start).chain(b.end)))
                .map(|a| a.magnitude())
                .max()
                .unwrap_or(0),
            SequenceTail::Generator { .. } => 0,
        }
    }

    /// Index from which every pairwise relation between the tail's affine
    /// coordinates has its generic form.
    pub fn generic_index(&self) -> u32 {
        self.first().max(2 * self.offset_bound() + 2)
    }

    /// Points at or above this bound all share the eventual fate of the bound itself.
    pub fn generic_point(&self) -> Point {
        self.offset_bound() + 1
    }

    pub fn element(&self, i: u32) -> Result<PartialBijection> {
        if let Some(f) = self.prefix.get(i as usize) {
            return Ok(f.clone());
        }
        let invalid = |e: Error| Error::InvalidSequence(format!("element {i}: {e}"));
        match &self.tail {
            SequenceTail::Constant { value } => Ok(value.clone()),
            SequenceTail::Generator { rule, inverted, .. } => {
                let f = generate(rule, i)?;
                Ok(if *inverted { f.inverse() } else { f })
            }
            SequenceTail::Schedule(s) => materialize(s, i).map_err(invalid),
        }
    }

    /// Checks the prefix ground sets and that the tail describes a partial
    /// bijection at every index (a finite window suffices for affine families).
    pub fn validate(&self) -> Result<()> {
        if let Some(f) = self.prefix.iter().find(|f| f.ground() != GroundSet::Naturals) {
            return Err(Error::InvalidSequence(format!("{f} is not over the naturals")));
        }
        match &self.tail {
            SequenceTail::Constant { value } if value.ground() != GroundSet::Naturals => {
                Err(Error::InvalidSequence(format!("{value} is not over the naturals")))
            }
            SequenceTail::Constant { .. } => Ok(()),
            SequenceTail::Generator { rule, horizon, .. } => {
                if *horizon == 0 {
                    return Err(Error::InvalidSequence("generator horizon must be positive".into()));
                }
                generate(rule, 0).map(|_| ())
            }
            SequenceTail::Schedule(s) => {
                if s.identity.iter().filter(|b| b.end.is_none()).count() > 1 {
                    return Err(Error::InvalidSequence(
                        "at most one identity block may be unbounded".into(),
                    ));
                }
                for k in self.first()..=self.generic_index() + 2 {
                    self.element(k)?;
                }
                Ok(())
            }
        }
    }

    /// The sequence of inverses `f_i^-1`.
    pub fn inverse(&self) -> SequenceSpec {
        let tail = match &self.tail {
            SequenceTail::Constant { value } => SequenceTail::Constant { value: value.inverse() },
            SequenceTail::Schedule(s) => SequenceTail::Schedule(Schedule {
                pairs: s
                    .pairs
                    .iter()
                    .map(|p| SchedulePair { from: p.to, to: p.from })
                    .collect(),
                identity: s.identity.clone(),
            }),
            SequenceTail::Generator {
                rule,
                horizon,
                inverted,
            } => SequenceTail::Generator {
                rule: rule.clone(),
                horizon: *horizon,
                inverted: !inverted,
            },
        };
        SequenceSpec {
            name: self.name.as_ref().map(|n| format!("{n}^-1")),
            description: None,
            prefix: self.prefix.iter().map(PartialBijection::inverse).collect(),
            tail,
            expected: None,
        }
    }

    /// The eventual behaviour of `x`, read off two consecutive indices past the
    /// point where every moving coordinate exceeds `x`.
    pub fn fate(&self, x: Point) -> Result<PointFate> {
        if !self.is_certified() {
            return Err(Error::Uncertified(format!("{} is generator-backed", self.label())));
        }
        let settle = self
            .first()
            .max(x.saturating_add(self.offset_bound()).saturating_add(1));
        let now = self.element(settle)?.eval(x);
        let next = self.element(settle + 1)?.eval(x);
        let fate = match (now, next) {
            (Some(a), Some(b)) if a == b => Fate::MapsTo(a),
            (None, None) => Fate::Outside,
            (Some(_), Some(_)) => Fate::Unstable,
            _ => unreachable!("domain membership of {x} is settled at index {settle}"),
        };
        Ok(PointFate { point: x, settle, fate })
    }

    /// Fates of every point up to and including the generic point.
    pub fn fates(&self) -> Result<Vec<PointFate>> {
        (0..=self.generic_point()).map(|x| self.fate(x)).collect()
    }

    /// `f_i ∘ 1_A` for a cofinite `A`, again as a certified spec.
    pub fn right_restrict(&self, a: &SetDescriptor) -> Result<SequenceSpec> {
        let SetDescriptor::Cofinite(missing) = a else {
            return Err(Error::InvalidSequence(format!(
                "right restriction is implemented for cofinite sets, got {a}"
            )));
        };
        let one_a = PartialBijection::identity_on(GroundSet::Naturals, a)?;
        let restrict = |f: PartialBijection| f.compose(&one_a);
        let name = self.name.as_ref().map(|n| format!("{n} o 1_{a}"));
        match &self.tail {
            SequenceTail::Generator { .. } => Err(Error::Uncertified(format!("{} is generator-backed", self.label()))),
            SequenceTail::Constant { value } => Ok(SequenceSpec {
                name,
                description: None,
                prefix: self.prefix.iter().cloned().map(restrict).collect::<Result<_>>()?,
                tail: SequenceTail::Constant {
                    value: restrict(value.clone())?,
                },
                expected: None,
            }),
            SequenceTail::Schedule(s) => {
                let Some(&last) = missing.iter().next_back() else {
                    return Ok(self.clone());
                };
                // From this index on, every moving coordinate lies above the removed points.
                let first = self.first().max(last + self.offset_bound() + 2);
                let prefix = (0..first)
                    .map(|i| restrict(self.element(i)?))
                    .collect::<Result<Vec<_>>>()?;
                let pairs = s
                    .pairs
                    .iter()
                    .filter(|p| !p.from.as_constant().is_some_and(|c| missing.contains(&c)))
                    .cloned()
                    .collect();
                let identity = s.identity.iter().flat_map(|b| split_block(b, missing)).collect();
                let out = SequenceSpec {
                    name,
                    description: None,
                    prefix,
                    tail: SequenceTail::Schedule(Schedule { pairs, identity }),
                    expected: None,
                };
                out.validate()?;
                Ok(out)
            }
        }
    }
}

/// Removes the constant points in `missing` from a block with a constant start.
fn split_block(block: &IdentityBlock, missing: &BTreeSet<Point>) -> Vec<IdentityBlock> {
    let Some(start) = block.start.as_constant() else {
        return vec![block.clone()];
    };
    let end_const = block.end.and_then(|e| e.as_constant());
    let mut pieces = Vec::new();
    let mut lo = start;
    for &p in missing.range(start..) {
        if end_const.is_some_and(|e| p >= e) {
            break;
        }
        if p > lo {
            pieces.push(IdentityBlock {
                start: Affine::constant(lo),
                end: Some(Affine::constant(p)),
            });
        }
        lo = p + 1;
    }
    pieces.push(IdentityBlock {
        start: Affine::constant(lo),
        end: block.end,
    });
    pieces
}

fn materialize(s: &Schedule, k: u32) -> Result<PartialBijection> {
    let at = |a: &Affine| {
        a.at(k)
            .ok_or_else(|| Error::InvalidElement(format!("coordinate {a} is negative at k = {k}")))
    };
    let mut pairs = Vec::new();
    for p in &s.pairs {
        pairs.push((at(&p.from)?, at(&p.to)?));
    }
    let mut tail = Tail::NoTail;
    for b in &s.identity {
        let start = at(&b.start)?;
        match &b.end {
            Some(e) => pairs.extend((start..at(e)?).map(|p| (p, p))),
            None => tail = Tail::identity_from(start),
        }
    }
    PartialBijection::new(GroundSet::Naturals, pairs, tail)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pb(s: &str) -> PartialBijection {
        s.parse().unwrap()
    }

    fn spec(json: &str) -> SequenceSpec {
        SequenceSpec::from_json(json).unwrap()
    }

    fn walk() -> SequenceSpec {
        spec(r#"{"tail": {"kind": "Schedule", "pairs": [{"from": "0", "to": "k"}]}}"#)
    }

    #[test]
    fn materializes_affine_families() {
        let seg = spec(r#"{"tail": {"kind": "Schedule", "identity": [{"start": 0, "end": "k"}]}}"#);
        assert_eq!(seg.element(3).unwrap(), pb("{0->0, 1->1, 2->2}"));
        assert_eq!(seg.element(0).unwrap(), PartialBijection::empty(GroundSet::Naturals));
        assert_eq!(walk().element(4).unwrap(), pb("{0->4}"));
        let tail = spec(r#"{"prefix": ["{0->1}"], "tail": {"kind": "Schedule", "identity": [{"start": "k"}]}}"#);
        assert_eq!(tail.element(0).unwrap(), pb("{0->1}"));
        assert_eq!(tail.element(2).unwrap(), pb("{}; id from 2"));
    }

    #[test]
    fn rejects_collisions() {
        let bad = r#"{"tail": {"kind": "Schedule", "pairs": [{"from": "0", "to": "k"}, {"from": "1", "to": "3"}]}}"#;
        let err = SequenceSpec::from_json(bad).unwrap_err();
        assert!(
            matches!(err, Error::InvalidSequence(ref m) if m.contains("element 3")),
            "{err}"
        );
        let negative = r#"{"prefix": ["{}"], "tail": {"kind": "Schedule", "pairs": [{"from": "k-2", "to": "0"}]}}"#;
        assert!(SequenceSpec::from_json(negative).is_err());
        let shifted =
            r#"{"prefix": ["{}", "{}"], "tail": {"kind": "Schedule", "pairs": [{"from": "k-2", "to": "0"}]}}"#;
        assert!(SequenceSpec::from_json(shifted).is_ok());
    }

    #[test]
    fn fates_of_the_singleton_walk() {
        let w = walk();
        assert_eq!(w.fate(0).unwrap().fate, Fate::Unstable);
        assert_eq!(w.fate(1).unwrap().fate, Fate::Outside);
        let inv = w.inverse();
        assert_eq!(inv.element(5).unwrap(), pb("{5->0}"));
        assert!(inv.fates().unwrap().iter().all(|p| p.fate == Fate::Outside));
    }

    #[test]
    fn fates_settle_where_claimed() {
        let s = spec(
            r#"{"prefix": ["{3->3}"], "tail": {"kind": "Schedule",
                "pairs": [{"from": "0", "to": "1"}, {"from": "k+2", "to": "0"}],
                "identity": [{"start": 2, "end": "k"}]}}"#,
        );
        for pf in s.fates().unwrap() {
            for i in pf.settle..pf.settle + 6 {
                let v = s.element(i).unwrap().eval(pf.point);
                match pf.fate {
                    Fate::MapsTo(y) => assert_eq!(v, Some(y)),
                    Fate::Outside => assert_eq!(v, None),
                    Fate::Unstable => assert!(v.is_some()),
                }
            }
        }
        assert_eq!(s.fate(0).unwrap().fate, Fate::MapsTo(1));
        assert_eq!(s.fate(1).unwrap().fate, Fate::Outside);
        assert_eq!(s.fate(9).unwrap().fate, Fate::MapsTo(9));
    }

    #[test]
    fn right_restriction_agrees_elementwise() {
        let s = spec(
            r#"{"tail": {"kind": "Schedule",
                "pairs": [{"from": "0", "to": "k+1"}],
                "identity": [{"start": 1, "end": "k+1"}, {"start": "k+2"}]}}"#,
        );
        let a = SetDescriptor::cofinite([0, 2]);
        let one_a = PartialBijection::identity_on(GroundSet::Naturals, &a).unwrap();
        let r = s.right_restrict(&a).unwrap();
        for i in 0..20 {
            assert_eq!(
                r.element(i).unwrap(),
                s.element(i).unwrap().compose(&one_a).unwrap(),
                "{i}"
            );
        }
    }

    #[test]
    fn json_round_trip() {
        let s = spec(
            r#"{"name": "x", "prefix": ["{0->1}"], "tail": {"kind": "Constant", "value": "{}; id from 3"},
                "expected": {"tau1": "diverges", "tau2": "{}"}}"#,
        );
        assert_eq!(SequenceSpec::from_json(&s.to_json()).unwrap(), s);
        let e = s.expected.unwrap();
        assert_eq!(e.tau1, Some(Declared::Diverges));
        assert_eq!(
            e.tau2,
            Some(Declared::Limit(PartialBijection::empty(GroundSet::Naturals)))
        );
    }

    #[test]
    fn generators_are_uncertified() {
        let g = spec(r#"{"tail": {"kind": "Generator", "rule": "singleton_walk", "horizon": 40}}"#);
        assert_eq!(g.element(7).unwrap(), pb("{0->7}"));
        assert_eq!(g.inverse().element(7).unwrap(), pb("{7->0}"));
        assert!(matches!(g.fate(0), Err(Error::Uncertified(_))));
        assert!(SequenceSpec::from_json(r#"{"tail": {"kind": "Generator", "rule": "nope", "horizon": 4}}"#).is_err());
    }
}
