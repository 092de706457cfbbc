use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ground::{GroundSet, Point, SetDescriptor};
use crate::cursor::Cursor;
use crate::error::{Error, Result};

/// Behaviour of an element of `I(N)` above its explicit pairs.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tail {
    /// Undefined everywhere outside the listed pairs.
    NoTail,
    /// Identity on `[start, inf)` minus the finitely many `punctures`.
    Identity { start: Point, punctures: BTreeSet<Point> },
}

impl Tail {
    pub fn identity_from(start: Point) -> Tail {
        Tail::Identity {
            start,
            punctures: BTreeSet::new(),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Tail::Identity { .. })
    }

    fn eval(&self, x: Point) -> Option<Point> {
        match self {
            Tail::Identity { start, punctures } if x >= *start && !punctures.contains(&x) => Some(x),
            _ => None,
        }
    }
}

/// An injective partial map on the ground set: an element of `I(X)`.
///
/// Values are always kept canonical (pairs sorted by first coordinate, tail
/// start as small as possible), so derived equality is equality of functions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialBijection {
    ground: GroundSet,
    pairs: Vec<(Point, Point)>,
    tail: Tail,
}

impl PartialBijection {
    pub fn new<I>(ground: GroundSet, pairs: I, tail: Tail) -> Result<Self>
    where
        I: IntoIterator<Item = (Point, Point)>,
    {
        let mut pairs: Vec<(Point, Point)> = pairs.into_iter().collect();
        pairs.sort_unstable();
        for &(x, y) in &pairs {
            ground.check(x)?;
            ground.check(y)?;
        }
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidElement("a point has two images".into()));
        }
        let mut ys: Vec<Point> = pairs.iter().map(|p| p.1).collect();
        ys.sort_unstable();
        if ys.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidElement("two points share an image".into()));
        }
        if let Tail::Identity { start, punctures } = &tail {
            if ground.is_finite() {
                return Err(Error::InvalidElement(
                    "identity tails only exist over the naturals".into(),
                ));
            }
            if pairs.iter().any(|&(x, y)| x >= *start || y >= *start) {
                return Err(Error::InvalidElement(format!(
                    "explicit pairs must lie below the tail start {start}"
                )));
            }
            if punctures.iter().any(|p| p < start) {
                return Err(Error::InvalidElement(format!(
                    "punctures must lie at or above the tail start {start}"
                )));
            }
        }
        let mut f = PartialBijection { ground, pairs, tail };
        f.canonicalize();
        Ok(f)
    }

    /// A finitely supported element.
    pub fn finite<I>(ground: GroundSet, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Point, Point)>,
    {
        PartialBijection::new(ground, pairs, Tail::NoTail)
    }

    /// `1_{empty}`.
    pub fn empty(ground: GroundSet) -> Self {
        PartialBijection {
            ground,
            pairs: Vec::new(),
            tail: Tail::NoTail,
        }
    }

    /// The partial identity `1_A`.
    pub fn identity_on(ground: GroundSet, set: &SetDescriptor) -> Result<Self> {
        match set.normalize(ground)? {
            SetDescriptor::Finite(s) => PartialBijection::finite(ground, s.into_iter().map(|p| (p, p))),
            SetDescriptor::Cofinite(missing) => PartialBijection::new(
                ground,
                [],
                Tail::Identity {
                    start: 0,
                    punctures: missing,
                },
            ),
        }
    }

    /// The identity of the whole ground set.
    pub fn identity(ground: GroundSet) -> Self {
        PartialBijection::identity_on(ground, &SetDescriptor::all()).expect("the whole ground set is representable")
    }

    /// `u_{x,y}`, the map `{x -> y}`.
    pub fn singleton(ground: GroundSet, x: Point, y: Point) -> Result<Self> {
        PartialBijection::finite(ground, [(x, y)])
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn pairs(&self) -> &[(Point, Point)] {
        &self.pairs
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn eval(&self, x: Point) -> Option<Point> {
        match self.pairs.binary_search_by_key(&x, |p| p.0) {
            Ok(i) => Some(self.pairs[i].1),
            Err(_) => self.tail.eval(x),
        }
    }

    /// `f^-1(y)`.
    pub fn preimage(&self, y: Point) -> Option<Point> {
        self.pairs
            .iter()
            .find(|p| p.1 == y)
            .map(|p| p.0)
            .or_else(|| self.tail.eval(y))
    }

    pub fn in_domain(&self, x: Point) -> bool {
        self.eval(x).is_some()
    }

    pub fn in_image(&self, y: Point) -> bool {
        self.preimage(y).is_some()
    }

    pub fn dom(&self) -> SetDescriptor {
        self.side(|p| p.0)
    }

    pub fn im(&self) -> SetDescriptor {
        self.side(|p| p.1)
    }

    fn side(&self, coord: impl Fn(&(Point, Point)) -> Point) -> SetDescriptor {
        let listed: BTreeSet<Point> = self.pairs.iter().map(coord).collect();
        match &self.tail {
            Tail::NoTail => SetDescriptor::Finite(listed),
            Tail::Identity { start, punctures } => {
                let mut missing: BTreeSet<Point> = (0..*start).filter(|p| !listed.contains(p)).collect();
                missing.extend(punctures.iter().copied());
                SetDescriptor::Cofinite(missing)
            }
        }
    }

    /// Number of points in the domain, when finite.
    pub fn domain_size(&self) -> Option<usize> {
        match self.tail {
            Tail::NoTail => Some(self.pairs.len()),
            Tail::Identity { .. } => None,
        }
    }

    /// Smallest `b` such that every point `p >= b` is fixed (identity tail) or
    /// outside both domain and image (no tail).
    pub fn support_bound(&self) -> Point {
        let pairs = self.pairs.iter().map(|&(x, y)| x.max(y) + 1).max().unwrap_or(0);
        match &self.tail {
            Tail::NoTail => pairs,
            Tail::Identity { start, punctures } => {
                pairs.max(*start).max(punctures.iter().next_back().map_or(0, |p| p + 1))
            }
        }
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &PartialBijection) -> Result<PartialBijection> {
        if self.ground != other.ground {
            return Err(Error::GroundMismatch {
                left: self.ground,
                right: other.ground,
            });
        }
        let ground = self.ground;
        match (&self.tail, &other.tail) {
            (
                Tail::Identity {
                    start: fs,
                    punctures: fp,
                },
                Tail::Identity {
                    start: gs,
                    punctures: gp,
                },
            ) => {
                let start = (*fs).max(*gs);
                let pairs: Vec<_> = (0..start)
                    .filter_map(|x| {
                        let y = other.eval(x)?;
                        self.eval(y).map(|z| (x, z))
                    })
                    .collect();
                let punctures = fp.union(gp).copied().filter(|p| *p >= start).collect();
                PartialBijection::new(ground, pairs, Tail::Identity { start, punctures })
            }
            (_, Tail::NoTail) => {
                let pairs: Vec<_> = other
                    .pairs
                    .iter()
                    .filter_map(|&(x, y)| self.eval(y).map(|z| (x, z)))
                    .collect();
                PartialBijection::finite(ground, pairs)
            }
            (Tail::NoTail, Tail::Identity { .. }) => {
                let pairs: Vec<_> = self
                    .pairs
                    .iter()
                    .filter_map(|&(y, z)| other.preimage(y).map(|x| (x, z)))
                    .collect();
                PartialBijection::finite(ground, pairs)
            }
        }
    }

    pub fn inverse(&self) -> PartialBijection {
        let mut pairs: Vec<(Point, Point)> = self.pairs.iter().map(|&(x, y)| (y, x)).collect();
        pairs.sort_unstable();
        PartialBijection {
            ground: self.ground,
            pairs,
            tail: self.tail.clone(),
        }
    }

    /// The restriction order `self ⊆ other`.
    pub fn restricts(&self, other: &PartialBijection) -> Result<bool> {
        if self.ground != other.ground {
            return Err(Error::GroundMismatch {
                left: self.ground,
                right: other.ground,
            });
        }
        if !self.dom().is_subset(&other.dom()) {
            return Ok(false);
        }
        // Beyond both support bounds every defined point is fixed by both maps.
        let bound = self.support_bound().max(other.support_bound());
        Ok((0..bound).all(|x| match self.eval(x) {
            Some(y) => other.eval(x) == Some(y),
            None => true,
        }))
    }

    pub fn is_idempotent(&self) -> bool {
        self.pairs.iter().all(|&(x, y)| x == y)
    }

    /// Whether the map is a bijection of the whole ground set.
    pub fn is_total(&self) -> bool {
        match self.ground {
            GroundSet::Finite(n) => self.pairs.len() == n as usize,
            GroundSet::Naturals => match &self.tail {
                Tail::NoTail => false,
                Tail::Identity { start, punctures } => punctures.is_empty() && self.pairs.len() == *start as usize,
            },
        }
    }

    /// The least point where the two maps differ (in domain membership or value).
    pub fn first_disagreement(&self, other: &PartialBijection) -> Option<Point> {
        let bound = self.support_bound().max(other.support_bound());
        (0..=bound).find(|&x| self.eval(x) != other.eval(x))
    }

    pub fn parse(src: &str, ground: GroundSet) -> Result<Self> {
        let mut cursor = Cursor::new(src);
        let f = parse_literal(&mut cursor, ground)?;
        cursor.finish()?;
        Ok(f)
    }

    fn canonicalize(&mut self) {
        let Tail::Identity { start, punctures } = &mut self.tail else {
            return;
        };
        while *start > 0 {
            let p = *start - 1;
            match self.pairs.last() {
                Some(&(x, y)) if x == p && y == p => {
                    self.pairs.pop();
                }
                Some(&(x, _)) if x == p => break,
                _ if self.pairs.iter().any(|&(_, y)| y == p) => break,
                _ => {
                    punctures.insert(p);
                }
            }
            *start = p;
        }
    }
}

pub(crate) fn parse_literal(cursor: &mut Cursor<'_>, ground: GroundSet) -> Result<PartialBijection> {
    let start_pos = cursor.pos();
    cursor.expect("{")?;
    let mut pairs = Vec::new();
    if !cursor.eat("}") {
        loop {
            let x = cursor.number()?;
            cursor.expect("->")?;
            let y = cursor.number()?;
            pairs.push((x, y));
            if cursor.eat(",") {
                continue;
            }
            cursor.expect("}")?;
            break;
        }
    }
    let mut tail = Tail::NoTail;
    if cursor.eat(";") {
        if !(cursor.eat_keyword("id") && cursor.eat_keyword("from")) {
            return Err(cursor.error("expected `id from N`"));
        }
        let start = cursor.number()?;
        let mut punctures = BTreeSet::new();
        if cursor.eat_keyword("except") {
            cursor.expect("{")?;
            if !cursor.eat("}") {
                loop {
                    punctures.insert(cursor.number()?);
                    if cursor.eat(",") {
                        continue;
                    }
                    cursor.expect("}")?;
                    break;
                }
            }
        }
        tail = Tail::Identity { start, punctures };
    }
    PartialBijection::new(ground, pairs, tail).map_err(|e| match e {
        Error::Parse { .. } => e,
        other => Error::parse(start_pos, other.to_string()),
    })
}

impl fmt::Display for PartialBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, y)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}->{y}")?;
        }
        f.write_str("}")?;
        if let Tail::Identity { start, punctures } = &self.tail {
            write!(f, "; id from {start}")?;
            if !punctures.is_empty() {
                f.write_str(" except {")?;
                for (i, p) in punctures.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str("}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for PartialBijection {
    type Err = Error;

    /// Parses a literal over the naturals.
    fn from_str(s: &str) -> Result<Self> {
        PartialBijection::parse(s, GroundSet::Naturals)
    }
}

impl Serialize for PartialBijection {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PartialBijection {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const N: GroundSet = GroundSet::Naturals;

    fn pb(s: &str) -> PartialBijection {
        s.parse().unwrap()
    }

    #[test]
    fn composition_by_definition() {
        let f = pb("{1->2}");
        let g = pb("{0->1}");
        assert_eq!(f.compose(&g).unwrap(), pb("{0->2}"));
        assert_eq!(g.compose(&f).unwrap(), PartialBijection::empty(N));
    }

    #[test]
    fn identities_compose_by_intersection() {
        let a = SetDescriptor::finite([0, 1, 4]);
        let b = SetDescriptor::cofinite([1, 7]);
        let fa = PartialBijection::identity_on(N, &a).unwrap();
        let fb = PartialBijection::identity_on(N, &b).unwrap();
        let expected = PartialBijection::identity_on(N, &a.intersection(&b)).unwrap();
        assert_eq!(fa.compose(&fb).unwrap(), expected);
        let both_cofinite = PartialBijection::identity_on(N, &SetDescriptor::cofinite([2])).unwrap();
        assert_eq!(
            fb.compose(&both_cofinite).unwrap(),
            PartialBijection::identity_on(N, &SetDescriptor::cofinite([1, 2, 7])).unwrap()
        );
    }

    #[test]
    fn conjugating_by_singleton_outside_domain_is_empty() {
        // x = 3 is not in dom(f'), so u_{x,y} f' u_{x,y} = 1_empty
        let f = pb("{0->1, 1->5}");
        let u = PartialBijection::singleton(N, 3, 1).unwrap();
        let phi = u.compose(&f).unwrap().compose(&u).unwrap();
        assert_eq!(phi, PartialBijection::empty(N));
    }

    #[test]
    fn inverse_reverses_pairs() {
        assert_eq!(pb("{0->3, 2->1}").inverse(), pb("{3->0, 1->2}"));
        let a = PartialBijection::identity_on(N, &SetDescriptor::cofinite([5])).unwrap();
        assert_eq!(a.inverse(), a);
        let f = pb("{0->7, 3->1}; id from 9 except {11}");
        assert_eq!(f.compose(&f.inverse()).unwrap().compose(&f).unwrap(), f);
    }

    #[test]
    fn cofinite_identity_is_canonical() {
        let a = PartialBijection::identity_on(N, &SetDescriptor::cofinite([5])).unwrap();
        assert_eq!(a.to_string(), "{}; id from 0 except {5}");
        let spelled = pb("{0->0, 1->1, 2->2, 3->3, 4->4}; id from 6");
        assert_eq!(spelled, a);
        assert_eq!(pb("{}; id from 0"), PartialBijection::identity(N));
        assert_eq!(pb("{}; id from 3").to_string(), "{}; id from 0 except {0, 1, 2}");
    }

    #[test]
    fn canonical_start_stops_at_moved_points() {
        let f = pb("{0->1, 1->0}; id from 5");
        assert_eq!(f.to_string(), "{0->1, 1->0}; id from 2 except {2, 3, 4}");
        let g = pb("{0->3}; id from 5");
        assert_eq!(g.to_string(), "{0->3}; id from 4 except {4}");
        assert_eq!(g.eval(4), None);
        assert_eq!(g.eval(7), Some(7));
        assert_eq!(g.preimage(3), Some(0));
        assert_eq!(g.preimage(2), None);
    }

    #[test]
    fn dom_and_im_of_singletons() {
        let u = PartialBijection::singleton(N, 4, 9).unwrap();
        assert_eq!(u.dom(), SetDescriptor::finite([4]));
        assert_eq!(u.im(), SetDescriptor::finite([9]));
        assert_eq!(u.inverse(), PartialBijection::singleton(N, 9, 4).unwrap());
        assert_eq!(
            PartialBijection::singleton(N, 0, 0).unwrap(),
            PartialBijection::identity_on(N, &SetDescriptor::finite([0])).unwrap()
        );
        let f = pb("{0->1, 2->0}; id from 3 except {4}");
        assert_eq!(f.dom(), SetDescriptor::cofinite([1, 4]));
        assert_eq!(f.im(), SetDescriptor::cofinite([2, 4]));
    }

    #[test]
    fn eval_is_undefined_outside_domain() {
        let a = PartialBijection::identity_on(N, &SetDescriptor::finite([2, 3])).unwrap();
        for x in 0..6 {
            assert_eq!(a.eval(x) == Some(x), x == 2 || x == 3);
        }
    }

    #[test]
    fn restriction_order() {
        let empty = PartialBijection::empty(N);
        assert!(empty.restricts(&pb("{0->1}")).unwrap());
        assert!(pb("{0->1}").restricts(&pb("{0->1, 2->3}")).unwrap());
        assert!(!pb("{0->1}").restricts(&pb("{0->2}")).unwrap());
        let tail = pb("{0->1, 1->0}; id from 2 except {9}");
        assert!(pb("{0->1}; id from 8")
            .restricts(&pb("{0->1, 1->0}; id from 2"))
            .unwrap());
        assert!(!pb("{0->1}; id from 8").restricts(&tail).unwrap());
        assert!(!tail.restricts(&pb("{0->1, 1->0}")).unwrap());
    }

    #[test]
    fn validation() {
        assert!(PartialBijection::finite(N, [(0, 1), (0, 2)]).is_err());
        assert!(PartialBijection::finite(N, [(0, 1), (2, 1)]).is_err());
        assert!(PartialBijection::finite(GroundSet::Finite(2), [(0, 2)]).is_err());
        assert!(PartialBijection::new(GroundSet::Finite(4), [], Tail::identity_from(0)).is_err());
        assert!("{0->7}; id from 3".parse::<PartialBijection>().is_err());
        assert!("{0->1, 1->0} ; id  from 2 except {1}"
            .parse::<PartialBijection>()
            .is_err());
    }

    #[test]
    fn literal_round_trip_and_whitespace() {
        let f = pb("  { 2 -> 0 ,0->2 } ; id from 4 except { 6 , 5 }");
        assert_eq!(f.to_string(), "{0->2, 2->0}; id from 3 except {3, 5, 6}");
        assert_eq!(pb(&f.to_string()), f);
        assert!(matches!(
            "{0->}".parse::<PartialBijection>(),
            Err(Error::Parse { position: 4, .. })
        ));
    }

    #[test]
    fn mixed_tail_composition() {
        // finite after cofinite and vice versa
        let f = pb("{0->5}");
        let g = pb("{5->6, 6->5}; id from 7");
        assert_eq!(f.compose(&g).unwrap(), PartialBijection::empty(N));
        assert_eq!(g.compose(&f).unwrap(), pb("{0->6}"));
        assert_eq!(f.inverse().compose(&g).unwrap(), pb("{6->0}"));
        let h = pb("{}; id from 0 except {2, 9}");
        let gh = g.compose(&h).unwrap();
        for x in 0..20 {
            assert_eq!(gh.eval(x), h.eval(x).and_then(|y| g.eval(y)));
        }
    }

    #[test]
    fn totality() {
        assert!(pb("{0->1, 1->0}; id from 2").is_total());
        assert!(!pb("{0->1}; id from 2").is_total());
        let g = GroundSet::Finite(2);
        assert!(PartialBijection::finite(g, [(0, 1), (1, 0)]).unwrap().is_total());
        assert!(!PartialBijection::finite(g, [(0, 1)]).unwrap().is_total());
    }
}
