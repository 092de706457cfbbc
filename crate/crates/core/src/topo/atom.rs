use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cursor::Cursor;
use crate::error::{Error, Result};
use crate::pbij::{GroundSet, Point};

/// A subbasic open set.
///
/// `V`, `W1`, `W2` live on `I(X)`; `U` lives on the permutation group of `Y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubbasicAtom {
    /// `{f : x in dom f, f(x) = y}`.
    V(Point, Point),
    /// `{f : x not in dom f}`.
    W1(Point),
    /// `{f : y not in im f}`.
    W2(Point),
    /// `{f in S(Y) : f(x) = y}`.
    U(Point, Point),
}

impl SubbasicAtom {
    pub fn points(&self) -> Vec<Point> {
        match *self {
            SubbasicAtom::V(x, y) | SubbasicAtom::U(x, y) => vec![x, y],
            SubbasicAtom::W1(x) | SubbasicAtom::W2(x) => vec![x],
        }
    }

    pub fn is_permutation_atom(&self) -> bool {
        matches!(self, SubbasicAtom::U(..))
    }

    /// The atom `i^-1(a)`: membership of `f^-1` in `a` is membership of `f` in the result.
    pub fn inverted(&self) -> SubbasicAtom {
        match *self {
            SubbasicAtom::V(x, y) => SubbasicAtom::V(y, x),
            SubbasicAtom::W1(x) => SubbasicAtom::W2(x),
            SubbasicAtom::W2(y) => SubbasicAtom::W1(y),
            SubbasicAtom::U(x, y) => SubbasicAtom::U(y, x),
        }
    }

    pub fn check_ground(&self, ground: GroundSet) -> Result<()> {
        self.points().into_iter().try_for_each(|p| ground.check(p))
    }
}

impl fmt::Display for SubbasicAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubbasicAtom::V(x, y) => write!(f, "v({x},{y})"),
            SubbasicAtom::W1(x) => write!(f, "w1({x})"),
            SubbasicAtom::W2(y) => write!(f, "w2({y})"),
            SubbasicAtom::U(x, y) => write!(f, "u({x},{y})"),
        }
    }
}

/// Which subbasic atoms generate a topology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TopologyKind {
    Tau0,
    Tau1,
    Tau2,
    TauPP,
}

impl TopologyKind {
    pub const ALL: [TopologyKind; 4] = [
        TopologyKind::Tau0,
        TopologyKind::Tau1,
        TopologyKind::Tau2,
        TopologyKind::TauPP,
    ];

    pub fn admits(&self, atom: &SubbasicAtom) -> bool {
        match atom {
            SubbasicAtom::V(..) => true,
            SubbasicAtom::W1(_) => matches!(self, TopologyKind::Tau1 | TopologyKind::TauPP),
            SubbasicAtom::W2(_) => matches!(self, TopologyKind::Tau2 | TopologyKind::TauPP),
            SubbasicAtom::U(..) => false,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TopologyKind::Tau0 => "tau0",
            TopologyKind::Tau1 => "tau1",
            TopologyKind::Tau2 => "tau2",
            TopologyKind::TauPP => "taupp",
        }
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TopologyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tau0" | "t0" => Ok(TopologyKind::Tau0),
            "tau1" | "t1" => Ok(TopologyKind::Tau1),
            "tau2" | "t2" => Ok(TopologyKind::Tau2),
            "taupp" | "tau_pp" | "pp" => Ok(TopologyKind::TauPP),
            other => Err(Error::parse(0, format!("unknown topology `{other}`"))),
        }
    }
}

/// An atom or its complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub atom: SubbasicAtom,
    pub positive: bool,
}

impl Literal {
    pub fn positive(atom: SubbasicAtom) -> Self {
        Literal { atom, positive: true }
    }

    pub fn complement(atom: SubbasicAtom) -> Self {
        Literal { atom, positive: false }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("!")?;
        }
        write!(f, "{}", self.atom)
    }
}

/// A finite intersection of literals. The empty intersection is the whole space.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasicOpenSet {
    literals: Vec<Literal>,
}

impl BasicOpenSet {
    pub fn whole() -> Self {
        BasicOpenSet::default()
    }

    pub fn new<I: IntoIterator<Item = Literal>>(literals: I) -> Self {
        let mut literals: Vec<Literal> = literals.into_iter().collect();
        literals.sort_unstable();
        literals.dedup();
        BasicOpenSet { literals }
    }

    pub fn from_atoms<I: IntoIterator<Item = SubbasicAtom>>(atoms: I) -> Self {
        BasicOpenSet::new(atoms.into_iter().map(Literal::positive))
    }

    pub fn atom(atom: SubbasicAtom) -> Self {
        BasicOpenSet::from_atoms([atom])
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn is_whole(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn is_all_positive(&self) -> bool {
        self.literals.iter().all(|l| l.positive)
    }

    pub fn atoms(&self) -> impl Iterator<Item = SubbasicAtom> + '_ {
        self.literals.iter().map(|l| l.atom)
    }

    pub fn and(&self, other: &BasicOpenSet) -> BasicOpenSet {
        BasicOpenSet::new(self.literals.iter().chain(&other.literals).copied())
    }

    pub fn with(&self, atom: SubbasicAtom) -> BasicOpenSet {
        self.and(&BasicOpenSet::atom(atom))
    }

    /// Atom-wise inversion: `f in self.inverted()` iff `f^-1 in self`.
    pub fn inverted(&self) -> BasicOpenSet {
        BasicOpenSet::new(self.literals.iter().map(|l| Literal {
            atom: l.atom.inverted(),
            positive: l.positive,
        }))
    }

    pub fn admissible_in(&self, kind: TopologyKind) -> bool {
        self.atoms().all(|a| kind.admits(&a))
    }

    /// Every point mentioned by a literal, sorted.
    pub fn points(&self) -> Vec<Point> {
        let mut pts: Vec<Point> = self.atoms().flat_map(|a| a.points()).collect();
        pts.sort_unstable();
        pts.dedup();
        pts
    }

    pub fn check_ground(&self, ground: GroundSet) -> Result<()> {
        self.atoms().try_for_each(|a| a.check_ground(ground))
    }

    pub fn parse(src: &str) -> Result<Self> {
        let mut cursor = Cursor::new(src);
        let b = parse_basic(&mut cursor)?;
        cursor.finish()?;
        Ok(b)
    }
}

impl fmt::Display for BasicOpenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return f.write_str("all");
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for BasicOpenSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BasicOpenSet::parse(s)
    }
}

/// A finite union of basic sets, or one of the two trivial sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OpenSetExpr {
    WholeSpace,
    EmptySet,
    Union(Vec<BasicOpenSet>),
}

impl OpenSetExpr {
    pub fn basic(b: BasicOpenSet) -> Self {
        if b.is_whole() {
            OpenSetExpr::WholeSpace
        } else {
            OpenSetExpr::Union(vec![b])
        }
    }

    pub fn atom(a: SubbasicAtom) -> Self {
        OpenSetExpr::Union(vec![BasicOpenSet::atom(a)])
    }

    pub fn union_of<I: IntoIterator<Item = BasicOpenSet>>(basics: I) -> Self {
        let basics: Vec<BasicOpenSet> = basics.into_iter().collect();
        if basics.is_empty() {
            OpenSetExpr::EmptySet
        } else if basics.iter().any(BasicOpenSet::is_whole) {
            OpenSetExpr::WholeSpace
        } else {
            OpenSetExpr::Union(basics)
        }
    }

    /// The basic sets of the union (`WholeSpace` is the single empty intersection).
    pub fn basics(&self) -> Vec<BasicOpenSet> {
        match self {
            OpenSetExpr::WholeSpace => vec![BasicOpenSet::whole()],
            OpenSetExpr::EmptySet => Vec::new(),
            OpenSetExpr::Union(bs) => bs.clone(),
        }
    }

    pub fn atoms(&self) -> Vec<SubbasicAtom> {
        let mut atoms: Vec<SubbasicAtom> = self
            .basics()
            .iter()
            .flat_map(|b| b.atoms().collect::<Vec<_>>())
            .collect();
        atoms.sort_unstable();
        atoms.dedup();
        atoms
    }

    pub fn inverted(&self) -> OpenSetExpr {
        match self {
            OpenSetExpr::Union(bs) => OpenSetExpr::Union(bs.iter().map(BasicOpenSet::inverted).collect()),
            other => other.clone(),
        }
    }

    pub fn parse(src: &str) -> Result<Self> {
        let mut cursor = Cursor::new(src);
        let e = parse_expr(&mut cursor)?;
        cursor.finish()?;
        Ok(e)
    }
}

impl fmt::Display for OpenSetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpenSetExpr::WholeSpace => f.write_str("all"),
            OpenSetExpr::EmptySet => f.write_str("none"),
            OpenSetExpr::Union(bs) => {
                for (i, b) in bs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" | ")?;
                    }
                    write!(f, "{b}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for OpenSetExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OpenSetExpr::parse(s)
    }
}

macro_rules! serde_via_string {
    ($ty:ty) => {
        impl Serialize for $ty {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $ty {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

serde_via_string!(BasicOpenSet);
serde_via_string!(OpenSetExpr);

impl FromStr for SubbasicAtom {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cursor = Cursor::new(s);
        let a = parse_atom(&mut cursor)?;
        cursor.finish()?;
        Ok(a)
    }
}

serde_via_string!(SubbasicAtom);

pub(crate) fn parse_atom(cursor: &mut Cursor<'_>) -> Result<SubbasicAtom> {
    let start = cursor.pos();
    let name = cursor
        .identifier()
        .ok_or_else(|| cursor.error("expected an atom `v`, `w1`, `w2` or `u`"))?;
    cursor.expect("(")?;
    let x = cursor.number()?;
    let atom = match name {
        "v" | "u" => {
            cursor.expect(",")?;
            let y = cursor.number()?;
            if name == "v" {
                SubbasicAtom::V(x, y)
            } else {
                SubbasicAtom::U(x, y)
            }
        }
        "w1" => SubbasicAtom::W1(x),
        "w2" => SubbasicAtom::W2(x),
        other => return Err(Error::parse(start, format!("unknown atom `{other}`"))),
    };
    cursor.expect(")")?;
    Ok(atom)
}

fn parse_literal(cursor: &mut Cursor<'_>) -> Result<Literal> {
    let positive = !cursor.eat("!");
    Ok(Literal {
        atom: parse_atom(cursor)?,
        positive,
    })
}

pub(crate) fn parse_basic(cursor: &mut Cursor<'_>) -> Result<BasicOpenSet> {
    if cursor.eat_keyword("all") {
        return Ok(BasicOpenSet::whole());
    }
    let mut literals = vec![parse_literal(cursor)?];
    while cursor.eat("&") {
        literals.push(parse_literal(cursor)?);
    }
    Ok(BasicOpenSet::new(literals))
}

pub(crate) fn parse_expr(cursor: &mut Cursor<'_>) -> Result<OpenSetExpr> {
    if cursor.eat_keyword("none") {
        return Ok(OpenSetExpr::EmptySet);
    }
    let mut basics = vec![parse_basic(cursor)?];
    while cursor.eat("|") {
        basics.push(parse_basic(cursor)?);
    }
    Ok(OpenSetExpr::union_of(basics))
}
