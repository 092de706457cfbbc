//! A small call-expression language over the library's values, e.g.
//! `rho({}, {0->0})` or `member({0->1}, v(0,1) & w1(2))`.

use std::collections::BTreeSet;
use std::fmt;

use crate::compose::{atom_compose, lf_image, restrict_map, rf_image, ComposeResult};
use crate::cursor::Cursor;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::metric::{d_metric, eta, rho, rho_star};
use crate::pbij::{parse_literal, parse_permutation, GroundSet, PartialBijection, Permutation, Point, SetDescriptor};
use crate::quotient::{lift, project, Embedding};
use crate::topo::{is_empty, member, parse_atom, parse_basic, parse_expr, BasicOpenSet, SubbasicAtom};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Element(PartialBijection),
    Permutation(Permutation),
    Set(SetDescriptor),
    Bool(bool),
    Dyadic(Dyadic),
    /// `None` when the point is outside the domain.
    Point(Option<Point>),
    Basic(BasicOpenSet),
    Composite(ComposeResult),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Element(g) => write!(f, "{g}"),
            Value::Permutation(p) => write!(f, "{p}"),
            Value::Set(s) => write!(f, "{s}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Dyadic(d) => write!(f, "{d}"),
            Value::Point(Some(p)) => write!(f, "{p}"),
            Value::Point(None) => f.write_str("undefined"),
            Value::Basic(b) => write!(f, "{b}"),
            Value::Composite(c) => write!(f, "{c}"),
        }
    }
}

pub const FUNCTIONS: &[&str] = &[
    "compose",
    "inverse",
    "dom",
    "im",
    "eval",
    "restricts",
    "idempotent",
    "singleton",
    "rho",
    "rho_star",
    "d",
    "eta",
    "member",
    "is_empty",
    "restrict",
    "atom_compose",
    "rf_image",
    "lf_image",
    "project",
    "lift",
];

/// Evaluates `src` with partial bijections read over `ground`.
pub fn evaluate(src: &str, ground: GroundSet) -> Result<Value> {
    let mut p = Parser {
        cursor: Cursor::new(src),
        ground,
    };
    let v = p.value()?;
    p.cursor.finish()?;
    Ok(v)
}

struct Parser<'a> {
    cursor: Cursor<'a>,
    ground: GroundSet,
}

impl Parser<'_> {
    fn value(&mut self) -> Result<Value> {
        match self.cursor.peek() {
            Some('{') => Ok(Value::Element(parse_literal(&mut self.cursor, self.ground)?)),
            Some('[') => Ok(Value::Permutation(parse_permutation(&mut self.cursor)?)),
            _ => self.call(),
        }
    }

    fn call(&mut self) -> Result<Value> {
        let at = self.cursor.pos();
        let name = self
            .cursor
            .identifier()
            .ok_or_else(|| self.cursor.error("expected a value or a function call"))?;
        if !FUNCTIONS.contains(&name) {
            return Err(Error::parse(at, format!("unknown function `{name}`")));
        }
        self.cursor.expect("(")?;
        let v = self.apply(name)?;
        self.cursor.expect(")")?;
        Ok(v)
    }

    fn comma(&mut self) -> Result<()> {
        self.cursor.expect(",")
    }

    fn element(&mut self) -> Result<PartialBijection> {
        let at = self.cursor.pos();
        match self.value()? {
            Value::Element(f) => Ok(f),
            other => Err(Error::parse(at, format!("expected a partial bijection, got `{other}`"))),
        }
    }

    fn permutation(&mut self) -> Result<Permutation> {
        let at = self.cursor.pos();
        match self.value()? {
            Value::Permutation(p) => Ok(p),
            other => Err(Error::parse(at, format!("expected a permutation, got `{other}`"))),
        }
    }

    fn point(&mut self) -> Result<Point> {
        self.cursor.number()
    }

    fn points(&mut self) -> Result<BTreeSet<Point>> {
        self.cursor.expect("{")?;
        let mut out = BTreeSet::new();
        if !self.cursor.eat("}") {
            loop {
                out.insert(self.point()?);
                if !self.cursor.eat(",") {
                    self.cursor.expect("}")?;
                    break;
                }
            }
        }
        Ok(out)
    }

    /// `{1,2}`, `co{3}`, or a call returning a set.
    fn set(&mut self) -> Result<SetDescriptor> {
        if self.cursor.peek() == Some('{') {
            return Ok(SetDescriptor::Finite(self.points()?));
        }
        if self.cursor.eat_keyword("co") {
            return Ok(SetDescriptor::Cofinite(self.points()?));
        }
        let at = self.cursor.pos();
        match self.call()? {
            Value::Set(s) => Ok(s),
            other => Err(Error::parse(at, format!("expected a set, got `{other}`"))),
        }
    }

    fn atom(&mut self) -> Result<SubbasicAtom> {
        parse_atom(&mut self.cursor)
    }

    fn basic(&mut self) -> Result<BasicOpenSet> {
        parse_basic(&mut self.cursor)
    }

    fn apply(&mut self, name: &str) -> Result<Value> {
        let two = |p: &mut Self| -> Result<(PartialBijection, PartialBijection)> {
            let f = p.element()?;
            p.comma()?;
            Ok((f, p.element()?))
        };
        Ok(match name {
            "compose" => {
                let (f, g) = two(self)?;
                Value::Element(f.compose(&g)?)
            }
            "inverse" => Value::Element(self.element()?.inverse()),
            "dom" => Value::Set(self.element()?.dom()),
            "im" => Value::Set(self.element()?.im()),
            "eval" => {
                let f = self.element()?;
                self.comma()?;
                Value::Point(f.eval(self.point()?))
            }
            "restricts" => {
                let (f, g) = two(self)?;
                Value::Bool(f.restricts(&g)?)
            }
            "idempotent" => Value::Element(PartialBijection::identity_on(self.ground, &self.set()?)?),
            "singleton" => {
                let x = self.point()?;
                self.comma()?;
                Value::Element(PartialBijection::singleton(self.ground, x, self.point()?)?)
            }
            "rho" | "rho_star" | "d" => {
                let (f, g) = two(self)?;
                let metric = match name {
                    "rho" => rho,
                    "rho_star" => rho_star,
                    _ => d_metric,
                };
                Value::Dyadic(metric(&f, &g)?)
            }
            "eta" => {
                let a = self.set()?;
                self.comma()?;
                Value::Dyadic(eta(&a, &self.set()?))
            }
            "member" => {
                let f = self.element()?;
                self.comma()?;
                Value::Bool(member(&f, &parse_expr(&mut self.cursor)?)?)
            }
            "is_empty" => Value::Bool(is_empty(&self.basic()?, self.ground)?),
            "restrict" => {
                let f = self.element()?;
                self.comma()?;
                Value::Element(restrict_map(&f, &self.set()?)?)
            }
            "atom_compose" => {
                let a = self.atom()?;
                self.comma()?;
                Value::Composite(atom_compose(&a, &self.atom()?)?.resolve())
            }
            "rf_image" | "lf_image" => {
                let u = self.basic()?;
                self.comma()?;
                let f = self.element()?;
                Value::Basic(if name == "rf_image" {
                    rf_image(&u, &f)?
                } else {
                    lf_image(&u, &f)?
                })
            }
            "project" => {
                let p = self.permutation()?;
                self.comma()?;
                let e = Embedding::new(self.point()?, p.len())?;
                Value::Element(project(&p, &e)?)
            }
            "lift" => {
                let g = self.element()?;
                self.comma()?;
                let y = self.point()?;
                let Some(x) = g.ground().size() else {
                    return Err(self.cursor.error("lift needs a finite ground set, pass --n"));
                };
                Value::Permutation(lift(&g, &Embedding::new(x, y)?)?)
            }
            _ => unreachable!("checked against FUNCTIONS"),
        })
    }
}
