use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use super::ground::{GroundSet, Point};
use super::partial::PartialBijection;
use crate::cursor::Cursor;
use crate::error::{Error, Result};

/// A bijection of `{0, .., m-1}`, stored as its one-line image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<Point>,
}

impl Permutation {
    pub fn new(images: Vec<Point>) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m];
        for &p in &images {
            let slot = seen
                .get_mut(p as usize)
                .ok_or_else(|| Error::InvalidPermutation(format!("image {p} out of range 0..{m}")))?;
            if *slot {
                return Err(Error::InvalidPermutation(format!("image {p} repeated")));
            }
            *slot = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(m: u32) -> Self {
        Permutation {
            images: (0..m).collect(),
        }
    }

    /// The transposition `(a b)` on `{0, .., m-1}`.
    pub fn transposition(m: u32, a: Point, b: Point) -> Result<Self> {
        let mut images: Vec<Point> = (0..m).collect();
        if a >= m || b >= m {
            return Err(Error::InvalidPermutation(format!("({a} {b}) outside 0..{m}")));
        }
        images.swap(a as usize, b as usize);
        Ok(Permutation { images })
    }

    /// All `m!` permutations in lexicographic order of their image lists.
    pub fn all(m: u32) -> Vec<Permutation> {
        (0..m)
            .permutations(m as usize)
            .map(|images| Permutation { images })
            .collect()
    }

    pub fn len(&self) -> u32 {
        self.images.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[Point] {
        &self.images
    }

    pub fn eval(&self, x: Point) -> Point {
        self.images[x as usize]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return Err(Error::InvalidPermutation(format!(
                "cannot compose permutations of sizes {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(Permutation {
            images: other.images.iter().map(|&y| self.eval(y)).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y as usize] = x as Point;
        }
        Permutation { images }
    }

    /// The same map as a total element of `I(Finite(m))`.
    pub fn to_partial(&self) -> PartialBijection {
        PartialBijection::finite(
            GroundSet::Finite(self.len()),
            self.images.iter().enumerate().map(|(x, &y)| (x as Point, y)),
        )
        .expect("a permutation is a partial bijection")
    }
}

pub(crate) fn parse_permutation(cursor: &mut Cursor<'_>) -> Result<Permutation> {
    let start = cursor.pos();
    cursor.expect("[")?;
    let mut images = Vec::new();
    if !cursor.eat("]") {
        loop {
            images.push(cursor.number()?);
            if cursor.eat(",") {
                continue;
            }
            cursor.expect("]")?;
            break;
        }
    }
    Permutation::new(images).map_err(|e| Error::parse(start, e.to_string()))
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.images.iter().join(", "))
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut cursor = Cursor::new(s);
        let p = parse_permutation(&mut cursor)?;
        cursor.finish()?;
        Ok(p)
    }
}
