use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pbij::{enumerate_all_bounded, GroundSet, PartialBijection, DEFAULT_ENUMERATION_BOUND};
use crate::topo::{member, member_basic, BasicOpenSet, OpenSetExpr};

/// `I(Finite(n))` with precomputed composition and inversion tables, for
/// exhaustive set-level sweeps.
pub struct Universe {
    n: u32,
    elements: Vec<PartialBijection>,
    index: HashMap<PartialBijection, usize>,
    /// `comp[i * len + j]` is the index of `elements[i] ∘ elements[j]`.
    comp: Vec<u32>,
    inv: Vec<u32>,
}

type Table = Vec<Option<u8>>;

fn table(f: &PartialBijection, n: u32) -> Table {
    (0..n).map(|x| f.eval(x).map(|y| y as u8)).collect()
}

fn code(t: &[Option<u8>], n: u32) -> u32 {
    t.iter()
        .rev()
        .fold(0, |acc, v| acc * (n + 1) + v.map_or(0, |y| u32::from(y) + 1))
}

impl Universe {
    pub fn new(n: u32) -> Result<Self> {
        Universe::bounded(n, DEFAULT_ENUMERATION_BOUND)
    }

    pub fn bounded(n: u32, bound: u32) -> Result<Self> {
        let elements = enumerate_all_bounded(n, bound)?;
        let len = elements.len();
        let tables: Vec<Table> = elements.iter().map(|f| table(f, n)).collect();
        let by_code: HashMap<u32, usize> = tables.iter().enumerate().map(|(i, t)| (code(t, n), i)).collect();
        let comp: Vec<u32> = (0..len * len)
            .into_par_iter()
            .map(|ij| {
                let (f, g) = (&tables[ij / len], &tables[ij % len]);
                let fg: Table = g.iter().map(|v| v.and_then(|y| f[y as usize])).collect();
                by_code[&code(&fg, n)] as u32
            })
            .collect();
        let inv = tables
            .iter()
            .map(|t| {
                let mut back = vec![None; n as usize];
                for (x, v) in t.iter().enumerate() {
                    if let Some(y) = v {
                        back[*y as usize] = Some(x as u8);
                    }
                }
                by_code[&code(&back, n)] as u32
            })
            .collect();
        let index = elements.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        Ok(Universe {
            n,
            elements,
            index,
            comp,
            inv,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn ground(&self) -> GroundSet {
        GroundSet::Finite(self.n)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[PartialBijection] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &PartialBijection {
        &self.elements[i]
    }

    pub fn index_of(&self, f: &PartialBijection) -> Result<usize> {
        self.index.get(f).copied().ok_or(Error::GroundMismatch {
            left: f.ground(),
            right: self.ground(),
        })
    }

    /// Index of `elements[i] ∘ elements[j]`.
    pub fn compose(&self, i: usize, j: usize) -> usize {
        self.comp[i * self.len() + j] as usize
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inv[i] as usize
    }

    pub fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.len())
    }

    pub fn full_set(&self) -> FixedBitSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    pub fn member_set(&self, expr: &OpenSetExpr) -> Result<FixedBitSet> {
        let mut s = self.empty_set();
        for (i, f) in self.elements.iter().enumerate() {
            if member(f, expr)? {
                s.insert(i);
            }
        }
        Ok(s)
    }

    pub fn basic_set(&self, b: &BasicOpenSet) -> Result<FixedBitSet> {
        b.check_ground(self.ground())?;
        let mut s = self.empty_set();
        for (i, f) in self.elements.iter().enumerate() {
            if member_basic(f, b)? {
                s.insert(i);
            }
        }
        Ok(s)
    }

    /// `{g ∘ h : g in left, h in right}`.
    pub fn compose_sets(&self, left: &FixedBitSet, right: &FixedBitSet) -> FixedBitSet {
        let mut out = self.empty_set();
        for g in left.ones() {
            for h in right.ones() {
                out.insert(self.compose(g, h));
            }
        }
        out
    }

    /// `{g ∘ f : g in set}`.
    pub fn right_translate(&self, set: &FixedBitSet, f: usize) -> FixedBitSet {
        let mut out = self.empty_set();
        for g in set.ones() {
            out.insert(self.compose(g, f));
        }
        out
    }

    /// `{f ∘ g : g in set}`.
    pub fn left_translate(&self, f: usize, set: &FixedBitSet) -> FixedBitSet {
        let mut out = self.empty_set();
        for g in set.ones() {
            out.insert(self.compose(f, g));
        }
        out
    }

    /// The set `{f : |dom f| <= size}`.
    pub fn domain_at_most(&self, size: u32) -> FixedBitSet {
        let mut s = self.empty_set();
        for (i, f) in self.elements.iter().enumerate() {
            if f.pairs().len() <= size as usize {
                s.insert(i);
            }
        }
        s
    }

    pub fn to_elements(&self, set: &FixedBitSet) -> Vec<PartialBijection> {
        set.ones().map(|i| self.elements[i].clone()).collect()
    }
}
