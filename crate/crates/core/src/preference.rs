//! Weak preference orders over houses.
//!
//! A [`PreferenceRelation`] is stored as an ordered list of indifference
//! classes. Houses in the same class are mutually indifferent; every house in
//! an earlier class is strictly preferred to every house in a later one. With
//! this representation completeness, reflexivity and transitivity hold by
//! construction, so the only thing left to validate is that the classes
//! partition the house set.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Dense index of a house within a market, `0..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HouseId(pub usize);

/// Dense index of an agent within a market, `0..n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(pub usize);

impl HouseId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl AgentId {
    pub fn index(self) -> usize {
        self.0
    }
}

// Displayed one-based to match the usual h_1..h_n / 1..n labels.
impl fmt::Display for HouseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h{}", self.0 + 1)
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0 + 1)
    }
}

/// Outcome of comparing two houses under a weak order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparison {
    StrictlyPrefers,
    Indifferent,
    StrictlyDisprefers,
}

/// A weak order on houses `0..m`, as ranked indifference classes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PreferenceRelation {
    classes: Vec<Vec<HouseId>>,
    // rank[h] = index of the class containing h
    rank: Vec<usize>,
}

impl PreferenceRelation {
    /// Builds a relation from ranked classes, best first.
    ///
    /// The classes must be non-empty, pairwise disjoint, and cover
    /// `0..m` where `m` is the total number of houses listed.
    pub fn new(classes: Vec<Vec<HouseId>>) -> Result<Self> {
        let m: usize = classes.iter().map(Vec::len).sum();
        if m == 0 {
            return Err(Error::InvalidRelation("no houses ranked".into()));
        }
        let mut rank = vec![usize::MAX; m];
        let mut classes = classes;
        for (k, class) in classes.iter_mut().enumerate() {
            if class.is_empty() {
                return Err(Error::InvalidRelation(format!("class {k} is empty")));
            }
            class.sort_unstable();
            for &h in class.iter() {
                if h.0 >= m {
                    return Err(Error::InvalidRelation(format!(
                        "{h} is outside the house set of size {m}"
                    )));
                }
                if rank[h.0] != usize::MAX {
                    return Err(Error::InvalidRelation(format!("{h} ranked twice")));
                }
                rank[h.0] = k;
            }
        }
        Ok(Self { classes, rank })
    }

    /// Convenience constructor from plain indices.
    pub fn from_indices<C: AsRef<[usize]>>(classes: &[C]) -> Result<Self> {
        Self::new(
            classes
                .iter()
                .map(|c| c.as_ref().iter().map(|&h| HouseId(h)).collect())
                .collect(),
        )
    }

    /// The strict order ranking `order[0]` first.
    pub fn strict(order: &[HouseId]) -> Result<Self> {
        Self::new(order.iter().map(|&h| vec![h]).collect())
    }

    /// Total indifference over `m` houses.
    pub fn indifferent(m: usize) -> Result<Self> {
        Self::new(vec![(0..m).map(HouseId).collect()])
    }

    pub fn house_count(&self) -> usize {
        self.rank.len()
    }

    pub fn classes(&self) -> &[Vec<HouseId>] {
        &self.classes
    }

    pub fn is_strict(&self) -> bool {
        self.classes.len() == self.rank.len()
    }

    pub fn contains(&self, h: HouseId) -> bool {
        h.0 < self.rank.len()
    }

    /// Position of the class holding `h`; 0 is the top class.
    pub fn class_rank(&self, h: HouseId) -> Result<usize> {
        self.rank.get(h.0).copied().ok_or(Error::UnknownHouse(h))
    }

    pub fn class_of(&self, h: HouseId) -> Result<&[HouseId]> {
        Ok(&self.classes[self.class_rank(h)?])
    }

    /// Three-way comparison of `a` against `b`.
    pub fn compare(&self, a: HouseId, b: HouseId) -> Result<Comparison> {
        let ra = self.class_rank(a)?;
        let rb = self.class_rank(b)?;
        Ok(match ra.cmp(&rb) {
            std::cmp::Ordering::Less => Comparison::StrictlyPrefers,
            std::cmp::Ordering::Equal => Comparison::Indifferent,
            std::cmp::Ordering::Greater => Comparison::StrictlyDisprefers,
        })
    }

    /// `a P b`. Panics on houses outside the relation.
    pub fn prefers(&self, a: HouseId, b: HouseId) -> bool {
        self.rank[a.0] < self.rank[b.0]
    }

    /// `a R b`. Panics on houses outside the relation.
    pub fn weakly_prefers(&self, a: HouseId, b: HouseId) -> bool {
        self.rank[a.0] <= self.rank[b.0]
    }

    /// `a I b`. Panics on houses outside the relation.
    pub fn indifferent_between(&self, a: HouseId, b: HouseId) -> bool {
        self.rank[a.0] == self.rank[b.0]
    }

    /// All houses weakly below `h`, including `h` itself.
    pub fn lower_contour_set(&self, h: HouseId) -> Result<BTreeSet<HouseId>> {
        let r = self.class_rank(h)?;
        Ok(self.classes[r..].iter().flatten().copied().collect())
    }

    /// The order with its classes listed worst first.
    pub fn reversed(&self) -> Self {
        let mut classes = self.classes.clone();
        classes.reverse();
        Self::new(classes).expect("reversal keeps a valid partition")
    }

    /// Moves the class holding `h` to the top, keeping everything else in order.
    pub fn lift_class(&self, h: HouseId) -> Result<Self> {
        let r = self.class_rank(h)?;
        let mut classes = self.classes.clone();
        let top = classes.remove(r);
        classes.insert(0, top);
        Self::new(classes)
    }
}

impl fmt::Debug for PreferenceRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders as `h1 h2 > h3`, best class first.
impl fmt::Display for PreferenceRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, class) in self.classes.iter().enumerate() {
            if k > 0 {
                f.write_str(" > ")?;
            }
            for (j, h) in class.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{h}")?;
            }
        }
        Ok(())
    }
}
