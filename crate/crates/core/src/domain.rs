//! Partitions of the house set, preference domains, and the predicates that
//! classify a domain: does it have objective indifferences, and is it
//! symmetric.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::preference::{HouseId, PreferenceRelation};

/// Largest block count [`enumerate_oi_domain`] will expand (8! relations).
pub const MAX_ENUMERATED_BLOCKS: usize = 8;

/// Largest house count [`all_weak_orders`] will expand (4683 relations).
pub const MAX_WEAK_ORDER_HOUSES: usize = 6;

/// A partition of the houses `0..m` into blocks.
///
/// Blocks are kept in canonical form (each block sorted, blocks ordered by
/// their smallest house) so that equal partitions compare equal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<HouseId>>,
    block_of: Vec<usize>,
}

impl Partition {
    pub fn new(blocks: Vec<Vec<HouseId>>) -> Result<Self> {
        let m: usize = blocks.iter().map(Vec::len).sum();
        if m == 0 {
            return Err(Error::InvalidPartition("no houses".into()));
        }
        let mut blocks = blocks;
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            b.sort_unstable();
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        let mut block_of = vec![usize::MAX; m];
        for (k, b) in blocks.iter().enumerate() {
            for &h in b {
                if h.0 >= m {
                    return Err(Error::InvalidPartition(format!(
                        "{h} outside house set of size {m}"
                    )));
                }
                if block_of[h.0] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("{h} in two blocks")));
                }
                block_of[h.0] = k;
            }
        }
        Ok(Self { blocks, block_of })
    }

    pub fn from_indices<C: AsRef<[usize]>>(blocks: &[C]) -> Result<Self> {
        Self::new(
            blocks
                .iter()
                .map(|b| b.as_ref().iter().map(|&h| HouseId(h)).collect())
                .collect(),
        )
    }

    /// Every house in its own block.
    pub fn discrete(m: usize) -> Self {
        Self::new((0..m).map(|h| vec![HouseId(h)]).collect()).expect("discrete partition")
    }

    pub fn blocks(&self) -> &[Vec<HouseId>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn house_count(&self) -> usize {
        self.block_of.len()
    }

    /// Index of the block containing `h`.
    pub fn block_index(&self, h: HouseId) -> Result<usize> {
        self.block_of
            .get(h.0)
            .copied()
            .ok_or(Error::UnknownHouse(h))
    }

    pub fn block_of(&self, h: HouseId) -> Result<&[HouseId]> {
        Ok(&self.blocks[self.block_index(h)?])
    }

    /// True if the relation's indifference classes are exactly these blocks.
    pub fn admits(&self, rel: &PreferenceRelation) -> bool {
        rel.house_count() == self.house_count()
            && rel.classes().len() == self.blocks.len()
            && rel.classes().iter().all(|class| {
                let k = self.block_of[class[0].0];
                self.blocks[k] == *class
            })
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{{{}}}", b.iter().join(","))?;
        }
        f.write_str("}")
    }
}

/// The indifference partition a single relation induces.
pub fn indifference_partition(rel: &PreferenceRelation) -> Partition {
    Partition::new(rel.classes().to_vec()).expect("classes of a relation partition its houses")
}

/// Two relations and two houses with `h1 I_alpha h2` but `h1 P_beta h2`.
///
/// This is the certificate that a domain is not contained in any
/// objective-indifferences domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaBetaPair {
    pub alpha: PreferenceRelation,
    pub beta: PreferenceRelation,
    pub h1: HouseId,
    pub h2: HouseId,
}

impl AlphaBetaPair {
    pub fn new(
        alpha: PreferenceRelation,
        beta: PreferenceRelation,
        h1: HouseId,
        h2: HouseId,
    ) -> Result<Self> {
        let pair = Self {
            alpha,
            beta,
            h1,
            h2,
        };
        pair.validate()?;
        Ok(pair)
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.alpha.house_count();
        if self.beta.house_count() != m {
            return Err(Error::InvalidPair(
                "relations rank different house sets".into(),
            ));
        }
        if !self.alpha.contains(self.h1) || !self.alpha.contains(self.h2) {
            return Err(Error::InvalidPair("house outside the relations".into()));
        }
        if self.h1 == self.h2 {
            return Err(Error::InvalidPair("h1 and h2 must differ".into()));
        }
        if !self.alpha.indifferent_between(self.h1, self.h2) {
            return Err(Error::InvalidPair(format!(
                "{} and {} are not indifferent under alpha",
                self.h1, self.h2
            )));
        }
        if !self.beta.prefers(self.h1, self.h2) {
            return Err(Error::InvalidPair(format!(
                "{} is not strictly preferred to {} under beta",
                self.h1, self.h2
            )));
        }
        Ok(())
    }
}

/// Result of [`Domain::objective_partition`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndifferenceStructure {
    /// Every relation induces this partition; the domain sits inside its
    /// objective-indifferences domain.
    Objective(Partition),
    /// Two relations disagree about an indifference. `alpha_index` and
    /// `beta_index` locate the pair within the domain.
    Subjective {
        pair: AlphaBetaPair,
        alpha_index: usize,
        beta_index: usize,
    },
}

/// A finite, non-empty set of weak orders over a common house set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Domain {
    relations: Vec<PreferenceRelation>,
}

impl Domain {
    /// Builds a domain, dropping repeated relations (first occurrence wins).
    pub fn new(relations: Vec<PreferenceRelation>) -> Result<Self> {
        let Some(first) = relations.first() else {
            return Err(Error::InvalidDomain("empty domain".into()));
        };
        let m = first.house_count();
        if let Some(r) = relations.iter().find(|r| r.house_count() != m) {
            return Err(Error::InvalidDomain(format!(
                "relations over {m} and {} houses",
                r.house_count()
            )));
        }
        let relations = relations.into_iter().unique().collect();
        Ok(Self { relations })
    }

    pub fn relations(&self) -> &[PreferenceRelation] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn house_count(&self) -> usize {
        self.relations[0].house_count()
    }

    pub fn position(&self, rel: &PreferenceRelation) -> Option<usize> {
        self.relations.iter().position(|r| r == rel)
    }

    pub fn contains(&self, rel: &PreferenceRelation) -> bool {
        self.position(rel).is_some()
    }

    /// The domain with `extra` appended (duplicates dropped).
    pub fn union(&self, extra: impl IntoIterator<Item = PreferenceRelation>) -> Result<Self> {
        Self::new(self.relations.iter().cloned().chain(extra).collect())
    }

    /// Classifies the domain's indifferences.
    ///
    /// Returns the common partition when every relation has the same
    /// indifference classes. Otherwise returns the lexicographically first
    /// `(alpha, beta, h1, h2)` with `h1 I_alpha h2` and `h1 P_beta h2`.
    pub fn objective_partition(&self) -> IndifferenceStructure {
        let first = indifference_partition(&self.relations[0]);
        if self.relations.iter().all(|r| first.admits(r)) {
            return IndifferenceStructure::Objective(first);
        }
        let m = self.house_count();
        for (ai, alpha) in self.relations.iter().enumerate() {
            for (bi, beta) in self.relations.iter().enumerate() {
                for h1 in (0..m).map(HouseId) {
                    for h2 in (0..m).map(HouseId) {
                        if h1 != h2 && alpha.indifferent_between(h1, h2) && beta.prefers(h1, h2) {
                            return IndifferenceStructure::Subjective {
                                pair: AlphaBetaPair {
                                    alpha: alpha.clone(),
                                    beta: beta.clone(),
                                    h1,
                                    h2,
                                },
                                alpha_index: ai,
                                beta_index: bi,
                            };
                        }
                    }
                }
            }
        }
        unreachable!("relations with different indifference partitions always disagree on a pair")
    }

    /// The first ordered pair `(h1, h2)` that some relation ranks `h1 P h2`
    /// while no relation ranks `h2 P h1`, or `None` if the domain is symmetric.
    pub fn missing_reversal(&self) -> Option<(HouseId, HouseId)> {
        let m = self.house_count();
        (0..m)
            .cartesian_product(0..m)
            .map(|(a, b)| (HouseId(a), HouseId(b)))
            .find(|&(a, b)| {
                self.relations.iter().any(|r| r.prefers(a, b))
                    && !self.relations.iter().any(|r| r.prefers(b, a))
            })
    }

    pub fn is_symmetric(&self) -> bool {
        self.missing_reversal().is_none()
    }

    /// The smallest symmetric domain containing this one, obtained by adding
    /// the reversal of every relation.
    pub fn symmetric_closure(&self) -> Self {
        self.union(
            self.relations
                .iter()
                .map(PreferenceRelation::reversed)
                .collect::<Vec<_>>(),
        )
        .expect("closure of a valid domain")
    }
}

/// Every relation whose indifference classes are exactly the blocks of `p`,
/// i.e. all `K!` orderings of the blocks, in lexicographic order of block
/// indices.
pub fn enumerate_oi_domain(p: &Partition) -> Result<Domain> {
    let k = p.block_count();
    if k > MAX_ENUMERATED_BLOCKS {
        return Err(Error::TooLarge {
            what: "domain",
            size: k,
            limit: MAX_ENUMERATED_BLOCKS,
        });
    }
    let relations = (0..k)
        .permutations(k)
        .map(|order| {
            PreferenceRelation::new(order.into_iter().map(|b| p.blocks()[b].clone()).collect())
                .expect("block orderings are valid relations")
        })
        .collect();
    Domain::new(relations)
}

/// Every weak order over `m` houses (the general-indifferences domain).
pub fn all_weak_orders(m: usize) -> Result<Domain> {
    if m == 0 {
        return Err(Error::InvalidDomain("no houses".into()));
    }
    if m > MAX_WEAK_ORDER_HOUSES {
        return Err(Error::TooLarge {
            what: "weak-order domain",
            size: m,
            limit: MAX_WEAK_ORDER_HOUSES,
        });
    }
    // Assign each house a class label; keep labelings whose used labels are
    // exactly 0..k (surjective), which are the ordered set partitions.
    let mut relations = Vec::new();
    for labels in (0..m).map(|_| 0..m).multi_cartesian_product() {
        let k = labels.iter().max().map_or(0, |&x| x + 1);
        let mut classes = vec![Vec::new(); k];
        for (h, &l) in labels.iter().enumerate() {
            classes[l].push(HouseId(h));
        }
        if classes.iter().all(|c| !c.is_empty()) {
            relations.push(PreferenceRelation::new(classes).expect("ordered set partition"));
        }
    }
    Domain::new(relations)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(classes: &[&[usize]]) -> PreferenceRelation {
        PreferenceRelation::from_indices(classes).unwrap()
    }

    #[test]
    fn two_block_partition_domain() {
        let d = Domain::new(vec![rel(&[&[0, 1], &[2]]), rel(&[&[2], &[0, 1]])]).unwrap();
        assert_eq!(
            d.objective_partition(),
            IndifferenceStructure::Objective(
                Partition::from_indices(&[&[0, 1][..], &[2]]).unwrap()
            )
        );
    }

    #[test]
    fn strict_singleton_domain_is_discrete() {
        let d = Domain::new(vec![rel(&[&[0], &[1]])]).unwrap();
        assert_eq!(
            d.objective_partition(),
            IndifferenceStructure::Objective(Partition::discrete(2))
        );
    }

    #[test]
    fn indifference_disagreement_witness() {
        let d = Domain::new(vec![rel(&[&[0, 1]]), rel(&[&[0], &[1]])]).unwrap();
        match d.objective_partition() {
            IndifferenceStructure::Subjective {
                pair,
                alpha_index,
                beta_index,
            } => {
                assert_eq!((alpha_index, beta_index), (0, 1));
                assert_eq!((pair.h1, pair.h2), (HouseId(0), HouseId(1)));
                pair.validate().unwrap();
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn symmetry() {
        let p = Partition::from_indices(&[&[0][..], &[1, 2]]).unwrap();
        let oi = enumerate_oi_domain(&p).unwrap();
        assert!(oi.is_symmetric());
        let extended = oi.union([rel(&[&[0], &[1], &[2]])]).unwrap();
        assert_eq!(extended.missing_reversal(), Some((HouseId(1), HouseId(2))));
        let both = extended.union([rel(&[&[0], &[2], &[1]])]).unwrap();
        assert!(both.is_symmetric());

        let lone = Domain::new(vec![rel(&[&[0], &[1]])]).unwrap();
        assert_eq!(lone.missing_reversal(), Some((HouseId(0), HouseId(1))));
        assert!(lone.symmetric_closure().is_symmetric());
    }

    #[test]
    fn enumerate_sizes() {
        let p = Partition::from_indices(&[&[0, 1][..], &[2]]).unwrap();
        assert_eq!(enumerate_oi_domain(&p).unwrap().len(), 2);
        let whole = Partition::from_indices(&[&[0, 1, 2]]).unwrap();
        let d = enumerate_oi_domain(&whole).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.relations()[0], rel(&[&[0, 1, 2]]));
        assert_eq!(
            enumerate_oi_domain(&Partition::discrete(3)).unwrap().len(),
            6
        );
        assert!(matches!(
            enumerate_oi_domain(&Partition::discrete(9)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn weak_order_counts_are_fubini_numbers() {
        let counts: Vec<usize> = (1..=4).map(|m| all_weak_orders(m).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 3, 13, 75]);
    }

    #[test]
    fn domain_rejects_mixed_house_sets() {
        assert!(Domain::new(vec![]).is_err());
        assert!(Domain::new(vec![rel(&[&[0, 1]]), rel(&[&[0, 1, 2]])]).is_err());
    }

    #[test]
    fn pair_validation() {
        let a = rel(&[&[0, 1]]);
        let b = rel(&[&[1], &[0]]);
        assert!(AlphaBetaPair::new(a.clone(), b.clone(), HouseId(0), HouseId(1)).is_err());
        assert!(AlphaBetaPair::new(a, b, HouseId(1), HouseId(0)).is_ok());
    }
}
