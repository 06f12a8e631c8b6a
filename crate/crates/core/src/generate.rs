//! Seeded random markets, domains and tie-break profiles.
//!
//! All randomness comes from [`ChaCha8Rng`] seeded with a single `u64`
//! (`rng_from_seed`). ChaCha8 output is specified independently of platform
//! and word size, so a seed replays bit-exactly everywhere.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::domain::{enumerate_oi_domain, Domain, IndifferenceStructure, Partition};
use crate::market::Market;
use crate::preference::{AgentId, HouseId, PreferenceRelation};
use crate::tiebreak::{AgentOrder, TieBreakProfile};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn shuffled_houses<R: Rng>(rng: &mut R, m: usize) -> Vec<HouseId> {
    let mut houses: Vec<HouseId> = (0..m).map(HouseId).collect();
    houses.shuffle(rng);
    houses
}

/// Cuts `items` into `k` non-empty consecutive groups at random points.
fn split<R: Rng, T: Clone>(rng: &mut R, items: &[T], k: usize) -> Vec<Vec<T>> {
    assert!(k >= 1 && k <= items.len());
    let mut cuts: Vec<usize> = (1..items.len()).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(k - 1).collect();
    cuts.sort_unstable();
    let mut groups = Vec::with_capacity(k);
    let mut start = 0;
    for c in cuts.into_iter().chain(std::iter::once(items.len())) {
        groups.push(items[start..c].to_vec());
        start = c;
    }
    groups
}

/// A partition of `m` houses into exactly `k` blocks.
pub fn random_partition<R: Rng>(rng: &mut R, m: usize, k: usize) -> Partition {
    let houses = shuffled_houses(rng, m);
    Partition::new(split(rng, &houses, k)).expect("split covers every house once")
}

/// A uniformly random ordering of the blocks of `p`.
pub fn random_oi_relation<R: Rng>(rng: &mut R, p: &Partition) -> PreferenceRelation {
    let mut blocks = p.blocks().to_vec();
    blocks.shuffle(rng);
    PreferenceRelation::new(blocks).expect("block ordering")
}

/// A random weak order: shuffled houses cut into a random number of classes.
pub fn random_weak_order<R: Rng>(rng: &mut R, m: usize) -> PreferenceRelation {
    let houses = shuffled_houses(rng, m);
    let k = rng.random_range(1..=m);
    PreferenceRelation::new(split(rng, &houses, k)).expect("weak order")
}

pub fn random_strict_order<R: Rng>(rng: &mut R, m: usize) -> PreferenceRelation {
    PreferenceRelation::strict(&shuffled_houses(rng, m)).expect("strict order")
}

pub fn random_agent_order<R: Rng>(rng: &mut R, n: usize) -> AgentOrder {
    let mut agents: Vec<AgentId> = (0..n).map(AgentId).collect();
    agents.shuffle(rng);
    AgentOrder::new(agents).expect("permutation")
}

/// Independent uniformly random order for each agent.
pub fn random_tiebreak<R: Rng>(rng: &mut R, n: usize) -> TieBreakProfile {
    TieBreakProfile::new((0..n).map(|_| random_agent_order(rng, n)).collect())
        .expect("orders of matching length")
}

/// A random endowment bijection.
pub fn random_endowment<R: Rng>(rng: &mut R, n: usize) -> Vec<HouseId> {
    shuffled_houses(rng, n)
}

/// A market drawn from the objective-indifferences domain of a random
/// partition with `k` blocks. Agent `i` owns house `i`.
pub fn random_oi_market<R: Rng>(rng: &mut R, n: usize, k: usize) -> (Market, Partition) {
    let p = random_partition(rng, n, k);
    let profile = (0..n).map(|_| random_oi_relation(rng, &p)).collect();
    (
        Market::with_identity_endowment(profile).expect("valid market"),
        p,
    )
}

/// A market with independent random weak orders.
pub fn random_general_market<R: Rng>(rng: &mut R, n: usize) -> Market {
    let profile = (0..n).map(|_| random_weak_order(rng, n)).collect();
    Market::with_identity_endowment(profile).expect("valid market")
}

/// A market with independent random strict orders.
pub fn random_strict_market<R: Rng>(rng: &mut R, n: usize) -> Market {
    let profile = (0..n).map(|_| random_strict_order(rng, n)).collect();
    Market::with_identity_endowment(profile).expect("valid market")
}

/// A domain of 2 to 4 random weak orders over `m >= 2` houses that is not
/// contained in any objective-indifferences domain.
pub fn random_non_oi_domain<R: Rng>(rng: &mut R, m: usize) -> Domain {
    assert!(m >= 2, "a non-objective domain needs two houses");
    loop {
        let size = rng.random_range(2..=4);
        let d = Domain::new((0..size).map(|_| random_weak_order(rng, m)).collect())
            .expect("non-empty domain");
        if let IndifferenceStructure::Subjective { .. } = d.objective_partition() {
            return d;
        }
    }
}

/// The symmetric closure of a random non-objective domain. Adding reversals
/// never merges indifference classes, so the result stays non-objective.
pub fn random_symmetric_non_oi_domain<R: Rng>(rng: &mut R, m: usize) -> Domain {
    random_non_oi_domain(rng, m).symmetric_closure()
}

/// An objective-indifferences domain for a random partition with `k` blocks.
pub fn random_oi_domain<R: Rng>(rng: &mut R, m: usize, k: usize) -> (Domain, Partition) {
    let p = random_partition(rng, m, k);
    (
        enumerate_oi_domain(&p).expect("k within enumeration limit"),
        p,
    )
}
