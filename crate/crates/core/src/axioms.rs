//! Brute-force oracles for individual rationality, Pareto efficiency,
//! blocking coalitions, the core and the weak core.
//!
//! Everything here enumerates. The oracles are the yardstick the engine is
//! measured against, so they stay as plain as possible and are guarded by
//! hard size limits instead of being clever.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::market::{Allocation, Market};
use crate::preference::{AgentId, HouseId, PreferenceRelation};
use crate::tiebreak::TieBreakProfile;
use crate::ttc::ttc_fixed;

/// Largest market [`pareto_dominators`] enumerates (8! allocations).
pub const MAX_PARETO_AGENTS: usize = 8;

/// Largest market the blocking and core scans enumerate.
pub const MAX_CORE_AGENTS: usize = 7;

fn guard(n: usize, limit: usize, what: &'static str) -> Result<()> {
    if n > limit {
        Err(Error::TooLarge {
            what,
            size: n,
            limit,
        })
    } else {
        Ok(())
    }
}

/// First agent that strictly prefers its endowment to its assignment.
pub fn ir_violation(market: &Market, x: &Allocation) -> Option<AgentId> {
    market.agents().find(|&i| {
        market
            .preference(i)
            .prefers(market.endowment_of(i), x.house(i))
    })
}

pub fn is_individually_rational(market: &Market, x: &Allocation) -> bool {
    ir_violation(market, x).is_none()
}

/// `y` Pareto dominates `x`: nobody worse off, somebody strictly better.
pub fn pareto_dominates(market: &Market, y: &Allocation, x: &Allocation) -> bool {
    let mut strict = false;
    for i in market.agents() {
        let r = market.preference(i);
        if r.prefers(x.house(i), y.house(i)) {
            return false;
        }
        strict |= r.prefers(y.house(i), x.house(i));
    }
    strict
}

/// Every allocation in `0..n`, in lexicographic order.
pub fn all_allocations(n: usize) -> impl Iterator<Item = Allocation> {
    (0..n)
        .permutations(n)
        .map(|p| Allocation::new_unchecked(p.into_iter().map(HouseId).collect()))
}

/// Up to `limit` allocations that Pareto dominate `x`, in lexicographic
/// order. Empty exactly when `x` is Pareto efficient.
pub fn pareto_dominators(market: &Market, x: &Allocation, limit: usize) -> Result<Vec<Allocation>> {
    let n = market.agent_count();
    guard(n, MAX_PARETO_AGENTS, "market for Pareto enumeration")?;
    market.check_allocation(x)?;
    Ok(all_allocations(n)
        .filter(|y| pareto_dominates(market, y, x))
        .take(limit)
        .collect())
}

pub fn is_pareto_efficient(market: &Market, x: &Allocation) -> Result<bool> {
    Ok(pareto_dominators(market, x, 1)?.is_empty())
}

/// Which blocking notion to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BlockingMode {
    /// Every member weakly better, at least one strictly: defines the core.
    Core,
    /// Every member strictly better: defines the weak core.
    WeakCore,
}

/// A coalition and a reallocation of its own endowments that blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockingWitness {
    pub coalition: Vec<AgentId>,
    /// `(member, house)` for each member, in coalition order.
    pub reallocation: Vec<(AgentId, HouseId)>,
    pub mode: BlockingMode,
}

fn improves(
    r: &PreferenceRelation,
    new: HouseId,
    old: HouseId,
    mode: BlockingMode,
) -> (bool, bool) {
    match mode {
        BlockingMode::Core => (r.weakly_prefers(new, old), r.prefers(new, old)),
        BlockingMode::WeakCore => {
            let s = r.prefers(new, old);
            (s, s)
        }
    }
}

/// Re-checks a witness from scratch against `x`.
pub fn is_blocking(market: &Market, x: &Allocation, w: &BlockingWitness) -> bool {
    let n = market.agent_count();
    if w.coalition.is_empty()
        || w.reallocation.len() != w.coalition.len()
        || w.coalition.iter().any(|a| a.0 >= n)
    {
        return false;
    }
    let members: Vec<AgentId> = w.reallocation.iter().map(|&(a, _)| a).collect();
    if members.iter().sorted().ne(w.coalition.iter().sorted()) || !w.coalition.iter().all_unique() {
        return false;
    }
    let owned: Vec<HouseId> = w
        .coalition
        .iter()
        .map(|&a| market.endowment_of(a))
        .sorted()
        .collect();
    let given: Vec<HouseId> = w.reallocation.iter().map(|&(_, h)| h).sorted().collect();
    if owned != given {
        return false;
    }
    let mut any_strict = false;
    for &(a, h) in &w.reallocation {
        let (ok, strict) = improves(market.preference(a), h, x.house(a), w.mode);
        if !ok {
            return false;
        }
        any_strict |= strict;
    }
    any_strict
}

/// First blocking coalition of `x`, by coalition size, then coalition in
/// lexicographic order, then reallocation in lexicographic order.
pub fn find_blocking(
    market: &Market,
    x: &Allocation,
    mode: BlockingMode,
) -> Result<Option<BlockingWitness>> {
    let n = market.agent_count();
    guard(n, MAX_CORE_AGENTS, "market for blocking search")?;
    market.check_allocation(x)?;
    Ok(find_blocking_unguarded(market, x, mode))
}

fn find_blocking_unguarded(
    market: &Market,
    x: &Allocation,
    mode: BlockingMode,
) -> Option<BlockingWitness> {
    let n = market.agent_count();
    for size in 1..=n {
        for coalition in (0..n).map(AgentId).combinations(size) {
            let owned: Vec<HouseId> = coalition.iter().map(|&a| market.endowment_of(a)).collect();
            'perm: for perm in (0..size).permutations(size) {
                let mut any_strict = false;
                for (k, &a) in coalition.iter().enumerate() {
                    let (ok, strict) =
                        improves(market.preference(a), owned[perm[k]], x.house(a), mode);
                    if !ok {
                        continue 'perm;
                    }
                    any_strict |= strict;
                }
                if any_strict {
                    let reallocation = coalition
                        .iter()
                        .enumerate()
                        .map(|(k, &a)| (a, owned[perm[k]]))
                        .collect();
                    return Some(BlockingWitness {
                        coalition,
                        reallocation,
                        mode,
                    });
                }
            }
        }
    }
    None
}

pub fn in_core(market: &Market, x: &Allocation) -> Result<bool> {
    Ok(find_blocking(market, x, BlockingMode::Core)?.is_none())
}

pub fn in_weak_core(market: &Market, x: &Allocation) -> Result<bool> {
    Ok(find_blocking(market, x, BlockingMode::WeakCore)?.is_none())
}

fn unblocked(market: &Market, mode: BlockingMode) -> Result<Vec<Allocation>> {
    let n = market.agent_count();
    guard(n, MAX_CORE_AGENTS, "market for core enumeration")?;
    Ok(all_allocations(n)
        .filter(|x| find_blocking_unguarded(market, x, mode).is_none())
        .collect())
}

/// All core allocations, in lexicographic order.
pub fn core(market: &Market) -> Result<Vec<Allocation>> {
    unblocked(market, BlockingMode::Core)
}

/// All weak-core allocations, in lexicographic order.
pub fn weak_core(market: &Market) -> Result<Vec<Allocation>> {
    unblocked(market, BlockingMode::WeakCore)
}

/// The first core allocation, without enumerating the rest.
pub fn first_core_allocation(market: &Market) -> Result<Option<Allocation>> {
    let n = market.agent_count();
    guard(n, MAX_CORE_AGENTS, "market for core enumeration")?;
    Ok(all_allocations(n)
        .find(|x| find_blocking_unguarded(market, x, BlockingMode::Core).is_none()))
}

/// True if every agent is indifferent between its houses in any two of the
/// given allocations.
pub fn essentially_single_valued(market: &Market, allocations: &[Allocation]) -> bool {
    allocations.iter().tuple_combinations().all(|(x, y)| {
        market.agents().all(|i| {
            market
                .preference(i)
                .indifferent_between(x.house(i), y.house(i))
        })
    })
}

/// Checks that moving from `R` to `R'` only lifts each agent's TTC
/// assignment (`L(x_i, R_i) ⊆ L(x_i, R'_i)`), then reports whether the
/// tie-broken TTC allocation is unchanged.
pub fn check_monotone_pair(
    market: &Market,
    tb: &TieBreakProfile,
    transformed: &[PreferenceRelation],
) -> Result<bool> {
    let x = ttc_fixed(market, tb)?.allocation;
    let other = market.with_profile(transformed.to_vec())?;
    for i in market.agents() {
        let before = market.preference(i).lower_contour_set(x.house(i))?;
        let after = other.preference(i).lower_contour_set(x.house(i))?;
        if !before.is_subset(&after) {
            return Err(Error::NotMonotone { agent: i });
        }
    }
    Ok(ttc_fixed(&other, tb)?.allocation == x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(classes: &[&[usize]]) -> PreferenceRelation {
        PreferenceRelation::from_indices(classes).unwrap()
    }

    fn alloc(h: &[usize]) -> Allocation {
        Allocation::from_indices(h).unwrap()
    }

    #[test]
    fn ir_checks() {
        let m =
            Market::with_identity_endowment(vec![rel(&[&[0], &[1]]), rel(&[&[0], &[1]])]).unwrap();
        assert!(is_individually_rational(&m, &alloc(&[0, 1])));
        assert_eq!(ir_violation(&m, &alloc(&[1, 0])), Some(AgentId(0)));
    }

    #[test]
    fn unique_tops_are_efficient_and_unblocked() {
        let m = Market::with_identity_endowment(vec![
            rel(&[&[1], &[0], &[2]]),
            rel(&[&[2], &[0, 1]]),
            rel(&[&[0], &[1, 2]]),
        ])
        .unwrap();
        let x = alloc(&[1, 2, 0]);
        assert!(pareto_dominators(&m, &x, usize::MAX).unwrap().is_empty());
        assert_eq!(find_blocking(&m, &x, BlockingMode::Core).unwrap(), None);
        assert_eq!(find_blocking(&m, &x, BlockingMode::WeakCore).unwrap(), None);
    }

    #[test]
    fn witnesses_reverify() {
        let m = Market::with_identity_endowment(vec![rel(&[&[0, 1]]), rel(&[&[0], &[1]])]).unwrap();
        let x = alloc(&[0, 1]);
        let w = find_blocking(&m, &x, BlockingMode::Core).unwrap().unwrap();
        assert_eq!(w.coalition, vec![AgentId(0), AgentId(1)]);
        assert!(is_blocking(&m, &x, &w));
        assert_eq!(find_blocking(&m, &x, BlockingMode::WeakCore).unwrap(), None);

        let mut forged = w.clone();
        forged.reallocation[0].1 = HouseId(0);
        assert!(!is_blocking(&m, &x, &forged));
    }

    #[test]
    fn size_guards() {
        let r = PreferenceRelation::indifferent(9).unwrap();
        let m = Market::with_identity_endowment(vec![r; 9]).unwrap();
        let x = m.endowment_allocation();
        assert!(matches!(
            pareto_dominators(&m, &x, 1),
            Err(Error::TooLarge { .. })
        ));
        assert!(matches!(
            find_blocking(&m, &x, BlockingMode::Core),
            Err(Error::TooLarge { .. })
        ));
        assert!(core(&m).is_err());
    }

    #[test]
    fn single_valued_checks() {
        let m = Market::with_identity_endowment(vec![rel(&[&[0, 1]]), rel(&[&[0], &[1]])]).unwrap();
        assert!(essentially_single_valued(&m, &[alloc(&[0, 1])]));
        assert!(!essentially_single_valued(
            &m,
            &[alloc(&[0, 1]), alloc(&[1, 0])]
        ));
    }

    #[test]
    fn identity_transformation_is_monotone() {
        let m = Market::with_identity_endowment(vec![rel(&[&[1], &[0]]), rel(&[&[0, 1]])]).unwrap();
        let tb = TieBreakProfile::self_first(2);
        assert!(check_monotone_pair(&m, &tb, m.profile()).unwrap());
    }

    #[test]
    fn demoting_the_assignment_is_rejected() {
        let m =
            Market::with_identity_endowment(vec![rel(&[&[0], &[1]]), rel(&[&[1], &[0]])]).unwrap();
        let tb = TieBreakProfile::self_first(2);
        let worse = vec![rel(&[&[1], &[0]]), rel(&[&[1], &[0]])];
        assert_eq!(
            check_monotone_pair(&m, &tb, &worse),
            Err(Error::NotMonotone { agent: AgentId(0) })
        );
    }
}
