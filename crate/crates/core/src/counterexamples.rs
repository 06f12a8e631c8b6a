//! Generators for the constructive halves of the maximality results.
//!
//! Given a domain that is not objective-indifferences, these build a market
//! and a self-first tie-break profile on which `TTC_tb` fails Pareto
//! efficiency, core selection, or (for symmetric domains) group
//! strategy-proofness. Nothing is taken on trust: every construction runs the
//! engine and the brute-force oracles and fails with
//! [`Error::Postcondition`] if the expected failure does not materialize.
//!
//! Agents are relabeled so that agent `0` owns `h1` and agent `1` owns `h2`;
//! the remaining agents own the remaining houses in ascending order. House
//! ids are never renamed, so the market's endowment is the relabeling.

use crate::axioms::{
    find_blocking, is_blocking, pareto_dominates, pareto_dominators, BlockingMode, BlockingWitness,
    MAX_CORE_AGENTS, MAX_PARETO_AGENTS,
};
use crate::domain::{AlphaBetaPair, Domain, IndifferenceStructure};
use crate::error::{Error, Result};
use crate::gsp::{is_manipulation, ManipulationWitness};
use crate::market::{Allocation, Market};
use crate::preference::{AgentId, HouseId, PreferenceRelation};
use crate::tiebreak::TieBreakProfile;
use crate::ttc::ttc_fixed;

/// A constructed market together with the sets used to build its profile.
#[derive(Clone, Debug)]
pub struct Construction {
    pub pair: AlphaBetaPair,
    /// Relabeled market; agent 0 owns `h1`, agent 1 owns `h2`.
    pub market: Market,
    /// Self-first tie-breaking.
    pub tiebreak: TieBreakProfile,
    /// Agents reporting `alpha`.
    pub a: Vec<AgentId>,
    /// Agents reporting `beta`.
    pub b: Vec<AgentId>,
    /// Agents reporting `gamma` (group strategy-proofness construction only).
    pub c: Vec<AgentId>,
    /// `TTC_tb(R)`, checked to equal the endowment.
    pub outcome: Allocation,
    /// The endowment with agents 0 and 1 swapped.
    pub swap: Allocation,
}

/// Pareto-efficiency failure: `swap` dominates `outcome`.
#[derive(Clone, Debug)]
pub struct PeViolation {
    pub construction: Construction,
}

/// Core-selection failure: the core is non-empty but `outcome` is blocked.
#[derive(Clone, Debug)]
pub struct CsViolation {
    pub construction: Construction,
    /// Grand coalition trading to `swap`.
    pub blocking: BlockingWitness,
    /// `Some(true)` when the core oracle confirmed `swap` is unblocked;
    /// `None` above the oracle's size limit.
    pub swap_in_core: Option<bool>,
}

/// Group strategy-proofness failure: agent 0 reports `gamma`, agent 1 gains.
#[derive(Clone, Debug)]
pub struct GspViolation {
    pub construction: Construction,
    pub gamma: PreferenceRelation,
    pub witness: ManipulationWitness,
}

fn relabeling(m: usize, h1: HouseId, h2: HouseId) -> Vec<HouseId> {
    let mut endowment = vec![h1, h2];
    endowment.extend((0..m).map(HouseId).filter(|&h| h != h1 && h != h2));
    endowment
}

fn postcondition(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Postcondition(what()))
    }
}

/// A = {i : w_i R_alpha w_0} \ {1}; B = complement; everyone self-first.
fn ab_construction(pair: &AlphaBetaPair) -> Result<Construction> {
    pair.validate()?;
    let m = pair.alpha.house_count();
    let endowment = relabeling(m, pair.h1, pair.h2);
    let w0 = endowment[0];
    let (a, b): (Vec<AgentId>, Vec<AgentId>) = (0..m)
        .map(AgentId)
        .partition(|&i| i != AgentId(1) && pair.alpha.weakly_prefers(endowment[i.0], w0));
    let profile = (0..m)
        .map(|i| {
            if a.contains(&AgentId(i)) {
                pair.alpha.clone()
            } else {
                pair.beta.clone()
            }
        })
        .collect();
    finish(
        pair.clone(),
        endowment,
        profile,
        a,
        b,
        Vec::new(),
        TieBreakProfile::self_first(m),
    )
}

fn finish(
    pair: AlphaBetaPair,
    endowment: Vec<HouseId>,
    profile: Vec<PreferenceRelation>,
    a: Vec<AgentId>,
    b: Vec<AgentId>,
    c: Vec<AgentId>,
    tiebreak: TieBreakProfile,
) -> Result<Construction> {
    let market = Market::new(endowment, profile)?;
    let outcome = ttc_fixed(&market, &tiebreak)?.allocation;
    let swap = market
        .endowment_allocation()
        .swapped(AgentId(0), AgentId(1));
    Ok(Construction {
        pair,
        market,
        tiebreak,
        a,
        b,
        c,
        outcome,
        swap,
    })
}

/// Builds a market whose tie-broken TTC outcome is the endowment and is
/// Pareto dominated by swapping the houses of agents 0 and 1.
pub fn construct_pe_violation(pair: &AlphaBetaPair) -> Result<PeViolation> {
    let c = ab_construction(pair)?;
    let w = c.market.endowment_allocation();
    postcondition(c.outcome == w, || {
        format!(
            "engine returned {:?}, expected the endowment {w:?}",
            c.outcome
        )
    })?;
    postcondition(pareto_dominates(&c.market, &c.swap, &c.outcome), || {
        format!("{:?} does not dominate {:?}", c.swap, c.outcome)
    })?;
    if c.market.agent_count() <= MAX_PARETO_AGENTS {
        let dominators = pareto_dominators(&c.market, &c.outcome, usize::MAX)?;
        postcondition(dominators.contains(&c.swap), || {
            "Pareto oracle did not list the swap".to_string()
        })?;
    }
    Ok(PeViolation { construction: c })
}

/// First `(alpha, beta, h1, h2)` in lexicographic scan order with
/// `h1 I_alpha h2`, `h1 P_beta h2`, and `h1` ranked by `beta` at least as
/// high as every house `alpha` finds indifferent to `h2`.
pub fn select_cs_pair(domain: &Domain) -> Result<AlphaBetaPair> {
    if let IndifferenceStructure::Objective(_) = domain.objective_partition() {
        return Err(Error::DomainIsObjective);
    }
    let m = domain.house_count();
    for alpha in domain.relations() {
        for beta in domain.relations() {
            for h1 in (0..m).map(HouseId) {
                for h2 in (0..m).map(HouseId) {
                    if h1 == h2 || !alpha.indifferent_between(h1, h2) || !beta.prefers(h1, h2) {
                        continue;
                    }
                    let maximal = (0..m)
                        .map(HouseId)
                        .filter(|&h| alpha.indifferent_between(h, h2))
                        .all(|h| beta.weakly_prefers(h1, h));
                    if maximal {
                        return AlphaBetaPair::new(alpha.clone(), beta.clone(), h1, h2);
                    }
                }
            }
        }
    }
    unreachable!("a non-objective domain always has a beta-maximal pair")
}

/// Builds a market with a non-empty core whose tie-broken TTC outcome lies
/// outside it.
pub fn construct_cs_violation(domain: &Domain) -> Result<CsViolation> {
    let pair = select_cs_pair(domain)?;
    let c = ab_construction(&pair)?;
    let w = c.market.endowment_allocation();
    postcondition(c.outcome == w, || {
        format!(
            "engine returned {:?}, expected the endowment {w:?}",
            c.outcome
        )
    })?;
    let n = c.market.agent_count();
    let blocking = BlockingWitness {
        coalition: (0..n).map(AgentId).collect(),
        reallocation: (0..n)
            .map(|i| (AgentId(i), c.swap.house(AgentId(i))))
            .collect(),
        mode: BlockingMode::Core,
    };
    postcondition(is_blocking(&c.market, &c.outcome, &blocking), || {
        "grand coalition does not block the outcome".to_string()
    })?;
    let swap_in_core = if n <= MAX_CORE_AGENTS {
        let blocked = find_blocking(&c.market, &c.swap, BlockingMode::Core)?;
        postcondition(blocked.is_none(), || {
            format!("swap allocation is blocked: {blocked:?}")
        })?;
        Some(true)
    } else {
        None
    };
    Ok(CsViolation {
        construction: c,
        blocking,
        swap_in_core,
    })
}

/// The first disagreeing pair of a domain plus the first relation that
/// reverses it, as required by [`construct_gsp_violation`].
pub fn select_gsp_triple(domain: &Domain) -> Result<(AlphaBetaPair, PreferenceRelation)> {
    let pair = match domain.objective_partition() {
        IndifferenceStructure::Objective(_) => return Err(Error::DomainIsObjective),
        IndifferenceStructure::Subjective { pair, .. } => pair,
    };
    let gamma = domain
        .relations()
        .iter()
        .find(|r| r.prefers(pair.h2, pair.h1))
        .cloned()
        .ok_or_else(|| {
            Error::InvalidPair(format!("no relation ranks {} above {}", pair.h2, pair.h1))
        })?;
    Ok((pair, gamma))
}

/// Builds a market where agent 0 can report `gamma` at no cost to itself
/// and strictly benefit agent 1.
pub fn construct_gsp_violation(
    pair: &AlphaBetaPair,
    gamma: &PreferenceRelation,
) -> Result<GspViolation> {
    let m = pair.alpha.house_count();
    let tail: Vec<AgentId> = std::iter::once(AgentId(0))
        .chain((2..m).map(AgentId))
        .collect();
    construct_gsp_violation_with_tails(pair, gamma, &[(AgentId(1), tail)])
}

/// [`construct_gsp_violation`] under other self-first tie-breaking: each
/// listed agent ranks itself first and then its tail. Unlisted agents use
/// the ascending tail.
pub fn construct_gsp_violation_with_tails(
    pair: &AlphaBetaPair,
    gamma: &PreferenceRelation,
    tails: &[(AgentId, Vec<AgentId>)],
) -> Result<GspViolation> {
    pair.validate()?;
    let m = pair.alpha.house_count();
    if gamma.house_count() != m || !gamma.prefers(pair.h2, pair.h1) {
        return Err(Error::InvalidPair(format!(
            "gamma must rank {} strictly above {}",
            pair.h2, pair.h1
        )));
    }
    let endowment = relabeling(m, pair.h1, pair.h2);
    let w0 = endowment[0];
    let agents = (0..m).map(AgentId);
    let a: Vec<AgentId> = agents
        .clone()
        .filter(|&i| i != AgentId(1) && pair.alpha.weakly_prefers(endowment[i.0], w0))
        .collect();
    let b: Vec<AgentId> = agents
        .clone()
        .filter(|i| {
            !a.contains(i) && (*i == AgentId(1) || pair.beta.weakly_prefers(endowment[i.0], w0))
        })
        .collect();
    let c: Vec<AgentId> = agents
        .clone()
        .filter(|i| !a.contains(i) && !b.contains(i))
        .collect();
    let profile = agents
        .map(|i| {
            if a.contains(&i) {
                pair.alpha.clone()
            } else if b.contains(&i) {
                pair.beta.clone()
            } else {
                gamma.clone()
            }
        })
        .collect();
    let tiebreak = TieBreakProfile::self_first_with(m, tails)?;
    let construction = finish(pair.clone(), endowment, profile, a, b, c, tiebreak)?;

    let market = &construction.market;
    let x = &construction.outcome;
    let (w0, w1) = (
        market.endowment_of(AgentId(0)),
        market.endowment_of(AgentId(1)),
    );
    postcondition(x.house(AgentId(0)) == w0, || {
        format!(
            "truthful run gives agent 1 {} instead of its endowment",
            x.house(AgentId(0))
        )
    })?;
    postcondition(
        market
            .preference(AgentId(1))
            .prefers(w0, x.house(AgentId(1))),
        || "agent 2 is not strictly worse than the swap in the truthful run".to_string(),
    )?;

    let mut reported = market.profile().to_vec();
    reported[0] = gamma.clone();
    let y = ttc_fixed(&market.with_profile(reported)?, &construction.tiebreak)?.allocation;
    postcondition(
        y.house(AgentId(0)) == w1 && y.house(AgentId(1)) == w0,
        || format!("misreport run gives {y:?}, expected agents 1 and 2 to swap"),
    )?;

    let witness = ManipulationWitness {
        coalition: vec![AgentId(0), AgentId(1)],
        misreports: vec![gamma.clone(), pair.beta.clone()],
        truthful: x.clone(),
        manipulated: y,
    };
    let domain = Domain::new(vec![pair.alpha.clone(), pair.beta.clone(), gamma.clone()])?;
    postcondition(
        is_manipulation(market, &domain, &construction.tiebreak, &witness)?,
        || "witness does not re-verify".to_string(),
    )?;
    Ok(GspViolation {
        construction,
        gamma: gamma.clone(),
        witness,
    })
}

/// Builds the profile of the `x = w` lemma: `alpha` on `a`, `beta` on `b`,
/// `alpha` for everyone else, and self-first tie-breaking.
///
/// `a` and `b` must be sandwiched:
/// `{i : w_i P_alpha h1} ⊆ a ⊆ {i : w_i R_alpha h1}` and
/// `{i ∉ a : w_i P_beta h2} ⊆ b ⊆ {i ∉ a : w_i R_beta h2}`.
pub fn lemma_xw_profile(
    endowment: &[HouseId],
    alpha: &PreferenceRelation,
    beta: &PreferenceRelation,
    h1: HouseId,
    h2: HouseId,
    a: &[AgentId],
    b: &[AgentId],
) -> Result<(Market, TieBreakProfile)> {
    let n = endowment.len();
    for h in [h1, h2] {
        if !alpha.contains(h) || !beta.contains(h) {
            return Err(Error::UnknownHouse(h));
        }
    }
    let in_a = membership(n, a)?;
    let in_b = membership(n, b)?;
    for i in 0..n {
        let w = endowment[i];
        if alpha.prefers(w, h1) && !in_a[i] {
            return Err(Error::Sandwich(format!(
                "agent {} missing from A",
                AgentId(i)
            )));
        }
        if in_a[i] && !alpha.weakly_prefers(w, h1) {
            return Err(Error::Sandwich(format!(
                "agent {} too low for A",
                AgentId(i)
            )));
        }
        if in_a[i] && in_b[i] {
            return Err(Error::Sandwich(format!(
                "agent {} in both A and B",
                AgentId(i)
            )));
        }
        if !in_a[i] && beta.prefers(w, h2) && !in_b[i] {
            return Err(Error::Sandwich(format!(
                "agent {} missing from B",
                AgentId(i)
            )));
        }
        if in_b[i] && !beta.weakly_prefers(w, h2) {
            return Err(Error::Sandwich(format!(
                "agent {} too low for B",
                AgentId(i)
            )));
        }
    }
    let profile = (0..n)
        .map(|i| if in_b[i] { beta.clone() } else { alpha.clone() })
        .collect();
    let market = Market::new(endowment.to_vec(), profile)?;
    Ok((market, TieBreakProfile::self_first(n)))
}

fn membership(n: usize, set: &[AgentId]) -> Result<Vec<bool>> {
    let mut v = vec![false; n];
    for &i in set {
        if i.0 >= n {
            return Err(Error::UnknownAgent(i));
        }
        v[i.0] = true;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::core;

    fn rel(classes: &[&[usize]]) -> PreferenceRelation {
        PreferenceRelation::from_indices(classes).unwrap()
    }

    fn two_house_pair() -> AlphaBetaPair {
        AlphaBetaPair::new(rel(&[&[0, 1]]), rel(&[&[0], &[1]]), HouseId(0), HouseId(1)).unwrap()
    }

    #[test]
    fn pe_two_houses() {
        let v = construct_pe_violation(&two_house_pair()).unwrap();
        let c = &v.construction;
        assert_eq!(c.outcome, Allocation::from_indices(&[0, 1]).unwrap());
        assert_eq!(c.swap, Allocation::from_indices(&[1, 0]).unwrap());
        assert_eq!(c.a, vec![AgentId(0)]);
        assert_eq!(c.b, vec![AgentId(1)]);
    }

    #[test]
    fn invalid_pair_is_rejected() {
        let bad = AlphaBetaPair {
            alpha: rel(&[&[0], &[1]]),
            beta: rel(&[&[0], &[1]]),
            h1: HouseId(0),
            h2: HouseId(1),
        };
        assert!(matches!(
            construct_pe_violation(&bad),
            Err(Error::InvalidPair(_))
        ));
    }

    #[test]
    fn cs_two_houses() {
        let d = Domain::new(vec![rel(&[&[0, 1]]), rel(&[&[0], &[1]])]).unwrap();
        let v = construct_cs_violation(&d).unwrap();
        assert_eq!(v.swap_in_core, Some(true));
        assert_eq!(
            core(&v.construction.market).unwrap(),
            vec![v.construction.swap.clone()]
        );
    }

    #[test]
    fn cs_rejects_objective_domain() {
        let d = Domain::new(vec![rel(&[&[0, 1], &[2]]), rel(&[&[2], &[0, 1]])]).unwrap();
        assert!(matches!(
            construct_cs_violation(&d),
            Err(Error::DomainIsObjective)
        ));
    }

    #[test]
    fn cs_pair_respects_beta_maximality() {
        // alpha: {0,1,2} tied; beta: 2 > 1 > 0. Scanning finds h1 = 1, h2 = 0
        // first, but 2 is beta-better and alpha-tied with 0, so it is skipped.
        let d = Domain::new(vec![rel(&[&[0, 1, 2]]), rel(&[&[2], &[1], &[0]])]).unwrap();
        let pair = select_cs_pair(&d).unwrap();
        assert_eq!((pair.h1, pair.h2), (HouseId(2), HouseId(0)));
    }

    #[test]
    fn gsp_two_houses() {
        let v = construct_gsp_violation(&two_house_pair(), &rel(&[&[1], &[0]])).unwrap();
        assert_eq!(
            v.witness.truthful,
            Allocation::from_indices(&[0, 1]).unwrap()
        );
        assert_eq!(
            v.witness.manipulated,
            Allocation::from_indices(&[1, 0]).unwrap()
        );
    }

    #[test]
    fn gsp_requires_reversal() {
        let err = construct_gsp_violation(&two_house_pair(), &rel(&[&[0], &[1]])).unwrap_err();
        assert!(matches!(err, Error::InvalidPair(_)));
        let d = Domain::new(vec![rel(&[&[0, 1]]), rel(&[&[0], &[1]])]).unwrap();
        assert!(select_gsp_triple(&d).is_err());
    }

    #[test]
    fn lemma_everyone_in_a() {
        // h1 = worst house under alpha, so A = N is sandwiched
        let alpha = rel(&[&[2], &[0], &[1]]);
        let beta = rel(&[&[0], &[1], &[2]]);
        let endowment: Vec<HouseId> = (0..3).map(HouseId).collect();
        let all: Vec<AgentId> = (0..3).map(AgentId).collect();
        let (m, tb) =
            lemma_xw_profile(&endowment, &alpha, &beta, HouseId(1), HouseId(1), &all, &[]).unwrap();
        assert_eq!(
            ttc_fixed(&m, &tb).unwrap().allocation,
            m.endowment_allocation()
        );
    }

    #[test]
    fn lemma_sandwich_violations() {
        let alpha = rel(&[&[2], &[0], &[1]]);
        let beta = rel(&[&[0], &[1], &[2]]);
        let endowment: Vec<HouseId> = (0..3).map(HouseId).collect();
        // agent 2 holds alpha's top house but is left out of A
        let err = lemma_xw_profile(
            &endowment,
            &alpha,
            &beta,
            HouseId(0),
            HouseId(0),
            &[AgentId(0)],
            &[],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Sandwich(_)));
    }
}
