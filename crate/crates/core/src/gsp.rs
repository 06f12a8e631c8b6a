//! Exhaustive search for group manipulations of `TTC_tb` inside a domain.
//!
//! A coalition `Q` manipulates when some joint misreport `R'_Q` drawn from
//! the domain gives every member a house it weakly prefers under its *true*
//! preferences, with at least one member strictly better off.

use itertools::Itertools;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::market::{Allocation, Market};
use crate::preference::{AgentId, HouseId, PreferenceRelation};
use crate::tiebreak::{break_profile, break_ties, TieBreakProfile};
use crate::ttc::{allocate, ttc_fixed};

/// Default cap on (coalition, misreport) evaluations per search.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManipulationWitness {
    pub coalition: Vec<AgentId>,
    /// Reported relation of each coalition member, in coalition order. A
    /// member may report truthfully.
    pub misreports: Vec<PreferenceRelation>,
    pub truthful: Allocation,
    pub manipulated: Allocation,
}

/// Number of evaluations a search up to `max_coalition` members performs.
pub fn search_size(agents: usize, domain_len: usize, max_coalition: usize) -> u128 {
    let mut total: u128 = 0;
    let mut choose: u128 = 1;
    let mut power: u128 = 1;
    for k in 1..=max_coalition.min(agents) {
        choose = choose * (agents - k + 1) as u128 / k as u128;
        power = power.saturating_mul(domain_len as u128);
        total = total.saturating_add(choose.saturating_mul(power));
    }
    total
}

fn manipulates(market: &Market, coalition: &[AgentId], x: &[HouseId], y: &[HouseId]) -> bool {
    let mut strict = false;
    for &i in coalition {
        let r = market.preference(i);
        if r.prefers(x[i.0], y[i.0]) {
            return false;
        }
        strict |= r.prefers(y[i.0], x[i.0]);
    }
    strict
}

/// Mixed-radix increment, last digit fastest. False once it wraps around.
fn advance(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// First group manipulation with at most `max_coalition` members, using the
/// default budget.
pub fn find_group_manipulation(
    market: &Market,
    domain: &Domain,
    tb: &TieBreakProfile,
    max_coalition: usize,
) -> Result<Option<ManipulationWitness>> {
    find_group_manipulation_with_budget(market, domain, tb, max_coalition, DEFAULT_BUDGET)
}

/// Enumerates coalitions by size and then lexicographically; for each
/// coalition, misreports run lexicographically over domain indices (first
/// member most significant), truthful reports included. Returns the first
/// manipulation found, or `None` if there is none in range.
pub fn find_group_manipulation_with_budget(
    market: &Market,
    domain: &Domain,
    tb: &TieBreakProfile,
    max_coalition: usize,
    budget: u64,
) -> Result<Option<ManipulationWitness>> {
    let n = market.agent_count();
    if domain.house_count() != n {
        return Err(Error::LengthMismatch {
            what: "houses in domain",
            expected: n,
            got: domain.house_count(),
        });
    }
    if let Some(agent) = market.first_outside(domain) {
        return Err(Error::ProfileOutsideDomain { agent });
    }
    let required = search_size(n, domain.len(), max_coalition);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }

    let truthful = break_profile(market, tb)?;
    // reports[i][d]: agent i's tie-broken ranking when reporting domain[d]
    let reports: Vec<Vec<Vec<HouseId>>> = market
        .agents()
        .map(|i| {
            domain
                .relations()
                .iter()
                .map(|r| {
                    break_ties(r, tb.order(i), market.endowment()).map(|s| s.ranking().to_vec())
                })
                .collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let owners = market.owners();
    let base: Vec<&[HouseId]> = truthful.iter().map(|s| s.ranking()).collect();
    let x = allocate(owners, &base);

    let mut rankings = base.clone();
    for size in 1..=max_coalition.min(n) {
        for coalition in (0..n).map(AgentId).combinations(size) {
            let mut digits = vec![0usize; size];
            loop {
                for (k, &a) in coalition.iter().enumerate() {
                    rankings[a.0] = &reports[a.0][digits[k]];
                }
                let y = allocate(owners, &rankings);
                if manipulates(market, &coalition, &x, &y) {
                    return Ok(Some(ManipulationWitness {
                        misreports: digits
                            .iter()
                            .map(|&d| domain.relations()[d].clone())
                            .collect(),
                        coalition,
                        truthful: Allocation::new_unchecked(x),
                        manipulated: Allocation::new_unchecked(y),
                    }));
                }
                if !advance(&mut digits, domain.len()) {
                    break;
                }
            }
            for &a in &coalition {
                rankings[a.0] = base[a.0];
            }
        }
    }
    Ok(None)
}

/// Single-agent strategy-proofness check: coalitions of size one.
pub fn verify_single_agent_sp(
    market: &Market,
    domain: &Domain,
    tb: &TieBreakProfile,
) -> Result<Option<ManipulationWitness>> {
    find_group_manipulation(market, domain, tb, 1)
}

/// Recomputes both outcomes from scratch and checks the witness.
pub fn is_manipulation(
    market: &Market,
    domain: &Domain,
    tb: &TieBreakProfile,
    w: &ManipulationWitness,
) -> Result<bool> {
    if w.coalition.is_empty()
        || w.coalition.len() != w.misreports.len()
        || !w.coalition.iter().all_unique()
        || w.misreports.iter().any(|r| !domain.contains(r))
        || market.first_outside(domain).is_some()
    {
        return Ok(false);
    }
    let x = ttc_fixed(market, tb)?.allocation;
    let mut reported = market.profile().to_vec();
    for (a, r) in w.coalition.iter().zip(&w.misreports) {
        if a.0 >= reported.len() {
            return Ok(false);
        }
        reported[a.0] = r.clone();
    }
    let y = ttc_fixed(&market.with_profile(reported)?, tb)?.allocation;
    if x != w.truthful || y != w.manipulated {
        return Ok(false);
    }
    Ok(manipulates(market, &w.coalition, x.houses(), y.houses()))
}
