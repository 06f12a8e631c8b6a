//! Gale's top trading cycles, and TTC with fixed tie-breaking.
//!
//! Every remaining agent points at the owner of its favourite remaining
//! house. The pointer graph has out-degree one, so following pointers from
//! any agent ends in a cycle; that cycle trades and leaves the market.

use crate::error::{Error, Result};
use crate::market::{Allocation, Market};
use crate::preference::{AgentId, HouseId};
use crate::tiebreak::{break_profile, StrictPreference, TieBreakProfile};

/// Which agent the pointer chase starts from at each step.
///
/// The set of cycles, and therefore the allocation, does not depend on this
/// choice; only the execution order in the trace does.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CycleSelection {
    #[default]
    FromLowestAgent,
    FromHighestAgent,
}

/// The cycles executed, in execution order. Each cycle lists
/// `(agent, house received)` with every agent receiving the endowment of the
/// agent after it; cycles are rotated to start at their lowest agent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExecutionTrace {
    cycles: Vec<Vec<(AgentId, HouseId)>>,
}

impl ExecutionTrace {
    pub fn cycles(&self) -> &[Vec<(AgentId, HouseId)>] {
        &self.cycles
    }

    /// Agent sets of each cycle, in execution order.
    pub fn cycle_agents(&self) -> Vec<Vec<AgentId>> {
        self.cycles
            .iter()
            .map(|c| c.iter().map(|&(a, _)| a).collect())
            .collect()
    }

    /// `steps[i]` is the zero-based index of the cycle containing agent `i`.
    pub fn steps(&self) -> Vec<usize> {
        let n = self.cycles.iter().map(Vec::len).sum();
        let mut steps = vec![usize::MAX; n];
        for (k, c) in self.cycles.iter().enumerate() {
            for &(a, _) in c {
                steps[a.0] = k;
            }
        }
        steps
    }
}

/// Allocation plus the trace that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TtcOutcome {
    pub allocation: Allocation,
    pub trace: ExecutionTrace,
}

struct Engine<'a> {
    owner: &'a [AgentId],
    prefs: &'a [&'a [HouseId]],
    cursor: Vec<usize>,
    house_taken: Vec<bool>,
    assigned: Vec<Option<HouseId>>,
}

impl<'a> Engine<'a> {
    fn new(owner: &'a [AgentId], prefs: &'a [&'a [HouseId]]) -> Self {
        let n = owner.len();
        Self {
            owner,
            prefs,
            cursor: vec![0; n],
            house_taken: vec![false; n],
            assigned: vec![None; n],
        }
    }

    /// Favourite remaining house of `i`. Cursors only move forward because
    /// houses never come back.
    fn top(&mut self, i: usize) -> HouseId {
        let prefs = self.prefs[i];
        while self.house_taken[prefs[self.cursor[i]].0] {
            self.cursor[i] += 1;
        }
        prefs[self.cursor[i]]
    }

    fn run(
        mut self,
        selection: CycleSelection,
        trace: Option<&mut Vec<Vec<(AgentId, HouseId)>>>,
    ) -> Vec<HouseId> {
        let n = self.owner.len();
        let mut remaining = n;
        let mut seen_at = vec![usize::MAX; n];
        let mut path = Vec::with_capacity(n);
        let mut cycles = trace;
        while remaining > 0 {
            let start = match selection {
                CycleSelection::FromLowestAgent => (0..n).find(|&i| self.assigned[i].is_none()),
                CycleSelection::FromHighestAgent => {
                    (0..n).rev().find(|&i| self.assigned[i].is_none())
                }
            }
            .expect("an unassigned agent remains");
            path.clear();
            let mut i = start;
            while seen_at[i] == usize::MAX {
                seen_at[i] = path.len();
                path.push(i);
                i = self.owner[self.top(i).0].0;
            }
            let cycle = &path[seen_at[i]..];
            let mut executed = Vec::with_capacity(cycle.len());
            for &a in cycle {
                let h = self.top(a);
                executed.push((AgentId(a), h));
            }
            for &(a, h) in &executed {
                self.assigned[a.0] = Some(h);
                self.house_taken[h.0] = true;
            }
            remaining -= executed.len();
            for &a in &path {
                seen_at[a] = usize::MAX;
            }
            if let Some(out) = cycles.as_deref_mut() {
                let lowest = executed
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, (a, _))| *a)
                    .map(|(k, _)| k)
                    .unwrap();
                executed.rotate_left(lowest);
                out.push(executed);
            }
        }
        self.assigned.into_iter().map(|h| h.unwrap()).collect()
    }
}

fn owners_of(endowment: &[HouseId]) -> Result<Vec<AgentId>> {
    let n = endowment.len();
    let mut owner = vec![AgentId(usize::MAX); n];
    for (i, &h) in endowment.iter().enumerate() {
        if h.0 >= n || owner[h.0].0 != usize::MAX {
            return Err(Error::NotBijection("endowment".into()));
        }
        owner[h.0] = AgentId(i);
    }
    Ok(owner)
}

fn check_profile(n: usize, prefs: &[StrictPreference]) -> Result<()> {
    if prefs.len() != n {
        return Err(Error::LengthMismatch {
            what: "strict preferences",
            expected: n,
            got: prefs.len(),
        });
    }
    if let Some(p) = prefs.iter().find(|p| p.len() != n) {
        return Err(Error::LengthMismatch {
            what: "ranked houses",
            expected: n,
            got: p.len(),
        });
    }
    Ok(())
}

/// TTC on strict preferences.
pub fn ttc_strict(endowment: &[HouseId], prefs: &[StrictPreference]) -> Result<TtcOutcome> {
    ttc_strict_with(endowment, prefs, CycleSelection::default())
}

pub fn ttc_strict_with(
    endowment: &[HouseId],
    prefs: &[StrictPreference],
    selection: CycleSelection,
) -> Result<TtcOutcome> {
    let owner = owners_of(endowment)?;
    check_profile(owner.len(), prefs)?;
    let rankings: Vec<&[HouseId]> = prefs.iter().map(StrictPreference::ranking).collect();
    let mut cycles = Vec::new();
    let houses = Engine::new(&owner, &rankings).run(selection, Some(&mut cycles));
    Ok(TtcOutcome {
        allocation: Allocation::new_unchecked(houses),
        trace: ExecutionTrace { cycles },
    })
}

/// `TTC_tb(R) = TTC(R_tb)`: tie-break the profile, then run strict TTC.
pub fn ttc_fixed(market: &Market, tb: &TieBreakProfile) -> Result<TtcOutcome> {
    ttc_fixed_with(market, tb, CycleSelection::default())
}

pub fn ttc_fixed_with(
    market: &Market,
    tb: &TieBreakProfile,
    selection: CycleSelection,
) -> Result<TtcOutcome> {
    let strict = break_profile(market, tb)?;
    ttc_strict_with(market.endowment(), &strict, selection)
}

/// Allocation-only TTC over pre-validated rankings, for the search loops.
pub(crate) fn allocate(owner: &[AgentId], rankings: &[&[HouseId]]) -> Vec<HouseId> {
    Engine::new(owner, rankings).run(CycleSelection::FromLowestAgent, None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(n: usize) -> Vec<HouseId> {
        (0..n).map(HouseId).collect()
    }

    fn strict(rankings: &[&[usize]]) -> Vec<StrictPreference> {
        rankings
            .iter()
            .map(|r| StrictPreference::from_indices(r).unwrap())
            .collect()
    }

    #[test]
    fn no_trade_when_everyone_likes_their_own() {
        let prefs = strict(&[&[0, 1, 2], &[1, 0, 2], &[2, 1, 0]]);
        let out = ttc_strict(&identity(3), &prefs).unwrap();
        assert_eq!(out.allocation, Allocation::identity(3));
        assert_eq!(out.trace.cycles().len(), 3);
        assert!(out.trace.cycles().iter().all(|c| c.len() == 1));
    }

    #[test]
    fn two_agent_swap() {
        let prefs = strict(&[&[1, 0], &[0, 1]]);
        let out = ttc_strict(&identity(2), &prefs).unwrap();
        assert_eq!(out.allocation, Allocation::from_indices(&[1, 0]).unwrap());
        assert_eq!(
            out.trace.cycles(),
            &[vec![(AgentId(0), HouseId(1)), (AgentId(1), HouseId(0))]]
        );
    }

    #[test]
    fn chase_passes_through_tail() {
        // 0 -> 1 -> 2 -> 1: agent 0 is not on the first cycle
        let prefs = strict(&[&[1, 0, 2], &[2, 0, 1], &[1, 2, 0]]);
        let out = ttc_strict(&identity(3), &prefs).unwrap();
        assert_eq!(
            out.trace.cycle_agents(),
            vec![vec![AgentId(1), AgentId(2)], vec![AgentId(0)]]
        );
        assert_eq!(
            out.allocation,
            Allocation::from_indices(&[0, 2, 1]).unwrap()
        );
        assert_eq!(out.trace.steps(), vec![1, 0, 0]);
    }

    #[test]
    fn non_identity_endowment() {
        // agent 0 owns h2, agent 1 owns h1; both want h1
        let endowment = vec![HouseId(1), HouseId(0)];
        let prefs = strict(&[&[0, 1], &[0, 1]]);
        let out = ttc_strict(&endowment, &prefs).unwrap();
        assert_eq!(out.allocation, Allocation::from_indices(&[1, 0]).unwrap());
    }

    #[test]
    fn malformed_profiles() {
        let prefs = strict(&[&[0, 1]]);
        assert!(ttc_strict(&identity(2), &prefs).is_err());
        let prefs = strict(&[&[0, 1, 2], &[0, 1]]);
        assert!(ttc_strict(&identity(2), &prefs).is_err());
        let prefs = strict(&[&[0, 1], &[1, 0]]);
        assert!(ttc_strict(&[HouseId(0), HouseId(0)], &prefs).is_err());
    }
}
