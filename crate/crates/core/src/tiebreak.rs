//! Fixed tie-breaking: turning weak preferences into strict ones.
//!
//! Each agent `i` carries a strict order over agents. When `i` is
//! indifferent between two houses, the one whose *owner* comes first in
//! `i`'s order wins. Strict comparisons are never touched.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::market::Market;
use crate::preference::{AgentId, HouseId, PreferenceRelation};

/// A strict order over the agents `0..n`, most favoured first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AgentOrder {
    order: Vec<AgentId>,
    rank: Vec<usize>,
}

impl AgentOrder {
    pub fn new(order: Vec<AgentId>) -> Result<Self> {
        let n = order.len();
        let mut rank = vec![usize::MAX; n];
        for (k, &a) in order.iter().enumerate() {
            if a.0 >= n || rank[a.0] != usize::MAX {
                return Err(Error::InvalidOrder(format!("({})", order.iter().join(","))));
            }
            rank[a.0] = k;
        }
        Ok(Self { order, rank })
    }

    pub fn from_indices(order: &[usize]) -> Result<Self> {
        Self::new(order.iter().map(|&a| AgentId(a)).collect())
    }

    /// `first` followed by the remaining agents in ascending order.
    pub fn starting_with(n: usize, first: AgentId) -> Result<Self> {
        Self::new(
            std::iter::once(first)
                .chain((0..n).map(AgentId).filter(|&a| a != first))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn agents(&self) -> &[AgentId] {
        &self.order
    }

    /// True if `a` is ranked ahead of `b`.
    pub fn ranks_above(&self, a: AgentId, b: AgentId) -> bool {
        self.rank[a.0] < self.rank[b.0]
    }

    pub fn position(&self, a: AgentId) -> usize {
        self.rank[a.0]
    }
}

impl fmt::Debug for AgentOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.order.iter().join(","))
    }
}

/// One [`AgentOrder`] per agent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TieBreakProfile {
    orders: Vec<AgentOrder>,
}

impl TieBreakProfile {
    pub fn new(orders: Vec<AgentOrder>) -> Result<Self> {
        let n = orders.len();
        if let Some(o) = orders.iter().find(|o| o.len() != n) {
            return Err(Error::InvalidOrder(format!(
                "{o:?} does not order all {n} agents"
            )));
        }
        Ok(Self { orders })
    }

    pub fn from_indices<O: AsRef<[usize]>>(orders: &[O]) -> Result<Self> {
        Self::new(
            orders
                .iter()
                .map(|o| AgentOrder::from_indices(o.as_ref()))
                .collect::<Result<_>>()?,
        )
    }

    /// Every agent uses the same order.
    pub fn uniform(order: AgentOrder) -> Self {
        Self {
            orders: vec![order.clone(); order.len()],
        }
    }

    /// Every agent ranks itself first and the rest ascending.
    pub fn self_first(n: usize) -> Self {
        Self {
            orders: (0..n)
                .map(|i| AgentOrder::starting_with(n, AgentId(i)).expect("valid order"))
                .collect(),
        }
    }

    /// Self-first, with explicit tails for some agents. Each override lists
    /// the agents after the owner itself.
    pub fn self_first_with(n: usize, tails: &[(AgentId, Vec<AgentId>)]) -> Result<Self> {
        let mut tb = Self::self_first(n);
        for (agent, tail) in tails {
            if agent.0 >= n {
                return Err(Error::UnknownAgent(*agent));
            }
            if tail.len() + 1 != n {
                return Err(Error::LengthMismatch {
                    what: "tie-break order",
                    expected: n,
                    got: tail.len() + 1,
                });
            }
            let order = std::iter::once(*agent)
                .chain(tail.iter().copied())
                .collect();
            tb.orders[agent.0] = AgentOrder::new(order)?;
        }
        Ok(tb)
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn order(&self, agent: AgentId) -> &AgentOrder {
        &self.orders[agent.0]
    }

    pub fn orders(&self) -> &[AgentOrder] {
        &self.orders
    }

    /// True if every agent ranks itself first.
    pub fn is_self_first(&self) -> bool {
        self.orders
            .iter()
            .enumerate()
            .all(|(i, o)| o.agents()[0] == AgentId(i))
    }
}

/// A strict ranking of all houses, best first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StrictPreference {
    ranking: Vec<HouseId>,
    position: Vec<usize>,
}

impl StrictPreference {
    pub fn new(ranking: Vec<HouseId>) -> Result<Self> {
        let m = ranking.len();
        let mut position = vec![usize::MAX; m];
        for (k, &h) in ranking.iter().enumerate() {
            if h.0 >= m || position[h.0] != usize::MAX {
                return Err(Error::InvalidRelation(format!(
                    "ranking ({}) is not a permutation of the houses",
                    ranking.iter().join(",")
                )));
            }
            position[h.0] = k;
        }
        Ok(Self { ranking, position })
    }

    pub fn from_indices(ranking: &[usize]) -> Result<Self> {
        Self::new(ranking.iter().map(|&h| HouseId(h)).collect())
    }

    pub fn ranking(&self) -> &[HouseId] {
        &self.ranking
    }

    pub fn len(&self) -> usize {
        self.ranking.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranking.is_empty()
    }

    /// `a` strictly above `b`.
    pub fn prefers(&self, a: HouseId, b: HouseId) -> bool {
        self.position[a.0] < self.position[b.0]
    }

    pub fn position(&self, h: HouseId) -> usize {
        self.position[h.0]
    }

    /// The same ranking as a [`PreferenceRelation`] with singleton classes.
    pub fn to_relation(&self) -> PreferenceRelation {
        PreferenceRelation::strict(&self.ranking).expect("permutation")
    }
}

impl fmt::Debug for StrictPreference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ranking.iter().join(" > "))
    }
}

/// Linearizes `rel` using `order` over the owners given by `endowment`.
pub fn break_ties(
    rel: &PreferenceRelation,
    order: &AgentOrder,
    endowment: &[HouseId],
) -> Result<StrictPreference> {
    let n = endowment.len();
    if order.len() != n {
        return Err(Error::LengthMismatch {
            what: "agents in tie-break order",
            expected: n,
            got: order.len(),
        });
    }
    if rel.house_count() != n {
        return Err(Error::LengthMismatch {
            what: "houses in relation",
            expected: n,
            got: rel.house_count(),
        });
    }
    let mut owner = vec![usize::MAX; n];
    for (i, &h) in endowment.iter().enumerate() {
        if h.0 >= n || owner[h.0] != usize::MAX {
            return Err(Error::NotBijection("endowment".into()));
        }
        owner[h.0] = i;
    }
    let ranking = rel
        .classes()
        .iter()
        .flat_map(|class| {
            class
                .iter()
                .copied()
                .sorted_by_key(|h| order.position(AgentId(owner[h.0])))
        })
        .collect();
    StrictPreference::new(ranking)
}

/// Tie-broken preferences for the whole market.
pub fn break_profile(market: &Market, tb: &TieBreakProfile) -> Result<Vec<StrictPreference>> {
    if tb.len() != market.agent_count() {
        return Err(Error::LengthMismatch {
            what: "tie-break orders",
            expected: market.agent_count(),
            got: tb.len(),
        });
    }
    market
        .agents()
        .map(|i| break_ties(market.preference(i), tb.order(i), market.endowment()))
        .collect()
}
