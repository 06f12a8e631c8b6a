use std::fmt;

use itertools::Itertools;

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::preference::{AgentId, HouseId, PreferenceRelation};

fn check_bijection(houses: &[HouseId], what: &str) -> Result<Vec<AgentId>> {
    let n = houses.len();
    let mut holder = vec![None; n];
    for (i, &h) in houses.iter().enumerate() {
        if h.0 >= n {
            return Err(Error::NotBijection(format!(
                "{what}: {h} is outside the house set of size {n}"
            )));
        }
        if let Some(j) = holder[h.0] {
            return Err(Error::NotBijection(format!(
                "{what}: {h} given to agents {} and {}",
                AgentId(j),
                AgentId(i)
            )));
        }
        holder[h.0] = Some(i);
    }
    Ok(holder.into_iter().map(|j| AgentId(j.unwrap())).collect())
}

/// An assignment of one house to each agent.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Allocation {
    houses: Vec<HouseId>,
}

impl Allocation {
    pub fn new(houses: Vec<HouseId>) -> Result<Self> {
        check_bijection(&houses, "allocation")?;
        Ok(Self { houses })
    }

    pub fn from_indices(houses: &[usize]) -> Result<Self> {
        Self::new(houses.iter().map(|&h| HouseId(h)).collect())
    }

    pub(crate) fn new_unchecked(houses: Vec<HouseId>) -> Self {
        Self { houses }
    }

    pub fn identity(n: usize) -> Self {
        Self::new_unchecked((0..n).map(HouseId).collect())
    }

    pub fn len(&self) -> usize {
        self.houses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.houses.is_empty()
    }

    pub fn house(&self, agent: AgentId) -> HouseId {
        self.houses[agent.0]
    }

    pub fn houses(&self) -> &[HouseId] {
        &self.houses
    }

    /// Swaps the houses of two agents.
    pub fn swapped(&self, a: AgentId, b: AgentId) -> Self {
        let mut houses = self.houses.clone();
        houses.swap(a.0, b.0);
        Self { houses }
    }
}

impl fmt::Debug for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.houses.iter().join(","))
    }
}

/// A Shapley-Scarf housing market: agents `0..n`, houses `0..n`, an
/// endowment bijection and one weak order per agent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Market {
    endowment: Vec<HouseId>,
    owner: Vec<AgentId>,
    profile: Vec<PreferenceRelation>,
}

impl Market {
    pub fn new(endowment: Vec<HouseId>, profile: Vec<PreferenceRelation>) -> Result<Self> {
        let owner = check_bijection(&endowment, "endowment")?;
        let n = endowment.len();
        if n == 0 {
            return Err(Error::NotBijection("market has no agents".into()));
        }
        if profile.len() != n {
            return Err(Error::LengthMismatch {
                what: "preference relations",
                expected: n,
                got: profile.len(),
            });
        }
        if let Some((i, r)) = profile.iter().find_position(|r| r.house_count() != n) {
            return Err(Error::InvalidRelation(format!(
                "agent {} ranks {} houses, market has {n}",
                AgentId(i),
                r.house_count()
            )));
        }
        Ok(Self {
            endowment,
            owner,
            profile,
        })
    }

    /// Market where agent `i` owns house `i`.
    pub fn with_identity_endowment(profile: Vec<PreferenceRelation>) -> Result<Self> {
        Self::new((0..profile.len()).map(HouseId).collect(), profile)
    }

    pub fn agent_count(&self) -> usize {
        self.endowment.len()
    }

    pub fn agents(&self) -> impl Iterator<Item = AgentId> + Clone {
        (0..self.agent_count()).map(AgentId)
    }

    pub fn endowment(&self) -> &[HouseId] {
        &self.endowment
    }

    pub fn endowment_of(&self, agent: AgentId) -> HouseId {
        self.endowment[agent.0]
    }

    pub fn owner_of(&self, house: HouseId) -> AgentId {
        self.owner[house.0]
    }

    pub fn owners(&self) -> &[AgentId] {
        &self.owner
    }

    pub fn profile(&self) -> &[PreferenceRelation] {
        &self.profile
    }

    pub fn preference(&self, agent: AgentId) -> &PreferenceRelation {
        &self.profile[agent.0]
    }

    /// The no-trade allocation `x = w`.
    pub fn endowment_allocation(&self) -> Allocation {
        Allocation::new_unchecked(self.endowment.clone())
    }

    /// Same agents and endowment under a different profile.
    pub fn with_profile(&self, profile: Vec<PreferenceRelation>) -> Result<Self> {
        Self::new(self.endowment.clone(), profile)
    }

    pub fn check_allocation(&self, x: &Allocation) -> Result<()> {
        if x.len() != self.agent_count() {
            return Err(Error::LengthMismatch {
                what: "allocated agents",
                expected: self.agent_count(),
                got: x.len(),
            });
        }
        Ok(())
    }

    /// First agent whose relation is not in `domain`, if any.
    pub fn first_outside(&self, domain: &Domain) -> Option<AgentId> {
        self.profile
            .iter()
            .position(|r| !domain.contains(r))
            .map(AgentId)
    }
}
