use thiserror::Error;

use crate::preference::{AgentId, HouseId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("house not in relation: {0}")]
    UnknownHouse(HouseId),

    #[error("agent out of range: {0}")]
    UnknownAgent(AgentId),

    #[error("invalid preference relation: {0}")]
    InvalidRelation(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("not a bijection: {0}")]
    NotBijection(String),

    #[error("tie-break order is not a permutation of the agents: {0}")]
    InvalidOrder(String),

    #[error("length mismatch: expected {expected} {what}, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("{what} too large to enumerate: {size} > {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("search budget exceeded: {required} evaluations required, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },

    #[error("agent {agent} reports a relation outside the domain")]
    ProfileOutsideDomain { agent: AgentId },

    #[error("not a monotone transformation at agent {agent}")]
    NotMonotone { agent: AgentId },

    #[error("invalid alpha/beta pair: {0}")]
    InvalidPair(String),

    #[error("domain is objective-indifferences")]
    DomainIsObjective,

    #[error("sets violate the lemma sandwich: {0}")]
    Sandwich(String),

    #[error("infeasible capacities: {0}")]
    Capacity(String),

    #[error("construction postcondition failed: {0}")]
    Postcondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
