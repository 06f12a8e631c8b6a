#![allow(dead_code)]

pub mod golden;

use shapley_scarf::school::{School, SchoolId, SchoolMarket};
use shapley_scarf::{AgentId, Allocation, Market, PreferenceRelation, TieBreakProfile};

pub fn rel(classes: &[&[usize]]) -> PreferenceRelation {
    PreferenceRelation::from_indices(classes).unwrap()
}

pub fn alloc(houses: &[usize]) -> Allocation {
    Allocation::from_indices(houses).unwrap()
}

pub fn market(profile: Vec<PreferenceRelation>) -> Market {
    Market::with_identity_endowment(profile).unwrap()
}

pub fn tiebreak(orders: &[&[usize]]) -> TieBreakProfile {
    TieBreakProfile::from_indices(orders).unwrap()
}

/// Four agents, houses 1 and 2 form one type.
pub fn example3() -> (Market, TieBreakProfile) {
    let m = market(vec![
        rel(&[&[1, 2], &[0], &[3]]),
        rel(&[&[0], &[1, 2], &[3]]),
        rel(&[&[0], &[3], &[1, 2]]),
        rel(&[&[1, 2], &[3], &[0]]),
    ]);
    // The last order is printed with agent 3 twice; agent 4 is the only
    // one missing, and putting it last reproduces the printed ranking.
    let tb = tiebreak(&[&[1, 0, 2, 3], &[0, 1, 2, 3], &[2, 1, 0, 3], &[2, 0, 1, 3]]);
    (m, tb)
}

/// Agent 1 indifferent, agent 2 strict; common order 1 before 2.
pub fn example4() -> (Market, TieBreakProfile) {
    let m = market(vec![rel(&[&[0, 1]]), rel(&[&[0], &[1]])]);
    (m, tiebreak(&[&[0, 1], &[0, 1]]))
}

/// Empty core.
pub fn example5() -> Market {
    market(vec![
        rel(&[&[1, 2], &[0]]),
        rel(&[&[0], &[1, 2]]),
        rel(&[&[0], &[1, 2]]),
    ])
}

/// Agent 1 and agent 3 manipulate together. Returns the market, the
/// misreport of agent 1 and the common tie-break profile.
pub fn example6() -> (Market, PreferenceRelation, TieBreakProfile) {
    let m = market(vec![
        rel(&[&[1, 2], &[0]]),
        rel(&[&[0], &[1], &[2]]),
        rel(&[&[0], &[1], &[2]]),
    ]);
    let misreport = rel(&[&[2], &[1], &[0]]);
    (
        m,
        misreport,
        tiebreak(&[&[0, 1, 2], &[0, 1, 2], &[0, 1, 2]]),
    )
}

/// Schools A, B, C (two seats); students a, b, c1, c2 as 0..4.
/// School A's printed priority lists c1 twice; c2 is the missing student.
pub fn school_market(prime: bool) -> SchoolMarket {
    let school = |capacity, p: [usize; 4]| School {
        capacity,
        priority: p.iter().map(|&a| AgentId(a)).collect(),
    };
    let (a, b, c) = (SchoolId(0), SchoolId(1), SchoolId(2));
    let c_prefs = if prime { vec![b, a, c] } else { vec![a, b, c] };
    SchoolMarket::new(
        vec![
            school(1, [0, 1, 2, 3]),
            school(1, [1, 0, 3, 2]),
            school(2, [2, 3, 0, 1]),
        ],
        vec![vec![c, a, b], vec![c, a, b], c_prefs.clone(), c_prefs],
    )
    .unwrap()
}

/// Seat owners: a owns A, b owns B, c1 and c2 own the seats of C.
pub fn school_seat_owners() -> Vec<SchoolId> {
    vec![SchoolId(0), SchoolId(1), SchoolId(2), SchoolId(2)]
}

pub fn school_tiebreak() -> TieBreakProfile {
    tiebreak(&[&[2, 3, 0, 1], &[3, 2, 0, 1], &[2, 3, 0, 1], &[2, 3, 0, 1]])
}
