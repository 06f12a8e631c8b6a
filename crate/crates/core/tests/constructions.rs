//! The GSP counterexample under every self-first tie-breaking, and priority
//! TTC under both chase orders.

use itertools::Itertools;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

use shapley_scarf::counterexamples::{construct_gsp_violation_with_tails, select_gsp_triple};
use shapley_scarf::generate::*;
use shapley_scarf::gsp::is_manipulation;
use shapley_scarf::school::{ttc_priorities_with, School, SchoolId, SchoolMarket};
use shapley_scarf::{AgentId, CycleSelection};

const DOMAINS_PER_SIZE: u64 = 20;

fn others(i: usize, m: usize) -> Vec<AgentId> {
    (0..m).filter(|&j| j != i).map(AgentId).collect()
}

#[test]
fn gsp_construction_holds_for_every_tail_of_agent_2() {
    let mut checked = 0;
    for m in 2..=6 {
        for s in 0..DOMAINS_PER_SIZE {
            let mut rng = rng_from_seed(8_000_000 + 1000 * m as u64 + s);
            let domain = random_symmetric_non_oi_domain(&mut rng, m);
            let (pair, gamma) = select_gsp_triple(&domain).unwrap();
            for tail in others(1, m).into_iter().permutations(m - 1) {
                // Random self-first tails for everyone else.
                let mut tails = vec![(AgentId(1), tail.clone())];
                for i in (0..m).filter(|&i| i != 1) {
                    let mut t = others(i, m);
                    t.shuffle(&mut rng);
                    tails.push((AgentId(i), t));
                }
                let v = construct_gsp_violation_with_tails(&pair, &gamma, &tails)
                    .unwrap_or_else(|e| panic!("m={m} seed={s} tail={tail:?}: {e}"));
                let c = &v.construction;
                assert!(
                    is_manipulation(&c.market, &domain, &c.tiebreak, &v.witness).unwrap(),
                    "m={m} seed={s} tail={tail:?}"
                );
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

fn school_market(seed: u64) -> SchoolMarket {
    let mut rng = rng_from_seed(seed);
    let n = rng.random_range(1..=7);
    let k = rng.random_range(1..=n);
    // Spread n seats over k schools, at least one each.
    let mut capacity = vec![1; k];
    for _ in k..n {
        capacity[rng.random_range(0..k)] += 1;
    }
    let students: Vec<AgentId> = (0..n).map(AgentId).collect();
    let schools = capacity
        .into_iter()
        .map(|capacity| {
            let mut priority = students.clone();
            priority.shuffle(&mut rng);
            School { capacity, priority }
        })
        .collect();
    let prefs = (0..n)
        .map(|_| {
            let mut p: Vec<SchoolId> = (0..k).map(SchoolId).collect();
            p.shuffle(&mut rng);
            p
        })
        .collect();
    SchoolMarket::new(schools, prefs).unwrap()
}

proptest! {
    #[test]
    fn priority_ttc_ignores_chase_order(seed in any::<u64>()) {
        let sm = school_market(seed);
        prop_assert_eq!(
            ttc_priorities_with(&sm, CycleSelection::FromLowestAgent),
            ttc_priorities_with(&sm, CycleSelection::FromHighestAgent)
        );
    }
}
