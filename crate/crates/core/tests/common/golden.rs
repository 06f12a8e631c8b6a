//! Worked examples as checks returning the first mismatch.

use shapley_scarf::axioms::{pareto_dominators, weak_core};
use shapley_scarf::gsp::{find_group_manipulation, is_manipulation};
use shapley_scarf::school::{as_shapley_scarf, ttc_priorities, ttc_priorities_with, SchoolId};
use shapley_scarf::tiebreak::{break_ties, AgentOrder, StrictPreference};
use shapley_scarf::{
    core, find_blocking, ttc_fixed, AgentId, BlockingMode, BlockingWitness, CycleSelection, Domain,
    HouseId, ManipulationWitness,
};

use super::*;

pub type Check = Result<(), String>;
pub type Named = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ids(v: &[usize]) -> Vec<AgentId> {
    v.iter().map(|&a| AgentId(a)).collect()
}

pub fn tie_broken_ranking() -> Check {
    let r1 = rel(&[&[2, 3], &[0, 1]]);
    let order = AgentOrder::from_indices(&[0, 1, 2, 3]).unwrap();
    let endowment: Vec<HouseId> = (0..4).map(HouseId).collect();
    let got = break_ties(&r1, &order, &endowment).map_err(|e| e.to_string())?;
    ensure!(
        got == StrictPreference::from_indices(&[2, 3, 0, 1]).unwrap(),
        "ranking {:?}",
        got.ranking()
    );
    Ok(())
}

pub fn ttc_with_types() -> Check {
    let (m, tb) = example3();
    let out = ttc_fixed(&m, &tb).map_err(|e| e.to_string())?;
    ensure!(
        out.allocation == alloc(&[1, 0, 3, 2]),
        "allocation {:?}",
        out.allocation
    );
    ensure!(
        out.trace.cycle_agents() == vec![ids(&[0, 1]), ids(&[2, 3])],
        "cycles {:?}",
        out.trace.cycle_agents()
    );
    Ok(())
}

pub fn indifference_breaks_efficiency() -> Check {
    let (m, tb) = example4();
    let x = ttc_fixed(&m, &tb).map_err(|e| e.to_string())?.allocation;
    ensure!(x == alloc(&[0, 1]), "allocation {x:?}");
    let dom = pareto_dominators(&m, &x, usize::MAX).map_err(|e| e.to_string())?;
    ensure!(dom == vec![alloc(&[1, 0])], "dominators {dom:?}");
    let c = core(&m).map_err(|e| e.to_string())?;
    ensure!(c == vec![alloc(&[1, 0])], "core {c:?}");
    Ok(())
}

pub fn empty_core() -> Check {
    let m = example5();
    let c = core(&m).map_err(|e| e.to_string())?;
    ensure!(c.is_empty(), "core {c:?}");
    let wc = weak_core(&m).map_err(|e| e.to_string())?;
    ensure!(!wc.is_empty(), "weak core empty");

    let expect = |x: &[usize], q: &[usize], y: &[(usize, usize)]| -> Check {
        let x = alloc(x);
        let w = find_blocking(&m, &x, BlockingMode::Core)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("{x:?} unblocked"))?;
        let want = BlockingWitness {
            coalition: ids(q),
            reallocation: y.iter().map(|&(a, h)| (AgentId(a), HouseId(h))).collect(),
            mode: BlockingMode::Core,
        };
        ensure!(w == want, "{x:?}: witness {w:?}");
        Ok(())
    };
    // Q = {1,3} trading to (w3, w1) and Q = {1,2} trading to (w2, w1).
    expect(&[1, 0, 2], &[0, 2], &[(0, 2), (2, 0)])?;
    expect(&[2, 1, 0], &[0, 1], &[(0, 1), (1, 0)])?;
    Ok(())
}

pub fn joint_misreport() -> Check {
    let (m, misreport, tb) = example6();
    let x = ttc_fixed(&m, &tb).map_err(|e| e.to_string())?.allocation;
    ensure!(x == alloc(&[1, 0, 2]), "truthful {x:?}");
    let mut profile = m.profile().to_vec();
    profile[0] = misreport.clone();
    let lied = m.with_profile(profile).map_err(|e| e.to_string())?;
    let y = ttc_fixed(&lied, &tb).map_err(|e| e.to_string())?.allocation;
    ensure!(y == alloc(&[2, 1, 0]), "manipulated {y:?}");

    let domain = Domain::new(vec![
        m.profile()[0].clone(),
        m.profile()[1].clone(),
        misreport.clone(),
    ])
    .map_err(|e| e.to_string())?;
    let printed = ManipulationWitness {
        coalition: ids(&[0, 2]),
        misreports: vec![misreport, m.profile()[2].clone()],
        truthful: x,
        manipulated: y,
    };
    ensure!(
        is_manipulation(&m, &domain, &tb, &printed).map_err(|e| e.to_string())?,
        "printed manipulation rejected"
    );
    let found = find_group_manipulation(&m, &domain, &tb, 3).map_err(|e| e.to_string())?;
    let w = found.ok_or("search found no manipulation")?;
    ensure!(
        is_manipulation(&m, &domain, &tb, &w).map_err(|e| e.to_string())?,
        "search witness {w:?} rejected"
    );
    Ok(())
}

pub fn asymmetric_domain_is_gsp() -> Check {
    let indiff = rel(&[&[0, 1]]);
    let strict = rel(&[&[0], &[1]]);
    let domain = Domain::new(vec![indiff.clone(), strict.clone()]).unwrap();
    let orders = [[0usize, 1], [1, 0]];
    for o1 in orders {
        for o2 in orders {
            let tb = tiebreak(&[&o1, &o2]);
            for r1 in [&indiff, &strict] {
                for r2 in [&indiff, &strict] {
                    let m = market(vec![r1.clone(), r2.clone()]);
                    let w =
                        find_group_manipulation(&m, &domain, &tb, 2).map_err(|e| e.to_string())?;
                    ensure!(w.is_none(), "tb {o1:?}/{o2:?}: {w:?}");
                }
            }
        }
    }
    Ok(())
}

fn letters(sm: &shapley_scarf::school::SchoolMarket, assignment: &[SchoolId]) -> String {
    const NAMES: [&str; 4] = ["a", "b", "c1", "c2"];
    shapley_scarf::school::roster(sm, assignment)
        .iter()
        .zip(["A", "B", "C"])
        .map(|(students, s)| {
            let who: String = students.iter().map(|a| NAMES[a.0]).collect();
            format!("{s}:{who}")
        })
        .collect::<Vec<_>>()
        .join(",")
}

pub fn priorities_vs_seats() -> Check {
    for (prime, priority, seats) in [
        (false, "A:c1,B:c2,C:ab", "A:c1,B:c2,C:ab"),
        (true, "A:c2,B:c1,C:ab", "A:c1,B:c2,C:ab"),
    ] {
        let sm = school_market(prime);
        let p = ttc_priorities(&sm);
        ensure!(
            letters(&sm, &p) == priority,
            "priorities {}",
            letters(&sm, &p)
        );
        ensure!(
            ttc_priorities_with(&sm, CycleSelection::FromHighestAgent) == p,
            "priority TTC depends on the chase order"
        );
        let s = as_shapley_scarf(&sm, &school_seat_owners(), &school_tiebreak())
            .map_err(|e| e.to_string())?;
        ensure!(
            letters(&sm, &s.schools) == seats,
            "seats {}",
            letters(&sm, &s.schools)
        );
        ensure!(
            (p != s.schools) == prime,
            "divergence flag wrong for prime={prime}"
        );
    }
    Ok(())
}

/// Every worked example, with a label.
pub fn all() -> Vec<Named> {
    vec![
        ("tie-broken ranking", tie_broken_ranking),
        ("TTC with house types", ttc_with_types),
        (
            "indifference breaks efficiency",
            indifference_breaks_efficiency,
        ),
        ("empty core", empty_core),
        ("joint misreport", joint_misreport),
        ("asymmetric domain stays GSP", asymmetric_domain_is_gsp),
        ("priorities vs seat endowments", priorities_vs_seats),
    ]
}
