//! Randomized verification campaigns.
//!
//! Each check takes a seed and returns whether the property held on the
//! instance that seed generates. Positive checks draw objective-indifferences
//! markets (or general markets for the weak core) and test the axiom against
//! the oracles; maximality checks draw domains that are not
//! objective-indifferences and build a counterexample.
//!
//! Seeds fan out across a thread pool; results are reported in seed order.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::axioms::{essentially_single_valued, find_blocking, pareto_dominators, BlockingMode};
use crate::counterexamples::{
    construct_cs_violation, construct_gsp_violation, construct_pe_violation, select_gsp_triple,
};
use crate::domain::{enumerate_oi_domain, IndifferenceStructure};
use crate::error::{Error, Result};
use crate::generate::{
    random_general_market, random_non_oi_domain, random_oi_market, random_symmetric_non_oi_domain,
    random_tiebreak, rng_from_seed,
};
use crate::gsp::{find_group_manipulation_with_budget, is_manipulation, DEFAULT_BUDGET};
use crate::ttc::ttc_fixed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Theorem {
    /// Pareto efficiency.
    Pe,
    /// Core selection (and essential single-valuedness of the core).
    Cs,
    /// Group strategy-proofness.
    Gsp,
    /// Weak-core membership on general weak preferences.
    WeakCore,
}

impl FromStr for Theorem {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "pe" => Ok(Self::Pe),
            "cs" => Ok(Self::Cs),
            "gsp" => Ok(Self::Gsp),
            "weakcore" => Ok(Self::WeakCore),
            other => Err(format!("unknown theorem {other:?}")),
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pe => "pe",
            Self::Cs => "cs",
            Self::Gsp => "gsp",
            Self::WeakCore => "weakcore",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    Pass,
    Fail(String),
}

#[derive(Clone, Debug)]
pub struct CampaignConfig {
    pub theorem: Theorem,
    /// Agents (and houses) per instance.
    pub n: usize,
    /// Block count for objective markets; random in range when `None`.
    pub blocks: Option<usize>,
    pub seeds: u64,
    pub base_seed: u64,
    /// Largest manipulating coalition for the GSP search; `n` when `None`.
    pub max_coalition: Option<usize>,
    pub budget: u64,
}

impl CampaignConfig {
    pub fn new(theorem: Theorem, n: usize, seeds: u64) -> Self {
        Self {
            theorem,
            n,
            blocks: None,
            seeds,
            base_seed: 0,
            max_coalition: None,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub total: u64,
    pub passed: u64,
    /// `(seed, reason)` for each failure.
    pub failures: Vec<(u64, String)>,
}

impl Tally {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct CampaignSummary {
    pub theorem: Theorem,
    /// The property holding on objective (or general, for the weak core)
    /// markets.
    pub positive: Tally,
    /// Counterexamples built on non-objective domains.
    pub maximality: Option<Tally>,
    /// First seed whose check hit a guard or budget error. Tallies then only
    /// cover the seeds before it.
    pub aborted: Option<(u64, Error)>,
}

impl CampaignSummary {
    pub fn all_passed(&self) -> bool {
        self.aborted.is_none()
            && self.positive.all_passed()
            && self.maximality.as_ref().is_none_or(Tally::all_passed)
    }
}

fn block_count<R: Rng>(rng: &mut R, n: usize, blocks: Option<usize>, cap: usize) -> usize {
    blocks.unwrap_or_else(|| rng.random_range(1..=n.min(cap)))
}

/// TTC_tb on a random objective market is Pareto efficient.
pub fn check_pe(seed: u64, n: usize, blocks: Option<usize>) -> Result<CheckOutcome> {
    let mut rng = rng_from_seed(seed);
    let k = block_count(&mut rng, n, blocks, n);
    let (market, _) = random_oi_market(&mut rng, n, k);
    let tb = random_tiebreak(&mut rng, n);
    let x = ttc_fixed(&market, &tb)?.allocation;
    Ok(match pareto_dominators(&market, &x, 1)?.first() {
        None => CheckOutcome::Pass,
        Some(y) => CheckOutcome::Fail(format!("{x:?} dominated by {y:?}")),
    })
}

/// On a random objective market with a non-empty core, TTC_tb is in the
/// core and the core is essentially single-valued.
pub fn check_cs(seed: u64, n: usize, blocks: Option<usize>) -> Result<CheckOutcome> {
    let mut rng = rng_from_seed(seed);
    let k = block_count(&mut rng, n, blocks, n);
    let (market, _) = random_oi_market(&mut rng, n, k);
    let tb = random_tiebreak(&mut rng, n);
    let x = ttc_fixed(&market, &tb)?.allocation;
    let core = crate::axioms::core(&market)?;
    if core.is_empty() {
        return Ok(CheckOutcome::Pass);
    }
    if let Some(w) = find_blocking(&market, &x, BlockingMode::Core)? {
        return Ok(CheckOutcome::Fail(format!(
            "core non-empty but {x:?} blocked by {w:?}"
        )));
    }
    if !essentially_single_valued(&market, &core) {
        return Ok(CheckOutcome::Fail(
            "core is not essentially single-valued".into(),
        ));
    }
    Ok(CheckOutcome::Pass)
}

/// No coalition can manipulate TTC_tb on a random objective market within
/// its objective-indifferences domain.
pub fn check_gsp(
    seed: u64,
    n: usize,
    blocks: Option<usize>,
    max_coalition: Option<usize>,
    budget: u64,
) -> Result<CheckOutcome> {
    let mut rng = rng_from_seed(seed);
    let k = block_count(&mut rng, n, blocks, 4);
    let (market, partition) = random_oi_market(&mut rng, n, k);
    let tb = random_tiebreak(&mut rng, n);
    let domain = enumerate_oi_domain(&partition)?;
    let q = max_coalition.unwrap_or(n);
    Ok(
        match find_group_manipulation_with_budget(&market, &domain, &tb, q, budget)? {
            None => CheckOutcome::Pass,
            Some(w) => CheckOutcome::Fail(format!("manipulation found: {w:?}")),
        },
    )
}

/// TTC_tb on a random general market is in the weak core.
pub fn check_weak_core(seed: u64, n: usize) -> Result<CheckOutcome> {
    let mut rng = rng_from_seed(seed);
    let market = random_general_market(&mut rng, n);
    let tb = random_tiebreak(&mut rng, n);
    let x = ttc_fixed(&market, &tb)?.allocation;
    Ok(match find_blocking(&market, &x, BlockingMode::WeakCore)? {
        None => CheckOutcome::Pass,
        Some(w) => CheckOutcome::Fail(format!("{x:?} weakly blocked by {w:?}")),
    })
}

fn constructed<T>(r: Result<T>) -> Result<CheckOutcome> {
    match r {
        Ok(_) => Ok(CheckOutcome::Pass),
        Err(Error::Postcondition(why)) => Ok(CheckOutcome::Fail(why)),
        Err(e) => Err(e),
    }
}

/// A random non-objective domain yields a verified Pareto failure.
pub fn check_pe_maximality(seed: u64, m: usize) -> Result<CheckOutcome> {
    let domain = random_non_oi_domain(&mut rng_from_seed(seed), m);
    match domain.objective_partition() {
        IndifferenceStructure::Subjective { pair, .. } => {
            constructed(construct_pe_violation(&pair))
        }
        IndifferenceStructure::Objective(_) => Err(Error::DomainIsObjective),
    }
}

/// A random non-objective domain yields a verified core-selection failure.
pub fn check_cs_maximality(seed: u64, m: usize) -> Result<CheckOutcome> {
    let domain = random_non_oi_domain(&mut rng_from_seed(seed), m);
    constructed(construct_cs_violation(&domain))
}

/// A random symmetric non-objective domain yields a group manipulation that
/// the exhaustive search also finds.
pub fn check_gsp_maximality(seed: u64, m: usize, budget: u64) -> Result<CheckOutcome> {
    let domain = random_symmetric_non_oi_domain(&mut rng_from_seed(seed), m);
    let (pair, gamma) = select_gsp_triple(&domain)?;
    let v = match construct_gsp_violation(&pair, &gamma) {
        Ok(v) => v,
        Err(Error::Postcondition(why)) => return Ok(CheckOutcome::Fail(why)),
        Err(e) => return Err(e),
    };
    let c = &v.construction;
    if !is_manipulation(&c.market, &domain, &c.tiebreak, &v.witness)? {
        return Ok(CheckOutcome::Fail("constructed witness rejected".into()));
    }
    let found = find_group_manipulation_with_budget(&c.market, &domain, &c.tiebreak, 2, budget)?;
    Ok(match found {
        Some(w) if is_manipulation(&c.market, &domain, &c.tiebreak, &w)? => CheckOutcome::Pass,
        Some(_) => CheckOutcome::Fail("search returned an invalid witness".into()),
        None => CheckOutcome::Fail("search found no manipulation".into()),
    })
}

/// Tallies seeds in order, stopping at the first error.
fn run_seeds(
    config: &CampaignConfig,
    check: impl Fn(u64) -> Result<CheckOutcome> + Sync,
) -> (Tally, Option<(u64, Error)>) {
    let outcomes: Vec<(u64, Result<CheckOutcome>)> = (0..config.seeds)
        .into_par_iter()
        .map(|s| {
            let seed = config.base_seed.wrapping_add(s);
            (seed, check(seed))
        })
        .collect();
    let mut tally = Tally::default();
    for (seed, outcome) in outcomes {
        match outcome {
            Ok(CheckOutcome::Pass) => tally.passed += 1,
            Ok(CheckOutcome::Fail(reason)) => tally.failures.push((seed, reason)),
            Err(e) => return (tally, Some((seed, e))),
        }
        tally.total += 1;
    }
    (tally, None)
}

/// Runs a campaign. Invalid configurations are errors; guard or budget
/// errors during the run yield a partial summary with `aborted` set.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignSummary> {
    let n = config.n;
    if n == 0 {
        return Err(Error::InvalidDomain(
            "campaigns need at least one agent".into(),
        ));
    }
    if let Some(k) = config.blocks {
        if k == 0 || k > n {
            return Err(Error::InvalidPartition(format!(
                "{k} blocks for {n} houses"
            )));
        }
    }
    let blocks = config.blocks;
    let (positive, aborted) = match config.theorem {
        Theorem::Pe => run_seeds(config, |s| check_pe(s, n, blocks)),
        Theorem::Cs => run_seeds(config, |s| check_cs(s, n, blocks)),
        Theorem::Gsp => run_seeds(config, |s| {
            check_gsp(s, n, blocks, config.max_coalition, config.budget)
        }),
        Theorem::WeakCore => run_seeds(config, |s| check_weak_core(s, n)),
    };
    let mut summary = CampaignSummary {
        theorem: config.theorem,
        positive,
        maximality: None,
        aborted,
    };
    if summary.aborted.is_some() || n < 2 {
        return Ok(summary);
    }
    let (tally, aborted) = match config.theorem {
        Theorem::Pe => run_seeds(config, |s| check_pe_maximality(s, n)),
        Theorem::Cs => run_seeds(config, |s| check_cs_maximality(s, n)),
        Theorem::Gsp => run_seeds(config, |s| check_gsp_maximality(s, n, config.budget)),
        Theorem::WeakCore => return Ok(summary),
    };
    summary.maximality = Some(tally);
    summary.aborted = aborted;
    Ok(summary)
}
