//! Library side of the `ssm` command-line tool. Every command returns its
//! rendered output and exit code, so the binary is a thin wrapper.
//!
//! Exit codes: 0 success, 1 audit or campaign failure, 2 input error,
//! 3 size guard or search budget exceeded.

use std::fmt;
use std::fmt::Write as _;

use serde::Serialize;

use shapley_scarf::axioms::{ir_violation, pareto_dominators, MAX_CORE_AGENTS};
use shapley_scarf::campaign::{run_campaign, CampaignConfig, CampaignSummary, Tally};
use shapley_scarf::generate::{
    random_general_market, random_oi_market, random_strict_market, random_tiebreak, rng_from_seed,
};
use shapley_scarf::school::{as_shapley_scarf, roster, ttc_priorities, SchoolId};
use shapley_scarf::{
    core, find_blocking, ttc_fixed, weak_core, Allocation, BlockingMode, BlockingWitness,
    ExecutionTrace, Market, TieBreakProfile,
};

pub mod format;

use format::{MarketFile, Names, Resolved, SchoolFile};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_GUARD: u8 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliError {
    Input(String),
    Guard(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Input(_) => EXIT_INPUT,
            Self::Guard(_) => EXIT_GUARD,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Input(m) | Self::Guard(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

impl From<shapley_scarf::Error> for CliError {
    fn from(e: shapley_scarf::Error) -> Self {
        use shapley_scarf::Error::*;
        match e {
            TooLarge { .. } | BudgetExceeded { .. } => Self::Guard(e.to_string()),
            _ => Self::Input(e.to_string()),
        }
    }
}

/// Rendered command output plus the process exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: u8,
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Assignment {
    pub agent: String,
    pub house: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Blocking {
    pub coalition: Vec<String>,
    pub reallocation: Vec<Assignment>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub ir: bool,
    pub pe: bool,
    pub in_core: bool,
    pub in_weak_core: bool,
    pub core_size: usize,
    pub weak_core_size: usize,
}

impl Flags {
    pub fn all_pass(&self) -> bool {
        self.ir && self.pe && self.in_core && self.in_weak_core
    }
}

/// One witness per failed flag; each can be checked by hand against the
/// market.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Witnesses {
    /// Agent worse off than with its endowment.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ir: Option<String>,
    /// An allocation Pareto dominating the outcome.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pe: Option<Vec<Assignment>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub in_core: Option<Blocking>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub in_weak_core: Option<Blocking>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub allocation: Vec<Assignment>,
    /// Trading cycles in execution order.
    pub trace: Vec<Vec<Assignment>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flags: Option<Flags>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Witnesses>,
}

fn assignments(names: &Names, x: &Allocation) -> Vec<Assignment> {
    x.houses()
        .iter()
        .enumerate()
        .map(|(i, &h)| Assignment {
            agent: names.agents[i].clone(),
            house: names.house(h).to_string(),
        })
        .collect()
}

fn trace(names: &Names, t: &ExecutionTrace) -> Vec<Vec<Assignment>> {
    t.cycles()
        .iter()
        .map(|c| {
            c.iter()
                .map(|&(a, h)| Assignment {
                    agent: names.agent(a).to_string(),
                    house: names.house(h).to_string(),
                })
                .collect()
        })
        .collect()
}

fn blocking(names: &Names, w: &BlockingWitness) -> Blocking {
    Blocking {
        coalition: w
            .coalition
            .iter()
            .map(|&a| names.agent(a).to_string())
            .collect(),
        reallocation: w
            .reallocation
            .iter()
            .map(|&(a, h)| Assignment {
                agent: names.agent(a).to_string(),
                house: names.house(h).to_string(),
            })
            .collect(),
    }
}

/// The tie-break profile to run with: the override, else the file's own,
/// else self-first when every preference is strict (and the profile cannot
/// matter).
pub fn effective_tiebreak(
    resolved: &Resolved,
    tiebreak_override: Option<&str>,
) -> Result<TieBreakProfile, CliError> {
    if let Some(text) = tiebreak_override {
        let map = format::parse_tiebreak(text)?;
        return format::resolve_tiebreak(&map, &resolved.names.agents);
    }
    if let Some(tb) = &resolved.tiebreak {
        return Ok(tb.clone());
    }
    let m = &resolved.market;
    if m.profile().iter().all(|r| r.is_strict()) {
        Ok(TieBreakProfile::self_first(m.agent_count()))
    } else {
        Err(CliError::Input(
            "tie-break profile required: preferences contain indifferences".into(),
        ))
    }
}

pub fn audit_report(
    resolved: &Resolved,
    tb: &TieBreakProfile,
    audit: bool,
) -> Result<AuditReport, CliError> {
    let names = &resolved.names;
    let m: &Market = &resolved.market;
    let out = ttc_fixed(m, tb)?;
    let x = &out.allocation;
    let mut report = AuditReport {
        allocation: assignments(names, x),
        trace: trace(names, &out.trace),
        flags: None,
        witnesses: None,
    };
    if !audit {
        return Ok(report);
    }
    if m.agent_count() > MAX_CORE_AGENTS {
        return Err(CliError::Guard(format!(
            "audit enumerates all allocations; {} agents exceeds the limit of {MAX_CORE_AGENTS}",
            m.agent_count()
        )));
    }
    let ir = ir_violation(m, x);
    let dominator = pareto_dominators(m, x, 1)?.into_iter().next();
    let core_block = find_blocking(m, x, BlockingMode::Core)?;
    let weak_block = find_blocking(m, x, BlockingMode::WeakCore)?;
    let flags = Flags {
        ir: ir.is_none(),
        pe: dominator.is_none(),
        in_core: core_block.is_none(),
        in_weak_core: weak_block.is_none(),
        core_size: core(m)?.len(),
        weak_core_size: weak_core(m)?.len(),
    };
    report.flags = Some(flags);
    report.witnesses = Some(Witnesses {
        ir: ir.map(|a| names.agent(a).to_string()),
        pe: dominator.map(|y| assignments(names, &y)),
        in_core: core_block.map(|w| blocking(names, &w)),
        in_weak_core: weak_block.map(|w| blocking(names, &w)),
    });
    Ok(report)
}

fn pairs(v: &[Assignment]) -> String {
    v.iter()
        .map(|a| format!("{}:{}", a.agent, a.house))
        .collect::<Vec<_>>()
        .join(" ")
}

fn render_report(r: &AuditReport) -> String {
    let mut s = String::new();
    for a in &r.allocation {
        let _ = writeln!(s, "{} -> {}", a.agent, a.house);
    }
    for (k, c) in r.trace.iter().enumerate() {
        let _ = writeln!(s, "cycle {}: {}", k + 1, pairs(c));
    }
    if let (Some(f), Some(w)) = (&r.flags, &r.witnesses) {
        let _ = writeln!(s, "ir: {}", f.ir);
        if let Some(a) = &w.ir {
            let _ = writeln!(s, "  agent {a} prefers its endowment");
        }
        let _ = writeln!(s, "pe: {}", f.pe);
        if let Some(y) = &w.pe {
            let _ = writeln!(s, "  dominated by {}", pairs(y));
        }
        let _ = writeln!(s, "in_core: {}", f.in_core);
        if let Some(b) = &w.in_core {
            let _ = writeln!(
                s,
                "  blocked by {{{}}} trading {}",
                b.coalition.join(","),
                pairs(&b.reallocation)
            );
        }
        let _ = writeln!(s, "in_weak_core: {}", f.in_weak_core);
        if let Some(b) = &w.in_weak_core {
            let _ = writeln!(
                s,
                "  weakly blocked by {{{}}} trading {}",
                b.coalition.join(","),
                pairs(&b.reallocation)
            );
        }
        let _ = writeln!(s, "core_size: {}", f.core_size);
        let _ = writeln!(s, "weak_core_size: {}", f.weak_core_size);
    }
    s
}

/// `run` and `audit`: parse, run TTC with tie-breaking, optionally audit.
pub fn cmd_run(
    market_text: &str,
    tiebreak_override: Option<&str>,
    audit: bool,
    as_json: bool,
) -> Result<Output, CliError> {
    let resolved = MarketFile::parse(market_text)?.resolve()?;
    let tb = effective_tiebreak(&resolved, tiebreak_override)?;
    let report = audit_report(&resolved, &tb, audit)?;
    let code = match &report.flags {
        Some(f) if !f.all_pass() => EXIT_FAILED,
        _ => EXIT_OK,
    };
    let text = if as_json {
        json(&report)
    } else {
        render_report(&report)
    };
    Ok(Output { text, code })
}

#[derive(Serialize)]
struct TallyJson<'a> {
    total: u64,
    passed: u64,
    failures: Vec<FailureJson<'a>>,
}

#[derive(Serialize)]
struct FailureJson<'a> {
    seed: u64,
    reason: &'a str,
}

#[derive(Serialize)]
struct CampaignJson<'a> {
    theorem: String,
    n: usize,
    seeds: u64,
    base_seed: u64,
    positive: TallyJson<'a>,
    #[serde(skip_serializing_if = "Option::is_none")]
    maximality: Option<TallyJson<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    aborted: Option<String>,
    passed: bool,
}

fn tally_json(t: &Tally) -> TallyJson<'_> {
    TallyJson {
        total: t.total,
        passed: t.passed,
        failures: t
            .failures
            .iter()
            .map(|(seed, reason)| FailureJson {
                seed: *seed,
                reason,
            })
            .collect(),
    }
}

fn render_campaign(config: &CampaignConfig, s: &CampaignSummary) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "theorem {} n={} seeds={} base seed {}",
        s.theorem, config.n, config.seeds, config.base_seed
    );
    let mut line = |label: &str, t: &Tally| {
        let _ = writeln!(out, "{label}: {}/{} pass", t.passed, t.total);
        for (seed, why) in &t.failures {
            let _ = writeln!(out, "  seed {seed}: {why}");
        }
    };
    line("objective markets", &s.positive);
    if let Some(t) = &s.maximality {
        line("constructed violations", t);
    }
    if let Some((seed, e)) = &s.aborted {
        let _ = writeln!(out, "aborted at seed {seed}: {e}");
    }
    out
}

/// `verify-theorems`: run a randomized campaign and report the tallies.
pub fn cmd_verify_theorems(config: &CampaignConfig, as_json: bool) -> Result<Output, CliError> {
    let s = run_campaign(config)?;
    let code = if s.aborted.is_some() {
        EXIT_GUARD
    } else if s.all_passed() {
        EXIT_OK
    } else {
        EXIT_FAILED
    };
    let text = if as_json {
        json(&CampaignJson {
            theorem: s.theorem.to_string(),
            n: config.n,
            seeds: config.seeds,
            base_seed: config.base_seed,
            positive: tally_json(&s.positive),
            maximality: s.maximality.as_ref().map(tally_json),
            aborted: s
                .aborted
                .as_ref()
                .map(|(seed, e)| format!("seed {seed}: {e}")),
            passed: s.all_passed(),
        })
    } else {
        render_campaign(config, &s)
    };
    Ok(Output { text, code })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenMode {
    Oi,
    General,
    Strict,
}

impl std::str::FromStr for GenMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "oi" => Ok(Self::Oi),
            "general" => Ok(Self::General),
            "strict" => Ok(Self::Strict),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

/// A random market file. The same arguments always give the same file.
pub fn generate(
    n: usize,
    blocks: Option<usize>,
    seed: u64,
    mode: GenMode,
) -> Result<MarketFile, CliError> {
    use rand::Rng;

    let names = Names::generated(n)?;
    if n == 0 {
        return Err(CliError::Input("need at least one agent".into()));
    }
    let mut rng = rng_from_seed(seed);
    let (market, partition) = match mode {
        GenMode::Oi => {
            let k = match blocks {
                Some(k) if k == 0 || k > n => {
                    return Err(CliError::Input(format!("{k} blocks for {n} houses")))
                }
                Some(k) => k,
                None => rng.random_range(1..=n),
            };
            let (m, p) = random_oi_market(&mut rng, n, k);
            (m, Some(p))
        }
        GenMode::General => (random_general_market(&mut rng, n), None),
        GenMode::Strict => (random_strict_market(&mut rng, n), None),
    };
    let tb = random_tiebreak(&mut rng, n);
    Ok(MarketFile::from_market(
        &names,
        &market,
        partition.as_ref(),
        Some(&tb),
    ))
}

pub fn cmd_gen(
    n: usize,
    blocks: Option<usize>,
    seed: u64,
    mode: GenMode,
) -> Result<Output, CliError> {
    let file = generate(n, blocks, seed, mode)?;
    Ok(Output {
        text: file.to_json() + "\n",
        code: EXIT_OK,
    })
}

#[derive(Serialize)]
struct SchoolReport {
    priorities: Vec<SchoolRoster>,
    seats: Vec<SchoolRoster>,
    divergence: bool,
}

#[derive(Serialize)]
struct SchoolRoster {
    school: String,
    students: Vec<String>,
}

/// `school`: capacity-constrained TTC against the seat-copy market.
pub fn cmd_school(text: &str, as_json: bool) -> Result<Output, CliError> {
    let r = SchoolFile::parse(text)?.resolve()?;
    let by_priority = ttc_priorities(&r.market);
    let by_seats = as_shapley_scarf(&r.market, &r.seats, &r.tiebreak)?.schools;
    let rosters = |a: &[SchoolId]| -> Vec<SchoolRoster> {
        roster(&r.market, a)
            .into_iter()
            .zip(&r.schools)
            .map(|(students, s)| SchoolRoster {
                school: s.clone(),
                students: students.iter().map(|a| r.students[a.0].clone()).collect(),
            })
            .collect()
    };
    let report = SchoolReport {
        priorities: rosters(&by_priority),
        seats: rosters(&by_seats),
        divergence: by_priority != by_seats,
    };
    let text = if as_json {
        json(&report)
    } else {
        let line = |rs: &[SchoolRoster]| {
            rs.iter()
                .map(|r| format!("{}:{}", r.school, r.students.join(",")))
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!(
            "priorities: {}\nseats: {}\ndivergence: {}\n",
            line(&report.priorities),
            line(&report.seats),
            report.divergence
        )
    };
    Ok(Output {
        text,
        code: EXIT_OK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_files_round_trip() {
        for mode in [GenMode::Oi, GenMode::General, GenMode::Strict] {
            for seed in 0..20 {
                let file = generate(5, None, seed, mode).unwrap();
                let back = MarketFile::parse(&file.to_json()).unwrap();
                assert_eq!(back, file);
                let r = back.resolve().unwrap();
                let again = MarketFile::from_market(
                    &r.names,
                    &r.market,
                    r.partition.as_ref(),
                    r.tiebreak.as_ref(),
                );
                assert_eq!(again, file);
            }
        }
    }

    #[test]
    fn guard_errors_map_to_exit_three() {
        let e: CliError = shapley_scarf::Error::BudgetExceeded {
            required: 10,
            budget: 1,
        }
        .into();
        assert_eq!(e.exit_code(), EXIT_GUARD);
        let e: CliError = shapley_scarf::Error::DomainIsObjective.into();
        assert_eq!(e.exit_code(), EXIT_INPUT);
    }
}
