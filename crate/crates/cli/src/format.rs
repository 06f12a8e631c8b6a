//! JSON file formats. Agents, houses and schools are referred to by name;
//! resolution maps names to dense ids in listing order.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use shapley_scarf::school::{School, SchoolId, SchoolMarket};
use shapley_scarf::{
    AgentId, AgentOrder, HouseId, Market, Partition, PreferenceRelation, TieBreakProfile,
};

use crate::CliError;

/// Per-agent agent orderings, keyed by agent name.
pub type TieBreakMap = BTreeMap<String, Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarketFile {
    pub agents: Vec<String>,
    pub houses: Vec<String>,
    /// Agent name to the house it owns.
    pub endowment: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<Vec<String>>>,
    /// Agent name to indifference classes, best first.
    pub preferences: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tiebreak: Option<TieBreakMap>,
}

/// A market file after name resolution.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub names: Names,
    pub market: Market,
    pub partition: Option<Partition>,
    pub tiebreak: Option<TieBreakProfile>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Names {
    pub agents: Vec<String>,
    pub houses: Vec<String>,
}

impl Names {
    /// `a`, `b`, ... for agents and `h1`, `h2`, ... for houses.
    pub fn generated(n: usize) -> Result<Self, CliError> {
        if n > 26 {
            return Err(CliError::Input(format!(
                "at most 26 agents can be named, got {n}"
            )));
        }
        Ok(Self {
            agents: (b'a'..).take(n).map(|c| (c as char).to_string()).collect(),
            houses: (1..=n).map(|i| format!("h{i}")).collect(),
        })
    }

    pub fn agent(&self, a: AgentId) -> &str {
        &self.agents[a.0]
    }

    pub fn house(&self, h: HouseId) -> &str {
        &self.houses[h.0]
    }
}

fn index(names: &[String], kind: &str) -> Result<HashMap<String, usize>, CliError> {
    let mut map = HashMap::with_capacity(names.len());
    for (i, name) in names.iter().enumerate() {
        if map.insert(name.clone(), i).is_some() {
            return Err(CliError::Input(format!("duplicate {kind} name {name:?}")));
        }
    }
    Ok(map)
}

fn lookup(
    map: &HashMap<String, usize>,
    name: &str,
    kind: &str,
    ctx: &str,
) -> Result<usize, CliError> {
    map.get(name)
        .copied()
        .ok_or_else(|| CliError::Input(format!("{ctx}: unknown {kind} {name:?}")))
}

/// Checks that `keys` names every agent exactly once.
fn per_agent<'a, V>(
    map: &'a BTreeMap<String, V>,
    agents: &[String],
    field: &str,
) -> Result<Vec<&'a V>, CliError> {
    if let Some(extra) = map.keys().find(|k| !agents.contains(k)) {
        return Err(CliError::Input(format!("{field}: unknown agent {extra:?}")));
    }
    agents
        .iter()
        .map(|a| {
            map.get(a)
                .ok_or_else(|| CliError::Input(format!("{field}: missing agent {a:?}")))
        })
        .collect()
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

/// Parses a standalone tie-break file: agent name to agent ordering.
pub fn parse_tiebreak(text: &str) -> Result<TieBreakMap, CliError> {
    parse_json(text, "tie-break file")
}

pub fn resolve_tiebreak(map: &TieBreakMap, agents: &[String]) -> Result<TieBreakProfile, CliError> {
    let ids = index(agents, "agent")?;
    let orders = per_agent(map, agents, "tiebreak")?
        .into_iter()
        .zip(agents)
        .map(|(order, owner)| {
            let ctx = format!("tiebreak of {owner:?}");
            let order = order
                .iter()
                .map(|a| lookup(&ids, a, "agent", &ctx).map(AgentId))
                .collect::<Result<Vec<_>, _>>()?;
            AgentOrder::new(order).map_err(|e| CliError::Input(format!("{ctx}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    TieBreakProfile::new(orders).map_err(|e| CliError::Input(format!("tiebreak: {e}")))
}

impl MarketFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        parse_json(text, "market file")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("market files serialize")
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let agents = index(&self.agents, "agent")?;
        let houses = index(&self.houses, "house")?;
        if agents.len() != houses.len() {
            return Err(CliError::Input(format!(
                "{} agents but {} houses",
                agents.len(),
                houses.len()
            )));
        }
        let endowment = per_agent(&self.endowment, &self.agents, "endowment")?
            .into_iter()
            .zip(&self.agents)
            .map(|(h, a)| lookup(&houses, h, "house", &format!("endowment of {a:?}")).map(HouseId))
            .collect::<Result<Vec<_>, _>>()?;
        let profile = per_agent(&self.preferences, &self.agents, "preferences")?
            .into_iter()
            .zip(&self.agents)
            .map(|(classes, a)| {
                let ctx = format!("preferences of {a:?}");
                let classes = classes
                    .iter()
                    .map(|c| {
                        c.iter()
                            .map(|h| lookup(&houses, h, "house", &ctx).map(HouseId))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                PreferenceRelation::new(classes).map_err(|e| CliError::Input(format!("{ctx}: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let market =
            Market::new(endowment, profile).map_err(|e| CliError::Input(format!("market: {e}")))?;

        let partition = match &self.partition {
            None => None,
            Some(blocks) => {
                let blocks = blocks
                    .iter()
                    .map(|b| {
                        b.iter()
                            .map(|h| lookup(&houses, h, "house", "partition").map(HouseId))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let p = Partition::new(blocks)
                    .map_err(|e| CliError::Input(format!("partition: {e}")))?;
                if let Some(i) = market.agents().find(|&i| !p.admits(market.preference(i))) {
                    return Err(CliError::Input(format!(
                        "preferences of {:?} do not respect the declared partition",
                        self.agents[i.0]
                    )));
                }
                Some(p)
            }
        };
        let tiebreak = self
            .tiebreak
            .as_ref()
            .map(|t| resolve_tiebreak(t, &self.agents))
            .transpose()?;
        Ok(Resolved {
            names: Names {
                agents: self.agents.clone(),
                houses: self.houses.clone(),
            },
            market,
            partition,
            tiebreak,
        })
    }

    pub fn from_market(
        names: &Names,
        market: &Market,
        partition: Option<&Partition>,
        tiebreak: Option<&TieBreakProfile>,
    ) -> Self {
        let house_names = |hs: &[HouseId]| hs.iter().map(|&h| names.house(h).to_string()).collect();
        Self {
            agents: names.agents.clone(),
            houses: names.houses.clone(),
            endowment: market
                .agents()
                .map(|i| {
                    (
                        names.agent(i).to_string(),
                        names.house(market.endowment_of(i)).to_string(),
                    )
                })
                .collect(),
            partition: partition.map(|p| p.blocks().iter().map(|b| house_names(b)).collect()),
            preferences: market
                .agents()
                .map(|i| {
                    let classes = market
                        .preference(i)
                        .classes()
                        .iter()
                        .map(|c| house_names(c));
                    (names.agent(i).to_string(), classes.collect())
                })
                .collect(),
            tiebreak: tiebreak.map(|tb| {
                market
                    .agents()
                    .map(|i| {
                        let order = tb
                            .order(i)
                            .agents()
                            .iter()
                            .map(|&a| names.agent(a).to_string());
                        (names.agent(i).to_string(), order.collect())
                    })
                    .collect()
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchoolEntry {
    pub name: String,
    pub capacity: usize,
    /// Students, highest priority first.
    pub priority: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchoolFile {
    pub students: Vec<String>,
    pub schools: Vec<SchoolEntry>,
    /// Student name to schools, best first.
    pub preferences: BTreeMap<String, Vec<String>>,
    /// Student name to the school whose seat it owns.
    pub seats: BTreeMap<String, String>,
    /// Orderings for the seat market; every student first in its own when
    /// absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tiebreak: Option<TieBreakMap>,
}

pub struct ResolvedSchools {
    pub students: Vec<String>,
    pub schools: Vec<String>,
    pub market: SchoolMarket,
    pub seats: Vec<SchoolId>,
    pub tiebreak: TieBreakProfile,
}

impl SchoolFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        parse_json(text, "school file")
    }

    pub fn resolve(&self) -> Result<ResolvedSchools, CliError> {
        let students = index(&self.students, "student")?;
        let names: Vec<String> = self.schools.iter().map(|s| s.name.clone()).collect();
        let schools = index(&names, "school")?;
        let entries = self
            .schools
            .iter()
            .map(|s| {
                let ctx = format!("priority of {:?}", s.name);
                let priority = s
                    .priority
                    .iter()
                    .map(|a| lookup(&students, a, "student", &ctx).map(AgentId))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(School {
                    capacity: s.capacity,
                    priority,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let prefs = per_agent(&self.preferences, &self.students, "preferences")?
            .into_iter()
            .zip(&self.students)
            .map(|(p, a)| {
                let ctx = format!("preferences of {a:?}");
                p.iter()
                    .map(|s| lookup(&schools, s, "school", &ctx).map(SchoolId))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let seats = per_agent(&self.seats, &self.students, "seats")?
            .into_iter()
            .zip(&self.students)
            .map(|(s, a)| lookup(&schools, s, "school", &format!("seat of {a:?}")).map(SchoolId))
            .collect::<Result<Vec<_>, _>>()?;
        let market = SchoolMarket::new(entries, prefs)
            .map_err(|e| CliError::Input(format!("school market: {e}")))?;
        let tiebreak = match &self.tiebreak {
            Some(t) => resolve_tiebreak(t, &self.students)?,
            None => TieBreakProfile::self_first(self.students.len()),
        };
        Ok(ResolvedSchools {
            students: self.students.clone(),
            schools: names,
            market,
            seats,
            tiebreak,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO: &str = r#"{
        "agents": ["a", "b"],
        "houses": ["h1", "h2"],
        "endowment": {"a": "h1", "b": "h2"},
        "preferences": {"a": [["h1", "h2"]], "b": [["h1"], ["h2"]]}
    }"#;

    #[test]
    fn resolves_names() {
        let r = MarketFile::parse(TWO).unwrap().resolve().unwrap();
        assert_eq!(r.market.agent_count(), 2);
        assert!(!r.market.preference(AgentId(0)).is_strict());
        assert!(r.tiebreak.is_none());
    }

    #[test]
    fn reports_line_numbers() {
        let err = MarketFile::parse("{\n  \"agents\": [\"a\",\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
    }

    #[test]
    fn rejects_unknown_house() {
        let text = TWO.replace(r#"[["h1"], ["h2"]]"#, r#"[["h1"], ["h3"]]"#);
        let err = MarketFile::parse(&text).unwrap().resolve().unwrap_err();
        assert!(err.to_string().contains("unknown house \"h3\""), "{err}");
    }

    #[test]
    fn rejects_partition_violations() {
        let text = TWO.replace(
            r#""preferences""#,
            r#""partition": [["h1", "h2"]], "preferences""#,
        );
        let err = MarketFile::parse(&text).unwrap().resolve().unwrap_err();
        assert!(err.to_string().contains("\"b\""), "{err}");
    }

    #[test]
    fn duplicate_names() {
        let text = TWO.replace(r#"["a", "b"]"#, r#"["a", "a"]"#);
        assert!(MarketFile::parse(&text).unwrap().resolve().is_err());
    }

    #[test]
    fn generated_names() {
        let n = Names::generated(3).unwrap();
        assert_eq!(n.agents, ["a", "b", "c"]);
        assert_eq!(n.houses, ["h1", "h2", "h3"]);
        assert!(Names::generated(27).is_err());
    }
}
