//! Shapley-Scarf housing markets with weak preferences.
//!
//! The crate runs top trading cycles with fixed tie-breaking (`TTC_tb`) and
//! checks what it guarantees. Alongside the engine it ships brute-force
//! oracles for individual rationality, Pareto efficiency, the core, the weak
//! core and group strategy-proofness, plus generators that build
//! counterexamples on domains whose indifferences are not shared by all
//! agents.
//!
//! ```
//! use shapley_scarf::{ttc_fixed, Market, PreferenceRelation, TieBreakProfile};
//!
//! // Agent 1 is indifferent between the two houses; agent 2 wants house 1.
//! let market = Market::with_identity_endowment(vec![
//!     PreferenceRelation::from_indices(&[&[0, 1][..]])?,
//!     PreferenceRelation::from_indices(&[&[0][..], &[1]])?,
//! ])?;
//! let tb = TieBreakProfile::self_first(2);
//! let outcome = ttc_fixed(&market, &tb)?;
//! assert_eq!(outcome.allocation, market.endowment_allocation());
//! # Ok::<(), shapley_scarf::Error>(())
//! ```

pub mod axioms;
pub mod campaign;
pub mod counterexamples;
pub mod domain;
pub mod error;
pub mod generate;
pub mod gsp;
pub mod market;
pub mod preference;
pub mod school;
pub mod tiebreak;
pub mod ttc;

pub use axioms::{
    core, find_blocking, in_core, in_weak_core, is_blocking, pareto_dominators, weak_core,
    BlockingMode, BlockingWitness,
};
pub use domain::{
    all_weak_orders, enumerate_oi_domain, AlphaBetaPair, Domain, IndifferenceStructure, Partition,
};
pub use error::{Error, Result};
pub use gsp::{find_group_manipulation, ManipulationWitness};
pub use market::{Allocation, Market};
pub use preference::{AgentId, Comparison, HouseId, PreferenceRelation};
pub use tiebreak::{break_profile, break_ties, AgentOrder, StrictPreference, TieBreakProfile};
pub use ttc::{ttc_fixed, ttc_strict, CycleSelection, ExecutionTrace, TtcOutcome};
