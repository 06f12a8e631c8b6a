// mdbook cannot run Rust snippets that depend on a workspace crate, so each
// chapter is pulled in as the docs of an empty module and `cargo test --doc`
// runs its code blocks. One module per chapter keeps failures traceable to
// the chapter they came from.

#[doc = include_str!("../../src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../src/markets.md")]
pub mod markets {}
#[doc = include_str!("../../src/tie-breaking.md")]
pub mod tie_breaking {}
#[doc = include_str!("../../src/ttc.md")]
pub mod ttc {}
#[doc = include_str!("../../src/domains.md")]
pub mod domains {}
#[doc = include_str!("../../src/axioms.md")]
pub mod axioms {}
#[doc = include_str!("../../src/manipulation.md")]
pub mod manipulation {}
#[doc = include_str!("../../src/counterexamples.md")]
pub mod counterexamples {}
#[doc = include_str!("../../src/schools.md")]
pub mod schools {}
#[doc = include_str!("../../src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
