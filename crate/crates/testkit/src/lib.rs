//! Test support for annote-kb: brute-force oracles that scan every pair of
//! every object without touching the kb indexes, random generators, and the
//! committed fixtures.

pub mod gen;
pub mod naive;

/// The three explicit facts.
pub const SEED_FACTS: &str = include_str!("../../core/fixtures/seed_facts.pl");

/// The desk fixture: the three facts plus the notes needed by the search
/// examples.
pub const DESK: &str = include_str!("../../core/fixtures/desk.pl");

/// Canonical save of [`DESK`], reviewed and committed.
pub const DESK_GOLDEN: &str = include_str!("../../core/fixtures/desk.golden.pl");

pub fn desk() -> annote_kb::KnowledgeBase {
    let (kb, report) = annote_kb::load_facts(DESK);
    assert!(report.diagnostics.is_empty(), "{:?}", report.diagnostics);
    kb
}

pub fn id(s: &str) -> annote_kb::model::Id {
    annote_kb::model::Id::new(s).expect("valid id")
}

pub fn term(s: &str) -> annote_kb::model::Term {
    annote_kb::model::Term::new(s).expect("valid term")
}

pub fn attr(s: &str) -> annote_kb::model::AttributeName {
    annote_kb::model::AttributeName::new(s).expect("valid attribute")
}
