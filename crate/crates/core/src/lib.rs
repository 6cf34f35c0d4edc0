//! Annotation knowledge base.
//!
//! Annotations are stored as attribute/value facts about documents (or about
//! other annotations). The crate classifies them as explicit or implicit,
//! completes implicit ones against the explicit facts, and answers two kinds
//! of retrieval:
//!
//! - classic search, a boolean combination of `(attribute, [values])`
//!   criteria, see [`query::parse`] and [`query::eval`];
//! - constrained search from bare terms, whose attributes are inferred and
//!   the query rewritten into a classic one, see
//!   [`query::search_constrained`].
//!
//! ```
//! use annote_kb::{load_facts, query, model::Term};
//!
//! let facts = r#"annotation(n1, "mots clés", ["veille", "décision"], doc_1).
//! annotation(n2, "souligner", ["pertinent"], doc_1).
//! "#;
//! let (kb, report) = load_facts(facts);
//! assert!(report.diagnostics.is_empty());
//!
//! let q = query::parse(r#"("mots-clés", ["Décision"])"#).unwrap();
//! assert_eq!(query::eval(&kb, &q).unwrap()[0].as_str(), "n1");
//!
//! let terms = [Term::new("pertinent").unwrap()];
//! let hits = query::search_constrained(&kb, &terms, query::SearchMode::Strict).unwrap();
//! assert_eq!(hits[0].as_str(), "n2");
//! ```

pub mod inference;
pub mod model;
pub mod query;
pub mod store;

pub use model::{classify, AnnotationObject, ExplicitnessState};
pub use store::{load_facts, save_facts, KnowledgeBase};
