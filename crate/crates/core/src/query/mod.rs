//! Query language, boolean evaluation and constrained-search rewriting.

mod ast;
mod eval;
mod parser;
mod rewrite;

use thiserror::Error;

use crate::model::Term;

pub use ast::{Criterion, QueryExpr};
pub use eval::{eval, matches};
pub use parser::{parse, SyntaxError};
pub use rewrite::{
    rewrite_constrained, search_constrained, value_list_form, RewriteReport, SearchMode,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("criterion has no attribute; rewrite constrained criteria before evaluating")]
    UnresolvedCriterion,
    #[error("criterion needs at least one value")]
    EmptyValues,
    #[error("no attribute could be inferred for any of {}", join_terms(terms))]
    AllUnresolved { terms: Vec<Term> },
}

fn join_terms(terms: &[Term]) -> String {
    terms
        .iter()
        .map(Term::as_str)
        .collect::<Vec<_>>()
        .join(", ")
}
