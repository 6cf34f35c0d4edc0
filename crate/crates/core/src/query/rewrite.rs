//! Constrained search: bare terms are rewritten into a classic boolean query
//! by inferring, for each term, the attributes it is stored under.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::ast::write_quoted;
use super::{eval, Criterion, QueryError, QueryExpr};
use crate::inference::{infer_attributes, infer_values, AttributeCandidate};
use crate::model::{Id, Term};
use crate::store::KnowledgeBase;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchMode {
    /// Any unresolved term empties the result.
    #[default]
    Strict,
    /// Unresolved terms are dropped from the conjunction.
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteReport {
    /// Conjunction over resolved terms; each term is a disjunction over its
    /// candidate attributes. Contains no constrained criterion.
    pub rewritten: QueryExpr,
    /// Input terms without any candidate, in input order.
    pub unresolved_terms: Vec<Term>,
    /// Candidates for every input term (empty for unresolved ones).
    pub per_term_candidates: BTreeMap<Term, Vec<AttributeCandidate>>,
    /// Resolved terms in input order.
    pub resolved_terms: Vec<Term>,
}

/// Rewrites bare terms into `t1' ET t2' ...` where `ti'` is
/// `(a1, [ti]) OU (a2, [ti]) ...` over the inferred attributes of `ti`.
/// Duplicate terms are considered once.
pub fn rewrite_constrained(
    kb: &KnowledgeBase,
    terms: &[Term],
) -> Result<RewriteReport, QueryError> {
    let mut per_term_candidates = BTreeMap::new();
    let mut unresolved_terms = Vec::new();
    let mut resolved_terms = Vec::new();
    let mut branches = Vec::new();
    for term in terms {
        if per_term_candidates.contains_key(term) {
            continue;
        }
        let candidates = infer_attributes(kb, std::slice::from_ref(term));
        let leaves: Vec<_> = candidates
            .iter()
            .map(|c| {
                let criterion = Criterion::new(Some(c.attribute.clone()), vec![term.clone()])
                    .expect("one value");
                QueryExpr::Leaf(criterion)
            })
            .collect();
        match QueryExpr::any(leaves) {
            Some(branch) => {
                branches.push(branch);
                resolved_terms.push(term.clone());
            }
            None => unresolved_terms.push(term.clone()),
        }
        per_term_candidates.insert(term.clone(), candidates);
    }
    let rewritten = QueryExpr::all(branches).ok_or_else(|| QueryError::AllUnresolved {
        terms: unresolved_terms.clone(),
    })?;
    Ok(RewriteReport {
        rewritten,
        unresolved_terms,
        per_term_candidates,
        resolved_terms,
    })
}

/// Retrieval from bare terms: rewrite, then evaluate.
pub fn search_constrained(
    kb: &KnowledgeBase,
    terms: &[Term],
    mode: SearchMode,
) -> Result<Vec<Id>, QueryError> {
    let report = rewrite_constrained(kb, terms)?;
    if mode == SearchMode::Strict && !report.unresolved_terms.is_empty() {
        return Ok(Vec::new());
    }
    eval(kb, &report.rewritten)
}

/// Display form of a rewrite that spells out the stored value lists (ranks
/// included) instead of the single searched term.
///
/// Identical branches produced by different terms are printed once. This is
/// for display only and is not valid query syntax when ranks appear.
pub fn value_list_form(kb: &KnowledgeBase, report: &RewriteReport) -> String {
    let mut branches: Vec<String> = Vec::new();
    for term in &report.resolved_terms {
        let mut leaves = Vec::new();
        for candidate in &report.per_term_candidates[term] {
            for stored in infer_values(kb, &candidate.attribute) {
                if !stored.values.iter().any(|v| &v.term == term) {
                    continue;
                }
                let mut leaf = String::from("(");
                let _ = write_quoted(&mut leaf, candidate.attribute.as_str());
                leaf.push_str(", [");
                for (i, value) in stored.values.iter().enumerate() {
                    if i > 0 {
                        leaf.push_str(", ");
                    }
                    match value.rank {
                        Some(rank) => {
                            leaf.push('(');
                            let _ = write_quoted(&mut leaf, value.term.as_str());
                            let _ = write!(leaf, ", {rank})");
                        }
                        None => {
                            let _ = write_quoted(&mut leaf, value.term.as_str());
                        }
                    }
                }
                leaf.push_str("])");
                leaves.push(leaf);
            }
        }
        let branch = match leaves.len() {
            1 => leaves.pop().expect("one leaf"),
            _ => format!("({})", leaves.join(" OU ")),
        };
        if !branches.contains(&branch) {
            branches.push(branch);
        }
    }
    branches.join(" ET ")
}
