use std::collections::BTreeSet;

use super::{Criterion, QueryError, QueryExpr};
use crate::model::{AnnotationObject, Id};
use crate::store::KnowledgeBase;

/// True when one pair of `object` carries the criterion's attribute and all
/// of its terms (subset semantics, ranks ignored).
pub fn matches(object: &AnnotationObject, criterion: &Criterion) -> Result<bool, QueryError> {
    let attribute = criterion
        .attribute()
        .ok_or(QueryError::UnresolvedCriterion)?;
    Ok(object.pairs().iter().any(|pair| {
        pair.attribute.as_ref() == Some(attribute)
            && criterion.values().iter().all(|t| pair.contains_term(t))
    }))
}

/// Ids of the objects satisfying `expr`, ascending. `NON` is the complement
/// within the kb's objects.
pub fn eval(kb: &KnowledgeBase, expr: &QueryExpr) -> Result<Vec<Id>, QueryError> {
    if expr.criteria().iter().any(|c| c.is_constrained()) {
        return Err(QueryError::UnresolvedCriterion);
    }
    Ok(eval_set(kb, expr).into_iter().collect())
}

fn eval_set(kb: &KnowledgeBase, expr: &QueryExpr) -> BTreeSet<Id> {
    match expr {
        QueryExpr::Leaf(criterion) => leaf(kb, criterion),
        QueryExpr::And(children) => {
            let mut sets: Vec<_> = children.iter().map(|c| eval_set(kb, c)).collect();
            sets.sort_by_key(BTreeSet::len);
            let mut sets = sets.into_iter();
            let first = sets.next().unwrap_or_default();
            sets.fold(first, |acc, s| acc.intersection(&s).cloned().collect())
        }
        QueryExpr::Or(children) => children.iter().flat_map(|c| eval_set(kb, c)).collect(),
        QueryExpr::Not(child) => {
            let excluded = eval_set(kb, child);
            kb.ids()
                .filter(|id| !excluded.contains(*id))
                .cloned()
                .collect()
        }
    }
}

fn leaf(kb: &KnowledgeBase, criterion: &Criterion) -> BTreeSet<Id> {
    let attribute = criterion.attribute().expect("checked by eval");
    let mut narrowest = None;
    for term in criterion.values() {
        match kb.postings(term) {
            None => return BTreeSet::new(),
            Some(p) if narrowest.is_none_or(|n: &BTreeSet<_>| p.len() < n.len()) => {
                narrowest = Some(p)
            }
            Some(_) => {}
        }
    }
    narrowest
        .into_iter()
        .flatten()
        .filter(|(a, _)| a == attribute)
        .filter(|(_, id)| {
            kb.object(id)
                .is_some_and(|o| matches(o, criterion).unwrap_or(false))
        })
        .map(|(_, id)| id.clone())
        .collect()
}
