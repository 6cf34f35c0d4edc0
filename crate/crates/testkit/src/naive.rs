//! Reference implementations by exhaustive scan.
//!
//! These only read `kb.objects()` and plain pair data; none of them goes
//! through the postings, the attribute index or the library matchers.

use std::collections::BTreeSet;

use annote_kb::model::{AttributeName, Id, Term, Value};
use annote_kb::query::QueryExpr;
use annote_kb::KnowledgeBase;

fn holds(object: &annote_kb::AnnotationObject, expr: &QueryExpr) -> bool {
    match expr {
        QueryExpr::Leaf(c) => {
            let attribute = c.attribute().expect("resolved criterion");
            object.pairs().iter().any(|p| {
                p.attribute.as_ref() == Some(attribute)
                    && c.values()
                        .iter()
                        .all(|t| p.values.iter().any(|v| v.term.as_str() == t.as_str()))
            })
        }
        QueryExpr::And(children) => children.iter().all(|c| holds(object, c)),
        QueryExpr::Or(children) => children.iter().any(|c| holds(object, c)),
        QueryExpr::Not(child) => !holds(object, child),
    }
}

/// Per-object boolean evaluation.
pub fn eval(kb: &KnowledgeBase, expr: &QueryExpr) -> Vec<Id> {
    let mut ids: Vec<Id> = kb
        .objects()
        .filter(|o| holds(o, expr))
        .map(|o| o.id().clone())
        .collect();
    ids.sort();
    ids
}

/// `(attribute, support)` for every attribute whose explicit pairs hold all
/// `terms` in one list, ranked by support desc then name.
pub fn infer_attributes(kb: &KnowledgeBase, terms: &[Term]) -> Vec<(AttributeName, Vec<Id>)> {
    if terms.is_empty() {
        return Vec::new();
    }
    let mut found: Vec<(AttributeName, Vec<Id>)> = Vec::new();
    for object in kb.objects() {
        for pair in object.pairs() {
            let Some(attribute) = &pair.attribute else {
                continue;
            };
            if pair.values.is_empty() {
                continue;
            }
            let all = terms
                .iter()
                .all(|t| pair.values.iter().any(|v| &v.term == t));
            if !all {
                continue;
            }
            match found.iter_mut().find(|(a, _)| a == attribute) {
                Some((_, ids)) => {
                    if !ids.contains(object.id()) {
                        ids.push(object.id().clone());
                    }
                }
                None => found.push((attribute.clone(), vec![object.id().clone()])),
            }
        }
    }
    for (_, ids) in &mut found {
        ids.sort();
    }
    found.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then_with(|| a.0.cmp(&b.0)));
    found
}

/// Distinct stored lists under `attribute` with their supporting objects,
/// ranked by support desc, then first term, then the whole list.
pub fn infer_values(kb: &KnowledgeBase, attribute: &AttributeName) -> Vec<(Vec<Value>, Vec<Id>)> {
    let mut found: Vec<(Vec<Value>, BTreeSet<Id>)> = Vec::new();
    for object in kb.objects() {
        for pair in object.pairs() {
            if pair.attribute.as_ref() != Some(attribute) || pair.values.is_empty() {
                continue;
            }
            match found.iter_mut().find(|(list, _)| *list == pair.values) {
                Some((_, ids)) => {
                    ids.insert(object.id().clone());
                }
                None => found.push((pair.values.clone(), BTreeSet::from([object.id().clone()]))),
            }
        }
    }
    let mut out: Vec<(Vec<Value>, Vec<Id>)> = found
        .into_iter()
        .map(|(list, ids)| (list, ids.into_iter().collect()))
        .collect();
    out.sort_by(|a, b| {
        b.1.len()
            .cmp(&a.1.len())
            .then_with(|| a.0[0].term.cmp(&b.0[0].term))
            .then_with(|| a.0.cmp(&b.0))
    });
    out
}

/// Every `(term, attribute, object)` triple found by scanning pairs.
pub fn term_postings(kb: &KnowledgeBase) -> BTreeSet<(Term, AttributeName, Id)> {
    let mut out = BTreeSet::new();
    for object in kb.objects() {
        for pair in object.pairs() {
            let Some(attribute) = &pair.attribute else {
                continue;
            };
            for value in &pair.values {
                out.insert((value.term.clone(), attribute.clone(), object.id().clone()));
            }
        }
    }
    out
}

/// Attributes of explicit pairs on objects whose target is `target`.
pub fn attributes_of(kb: &KnowledgeBase, target: &Id) -> Vec<AttributeName> {
    let set: BTreeSet<AttributeName> = kb
        .objects()
        .filter(|o| o.target() == target)
        .flat_map(|o| o.pairs())
        .filter(|p| !p.values.is_empty())
        .filter_map(|p| p.attribute.clone())
        .collect();
    set.into_iter().collect()
}

/// Walks targets one object at a time, giving up after `limit` steps.
pub fn walk_targets(kb: &KnowledgeBase, start: &Id, limit: usize) -> Option<Vec<Id>> {
    let mut chain = vec![start.clone()];
    let mut cursor = start.clone();
    for _ in 0..limit {
        match kb.object(&cursor) {
            Some(o) => {
                cursor = o.target().clone();
                chain.push(cursor.clone());
            }
            None => return Some(chain),
        }
    }
    None
}
