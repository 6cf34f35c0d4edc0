//! Explicitation: recovering the missing half of an implicit pair from the
//! explicit facts already in the base.
//!
//! A pair with values but no attribute is completed with every attribute
//! under which some single stored value list holds all of its terms. A pair
//! with an attribute but no values is completed with each distinct value list
//! stored under that attribute. Only explicit pairs are consulted, and
//! nothing is ever retracted, so adding facts can only add candidates.

use std::collections::{BTreeMap, HashMap};
use std::num::NonZeroUsize;

use thiserror::Error;

use crate::model::{AnnotationObject, AttributeName, AvPair, ExplicitnessState, Id, Term, Value};
use crate::store::KnowledgeBase;

pub const DEFAULT_CAP: NonZeroUsize = NonZeroUsize::new(16).unwrap();

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InferenceError {
    #[error("object is {0}, not implicit")]
    NotImplicit(ExplicitnessState),
    #[error("no candidate completes pair {pair_index}")]
    NoCandidates { pair_index: usize },
}

/// An attribute that could fill a missing attribute slot, with the objects
/// whose explicit pairs justify it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeCandidate {
    pub attribute: AttributeName,
    pub support: Vec<Id>,
}

impl AttributeCandidate {
    pub fn support_count(&self) -> usize {
        self.support.len()
    }
}

/// A stored value list that could fill a missing values slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueCandidate {
    pub values: Vec<Value>,
    pub support: Vec<Id>,
}

impl ValueCandidate {
    pub fn support_count(&self) -> usize {
        self.support.len()
    }
}

/// True when `pair` carries `attribute` and every term of `terms`.
pub(crate) fn pair_covers(pair: &AvPair, attribute: &AttributeName, terms: &[Term]) -> bool {
    pair.attribute.as_ref() == Some(attribute) && terms.iter().all(|t| pair.contains_term(t))
}

/// Attributes under which one stored value list contains all `terms`.
///
/// Ranked by support count (descending), then attribute name. Empty `terms`
/// yield no candidates.
pub fn infer_attributes(kb: &KnowledgeBase, terms: &[Term]) -> Vec<AttributeCandidate> {
    let mut postings = Vec::with_capacity(terms.len());
    for term in terms {
        match kb.postings(term) {
            Some(p) => postings.push(p),
            None => return Vec::new(),
        }
    }
    let Some(narrowest) = postings.iter().min_by_key(|p| p.len()) else {
        return Vec::new();
    };

    let mut grouped: BTreeMap<&AttributeName, Vec<Id>> = BTreeMap::new();
    for (attribute, id) in narrowest.iter() {
        let supported = kb
            .object(id)
            .is_some_and(|o| o.pairs().iter().any(|p| pair_covers(p, attribute, terms)));
        if supported {
            grouped.entry(attribute).or_default().push(id.clone());
        }
    }

    let mut candidates: Vec<_> = grouped
        .into_iter()
        .map(|(attribute, support)| AttributeCandidate {
            attribute: attribute.clone(),
            support,
        })
        .collect();
    // stable sort keeps the name order among equal counts
    candidates.sort_by_key(|c| std::cmp::Reverse(c.support_count()));
    candidates
}

type Completion = (AvPair, Vec<Id>);

/// Distinct value lists stored under `attribute`, ranked by support count
/// (descending), then by first term.
pub fn infer_values(kb: &KnowledgeBase, attribute: &AttributeName) -> Vec<ValueCandidate> {
    let Some(ids) = kb.objects_with_attribute(attribute) else {
        return Vec::new();
    };
    let mut candidates: Vec<ValueCandidate> = Vec::new();
    let mut slot: HashMap<&[Value], usize> = HashMap::new();
    for id in ids {
        let Some(object) = kb.object(id) else {
            continue;
        };
        for pair in object.pairs() {
            if !pair.is_explicit() || pair.attribute.as_ref() != Some(attribute) {
                continue;
            }
            let index = *slot.entry(pair.values.as_slice()).or_insert_with(|| {
                candidates.push(ValueCandidate {
                    values: pair.values.clone(),
                    support: Vec::new(),
                });
                candidates.len() - 1
            });
            let support = &mut candidates[index].support;
            if support.last() != Some(id) {
                support.push(id.clone());
            }
        }
    }
    candidates.sort_by(|a, b| {
        b.support_count()
            .cmp(&a.support_count())
            .then_with(|| a.values[0].term.cmp(&b.values[0].term))
            .then_with(|| a.values.cmp(&b.values))
    });
    candidates
}

/// How one implicit pair was completed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    pub pair_index: usize,
    pub support: Vec<Id>,
}

/// A fully explicit reading of an implicit object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Explication {
    /// Same id, target and metadata as the source object.
    pub object: AnnotationObject,
    /// One entry per completed pair, in pair order.
    pub provenance: Vec<Substitution>,
}

/// Enumerates explicit readings of an implicit object.
///
/// Each implicit pair is completed with its ranked candidates; readings are
/// the cartesian product in rank order (earlier pairs vary slowest), cut at
/// `cap`.
pub fn explicate(
    kb: &KnowledgeBase,
    object: &AnnotationObject,
    cap: NonZeroUsize,
) -> Result<Vec<Explication>, InferenceError> {
    let state = object.state();
    if state != ExplicitnessState::Implicit {
        return Err(InferenceError::NotImplicit(state));
    }

    // (pair index, ranked completions with their support)
    let mut slots: Vec<(usize, Vec<Completion>)> = Vec::new();
    for (pair_index, pair) in object.pairs().iter().enumerate() {
        if pair.is_explicit() {
            continue;
        }
        let options: Vec<_> = match &pair.attribute {
            None => {
                let terms: Vec<Term> = pair.terms().cloned().collect();
                infer_attributes(kb, &terms)
                    .into_iter()
                    .map(|c| {
                        (
                            AvPair::new(Some(c.attribute), pair.values.clone()),
                            c.support,
                        )
                    })
                    .collect()
            }
            Some(attribute) => infer_values(kb, attribute)
                .into_iter()
                .map(|c| (AvPair::new(Some(attribute.clone()), c.values), c.support))
                .collect(),
        };
        if options.is_empty() {
            return Err(InferenceError::NoCandidates { pair_index });
        }
        slots.push((pair_index, options));
    }

    let mut readings = Vec::new();
    let mut choice = vec![0usize; slots.len()];
    loop {
        let mut pairs = object.pairs().to_vec();
        let mut provenance = Vec::with_capacity(slots.len());
        for ((pair_index, options), &pick) in slots.iter().zip(&choice) {
            let (pair, support) = &options[pick];
            pairs[*pair_index] = pair.clone();
            provenance.push(Substitution {
                pair_index: *pair_index,
                support: support.clone(),
            });
        }
        readings.push(Explication {
            object: object.with_pairs(pairs),
            provenance,
        });
        if readings.len() == cap.get() {
            break;
        }
        // odometer step, last slot fastest
        let mut slot = slots.len();
        loop {
            if slot == 0 {
                return Ok(readings);
            }
            slot -= 1;
            choice[slot] += 1;
            if choice[slot] < slots[slot].1.len() {
                break;
            }
            choice[slot] = 0;
        }
    }
    Ok(readings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::AnnotationMeta;

    fn id(s: &str) -> Id {
        Id::new(s).unwrap()
    }

    fn term(s: &str) -> Term {
        Term::new(s).unwrap()
    }

    fn attr(s: &str) -> AttributeName {
        AttributeName::new(s).unwrap()
    }

    fn object(name: &str, pairs: Vec<AvPair>) -> AnnotationObject {
        AnnotationObject::new(id(name), id("doc"), pairs, AnnotationMeta::imported()).unwrap()
    }

    fn kb(objects: Vec<AnnotationObject>) -> KnowledgeBase {
        let mut kb = KnowledgeBase::new();
        for o in objects {
            kb.insert(o).unwrap();
        }
        kb
    }

    fn pair(a: Option<&str>, v: &[&str]) -> AvPair {
        AvPair::parse(a, v).unwrap()
    }

    #[test]
    fn ranking_by_support_then_name() {
        let kb = kb(vec![
            object("o1", vec![pair(Some("b"), &["x"])]),
            object("o2", vec![pair(Some("c"), &["x"])]),
            object("o3", vec![pair(Some("c"), &["x", "y"])]),
            object("o4", vec![pair(Some("a"), &["x"])]),
        ]);
        let names: Vec<_> = infer_attributes(&kb, &[term("x")])
            .into_iter()
            .map(|c| (c.attribute.to_string(), c.support_count()))
            .collect();
        assert_eq!(
            names,
            vec![("c".into(), 2), ("a".into(), 1), ("b".into(), 1)]
        );
    }

    #[test]
    fn conjunction_needs_one_list_holding_every_term() {
        let kb = kb(vec![object(
            "o1",
            vec![pair(Some("a"), &["x"]), pair(Some("a"), &["y"])],
        )]);
        assert!(infer_attributes(&kb, &[term("x"), term("y")]).is_empty());
        assert_eq!(infer_attributes(&kb, &[term("x")]).len(), 1);
        assert!(infer_attributes(&kb, &[]).is_empty());
    }

    #[test]
    fn values_are_grouped_by_list() {
        let kb = kb(vec![
            object("o1", vec![pair(Some("a"), &["z"])]),
            object(
                "o2",
                vec![pair(Some("a"), &["y", "w"]), pair(Some("a"), &["y", "w"])],
            ),
            object("o3", vec![pair(Some("a"), &["y", "w"])]),
            object("o4", vec![pair(Some("a"), &["b"])]),
        ]);
        let got: Vec<_> = infer_values(&kb, &attr("a"))
            .into_iter()
            .map(|c| (c.values[0].term.to_string(), c.support))
            .collect();
        assert_eq!(
            got,
            vec![
                ("y".into(), vec![id("o2"), id("o3")]),
                ("b".into(), vec![id("o4")]),
                ("z".into(), vec![id("o1")]),
            ]
        );
        assert!(infer_values(&KnowledgeBase::new(), &attr("x")).is_empty());
    }

    #[test]
    fn explicate_rejects_non_implicit() {
        let kb = KnowledgeBase::new();
        let explicit = object("q", vec![pair(Some("a"), &["x"])]);
        assert_eq!(
            explicate(&kb, &explicit, DEFAULT_CAP),
            Err(InferenceError::NotImplicit(ExplicitnessState::Explicit))
        );
        let invalid = object("q", vec![AvPair::new(None, vec![])]);
        assert_eq!(
            explicate(&kb, &invalid, DEFAULT_CAP),
            Err(InferenceError::NotImplicit(ExplicitnessState::Invalid))
        );
    }

    #[test]
    fn explicate_reports_the_stuck_pair() {
        let kb = kb(vec![object("o1", vec![pair(Some("a"), &["x"])])]);
        let q = object(
            "q",
            vec![
                pair(Some("a"), &["x"]),
                pair(None, &["x"]),
                pair(None, &["nope"]),
            ],
        );
        assert_eq!(
            explicate(&kb, &q, DEFAULT_CAP),
            Err(InferenceError::NoCandidates { pair_index: 2 })
        );
    }

    #[test]
    fn cartesian_product_in_rank_order_and_capped() {
        let kb = kb(vec![
            object("o1", vec![pair(Some("a"), &["x"]), pair(Some("m"), &["1"])]),
            object("o2", vec![pair(Some("a"), &["x"]), pair(Some("m"), &["2"])]),
            object("o3", vec![pair(Some("b"), &["x"]), pair(Some("m"), &["2"])]),
        ]);
        let q = object("q", vec![pair(None, &["x"]), pair(Some("m"), &[])]);
        let all = explicate(&kb, &q, NonZeroUsize::new(100).unwrap()).unwrap();
        let shape: Vec<_> = all
            .iter()
            .map(|e| {
                let p = e.object.pairs();
                (
                    p[0].attribute.as_ref().unwrap().to_string(),
                    p[1].values[0].term.to_string(),
                )
            })
            .collect();
        assert_eq!(
            shape,
            vec![
                ("a".into(), "2".into()),
                ("a".into(), "1".into()),
                ("b".into(), "2".into()),
                ("b".into(), "1".into()),
            ]
        );
        assert!(all
            .iter()
            .all(|e| e.object.state() == ExplicitnessState::Explicit));
        assert!(all
            .iter()
            .all(|e| e.object.id() == q.id() && e.object.meta() == q.meta()));
        assert_eq!(all[0].provenance[0].support, vec![id("o1"), id("o2")]);
        assert_eq!(all[0].provenance[1].pair_index, 1);

        let capped = explicate(&kb, &q, NonZeroUsize::new(3).unwrap()).unwrap();
        assert_eq!(capped, all[..3].to_vec());
    }
}
