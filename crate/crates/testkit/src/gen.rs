//! Random knowledge bases, query trees and proptest strategies.

use annote_kb::model::{
    AnnotationMeta, AnnotationObject, AttributeName, AvPair, DocumentRecord, Id, Term, Tier, Value,
};
use annote_kb::query::{Criterion, QueryExpr};
use annote_kb::KnowledgeBase;
use proptest::prelude::*;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub struct KbShape {
    pub objects: usize,
    pub attributes: usize,
    pub terms: usize,
}

impl KbShape {
    pub const LARGE: KbShape = KbShape {
        objects: 1000,
        attributes: 50,
        terms: 500,
    };

    pub const SMALL: KbShape = KbShape {
        objects: 40,
        attributes: 6,
        terms: 20,
    };
}

pub fn attribute_name(i: usize) -> AttributeName {
    AttributeName::new(&format!("attr {i}")).expect("non-empty")
}

pub fn term_name(i: usize) -> Term {
    Term::new(&format!("Terme {i}")).expect("non-empty")
}

// squared uniform: low indexes are frequent, so lists overlap
fn skewed(rng: &mut ChaCha8Rng, n: usize) -> usize {
    let u: f64 = rng.random();
    ((u * u) * n as f64) as usize % n
}

/// A random kb. About one object in ten annotates an earlier object, some
/// pairs lack their attribute or values, some values are weighted.
pub fn random_kb(seed: u64, shape: KbShape) -> KnowledgeBase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kb = KnowledgeBase::new();
    let documents = (shape.objects / 10).max(1);
    for i in 0..shape.objects {
        let target = if i > 0 && rng.random_bool(0.1) {
            format!("o{}", rng.random_range(0..i))
        } else {
            format!("d{}", rng.random_range(0..documents))
        };
        let pair_count = rng.random_range(1..=3);
        let mut pairs = Vec::with_capacity(pair_count);
        for _ in 0..pair_count {
            let attribute = rng
                .random_bool(0.9)
                .then(|| attribute_name(skewed(&mut rng, shape.attributes)));
            let min = if attribute.is_some() { 0 } else { 1 };
            let count = if attribute.is_some() && rng.random_bool(0.05) {
                0
            } else {
                rng.random_range(min.max(1)..=4)
            };
            let mut values: Vec<Value> = Vec::with_capacity(count);
            for rank in 0..count {
                let term = term_name(skewed(&mut rng, shape.terms));
                if values.iter().any(|v| v.term == term) {
                    continue;
                }
                values.push(if rng.random_bool(0.1) {
                    Value::weighted(term, rank as i64)
                } else {
                    Value::plain(term)
                });
            }
            pairs.push(AvPair::new(attribute, values));
        }
        let object = AnnotationObject::new(
            Id::new(&format!("o{i}")).unwrap(),
            Id::new(&target).unwrap(),
            pairs,
            AnnotationMeta::imported(),
        )
        .expect("o{i} never targets itself");
        kb.insert(object).expect("generated object is valid");
    }
    kb
}

/// A random resolved query tree of depth at most `max_depth`. Leaves mostly
/// reuse terms from stored lists so that results are not always empty.
pub fn random_query(
    rng: &mut ChaCha8Rng,
    kb: &KnowledgeBase,
    shape: KbShape,
    max_depth: usize,
) -> QueryExpr {
    if max_depth == 0 || rng.random_bool(0.3) {
        return QueryExpr::Leaf(random_criterion(rng, kb, shape));
    }
    match rng.random_range(0..5) {
        0 => random_query(rng, kb, shape, max_depth - 1).negate(),
        k => {
            let n = rng.random_range(2..=3);
            let children = (0..n)
                .map(|_| random_query(rng, kb, shape, max_depth - 1))
                .collect();
            if k % 2 == 0 {
                QueryExpr::And(children)
            } else {
                QueryExpr::Or(children)
            }
        }
    }
}

fn random_criterion(rng: &mut ChaCha8Rng, kb: &KnowledgeBase, shape: KbShape) -> Criterion {
    let stored: Option<&AvPair> = if kb.is_empty() || rng.random_bool(0.25) {
        None
    } else {
        let ids: Vec<&Id> = kb.ids().collect();
        let object = kb.object(ids.choose(rng).unwrap()).unwrap();
        object.pairs().iter().find(|p| p.is_explicit())
    };
    match stored {
        Some(pair) => {
            let attribute = if rng.random_bool(0.9) {
                pair.attribute.clone()
            } else {
                Some(attribute_name(skewed(rng, shape.attributes)))
            };
            let take = rng.random_range(1..=pair.values.len().min(3));
            let mut values: Vec<Term> = pair
                .values
                .choose_multiple(rng, take)
                .map(|v| v.term.clone())
                .collect();
            if rng.random_bool(0.1) {
                values.push(term_name(skewed(rng, shape.terms)));
            }
            Criterion::new(attribute, values).unwrap()
        }
        None => Criterion::new(
            Some(attribute_name(skewed(rng, shape.attributes))),
            vec![term_name(skewed(rng, shape.terms))],
        )
        .unwrap(),
    }
}

/// Acyclic chain `c{depth} -> ... -> c1 -> root_doc`, inserted in a random
/// order, with `root_doc` registered as a primary document. Returns the kb,
/// the top id and the root.
pub fn random_chain(rng: &mut ChaCha8Rng, depth: usize) -> (KnowledgeBase, Id, Id) {
    let root = Id::new("root_doc").unwrap();
    let mut objects: Vec<AnnotationObject> = (1..=depth)
        .map(|i| {
            let target = if i == 1 {
                root.clone()
            } else {
                Id::new(&format!("c{}", i - 1)).unwrap()
            };
            AnnotationObject::new(
                Id::new(&format!("c{i}")).unwrap(),
                target,
                vec![AvPair::new(
                    Some(attribute_name(0)),
                    vec![Value::plain(term_name(i))],
                )],
                AnnotationMeta::imported(),
            )
            .unwrap()
        })
        .collect();
    use rand::seq::SliceRandom;
    objects.shuffle(rng);
    let mut kb = KnowledgeBase::new();
    kb.register_document(DocumentRecord::new(root.clone(), Tier::Primary))
        .expect("not an object");
    for o in objects {
        kb.insert(o).expect("acyclic chain");
    }
    let top = if depth == 0 {
        root.clone()
    } else {
        Id::new(&format!("c{depth}")).unwrap()
    };
    (kb, top, root)
}

// ---- proptest strategies ----

/// Raw strings that normalize to a non-empty term: French letters, spaces,
/// hyphens, quotes and backslashes, mixed case.
pub fn raw_text() -> impl Strategy<Value = String> {
    "[a-zA-Zàâçéèêëîïôûùüÿœæ ÀÂÇÉÈÊÎÔÛ\\-\"\\\\']{1,12}"
        .prop_filter("normalizes to a non-empty term", |s| Term::new(s).is_ok())
}

pub fn arb_term() -> impl Strategy<Value = Term> {
    raw_text().prop_map(|s| Term::new(&s).unwrap())
}

pub fn arb_attribute() -> impl Strategy<Value = AttributeName> {
    raw_text().prop_filter_map("non-empty attribute", |s| AttributeName::new(&s).ok())
}

pub fn arb_value() -> impl Strategy<Value = Value> {
    (arb_term(), proptest::option::of(-5i64..100)).prop_map(|(term, rank)| Value { term, rank })
}

/// Any pair, including the invalid `(absent, [])`.
pub fn arb_pair() -> impl Strategy<Value = AvPair> {
    (
        proptest::option::of(arb_attribute()),
        proptest::collection::vec(arb_value(), 0..4),
    )
        .prop_map(|(attribute, values)| AvPair::new(attribute, values))
}

pub fn arb_pairs() -> impl Strategy<Value = Vec<AvPair>> {
    proptest::collection::vec(arb_pair(), 0..5)
}

pub fn arb_criterion() -> impl Strategy<Value = Criterion> {
    (
        proptest::option::of(arb_attribute()),
        proptest::collection::vec(arb_term(), 1..4),
    )
        .prop_map(|(attribute, values)| Criterion::new(attribute, values).unwrap())
}

/// Query trees with well-formed `And`/`Or` (at least two children).
pub fn arb_query() -> impl Strategy<Value = QueryExpr> {
    arb_criterion()
        .prop_map(QueryExpr::Leaf)
        .prop_recursive(5, 48, 3, |inner| {
            prop_oneof![
                proptest::collection::vec(inner.clone(), 2..4).prop_map(QueryExpr::And),
                proptest::collection::vec(inner.clone(), 2..4).prop_map(QueryExpr::Or),
                inner.prop_map(QueryExpr::negate),
            ]
        })
}

pub fn arb_kb(shape: KbShape) -> impl Strategy<Value = KnowledgeBase> {
    any::<u64>().prop_map(move |seed| random_kb(seed, shape))
}
