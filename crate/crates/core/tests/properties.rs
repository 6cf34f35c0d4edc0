use std::collections::BTreeSet;
use std::num::NonZeroUsize;

use annote_kb::inference::{explicate, infer_attributes, infer_values};
use annote_kb::model::{
    classify_pairs, normalize_attribute, normalize_term, AnnotationMeta, AnnotationObject, AvPair,
    ExplicitnessState, Id, Value,
};
use annote_kb::query::{
    eval, parse, rewrite_constrained, search_constrained, QueryExpr, SearchMode,
};
use annote_kb::{load_facts, save_facts, KnowledgeBase};
use annote_kb_testkit::gen::{self, KbShape};
use annote_kb_testkit::naive;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #[test]
    fn normalization_is_idempotent_and_caseless(raw in gen::raw_text()) {
        let t = normalize_term(&raw).unwrap();
        prop_assert_eq!(normalize_term(t.as_str()).unwrap(), t.clone());
        prop_assert_eq!(normalize_term(&raw.to_uppercase()).unwrap(), t);

        if let Ok(a) = normalize_attribute(&raw) {
            prop_assert_eq!(normalize_attribute(a.as_str()).unwrap(), a.clone());
            prop_assert_eq!(normalize_attribute(&raw.to_uppercase()).unwrap(), a);
        }
    }

    #[test]
    fn normalization_never_panics(raw in any::<String>()) {
        if let Ok(t) = normalize_term(&raw) {
            prop_assert_eq!(normalize_term(t.as_str()).unwrap(), t);
        }
        if let Ok(a) = normalize_attribute(&raw) {
            prop_assert_eq!(normalize_attribute(a.as_str()).unwrap(), a);
        }
    }

    #[test]
    fn explicit_iff_every_pair_complete(pairs in gen::arb_pairs()) {
        let complete = !pairs.is_empty()
            && pairs.iter().all(|p| p.attribute.is_some() && !p.values.is_empty());
        prop_assert_eq!(classify_pairs(&pairs) == ExplicitnessState::Explicit, complete);
    }

    #[test]
    fn rank_is_ignored_when_matching(t in gen::arb_term(), rank in any::<i64>()) {
        prop_assert!(Value::weighted(t.clone(), rank).same_term(&Value::plain(t)));
    }

    #[test]
    fn print_then_parse_is_identity(expr in gen::arb_query()) {
        prop_assert_eq!(parse(&expr.print()).unwrap(), expr);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn term_index_matches_a_scan(kb in gen::arb_kb(KbShape::LARGE)) {
        let indexed: BTreeSet<_> = kb
            .term_index()
            .iter()
            .flat_map(|(t, set)| set.iter().map(move |(a, o)| (t.clone(), a.clone(), o.clone())))
            .collect();
        prop_assert_eq!(indexed, naive::term_postings(&kb));
        for ids in kb.attribute_index().values() {
            prop_assert!(ids.iter().all(|id| kb.object(id).is_some()));
        }
        for ids in kb.target_index().values() {
            prop_assert!(ids.iter().all(|id| kb.object(id).is_some()));
        }
    }

    #[test]
    fn attributes_of_matches_a_scan(kb in gen::arb_kb(KbShape::SMALL)) {
        for doc in kb.documents() {
            prop_assert_eq!(kb.attributes_of(&doc.id), naive::attributes_of(&kb, &doc.id));
        }
    }

    #[test]
    fn chains_end_on_a_document(kb in gen::arb_kb(KbShape::SMALL)) {
        for object in kb.objects() {
            let chain = kb.trace_chain(object.id()).unwrap();
            prop_assert!(kb.object(chain.last().unwrap()).is_none());
            prop_assert_eq!(Some(chain), naive::walk_targets(&kb, object.id(), kb.len() + 1));
        }
    }

    #[test]
    fn save_load_round_trip(kb in gen::arb_kb(KbShape::SMALL)) {
        let saved = save_facts(&kb);
        let (back, report) = load_facts(&saved);
        prop_assert!(report.diagnostics.is_empty());
        prop_assert_eq!(back.term_index(), kb.term_index());
        prop_assert_eq!(back.attribute_index(), kb.attribute_index());
        for (a, b) in back.objects().zip(kb.objects()) {
            prop_assert_eq!(a.pairs(), b.pairs());
            prop_assert_eq!(a.target(), b.target());
        }
        prop_assert_eq!(save_facts(&back), saved);
    }

    #[test]
    fn inference_matches_a_scan(kb in gen::arb_kb(KbShape::SMALL), picks in proptest::collection::vec(0usize..20, 1..3)) {
        let terms: Vec<_> = picks.iter().map(|&i| gen::term_name(i)).collect();
        let got: Vec<_> = infer_attributes(&kb, &terms)
            .into_iter()
            .map(|c| (c.attribute, c.support))
            .collect();
        prop_assert_eq!(&got, &naive::infer_attributes(&kb, &terms));
        // soundness by direct lookup
        for (attribute, support) in &got {
            for id in support {
                let o = kb.object(id).unwrap();
                prop_assert!(o.pairs().iter().any(|p| p.attribute.as_ref() == Some(attribute)
                    && terms.iter().all(|t| p.contains_term(t))));
            }
        }
        for i in 0..6 {
            let a = gen::attribute_name(i);
            let got: Vec<_> = infer_values(&kb, &a).into_iter().map(|c| (c.values, c.support)).collect();
            prop_assert_eq!(got, naive::infer_values(&kb, &a));
        }
    }

    #[test]
    fn boolean_laws_hold_on_result_sets(kb in gen::arb_kb(KbShape::SMALL), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = gen::random_query(&mut rng, &kb, KbShape::SMALL, 2);
        let b = gen::random_query(&mut rng, &kb, KbShape::SMALL, 2);
        let set = |e: &QueryExpr| eval(&kb, e).unwrap().into_iter().collect::<BTreeSet<_>>();
        let (sa, sb) = (set(&a), set(&b));
        let all: BTreeSet<Id> = kb.ids().cloned().collect();
        prop_assert_eq!(set(&QueryExpr::And(vec![a.clone(), b.clone()])), &sa & &sb);
        prop_assert_eq!(set(&QueryExpr::Or(vec![a.clone(), b.clone()])), &sa | &sb);
        prop_assert_eq!(set(&a.clone().negate()), &all - &sa);
        prop_assert_eq!(eval(&kb, &a).unwrap(), naive::eval(&kb, &a));
    }

    #[test]
    fn explicate_outputs_are_explicit_and_capped(kb in gen::arb_kb(KbShape::SMALL), cap in 1usize..8, picks in proptest::collection::vec(0usize..20, 1..3)) {
        let cap = NonZeroUsize::new(cap).unwrap();
        let mut pairs: Vec<AvPair> = picks
            .iter()
            .map(|&i| AvPair::new(None, vec![Value::plain(gen::term_name(i))]))
            .collect();
        pairs.push(AvPair::new(Some(gen::attribute_name(0)), vec![]));
        let object = AnnotationObject::new(
            Id::new("probe").unwrap(), Id::new("d0").unwrap(), pairs, AnnotationMeta::imported(),
        ).unwrap();
        if let Ok(readings) = explicate(&kb, &object, cap) {
            prop_assert!(!readings.is_empty() && readings.len() <= cap.get());
            for r in &readings {
                prop_assert_eq!(r.object.state(), ExplicitnessState::Explicit);
            }
        }
    }

    #[test]
    fn adding_facts_never_removes_candidates(seed in any::<u64>(), pick in 0usize..20) {
        let full = gen::random_kb(seed, KbShape::SMALL);
        let ids: Vec<Id> = full.ids().cloned().collect();
        let (head, tail) = ids.split_at(ids.len() / 2);
        let mut partial = KnowledgeBase::new();
        for id in head {
            let o = full.object(id).unwrap().clone();
            // targets on the dropped half may be missing, which is fine
            partial.insert(o).unwrap();
        }
        let terms = [gen::term_name(pick)];
        let before = infer_attributes(&partial, &terms);
        let mut grown = partial.clone();
        for id in tail {
            grown.insert(full.object(id).unwrap().clone()).unwrap();
        }
        let after = infer_attributes(&grown, &terms);
        for c in before {
            let same = after.iter().find(|d| d.attribute == c.attribute);
            prop_assert!(same.is_some());
            let support: BTreeSet<_> = same.unwrap().support.iter().collect();
            prop_assert!(c.support.iter().all(|id| support.contains(id)));
        }
    }

    #[test]
    fn rewrite_is_deterministic_and_adds_nothing_for_unambiguous_terms(kb in gen::arb_kb(KbShape::SMALL), pick in 0usize..20) {
        let terms = [gen::term_name(pick)];
        let first = rewrite_constrained(&kb, &terms);
        prop_assert_eq!(&first, &rewrite_constrained(&kb, &terms));
        if let Ok(report) = first {
            if let QueryExpr::Leaf(_) = &report.rewritten {
                prop_assert_eq!(
                    search_constrained(&kb, &terms, SearchMode::Strict).unwrap(),
                    eval(&kb, &report.rewritten).unwrap()
                );
            }
            prop_assert!(report.rewritten.criteria().iter().all(|c| !c.is_constrained()));
        }
    }
}
