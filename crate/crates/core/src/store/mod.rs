//! The annotation fact base.
//!
//! A [`KnowledgeBase`] owns the annotation objects plus the document and
//! annotator registries, and keeps three indexes in step with the objects:
//! attribute → objects, term → (attribute, object) and target → annotating
//! objects. Every annotation is also registered as a tertiary document so it
//! can itself be the target of further annotations.
//!
//! Values are plain data; share a snapshot behind an `Arc` and produce a new
//! one with [`KnowledgeBase::with_object`] when writing.

mod factfile;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::model::{
    AnnotationObject, AnnotatorProfile, AttributeName, DocumentRecord, ExplicitnessState, Id, Term,
    Tier, Value,
};

pub use factfile::{
    load_facts, load_facts_into, save_facts, Diagnostic, DiagnosticKind, LoadReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StoreError {
    #[error("an annotation with id {0} already exists")]
    DuplicateId(Id),
    #[error("annotation {id} targeting {target} would close a target cycle")]
    CyclicTarget { id: Id, target: Id },
    #[error("annotation {0} is invalid: some pair has neither attribute nor values")]
    InvalidObject(Id),
    #[error("unknown id {0}")]
    UnknownId(Id),
    #[error("document {id} cannot be {tier:?}: tertiary exactly when it is an annotation")]
    TierConflict { id: Id, tier: Tier },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    objects: BTreeMap<Id, AnnotationObject>,
    documents: BTreeMap<Id, DocumentRecord>,
    annotators: BTreeMap<Id, AnnotatorProfile>,
    by_attribute: BTreeMap<AttributeName, BTreeSet<Id>>,
    by_term: BTreeMap<Term, BTreeSet<(AttributeName, Id)>>,
    // annotating objects per target, in insertion order
    by_target: BTreeMap<Id, Vec<Id>>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// Asserts a new annotation object.
    ///
    /// Rejects invalid objects, duplicate ids and targets that would make the
    /// annotation chain cyclic. The kb is left untouched on error.
    pub fn insert(&mut self, object: AnnotationObject) -> Result<(), StoreError> {
        let id = object.id().clone();
        if object.state() == ExplicitnessState::Invalid {
            return Err(StoreError::InvalidObject(id));
        }
        if self.objects.contains_key(&id) {
            return Err(StoreError::DuplicateId(id));
        }
        let mut cursor = object.target();
        loop {
            if cursor == &id {
                return Err(StoreError::CyclicTarget {
                    id,
                    target: object.target().clone(),
                });
            }
            match self.objects.get(cursor) {
                Some(next) => cursor = next.target(),
                None => break,
            }
        }

        for pair in object.pairs() {
            let Some(attribute) = &pair.attribute else {
                continue;
            };
            self.by_attribute
                .entry(attribute.clone())
                .or_default()
                .insert(id.clone());
            for term in pair.terms() {
                self.by_term
                    .entry(term.clone())
                    .or_default()
                    .insert((attribute.clone(), id.clone()));
            }
        }
        self.by_target
            .entry(object.target().clone())
            .or_default()
            .push(id.clone());

        self.documents
            .entry(id.clone())
            .and_modify(|doc| doc.tier = Tier::Tertiary)
            .or_insert_with(|| DocumentRecord::new(id.clone(), Tier::Tertiary));
        self.documents
            .entry(object.target().clone())
            .or_insert_with(|| DocumentRecord::new(object.target().clone(), Tier::Primary));

        self.objects.insert(id, object);
        Ok(())
    }

    /// Snapshot-style insert: returns a new kb, leaving `self` as it was.
    pub fn with_object(&self, object: AnnotationObject) -> Result<Self, StoreError> {
        let mut next = self.clone();
        next.insert(object)?;
        Ok(next)
    }

    /// Registers or replaces a document record.
    pub fn register_document(&mut self, record: DocumentRecord) -> Result<(), StoreError> {
        let is_object = self.objects.contains_key(&record.id);
        if is_object != (record.tier == Tier::Tertiary) {
            return Err(StoreError::TierConflict {
                id: record.id,
                tier: record.tier,
            });
        }
        self.documents.insert(record.id.clone(), record);
        Ok(())
    }

    pub fn register_annotator(&mut self, profile: AnnotatorProfile) {
        self.annotators.insert(profile.id.clone(), profile);
    }

    pub fn object(&self, id: &Id) -> Option<&AnnotationObject> {
        self.objects.get(id)
    }

    /// Objects in ascending id order.
    pub fn objects(&self) -> impl Iterator<Item = &AnnotationObject> {
        self.objects.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = &Id> {
        self.objects.keys()
    }

    pub fn document(&self, id: &Id) -> Option<&DocumentRecord> {
        self.documents.get(id)
    }

    pub fn documents(&self) -> impl Iterator<Item = &DocumentRecord> {
        self.documents.values()
    }

    pub fn annotators(&self) -> impl Iterator<Item = &AnnotatorProfile> {
        self.annotators.values()
    }

    pub fn attribute_index(&self) -> &BTreeMap<AttributeName, BTreeSet<Id>> {
        &self.by_attribute
    }

    pub fn term_index(&self) -> &BTreeMap<Term, BTreeSet<(AttributeName, Id)>> {
        &self.by_term
    }

    pub fn target_index(&self) -> &BTreeMap<Id, Vec<Id>> {
        &self.by_target
    }

    /// `(attribute, object)` postings for a term; empty when unknown.
    pub fn postings(&self, term: &Term) -> Option<&BTreeSet<(AttributeName, Id)>> {
        self.by_term.get(term)
    }

    pub fn objects_with_attribute(&self, attribute: &AttributeName) -> Option<&BTreeSet<Id>> {
        self.by_attribute.get(attribute)
    }

    /// Objects directly annotating `target`, in insertion order.
    pub fn annotating(&self, target: &Id) -> impl Iterator<Item = &AnnotationObject> {
        self.by_target
            .get(target)
            .into_iter()
            .flatten()
            .filter_map(|id| self.objects.get(id))
    }

    /// Attributes of the explicit pairs annotating `target`, deduplicated and
    /// sorted.
    pub fn attributes_of(&self, target: &Id) -> Vec<AttributeName> {
        self.annotating(target)
            .flat_map(|o| o.pairs())
            .filter(|p| p.is_explicit())
            .filter_map(|p| p.attribute.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Value lists of the explicit pairs annotating `target`, in insertion
    /// order.
    pub fn value_lists_of(&self, target: &Id) -> Vec<Vec<Value>> {
        self.annotating(target)
            .flat_map(|o| o.pairs())
            .filter(|p| p.is_explicit())
            .map(|p| p.values.clone())
            .collect()
    }

    /// Follows targets from `id` down to the first id that is not an
    /// annotation. The result starts with `id` itself.
    pub fn trace_chain(&self, id: &Id) -> Result<Vec<Id>, StoreError> {
        if !self.objects.contains_key(id) && !self.documents.contains_key(id) {
            return Err(StoreError::UnknownId(id.clone()));
        }
        let mut chain = vec![id.clone()];
        let mut cursor = id;
        while let Some(object) = self.objects.get(cursor) {
            cursor = object.target();
            chain.push(cursor.clone());
        }
        Ok(chain)
    }
}
