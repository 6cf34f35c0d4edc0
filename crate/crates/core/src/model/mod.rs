//! Domain types for annotation objects and their explicit/implicit
//! classification.
//!
//! An annotation object carries one or more attribute/value pairs. A pair may
//! lack its attribute or its values, but not both; an object whose pairs are
//! all complete is *explicit*, an object with at least one incomplete pair is
//! *implicit*, anything else is *invalid*.

mod meta;
mod text;

use std::fmt;

use thiserror::Error;

pub use meta::{
    ActionKind, AnnotationContext, AnnotationMeta, AnnotatorProfile, AnnotatorRole, DocumentRecord,
    Tier,
};
pub(crate) use text::is_id_char;
pub use text::{normalize_attribute, normalize_term, AttributeName, Id, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("term is empty after normalization")]
    EmptyTerm,
    #[error("attribute name is empty after normalization")]
    EmptyAttribute,
    #[error("identifier is empty")]
    EmptyIdentifier,
    #[error("invalid identifier {0:?}: expected [A-Za-z0-9_]+")]
    InvalidIdentifier(String),
    #[error("annotation target is empty")]
    EmptyTarget,
    #[error("annotation has no attribute/value pair")]
    NoPairs,
    #[error("pair {index} has neither attribute nor values")]
    InvalidPair { index: usize },
    #[error("annotation {0} cannot target itself")]
    SelfTarget(Id),
    #[error("free-text variant requires non-empty text")]
    EmptyLabel,
}

/// A value term, optionally weighted by an integer rank (as in an ordinal
/// scale such as `("pauvre", 0) .. ("pertinent", 4)`).
///
/// Structural equality compares the rank too; matching goes through
/// [`Value::same_term`], which ignores it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Value {
    pub term: Term,
    pub rank: Option<i64>,
}

impl Value {
    pub fn plain(term: Term) -> Self {
        Value { term, rank: None }
    }

    pub fn weighted(term: Term, rank: i64) -> Self {
        Value {
            term,
            rank: Some(rank),
        }
    }

    pub fn same_term(&self, other: &Value) -> bool {
        self.term == other.term
    }
}

impl From<Term> for Value {
    fn from(term: Term) -> Self {
        Value::plain(term)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rank {
            Some(rank) => write!(f, "({}, {})", self.term, rank),
            None => write!(f, "{}", self.term),
        }
    }
}

/// One `(attribute?, values)` pair of an annotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AvPair {
    pub attribute: Option<AttributeName>,
    pub values: Vec<Value>,
}

impl AvPair {
    pub fn new(attribute: Option<AttributeName>, values: Vec<Value>) -> Self {
        AvPair { attribute, values }
    }

    /// Builds a pair from raw strings, normalizing everything.
    pub fn parse(attribute: Option<&str>, values: &[&str]) -> Result<Self, ModelError> {
        let attribute = attribute.map(AttributeName::new).transpose()?;
        let values = values
            .iter()
            .map(|v| Term::new(v).map(Value::plain))
            .collect::<Result<_, _>>()?;
        Ok(AvPair { attribute, values })
    }

    /// Attribute present and at least one value.
    pub fn is_explicit(&self) -> bool {
        self.attribute.is_some() && !self.values.is_empty()
    }

    /// At least one side is present.
    pub fn is_valid(&self) -> bool {
        self.attribute.is_some() || !self.values.is_empty()
    }

    pub fn contains_term(&self, term: &Term) -> bool {
        self.values.iter().any(|v| &v.term == term)
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.values.iter().map(|v| &v.term)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExplicitnessState {
    Explicit,
    Implicit,
    Invalid,
}

impl fmt::Display for ExplicitnessState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExplicitnessState::Explicit => "Explicit",
            ExplicitnessState::Implicit => "Implicit",
            ExplicitnessState::Invalid => "Invalid",
        })
    }
}

/// Classifies a pair list. Total: every list gets exactly one state.
pub fn classify_pairs(pairs: &[AvPair]) -> ExplicitnessState {
    if pairs.is_empty() || pairs.iter().any(|p| !p.is_valid()) {
        ExplicitnessState::Invalid
    } else if pairs.iter().all(AvPair::is_explicit) {
        ExplicitnessState::Explicit
    } else {
        ExplicitnessState::Implicit
    }
}

pub fn classify(object: &AnnotationObject) -> ExplicitnessState {
    classify_pairs(&object.pairs)
}

/// A single annotation: pairs attached to a target, which is either a
/// document or another annotation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationObject {
    id: Id,
    target: Id,
    pairs: Vec<AvPair>,
    meta: AnnotationMeta,
}

impl AnnotationObject {
    /// Assembles an object without checking its pairs; use [`classify`] to
    /// find out whether it is usable.
    pub fn new(
        id: Id,
        target: Id,
        pairs: Vec<AvPair>,
        meta: AnnotationMeta,
    ) -> Result<Self, ModelError> {
        if id == target {
            return Err(ModelError::SelfTarget(id));
        }
        Ok(AnnotationObject {
            id,
            target,
            pairs,
            meta,
        })
    }

    pub fn id(&self) -> &Id {
        &self.id
    }

    pub fn target(&self) -> &Id {
        &self.target
    }

    pub fn pairs(&self) -> &[AvPair] {
        &self.pairs
    }

    pub fn meta(&self) -> &AnnotationMeta {
        &self.meta
    }

    pub fn state(&self) -> ExplicitnessState {
        classify(self)
    }

    /// Same object with a different pair list.
    pub fn with_pairs(&self, pairs: Vec<AvPair>) -> Self {
        AnnotationObject {
            pairs,
            ..self.clone()
        }
    }
}

/// Applies the annotator's action to a target: the result gets a fresh id and
/// `meta.action` is set to `action`. Never returns an invalid object.
pub fn build_object(
    action: ActionKind,
    target: &str,
    pairs: Vec<AvPair>,
    mut meta: AnnotationMeta,
) -> Result<AnnotationObject, ModelError> {
    if target.trim().is_empty() {
        return Err(ModelError::EmptyTarget);
    }
    let target = Id::new(target)?;
    if pairs.is_empty() {
        return Err(ModelError::NoPairs);
    }
    if let Some(index) = pairs.iter().position(|p| !p.is_valid()) {
        return Err(ModelError::InvalidPair { index });
    }
    meta.action = action;
    AnnotationObject::new(Id::fresh(), target, pairs, meta)
}
