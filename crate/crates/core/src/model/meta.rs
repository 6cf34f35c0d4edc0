use std::fmt;

use super::{Id, ModelError};

/// What the annotator did to the content.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ActionKind {
    Partager,
    Inclure,
    Filtrer,
    Indexer,
    Faciliter,
    Attacher,
    Autre(String),
}

impl ActionKind {
    pub fn other(text: &str) -> Result<Self, ModelError> {
        non_empty(text).map(ActionKind::Autre)
    }
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ActionKind::Partager => f.write_str("partager"),
            ActionKind::Inclure => f.write_str("inclure"),
            ActionKind::Filtrer => f.write_str("filtrer"),
            ActionKind::Indexer => f.write_str("indexer"),
            ActionKind::Faciliter => f.write_str("faciliter"),
            ActionKind::Attacher => f.write_str("attacher"),
            ActionKind::Autre(text) => f.write_str(text),
        }
    }
}

/// Why the annotation was made.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AnnotationContext {
    Requete,
    RechercheInfo,
    Interpretation,
    Proposition,
    Autre(String),
}

impl AnnotationContext {
    pub fn other(text: &str) -> Result<Self, ModelError> {
        non_empty(text).map(AnnotationContext::Autre)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnnotationMeta {
    pub context: AnnotationContext,
    pub annotator_id: Id,
    pub action: ActionKind,
    /// ISO-8601, stored as given.
    pub timestamp: String,
    pub objective: Option<String>,
}

impl AnnotationMeta {
    pub fn new(
        context: AnnotationContext,
        annotator_id: Id,
        action: ActionKind,
        timestamp: impl Into<String>,
    ) -> Self {
        AnnotationMeta {
            context,
            annotator_id,
            action,
            timestamp: timestamp.into(),
            objective: None,
        }
    }

    pub fn with_objective(mut self, objective: impl Into<String>) -> Self {
        self.objective = Some(objective.into());
        self
    }

    /// Metadata attached to objects read from a fact file, which carries no
    /// provenance of its own.
    pub fn imported() -> Self {
        AnnotationMeta::new(
            AnnotationContext::Autre("import".to_string()),
            Id::new("unknown").expect("valid literal id"),
            ActionKind::Attacher,
            "1970-01-01T00:00:00Z",
        )
    }
}

/// Corpus tier: source, bibliographic notice, or annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tier {
    Primary,
    Secondary,
    Tertiary,
}

impl Tier {
    pub fn keyword(self) -> &'static str {
        match self {
            Tier::Primary => "primary",
            Tier::Secondary => "secondary",
            Tier::Tertiary => "tertiary",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Self> {
        match word {
            "primary" => Some(Tier::Primary),
            "secondary" => Some(Tier::Secondary),
            "tertiary" => Some(Tier::Tertiary),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DocumentRecord {
    pub id: Id,
    pub tier: Tier,
    pub content_ref: Option<String>,
}

impl DocumentRecord {
    pub fn new(id: Id, tier: Tier) -> Self {
        DocumentRecord {
            id,
            tier,
            content_ref: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AnnotatorRole {
    Veilleur,
    Analyste,
    Decideur,
    Autre(String),
}

impl AnnotatorRole {
    pub fn other(text: &str) -> Result<Self, ModelError> {
        non_empty(text).map(AnnotatorRole::Autre)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnnotatorProfile {
    pub id: Id,
    pub name: String,
    pub role: AnnotatorRole,
}

fn non_empty(text: &str) -> Result<String, ModelError> {
    if text.trim().is_empty() {
        Err(ModelError::EmptyLabel)
    } else {
        Ok(text.to_string())
    }
}
