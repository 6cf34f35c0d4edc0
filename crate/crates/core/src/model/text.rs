//! Canonical spellings for terms, attribute names and identifiers.
//!
//! Matching in the knowledge base is purely textual, so every string that
//! enters it goes through one of the normalizers below: trimmed, Unicode
//! case-folded and recomposed to NFC. Accents are kept, `"décision"` and
//! `"decision"` are different terms.

use std::fmt;

use unicode_normalization::UnicodeNormalization;

use super::ModelError;

fn fold(raw: &str) -> String {
    let trimmed = raw.trim();
    let composed: String = trimmed.nfc().collect();
    caseless::default_case_fold_str(&composed).nfc().collect()
}

/// Canonical form of a value term.
pub fn normalize_term(raw: &str) -> Result<Term, ModelError> {
    let text = fold(raw);
    if text.is_empty() {
        return Err(ModelError::EmptyTerm);
    }
    Ok(Term(text))
}

/// Canonical form of an attribute name: the term normalization plus runs of
/// whitespace and hyphens collapsed to a single `-`, so `"mots clés"` and
/// `"Mots-Clés"` are the same attribute.
pub fn normalize_attribute(raw: &str) -> Result<AttributeName, ModelError> {
    let folded = fold(raw);
    let mut text = String::with_capacity(folded.len());
    let mut in_run = false;
    for c in folded.chars() {
        if c == '-' || c.is_whitespace() {
            if !in_run {
                text.push('-');
                in_run = true;
            }
        } else {
            text.push(c);
            in_run = false;
        }
    }
    if text.is_empty() {
        return Err(ModelError::EmptyAttribute);
    }
    Ok(AttributeName(text))
}

/// A normalized value term.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term(String);

impl Term {
    pub fn new(raw: &str) -> Result<Self, ModelError> {
        normalize_term(raw)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Term {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// A normalized attribute name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AttributeName(String);

impl AttributeName {
    pub fn new(raw: &str) -> Result<Self, ModelError> {
        normalize_attribute(raw)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for AttributeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for AttributeName {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// Identifier of an annotation, document or annotator: `[A-Za-z0-9_]+`.
///
/// Identifiers are case-sensitive and never normalized.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Id(String);

impl Id {
    pub fn new(raw: &str) -> Result<Self, ModelError> {
        if raw.is_empty() {
            return Err(ModelError::EmptyIdentifier);
        }
        if !raw.chars().all(is_id_char) {
            return Err(ModelError::InvalidIdentifier(raw.to_string()));
        }
        Ok(Id(raw.to_string()))
    }

    /// A fresh, practically unique annotation identifier.
    pub fn fresh() -> Self {
        Id(format!("ann_{}", uuid::Uuid::new_v4().simple()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub(crate) fn is_id_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

impl fmt::Display for Id {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Id {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_is_trimmed_and_folded() {
        assert_eq!(normalize_term("Stratégie ").unwrap().as_str(), "stratégie");
    }

    #[test]
    fn accents_survive() {
        assert_eq!(
            normalize_term("désinformation").unwrap().as_str(),
            "désinformation"
        );
        assert_ne!(normalize_term("décision"), normalize_term("decision"));
    }

    #[test]
    fn decomposed_input_is_recomposed() {
        let decomposed = "de\u{301}cision";
        assert_eq!(normalize_term(decomposed).unwrap().as_str(), "décision");
    }

    #[test]
    fn blank_term_is_rejected() {
        assert_eq!(normalize_term("  "), Err(ModelError::EmptyTerm));
        assert_eq!(normalize_term(""), Err(ModelError::EmptyTerm));
    }

    #[test]
    fn attribute_spellings_unify() {
        let spaced = normalize_attribute("mots clés").unwrap();
        assert_eq!(spaced.as_str(), "mots-clés");
        assert_eq!(normalize_attribute("Mots-Clés").unwrap(), spaced);
        assert_eq!(normalize_attribute("mots - \t clés").unwrap(), spaced);
        assert_eq!(
            normalize_attribute("SOULIGNER").unwrap().as_str(),
            "souligner"
        );
        assert_eq!(
            normalize_attribute("ordonner").unwrap().as_str(),
            "ordonner"
        );
    }

    #[test]
    fn blank_attribute_is_rejected() {
        assert_eq!(normalize_attribute(" \n"), Err(ModelError::EmptyAttribute));
    }

    #[test]
    fn terms_keep_internal_spaces() {
        assert_eq!(
            normalize_term("Protection du  Patrimoine")
                .unwrap()
                .as_str(),
            "protection du  patrimoine"
        );
    }

    #[test]
    fn identifiers() {
        assert!(Id::new("note_91007").is_ok());
        assert!(Id::new("doc_A").is_ok());
        assert_eq!(Id::new(""), Err(ModelError::EmptyIdentifier));
        assert!(matches!(
            Id::new("a-b"),
            Err(ModelError::InvalidIdentifier(_))
        ));
        let fresh = Id::fresh();
        assert!(Id::new(fresh.as_str()).is_ok());
        assert_ne!(fresh, Id::fresh());
    }
}
