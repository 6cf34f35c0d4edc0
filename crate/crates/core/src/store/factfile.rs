//! Line-oriented fact file, Prolog flavoured:
//!
//! ```text
//! % comment
//! annotation(note_91007, "souligner", ["stratégie", "développement"], doc_A).
//! annotation(note_56007, "ordonner", [("pauvre", 0), ("faible", 1)], doc_C).
//! annotation(note_5, _, ["pertinent"], doc_C).
//! document(doc_A, primary).
//! annotator(a1, "Jeanne", analyste).
//! ```
//!
//! Loading is lenient: a bad line yields a [`Diagnostic`] and the rest of the
//! file is still read. Lines sharing an object id are merged into one object.
//! Saving is canonical: objects by id, one line per pair, normalized
//! spellings.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use super::{KnowledgeBase, StoreError};
use crate::model::{
    is_id_char, AnnotationMeta, AnnotationObject, AnnotatorProfile, AnnotatorRole, AttributeName,
    AvPair, DocumentRecord, Id, ModelError, Term, Tier, Value,
};

pub const HEADER: &str = "% annote-kb fact base";

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagnosticKind {
    Syntax(String),
    /// The line's pair has neither attribute nor values.
    InvalidObject,
    /// The line repeats an object id with a different target.
    TargetMismatch {
        expected: Id,
    },
    Model(ModelError),
    Store(StoreError),
}

/// A rejected line. `line` and `column` are 1-based; the column counts
/// characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub kind: DiagnosticKind,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.column)?;
        match &self.kind {
            DiagnosticKind::Syntax(reason) => write!(f, "syntax error: {reason}"),
            DiagnosticKind::InvalidObject => {
                f.write_str("invalid object: pair has neither attribute nor values")
            }
            DiagnosticKind::TargetMismatch { expected } => {
                write!(f, "object already targets {expected}")
            }
            DiagnosticKind::Model(err) => write!(f, "{err}"),
            DiagnosticKind::Store(err) => write!(f, "{err}"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadReport {
    /// Objects added to the kb.
    pub inserted: usize,
    pub diagnostics: Vec<Diagnostic>,
}

/// Parses a fact file into a fresh kb.
pub fn load_facts(text: &str) -> (KnowledgeBase, LoadReport) {
    let mut kb = KnowledgeBase::new();
    let report = load_facts_into(&mut kb, text);
    (kb, report)
}

/// Parses a fact file and asserts its content into an existing kb.
pub fn load_facts_into(kb: &mut KnowledgeBase, text: &str) -> LoadReport {
    let mut report = LoadReport::default();
    let mut groups: Vec<Group> = Vec::new();
    let mut group_of: HashMap<Id, usize> = HashMap::new();
    let mut registry: Vec<(usize, Clause)> = Vec::new();

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let clause = match parse_line(raw) {
            Ok(Some(clause)) => clause,
            Ok(None) => continue,
            Err(err) => {
                report.diagnostics.push(err.at(line));
                continue;
            }
        };
        let Clause::Annotation { id, pair, target } = clause else {
            registry.push((line, clause));
            continue;
        };
        let reject = |kind| Diagnostic {
            line,
            column: 1,
            kind,
        };
        if !pair.is_valid() {
            report
                .diagnostics
                .push(reject(DiagnosticKind::InvalidObject));
            continue;
        }
        if id == target {
            report
                .diagnostics
                .push(reject(DiagnosticKind::Model(ModelError::SelfTarget(id))));
            continue;
        }
        match group_of.get(&id) {
            Some(&g) if groups[g].target != target => {
                let expected = groups[g].target.clone();
                report
                    .diagnostics
                    .push(reject(DiagnosticKind::TargetMismatch { expected }));
            }
            Some(&g) => {
                groups[g].lines.push(line);
                groups[g].pairs.push(pair);
            }
            None => {
                group_of.insert(id.clone(), groups.len());
                groups.push(Group {
                    id,
                    target,
                    lines: vec![line],
                    pairs: vec![pair],
                });
            }
        }
    }

    for group in groups {
        let object = AnnotationObject::new(
            group.id,
            group.target,
            group.pairs,
            AnnotationMeta::imported(),
        )
        .expect("self-targets filtered per line");
        match kb.insert(object) {
            Ok(()) => report.inserted += 1,
            Err(err) => report
                .diagnostics
                .extend(group.lines.iter().map(|&line| Diagnostic {
                    line,
                    column: 1,
                    kind: DiagnosticKind::Store(err.clone()),
                })),
        }
    }

    for (line, clause) in registry {
        match clause {
            Clause::Document(record) => {
                if let Err(err) = kb.register_document(record) {
                    report.diagnostics.push(Diagnostic {
                        line,
                        column: 1,
                        kind: DiagnosticKind::Store(err),
                    });
                }
            }
            Clause::Annotator(profile) => kb.register_annotator(profile),
            Clause::Annotation { .. } => unreachable!("annotations are grouped above"),
        }
    }

    report.diagnostics.sort_by_key(|d| (d.line, d.column));
    report
}

/// Canonical text of a kb. `load_facts(save_facts(kb))` rebuilds the same
/// objects and indexes.
pub fn save_facts(kb: &KnowledgeBase) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');
    for doc in kb.documents() {
        if doc.tier == Tier::Tertiary && doc.content_ref.is_none() {
            continue;
        }
        let _ = write!(out, "document({}, {}", doc.id, doc.tier.keyword());
        if let Some(content_ref) = &doc.content_ref {
            out.push_str(", ");
            push_quoted(&mut out, content_ref);
        }
        out.push_str(").\n");
    }
    for annotator in kb.annotators() {
        let _ = write!(out, "annotator({}, ", annotator.id);
        push_quoted(&mut out, &annotator.name);
        out.push_str(", ");
        match &annotator.role {
            AnnotatorRole::Veilleur => out.push_str("veilleur"),
            AnnotatorRole::Analyste => out.push_str("analyste"),
            AnnotatorRole::Decideur => out.push_str("decideur"),
            AnnotatorRole::Autre(text) => push_quoted(&mut out, text),
        }
        out.push_str(").\n");
    }
    for object in kb.objects() {
        for pair in object.pairs() {
            let _ = write!(out, "annotation({}, ", object.id());
            match &pair.attribute {
                Some(attribute) => push_quoted(&mut out, attribute.as_str()),
                None => out.push('_'),
            }
            out.push_str(", [");
            for (i, value) in pair.values.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                match value.rank {
                    Some(rank) => {
                        out.push('(');
                        push_quoted(&mut out, value.term.as_str());
                        let _ = write!(out, ", {rank})");
                    }
                    None => push_quoted(&mut out, value.term.as_str()),
                }
            }
            let _ = writeln!(out, "], {}).", object.target());
        }
    }
    out
}

fn push_quoted(out: &mut String, text: &str) {
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
}

struct Group {
    id: Id,
    target: Id,
    lines: Vec<usize>,
    pairs: Vec<AvPair>,
}

enum Clause {
    Annotation { id: Id, pair: AvPair, target: Id },
    Document(DocumentRecord),
    Annotator(AnnotatorProfile),
}

struct LineError {
    column: usize,
    kind: DiagnosticKind,
}

impl LineError {
    fn at(self, line: usize) -> Diagnostic {
        Diagnostic {
            line,
            column: self.column,
            kind: self.kind,
        }
    }
}

fn parse_line(raw: &str) -> Result<Option<Clause>, LineError> {
    let trimmed = raw.trim_start();
    if trimmed.is_empty() || trimmed.starts_with('%') {
        return Ok(None);
    }
    let mut cursor = Cursor::new(raw);
    cursor.skip_ws();
    let head_at = cursor.column();
    let head = cursor.word();
    let clause = match head.as_str() {
        "annotation" => {
            cursor.expect('(')?;
            let id = cursor.id()?;
            cursor.expect(',')?;
            cursor.skip_ws();
            let attribute = if cursor.eat('_') {
                None
            } else {
                let at = cursor.column();
                let raw = cursor.string()?;
                Some(AttributeName::new(&raw).map_err(|e| model_error(at, e))?)
            };
            cursor.expect(',')?;
            let values = cursor.values()?;
            cursor.expect(',')?;
            let target = cursor.id()?;
            cursor.expect(')')?;
            Clause::Annotation {
                id,
                pair: AvPair::new(attribute, values),
                target,
            }
        }
        "document" => {
            cursor.expect('(')?;
            let id = cursor.id()?;
            cursor.expect(',')?;
            cursor.skip_ws();
            let at = cursor.column();
            let word = cursor.word();
            let tier = Tier::from_keyword(&word)
                .ok_or_else(|| syntax(at, "expected primary, secondary or tertiary"))?;
            let mut record = DocumentRecord::new(id, tier);
            cursor.skip_ws();
            if cursor.eat(',') {
                cursor.skip_ws();
                record.content_ref = Some(cursor.string()?);
            }
            cursor.expect(')')?;
            Clause::Document(record)
        }
        "annotator" => {
            cursor.expect('(')?;
            let id = cursor.id()?;
            cursor.expect(',')?;
            cursor.skip_ws();
            let name = cursor.string()?;
            cursor.expect(',')?;
            cursor.skip_ws();
            let at = cursor.column();
            let role = if cursor.peek() == Some('"') {
                let text = cursor.string()?;
                AnnotatorRole::other(&text).map_err(|e| model_error(at, e))?
            } else {
                match cursor.word().as_str() {
                    "veilleur" => AnnotatorRole::Veilleur,
                    "analyste" => AnnotatorRole::Analyste,
                    "decideur" => AnnotatorRole::Decideur,
                    _ => {
                        return Err(syntax(
                            at,
                            "expected veilleur, analyste, decideur or a string",
                        ))
                    }
                }
            };
            cursor.expect(')')?;
            Clause::Annotator(AnnotatorProfile { id, name, role })
        }
        _ => {
            return Err(syntax(
                head_at,
                "expected annotation, document or annotator",
            ))
        }
    };
    cursor.expect('.')?;
    cursor.skip_ws();
    if cursor.peek().is_some() {
        return Err(syntax(cursor.column(), "unexpected text after clause"));
    }
    Ok(Some(clause))
}

fn syntax(column: usize, reason: &str) -> LineError {
    LineError {
        column,
        kind: DiagnosticKind::Syntax(reason.to_string()),
    }
}

fn model_error(column: usize, err: ModelError) -> LineError {
    LineError {
        column,
        kind: DiagnosticKind::Model(err),
    }
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            chars: text.chars().peekable(),
            column: 1,
        }
    }

    fn column(&self) -> usize {
        self.column
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        self.column += 1;
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), LineError> {
        self.skip_ws();
        if self.eat(c) {
            Ok(())
        } else {
            Err(syntax(self.column, &format!("expected '{c}'")))
        }
    }

    fn word(&mut self) -> String {
        let mut word = String::new();
        while let Some(c) = self.peek().filter(|&c| is_id_char(c)) {
            word.push(c);
            self.bump();
        }
        word
    }

    fn id(&mut self) -> Result<Id, LineError> {
        self.skip_ws();
        let at = self.column;
        let word = self.word();
        if word.is_empty() {
            return Err(syntax(at, "expected identifier [A-Za-z0-9_]+"));
        }
        Id::new(&word).map_err(|e| model_error(at, e))
    }

    fn string(&mut self) -> Result<String, LineError> {
        let at = self.column;
        if !self.eat('"') {
            return Err(syntax(at, "expected '\"'"));
        }
        let mut text = String::new();
        loop {
            match self.bump() {
                None => return Err(syntax(at, "unterminated string")),
                Some('"') => return Ok(text),
                Some('\\') => match self.bump() {
                    Some('"') => text.push('"'),
                    Some('\\') => text.push('\\'),
                    Some('n') => text.push('\n'),
                    Some('r') => text.push('\r'),
                    Some('t') => text.push('\t'),
                    _ => return Err(syntax(self.column - 1, "unknown escape")),
                },
                Some(c) => text.push(c),
            }
        }
    }

    fn integer(&mut self) -> Result<i64, LineError> {
        self.skip_ws();
        let at = self.column;
        let mut digits = String::new();
        if self.eat('-') {
            digits.push('-');
        }
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            digits.push(c);
            self.bump();
        }
        digits
            .parse()
            .map_err(|_| syntax(at, "expected integer rank"))
    }

    fn term(&mut self) -> Result<Term, LineError> {
        self.skip_ws();
        let at = self.column;
        let raw = self.string()?;
        Term::new(&raw).map_err(|e| model_error(at, e))
    }

    fn values(&mut self) -> Result<Vec<Value>, LineError> {
        self.expect('[')?;
        let mut values = Vec::new();
        self.skip_ws();
        if self.eat(']') {
            return Ok(values);
        }
        loop {
            self.skip_ws();
            let value = match self.peek() {
                // ("term", rank), or the ["term", rank] spelling
                Some(open @ ('(' | '[')) => {
                    self.bump();
                    let term = self.term()?;
                    self.expect(',')?;
                    let rank = self.integer()?;
                    self.expect(if open == '(' { ')' } else { ']' })?;
                    Value::weighted(term, rank)
                }
                _ => Value::plain(self.term()?),
            };
            values.push(value);
            self.skip_ws();
            if self.eat(']') {
                return Ok(values);
            }
            if !self.eat(',') {
                return Err(syntax(self.column, "expected ',' or ']'"));
            }
        }
    }
}
