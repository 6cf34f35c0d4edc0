use std::fmt;

use super::QueryError;
use crate::model::{AttributeName, Term};

/// One `(attribute?, [values])` criterion. Without an attribute the criterion
/// is constrained: its attribute has to be inferred before evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Criterion {
    attribute: Option<AttributeName>,
    values: Vec<Term>,
}

impl Criterion {
    pub fn new(attribute: Option<AttributeName>, values: Vec<Term>) -> Result<Self, QueryError> {
        if values.is_empty() {
            return Err(QueryError::EmptyValues);
        }
        Ok(Criterion { attribute, values })
    }

    pub fn attribute(&self) -> Option<&AttributeName> {
        self.attribute.as_ref()
    }

    pub fn values(&self) -> &[Term] {
        &self.values
    }

    pub fn is_constrained(&self) -> bool {
        self.attribute.is_none()
    }
}

/// Boolean query tree. `And` and `Or` hold at least two children when built
/// by the parser or by [`QueryExpr::all`] / [`QueryExpr::any`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum QueryExpr {
    Leaf(Criterion),
    And(Vec<QueryExpr>),
    Or(Vec<QueryExpr>),
    Not(Box<QueryExpr>),
}

impl QueryExpr {
    /// Conjunction of `children`; a single child is returned bare.
    pub fn all(mut children: Vec<QueryExpr>) -> Option<QueryExpr> {
        match children.len() {
            0 => None,
            1 => children.pop(),
            _ => Some(QueryExpr::And(children)),
        }
    }

    /// Disjunction of `children`; a single child is returned bare.
    pub fn any(mut children: Vec<QueryExpr>) -> Option<QueryExpr> {
        match children.len() {
            0 => None,
            1 => children.pop(),
            _ => Some(QueryExpr::Or(children)),
        }
    }

    pub fn negate(self) -> QueryExpr {
        QueryExpr::Not(Box::new(self))
    }

    pub fn criteria(&self) -> Vec<&Criterion> {
        let mut out = Vec::new();
        self.collect_criteria(&mut out);
        out
    }

    fn collect_criteria<'a>(&'a self, out: &mut Vec<&'a Criterion>) {
        match self {
            QueryExpr::Leaf(c) => out.push(c),
            QueryExpr::And(children) | QueryExpr::Or(children) => {
                children.iter().for_each(|c| c.collect_criteria(out))
            }
            QueryExpr::Not(child) => child.collect_criteria(out),
        }
    }

    /// Canonical text; parsing it gives back the same tree.
    pub fn print(&self) -> String {
        self.to_string()
    }
}

pub(crate) fn write_quoted(f: &mut impl fmt::Write, text: &str) -> fmt::Result {
    f.write_char('"')?;
    for c in text.chars() {
        if c == '"' || c == '\\' {
            f.write_char('\\')?;
        }
        f.write_char(c)?;
    }
    f.write_char('"')
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        if let Some(attribute) = &self.attribute {
            write_quoted(f, attribute.as_str())?;
            f.write_str(", ")?;
        }
        f.write_str("[")?;
        for (i, term) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write_quoted(f, term.as_str())?;
        }
        f.write_str("])")
    }
}

impl fmt::Display for QueryExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryExpr::Leaf(c) => write!(f, "{c}"),
            QueryExpr::And(children) => write_joined(f, children, " ET "),
            QueryExpr::Or(children) => write_joined(f, children, " OU "),
            QueryExpr::Not(child) => {
                f.write_str("NON ")?;
                write_operand(f, child)
            }
        }
    }
}

fn write_joined(f: &mut fmt::Formatter<'_>, children: &[QueryExpr], sep: &str) -> fmt::Result {
    for (i, child) in children.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write_operand(f, child)?;
    }
    Ok(())
}

// binary nodes are always parenthesized as operands, so nesting survives a
// reparse
fn write_operand(f: &mut fmt::Formatter<'_>, expr: &QueryExpr) -> fmt::Result {
    match expr {
        QueryExpr::And(_) | QueryExpr::Or(_) => write!(f, "({expr})"),
        _ => write!(f, "{expr}"),
    }
}
