//! Recursive-descent parser for the query language:
//!
//! ```text
//! expr      := or_expr
//! or_expr   := and_expr { OR and_expr }
//! and_expr  := unary { AND unary }
//! unary     := NOT unary | "(" expr ")" | criterion
//! criterion := "(" [ STRING "," ] "[" STRING { "," STRING } "]" ")"
//! ```
//!
//! Keywords are `ET`/`AND`, `OU`/`OR`, `NON`/`NOT`, any case. Strings are
//! double-quoted with `\"` and `\\` escapes. Positions are 0-based character
//! offsets into the input.

use std::fmt;

use thiserror::Error;

use super::{Criterion, QueryExpr};
use crate::model::{AttributeName, Term};

const MAX_DEPTH: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: expected {expected}")]
pub struct SyntaxError {
    pub position: usize,
    pub expected: String,
}

impl SyntaxError {
    fn new(position: usize, expected: impl Into<String>) -> Self {
        SyntaxError {
            position,
            expected: expected.into(),
        }
    }

    /// The input line with a caret under the error position.
    pub fn caret(&self, input: &str) -> String {
        let line: String = input
            .chars()
            .map(|c| if c == '\n' { ' ' } else { c })
            .collect();
        format!("{line}\n{}^", " ".repeat(self.position))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Str(String),
    And,
    Or,
    Not,
    End,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::LParen => f.write_str("'('"),
            Token::RParen => f.write_str("')'"),
            Token::LBracket => f.write_str("'['"),
            Token::RBracket => f.write_str("']'"),
            Token::Comma => f.write_str("','"),
            Token::Str(_) => f.write_str("string"),
            Token::And => f.write_str("ET"),
            Token::Or => f.write_str("OU"),
            Token::Not => f.write_str("NON"),
            Token::End => f.write_str("end of input"),
        }
    }
}

fn tokenize(input: &str) -> Result<Vec<(usize, Token)>, SyntaxError> {
    let chars: Vec<char> = input.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let token = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => Token::LParen,
            ')' => Token::RParen,
            '[' => Token::LBracket,
            ']' => Token::RBracket,
            ',' => Token::Comma,
            '"' => {
                let mut text = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err(SyntaxError::new(start, "closing '\"'")),
                        Some('"') => break,
                        Some('\\') => match chars.get(i + 1) {
                            Some(&e @ ('"' | '\\')) => {
                                text.push(e);
                                i += 2;
                            }
                            _ => return Err(SyntaxError::new(i, "escape \\\" or \\\\")),
                        },
                        Some(&c) => {
                            text.push(c);
                            i += 1;
                        }
                    }
                }
                Token::Str(text)
            }
            c if c.is_alphabetic() => {
                while i < chars.len() && chars[i].is_alphanumeric() {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let token = match word.to_uppercase().as_str() {
                    "ET" | "AND" => Token::And,
                    "OU" | "OR" => Token::Or,
                    "NON" | "NOT" => Token::Not,
                    "ANY" => {
                        return Err(SyntaxError::new(
                            start,
                            "ET, OU or NON (ANY is reserved and not supported)",
                        ))
                    }
                    _ => return Err(SyntaxError::new(start, "ET, OU, NON or '('")),
                };
                tokens.push((start, token));
                continue;
            }
            _ => return Err(SyntaxError::new(start, "'(', '[', string or keyword")),
        };
        tokens.push((start, token));
        i += 1;
    }
    tokens.push((chars.len(), Token::End));
    Ok(tokens)
}

/// Parses a query, normalizing attributes and terms.
pub fn parse(input: &str) -> Result<QueryExpr, SyntaxError> {
    let mut parser = Parser {
        tokens: tokenize(input)?,
        pos: 0,
        depth: 0,
    };
    let expr = parser.expr()?;
    parser.expect(&Token::End)?;
    Ok(expr)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].1
    }

    fn peek_second(&self) -> &Token {
        self.tokens
            .get(self.pos + 1)
            .map_or(&Token::End, |(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].0
    }

    fn advance(&mut self) -> Token {
        let token = self.tokens[self.pos].1.clone();
        if token != Token::End {
            self.pos += 1;
        }
        token
    }

    fn expect(&mut self, want: &Token) -> Result<(), SyntaxError> {
        if self.peek() == want {
            self.advance();
            Ok(())
        } else {
            Err(SyntaxError::new(self.offset(), want.to_string()))
        }
    }

    fn expr(&mut self) -> Result<QueryExpr, SyntaxError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(SyntaxError::new(self.offset(), "shallower nesting"));
        }
        let mut children = vec![self.and_expr()?];
        while *self.peek() == Token::Or {
            self.advance();
            children.push(self.and_expr()?);
        }
        self.depth -= 1;
        Ok(QueryExpr::any(children).expect("at least one operand"))
    }

    fn and_expr(&mut self) -> Result<QueryExpr, SyntaxError> {
        let mut children = vec![self.unary()?];
        while *self.peek() == Token::And {
            self.advance();
            children.push(self.unary()?);
        }
        Ok(QueryExpr::all(children).expect("at least one operand"))
    }

    fn unary(&mut self) -> Result<QueryExpr, SyntaxError> {
        match self.peek() {
            Token::Not => {
                self.advance();
                self.depth += 1;
                if self.depth > MAX_DEPTH {
                    return Err(SyntaxError::new(self.offset(), "shallower nesting"));
                }
                let child = self.unary()?;
                self.depth -= 1;
                Ok(child.negate())
            }
            Token::LParen => match self.peek_second() {
                Token::Str(_) | Token::LBracket => self.criterion(),
                _ => {
                    self.advance();
                    let inner = self.expr()?;
                    self.expect(&Token::RParen)?;
                    Ok(inner)
                }
            },
            _ => Err(SyntaxError::new(self.offset(), "NON or '('")),
        }
    }

    fn string(&mut self) -> Result<(usize, String), SyntaxError> {
        let at = self.offset();
        match self.advance() {
            Token::Str(text) => Ok((at, text)),
            _ => {
                self.pos -= 1;
                Err(SyntaxError::new(at, "string"))
            }
        }
    }

    fn criterion(&mut self) -> Result<QueryExpr, SyntaxError> {
        self.expect(&Token::LParen)?;
        let attribute = if matches!(self.peek(), Token::Str(_)) {
            let (at, raw) = self.string()?;
            self.expect(&Token::Comma)?;
            Some(
                AttributeName::new(&raw)
                    .map_err(|_| SyntaxError::new(at, "non-empty attribute"))?,
            )
        } else {
            None
        };
        self.expect(&Token::LBracket)?;
        let mut values = Vec::new();
        loop {
            let (at, raw) = self.string()?;
            values.push(Term::new(&raw).map_err(|_| SyntaxError::new(at, "non-empty term"))?);
            if *self.peek() == Token::Comma {
                self.advance();
            } else {
                break;
            }
        }
        self.expect(&Token::RBracket)?;
        self.expect(&Token::RParen)?;
        let criterion = Criterion::new(attribute, values).expect("values non-empty");
        Ok(QueryExpr::Leaf(criterion))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CLASSIC: &str = r#"("auteur", ["Alain Juillet"]) ET ("mots-clés", ["désinformation", "intelligence stratégique", "décision"])"#;

    fn leaf(attribute: Option<&str>, values: &[&str]) -> QueryExpr {
        QueryExpr::Leaf(
            Criterion::new(
                attribute.map(|a| AttributeName::new(a).unwrap()),
                values.iter().map(|v| Term::new(v).unwrap()).collect(),
            )
            .unwrap(),
        )
    }

    #[test]
    fn classic_query_is_a_conjunction_of_two_leaves() {
        let expr = parse(CLASSIC).unwrap();
        assert_eq!(
            expr,
            QueryExpr::And(vec![
                leaf(Some("auteur"), &["alain juillet"]),
                leaf(
                    Some("mots-clés"),
                    &["désinformation", "intelligence stratégique", "décision"]
                ),
            ])
        );
    }

    #[test]
    fn disjunction() {
        let expr = parse(r#"("souligner", ["pertinent"]) OU ("ordonner", ["pertinent"])"#).unwrap();
        assert_eq!(
            expr,
            QueryExpr::Or(vec![
                leaf(Some("souligner"), &["pertinent"]),
                leaf(Some("ordonner"), &["pertinent"]),
            ])
        );
    }

    #[test]
    fn empty_value_list_is_a_syntax_error() {
        let err = parse(r#"("a", [])"#).unwrap_err();
        assert_eq!(err, SyntaxError::new(7, "string"));
    }

    #[test]
    fn precedence_and_keywords() {
        let a = leaf(Some("a"), &["1"]);
        let b = leaf(Some("b"), &["2"]);
        let c = leaf(Some("c"), &["3"]);
        let expr = parse(r#"("a", ["1"]) or not ("b", ["2"]) and ("c", ["3"])"#).unwrap();
        assert_eq!(
            expr,
            QueryExpr::Or(vec![
                a.clone(),
                QueryExpr::And(vec![b.clone().negate(), c.clone()])
            ])
        );
        let grouped = parse(r#"(("a", ["1"]) OU ("b", ["2"])) Et ("c", ["3"])"#).unwrap();
        assert_eq!(grouped, QueryExpr::And(vec![QueryExpr::Or(vec![a, b]), c]));
    }

    #[test]
    fn constrained_criterion_has_no_attribute() {
        let expr = parse(r#"(["pertinent", "Décision"])"#).unwrap();
        assert_eq!(expr, leaf(None, &["pertinent", "décision"]));
    }

    #[test]
    fn escapes() {
        let expr = parse(r#"("a", ["say \"hi\" \\ there"])"#).unwrap();
        assert_eq!(expr, leaf(Some("a"), &["say \"hi\" \\ there"]));
        assert_eq!(parse(&expr.print()).unwrap(), expr);
    }

    #[test]
    fn errors_point_at_the_offending_token() {
        let err = parse(r#"("a", ["x"]) ET"#).unwrap_err();
        assert_eq!(err.position, 15);
        let err = parse(r#"("a", ["x"]) MAIS ("b", ["y"])"#).unwrap_err();
        assert_eq!(err.position, 13);
        let err = parse(r#"("a", ["x"]"#).unwrap_err();
        assert_eq!(err, SyntaxError::new(11, "')'"));
        let err = parse(r#"("a", ["x"]) ANY"#).unwrap_err();
        assert!(err.expected.contains("reserved"));
        assert!(parse(r#"("a", ["  "])"#)
            .unwrap_err()
            .expected
            .contains("non-empty"));
        assert!(parse("").is_err());
        assert!(parse(r#"("a", ["x)"#).is_err());
    }

    #[test]
    fn caret_lines_up() {
        let input = r#"("a", ["x"]) ET"#;
        let err = parse(input).unwrap_err();
        assert_eq!(
            err.caret(input).lines().nth(1).unwrap(),
            format!("{}^", " ".repeat(15))
        );
    }

    #[test]
    fn printing() {
        assert_eq!(leaf(Some("a"), &["v"]).print(), r#"("a", ["v"])"#);
        let not_and =
            QueryExpr::And(vec![leaf(Some("a"), &["1"]), leaf(Some("b"), &["2"])]).negate();
        assert_eq!(not_and.print(), r#"NON (("a", ["1"]) ET ("b", ["2"]))"#);
        assert_eq!(parse(&not_and.print()).unwrap(), not_and);
        let classic = parse(CLASSIC).unwrap();
        assert_eq!(parse(&classic.print()).unwrap(), classic);
    }

    #[test]
    fn deep_nesting_is_refused_not_overflowed() {
        let deep = format!("{}(\"a\", [\"x\"]){}", "(".repeat(5000), ")".repeat(5000));
        assert!(parse(&deep).is_err());
        let nots = format!("{}(\"a\", [\"x\"])", "NON ".repeat(5000));
        assert!(parse(&nots).is_err());
    }
}
