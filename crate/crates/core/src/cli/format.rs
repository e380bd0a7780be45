//! Graph files.
//!
//! Text form, one statement per `;`, `#` starts a comment:
//!
//! ```text
//! vertex u;
//! vertex v;
//! edge e: u -> v;
//! ```
//!
//! Statements may appear in any order; vertex order is declaration order.
//! The JSON form is `{"vertices": [...], "edges": [{"name", "from", "to"}]}`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid JSON graph: {0}")]
    Json(String),
    #[error("name `{0}` cannot be written in the text format")]
    BadName(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Raw file content before validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
}

impl GraphFile {
    pub fn from_graph(graph: &Graph) -> Self {
        GraphFile {
            vertices: graph.vertices().to_vec(),
            edges: graph.edges().to_vec(),
        }
    }

    pub fn validate(self) -> Result<Graph, FormatError> {
        for name in self.vertices.iter().chain(self.edges.iter().map(|e| &e.name)) {
            check_name(name)?;
        }
        Ok(Graph::validate(self.vertices, self.edges)?)
    }
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '.' | '\'' | '′')
}

fn check_name(name: &str) -> Result<(), FormatError> {
    if name.is_empty() || !name.chars().all(is_name_char) || matches!(name, "vertex" | "edge") {
        return Err(FormatError::BadName(name.to_string()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Name(String),
    Semi,
    Colon,
    Arrow,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            chars: src.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(&self, line: usize, column: usize, message: impl Into<String>) -> FormatError {
        FormatError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    /// Next token with its starting position.
    fn next_token(&mut self) -> Result<Option<(Token, usize, usize)>, FormatError> {
        loop {
            match self.chars.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while self.chars.peek().is_some_and(|&c| c != '\n') {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
        let (line, column) = (self.line, self.column);
        let Some(c) = self.bump() else {
            return Ok(None);
        };
        let token = match c {
            ';' => Token::Semi,
            ':' => Token::Colon,
            '-' => match self.bump() {
                Some('>') => Token::Arrow,
                _ => return Err(self.error(line, column, "expected `->`")),
            },
            c if is_name_char(c) => {
                let mut name = String::from(c);
                while let Some(&c) = self.chars.peek() {
                    if !is_name_char(c) {
                        break;
                    }
                    name.push(c);
                    self.bump();
                }
                Token::Name(name)
            }
            c => return Err(self.error(line, column, format!("unexpected character `{c}`"))),
        };
        Ok(Some((token, line, column)))
    }
}

/// Parses the text form into a raw graph file.
pub fn parse_text(src: &str) -> Result<GraphFile, FormatError> {
    let mut lexer = Lexer::new(src);
    let mut file = GraphFile {
        vertices: Vec::new(),
        edges: Vec::new(),
    };

    let expect_name = |lexer: &mut Lexer, what: &str| -> Result<String, FormatError> {
        match lexer.next_token()? {
            Some((Token::Name(n), _, _)) => Ok(n),
            Some((_, l, c)) => Err(lexer.error(l, c, format!("expected {what}"))),
            None => Err(lexer.error(lexer.line, lexer.column, format!("expected {what}, found end of input"))),
        }
    };
    let expect = |lexer: &mut Lexer, want: Token, what: &str| -> Result<(), FormatError> {
        match lexer.next_token()? {
            Some((t, _, _)) if t == want => Ok(()),
            Some((_, l, c)) => Err(lexer.error(l, c, format!("expected `{what}`"))),
            None => Err(lexer.error(lexer.line, lexer.column, format!("expected `{what}`, found end of input"))),
        }
    };

    while let Some((token, line, column)) = lexer.next_token()? {
        match token {
            Token::Name(kw) if kw == "vertex" => {
                let name = expect_name(&mut lexer, "vertex name")?;
                expect(&mut lexer, Token::Semi, ";")?;
                file.vertices.push(name);
            }
            Token::Name(kw) if kw == "edge" => {
                let name = expect_name(&mut lexer, "edge name")?;
                expect(&mut lexer, Token::Colon, ":")?;
                let source = expect_name(&mut lexer, "source vertex")?;
                expect(&mut lexer, Token::Arrow, "->")?;
                let range = expect_name(&mut lexer, "range vertex")?;
                expect(&mut lexer, Token::Semi, ";")?;
                file.edges.push(Edge::new(name, source, range));
            }
            _ => {
                return Err(lexer.error(line, column, "expected `vertex` or `edge`"));
            }
        }
    }
    Ok(file)
}

pub fn parse_json(src: &str) -> Result<GraphFile, FormatError> {
    serde_json::from_str(src).map_err(|e| FormatError::Json(e.to_string()))
}

/// Parses either form; input starting with `{` is JSON.
pub fn parse_graph(src: &str) -> Result<Graph, FormatError> {
    let file = if src.trim_start().starts_with('{') {
        parse_json(src)?
    } else {
        parse_text(src)?
    };
    file.validate()
}

/// Text form of a validated graph, vertices in canonical order.
pub fn emit_text(graph: &Graph) -> String {
    let mut out = String::new();
    for v in graph.vertices() {
        let _ = writeln!(out, "vertex {v};");
    }
    for e in graph.edges() {
        let _ = writeln!(out, "edge {}: {} -> {};", e.name, e.source, e.range);
    }
    out
}

pub fn emit_json(graph: &Graph) -> String {
    let mut s = serde_json::to_string_pretty(&GraphFile::from_graph(graph))
        .expect("graph files always serialize");
    s.push('\n');
    s
}
