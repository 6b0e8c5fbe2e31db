//! Text formats: scheme files ("n d" + n rows) and edge files ("n m" + m pairs).

use std::fmt::Write as _;

use schemex_core::scheme::RelIndex;
use schemex_core::{AssociationScheme, Graph, RelationMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

/// Non-empty lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty())
}

fn numbers(line: usize, tokens: &[&str]) -> Result<Vec<usize>, ParseError> {
    tokens
        .iter()
        .map(|t| t.parse::<usize>().map_err(|_| err(line, format!("not a non-negative integer: {t:?}"))))
        .collect()
}

fn header<'a>(it: &mut impl Iterator<Item = (usize, Vec<&'a str>)>, what: &str) -> Result<(usize, usize), ParseError> {
    let (line, tokens) = it.next().ok_or_else(|| err(0, "empty file"))?;
    match numbers(line, &tokens)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(err(line, format!("header must be \"{what}\""))),
    }
}

pub fn parse_scheme(text: &str) -> Result<RelationMatrix, ParseError> {
    let mut it = lines(text);
    let (n, d) = header(&mut it, "n d")?;
    if d > RelIndex::MAX as usize {
        return Err(err(1, format!("d = {d} exceeds {}", RelIndex::MAX)));
    }
    let mut rel = Vec::with_capacity(n * n);
    for row in 0..n {
        let (line, tokens) = it.next().ok_or_else(|| err(0, format!("expected {n} rows, found {row}")))?;
        let values = numbers(line, &tokens)?;
        if values.len() != n {
            return Err(err(line, format!("expected {n} entries, found {}", values.len())));
        }
        if let Some(v) = values.iter().find(|&&v| v > d) {
            return Err(err(line, format!("relation index {v} exceeds d = {d}")));
        }
        rel.extend(values.into_iter().map(|v| v as RelIndex));
    }
    if let Some((line, _)) = it.next() {
        return Err(err(line, "trailing content after the last row"));
    }
    RelationMatrix::new(n, d, rel).map_err(|e| err(0, e.to_string()))
}

pub fn write_scheme(s: &AssociationScheme) -> String {
    let mut out = format!("{} {}\n", s.n(), s.d());
    for x in 0..s.n() {
        let row = s.relations().row(x);
        for (y, r) in row.iter().enumerate() {
            if y > 0 {
                out.push(' ');
            }
            write!(out, "{r}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_edges(text: &str) -> Result<Graph, ParseError> {
    let mut it = lines(text);
    let (n, m) = header(&mut it, "n m")?;
    let mut edges = Vec::with_capacity(m);
    for e in 0..m {
        let (line, tokens) = it.next().ok_or_else(|| err(0, format!("expected {m} edges, found {e}")))?;
        match numbers(line, &tokens)?.as_slice() {
            [u, v] => edges.push((*u, *v)),
            _ => return Err(err(line, "an edge is \"u v\"")),
        }
    }
    if let Some((line, _)) = it.next() {
        return Err(err(line, "trailing content after the last edge"));
    }
    Graph::from_edges(n, &edges).map_err(|e| err(0, e.to_string()))
}
