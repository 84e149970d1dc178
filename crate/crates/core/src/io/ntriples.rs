//! A line-oriented N-Triples subset, and the counterexample block built on it.
//!
//! IRIs lose their angle brackets, literals keep their quotes (and any
//! datatype or language suffix) and become ordinary node names. `a` and the
//! usual spellings of `rdf:type` all denote the type property.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use super::shapes::property_id;
use crate::graph::{Assignment, RdfGraph, Triple};
use crate::shapes::{ModelError, ShapeSet};
use crate::symbols::{NodeId, ShapeId, SymbolTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NtError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: unknown shape `{name}`")]
    UnknownShape { line: usize, name: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn malformed<T>(line: usize, message: impl Into<String>) -> Result<T, NtError> {
    Err(NtError::Malformed {
        line,
        message: message.into(),
    })
}

/// Splits the next term off `s`: `<iri>`, `"literal"` with suffix, `_:blank`
/// or a bare word.
fn term(s: &str, line: usize) -> Result<(&str, &str), NtError> {
    let s = s.trim_start();
    if let Some(rest) = s.strip_prefix('<') {
        let Some(end) = rest.find('>') else {
            return malformed(line, "unterminated IRI");
        };
        return Ok((&rest[..end], &rest[end + 1..]));
    }
    if s.starts_with('"') {
        let bytes = s.as_bytes();
        let mut i = 1;
        while i < bytes.len() {
            match bytes[i] {
                b'\\' => i += 2,
                b'"' => break,
                _ => i += 1,
            }
        }
        if i >= bytes.len() {
            return malformed(line, "unterminated literal");
        }
        let mut end = i + 1;
        let rest = &s[end..];
        if let Some(dt) = rest.strip_prefix("^^<") {
            let Some(close) = dt.find('>') else {
                return malformed(line, "unterminated datatype IRI");
            };
            end += 3 + close + 1;
        } else if rest.starts_with('@') {
            end += rest.find(char::is_whitespace).unwrap_or(rest.len());
        }
        return Ok((&s[..end], &s[end..]));
    }
    let end = s.find(char::is_whitespace).unwrap_or(s.len());
    if end == 0 {
        return malformed(line, "missing term");
    }
    Ok((&s[..end], &s[end..]))
}

pub fn parse_ntriples(text: &str, symbols: &mut SymbolTable) -> Result<RdfGraph, NtError> {
    let mut triples = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        triples.push(parse_triple(trimmed, line, symbols)?);
    }
    Ok(RdfGraph::from_triples(triples))
}

fn parse_triple(text: &str, line: usize, symbols: &mut SymbolTable) -> Result<Triple, NtError> {
    let (s, rest) = term(text, line)?;
    let (p, rest) = term(rest, line)?;
    let (o, rest) = term(rest, line)?;
    if rest.trim() != "." {
        return malformed(line, "expected `.` after the object");
    }
    if s.starts_with('"') {
        return malformed(line, "a literal cannot be a subject");
    }
    if p.starts_with('"') || p.starts_with("_:") {
        return malformed(line, "predicate must be an IRI");
    }
    let p = property_id(symbols, p);
    let s = symbols.node(s);
    let o = if p == SymbolTable::TYPE {
        symbols.class(o)
    } else {
        symbols.node(o)
    };
    Ok((s, p, o))
}

fn node_term(name: &str) -> String {
    if name.starts_with('"') || name.starts_with("_:") {
        name.to_string()
    } else {
        format!("<{name}>")
    }
}

pub fn serialize_ntriples(graph: &RdfGraph, symbols: &SymbolTable) -> String {
    let mut out = String::new();
    for &(s, p, o) in graph.triples() {
        let _ = writeln!(
            out,
            "{} <{}> {} .",
            node_term(symbols.node_name(s)),
            symbols.property_name(p),
            node_term(symbols.node_name(o))
        );
    }
    out
}

/// The triples, a blank line, then one `ASSIGN <node> Shape...` line per
/// node. The assignment lines also carry nodes that have no triples.
pub fn render_counterexample(
    graph: &RdfGraph,
    sigma: &Assignment,
    symbols: &SymbolTable,
) -> String {
    let mut out = serialize_ntriples(graph, symbols);
    out.push('\n');
    for &v in graph.nodes() {
        let _ = write!(out, "ASSIGN {}", node_term(symbols.node_name(v)));
        if let Some(shapes) = sigma.get(v) {
            for s in shapes {
                let _ = write!(out, " {}", symbols.shape_name(*s));
            }
        }
        out.push('\n');
    }
    out
}

pub fn parse_counterexample(
    text: &str,
    shapes: &ShapeSet,
    symbols: &mut SymbolTable,
) -> Result<(RdfGraph, Assignment), NtError> {
    let mut triples = Vec::new();
    let mut map: BTreeMap<NodeId, BTreeSet<ShapeId>> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some(rest) = trimmed.strip_prefix("ASSIGN ") else {
            triples.push(parse_triple(trimmed, line, symbols)?);
            continue;
        };
        let (node, rest) = term(rest, line)?;
        let v = symbols.node(node);
        let entry = map.entry(v).or_default();
        for name in rest.split_whitespace() {
            let s = symbols
                .lookup_shape(name)
                .filter(|s| shapes.contains(*s))
                .ok_or_else(|| NtError::UnknownShape {
                    line,
                    name: name.to_string(),
                })?;
            entry.insert(s);
        }
    }
    let nodes: BTreeSet<NodeId> = map
        .keys()
        .copied()
        .chain(triples.iter().flat_map(|(s, _, o)| [*s, *o]))
        .collect();
    let graph = RdfGraph::new(nodes, triples)?;
    for v in graph.nodes() {
        map.entry(*v).or_default();
    }
    let sigma = Assignment::new(&graph, shapes, map)?;
    Ok((graph, sigma))
}
