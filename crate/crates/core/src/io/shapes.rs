//! The s-expression shape language.
//!
//! ```text
//! (shape NAME (target TARGET) (constraint EXPR))
//! TARGET := none | (nodes v...) | (class v) | (subjects-of p) | (objects-of p)
//! EXPR   := top | (node v) | (ref NAME) | (and E...) | (or E...) | (not E)
//!         | (>= n PATH E) | (<= n PATH E) | (= n PATH E)
//!         | (exists PATH E) | (forall PATH E)
//! PATH   := p | (inv PATH) | (seq PATH PATH...)
//! ```
//!
//! Strings such as `"25.10.1881"` are node names and keep their quotes.
//! `;` starts a comment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::shapes::{
    desugar, Constraint, ExtConstraint, ModelError, PathExpr, Shape, ShapeSet, TargetQuery,
};
use crate::symbols::{NodeId, PropertyId, ShapeId, SymbolTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Lexical(String),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("unknown operator `{0}`")]
    UnknownOperator(String),
    #[error("`{op}` takes {expected} arguments, found {found}")]
    Arity {
        op: String,
        expected: &'static str,
        found: usize,
    },
    #[error("`{0}` is not a valid count")]
    BadNumber(String),
    #[error("reference to undefined shape `{0}`")]
    UnresolvedRef(String),
    #[error("shape `{0}` is defined more than once")]
    DuplicateShape(String),
    #[error(transparent)]
    Model(ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {kind}")]
pub struct ParseError {
    pub span: Span,
    pub kind: ParseErrorKind,
}

fn err<T>(span: Span, kind: ParseErrorKind) -> Result<T, ParseError> {
    Err(ParseError { span, kind })
}

#[derive(Debug, Clone)]
enum Sexp {
    Atom(String, Span),
    List(Vec<Sexp>, Span),
}

impl Sexp {
    fn span(&self) -> Span {
        match self {
            Sexp::Atom(_, s) | Sexp::List(_, s) => *s,
        }
    }
}

fn read_all(text: &str) -> Result<Vec<Sexp>, ParseError> {
    let mut stack: Vec<(Vec<Sexp>, Span)> = Vec::new();
    let mut top = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    let push =
        |stack: &mut Vec<(Vec<Sexp>, Span)>, top: &mut Vec<Sexp>, x: Sexp| match stack.last_mut() {
            Some((items, _)) => items.push(x),
            None => top.push(x),
        };
    while let Some(&c) = chars.peek() {
        let here = Span { line, col };
        let advance = |c: char, line: &mut usize, col: &mut usize| {
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        match c {
            ';' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                    advance(c, &mut line, &mut col);
                }
            }
            c if c.is_whitespace() => {
                chars.next();
                advance(c, &mut line, &mut col);
            }
            '(' => {
                chars.next();
                advance(c, &mut line, &mut col);
                stack.push((Vec::new(), here));
            }
            ')' => {
                chars.next();
                advance(c, &mut line, &mut col);
                let Some((items, open)) = stack.pop() else {
                    return err(here, ParseErrorKind::Lexical("unbalanced `)`".into()));
                };
                push(&mut stack, &mut top, Sexp::List(items, open));
            }
            '"' => {
                let mut s = String::from('"');
                chars.next();
                advance(c, &mut line, &mut col);
                let mut closed = false;
                while let Some(c) = chars.next() {
                    advance(c, &mut line, &mut col);
                    s.push(c);
                    if c == '\\' {
                        if let Some(e) = chars.next() {
                            advance(e, &mut line, &mut col);
                            s.push(e);
                        }
                    } else if c == '"' {
                        closed = true;
                        break;
                    }
                }
                if !closed {
                    return err(here, ParseErrorKind::Lexical("unterminated string".into()));
                }
                push(&mut stack, &mut top, Sexp::Atom(s, here));
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || matches!(c, '(' | ')' | ';' | '"') {
                        break;
                    }
                    s.push(c);
                    chars.next();
                    advance(c, &mut line, &mut col);
                }
                push(&mut stack, &mut top, Sexp::Atom(s, here));
            }
        }
    }
    if let Some((_, open)) = stack.pop() {
        return err(open, ParseErrorKind::Lexical("unbalanced `(`".into()));
    }
    Ok(top)
}

/// A parsed shape set with the position of each shape form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeDocument {
    pub shapes: ShapeSet,
    pub spans: BTreeMap<ShapeId, Span>,
}

pub fn parse_shapes(text: &str, symbols: &mut SymbolTable) -> Result<ShapeDocument, ParseError> {
    let forms = read_all(text)?;
    let mut defined: BTreeMap<String, (ShapeId, Span)> = BTreeMap::new();
    let mut headers = Vec::new();
    for form in &forms {
        let Sexp::List(items, span) = form else {
            return err(
                form.span(),
                ParseErrorKind::Expected("a `(shape ...)` form"),
            );
        };
        match items.first() {
            Some(Sexp::Atom(head, _)) if head == "shape" => {}
            Some(Sexp::Atom(head, at)) => {
                return err(*at, ParseErrorKind::UnknownOperator(head.clone()))
            }
            _ => return err(*span, ParseErrorKind::Expected("a `(shape ...)` form")),
        }
        if items.len() != 4 {
            return err(
                *span,
                ParseErrorKind::Arity {
                    op: "shape".into(),
                    expected: "3",
                    found: items.len() - 1,
                },
            );
        }
        let (name, at) = atom(&items[1], "a shape name")?;
        if defined.contains_key(name) {
            return err(at, ParseErrorKind::DuplicateShape(name.to_string()));
        }
        let id = symbols.shape(name);
        defined.insert(name.to_string(), (id, *span));
        headers.push((id, *span, &items[2], &items[3]));
    }
    let known: BTreeMap<String, ShapeId> = defined
        .iter()
        .map(|(k, (id, _))| (k.clone(), *id))
        .collect();
    let mut reader = Reader {
        symbols,
        known: &known,
    };
    let mut shapes = Vec::new();
    let mut spans = BTreeMap::new();
    for (id, span, target, constraint) in headers {
        let target = reader
            .clause(target, "target")
            .and_then(|t| reader.target(t))?;
        let body = reader.clause(constraint, "constraint")?;
        let at = body.span();
        let constraint = desugar(&reader.expr(body)?).map_err(|e| ParseError {
            span: at,
            kind: ParseErrorKind::Model(e),
        })?;
        shapes.push(Shape::new(id, constraint, target));
        spans.insert(id, span);
    }
    let shapes = ShapeSet::new(shapes).map_err(|e| ParseError {
        span: Span::default(),
        kind: ParseErrorKind::Model(e),
    })?;
    Ok(ShapeDocument { shapes, spans })
}

/// Parses a single constraint expression whose references must name shapes
/// of `context`.
pub fn parse_constraint(
    text: &str,
    context: &ShapeSet,
    symbols: &mut SymbolTable,
) -> Result<Constraint, ParseError> {
    let forms = read_all(text)?;
    let [form] = forms.as_slice() else {
        return err(
            Span { line: 1, col: 1 },
            ParseErrorKind::Expected("exactly one expression"),
        );
    };
    let known: BTreeMap<String, ShapeId> = context
        .names()
        .map(|s| (symbols.shape_name(s).to_string(), s))
        .collect();
    let mut reader = Reader {
        symbols,
        known: &known,
    };
    let ext = reader.expr(form)?;
    desugar(&ext).map_err(|e| ParseError {
        span: form.span(),
        kind: ParseErrorKind::Model(e),
    })
}

fn atom<'a>(x: &'a Sexp, what: &'static str) -> Result<(&'a str, Span), ParseError> {
    match x {
        Sexp::Atom(s, span) => Ok((s, *span)),
        Sexp::List(_, span) => err(*span, ParseErrorKind::Expected(what)),
    }
}

struct Reader<'a> {
    symbols: &'a mut SymbolTable,
    known: &'a BTreeMap<String, ShapeId>,
}

impl Reader<'_> {
    fn clause<'x>(&self, x: &'x Sexp, keyword: &'static str) -> Result<&'x Sexp, ParseError> {
        match x {
            Sexp::List(items, span) => match items.as_slice() {
                [Sexp::Atom(k, _), body] if k == keyword => Ok(body),
                [Sexp::Atom(k, _), ..] if k == keyword => err(
                    *span,
                    ParseErrorKind::Arity {
                        op: keyword.into(),
                        expected: "1",
                        found: items.len() - 1,
                    },
                ),
                _ => err(
                    *span,
                    ParseErrorKind::Expected(if keyword == "target" {
                        "(target ...)"
                    } else {
                        "(constraint ...)"
                    }),
                ),
            },
            Sexp::Atom(_, span) => err(
                *span,
                ParseErrorKind::Expected(if keyword == "target" {
                    "(target ...)"
                } else {
                    "(constraint ...)"
                }),
            ),
        }
    }

    fn node(&mut self, x: &Sexp) -> Result<NodeId, ParseError> {
        let (name, _) = atom(x, "a node name")?;
        Ok(self.symbols.node(name))
    }

    fn property(&mut self, x: &Sexp) -> Result<PropertyId, ParseError> {
        let (name, _) = atom(x, "a property name")?;
        Ok(property_id(self.symbols, name))
    }

    fn target(&mut self, x: &Sexp) -> Result<TargetQuery, ParseError> {
        let (op, args, span) = match x {
            Sexp::Atom(s, span) if s == "none" => return Ok(TargetQuery::None),
            Sexp::Atom(s, span) => return err(*span, ParseErrorKind::UnknownOperator(s.clone())),
            Sexp::List(items, span) => match items.split_first() {
                Some((Sexp::Atom(op, _), args)) => (op.as_str(), args, *span),
                _ => return err(*span, ParseErrorKind::Expected("a target form")),
            },
        };
        let one = |args: &[Sexp]| {
            if args.len() == 1 {
                Ok(())
            } else {
                err(
                    span,
                    ParseErrorKind::Arity {
                        op: op.into(),
                        expected: "1",
                        found: args.len(),
                    },
                )
            }
        };
        match op {
            "nodes" => {
                let nodes = args
                    .iter()
                    .map(|a| self.node(a))
                    .collect::<Result<BTreeSet<_>, _>>()?;
                TargetQuery::nodes(nodes).map_err(|e| ParseError {
                    span,
                    kind: ParseErrorKind::Model(e),
                })
            }
            "class" => {
                one(args)?;
                let c = self.node(&args[0])?;
                self.symbols.mark_class(c);
                Ok(TargetQuery::Class(c))
            }
            "subjects-of" => {
                one(args)?;
                Ok(TargetQuery::SubjectsOf(self.property(&args[0])?))
            }
            "objects-of" => {
                one(args)?;
                Ok(TargetQuery::ObjectsOf(self.property(&args[0])?))
            }
            _ => err(span, ParseErrorKind::UnknownOperator(op.into())),
        }
    }

    fn path(&mut self, x: &Sexp) -> Result<PathExpr, ParseError> {
        match x {
            Sexp::Atom(..) => Ok(PathExpr::Prop(self.property(x)?)),
            Sexp::List(items, span) => {
                let Some((Sexp::Atom(op, _), args)) = items.split_first() else {
                    return err(*span, ParseErrorKind::Expected("a path"));
                };
                match op.as_str() {
                    "inv" if args.len() == 1 => Ok(PathExpr::inverse(self.path(&args[0])?)),
                    "inv" => err(
                        *span,
                        ParseErrorKind::Arity {
                            op: "inv".into(),
                            expected: "1",
                            found: args.len(),
                        },
                    ),
                    "seq" if args.len() >= 2 => {
                        let mut acc = self.path(&args[0])?;
                        for a in &args[1..] {
                            acc = PathExpr::seq(acc, self.path(a)?);
                        }
                        Ok(acc)
                    }
                    "seq" => err(
                        *span,
                        ParseErrorKind::Arity {
                            op: "seq".into(),
                            expected: "at least 2",
                            found: args.len(),
                        },
                    ),
                    _ => err(*span, ParseErrorKind::UnknownOperator(op.clone())),
                }
            }
        }
    }

    fn count(&self, x: &Sexp) -> Result<u32, ParseError> {
        let (s, span) = atom(x, "a count")?;
        s.parse()
            .or_else(|_| err(span, ParseErrorKind::BadNumber(s.into())))
    }

    fn expr(&mut self, x: &Sexp) -> Result<ExtConstraint, ParseError> {
        let (items, span) = match x {
            Sexp::Atom(s, _) if s == "top" => return Ok(ExtConstraint::Top),
            Sexp::Atom(s, span) => return err(*span, ParseErrorKind::UnknownOperator(s.clone())),
            Sexp::List(items, span) => (items, *span),
        };
        let Some((Sexp::Atom(op, _), args)) = items.split_first() else {
            return err(span, ParseErrorKind::Expected("an operator"));
        };
        let arity = |expected: &'static str, ok: bool| {
            if ok {
                Ok(())
            } else {
                err(
                    span,
                    ParseErrorKind::Arity {
                        op: op.clone(),
                        expected,
                        found: args.len(),
                    },
                )
            }
        };
        Ok(match op.as_str() {
            "node" => {
                arity("1", args.len() == 1)?;
                ExtConstraint::Node(self.node(&args[0])?)
            }
            "ref" => {
                arity("1", args.len() == 1)?;
                let (name, at) = atom(&args[0], "a shape name")?;
                match self.known.get(name) {
                    Some(id) => ExtConstraint::Ref(*id),
                    None => return err(at, ParseErrorKind::UnresolvedRef(name.into())),
                }
            }
            "and" | "or" => {
                arity("at least 1", !args.is_empty())?;
                let parts = args
                    .iter()
                    .map(|a| self.expr(a))
                    .collect::<Result<Vec<_>, _>>()?;
                if op == "and" {
                    ExtConstraint::And(parts)
                } else {
                    ExtConstraint::Or(parts)
                }
            }
            "not" => {
                arity("1", args.len() == 1)?;
                ExtConstraint::Not(Box::new(self.expr(&args[0])?))
            }
            ">=" | "<=" | "=" => {
                arity("3", args.len() == 3)?;
                let n = self.count(&args[0])?;
                let path = self.path(&args[1])?;
                let inner = Box::new(self.expr(&args[2])?);
                match op.as_str() {
                    ">=" => ExtConstraint::AtLeast(n, path, inner),
                    "<=" => ExtConstraint::AtMost(n, path, inner),
                    _ => ExtConstraint::Exactly(n, path, inner),
                }
            }
            "exists" | "forall" => {
                arity("2", args.len() == 2)?;
                let path = self.path(&args[0])?;
                let inner = Box::new(self.expr(&args[1])?);
                if op == "exists" {
                    ExtConstraint::Exists(path, inner)
                } else {
                    ExtConstraint::Forall(path, inner)
                }
            }
            _ => return err(span, ParseErrorKind::UnknownOperator(op.clone())),
        })
    }
}

/// Interns a property name, folding the usual spellings of `rdf:type`.
pub(crate) fn property_id(symbols: &mut SymbolTable, name: &str) -> PropertyId {
    if is_type_alias(name) {
        SymbolTable::TYPE
    } else {
        symbols.property(name)
    }
}

pub(crate) fn is_type_alias(name: &str) -> bool {
    matches!(
        name,
        "a" | "type" | "rdf:type" | "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
    )
}

pub fn serialize_shapes(shapes: &ShapeSet, symbols: &SymbolTable) -> String {
    let mut out = String::new();
    for shape in shapes.iter() {
        let target = match &shape.target {
            TargetQuery::None => "none".to_string(),
            TargetQuery::Nodes(vs) => {
                let names: Vec<&str> = vs.iter().map(|v| symbols.node_name(*v)).collect();
                format!("(nodes {})", names.join(" "))
            }
            TargetQuery::Class(c) => format!("(class {})", symbols.node_name(*c)),
            TargetQuery::SubjectsOf(p) => format!("(subjects-of {})", symbols.property_name(*p)),
            TargetQuery::ObjectsOf(p) => format!("(objects-of {})", symbols.property_name(*p)),
        };
        out.push_str(&format!(
            "(shape {}\n  (target {})\n  (constraint {}))\n",
            symbols.shape_name(shape.name),
            target,
            render_constraint(&shape.constraint, symbols)
        ));
    }
    out
}

/// Prints a constraint, folding the encodings of `forall`, `or`, `<=` and `=`
/// back into their derived forms. Parsing the result gives the same value.
pub fn render_constraint(c: &Constraint, symbols: &SymbolTable) -> String {
    match c {
        Constraint::Top => "top".into(),
        Constraint::ShapeRef(s) => format!("(ref {})", symbols.shape_name(*s)),
        Constraint::NodeConst(v) => format!("(node {})", symbols.node_name(*v)),
        Constraint::And(a, b) => {
            if let (Some((m, p, f)), Constraint::AtLeast(n, p2, f2)) =
                (at_most_parts(a), b.as_ref())
            {
                if m == n.get() && p == p2 && f == f2.as_ref() {
                    return format!(
                        "(= {m} {} {})",
                        render_path(p, symbols),
                        render_constraint(f, symbols)
                    );
                }
            }
            format!(
                "(and {} {})",
                render_constraint(a, symbols),
                render_constraint(b, symbols)
            )
        }
        Constraint::Not(inner) => {
            if let Constraint::AtLeast(n, p, f) = inner.as_ref() {
                if n.get() == 1 {
                    if let Constraint::Not(g) = f.as_ref() {
                        return format!(
                            "(forall {} {})",
                            render_path(p, symbols),
                            render_constraint(g, symbols)
                        );
                    }
                }
                return format!(
                    "(<= {} {} {})",
                    n.get() - 1,
                    render_path(p, symbols),
                    render_constraint(f, symbols)
                );
            }
            if let Constraint::And(a, b) = inner.as_ref() {
                if let (Constraint::Not(x), Constraint::Not(y)) = (a.as_ref(), b.as_ref()) {
                    return format!(
                        "(or {} {})",
                        render_constraint(x, symbols),
                        render_constraint(y, symbols)
                    );
                }
            }
            format!("(not {})", render_constraint(inner, symbols))
        }
        Constraint::AtLeast(n, p, f) if n.get() == 1 => {
            format!(
                "(exists {} {})",
                render_path(p, symbols),
                render_constraint(f, symbols)
            )
        }
        Constraint::AtLeast(n, p, f) => {
            format!(
                "(>= {} {} {})",
                n.get(),
                render_path(p, symbols),
                render_constraint(f, symbols)
            )
        }
    }
}

/// `¬≥(m+1) p.f` read as `≤m p.f`, unless it is the `forall` pattern.
fn at_most_parts(c: &Constraint) -> Option<(u32, &PathExpr, &Constraint)> {
    let Constraint::Not(inner) = c else {
        return None;
    };
    let Constraint::AtLeast(n, p, f) = inner.as_ref() else {
        return None;
    };
    Some((n.get() - 1, p, f))
}

pub fn render_path(p: &PathExpr, symbols: &SymbolTable) -> String {
    match p {
        PathExpr::Prop(id) => symbols.property_name(*id).to_string(),
        PathExpr::Inverse(inner) => format!("(inv {})", render_path(inner, symbols)),
        PathExpr::Seq(..) => {
            let mut spine = Vec::new();
            let mut cur = p;
            while let PathExpr::Seq(a, b) = cur {
                spine.push(b.as_ref());
                cur = a;
            }
            spine.push(cur);
            spine.reverse();
            let parts: Vec<String> = spine.into_iter().map(|x| render_path(x, symbols)).collect();
            format!("(seq {})", parts.join(" "))
        }
    }
}
