//! Native knowledge-base text.
//!
//! Four header lines list the signature, then one axiom per line. Derived
//! forms are printed back (`∀`, `≤`, `⊔`, `⊥`) and equivalences appear once
//! as `C ≡ D`. Names outside `[A-Za-z0-9_-]` are wrapped in backticks, except
//! plain quoted literals.
//!
//! ```text
//! shapes: A, B
//! classes: C
//! properties: p
//! objects: o
//! C ⊑ A
//! ≥1 p.{o} ≡ A
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use super::shapes::property_id;
use crate::dl::{Axiom, Concept, ConceptName, DlError, KnowledgeBase, Role, Signature};
use crate::symbols::{NodeId, PropertyId, SymbolTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KbError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Signature { line: usize, source: DlError },
}

fn syntax<T>(line: usize, message: impl Into<String>) -> Result<T, KbError> {
    Err(KbError::Syntax {
        line,
        message: message.into(),
    })
}

const HEADERS: [&str; 4] = ["shapes", "classes", "properties", "objects"];

pub fn serialize_kb(kb: &KnowledgeBase, symbols: &SymbolTable) -> String {
    let sig = kb.signature();
    let mut out = String::new();
    let list = |names: Vec<String>| names.join(", ");
    let shapes: Vec<String> = sig
        .concepts
        .iter()
        .filter_map(|c| match c {
            ConceptName::Shape(s) => Some(name(symbols.shape_name(*s))),
            _ => None,
        })
        .collect();
    let classes: Vec<String> = sig
        .concepts
        .iter()
        .filter_map(|c| match c {
            ConceptName::Class(v) => Some(name(symbols.node_name(*v))),
            _ => None,
        })
        .collect();
    let properties = sig
        .properties
        .iter()
        .map(|p| name(symbols.property_name(*p)))
        .collect();
    let objects = sig
        .objects
        .iter()
        .map(|o| name(symbols.node_name(*o)))
        .collect();
    for (header, names) in HEADERS.iter().zip([shapes, classes, properties, objects]) {
        let _ = writeln!(
            out,
            "{}:{}{}",
            header,
            if names.is_empty() { "" } else { " " },
            list(names)
        );
    }
    let axioms = kb.axioms();
    let mut i = 0;
    while i < axioms.len() {
        match &axioms[i] {
            Axiom::Subsumption { sub, sup, origin } => {
                let mirrored = origin.is_some()
                    && matches!(axioms.get(i + 1), Some(Axiom::Subsumption { sub: s2, sup: p2, origin: o2 })
                        if o2 == origin && s2 == sup && p2 == sub);
                let op = if mirrored { "≡" } else { "⊑" };
                let _ = writeln!(
                    out,
                    "{} {} {}",
                    concept(sub, symbols, 0),
                    op,
                    concept(sup, symbols, 0)
                );
                i += if mirrored { 2 } else { 1 };
                continue;
            }
            Axiom::ConceptAssertion { object, concept: c } => {
                let _ = writeln!(
                    out,
                    "{} : {}",
                    name(symbols.node_name(*object)),
                    concept(c, symbols, 0)
                );
            }
            Axiom::RoleAssertion {
                subject,
                object,
                role: r,
            } => {
                let _ = writeln!(
                    out,
                    "({}, {}) : {}",
                    name(symbols.node_name(*subject)),
                    name(symbols.node_name(*object)),
                    role(r, symbols, false)
                );
            }
        }
        i += 1;
    }
    out
}

fn name(s: &str) -> String {
    let simple = !s.is_empty()
        && s.chars()
            .all(|c| c.is_alphanumeric() || c == '_' || c == '-');
    let literal =
        s.len() >= 2 && s.starts_with('"') && s.ends_with('"') && !s[1..s.len() - 1].contains('"');
    if simple || literal {
        s.to_string()
    } else {
        format!("`{}`", s.replace('`', "``"))
    }
}

/// Precedence: 0 accepts a disjunction, 1 a conjunction, 2 only a unary
/// concept.
pub fn concept(c: &Concept, symbols: &SymbolTable, level: u8) -> String {
    let wrap = |own: u8, s: String| if own < level { format!("({s})") } else { s };
    match c {
        Concept::Top => "⊤".into(),
        Concept::Atomic(ConceptName::Shape(s)) => name(symbols.shape_name(*s)),
        Concept::Atomic(ConceptName::Class(v)) => name(symbols.node_name(*v)),
        Concept::Nominal(os) => {
            let names: Vec<String> = os.iter().map(|o| name(symbols.node_name(*o))).collect();
            format!("{{{}}}", names.join(", "))
        }
        Concept::And(a, b) => wrap(
            1,
            format!("{} ⊓ {}", concept(a, symbols, 1), concept(b, symbols, 2)),
        ),
        Concept::AtLeast(n, r, f) => format!(
            "≥{} {}.{}",
            n,
            role(r, symbols, false),
            concept(f, symbols, 2)
        ),
        Concept::Not(inner) => match inner.as_ref() {
            Concept::Top => "⊥".into(),
            Concept::AtLeast(n, r, f) if n.get() == 1 && matches!(f.as_ref(), Concept::Not(_)) => {
                let Concept::Not(g) = f.as_ref() else {
                    unreachable!()
                };
                format!("∀{}.{}", role(r, symbols, false), concept(g, symbols, 2))
            }
            Concept::AtLeast(n, r, f) => {
                format!(
                    "≤{} {}.{}",
                    n.get() - 1,
                    role(r, symbols, false),
                    concept(f, symbols, 2)
                )
            }
            Concept::And(a, b)
                if matches!((a.as_ref(), b.as_ref()), (Concept::Not(_), Concept::Not(_))) =>
            {
                let (Concept::Not(x), Concept::Not(y)) = (a.as_ref(), b.as_ref()) else {
                    unreachable!()
                };
                wrap(
                    0,
                    format!("{} ⊔ {}", concept(x, symbols, 0), concept(y, symbols, 1)),
                )
            }
            other => format!("¬{}", concept(other, symbols, 2)),
        },
    }
}

pub fn role(r: &Role, symbols: &SymbolTable, nested: bool) -> String {
    match r {
        Role::Atomic(p) => name(symbols.property_name(*p)),
        Role::Inverse(inner) => match inner.as_ref() {
            Role::Atomic(_) => format!("{}⁻", role(inner, symbols, true)),
            _ => format!("({})⁻", role(inner, symbols, false)),
        },
        Role::Compose(a, b) => {
            let s = format!("{}∘{}", role(a, symbols, false), role(b, symbols, true));
            if nested {
                format!("({s})")
            } else {
                s
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Name(String),
    Sym(char),
}

fn lex(text: &str, line: usize) -> Result<Vec<Tok>, KbError> {
    const SYMBOLS: &str = "⊑≡⊓⊔¬∀∃≥≤⁻∘.,(){}:⊤⊥";
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if SYMBOLS.contains(c) {
            chars.next();
            out.push(Tok::Sym(c));
        } else if c == '"' {
            chars.next();
            let mut s = String::from('"');
            loop {
                match chars.next() {
                    Some('"') => break,
                    Some(x) => s.push(x),
                    None => return syntax(line, "unterminated literal"),
                }
            }
            s.push('"');
            out.push(Tok::Name(s));
        } else if c == '`' {
            chars.next();
            let mut s = String::new();
            loop {
                match chars.next() {
                    Some('`') if chars.peek() == Some(&'`') => {
                        chars.next();
                        s.push('`');
                    }
                    Some('`') => break,
                    Some(x) => s.push(x),
                    None => return syntax(line, "unterminated quoted name"),
                }
            }
            out.push(Tok::Name(s));
        } else {
            let mut s = String::new();
            while let Some(&x) = chars.peek() {
                if x.is_whitespace() || SYMBOLS.contains(x) || x == '"' || x == '`' {
                    break;
                }
                s.push(x);
                chars.next();
            }
            out.push(Tok::Name(s));
        }
    }
    Ok(out)
}

struct Names {
    shapes: BTreeSet<String>,
    classes: BTreeSet<String>,
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    line: usize,
    names: &'a Names,
    symbols: &'a mut SymbolTable,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), KbError> {
        if self.eat(c) {
            Ok(())
        } else {
            syntax(self.line, format!("expected `{c}`"))
        }
    }

    fn word(&mut self) -> Result<String, KbError> {
        match self.toks.get(self.pos) {
            Some(Tok::Name(s)) => {
                self.pos += 1;
                Ok(s.clone())
            }
            _ => syntax(self.line, "expected a name"),
        }
    }

    fn number(&mut self) -> Result<u32, KbError> {
        let w = self.word()?;
        w.parse()
            .or_else(|_| syntax(self.line, format!("`{w}` is not a number")))
    }

    fn disjunction(&mut self) -> Result<Concept, KbError> {
        let mut acc = self.conjunction()?;
        while self.eat('⊔') {
            acc = Concept::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Concept, KbError> {
        let mut acc = self.unary()?;
        while self.eat('⊓') {
            acc = Concept::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn restriction(&mut self) -> Result<(Role, Concept), KbError> {
        let r = self.role()?;
        self.expect('.')?;
        Ok((r, self.unary()?))
    }

    fn unary(&mut self) -> Result<Concept, KbError> {
        let line = self.line;
        let bad = |e: DlError| KbError::Signature { line, source: e };
        match self.peek().cloned() {
            Some(Tok::Sym('⊤')) => {
                self.pos += 1;
                Ok(Concept::Top)
            }
            Some(Tok::Sym('⊥')) => {
                self.pos += 1;
                Ok(Concept::bottom())
            }
            Some(Tok::Sym('¬')) => {
                self.pos += 1;
                Ok(Concept::not(self.unary()?))
            }
            Some(Tok::Sym('∀')) => {
                self.pos += 1;
                let (r, c) = self.restriction()?;
                Ok(Concept::forall(r, c))
            }
            Some(Tok::Sym('∃')) => {
                self.pos += 1;
                let (r, c) = self.restriction()?;
                Ok(Concept::exists(r, c))
            }
            Some(Tok::Sym(op @ ('≥' | '≤'))) => {
                self.pos += 1;
                let n = self.number()?;
                let (r, c) = self.restriction()?;
                if op == '≥' {
                    Concept::at_least(n, r, c).map_err(bad)
                } else {
                    Ok(Concept::at_most(n, r, c))
                }
            }
            Some(Tok::Sym('{')) => {
                self.pos += 1;
                let mut objects = vec![self.word()?];
                while self.eat(',') {
                    objects.push(self.word()?);
                }
                self.expect('}')?;
                let ids: Vec<NodeId> = objects.iter().map(|o| self.symbols.node(o)).collect();
                Concept::nominal(ids).map_err(bad)
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let c = self.disjunction()?;
                self.expect(')')?;
                Ok(c)
            }
            Some(Tok::Name(n)) => {
                self.pos += 1;
                match (
                    self.names.shapes.contains(&n),
                    self.names.classes.contains(&n),
                ) {
                    (true, false) => Ok(Concept::shape(self.symbols.shape(&n))),
                    (false, true) => Ok(Concept::class(self.symbols.class(&n))),
                    (true, true) => syntax(self.line, format!("`{n}` is both a shape and a class")),
                    (false, false) => {
                        syntax(self.line, format!("`{n}` is not a declared concept name"))
                    }
                }
            }
            _ => syntax(self.line, "expected a concept"),
        }
    }

    fn role(&mut self) -> Result<Role, KbError> {
        let mut acc = self.role_atom()?;
        while self.eat('∘') {
            acc = Role::compose(acc, self.role_atom()?);
        }
        Ok(acc)
    }

    fn role_atom(&mut self) -> Result<Role, KbError> {
        let mut r = if self.eat('(') {
            let r = self.role()?;
            self.expect(')')?;
            r
        } else {
            let w = self.word()?;
            Role::Atomic(property_id(self.symbols, &w))
        };
        while self.eat('⁻') {
            r = Role::inverse(r);
        }
        Ok(r)
    }
}

pub fn parse_kb(text: &str, symbols: &mut SymbolTable) -> Result<KnowledgeBase, KbError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    if lines.len() < HEADERS.len() {
        return syntax(lines.len() + 1, "missing signature header");
    }
    let mut lists: Vec<Vec<String>> = Vec::new();
    for (&(line, text), header) in lines.iter().zip(HEADERS) {
        let Some(rest) = text.strip_prefix(header).and_then(|r| r.strip_prefix(':')) else {
            return syntax(line, format!("expected `{header}:`"));
        };
        let mut items = Vec::new();
        let toks = lex(rest, line)?;
        let mut expect_name = true;
        for t in toks {
            match (t, expect_name) {
                (Tok::Name(n), true) => {
                    items.push(n);
                    expect_name = false;
                }
                (Tok::Sym(','), false) => expect_name = true,
                _ => return syntax(line, "malformed name list"),
            }
        }
        lists.push(items);
    }
    let mut sig = Signature::default();
    for s in &lists[0] {
        sig.concepts.insert(ConceptName::Shape(symbols.shape(s)));
    }
    for c in &lists[1] {
        sig.concepts.insert(ConceptName::Class(symbols.class(c)));
    }
    let properties: BTreeSet<PropertyId> =
        lists[2].iter().map(|p| property_id(symbols, p)).collect();
    sig.properties = properties;
    sig.objects = lists[3].iter().map(|o| symbols.node(o)).collect();
    let names = Names {
        shapes: lists[0].iter().cloned().collect(),
        classes: lists[1].iter().cloned().collect(),
    };

    let mut kb = KnowledgeBase::new(sig);
    for &(line, text) in &lines[HEADERS.len()..] {
        let toks = lex(text, line)?;
        let mut p = Parser {
            toks,
            pos: 0,
            line,
            names: &names,
            symbols,
        };
        let fail = |e: DlError| KbError::Signature { line, source: e };
        let role_assertion =
            p.toks.first() == Some(&Tok::Sym('(')) && p.toks.get(2) == Some(&Tok::Sym(','));
        let concept_assertion =
            matches!(p.toks.first(), Some(Tok::Name(_))) && p.toks.get(1) == Some(&Tok::Sym(':'));
        if role_assertion {
            p.expect('(')?;
            let a = p.word()?;
            p.expect(',')?;
            let b = p.word()?;
            p.expect(')')?;
            p.expect(':')?;
            let r = p.role()?;
            let (subject, object) = (p.symbols.node(&a), p.symbols.node(&b));
            kb.push(Axiom::RoleAssertion {
                subject,
                object,
                role: r,
            })
            .map_err(fail)?;
        } else if concept_assertion {
            let o = p.word()?;
            p.expect(':')?;
            let c = p.disjunction()?;
            let object = p.symbols.node(&o);
            kb.push(Axiom::ConceptAssertion { object, concept: c })
                .map_err(fail)?;
        } else {
            let lhs = p.disjunction()?;
            let equivalence = if p.eat('≡') {
                true
            } else if p.eat('⊑') {
                false
            } else {
                return syntax(line, "expected `⊑` or `≡`");
            };
            let rhs = p.disjunction()?;
            if equivalence {
                kb.push_equivalence(lhs, rhs).map_err(fail)?;
            } else {
                kb.push_subsumption(lhs, rhs).map_err(fail)?;
            }
        }
        if p.pos != p.toks.len() {
            return syntax(line, "trailing input");
        }
    }
    Ok(kb)
}
