//! Export to OWL 2 functional syntax, for handing a knowledge base to an
//! off-the-shelf reasoner.
//!
//! Role composition has no OWL counterpart, but under `≥1` and `∀` it unfolds
//! into nested restrictions. Counting above one over a composition cannot be
//! unfolded and is rejected.

use std::fmt::Write as _;

use thiserror::Error;

use crate::dl::{Axiom, Concept, ConceptName, KnowledgeBase, Role};
use crate::symbols::{PropertyId, SymbolTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExportError {
    #[error("inexpressible without loss: {0}")]
    Inexpressible(String),
}

const PREFIXES: [(&str, &str); 4] = [
    ("shape", "urn:shaclcheck:shape:"),
    ("class", "urn:shaclcheck:class:"),
    ("prop", "urn:shaclcheck:property:"),
    ("node", "urn:shaclcheck:node:"),
];

fn local(s: &str) -> String {
    let mut out = String::new();
    for b in s.bytes() {
        if b.is_ascii_alphanumeric() || b == b'_' || b == b'-' {
            out.push(b as char);
        } else {
            let _ = write!(out, "%{b:02X}");
        }
    }
    out
}

/// One step of a composed role: a property, possibly traversed backwards.
type Step = (PropertyId, bool);

fn steps(r: &Role) -> Vec<Step> {
    fn go(r: &Role, out: &mut Vec<Step>) {
        match r {
            Role::Atomic(p) => out.push((*p, false)),
            Role::Inverse(inner) => match inner.as_ref() {
                Role::Atomic(p) => out.push((*p, true)),
                _ => unreachable!("normalized"),
            },
            Role::Compose(a, b) => {
                go(a, out);
                go(b, out);
            }
        }
    }
    let mut out = Vec::new();
    go(&r.normalized(), &mut out);
    out
}

struct Writer<'a> {
    symbols: &'a SymbolTable,
}

impl Writer<'_> {
    fn name(&self, c: &ConceptName) -> String {
        match c {
            ConceptName::Shape(s) => format!("shape:{}", local(self.symbols.shape_name(*s))),
            ConceptName::Class(v) => format!("class:{}", local(self.symbols.node_name(*v))),
        }
    }

    fn individual(&self, v: crate::symbols::NodeId) -> String {
        format!("node:{}", local(self.symbols.node_name(v)))
    }

    fn step(&self, (p, inverted): Step) -> String {
        let p = format!("prop:{}", local(self.symbols.property_name(p)));
        if inverted {
            format!("ObjectInverseOf({p})")
        } else {
            p
        }
    }

    fn nested(&self, ctor: &str, steps: &[Step], filler: String) -> String {
        steps
            .iter()
            .rev()
            .fold(filler, |acc, s| format!("{ctor}({} {acc})", self.step(*s)))
    }

    fn concept(&self, c: &Concept) -> Result<String, ExportError> {
        Ok(match c {
            Concept::Top => "owl:Thing".into(),
            Concept::Atomic(n) => self.name(n),
            Concept::Nominal(os) => {
                let items: Vec<String> = os.iter().map(|o| self.individual(*o)).collect();
                format!("ObjectOneOf({})", items.join(" "))
            }
            Concept::And(..) => {
                let mut parts = Vec::new();
                let mut stack = vec![c];
                while let Some(x) = stack.pop() {
                    match x {
                        Concept::And(a, b) => stack.extend([b.as_ref(), a.as_ref()]),
                        other => parts.push(self.concept(other)?),
                    }
                }
                format!("ObjectIntersectionOf({})", parts.join(" "))
            }
            Concept::AtLeast(n, r, f) => {
                let st = steps(r);
                let filler = self.concept(f)?;
                if n.get() == 1 {
                    self.nested("ObjectSomeValuesFrom", &st, filler)
                } else if st.len() == 1 {
                    format!("ObjectMinCardinality({} {} {filler})", n, self.step(st[0]))
                } else {
                    return Err(inexpressible(n.get()));
                }
            }
            Concept::Not(inner) => match inner.as_ref() {
                Concept::Top => "owl:Nothing".into(),
                Concept::AtLeast(n, r, f) if n.get() == 1 => {
                    let st = steps(r);
                    match f.as_ref() {
                        Concept::Not(g) => {
                            self.nested("ObjectAllValuesFrom", &st, self.concept(g)?)
                        }
                        other => {
                            let g = self.concept(&Concept::not(other.clone()))?;
                            self.nested("ObjectAllValuesFrom", &st, g)
                        }
                    }
                }
                Concept::AtLeast(n, r, f) => {
                    let st = steps(r);
                    if st.len() != 1 {
                        return Err(inexpressible(n.get()));
                    }
                    format!(
                        "ObjectMaxCardinality({} {} {})",
                        n.get() - 1,
                        self.step(st[0]),
                        self.concept(f)?
                    )
                }
                body if is_union_body(body) => {
                    let mut parts = Vec::new();
                    let mut stack = vec![inner.as_ref()];
                    // Collect the disjuncts of a left-nested union.
                    while let Some(Concept::And(a, b)) = stack.pop() {
                        let (Concept::Not(x), Concept::Not(y)) = (a.as_ref(), b.as_ref()) else {
                            unreachable!()
                        };
                        parts.push(self.concept(y)?);
                        match x.as_ref() {
                            Concept::Not(z) if is_union_body(z) => stack.push(z),
                            other => parts.push(self.concept(other)?),
                        }
                    }
                    parts.reverse();
                    format!("ObjectUnionOf({})", parts.join(" "))
                }
                other => format!("ObjectComplementOf({})", self.concept(other)?),
            },
        })
    }
}

/// `¬a ⊓ ¬b`, the body of a desugared union.
fn is_union_body(c: &Concept) -> bool {
    matches!(c, Concept::And(a, b) if matches!((a.as_ref(), b.as_ref()), (Concept::Not(_), Concept::Not(_))))
}

fn inexpressible(n: u32) -> ExportError {
    ExportError::Inexpressible(format!("counting to {n} over a role composition"))
}

pub fn serialize_exchange(
    kb: &KnowledgeBase,
    symbols: &SymbolTable,
) -> Result<String, ExportError> {
    let w = Writer { symbols };
    let sig = kb.signature();
    let mut out = String::new();
    for (prefix, iri) in PREFIXES {
        let _ = writeln!(out, "Prefix({prefix}:=<{iri}>)");
    }
    let _ = writeln!(out, "Prefix(owl:=<http://www.w3.org/2002/07/owl#>)");
    let _ = writeln!(out, "Ontology(");
    for c in &sig.concepts {
        let _ = writeln!(out, "Declaration(Class({}))", w.name(c));
    }
    for p in &sig.properties {
        let _ = writeln!(out, "Declaration(ObjectProperty({}))", w.step((*p, false)));
    }
    for o in &sig.objects {
        let _ = writeln!(out, "Declaration(NamedIndividual({}))", w.individual(*o));
    }
    let axioms = kb.axioms();
    let mut i = 0;
    while i < axioms.len() {
        match &axioms[i] {
            Axiom::Subsumption { sub, sup, origin } => {
                let mirrored = origin.is_some()
                    && matches!(axioms.get(i + 1), Some(Axiom::Subsumption { sub: s2, sup: p2, origin: o2 })
                        if o2 == origin && s2 == sup && p2 == sub);
                let kind = if mirrored {
                    "EquivalentClasses"
                } else {
                    "SubClassOf"
                };
                let _ = writeln!(out, "{kind}({} {})", w.concept(sub)?, w.concept(sup)?);
                i += if mirrored { 2 } else { 1 };
                continue;
            }
            Axiom::ConceptAssertion { object, concept } => {
                let _ = writeln!(
                    out,
                    "ClassAssertion({} {})",
                    w.concept(concept)?,
                    w.individual(*object)
                );
            }
            Axiom::RoleAssertion {
                subject,
                object,
                role,
            } => {
                let st = steps(role);
                let [(p, inverted)] = st.as_slice() else {
                    return Err(ExportError::Inexpressible(
                        "assertion over a role composition".into(),
                    ));
                };
                let (a, b) = if *inverted {
                    (object, subject)
                } else {
                    (subject, object)
                };
                let _ = writeln!(
                    out,
                    "ObjectPropertyAssertion({} {} {})",
                    w.step((*p, false)),
                    w.individual(*a),
                    w.individual(*b)
                );
            }
        }
        i += 1;
    }
    if sig.objects.len() >= 2 {
        let all: Vec<String> = sig.objects.iter().map(|o| w.individual(*o)).collect();
        let _ = writeln!(out, "DifferentIndividuals({})", all.join(" "));
    }
    out.push_str(")\n");
    Ok(out)
}
