//! Negation normal form.

use std::collections::BTreeSet;

use super::{Concept, ConceptName, Role};
use crate::symbols::NodeId;

/// A concept with negation only in front of names and nominals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Nnf {
    Top,
    Bottom,
    Atom(ConceptName),
    NotAtom(ConceptName),
    Nominal(BTreeSet<NodeId>),
    NotNominal(BTreeSet<NodeId>),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
    AtLeast(u32, Role, Box<Nnf>),
    AtMost(u32, Role, Box<Nnf>),
}

pub fn nnf(c: &Concept) -> Nnf {
    to_nnf(c, false)
}

fn to_nnf(c: &Concept, negated: bool) -> Nnf {
    match (c, negated) {
        (Concept::Top, false) => Nnf::Top,
        (Concept::Top, true) => Nnf::Bottom,
        (Concept::Atomic(a), false) => Nnf::Atom(*a),
        (Concept::Atomic(a), true) => Nnf::NotAtom(*a),
        (Concept::Nominal(os), false) => Nnf::Nominal(os.clone()),
        (Concept::Nominal(os), true) => Nnf::NotNominal(os.clone()),
        (Concept::Not(inner), _) => to_nnf(inner, !negated),
        (Concept::And(a, b), false) => {
            Nnf::And(flatten(vec![to_nnf(a, false), to_nnf(b, false)], true))
        }
        (Concept::And(a, b), true) => {
            Nnf::Or(flatten(vec![to_nnf(a, true), to_nnf(b, true)], false))
        }
        (Concept::AtLeast(n, r, inner), false) => {
            Nnf::AtLeast(n.get(), r.clone(), Box::new(to_nnf(inner, false)))
        }
        (Concept::AtLeast(n, r, inner), true) => {
            Nnf::AtMost(n.get() - 1, r.clone(), Box::new(to_nnf(inner, false)))
        }
    }
}

fn flatten(items: Vec<Nnf>, conj: bool) -> Vec<Nnf> {
    let mut out = Vec::new();
    for x in items {
        match x {
            Nnf::And(xs) if conj => out.extend(xs),
            Nnf::Or(xs) if !conj => out.extend(xs),
            other => out.push(other),
        }
    }
    out
}

impl Nnf {
    /// The complement, again in negation normal form.
    pub fn negate(&self) -> Nnf {
        match self {
            Nnf::Top => Nnf::Bottom,
            Nnf::Bottom => Nnf::Top,
            Nnf::Atom(a) => Nnf::NotAtom(*a),
            Nnf::NotAtom(a) => Nnf::Atom(*a),
            Nnf::Nominal(os) => Nnf::NotNominal(os.clone()),
            Nnf::NotNominal(os) => Nnf::Nominal(os.clone()),
            Nnf::And(xs) => Nnf::Or(xs.iter().map(Nnf::negate).collect()),
            Nnf::Or(xs) => Nnf::And(xs.iter().map(Nnf::negate).collect()),
            Nnf::AtLeast(n, r, c) => Nnf::AtMost(n - 1, r.clone(), c.clone()),
            Nnf::AtMost(n, r, c) => Nnf::AtLeast(n + 1, r.clone(), c.clone()),
        }
    }

    /// Back to the core concept syntax.
    pub fn to_concept(&self) -> Concept {
        match self {
            Nnf::Top => Concept::Top,
            Nnf::Bottom => Concept::bottom(),
            Nnf::Atom(a) => Concept::Atomic(*a),
            Nnf::NotAtom(a) => Concept::not(Concept::Atomic(*a)),
            Nnf::Nominal(os) => Concept::Nominal(os.clone()),
            Nnf::NotNominal(os) => Concept::not(Concept::Nominal(os.clone())),
            Nnf::And(xs) => xs
                .iter()
                .map(Nnf::to_concept)
                .reduce(Concept::and)
                .unwrap_or(Concept::Top),
            Nnf::Or(xs) => xs
                .iter()
                .map(Nnf::to_concept)
                .reduce(Concept::or)
                .unwrap_or_else(Concept::bottom),
            Nnf::AtLeast(0, _, _) => Concept::Top,
            Nnf::AtLeast(n, r, c) => {
                Concept::at_least(*n, r.clone(), c.to_concept()).expect("n is positive")
            }
            Nnf::AtMost(n, r, c) => Concept::at_most(*n, r.clone(), c.to_concept()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::SymbolTable;

    #[test]
    fn de_morgan_and_duality() {
        let mut t = SymbolTable::new();
        let a = ConceptName::Class(t.class("A"));
        let b = ConceptName::Class(t.class("B"));
        let p = Role::Atomic(t.property("p"));
        let ca = Concept::Atomic(a);
        let cb = Concept::Atomic(b);
        assert_eq!(
            nnf(&Concept::not(Concept::and(ca.clone(), cb))),
            Nnf::Or(vec![Nnf::NotAtom(a), Nnf::NotAtom(b)])
        );
        assert_eq!(
            nnf(&Concept::not(
                Concept::at_least(1, p.clone(), ca.clone()).unwrap()
            )),
            Nnf::AtMost(0, p, Box::new(Nnf::Atom(a)))
        );
        assert_eq!(nnf(&Concept::not(Concept::not(ca))), Nnf::Atom(a));
    }
}
