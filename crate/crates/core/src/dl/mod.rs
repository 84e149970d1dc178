//! Description-logic syntax, knowledge bases and finite interpretations.
//!
//! Concept names carry the partition they come from ([`ConceptName::Shape`]
//! or [`ConceptName::Class`]), so a shape and a class may share a spelling.

mod interp;
mod nnf;

use std::collections::BTreeSet;
use std::num::NonZeroU32;

use thiserror::Error;

use crate::symbols::{NodeId, PropertyId, ShapeId};

pub use interp::{
    check_model, interpret_concept, interpret_role, Element, Interpretation, ModelCheck,
};
pub use nnf::{nnf, Nnf};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DlError {
    #[error("cardinality must be at least 1 in a >= restriction")]
    ZeroCardinality,
    #[error("nominal must name at least one object")]
    EmptyNominal,
    #[error("interpretation universe must be non-empty")]
    EmptyUniverse,
    #[error("element {0} lies outside the universe")]
    ElementOutOfRange(u32),
    #[error("concept name {0:?} is not interpreted")]
    UnknownConcept(ConceptName),
    #[error("property {0} is not interpreted")]
    UnknownRole(PropertyId),
    #[error("object {0} is not interpreted")]
    UnknownObject(NodeId),
    #[error("axiom uses {0} which is not in the knowledge-base signature")]
    NotInSignature(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConceptName {
    Shape(ShapeId),
    Class(NodeId),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Atomic(PropertyId),
    Inverse(Box<Role>),
    Compose(Box<Role>, Box<Role>),
}

impl Role {
    pub fn inverse(r: Role) -> Role {
        Role::Inverse(Box::new(r))
    }

    pub fn compose(a: Role, b: Role) -> Role {
        Role::Compose(Box::new(a), Box::new(b))
    }

    pub fn has_inverse(&self) -> bool {
        match self {
            Role::Atomic(_) => false,
            Role::Inverse(_) => true,
            Role::Compose(a, b) => a.has_inverse() || b.has_inverse(),
        }
    }

    pub fn has_compose(&self) -> bool {
        match self {
            Role::Atomic(_) => false,
            Role::Inverse(r) => r.has_compose(),
            Role::Compose(..) => true,
        }
    }

    pub fn properties(&self, out: &mut BTreeSet<PropertyId>) {
        match self {
            Role::Atomic(p) => {
                out.insert(*p);
            }
            Role::Inverse(r) => r.properties(out),
            Role::Compose(a, b) => {
                a.properties(out);
                b.properties(out);
            }
        }
    }

    /// Pushes inverses down to atomic roles: `(r∘s)⁻ = s⁻∘r⁻`, `r⁻⁻ = r`.
    pub fn normalized(&self) -> Role {
        fn go(r: &Role, inv: bool) -> Role {
            match r {
                Role::Atomic(p) if inv => Role::inverse(Role::Atomic(*p)),
                Role::Atomic(p) => Role::Atomic(*p),
                Role::Inverse(inner) => go(inner, !inv),
                Role::Compose(a, b) if inv => Role::compose(go(b, true), go(a, true)),
                Role::Compose(a, b) => Role::compose(go(a, false), go(b, false)),
            }
        }
        go(self, false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Concept {
    Atomic(ConceptName),
    Nominal(BTreeSet<NodeId>),
    Top,
    Not(Box<Concept>),
    And(Box<Concept>, Box<Concept>),
    AtLeast(NonZeroU32, Role, Box<Concept>),
}

impl Concept {
    pub fn shape(s: ShapeId) -> Concept {
        Concept::Atomic(ConceptName::Shape(s))
    }

    pub fn class(c: NodeId) -> Concept {
        Concept::Atomic(ConceptName::Class(c))
    }

    pub fn nominal(objects: impl IntoIterator<Item = NodeId>) -> Result<Concept, DlError> {
        let set: BTreeSet<NodeId> = objects.into_iter().collect();
        if set.is_empty() {
            return Err(DlError::EmptyNominal);
        }
        Ok(Concept::Nominal(set))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Concept) -> Concept {
        Concept::Not(Box::new(c))
    }

    pub fn and(a: Concept, b: Concept) -> Concept {
        Concept::And(Box::new(a), Box::new(b))
    }

    pub fn at_least(n: u32, r: Role, c: Concept) -> Result<Concept, DlError> {
        let n = NonZeroU32::new(n).ok_or(DlError::ZeroCardinality)?;
        Ok(Concept::AtLeast(n, r, Box::new(c)))
    }

    /// `¬⊤`
    pub fn bottom() -> Concept {
        Concept::not(Concept::Top)
    }

    /// `¬(¬a ⊓ ¬b)`
    pub fn or(a: Concept, b: Concept) -> Concept {
        Concept::not(Concept::and(Concept::not(a), Concept::not(b)))
    }

    /// `¬≥(n+1) r.C`
    pub fn at_most(n: u32, r: Role, c: Concept) -> Concept {
        let m = NonZeroU32::new(n + 1).expect("n + 1 is positive");
        Concept::not(Concept::AtLeast(m, r, Box::new(c)))
    }

    /// `≥1 r.C`
    pub fn exists(r: Role, c: Concept) -> Concept {
        Concept::AtLeast(NonZeroU32::MIN, r, Box::new(c))
    }

    /// `¬≥1 r.¬C`
    pub fn forall(r: Role, c: Concept) -> Concept {
        Concept::not(Concept::exists(r, Concept::not(c)))
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Concept::Not(c) if **c == Concept::Top)
    }

    /// Adds every name used by this concept to `sig`.
    pub fn collect_names(&self, sig: &mut Signature) {
        match self {
            Concept::Atomic(a) => {
                sig.concepts.insert(*a);
            }
            Concept::Nominal(os) => sig.objects.extend(os.iter().copied()),
            Concept::Top => {}
            Concept::Not(c) => c.collect_names(sig),
            Concept::And(a, b) => {
                a.collect_names(sig);
                b.collect_names(sig);
            }
            Concept::AtLeast(_, r, c) => {
                r.properties(&mut sig.properties);
                c.collect_names(sig);
            }
        }
    }

    /// Rebuilds the concept bottom-up, letting `f` replace atoms and nominals.
    pub fn rewrite_leaves(&self, f: &mut impl FnMut(&Concept) -> Option<Concept>) -> Concept {
        match self {
            Concept::Atomic(_) | Concept::Nominal(_) | Concept::Top => {
                f(self).unwrap_or_else(|| self.clone())
            }
            Concept::Not(c) => Concept::not(c.rewrite_leaves(f)),
            Concept::And(a, b) => Concept::and(a.rewrite_leaves(f), b.rewrite_leaves(f)),
            Concept::AtLeast(n, r, c) => {
                Concept::AtLeast(*n, r.clone(), Box::new(c.rewrite_leaves(f)))
            }
        }
    }

    pub fn roles(&self) -> Vec<(u32, &Role)> {
        fn walk<'a>(c: &'a Concept, out: &mut Vec<(u32, &'a Role)>) {
            match c {
                Concept::Atomic(_) | Concept::Nominal(_) | Concept::Top => {}
                Concept::Not(c) => walk(c, out),
                Concept::And(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Concept::AtLeast(n, r, c) => {
                    out.push((n.get(), r));
                    walk(c, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OriginId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Axiom {
    /// `sub ⊑ sup`; two subsumptions sharing an origin form one equivalence.
    Subsumption {
        sub: Concept,
        sup: Concept,
        origin: Option<OriginId>,
    },
    ConceptAssertion {
        object: NodeId,
        concept: Concept,
    },
    RoleAssertion {
        subject: NodeId,
        object: NodeId,
        role: Role,
    },
}

impl Axiom {
    pub fn concepts(&self) -> Vec<&Concept> {
        match self {
            Axiom::Subsumption { sub, sup, .. } => vec![sub, sup],
            Axiom::ConceptAssertion { concept, .. } => vec![concept],
            Axiom::RoleAssertion { .. } => Vec::new(),
        }
    }

    fn collect_names(&self, sig: &mut Signature) {
        match self {
            Axiom::Subsumption { sub, sup, .. } => {
                sub.collect_names(sig);
                sup.collect_names(sig);
            }
            Axiom::ConceptAssertion { object, concept } => {
                sig.objects.insert(*object);
                concept.collect_names(sig);
            }
            Axiom::RoleAssertion {
                subject,
                object,
                role,
            } => {
                sig.objects.insert(*subject);
                sig.objects.insert(*object);
                role.properties(&mut sig.properties);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    pub concepts: BTreeSet<ConceptName>,
    pub properties: BTreeSet<PropertyId>,
    pub objects: BTreeSet<NodeId>,
}

impl Signature {
    pub fn contains(&self, other: &Signature) -> bool {
        other.concepts.is_subset(&self.concepts)
            && other.properties.is_subset(&self.properties)
            && other.objects.is_subset(&self.objects)
    }

    pub fn merge(&mut self, other: &Signature) {
        self.concepts.extend(other.concepts.iter().copied());
        self.properties.extend(other.properties.iter().copied());
        self.objects.extend(other.objects.iter().copied());
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KnowledgeBase {
    signature: Signature,
    axioms: Vec<Axiom>,
    next_origin: u32,
}

impl KnowledgeBase {
    pub fn new(signature: Signature) -> KnowledgeBase {
        KnowledgeBase {
            signature,
            axioms: Vec::new(),
            next_origin: 0,
        }
    }

    /// Knowledge base whose signature is exactly the names used by `axioms`.
    pub fn from_axioms(axioms: impl IntoIterator<Item = Axiom>) -> KnowledgeBase {
        let mut kb = KnowledgeBase::default();
        for ax in axioms {
            ax.collect_names(&mut kb.signature);
            if let Axiom::Subsumption {
                origin: Some(o), ..
            } = &ax
            {
                kb.next_origin = kb.next_origin.max(o.0 + 1);
            }
            kb.axioms.push(ax);
        }
        kb
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn push(&mut self, axiom: Axiom) -> Result<(), DlError> {
        let mut used = Signature::default();
        axiom.collect_names(&mut used);
        if !self.signature.contains(&used) {
            return Err(DlError::NotInSignature(format!(
                "{:?}",
                missing(&self.signature, &used)
            )));
        }
        if let Axiom::Subsumption {
            origin: Some(o), ..
        } = &axiom
        {
            self.next_origin = self.next_origin.max(o.0 + 1);
        }
        self.axioms.push(axiom);
        Ok(())
    }

    pub fn push_subsumption(&mut self, sub: Concept, sup: Concept) -> Result<(), DlError> {
        self.push(Axiom::Subsumption {
            sub,
            sup,
            origin: None,
        })
    }

    /// Stores `a ≡ b` as `a ⊑ b` and `b ⊑ a` with a shared origin.
    pub fn push_equivalence(&mut self, a: Concept, b: Concept) -> Result<(), DlError> {
        let origin = Some(OriginId(self.next_origin));
        self.push(Axiom::Subsumption {
            sub: a.clone(),
            sup: b.clone(),
            origin,
        })?;
        self.push(Axiom::Subsumption {
            sub: b,
            sup: a,
            origin,
        })?;
        Ok(())
    }

    /// Axiom count with each equivalence counted once.
    pub fn logical_axiom_count(&self) -> usize {
        let mut seen = BTreeSet::new();
        self.axioms
            .iter()
            .filter(|ax| match ax {
                Axiom::Subsumption {
                    origin: Some(o), ..
                } => seen.insert(*o),
                _ => true,
            })
            .count()
    }

    pub fn with_signature(mut self, extra: &Signature) -> KnowledgeBase {
        self.signature.merge(extra);
        self
    }
}

fn missing(have: &Signature, used: &Signature) -> Signature {
    Signature {
        concepts: used.concepts.difference(&have.concepts).copied().collect(),
        properties: used
            .properties
            .difference(&have.properties)
            .copied()
            .collect(),
        objects: used.objects.difference(&have.objects).copied().collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DlFragment {
    Alcoq,
    SroiqExpressible,
    AlcoiqComposition,
}

impl DlFragment {
    pub fn label(self) -> &'static str {
        match self {
            DlFragment::Alcoq => "ALCOQ",
            DlFragment::SroiqExpressible => "SROIQ-expressible",
            DlFragment::AlcoiqComposition => "ALCOIQ-with-composition",
        }
    }
}

/// The smallest of the three logics the knowledge base falls into. Counting
/// beyond one over a composed role is the only thing that leaves SROIQ.
pub fn dl_fragment(kb: &KnowledgeBase) -> DlFragment {
    let mut frag = DlFragment::Alcoq;
    for ax in kb.axioms() {
        if let Axiom::RoleAssertion { role, .. } = ax {
            if role.has_compose() {
                return DlFragment::AlcoiqComposition;
            }
            if role.has_inverse() {
                frag = DlFragment::SroiqExpressible;
            }
        }
        for c in ax.concepts() {
            for (n, r) in c.roles() {
                if r.has_compose() && n >= 2 {
                    return DlFragment::AlcoiqComposition;
                }
                if r.has_compose() || r.has_inverse() {
                    frag = DlFragment::SroiqExpressible;
                }
            }
        }
    }
    frag
}
