//! Finite interpretations and the model checker.

use std::collections::{BTreeMap, BTreeSet};

use super::{Axiom, Concept, ConceptName, DlError, KnowledgeBase, Role};
use crate::symbols::{NodeId, PropertyId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(pub u32);

/// A finite interpretation over the universe `0..size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    size: u32,
    objects: BTreeMap<NodeId, Element>,
    concepts: BTreeMap<ConceptName, BTreeSet<Element>>,
    roles: BTreeMap<PropertyId, BTreeSet<(Element, Element)>>,
}

impl Interpretation {
    pub fn new(
        size: u32,
        objects: BTreeMap<NodeId, Element>,
        concepts: BTreeMap<ConceptName, BTreeSet<Element>>,
        roles: BTreeMap<PropertyId, BTreeSet<(Element, Element)>>,
    ) -> Result<Interpretation, DlError> {
        if size == 0 {
            return Err(DlError::EmptyUniverse);
        }
        let check = |e: &Element| {
            if e.0 < size {
                Ok(())
            } else {
                Err(DlError::ElementOutOfRange(e.0))
            }
        };
        objects.values().try_for_each(check)?;
        concepts.values().flatten().try_for_each(check)?;
        for (a, b) in roles.values().flatten() {
            check(a)?;
            check(b)?;
        }
        Ok(Interpretation {
            size,
            objects,
            concepts,
            roles,
        })
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn universe(&self) -> impl Iterator<Item = Element> {
        (0..self.size).map(Element)
    }

    pub fn objects(&self) -> &BTreeMap<NodeId, Element> {
        &self.objects
    }

    pub fn concepts(&self) -> &BTreeMap<ConceptName, BTreeSet<Element>> {
        &self.concepts
    }

    pub fn roles(&self) -> &BTreeMap<PropertyId, BTreeSet<(Element, Element)>> {
        &self.roles
    }

    pub fn object(&self, o: NodeId) -> Result<Element, DlError> {
        self.objects
            .get(&o)
            .copied()
            .ok_or(DlError::UnknownObject(o))
    }

    /// Object names interpreted as `e`.
    pub fn names_of(&self, e: Element) -> impl Iterator<Item = NodeId> + '_ {
        self.objects
            .iter()
            .filter(move |(_, x)| **x == e)
            .map(|(o, _)| *o)
    }
}

pub fn interpret_role(
    i: &Interpretation,
    r: &Role,
) -> Result<BTreeSet<(Element, Element)>, DlError> {
    Ok(match r {
        Role::Atomic(p) => i.roles.get(p).cloned().ok_or(DlError::UnknownRole(*p))?,
        Role::Inverse(inner) => interpret_role(i, inner)?
            .into_iter()
            .map(|(a, b)| (b, a))
            .collect(),
        Role::Compose(a, b) => {
            let left = interpret_role(i, a)?;
            let right = interpret_role(i, b)?;
            let mut out = BTreeSet::new();
            for &(x, m) in &left {
                for &(_, y) in right.range((m, Element(0))..=(m, Element(u32::MAX))) {
                    out.insert((x, y));
                }
            }
            out
        }
    })
}

pub fn interpret_concept(i: &Interpretation, c: &Concept) -> Result<BTreeSet<Element>, DlError> {
    Ok(match c {
        Concept::Atomic(a) => i
            .concepts
            .get(a)
            .cloned()
            .ok_or(DlError::UnknownConcept(*a))?,
        Concept::Nominal(os) => os.iter().map(|o| i.object(*o)).collect::<Result<_, _>>()?,
        Concept::Top => i.universe().collect(),
        Concept::Not(inner) => {
            let inside = interpret_concept(i, inner)?;
            i.universe().filter(|e| !inside.contains(e)).collect()
        }
        Concept::And(a, b) => {
            let left = interpret_concept(i, a)?;
            let right = interpret_concept(i, b)?;
            left.intersection(&right).copied().collect()
        }
        Concept::AtLeast(n, r, inner) => {
            let pairs = interpret_role(i, r)?;
            let fillers = interpret_concept(i, inner)?;
            let mut counts: BTreeMap<Element, u32> = BTreeMap::new();
            for (x, y) in pairs {
                if fillers.contains(&y) {
                    *counts.entry(x).or_default() += 1;
                }
            }
            counts
                .into_iter()
                .filter(|(_, k)| *k >= n.get())
                .map(|(x, _)| x)
                .collect()
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelCheck {
    Holds,
    /// Index of the first axiom that fails, in list order.
    Fails(usize),
}

impl ModelCheck {
    pub fn holds(self) -> bool {
        self == ModelCheck::Holds
    }
}

pub fn check_model(i: &Interpretation, kb: &KnowledgeBase) -> Result<ModelCheck, DlError> {
    let sig = kb.signature();
    if let Some(a) = sig.concepts.iter().find(|a| !i.concepts.contains_key(a)) {
        return Err(DlError::UnknownConcept(*a));
    }
    if let Some(p) = sig.properties.iter().find(|p| !i.roles.contains_key(p)) {
        return Err(DlError::UnknownRole(*p));
    }
    if let Some(o) = sig.objects.iter().find(|o| !i.objects.contains_key(o)) {
        return Err(DlError::UnknownObject(*o));
    }
    for (index, ax) in kb.axioms().iter().enumerate() {
        let ok = match ax {
            Axiom::Subsumption { sub, sup, .. } => {
                interpret_concept(i, sub)?.is_subset(&interpret_concept(i, sup)?)
            }
            Axiom::ConceptAssertion { object, concept } => {
                interpret_concept(i, concept)?.contains(&i.object(*object)?)
            }
            Axiom::RoleAssertion {
                subject,
                object,
                role,
            } => interpret_role(i, role)?.contains(&(i.object(*subject)?, i.object(*object)?)),
        };
        if !ok {
            return Ok(ModelCheck::Fails(index));
        }
    }
    Ok(ModelCheck::Holds)
}
