//! Finite model search by reduction to propositional satisfiability.
//!
//! For a fixed universe size every concept at every element becomes a
//! formula over concept-name and role-pair variables. Object names are pinned
//! to the first elements, which also makes distinct names denote distinct
//! elements. Counting uses a sequential counter.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use varisat::{ExtendFormula, Lit, Solver};

use super::ReasonerError;
use crate::dl::{
    check_model, interpret_concept, Axiom, Concept, ConceptName, Element, Interpretation,
    KnowledgeBase, ModelCheck, Role,
};
use crate::symbols::{NodeId, PropertyId};

/// Extra conditions on the models a search may return.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchRestriction {
    /// The goal must hold at an element no object name denotes.
    pub goal_unnamed: bool,
    /// No element is related to itself by any property.
    pub irreflexive: bool,
}

/// Smallest model of `kb` in which `goal` is non-empty, trying universe sizes
/// up to `max_universe`. `None` means no such model exists within the bound.
pub fn bounded_model_search(
    kb: &KnowledgeBase,
    goal: &Concept,
    max_universe: u32,
) -> Result<Option<Interpretation>, ReasonerError> {
    let first = (kb.signature().objects.len() as u32).max(1);
    for size in first..=max_universe {
        if let Some(model) = model_of_size(kb, goal, size, SearchRestriction::default())? {
            return Ok(Some(model));
        }
    }
    Ok(None)
}

/// A model with exactly `size` elements, if one exists.
pub fn model_of_size(
    kb: &KnowledgeBase,
    goal: &Concept,
    size: u32,
    restriction: SearchRestriction,
) -> Result<Option<Interpretation>, ReasonerError> {
    let objects: Vec<NodeId> = kb.signature().objects.iter().copied().collect();
    if size == 0 || (objects.len() as u32) > size {
        return Ok(None);
    }
    let mut enc = Encoder::new(kb, size, &objects);
    for ax in kb.axioms() {
        match ax {
            Axiom::Subsumption { sub, sup, .. } => {
                for e in 0..size {
                    let a = enc.concept(sub, e);
                    let b = enc.concept(sup, e);
                    enc.clause(&[a.not(), b]);
                }
            }
            Axiom::ConceptAssertion { object, concept } => {
                let e = enc.pinned[object];
                let a = enc.concept(concept, e);
                enc.clause(&[a]);
            }
            Axiom::RoleAssertion {
                subject,
                object,
                role,
            } => {
                let (a, b) = (enc.pinned[subject], enc.pinned[object]);
                let r = enc.role(role, a, b);
                enc.clause(&[r]);
            }
        }
    }
    let first_goal = if restriction.goal_unnamed {
        objects.len() as u32
    } else {
        0
    };
    let goal_lits: Vec<B> = (first_goal..size).map(|e| enc.concept(goal, e)).collect();
    enc.clause(&goal_lits);
    if restriction.irreflexive {
        for p in &kb.signature().properties {
            for e in 0..size {
                let l = enc.edges[&(*p, e, e)];
                enc.clause(&[l.not()]);
            }
        }
    }
    if enc.unsat {
        return Ok(None);
    }
    let Some(mut truth) = enc.solve(&[])? else {
        return Ok(None);
    };
    // Drop edges and class memberships one at a time while a model survives,
    // so counterexamples carry no incidental triples.
    let mut dropped: Vec<Lit> = Vec::new();
    let mut candidates: Vec<B> = Vec::new();
    for p in &kb.signature().properties {
        for a in 0..size {
            for b in 0..size {
                candidates.push(enc.edges[&(*p, a, b)]);
            }
        }
    }
    for name in kb
        .signature()
        .concepts
        .iter()
        .filter(|n| matches!(n, ConceptName::Class(_)))
    {
        candidates.extend((0..size).map(|e| enc.atoms[&(*name, e)]));
    }
    for c in candidates {
        let B::Lit(l) = c else { continue };
        if truth[l.var().index()] != l.is_positive() {
            continue;
        }
        dropped.push(!l);
        match enc.solve(&dropped)? {
            Some(t) => truth = t,
            None => {
                dropped.pop();
            }
        }
    }
    let value = |b: B| match b {
        B::True => true,
        B::False => false,
        B::Lit(l) => truth[l.var().index()] == l.is_positive(),
    };
    let sig = kb.signature();
    let mut concepts = BTreeMap::new();
    for name in &sig.concepts {
        let members = (0..size)
            .filter(|&e| value(enc.atoms[&(*name, e)]))
            .map(Element)
            .collect();
        concepts.insert(*name, members);
    }
    let mut roles = BTreeMap::new();
    for p in &sig.properties {
        let mut pairs = BTreeSet::new();
        for a in 0..size {
            for b in 0..size {
                if value(enc.edges[&(*p, a, b)]) {
                    pairs.insert((Element(a), Element(b)));
                }
            }
        }
        roles.insert(*p, pairs);
    }
    let objects = enc.pinned.iter().map(|(o, e)| (*o, Element(*e))).collect();
    let model = Interpretation::new(size, objects, concepts, roles)?;
    if let ModelCheck::Fails(i) = check_model(&model, kb)? {
        return Err(ReasonerError::Verification(format!(
            "finite search model violates axiom {i}"
        )));
    }
    if interpret_concept(&model, goal)?.is_empty() {
        return Err(ReasonerError::Verification(
            "finite search model leaves the goal empty".into(),
        ));
    }
    Ok(Some(model))
}

/// A propositional value with constants folded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum B {
    True,
    False,
    Lit(Lit),
}

impl B {
    fn not(self) -> B {
        match self {
            B::True => B::False,
            B::False => B::True,
            B::Lit(l) => B::Lit(!l),
        }
    }
}

struct Encoder<'k> {
    solver: Solver<'static>,
    var_count: usize,
    unsat: bool,
    size: u32,
    pinned: BTreeMap<NodeId, u32>,
    atoms: HashMap<(ConceptName, u32), B>,
    edges: HashMap<(PropertyId, u32, u32), B>,
    // Keyed by address: every concept encoded outlives the encoder.
    concept_memo: HashMap<(*const Concept, u32), B>,
    compose_memo: HashMap<(*const Role, u32, u32), B>,
    _borrow: std::marker::PhantomData<&'k Concept>,
}

impl<'k> Encoder<'k> {
    fn new(kb: &KnowledgeBase, size: u32, objects: &[NodeId]) -> Encoder<'k> {
        let mut enc = Encoder {
            solver: Solver::new(),
            var_count: 0,
            unsat: false,
            size,
            pinned: objects
                .iter()
                .enumerate()
                .map(|(i, o)| (*o, i as u32))
                .collect(),
            atoms: HashMap::new(),
            edges: HashMap::new(),
            concept_memo: HashMap::new(),
            compose_memo: HashMap::new(),
            _borrow: std::marker::PhantomData,
        };
        let sig = kb.signature();
        for name in &sig.concepts {
            for e in 0..size {
                let v = enc.fresh();
                enc.atoms.insert((*name, e), v);
            }
        }
        for p in &sig.properties {
            for a in 0..size {
                for b in 0..size {
                    let v = enc.fresh();
                    enc.edges.insert((*p, a, b), v);
                }
            }
        }
        enc
    }

    /// Truth values of all variables in a model under `assumptions`.
    fn solve(&mut self, assumptions: &[Lit]) -> Result<Option<Vec<bool>>, ReasonerError> {
        self.solver.assume(assumptions);
        let sat = self
            .solver
            .solve()
            .map_err(|e| ReasonerError::Verification(e.to_string()))?;
        if !sat {
            return Ok(None);
        }
        let mut truth = vec![false; self.var_count];
        for lit in self.solver.model().expect("solver reported sat") {
            if lit.var().index() < truth.len() {
                truth[lit.var().index()] = lit.is_positive();
            }
        }
        Ok(Some(truth))
    }

    fn fresh(&mut self) -> B {
        let v = self.solver.new_var();
        self.var_count = self.var_count.max(v.index() + 1);
        B::Lit(v.positive())
    }

    fn clause(&mut self, lits: &[B]) {
        if lits.contains(&B::True) {
            return;
        }
        let lits: Vec<Lit> = lits
            .iter()
            .filter_map(|b| match b {
                B::Lit(l) => Some(*l),
                _ => None,
            })
            .collect();
        if lits.is_empty() {
            self.unsat = true;
        } else {
            self.solver.add_clause(&lits);
        }
    }

    fn and(&mut self, a: B, b: B) -> B {
        match (a, b) {
            (B::False, _) | (_, B::False) => B::False,
            (B::True, x) | (x, B::True) => x,
            _ if a == b => a,
            _ if a == b.not() => B::False,
            _ => {
                let x = self.fresh();
                self.clause(&[x.not(), a]);
                self.clause(&[x.not(), b]);
                self.clause(&[x, a.not(), b.not()]);
                x
            }
        }
    }

    fn or(&mut self, a: B, b: B) -> B {
        self.and(a.not(), b.not()).not()
    }

    fn or_all(&mut self, items: Vec<B>) -> B {
        if items.contains(&B::True) {
            return B::True;
        }
        let lits: Vec<B> = items.into_iter().filter(|b| *b != B::False).collect();
        match lits.len() {
            0 => B::False,
            1 => lits[0],
            _ => {
                let x = self.fresh();
                for l in &lits {
                    self.clause(&[l.not(), x]);
                }
                let mut big = vec![x.not()];
                big.extend(lits);
                self.clause(&big);
                x
            }
        }
    }

    fn role(&mut self, r: &'k Role, a: u32, b: u32) -> B {
        match r {
            Role::Atomic(p) => self.edges.get(&(*p, a, b)).copied().unwrap_or(B::False),
            Role::Inverse(inner) => self.role(inner, b, a),
            Role::Compose(first, second) => {
                if let Some(&x) = self.compose_memo.get(&(r as *const Role, a, b)) {
                    return x;
                }
                let mut paths = Vec::new();
                for m in 0..self.size {
                    let left = self.role(first, a, m);
                    let right = self.role(second, m, b);
                    paths.push(self.and(left, right));
                }
                let x = self.or_all(paths);
                self.compose_memo.insert((r as *const Role, a, b), x);
                x
            }
        }
    }

    fn concept(&mut self, c: &'k Concept, e: u32) -> B {
        if let Some(&x) = self.concept_memo.get(&(c as *const Concept, e)) {
            return x;
        }
        let x = match c {
            Concept::Top => B::True,
            Concept::Atomic(name) => self.atoms.get(&(*name, e)).copied().unwrap_or(B::False),
            Concept::Nominal(os) => {
                if os.iter().any(|o| self.pinned.get(o) == Some(&e)) {
                    B::True
                } else {
                    B::False
                }
            }
            Concept::Not(inner) => self.concept(inner, e).not(),
            Concept::And(a, b) => {
                let left = self.concept(a, e);
                if left == B::False {
                    B::False
                } else {
                    let right = self.concept(b, e);
                    self.and(left, right)
                }
            }
            Concept::AtLeast(n, r, filler) => {
                let mut known = 0u32;
                let mut open = Vec::new();
                for j in 0..self.size {
                    let edge = self.role(r, e, j);
                    if edge == B::False {
                        continue;
                    }
                    let fill = self.concept(filler, j);
                    match self.and(edge, fill) {
                        B::True => known += 1,
                        B::False => {}
                        y => open.push(y),
                    }
                }
                let n = n.get();
                if known >= n {
                    B::True
                } else {
                    self.at_least(n - known, &open)
                }
            }
        };
        self.concept_memo.insert((c as *const Concept, e), x);
        x
    }

    /// At least `need` of `ys` hold, as a sequential counter whose cells are
    /// equivalences, so the result can be used under negation.
    fn at_least(&mut self, need: u32, ys: &[B]) -> B {
        let need = need as usize;
        if ys.len() < need {
            return B::False;
        }
        // row[j] = at least j of the inputs seen so far
        let mut row = vec![B::False; need + 1];
        row[0] = B::True;
        for (i, &y) in ys.iter().enumerate() {
            let top = need.min(i + 1);
            for j in (1..=top).rev() {
                let carry = self.and(row[j - 1], y);
                row[j] = self.or(row[j], carry);
            }
        }
        row[need]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dl::Signature;
    use crate::symbols::SymbolTable;

    #[test]
    fn empty_kb_top_has_a_one_element_model() {
        let m = bounded_model_search(&KnowledgeBase::default(), &Concept::Top, 1)
            .unwrap()
            .unwrap();
        assert_eq!(m.size(), 1);
    }

    #[test]
    fn at_most_one_blocks_two_successors() {
        let mut t = SymbolTable::new();
        let p = Role::Atomic(t.property("p"));
        let kb = KnowledgeBase::from_axioms([Axiom::Subsumption {
            sub: Concept::Top,
            sup: Concept::at_most(1, p.clone(), Concept::Top),
            origin: None,
        }]);
        let goal = Concept::at_least(2, p.clone(), Concept::Top).unwrap();
        assert_eq!(bounded_model_search(&kb, &goal, 4).unwrap(), None);
        let goal = Concept::at_least(1, p, Concept::Top).unwrap();
        assert!(bounded_model_search(&kb, &goal, 4).unwrap().is_some());
    }

    #[test]
    fn nominals_are_distinct_elements() {
        let mut t = SymbolTable::new();
        let a = t.node("a");
        let b = t.node("b");
        let kb = KnowledgeBase::new(Signature {
            objects: [a, b].into(),
            ..Default::default()
        });
        assert_eq!(bounded_model_search(&kb, &Concept::Top, 1).unwrap(), None);
        let m = bounded_model_search(&kb, &Concept::Top, 2)
            .unwrap()
            .unwrap();
        assert_ne!(m.object(a).unwrap(), m.object(b).unwrap());
    }

    #[test]
    fn composition_counts_distinct_endpoints() {
        let mut t = SymbolTable::new();
        let p = Role::Atomic(t.property("p"));
        let q = Role::Atomic(t.property("q"));
        let goal = Concept::at_least(3, Role::compose(p, q), Concept::Top).unwrap();
        let kb = KnowledgeBase::default().with_signature(&{
            let mut s = Signature::default();
            goal.collect_names(&mut s);
            s
        });
        let m = bounded_model_search(&kb, &goal, 4).unwrap().unwrap();
        assert_eq!(m.size(), 3);
    }

    #[test]
    fn restrictions_move_the_goal_off_named_elements() {
        let mut t = SymbolTable::new();
        let v = t.node("v");
        let nominal = Concept::nominal([v]).unwrap();
        let kb = KnowledgeBase::new(Signature {
            objects: [v].into(),
            ..Default::default()
        });
        let generic = SearchRestriction {
            goal_unnamed: true,
            irreflexive: true,
        };
        assert_eq!(model_of_size(&kb, &nominal, 2, generic).unwrap(), None);
        assert!(model_of_size(&kb, &Concept::Top, 2, generic)
            .unwrap()
            .is_some());
    }
}
