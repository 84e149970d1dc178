//! Shape containment: proofs for the inverse-free fragment, refutations for
//! everything, and counterexamples as concrete graphs.

use std::collections::{BTreeMap, BTreeSet};

use super::finite::{bounded_model_search, model_of_size, SearchRestriction};
use super::tableau::{tableau_sat, TableauConfig};
use super::ReasonerError;
use crate::dl::{
    dl_fragment, interpret_concept, Concept, DlFragment, Element, Interpretation, KnowledgeBase,
    Signature,
};
use crate::eval::is_faithful;
use crate::fragments::{classify, FragmentClass};
use crate::graph::{Assignment, RdfGraph};
use crate::shapes::{Constraint, ShapeSet};
use crate::symbols::{NodeId, ShapeId, SymbolTable};
use crate::translation::{graph_assignment_from_model, tau_shapes, Scenario};

/// Largest universe the refutation search tries unless told otherwise.
pub const DEFAULT_BOUND: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Guarantee {
    /// A proof: holds in every graph.
    Complete,
    /// Rests on an entailment supplied from outside, which is sound for
    /// containment but was not checked here.
    SoundOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Reflexive,
    /// The second shape is `⊤` or a top-level conjunct of the first.
    Structural,
    Tableau,
    ExternalReasoner,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub graph: RdfGraph,
    pub assignment: Assignment,
    pub witness: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContainmentVerdict {
    Contained {
        guarantee: Guarantee,
        provenance: Provenance,
    },
    NotContained(Box<Counterexample>),
    Unknown {
        bound: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContainmentOptions {
    pub bound: u32,
    /// An external reasoner has established the finite entailment; report
    /// containment (sound only) when no counterexample is found.
    pub assume_entailed: bool,
    pub tableau: TableauConfig,
}

impl Default for ContainmentOptions {
    fn default() -> Self {
        ContainmentOptions {
            bound: DEFAULT_BOUND,
            assume_entailed: false,
            tableau: TableauConfig::default(),
        }
    }
}

/// Is every node carrying `sub` in a faithful assignment also carrying `sup`?
pub fn decide_containment(
    shapes: &ShapeSet,
    sub: ShapeId,
    sup: ShapeId,
    options: ContainmentOptions,
    symbols: &mut SymbolTable,
) -> Result<ContainmentVerdict, ReasonerError> {
    for s in [sub, sup] {
        if !shapes.contains(s) {
            return Err(ReasonerError::UnknownShape(
                symbols.shape_name(s).to_string(),
            ));
        }
    }
    if sub == sup {
        return Ok(ContainmentVerdict::Contained {
            guarantee: Guarantee::Complete,
            provenance: Provenance::Reflexive,
        });
    }
    if structurally_contained(shapes, sub, sup) {
        return Ok(ContainmentVerdict::Contained {
            guarantee: Guarantee::Complete,
            provenance: Provenance::Structural,
        });
    }
    let kb = tau_shapes(shapes);
    let goal = Concept::and(Concept::shape(sub), Concept::not(Concept::shape(sup)));
    let scenarios = Scenario::enumerate(shapes)?;

    if classify(shapes).class == FragmentClass::LNoInv {
        for (i, scenario) in scenarios.iter().enumerate() {
            let skb = scenario.knowledge_base(&kb);
            let result = tableau_sat(&skb, &goal, options.tableau)?;
            let Some(model) = result.model else { continue };
            // Look for the smallest counterexample no larger than this one.
            let (j, model) =
                policy_search(&scenarios, &kb, &goal, model.size())?.unwrap_or((i, model));
            let cex =
                counterexample_from(&scenarios[j], &model, &kb, &goal, shapes, sub, sup, symbols)?;
            return Ok(ContainmentVerdict::NotContained(Box::new(cex)));
        }
        return Ok(ContainmentVerdict::Contained {
            guarantee: Guarantee::Complete,
            provenance: Provenance::Tableau,
        });
    }

    if let Some((j, model)) = policy_search(&scenarios, &kb, &goal, options.bound)? {
        let cex =
            counterexample_from(&scenarios[j], &model, &kb, &goal, shapes, sub, sup, symbols)?;
        return Ok(ContainmentVerdict::NotContained(Box::new(cex)));
    }
    if options.assume_entailed {
        return Ok(ContainmentVerdict::Contained {
            guarantee: Guarantee::SoundOnly,
            provenance: Provenance::ExternalReasoner,
        });
    }
    Ok(ContainmentVerdict::Unknown {
        bound: options.bound,
    })
}

/// Searches for a counterexample of at most `bound` elements without trying
/// to prove containment.
pub fn find_counterexample(
    shapes: &ShapeSet,
    sub: ShapeId,
    sup: ShapeId,
    bound: u32,
    symbols: &mut SymbolTable,
) -> Result<Option<Counterexample>, ReasonerError> {
    for s in [sub, sup] {
        if !shapes.contains(s) {
            return Err(ReasonerError::UnknownShape(
                symbols.shape_name(s).to_string(),
            ));
        }
    }
    if sub == sup {
        return Ok(None);
    }
    let kb = tau_shapes(shapes);
    let goal = Concept::and(Concept::shape(sub), Concept::not(Concept::shape(sup)));
    let scenarios = Scenario::enumerate(shapes)?;
    match policy_search(&scenarios, &kb, &goal, bound)? {
        Some((j, model)) => Ok(Some(counterexample_from(
            &scenarios[j],
            &model,
            &kb,
            &goal,
            shapes,
            sub,
            sup,
            symbols,
        )?)),
        None => Ok(None),
    }
}

fn structurally_contained(shapes: &ShapeSet, sub: ShapeId, sup: ShapeId) -> bool {
    if shapes
        .get(sup)
        .is_some_and(|s| s.constraint == Constraint::Top)
    {
        return true;
    }
    let mut stack = vec![&shapes.get(sub).expect("checked by caller").constraint];
    while let Some(c) = stack.pop() {
        match c {
            Constraint::ShapeRef(s) if *s == sup => return true,
            Constraint::And(a, b) => stack.extend([a.as_ref(), b.as_ref()]),
            _ => {}
        }
    }
    false
}

/// The order in which refutation models are sought: first models where the
/// goal sits on an anonymous element and nothing relates to itself, then any
/// model; within a pass by universe size, then by scenario.
fn policy_search(
    scenarios: &[Scenario],
    kb: &KnowledgeBase,
    goal: &Concept,
    bound: u32,
) -> Result<Option<(usize, Interpretation)>, ReasonerError> {
    let kbs: Vec<KnowledgeBase> = scenarios.iter().map(|s| s.knowledge_base(kb)).collect();
    let generic = SearchRestriction {
        goal_unnamed: true,
        irreflexive: true,
    };
    for restriction in [generic, SearchRestriction::default()] {
        let smallest = kbs
            .iter()
            .map(|k| k.signature().objects.len() as u32)
            .min()
            .unwrap_or(0)
            .max(1);
        for size in smallest..=bound {
            for (i, skb) in kbs.iter().enumerate() {
                if let Some(model) = model_of_size(skb, goal, size, restriction)? {
                    return Ok(Some((i, model)));
                }
            }
        }
    }
    Ok(None)
}

#[allow(clippy::too_many_arguments)]
fn counterexample_from(
    scenario: &Scenario,
    model: &Interpretation,
    kb: &KnowledgeBase,
    goal: &Concept,
    shapes: &ShapeSet,
    sub: ShapeId,
    sup: ShapeId,
    symbols: &mut SymbolTable,
) -> Result<Counterexample, ReasonerError> {
    let lifted = scenario.lift_model(model, kb)?;
    let focus = interpret_concept(&lifted, goal)?.into_iter().next();
    let arranged = match focus {
        Some(e) => witness_first(&lifted, e)?,
        None => lifted,
    };
    extract_counterexample(&arranged, shapes, sub, sup, symbols)
}

/// Renumbers elements so that `focus`, when anonymous, is the first
/// anonymous element and therefore gets the first fresh node name.
fn witness_first(model: &Interpretation, focus: Element) -> Result<Interpretation, ReasonerError> {
    let named: BTreeSet<Element> = model.objects().values().copied().collect();
    if named.contains(&focus) {
        return Ok(model.clone());
    }
    let mut order: Vec<Element> = model.universe().filter(|e| named.contains(e)).collect();
    order.push(focus);
    order.extend(
        model
            .universe()
            .filter(|e| !named.contains(e) && *e != focus),
    );
    let to: BTreeMap<Element, Element> = order
        .iter()
        .enumerate()
        .map(|(i, e)| (*e, Element(i as u32)))
        .collect();
    let objects = model.objects().iter().map(|(o, e)| (*o, to[e])).collect();
    let concepts = model
        .concepts()
        .iter()
        .map(|(c, es)| (*c, es.iter().map(|e| to[e]).collect()))
        .collect();
    let roles = model
        .roles()
        .iter()
        .map(|(p, pairs)| (*p, pairs.iter().map(|(a, b)| (to[a], to[b])).collect()))
        .collect();
    Ok(Interpretation::new(model.size(), objects, concepts, roles)?)
}

/// Turns a model with an element in `sub` but not `sup` into a verified
/// counterexample graph.
pub fn extract_counterexample(
    model: &Interpretation,
    shapes: &ShapeSet,
    sub: ShapeId,
    sup: ShapeId,
    symbols: &mut SymbolTable,
) -> Result<Counterexample, ReasonerError> {
    let goal = Concept::and(Concept::shape(sub), Concept::not(Concept::shape(sup)));
    if interpret_concept(model, &goal)?.is_empty() {
        return Err(ReasonerError::Verification(
            "model has no element in the first shape but not the second".into(),
        ));
    }
    let (graph, assignment) = graph_assignment_from_model(model, shapes, symbols)?;
    let witness = first_witness(&graph, &assignment, sub, sup, symbols)
        .ok_or_else(|| ReasonerError::Verification("no witness node".into()))?;
    if !is_faithful(&graph, shapes, &assignment)
        .map_err(crate::translation::TranslationError::from)?
    {
        return Err(ReasonerError::Verification(
            "counterexample assignment is not faithful".into(),
        ));
    }
    Ok(Counterexample {
        graph,
        assignment,
        witness,
    })
}

/// Prefers the anonymous witness with the lowest fresh number.
fn first_witness(
    graph: &RdfGraph,
    assignment: &Assignment,
    sub: ShapeId,
    sup: ShapeId,
    symbols: &SymbolTable,
) -> Option<NodeId> {
    graph
        .nodes()
        .iter()
        .copied()
        .filter(|v| assignment.has(*v, sub) && !assignment.has(*v, sup))
        .min_by_key(|v| {
            let name = symbols.node_name(*v);
            let fresh = name.strip_prefix('b').and_then(|n| n.parse::<u64>().ok());
            (fresh.is_none(), fresh, *v)
        })
}

/// Outcome of a finite-entailment query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entailment {
    Entailed,
    NotEntailed(Interpretation),
    Unknown { bound: u32 },
}

/// Does `C ⊑ D` hold in every finite model of `kb`? Decided by the tableau for
/// ALCOQ inputs; otherwise only refutations are found.
pub fn subsumes(
    kb: &KnowledgeBase,
    c: &Concept,
    d: &Concept,
    options: ContainmentOptions,
) -> Result<Entailment, ReasonerError> {
    if c == d {
        return Ok(Entailment::Entailed);
    }
    let goal = Concept::and(c.clone(), Concept::not(d.clone()));
    let mut extra = Signature::default();
    goal.collect_names(&mut extra);
    let kb = kb.clone().with_signature(&extra);
    let simple = goal
        .roles()
        .iter()
        .all(|(_, r)| !r.has_inverse() && !r.has_compose());
    if simple && dl_fragment(&kb) == DlFragment::Alcoq {
        return Ok(match tableau_sat(&kb, &goal, options.tableau)?.model {
            Some(m) => Entailment::NotEntailed(m),
            None => Entailment::Entailed,
        });
    }
    Ok(match bounded_model_search(&kb, &goal, options.bound)? {
        Some(m) => Entailment::NotEntailed(m),
        None => Entailment::Unknown {
            bound: options.bound,
        },
    })
}
