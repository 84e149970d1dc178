//! Shapes to description logic and back.
//!
//! Besides the mapping functions this module holds the two bridges between
//! finite models and (graph, assignment) pairs, and [`Scenario`]s: a DL model
//! interprets every object name, while a graph may lack a node a shape set
//! mentions. A scenario fixes which mentioned nodes and class nodes exist.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::dl::{
    check_model, Axiom, Concept, ConceptName, DlError, Element, Interpretation, KnowledgeBase,
    ModelCheck, Role, Signature,
};
use crate::eval::{is_faithful, EvalError};
use crate::graph::{Assignment, RdfGraph, Triple};
use crate::shapes::{Constraint, ModelError, PathExpr, Shape, ShapeSet, TargetQuery};
use crate::symbols::{NodeId, PropertyId, ShapeId, SymbolTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TranslationError {
    #[error("the empty graph has no corresponding interpretation (universes are non-empty)")]
    EmptyGraph,
    #[error("assignment is not faithful")]
    Unfaithful,
    #[error("interpretation is not a model: axiom {0} fails")]
    NotAModel(usize),
    #[error("objects {0} and {1} denote the same element; graph nodes are distinct")]
    SharedElement(NodeId, NodeId),
    #[error("class {0} has instances but no element can serve as its class node")]
    NoClassNode(NodeId),
    #[error("name {0} is not known to the bridge")]
    ForeignName(String),
    #[error("name {0} collides with the ambient shape set")]
    NameCollision(String),
    #[error("{0} optional nodes and classes give too many presence scenarios")]
    TooManyScenarios(usize),
    #[error("constructed graph and assignment are not faithful: {0}")]
    Unrealizable(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Dl(#[from] DlError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ShaclName {
    Shape(ShapeId),
    Class(NodeId),
    Node(NodeId),
    Property(PropertyId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DlName {
    Concept(ConceptName),
    Object(NodeId),
    Property(PropertyId),
}

/// The naming function between the two vocabularies. Spellings are shared;
/// the partition tag keeps the mapping injective.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NameBridge {
    shapes: BTreeSet<ShapeId>,
    classes: BTreeSet<NodeId>,
    nodes: BTreeSet<NodeId>,
    properties: BTreeSet<PropertyId>,
}

impl NameBridge {
    pub fn for_shapes(shapes: &ShapeSet) -> NameBridge {
        let classes = shapes
            .iter()
            .filter_map(|s| match s.target {
                TargetQuery::Class(c) => Some(c),
                _ => None,
            })
            .collect();
        NameBridge {
            shapes: shapes.names().collect(),
            classes,
            nodes: shapes.nodes(),
            properties: shapes.properties(),
        }
    }

    pub fn with_graph(mut self, g: &RdfGraph) -> NameBridge {
        self.nodes.extend(g.nodes().iter().copied());
        for &(_, p, o) in g.triples() {
            self.properties.insert(p);
            if p == SymbolTable::TYPE {
                self.classes.insert(o);
            }
        }
        self
    }

    pub fn forward(&self, name: ShaclName) -> Result<DlName, TranslationError> {
        let known = match name {
            ShaclName::Shape(s) => self.shapes.contains(&s),
            ShaclName::Class(c) => self.classes.contains(&c),
            ShaclName::Node(v) => self.nodes.contains(&v),
            ShaclName::Property(p) => self.properties.contains(&p),
        };
        if !known {
            return Err(TranslationError::ForeignName(format!("{name:?}")));
        }
        Ok(match name {
            ShaclName::Shape(s) => DlName::Concept(ConceptName::Shape(s)),
            ShaclName::Class(c) => DlName::Concept(ConceptName::Class(c)),
            ShaclName::Node(v) => DlName::Object(v),
            ShaclName::Property(p) => DlName::Property(p),
        })
    }

    pub fn backward(&self, name: DlName) -> Result<ShaclName, TranslationError> {
        let back = match name {
            DlName::Concept(ConceptName::Shape(s)) => ShaclName::Shape(s),
            DlName::Concept(ConceptName::Class(c)) => ShaclName::Class(c),
            DlName::Object(v) => ShaclName::Node(v),
            DlName::Property(p) => ShaclName::Property(p),
        };
        self.forward(back).map(|_| back)
    }
}

pub fn tau_role(path: &PathExpr) -> Role {
    match path {
        PathExpr::Prop(p) => Role::Atomic(*p),
        PathExpr::Inverse(inner) => Role::inverse(tau_role(inner)),
        PathExpr::Seq(a, b) => Role::compose(tau_role(a), tau_role(b)),
    }
}

pub fn tau_constr(c: &Constraint) -> Concept {
    match c {
        Constraint::Top => Concept::Top,
        Constraint::ShapeRef(s) => Concept::shape(*s),
        Constraint::NodeConst(v) => Concept::Nominal(BTreeSet::from([*v])),
        Constraint::And(a, b) => Concept::and(tau_constr(a), tau_constr(b)),
        Constraint::Not(a) => Concept::not(tau_constr(a)),
        Constraint::AtLeast(n, path, inner) => {
            Concept::AtLeast(*n, tau_role(path), Box::new(tau_constr(inner)))
        }
    }
}

pub fn tau_target(q: &TargetQuery) -> Concept {
    match q {
        TargetQuery::None => Concept::bottom(),
        TargetQuery::Nodes(vs) => Concept::Nominal(vs.clone()),
        TargetQuery::Class(c) => Concept::class(*c),
        TargetQuery::SubjectsOf(p) => Concept::exists(Role::Atomic(*p), Concept::Top),
        TargetQuery::ObjectsOf(p) => Concept::exists(Role::inverse(Role::Atomic(*p)), Concept::Top),
    }
}

pub fn tau_shapes(shapes: &ShapeSet) -> KnowledgeBase {
    let mut sig = Signature::default();
    let mut pending = Vec::new();
    for shape in shapes.iter() {
        let name = Concept::shape(shape.name);
        let target = tau_target(&shape.target);
        let body = tau_constr(&shape.constraint);
        name.collect_names(&mut sig);
        target.collect_names(&mut sig);
        body.collect_names(&mut sig);
        pending.push((target, body, name));
    }
    let mut kb = KnowledgeBase::new(sig);
    for (target, body, name) in pending {
        kb.push_subsumption(target, name.clone())
            .expect("signature collected above");
        kb.push_equivalence(body, name)
            .expect("signature collected above");
    }
    kb
}

fn uses_type(shapes: &ShapeSet) -> bool {
    shapes.properties().contains(&SymbolTable::TYPE)
}

/// Which mentioned nodes exist. `classes: None` leaves class names alone;
/// otherwise every class whose node is absent is emptied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presence {
    pub objects: BTreeSet<NodeId>,
    pub classes: Option<BTreeSet<NodeId>>,
}

/// Restricts `kb` to the present objects. Nominals lose absent members (an
/// empty nominal becomes `⊥`). With explicit class presence, absent classes
/// become `⊥`, present ones gain their class node as an object and, when
/// `type` is also used as a role, are expressed as `∃type.{c}`.
pub fn specialize(kb: &KnowledgeBase, presence: &Presence) -> KnowledgeBase {
    let sig = kb.signature();
    let coupled = sig.properties.contains(&SymbolTable::TYPE);
    let present_objects: BTreeSet<NodeId> = sig
        .objects
        .intersection(&presence.objects)
        .copied()
        .collect();
    let mut new_sig = Signature {
        concepts: sig.concepts.clone(),
        properties: sig.properties.clone(),
        objects: present_objects.clone(),
    };
    let mut class_rewrite: BTreeMap<NodeId, Concept> = BTreeMap::new();
    if let Some(classes) = &presence.classes {
        for name in &sig.concepts {
            let ConceptName::Class(c) = *name else {
                continue;
            };
            let present = classes.contains(&c) || presence.objects.contains(&c);
            if !present {
                class_rewrite.insert(c, Concept::bottom());
                new_sig.concepts.remove(name);
            } else {
                new_sig.objects.insert(c);
                if coupled {
                    let node = Concept::Nominal(BTreeSet::from([c]));
                    class_rewrite.insert(c, Concept::exists(Role::Atomic(SymbolTable::TYPE), node));
                    new_sig.concepts.remove(name);
                }
            }
        }
    }
    let mut rewrite = |leaf: &Concept| -> Option<Concept> {
        match leaf {
            Concept::Nominal(os) => {
                let kept: BTreeSet<NodeId> = os.intersection(&new_sig.objects).copied().collect();
                if kept.len() == os.len() {
                    None
                } else if kept.is_empty() {
                    Some(Concept::bottom())
                } else {
                    Some(Concept::Nominal(kept))
                }
            }
            Concept::Atomic(ConceptName::Class(c)) => class_rewrite.get(c).cloned(),
            _ => None,
        }
    };
    let mut axioms = Vec::new();
    let mut inconsistent = false;
    for ax in kb.axioms() {
        axioms.push(match ax {
            Axiom::Subsumption { sub, sup, origin } => Axiom::Subsumption {
                sub: sub.rewrite_leaves(&mut rewrite),
                sup: sup.rewrite_leaves(&mut rewrite),
                origin: *origin,
            },
            Axiom::ConceptAssertion { object, concept } => {
                if !new_sig.objects.contains(object) {
                    inconsistent = true;
                    continue;
                }
                Axiom::ConceptAssertion {
                    object: *object,
                    concept: concept.rewrite_leaves(&mut rewrite),
                }
            }
            Axiom::RoleAssertion {
                subject, object, ..
            } => {
                if !new_sig.objects.contains(subject) || !new_sig.objects.contains(object) {
                    inconsistent = true;
                    continue;
                }
                ax.clone()
            }
        });
    }
    if inconsistent {
        axioms.push(Axiom::Subsumption {
            sub: Concept::Top,
            sup: Concept::bottom(),
            origin: None,
        });
    }
    let mut out = KnowledgeBase::new(new_sig);
    for ax in axioms {
        out.push(ax).expect("rewriting only removes names");
    }
    out
}

/// The canonical finite model of a faithful (graph, assignment) pair: one
/// element per node, every node an object.
pub fn model_from_assignment(
    g: &RdfGraph,
    sigma: &Assignment,
    shapes: &ShapeSet,
) -> Result<Interpretation, TranslationError> {
    if g.nodes().is_empty() {
        return Err(TranslationError::EmptyGraph);
    }
    if !is_faithful(g, shapes, sigma)? {
        return Err(TranslationError::Unfaithful);
    }
    let keep_type_roles = uses_type(shapes);
    let element: BTreeMap<NodeId, Element> = g
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, v)| (*v, Element(i as u32)))
        .collect();

    let mut roles: BTreeMap<PropertyId, BTreeSet<(Element, Element)>> = shapes
        .properties()
        .into_iter()
        .map(|p| (p, BTreeSet::new()))
        .collect();
    let mut concepts: BTreeMap<ConceptName, BTreeSet<Element>> = BTreeMap::new();
    for shape in shapes.iter() {
        if let TargetQuery::Class(c) = shape.target {
            concepts.insert(ConceptName::Class(c), BTreeSet::new());
        }
    }
    for &(s, p, o) in g.triples() {
        if p == SymbolTable::TYPE {
            concepts
                .entry(ConceptName::Class(o))
                .or_default()
                .insert(element[&s]);
            if !keep_type_roles {
                continue;
            }
        }
        roles
            .entry(p)
            .or_default()
            .insert((element[&s], element[&o]));
    }
    for shape in shapes.names() {
        let members = sigma
            .iter()
            .filter(|(_, set)| set.contains(&shape))
            .map(|(v, _)| element[&v]);
        concepts.insert(ConceptName::Shape(shape), members.collect());
    }
    let size = element.len() as u32;
    let model = Interpretation::new(size, element, concepts, roles)?;

    let kb = specialize(
        &tau_shapes(shapes),
        &Presence {
            objects: g.nodes().clone(),
            classes: None,
        },
    );
    match check_model(&model, &kb)? {
        ModelCheck::Holds => Ok(model),
        ModelCheck::Fails(i) => Err(TranslationError::NotAModel(i)),
    }
}

/// Reads a (graph, assignment) pair off a model of the shape set's knowledge
/// base. Named elements become their object's node; class nodes reuse the
/// class object's element or else claim an unnamed one; remaining elements get
/// fresh `b`-numbered names. The result is checked for faithfulness.
pub fn graph_assignment_from_model(
    model: &Interpretation,
    shapes: &ShapeSet,
    symbols: &mut SymbolTable,
) -> Result<(RdfGraph, Assignment), TranslationError> {
    let present: BTreeSet<NodeId> = model.objects().keys().copied().collect();
    let kb = specialize(
        &tau_shapes(shapes),
        &Presence {
            objects: present,
            classes: None,
        },
    );
    if let ModelCheck::Fails(i) = check_model(model, &kb)? {
        return Err(TranslationError::NotAModel(i));
    }

    let mut node_of: BTreeMap<Element, NodeId> = BTreeMap::new();
    for (&o, &e) in model.objects() {
        if let Some(&other) = node_of.get(&e) {
            return Err(TranslationError::SharedElement(other, o));
        }
        node_of.insert(e, o);
    }
    let constants = shapes.nodes();
    let mut class_node: BTreeMap<NodeId, Element> = BTreeMap::new();
    for (name, members) in model.concepts() {
        let ConceptName::Class(c) = *name else {
            continue;
        };
        if members.is_empty() {
            continue;
        }
        if let Some(&e) = model.objects().get(&c) {
            class_node.insert(c, e);
            continue;
        }
        if constants.contains(&c) {
            return Err(TranslationError::NoClassNode(c));
        }
        let free = model.universe().find(|e| !node_of.contains_key(e));
        let Some(e) = free else {
            return Err(TranslationError::NoClassNode(c));
        };
        node_of.insert(e, c);
        symbols.mark_class(c);
        class_node.insert(c, e);
    }
    for e in model.universe() {
        node_of.entry(e).or_insert_with(|| symbols.fresh_node("b"));
    }

    let mut triples: BTreeSet<Triple> = BTreeSet::new();
    for (&p, pairs) in model.roles() {
        triples.extend(pairs.iter().map(|(a, b)| (node_of[a], p, node_of[b])));
    }
    for (&c, &ce) in &class_node {
        for e in &model.concepts()[&ConceptName::Class(c)] {
            triples.insert((node_of[e], SymbolTable::TYPE, node_of[&ce]));
        }
    }
    let graph = RdfGraph::new(node_of.values().copied(), triples)?;
    let mut pairs = Vec::new();
    for s in shapes.names() {
        if let Some(members) = model.concepts().get(&ConceptName::Shape(s)) {
            pairs.extend(members.iter().map(|e| (node_of[e], s)));
        }
    }
    let sigma = Assignment::from_pairs(&graph, shapes, pairs)?;
    if let Some(v) =
        crate::eval::faithfulness_violation(&graph, shapes, &sigma, Default::default())?
    {
        return Err(TranslationError::Unrealizable(format!("{v:?}")));
    }
    Ok((graph, sigma))
}

/// One choice of which optional nodes and class nodes exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub objects: BTreeSet<NodeId>,
    pub classes: BTreeSet<NodeId>,
}

/// Largest number of independent presence choices enumerated.
pub const MAX_PRESENCE_CHOICES: usize = 12;

impl Scenario {
    /// All scenarios for a shape set. Nodes listed in `Nodes` targets always
    /// exist. Order: fewest absent constants first, then fewest class nodes.
    pub fn enumerate(shapes: &ShapeSet) -> Result<Vec<Scenario>, TranslationError> {
        let mut required = BTreeSet::new();
        let mut classes = BTreeSet::new();
        for s in shapes.iter() {
            match &s.target {
                TargetQuery::Nodes(vs) => required.extend(vs.iter().copied()),
                TargetQuery::Class(c) => {
                    classes.insert(*c);
                }
                _ => {}
            }
        }
        let mut constants = BTreeSet::new();
        for s in shapes.iter() {
            s.constraint.nodes(&mut constants);
        }
        constants.extend(required.iter().copied());
        let optional: Vec<NodeId> = constants.difference(&required).copied().collect();
        let free_classes: Vec<NodeId> = classes.difference(&constants).copied().collect();
        let choices = optional.len() + free_classes.len();
        if choices > MAX_PRESENCE_CHOICES {
            return Err(TranslationError::TooManyScenarios(choices));
        }
        let mut out = Vec::new();
        for absent_mask in 0u32..(1 << optional.len()) {
            for class_mask in 0u32..(1 << free_classes.len()) {
                let mut objects = required.clone();
                objects.extend(
                    optional
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| absent_mask >> i & 1 == 0)
                        .map(|(_, v)| *v),
                );
                let present_classes = free_classes
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| class_mask >> i & 1 == 1)
                    .map(|(_, c)| *c);
                let key = (
                    absent_mask.count_ones(),
                    class_mask.count_ones(),
                    absent_mask,
                    class_mask,
                );
                out.push((
                    key,
                    Scenario {
                        objects,
                        classes: present_classes.collect(),
                    },
                ));
            }
        }
        out.sort_by_key(|(k, _)| *k);
        Ok(out.into_iter().map(|(_, s)| s).collect())
    }

    pub fn presence(&self) -> Presence {
        Presence {
            objects: self.objects.clone(),
            classes: Some(self.classes.clone()),
        }
    }

    pub fn knowledge_base(&self, kb: &KnowledgeBase) -> KnowledgeBase {
        specialize(kb, &self.presence())
    }

    /// Adds back the class names a scenario knowledge base dropped, so the
    /// model interprets every name of the full knowledge base except absent
    /// objects.
    pub fn lift_model(
        &self,
        model: &Interpretation,
        full: &KnowledgeBase,
    ) -> Result<Interpretation, DlError> {
        let mut concepts = model.concepts().clone();
        let type_pairs = model.roles().get(&SymbolTable::TYPE);
        for name in &full.signature().concepts {
            let ConceptName::Class(c) = *name else {
                continue;
            };
            if concepts.contains_key(name) {
                continue;
            }
            let members = match (model.objects().get(&c), type_pairs) {
                (Some(&ce), Some(pairs)) => pairs
                    .iter()
                    .filter(|(_, b)| *b == ce)
                    .map(|(a, _)| *a)
                    .collect(),
                _ => BTreeSet::new(),
            };
            concepts.insert(*name, members);
        }
        Interpretation::new(
            model.size(),
            model.objects().clone(),
            concepts,
            model.roles().clone(),
        )
    }
}

/// Result of [`encode_gci`]: `sub` is contained in `sup` exactly when the
/// encoded inclusion holds in every finite model of the ambient shapes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GciEncoding {
    pub shapes: ShapeSet,
    pub sub: ShapeId,
    pub sup: ShapeId,
    /// Class whose instances carry the `sub` constraint.
    pub marker: NodeId,
}

impl GciEncoding {
    /// The variant in which `sup` targets the marker class, so every marked
    /// node is forced to satisfy `sup`: this imposes the inclusion on the
    /// marked nodes instead of testing it.
    pub fn asserting(&self) -> ShapeSet {
        let shapes = self.shapes.iter().map(|s| {
            if s.name == self.sup {
                Shape::new(
                    s.name,
                    s.constraint.clone(),
                    TargetQuery::Class(self.marker),
                )
            } else {
                s.clone()
            }
        });
        ShapeSet::new(shapes).expect("same names as a valid set")
    }
}

/// Encodes `c ⊑ d` as two shapes added to `ambient`: `sub` with constraint
/// `c ∧ ≥1 type.{marker}` and `sup` with constraint `d`, both untargeted.
pub fn encode_gci(
    ambient: &ShapeSet,
    c: Constraint,
    d: Constraint,
    symbols: &mut SymbolTable,
) -> Result<GciEncoding, TranslationError> {
    let sub = symbols.fresh_shape("GciSub");
    let sup = symbols.fresh_shape("GciSup");
    let marker = symbols.fresh_class("GciClass");
    encode_gci_named(ambient, c, d, sub, sup, marker)
}

pub fn encode_gci_named(
    ambient: &ShapeSet,
    c: Constraint,
    d: Constraint,
    sub: ShapeId,
    sup: ShapeId,
    marker: NodeId,
) -> Result<GciEncoding, TranslationError> {
    for s in [sub, sup] {
        if ambient.contains(s) {
            return Err(TranslationError::NameCollision(format!("{s}")));
        }
    }
    if sub == sup {
        return Err(TranslationError::NameCollision(format!("{sub}")));
    }
    if ambient.nodes().contains(&marker) {
        return Err(TranslationError::NameCollision(format!("{marker}")));
    }
    let is_marked = Constraint::exists(
        PathExpr::Prop(SymbolTable::TYPE),
        Constraint::NodeConst(marker),
    );
    let shapes = ambient.extended([
        Shape::new(sub, Constraint::and(c, is_marked), TargetQuery::None),
        Shape::new(sup, d, TargetQuery::None),
    ])?;
    Ok(GciEncoding {
        shapes,
        sub,
        sup,
        marker,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::find_faithful;

    struct S1 {
        t: SymbolTable,
        shapes: ShapeSet,
        painting_shape: ShapeId,
        painter_shape: ShapeId,
        cubist_shape: ShapeId,
    }

    fn s1() -> S1 {
        let mut t = SymbolTable::new();
        let painting_shape = t.shape("PaintingShape");
        let painter_shape = t.shape("PainterShape");
        let cubist_shape = t.shape("CubistShape");
        let painting = t.class("Painting");
        let exhibited = PathExpr::Prop(t.property("exhibitedAt"));
        let creator = PathExpr::Prop(t.property("creator"));
        let birthdate = PathExpr::Prop(t.property("birthdate"));
        let style = PathExpr::Prop(t.property("style"));
        let cubism = t.node("cubism");
        let shapes = ShapeSet::new([
            Shape::new(
                painting_shape,
                Constraint::and(
                    Constraint::exists(exhibited, Constraint::Top),
                    Constraint::forall(creator.clone(), Constraint::ShapeRef(painter_shape)),
                ),
                TargetQuery::Class(painting),
            ),
            Shape::new(
                painter_shape,
                Constraint::and(
                    Constraint::exactly(1, birthdate, Constraint::Top),
                    Constraint::forall(
                        PathExpr::inverse(creator.clone()),
                        Constraint::ShapeRef(painting_shape),
                    ),
                ),
                TargetQuery::None,
            ),
            Shape::new(
                cubist_shape,
                Constraint::exists(
                    PathExpr::seq(PathExpr::inverse(creator), style),
                    Constraint::NodeConst(cubism),
                ),
                TargetQuery::None,
            ),
        ])
        .unwrap();
        S1 {
            t,
            shapes,
            painting_shape,
            painter_shape,
            cubist_shape,
        }
    }

    #[test]
    fn role_translation() {
        let mut t = SymbolTable::new();
        let creator = t.property("creator");
        let style = t.property("style");
        let path = PathExpr::seq(
            PathExpr::inverse(PathExpr::Prop(creator)),
            PathExpr::Prop(style),
        );
        assert_eq!(
            tau_role(&path),
            Role::compose(Role::inverse(Role::Atomic(creator)), Role::Atomic(style))
        );
    }

    #[test]
    fn target_translation() {
        let mut t = SymbolTable::new();
        let painting = t.class("Painting");
        let p = t.property("p");
        assert_eq!(
            tau_target(&TargetQuery::Class(painting)),
            Concept::class(painting)
        );
        assert_eq!(tau_target(&TargetQuery::None), Concept::bottom());
        assert_eq!(
            tau_target(&TargetQuery::ObjectsOf(p)),
            Concept::exists(Role::inverse(Role::Atomic(p)), Concept::Top)
        );
    }

    #[test]
    fn s1_knowledge_base_shape() {
        let f = s1();
        let kb = tau_shapes(&f.shapes);
        assert_eq!(kb.axioms().len(), 9);
        assert_eq!(kb.logical_axiom_count(), 6);
        let Axiom::Subsumption { sub, sup, .. } = &kb.axioms()[7] else {
            panic!()
        };
        assert_eq!(*sup, Concept::shape(f.cubist_shape));
        assert_eq!(
            *sub,
            tau_constr(&f.shapes.get(f.cubist_shape).unwrap().constraint)
        );
        assert!(tau_shapes(&ShapeSet::default()).axioms().is_empty());
    }

    #[test]
    fn bridge_round_trip_and_foreign_names() {
        let f = s1();
        let bridge = NameBridge::for_shapes(&f.shapes);
        let name = ShaclName::Shape(f.painter_shape);
        assert_eq!(
            bridge.backward(bridge.forward(name).unwrap()).unwrap(),
            name
        );
        let mut t = f.t.clone();
        let stranger = t.node("stranger");
        assert!(bridge.backward(DlName::Object(stranger)).is_err());
    }

    #[test]
    fn model_of_running_example() {
        let mut f = s1();
        let t = &mut f.t;
        let guernica = t.node("guernica");
        let painting = t.class("Painting");
        let picasso = t.node("picasso");
        let date = t.node("\"25.10.1881\"");
        let mncars = t.node("mncars");
        let museum = t.class("Museum");
        let cubism = t.node("cubism");
        let g = RdfGraph::from_triples([
            (guernica, SymbolTable::TYPE, painting),
            (guernica, t.property("creator"), picasso),
            (picasso, t.property("birthdate"), date),
            (guernica, t.property("exhibitedAt"), mncars),
            (mncars, SymbolTable::TYPE, museum),
            (guernica, t.property("style"), cubism),
        ]);
        let sigma = find_faithful(&g, &f.shapes, 1)
            .unwrap()
            .assignments
            .remove(0);
        let model = model_from_assignment(&g, &sigma, &f.shapes).unwrap();
        let e = |v: NodeId| model.objects()[&v];
        assert_eq!(
            model.concepts()[&ConceptName::Shape(f.painting_shape)],
            BTreeSet::from([e(guernica)])
        );
        assert_eq!(
            model.concepts()[&ConceptName::Shape(f.painter_shape)],
            BTreeSet::from([e(picasso)])
        );
        assert_eq!(
            model.concepts()[&ConceptName::Shape(f.cubist_shape)],
            BTreeSet::from([e(picasso)])
        );
        assert!(!model.roles().contains_key(&SymbolTable::TYPE));

        let mut t2 = f.t.clone();
        let (g2, sigma2) = graph_assignment_from_model(&model, &f.shapes, &mut t2).unwrap();
        assert_eq!(g2, g);
        assert_eq!(sigma2, sigma);
    }

    #[test]
    fn empty_graph_has_no_model() {
        let f = s1();
        let g = RdfGraph::empty();
        let sigma = Assignment::empty_for(&g);
        assert_eq!(
            model_from_assignment(&g, &sigma, &f.shapes),
            Err(TranslationError::EmptyGraph)
        );
    }

    #[test]
    fn plain_graph_without_shapes() {
        let mut t = SymbolTable::new();
        let bob = t.node("bob");
        let charlie = t.node("charlie");
        let knows = t.property("knows");
        let g = RdfGraph::from_triples([(bob, knows, charlie)]);
        let shapes = ShapeSet::default();
        let model = model_from_assignment(&g, &Assignment::empty_for(&g), &shapes).unwrap();
        assert_eq!(model.size(), 2);
        assert_eq!(model.roles()[&knows].len(), 1);
    }

    #[test]
    fn model_of_empty_kb_gives_one_node() {
        let mut t = SymbolTable::new();
        let model =
            Interpretation::new(1, BTreeMap::new(), BTreeMap::new(), BTreeMap::new()).unwrap();
        let (g, sigma) = graph_assignment_from_model(&model, &ShapeSet::default(), &mut t).unwrap();
        assert_eq!(g.nodes().len(), 1);
        assert!(sigma.iter().all(|(_, s)| s.is_empty()));
    }

    #[test]
    fn counterexample_model_built_by_hand() {
        let mut f = s1();
        let t = &mut f.t;
        let cubism = t.node("cubism");
        let creator = t.property("creator");
        let style = t.property("style");
        let birthdate = t.property("birthdate");
        let exhibited = t.property("exhibitedAt");
        // c1 = 0, p1 = 1, cubism = 2, bdate = 3, p2 = 4
        let e = Element;
        let model = Interpretation::new(
            5,
            BTreeMap::from([(cubism, e(2))]),
            BTreeMap::from([
                (ConceptName::Shape(f.painting_shape), BTreeSet::new()),
                (ConceptName::Shape(f.painter_shape), BTreeSet::from([e(4)])),
                (ConceptName::Shape(f.cubist_shape), BTreeSet::from([e(0)])),
                (
                    ConceptName::Class(t.lookup_node("Painting").unwrap()),
                    BTreeSet::new(),
                ),
            ]),
            BTreeMap::from([
                (creator, BTreeSet::from([(e(1), e(0))])),
                (style, BTreeSet::from([(e(1), e(2))])),
                (birthdate, BTreeSet::from([(e(4), e(3))])),
                (exhibited, BTreeSet::new()),
            ]),
        )
        .unwrap();
        assert!(check_model(&model, &tau_shapes(&f.shapes)).unwrap().holds());
        let (g, sigma) = graph_assignment_from_model(&model, &f.shapes, t).unwrap();
        assert_eq!(g.nodes().len(), 5);
        assert_eq!(g.triples().len(), 3);
        let b1 = t.lookup_node("b1").unwrap();
        let b4 = t.lookup_node("b4").unwrap();
        assert_eq!(sigma.get(b1).unwrap(), &BTreeSet::from([f.cubist_shape]));
        assert_eq!(sigma.get(b4).unwrap(), &BTreeSet::from([f.painter_shape]));
    }

    #[test]
    fn scenarios_order_and_count() {
        let f = s1();
        let scenarios = Scenario::enumerate(&f.shapes).unwrap();
        // cubism optional, Painting a free class.
        assert_eq!(scenarios.len(), 4);
        let cubism = f.t.lookup_node("cubism").unwrap();
        assert!(scenarios[0].objects.contains(&cubism) && scenarios[0].classes.is_empty());
        assert!(!scenarios[2].objects.contains(&cubism) && scenarios[2].classes.is_empty());
        let kb = scenarios[2].knowledge_base(&tau_shapes(&f.shapes));
        assert!(kb.signature().objects.is_empty());
        let painting = f.t.lookup_node("Painting").unwrap();
        assert!(scenarios[3].objects.is_empty());
        assert_eq!(scenarios[3].classes, BTreeSet::from([painting]));
    }

    #[test]
    fn gci_encoding_collisions() {
        let f = s1();
        let mut t = f.t.clone();
        let enc = encode_gci(&f.shapes, Constraint::Top, Constraint::Top, &mut t).unwrap();
        assert_eq!(enc.shapes.len(), 5);
        assert_eq!(t.shape_name(enc.sub), "GciSub1");
        let clash = encode_gci_named(
            &f.shapes,
            Constraint::Top,
            Constraint::Top,
            f.cubist_shape,
            enc.sup,
            enc.marker,
        );
        assert!(matches!(clash, Err(TranslationError::NameCollision(_))));
        let asserting = enc.asserting();
        assert_eq!(
            asserting.get(enc.sup).unwrap().target,
            TargetQuery::Class(enc.marker)
        );
    }
}
