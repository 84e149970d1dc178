//! The shape language: paths, constraints, target queries and shape sets.
//!
//! [`Constraint`] only has the six core variants. Derived operators live in
//! [`ExtConstraint`] and are removed by [`desugar`].

use std::collections::{BTreeMap, BTreeSet};
use std::num::NonZeroU32;

use thiserror::Error;

use crate::symbols::{NodeId, PropertyId, ShapeId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("cardinality must be at least 1 in a >= restriction")]
    ZeroCardinality,
    #[error("target node set must not be empty")]
    EmptyTargetNodes,
    #[error("shape {0} is defined more than once")]
    DuplicateShape(ShapeId),
    #[error("shape {referrer} refers to undefined shape {missing}")]
    UnresolvedRef { referrer: ShapeId, missing: ShapeId },
    #[error("triple mentions node {0} which is not in the graph")]
    DanglingTriple(NodeId),
    #[error("assignment is not total: node {0} has no entry")]
    NotTotal(NodeId),
    #[error("assignment mentions node {0} outside the graph")]
    ForeignNode(NodeId),
    #[error("assignment uses shape {0} which is not in the shape set")]
    ForeignShape(ShapeId),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PathExpr {
    Prop(PropertyId),
    Inverse(Box<PathExpr>),
    Seq(Box<PathExpr>, Box<PathExpr>),
}

impl PathExpr {
    pub fn inverse(p: PathExpr) -> PathExpr {
        PathExpr::Inverse(Box::new(p))
    }

    pub fn seq(a: PathExpr, b: PathExpr) -> PathExpr {
        PathExpr::Seq(Box::new(a), Box::new(b))
    }

    pub fn properties(&self, out: &mut BTreeSet<PropertyId>) {
        match self {
            PathExpr::Prop(p) => {
                out.insert(*p);
            }
            PathExpr::Inverse(p) => p.properties(out),
            PathExpr::Seq(a, b) => {
                a.properties(out);
                b.properties(out);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constraint {
    Top,
    ShapeRef(ShapeId),
    NodeConst(NodeId),
    And(Box<Constraint>, Box<Constraint>),
    Not(Box<Constraint>),
    AtLeast(NonZeroU32, PathExpr, Box<Constraint>),
}

impl Constraint {
    pub fn and(a: Constraint, b: Constraint) -> Constraint {
        Constraint::And(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Constraint) -> Constraint {
        Constraint::Not(Box::new(a))
    }

    pub fn at_least(n: u32, path: PathExpr, c: Constraint) -> Result<Constraint, ModelError> {
        let n = NonZeroU32::new(n).ok_or(ModelError::ZeroCardinality)?;
        Ok(Constraint::AtLeast(n, path, Box::new(c)))
    }

    /// `¬(¬a ∧ ¬b)`
    pub fn or(a: Constraint, b: Constraint) -> Constraint {
        Constraint::not(Constraint::and(Constraint::not(a), Constraint::not(b)))
    }

    /// `≤n ρ.φ` as `¬≥(n+1) ρ.φ`
    pub fn at_most(n: u32, path: PathExpr, c: Constraint) -> Constraint {
        let m = NonZeroU32::new(n + 1).expect("n + 1 is positive");
        Constraint::not(Constraint::AtLeast(m, path, Box::new(c)))
    }

    /// `=n ρ.φ` as `≤n ρ.φ ∧ ≥n ρ.φ`; `=0` is just `≤0`.
    pub fn exactly(n: u32, path: PathExpr, c: Constraint) -> Constraint {
        let upper = Constraint::at_most(n, path.clone(), c.clone());
        match NonZeroU32::new(n) {
            None => upper,
            Some(n) => Constraint::and(upper, Constraint::AtLeast(n, path, Box::new(c))),
        }
    }

    /// `∃ρ.φ` as `≥1 ρ.φ`
    pub fn exists(path: PathExpr, c: Constraint) -> Constraint {
        Constraint::AtLeast(NonZeroU32::MIN, path, Box::new(c))
    }

    /// `∀ρ.φ` as `¬≥1 ρ.¬φ`
    pub fn forall(path: PathExpr, c: Constraint) -> Constraint {
        Constraint::not(Constraint::exists(path, Constraint::not(c)))
    }

    pub fn depth(&self) -> usize {
        match self {
            Constraint::Top | Constraint::ShapeRef(_) | Constraint::NodeConst(_) => 0,
            Constraint::And(a, b) => 1 + a.depth().max(b.depth()),
            Constraint::Not(a) => 1 + a.depth(),
            Constraint::AtLeast(_, _, a) => 1 + a.depth(),
        }
    }

    pub fn nodes(&self, out: &mut BTreeSet<NodeId>) {
        match self {
            Constraint::NodeConst(v) => {
                out.insert(*v);
            }
            Constraint::Top | Constraint::ShapeRef(_) => {}
            Constraint::And(a, b) => {
                a.nodes(out);
                b.nodes(out);
            }
            Constraint::Not(a) | Constraint::AtLeast(_, _, a) => a.nodes(out),
        }
    }

    pub fn properties(&self, out: &mut BTreeSet<PropertyId>) {
        match self {
            Constraint::Top | Constraint::ShapeRef(_) | Constraint::NodeConst(_) => {}
            Constraint::And(a, b) => {
                a.properties(out);
                b.properties(out);
            }
            Constraint::Not(a) => a.properties(out),
            Constraint::AtLeast(_, p, a) => {
                p.properties(out);
                a.properties(out);
            }
        }
    }
}

/// Constraint syntax including the derived operators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtConstraint {
    Top,
    Ref(ShapeId),
    Node(NodeId),
    And(Vec<ExtConstraint>),
    Or(Vec<ExtConstraint>),
    Not(Box<ExtConstraint>),
    AtLeast(u32, PathExpr, Box<ExtConstraint>),
    AtMost(u32, PathExpr, Box<ExtConstraint>),
    Exactly(u32, PathExpr, Box<ExtConstraint>),
    Exists(PathExpr, Box<ExtConstraint>),
    Forall(PathExpr, Box<ExtConstraint>),
}

impl From<&Constraint> for ExtConstraint {
    fn from(c: &Constraint) -> Self {
        match c {
            Constraint::Top => ExtConstraint::Top,
            Constraint::ShapeRef(s) => ExtConstraint::Ref(*s),
            Constraint::NodeConst(v) => ExtConstraint::Node(*v),
            Constraint::And(a, b) => ExtConstraint::And(vec![(&**a).into(), (&**b).into()]),
            Constraint::Not(a) => ExtConstraint::Not(Box::new((&**a).into())),
            Constraint::AtLeast(n, p, a) => {
                ExtConstraint::AtLeast(n.get(), p.clone(), Box::new((&**a).into()))
            }
        }
    }
}

/// Rewrites derived operators into the core variants. An empty `and` is
/// `top`, an empty `or` is `¬top`; n-ary forms fold to the left.
pub fn desugar(e: &ExtConstraint) -> Result<Constraint, ModelError> {
    Ok(match e {
        ExtConstraint::Top => Constraint::Top,
        ExtConstraint::Ref(s) => Constraint::ShapeRef(*s),
        ExtConstraint::Node(v) => Constraint::NodeConst(*v),
        ExtConstraint::And(items) => {
            let mut it = items.iter();
            match it.next() {
                None => Constraint::Top,
                Some(first) => {
                    let mut acc = desugar(first)?;
                    for x in it {
                        acc = Constraint::and(acc, desugar(x)?);
                    }
                    acc
                }
            }
        }
        ExtConstraint::Or(items) => {
            let mut it = items.iter();
            match it.next() {
                None => Constraint::not(Constraint::Top),
                Some(first) => {
                    let mut acc = desugar(first)?;
                    for x in it {
                        acc = Constraint::or(acc, desugar(x)?);
                    }
                    acc
                }
            }
        }
        ExtConstraint::Not(a) => Constraint::not(desugar(a)?),
        ExtConstraint::AtLeast(n, p, a) => Constraint::at_least(*n, p.clone(), desugar(a)?)?,
        ExtConstraint::AtMost(n, p, a) => Constraint::at_most(*n, p.clone(), desugar(a)?),
        ExtConstraint::Exactly(n, p, a) => Constraint::exactly(*n, p.clone(), desugar(a)?),
        ExtConstraint::Exists(p, a) => Constraint::exists(p.clone(), desugar(a)?),
        ExtConstraint::Forall(p, a) => Constraint::forall(p.clone(), desugar(a)?),
    })
}

pub fn free_shape_refs(c: &Constraint) -> BTreeSet<ShapeId> {
    fn walk(c: &Constraint, out: &mut BTreeSet<ShapeId>) {
        match c {
            Constraint::ShapeRef(s) => {
                out.insert(*s);
            }
            Constraint::Top | Constraint::NodeConst(_) => {}
            Constraint::And(a, b) => {
                walk(a, out);
                walk(b, out);
            }
            Constraint::Not(a) | Constraint::AtLeast(_, _, a) => walk(a, out),
        }
    }
    let mut out = BTreeSet::new();
    walk(c, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TargetQuery {
    None,
    Nodes(BTreeSet<NodeId>),
    Class(NodeId),
    SubjectsOf(PropertyId),
    ObjectsOf(PropertyId),
}

impl TargetQuery {
    pub fn nodes(items: impl IntoIterator<Item = NodeId>) -> Result<TargetQuery, ModelError> {
        let set: BTreeSet<NodeId> = items.into_iter().collect();
        if set.is_empty() {
            return Err(ModelError::EmptyTargetNodes);
        }
        Ok(TargetQuery::Nodes(set))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub name: ShapeId,
    pub constraint: Constraint,
    pub target: TargetQuery,
}

impl Shape {
    pub fn new(name: ShapeId, constraint: Constraint, target: TargetQuery) -> Shape {
        Shape {
            name,
            constraint,
            target,
        }
    }
}

/// A closed set of shapes keyed by name.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ShapeSet {
    shapes: BTreeMap<ShapeId, Shape>,
}

impl ShapeSet {
    pub fn new(shapes: impl IntoIterator<Item = Shape>) -> Result<ShapeSet, ModelError> {
        let mut map = BTreeMap::new();
        for shape in shapes {
            if map.contains_key(&shape.name) {
                return Err(ModelError::DuplicateShape(shape.name));
            }
            map.insert(shape.name, shape);
        }
        let set = ShapeSet { shapes: map };
        set.check_closed()?;
        Ok(set)
    }

    fn check_closed(&self) -> Result<(), ModelError> {
        for shape in self.shapes.values() {
            for r in free_shape_refs(&shape.constraint) {
                if !self.shapes.contains_key(&r) {
                    return Err(ModelError::UnresolvedRef {
                        referrer: shape.name,
                        missing: r,
                    });
                }
            }
        }
        Ok(())
    }

    /// Adds shapes to a copy of this set, re-checking closure.
    pub fn extended(&self, more: impl IntoIterator<Item = Shape>) -> Result<ShapeSet, ModelError> {
        ShapeSet::new(self.shapes.values().cloned().chain(more))
    }

    pub fn get(&self, name: ShapeId) -> Option<&Shape> {
        self.shapes.get(&name)
    }

    pub fn contains(&self, name: ShapeId) -> bool {
        self.shapes.contains_key(&name)
    }

    pub fn names(&self) -> impl Iterator<Item = ShapeId> + '_ {
        self.shapes.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Shape> {
        self.shapes.values()
    }

    pub fn len(&self) -> usize {
        self.shapes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shapes.is_empty()
    }

    /// Node constants mentioned by constraints and targets.
    pub fn nodes(&self) -> BTreeSet<NodeId> {
        let mut out = BTreeSet::new();
        for s in self.iter() {
            s.constraint.nodes(&mut out);
            match &s.target {
                TargetQuery::Nodes(vs) => out.extend(vs.iter().copied()),
                TargetQuery::Class(c) => {
                    out.insert(*c);
                }
                _ => {}
            }
        }
        out
    }

    pub fn properties(&self) -> BTreeSet<PropertyId> {
        let mut out = BTreeSet::new();
        for s in self.iter() {
            s.constraint.properties(&mut out);
            match &s.target {
                TargetQuery::SubjectsOf(p) | TargetQuery::ObjectsOf(p) => {
                    out.insert(*p);
                }
                _ => {}
            }
        }
        out
    }
}
