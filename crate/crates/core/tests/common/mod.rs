//! Test support shared by the integration suites and the acceptance target:
//! a deliberately naive evaluator written without the library's evaluator,
//! an exhaustive containment oracle over tiny graphs, and seeded generators.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::rngs::StdRng;
use rand::Rng;

use shaclcheck_core::shapes::{Constraint, PathExpr, Shape, ShapeSet, TargetQuery};
use shaclcheck_core::{Assignment, NodeId, PropertyId, RdfGraph, ShapeId, SymbolTable};

pub fn path_pairs(g: &RdfGraph, path: &PathExpr) -> BTreeSet<(NodeId, NodeId)> {
    match path {
        PathExpr::Prop(p) => g
            .triples()
            .iter()
            .filter(|t| t.1 == *p)
            .map(|t| (t.0, t.2))
            .collect(),
        PathExpr::Inverse(inner) => path_pairs(g, inner)
            .into_iter()
            .map(|(a, b)| (b, a))
            .collect(),
        PathExpr::Seq(a, b) => {
            let left = path_pairs(g, a);
            let right = path_pairs(g, b);
            let mut out = BTreeSet::new();
            for (x, y) in &left {
                for (y2, z) in &right {
                    if y == y2 {
                        out.insert((*x, *z));
                    }
                }
            }
            out
        }
    }
}

pub fn holds(g: &RdfGraph, sigma: &Assignment, v: NodeId, c: &Constraint) -> bool {
    match c {
        Constraint::Top => true,
        Constraint::ShapeRef(s) => sigma.has(v, *s),
        Constraint::NodeConst(n) => v == *n,
        Constraint::And(a, b) => holds(g, sigma, v, a) && holds(g, sigma, v, b),
        Constraint::Not(a) => !holds(g, sigma, v, a),
        Constraint::AtLeast(n, path, f) => {
            let count = path_pairs(g, path)
                .into_iter()
                .filter(|(x, y)| *x == v && holds(g, sigma, *y, f))
                .count();
            count >= n.get() as usize
        }
    }
}

pub fn targets(g: &RdfGraph, q: &TargetQuery) -> BTreeSet<NodeId> {
    match q {
        TargetQuery::None => BTreeSet::new(),
        TargetQuery::Nodes(vs) => vs.clone(),
        TargetQuery::Class(c) => g
            .triples()
            .iter()
            .filter(|t| t.1 == SymbolTable::TYPE && t.2 == *c)
            .map(|t| t.0)
            .collect(),
        TargetQuery::SubjectsOf(p) => g
            .triples()
            .iter()
            .filter(|t| t.1 == *p)
            .map(|t| t.0)
            .collect(),
        TargetQuery::ObjectsOf(p) => g
            .triples()
            .iter()
            .filter(|t| t.1 == *p)
            .map(|t| t.2)
            .collect(),
    }
}

/// Every target node is in the graph and carries its shape, and every node
/// carries exactly the shapes whose constraints it satisfies.
pub fn faithful(g: &RdfGraph, shapes: &ShapeSet, sigma: &Assignment) -> bool {
    for s in shapes.iter() {
        for t in targets(g, &s.target) {
            if !g.nodes().contains(&t) || !sigma.has(t, s.name) {
                return false;
            }
        }
    }
    g.nodes().iter().all(|&v| {
        shapes
            .iter()
            .all(|s| sigma.has(v, s.name) == holds(g, sigma, v, &s.constraint))
    })
}

/// All assignments of the graph, in bit order.
pub fn all_assignments<'a>(
    g: &'a RdfGraph,
    shapes: &'a ShapeSet,
) -> impl Iterator<Item = Assignment> + 'a {
    let nodes: Vec<NodeId> = g.nodes().iter().copied().collect();
    let names: Vec<ShapeId> = shapes.names().collect();
    let bits = nodes.len() * names.len();
    assert!(bits < 20, "oracle asked to enumerate 2^{bits} assignments");
    (0u32..1 << bits).map(move |mask| {
        let mut map: BTreeMap<NodeId, BTreeSet<ShapeId>> =
            nodes.iter().map(|v| (*v, BTreeSet::new())).collect();
        for (i, v) in nodes.iter().enumerate() {
            for (j, s) in names.iter().enumerate() {
                if mask >> (i * names.len() + j) & 1 == 1 {
                    map.get_mut(v).unwrap().insert(*s);
                }
            }
        }
        Assignment::new(g, shapes, map).expect("total by construction")
    })
}

pub fn faithful_assignments(g: &RdfGraph, shapes: &ShapeSet) -> Vec<Assignment> {
    all_assignments(g, shapes)
        .filter(|a| faithful(g, shapes, a))
        .collect()
}

/// A graph over at most `max_nodes` nodes using only `props`, with a faithful
/// assignment putting some node in `sub` but not `sup`. Nodes are drawn from
/// the shape constants plus anonymous `o1`, `o2`, ...
pub fn oracle_counterexample(
    shapes: &ShapeSet,
    sub: ShapeId,
    sup: ShapeId,
    props: &[PropertyId],
    max_nodes: usize,
    symbols: &mut SymbolTable,
) -> Option<(RdfGraph, Assignment, NodeId)> {
    let constants: Vec<NodeId> = shapes.nodes().into_iter().collect();
    let fresh: Vec<NodeId> = (1..=max_nodes)
        .map(|i| symbols.node(&format!("o{i}")))
        .collect();
    for const_mask in 0u32..1 << constants.len() {
        let chosen: Vec<NodeId> = constants
            .iter()
            .enumerate()
            .filter(|(i, _)| const_mask >> i & 1 == 1)
            .map(|(_, c)| *c)
            .collect();
        if chosen.len() > max_nodes {
            continue;
        }
        for extra in 0..=max_nodes - chosen.len() {
            let nodes: Vec<NodeId> = chosen
                .iter()
                .copied()
                .chain(fresh[..extra].iter().copied())
                .collect();
            if nodes.is_empty() {
                continue;
            }
            let mut slots = Vec::new();
            for &p in props {
                for &a in &nodes {
                    for &b in &nodes {
                        slots.push((a, p, b));
                    }
                }
            }
            for edge_mask in 0u64..1 << slots.len() {
                let triples = slots
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| edge_mask >> i & 1 == 1)
                    .map(|(_, t)| *t);
                let g = RdfGraph::new(nodes.iter().copied(), triples).expect("nodes cover triples");
                let found = all_assignments(&g, shapes).find_map(|sigma| {
                    let w = g
                        .nodes()
                        .iter()
                        .copied()
                        .find(|v| sigma.has(*v, sub) && !sigma.has(*v, sup))?;
                    faithful(&g, shapes, &sigma).then_some((sigma, w))
                });
                if let Some((sigma, w)) = found {
                    return Some((g, sigma, w));
                }
            }
        }
    }
    None
}

/// Vocabulary a generated shape set draws from.
pub struct Vocabulary {
    pub shapes: Vec<ShapeId>,
    pub props: Vec<PropertyId>,
    pub constants: Vec<NodeId>,
    pub class: Option<NodeId>,
    /// Allow inverse and sequence paths and objects-of targets.
    pub complex_paths: bool,
}

impl Vocabulary {
    /// Two shapes, one property, one constant, no classes.
    pub fn no_inverse(symbols: &mut SymbolTable) -> Vocabulary {
        Vocabulary {
            shapes: vec![symbols.shape("S0"), symbols.shape("S1")],
            props: vec![symbols.property("p")],
            constants: vec![symbols.node("c")],
            class: None,
            complex_paths: false,
        }
    }

    /// Two shapes, two properties, one constant, one class.
    pub fn general(symbols: &mut SymbolTable) -> Vocabulary {
        Vocabulary {
            shapes: vec![symbols.shape("S0"), symbols.shape("S1")],
            props: vec![symbols.property("p"), symbols.property("q")],
            constants: vec![symbols.node("c")],
            class: Some(symbols.class("C")),
            complex_paths: true,
        }
    }

    fn path(&self, rng: &mut StdRng, depth: u32) -> PathExpr {
        let p = PathExpr::Prop(self.props[rng.gen_range(0..self.props.len())]);
        if !self.complex_paths || depth == 0 {
            return p;
        }
        match rng.gen_range(0..4) {
            0 => PathExpr::inverse(self.path(rng, depth - 1)),
            1 => PathExpr::seq(self.path(rng, depth - 1), self.path(rng, depth - 1)),
            _ => p,
        }
    }

    pub fn constraint(&self, rng: &mut StdRng, depth: u32) -> Constraint {
        let leaf = depth == 0 || rng.gen_bool(0.3);
        if leaf {
            return match rng.gen_range(0..3) {
                0 => Constraint::Top,
                1 => Constraint::NodeConst(self.constants[rng.gen_range(0..self.constants.len())]),
                _ => Constraint::ShapeRef(self.shapes[rng.gen_range(0..self.shapes.len())]),
            };
        }
        match rng.gen_range(0..4) {
            0 => Constraint::and(
                self.constraint(rng, depth - 1),
                self.constraint(rng, depth - 1),
            ),
            1 => Constraint::not(self.constraint(rng, depth - 1)),
            _ => {
                let n = rng.gen_range(1..=2);
                Constraint::at_least(n, self.path(rng, 1), self.constraint(rng, depth - 1))
                    .expect("n > 0")
            }
        }
    }

    pub fn target(&self, rng: &mut StdRng) -> TargetQuery {
        let p = self.props[rng.gen_range(0..self.props.len())];
        match rng.gen_range(0..10) {
            0..=4 => TargetQuery::None,
            5 | 6 => TargetQuery::nodes([self.constants[0]]).expect("non-empty"),
            7 => TargetQuery::SubjectsOf(p),
            8 if self.complex_paths => TargetQuery::ObjectsOf(p),
            9 if self.class.is_some() => TargetQuery::Class(self.class.unwrap()),
            _ => TargetQuery::None,
        }
    }

    pub fn shape_set(&self, rng: &mut StdRng, depth: u32) -> ShapeSet {
        let shapes = self
            .shapes
            .iter()
            .map(|s| Shape::new(*s, self.constraint(rng, depth), self.target(rng)));
        ShapeSet::new(shapes).expect("closed over the vocabulary")
    }

    /// A random graph over at most `max_nodes` nodes drawn from the constant,
    /// the class node and anonymous nodes.
    pub fn graph(&self, rng: &mut StdRng, max_nodes: usize, symbols: &mut SymbolTable) -> RdfGraph {
        let mut pool: Vec<NodeId> = self.constants.clone();
        pool.extend((1..=max_nodes).map(|i| symbols.node(&format!("n{i}"))));
        let count = rng.gen_range(1..=max_nodes);
        let mut nodes = Vec::new();
        while nodes.len() < count {
            let v = pool[rng.gen_range(0..pool.len())];
            if !nodes.contains(&v) {
                nodes.push(v);
            }
        }
        let mut triples = Vec::new();
        for &a in &nodes {
            for &b in &nodes {
                for &p in &self.props {
                    if rng.gen_bool(0.3) {
                        triples.push((a, p, b));
                    }
                }
            }
        }
        let mut all = nodes.clone();
        if let Some(c) = self.class {
            if count < max_nodes && rng.gen_bool(0.3) {
                triples.push((nodes[0], SymbolTable::TYPE, c));
                all.push(c);
            }
        }
        RdfGraph::new(all, triples).expect("nodes cover triples")
    }
}
