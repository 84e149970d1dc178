//! Evaluation of paths, constraints and targets; faithfulness, search for
//! faithful assignments, conformance and stratification.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::rc::Rc;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use thiserror::Error;

use crate::graph::{Assignment, RdfGraph};
use crate::shapes::{Constraint, PathExpr, ShapeSet, TargetQuery};
use crate::symbols::{NodeId, ShapeId, SymbolTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("node {0} is not in the graph")]
    NodeNotInGraph(NodeId),
    #[error("assignment is not total over the graph")]
    NotTotal,
    #[error(
        "graph too large for exhaustive search ({bits} assignment bits, cap {cap}) and the \
         fixpoint strategy is not conclusive: {reason}"
    )]
    TooLarge {
        bits: usize,
        cap: usize,
        reason: &'static str,
    },
}

pub type PathRelation = BTreeSet<(NodeId, NodeId)>;

pub fn eval_path(g: &RdfGraph, path: &PathExpr) -> PathRelation {
    match path {
        PathExpr::Prop(p) => g
            .triples()
            .iter()
            .filter(|t| t.1 == *p)
            .map(|&(s, _, o)| (s, o))
            .collect(),
        PathExpr::Inverse(inner) => eval_path(g, inner)
            .into_iter()
            .map(|(a, b)| (b, a))
            .collect(),
        PathExpr::Seq(a, b) => {
            let left = eval_path(g, a);
            let right = successor_map(&eval_path(g, b));
            let mut out = BTreeSet::new();
            for (x, m) in left {
                if let Some(ys) = right.get(&m) {
                    out.extend(ys.iter().map(|&y| (x, y)));
                }
            }
            out
        }
    }
}

fn successor_map(rel: &PathRelation) -> BTreeMap<NodeId, Vec<NodeId>> {
    let mut map: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for &(a, b) in rel {
        map.entry(a).or_default().push(b);
    }
    map
}

/// Shape membership as seen by constraint evaluation.
pub trait Membership {
    fn has(&self, v: NodeId, s: ShapeId) -> bool;
}

impl Membership for Assignment {
    fn has(&self, v: NodeId, s: ShapeId) -> bool {
        Assignment::has(self, v, s)
    }
}

impl Membership for BTreeMap<NodeId, BTreeSet<ShapeId>> {
    fn has(&self, v: NodeId, s: ShapeId) -> bool {
        self.get(&v).is_some_and(|set| set.contains(&s))
    }
}

type Successors = Rc<BTreeMap<NodeId, Vec<NodeId>>>;

/// Caches path successor lists for one graph.
pub struct Evaluator<'g> {
    graph: &'g RdfGraph,
    paths: RefCell<HashMap<PathExpr, Successors>>,
}

impl<'g> Evaluator<'g> {
    pub fn new(graph: &'g RdfGraph) -> Self {
        Evaluator {
            graph,
            paths: RefCell::new(HashMap::new()),
        }
    }

    pub fn graph(&self) -> &'g RdfGraph {
        self.graph
    }

    fn successors(&self, path: &PathExpr) -> Successors {
        if let Some(s) = self.paths.borrow().get(path) {
            return s.clone();
        }
        let s = Rc::new(successor_map(&eval_path(self.graph, path)));
        self.paths.borrow_mut().insert(path.clone(), s.clone());
        s
    }

    /// Evaluates `c` at `v` without checking that `v` is a graph node.
    pub fn constraint<M: Membership + ?Sized>(&self, sigma: &M, v: NodeId, c: &Constraint) -> bool {
        match c {
            Constraint::Top => true,
            Constraint::ShapeRef(s) => sigma.has(v, *s),
            Constraint::NodeConst(w) => v == *w,
            Constraint::And(a, b) => self.constraint(sigma, v, a) && self.constraint(sigma, v, b),
            Constraint::Not(a) => !self.constraint(sigma, v, a),
            Constraint::AtLeast(n, path, inner) => {
                let succ = self.successors(path);
                let Some(ys) = succ.get(&v) else { return false };
                let need = n.get() as usize;
                if ys.len() < need {
                    return false;
                }
                let mut count = 0;
                for &y in ys {
                    if self.constraint(sigma, y, inner) {
                        count += 1;
                        if count >= need {
                            return true;
                        }
                    }
                }
                false
            }
        }
    }
}

pub fn eval_constraint(
    g: &RdfGraph,
    sigma: &Assignment,
    v: NodeId,
    c: &Constraint,
) -> Result<bool, EvalError> {
    if !g.contains_node(v) {
        return Err(EvalError::NodeNotInGraph(v));
    }
    Ok(Evaluator::new(g).constraint(sigma, v, c))
}

/// Target nodes; `Nodes` targets are returned even when absent from the graph.
pub fn eval_target(g: &RdfGraph, q: &TargetQuery) -> BTreeSet<NodeId> {
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

/// Which reading of the faithfulness definition to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Semantics {
    /// Target nodes must exist in the graph and carry the shape.
    #[default]
    Corrected,
    /// Only target nodes that exist in the graph are checked.
    Original,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// An enumerated target node is not a graph node.
    MissingTarget { shape: ShapeId, node: NodeId },
    /// A target node lacks the shape in the assignment.
    UnassignedTarget { shape: ShapeId, node: NodeId },
    /// Assigned membership disagrees with the constraint's value.
    Mismatch {
        shape: ShapeId,
        node: NodeId,
        assigned: bool,
    },
}

pub fn faithfulness_violation(
    g: &RdfGraph,
    shapes: &ShapeSet,
    sigma: &Assignment,
    semantics: Semantics,
) -> Result<Option<Violation>, EvalError> {
    if !sigma.is_total_for(g) {
        return Err(EvalError::NotTotal);
    }
    let ev = Evaluator::new(g);
    Ok(violation_with(&ev, shapes, sigma, semantics))
}

fn violation_with<M: Membership + ?Sized>(
    ev: &Evaluator<'_>,
    shapes: &ShapeSet,
    sigma: &M,
    semantics: Semantics,
) -> Option<Violation> {
    let g = ev.graph();
    for shape in shapes.iter() {
        for node in eval_target(g, &shape.target) {
            if !g.contains_node(node) {
                if semantics == Semantics::Corrected {
                    return Some(Violation::MissingTarget {
                        shape: shape.name,
                        node,
                    });
                }
                continue;
            }
            if !sigma.has(node, shape.name) {
                return Some(Violation::UnassignedTarget {
                    shape: shape.name,
                    node,
                });
            }
        }
    }
    for &node in g.nodes() {
        for shape in shapes.iter() {
            let assigned = sigma.has(node, shape.name);
            if assigned != ev.constraint(sigma, node, &shape.constraint) {
                return Some(Violation::Mismatch {
                    shape: shape.name,
                    node,
                    assigned,
                });
            }
        }
    }
    None
}

pub fn is_faithful(g: &RdfGraph, shapes: &ShapeSet, sigma: &Assignment) -> Result<bool, EvalError> {
    is_faithful_under(g, shapes, sigma, Semantics::Corrected)
}

pub fn is_faithful_under(
    g: &RdfGraph,
    shapes: &ShapeSet,
    sigma: &Assignment,
    semantics: Semantics,
) -> Result<bool, EvalError> {
    Ok(faithfulness_violation(g, shapes, sigma, semantics)?.is_none())
}

/// Enumerated target nodes that are not graph nodes, per shape.
pub fn missing_targets(g: &RdfGraph, shapes: &ShapeSet) -> Vec<(ShapeId, NodeId)> {
    let mut out = Vec::new();
    for shape in shapes.iter() {
        if let TargetQuery::Nodes(vs) = &shape.target {
            out.extend(
                vs.iter()
                    .filter(|v| !g.contains_node(**v))
                    .map(|v| (shape.name, *v)),
            );
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Exhaustive,
    StratifiedFixpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest `|Names(S)|·|V_G|` searched exhaustively.
    pub exhaustive_cap: usize,
    pub semantics: Semantics,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            exhaustive_cap: 20,
            semantics: Semantics::Corrected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaithfulSearch {
    pub assignments: Vec<Assignment>,
    pub strategy: Strategy,
}

pub fn find_faithful(
    g: &RdfGraph,
    shapes: &ShapeSet,
    limit: usize,
) -> Result<FaithfulSearch, EvalError> {
    find_faithful_with(g, shapes, limit, &SearchConfig::default())
}

pub fn find_faithful_with(
    g: &RdfGraph,
    shapes: &ShapeSet,
    limit: usize,
    config: &SearchConfig,
) -> Result<FaithfulSearch, EvalError> {
    let bits = shapes.len() * g.nodes().len();
    if bits <= config.exhaustive_cap {
        let assignments = exhaustive(g, shapes, limit, config.semantics);
        return Ok(FaithfulSearch {
            assignments,
            strategy: Strategy::Exhaustive,
        });
    }
    let assignments =
        fixpoint(g, shapes, config.semantics).map_err(|reason| EvalError::TooLarge {
            bits,
            cap: config.exhaustive_cap,
            reason,
        })?;
    Ok(FaithfulSearch {
        assignments: assignments.into_iter().take(limit).collect(),
        strategy: Strategy::StratifiedFixpoint,
    })
}

pub fn conforms(g: &RdfGraph, shapes: &ShapeSet) -> Result<bool, EvalError> {
    conforms_with(g, shapes, &SearchConfig::default())
}

pub fn conforms_with(
    g: &RdfGraph,
    shapes: &ShapeSet,
    config: &SearchConfig,
) -> Result<bool, EvalError> {
    Ok(!find_faithful_with(g, shapes, 1, config)?
        .assignments
        .is_empty())
}

/// Assignment packed into a bit vector; bit `i` with `i = node·|S| + shape`,
/// the first bit being the most significant in enumeration order.
struct Packed<'a> {
    node_pos: &'a HashMap<NodeId, usize>,
    shape_pos: &'a HashMap<ShapeId, usize>,
    n_shapes: usize,
    k: usize,
    bits: u64,
}

impl Packed<'_> {
    fn bit(&self, v: usize, s: usize) -> bool {
        let i = v * self.n_shapes + s;
        (self.bits >> (self.k - 1 - i)) & 1 == 1
    }
}

impl Membership for Packed<'_> {
    fn has(&self, v: NodeId, s: ShapeId) -> bool {
        match (self.node_pos.get(&v), self.shape_pos.get(&s)) {
            (Some(&v), Some(&s)) => self.bit(v, s),
            _ => false,
        }
    }
}

fn exhaustive(
    g: &RdfGraph,
    shapes: &ShapeSet,
    limit: usize,
    semantics: Semantics,
) -> Vec<Assignment> {
    let nodes: Vec<NodeId> = g.nodes().iter().copied().collect();
    let names: Vec<ShapeId> = shapes.names().collect();
    let node_pos: HashMap<NodeId, usize> = nodes.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let shape_pos: HashMap<ShapeId, usize> =
        names.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let k = nodes.len() * names.len();
    let ev = Evaluator::new(g);
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    for bits in 0..(1u64 << k) {
        let packed = Packed {
            node_pos: &node_pos,
            shape_pos: &shape_pos,
            n_shapes: names.len(),
            k,
            bits,
        };
        if violation_with(&ev, shapes, &packed, semantics).is_none() {
            let map = nodes
                .iter()
                .enumerate()
                .map(|(vi, &v)| {
                    let set = names
                        .iter()
                        .enumerate()
                        .filter(|(si, _)| packed.bit(vi, *si))
                        .map(|(_, s)| *s);
                    (v, set.collect())
                })
                .collect();
            out.push(Assignment::new(g, shapes, map).expect("packed assignment is total"));
            if out.len() >= limit {
                break;
            }
        }
    }
    out
}

type Working = BTreeMap<NodeId, BTreeSet<ShapeId>>;

/// Greatest fixpoint per stratum, bottom-up. Returns the assignment if it is
/// faithful, an empty list if no faithful assignment can exist, or a reason
/// why the result is not conclusive.
fn fixpoint(
    g: &RdfGraph,
    shapes: &ShapeSet,
    semantics: Semantics,
) -> Result<Vec<Assignment>, &'static str> {
    let report = check_stratified(shapes);
    if !report.ok {
        return Err("shape set is not stratified");
    }
    let ev = Evaluator::new(g);
    let mut sigma: Working = g.nodes().iter().map(|&v| (v, BTreeSet::new())).collect();
    let mut all_unique = true;
    for stratum in strata(shapes) {
        let greatest = iterate_stratum(&ev, shapes, &stratum, &sigma, true);
        let least = iterate_stratum(&ev, shapes, &stratum, &sigma, false);
        all_unique &= greatest == least;
        sigma = greatest;
    }
    let has_negative = report.edges.iter().any(|e| e.2 == Polarity::Negative);
    if violation_with(&ev, shapes, &sigma, semantics).is_none() {
        let a = Assignment::new(g, shapes, sigma).expect("fixpoint assignment is total");
        return Ok(vec![a]);
    }
    if all_unique || !has_negative {
        Ok(Vec::new())
    } else {
        Err("fixpoint assignment violates a target and other fixpoints were not explored")
    }
}

fn iterate_stratum(
    ev: &Evaluator<'_>,
    shapes: &ShapeSet,
    stratum: &[ShapeId],
    base: &Working,
    from_top: bool,
) -> Working {
    let mut cur = base.clone();
    for set in cur.values_mut() {
        for s in stratum {
            if from_top {
                set.insert(*s);
            } else {
                set.remove(s);
            }
        }
    }
    // Positive strata are monotone, so this terminates in at most
    // |V_G|·|stratum| + 1 rounds.
    let rounds = ev.graph().nodes().len() * stratum.len() + 2;
    for _ in 0..rounds {
        let mut next = cur.clone();
        for (&v, set) in next.iter_mut() {
            for &s in stratum {
                let shape = shapes.get(s).expect("stratum names come from the set");
                if ev.constraint(&cur, v, &shape.constraint) {
                    set.insert(s);
                } else {
                    set.remove(&s);
                }
            }
        }
        if next == cur {
            break;
        }
        cur = next;
    }
    cur
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratificationReport {
    pub ok: bool,
    /// `(s, s', polarity)` whenever `s'` occurs in the constraint of `s`.
    pub edges: Vec<(ShapeId, ShapeId, Polarity)>,
    pub offending_cycle: Option<Vec<ShapeId>>,
}

fn dependency_edges(shapes: &ShapeSet) -> Vec<(ShapeId, ShapeId, Polarity)> {
    fn walk(
        c: &Constraint,
        negated: bool,
        from: ShapeId,
        out: &mut BTreeSet<(ShapeId, ShapeId, Polarity)>,
    ) {
        match c {
            Constraint::ShapeRef(s) => {
                let pol = if negated {
                    Polarity::Negative
                } else {
                    Polarity::Positive
                };
                out.insert((from, *s, pol));
            }
            Constraint::Top | Constraint::NodeConst(_) => {}
            Constraint::And(a, b) => {
                walk(a, negated, from, out);
                walk(b, negated, from, out);
            }
            Constraint::Not(a) => walk(a, !negated, from, out),
            Constraint::AtLeast(_, _, a) => walk(a, negated, from, out),
        }
    }
    let mut out = BTreeSet::new();
    for shape in shapes.iter() {
        walk(&shape.constraint, false, shape.name, &mut out);
    }
    out.into_iter().collect()
}

fn dependency_graph(
    shapes: &ShapeSet,
) -> (DiGraph<ShapeId, Polarity>, HashMap<ShapeId, NodeIndex>) {
    let mut graph = DiGraph::new();
    let mut index = HashMap::new();
    for s in shapes.names() {
        index.insert(s, graph.add_node(s));
    }
    for (a, b, pol) in dependency_edges(shapes) {
        graph.add_edge(index[&a], index[&b], pol);
    }
    (graph, index)
}

/// Strongly connected components in dependency order (referenced shapes first).
fn strata(shapes: &ShapeSet) -> Vec<Vec<ShapeId>> {
    let (graph, _) = dependency_graph(shapes);
    tarjan_scc(&graph)
        .into_iter()
        .map(|scc| {
            let mut names: Vec<ShapeId> = scc.into_iter().map(|i| graph[i]).collect();
            names.sort();
            names
        })
        .collect()
}

pub fn check_stratified(shapes: &ShapeSet) -> StratificationReport {
    let edges = dependency_edges(shapes);
    let (graph, index) = dependency_graph(shapes);
    let mut component = HashMap::new();
    for (ci, scc) in tarjan_scc(&graph).into_iter().enumerate() {
        for i in scc {
            component.insert(graph[i], ci);
        }
    }
    for &(a, b, pol) in &edges {
        if pol == Polarity::Negative && component[&a] == component[&b] {
            let cycle = cycle_through(&graph, &index, &component, a, b);
            return StratificationReport {
                ok: false,
                edges,
                offending_cycle: Some(cycle),
            };
        }
    }
    StratificationReport {
        ok: true,
        edges,
        offending_cycle: None,
    }
}

/// A cycle starting with the edge `a → b` and returning to `a` inside one
/// component.
fn cycle_through(
    graph: &DiGraph<ShapeId, Polarity>,
    index: &HashMap<ShapeId, NodeIndex>,
    component: &HashMap<ShapeId, usize>,
    a: ShapeId,
    b: ShapeId,
) -> Vec<ShapeId> {
    if a == b {
        return vec![a];
    }
    let comp = component[&a];
    let mut prev: HashMap<ShapeId, ShapeId> = HashMap::new();
    let mut queue = VecDeque::from([b]);
    let mut seen = BTreeSet::from([b]);
    while let Some(x) = queue.pop_front() {
        if x == a {
            break;
        }
        let mut next: Vec<ShapeId> = graph.neighbors(index[&x]).map(|i| graph[i]).collect();
        next.sort();
        for y in next {
            if component[&y] == comp && seen.insert(y) {
                prev.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    // Walk back from `a` to `b`, then reverse to get b → … → a.
    let mut back = vec![a];
    let mut cur = a;
    while cur != b {
        cur = prev[&cur];
        back.push(cur);
    }
    back.reverse();
    back.pop();
    let mut cycle = vec![a];
    cycle.extend(back);
    cycle
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::Shape;

    struct Fixture {
        t: SymbolTable,
    }

    impl Fixture {
        fn new() -> Self {
            Fixture {
                t: SymbolTable::new(),
            }
        }
        fn n(&mut self, s: &str) -> NodeId {
            self.t.node(s)
        }
        fn p(&mut self, s: &str) -> PathExpr {
            PathExpr::Prop(self.t.property(s))
        }
    }

    #[test]
    fn composed_path_join() {
        let mut f = Fixture::new();
        let (a, b, c) = (f.n("a"), f.n("b"), f.n("c"));
        let p = f.t.property("p");
        let g = RdfGraph::from_triples([(a, p, b), (b, p, c)]);
        let rel = eval_path(&g, &PathExpr::seq(PathExpr::Prop(p), PathExpr::Prop(p)));
        assert_eq!(rel, BTreeSet::from([(a, c)]));
        let q = f.p("q");
        assert!(eval_path(&g, &q).is_empty());
    }

    #[test]
    fn local_self_loop_has_two_faithful_assignments() {
        let mut f = Fixture::new();
        let b1 = f.n("b1");
        let knows = f.p("knows");
        let local = f.t.shape("Local");
        let shapes = ShapeSet::new([Shape::new(
            local,
            Constraint::forall(knows.clone(), Constraint::ShapeRef(local)),
            TargetQuery::None,
        )])
        .unwrap();
        let PathExpr::Prop(kp) = knows else {
            unreachable!()
        };
        let g = RdfGraph::from_triples([(b1, kp, b1)]);
        let found = find_faithful(&g, &shapes, 10).unwrap();
        assert_eq!(found.strategy, Strategy::Exhaustive);
        assert_eq!(found.assignments.len(), 2);
        assert!(!found.assignments[0].has(b1, local));
        assert!(found.assignments[1].has(b1, local));
        let report = check_stratified(&shapes);
        assert!(report.ok);
        assert_eq!(report.edges, vec![(local, local, Polarity::Positive)]);
    }

    #[test]
    fn negative_self_loop_is_not_stratified() {
        let mut f = Fixture::new();
        let a = f.t.shape("A");
        let shapes = ShapeSet::new([Shape::new(
            a,
            Constraint::not(Constraint::ShapeRef(a)),
            TargetQuery::None,
        )])
        .unwrap();
        let report = check_stratified(&shapes);
        assert!(!report.ok);
        assert_eq!(report.offending_cycle, Some(vec![a]));
    }

    #[test]
    fn negative_cycle_of_two() {
        let mut f = Fixture::new();
        let a = f.t.shape("A");
        let b = f.t.shape("B");
        let shapes = ShapeSet::new([
            Shape::new(a, Constraint::ShapeRef(b), TargetQuery::None),
            Shape::new(
                b,
                Constraint::not(Constraint::ShapeRef(a)),
                TargetQuery::None,
            ),
        ])
        .unwrap();
        let report = check_stratified(&shapes);
        assert!(!report.ok);
        assert_eq!(report.offending_cycle, Some(vec![b, a]));
    }

    #[test]
    fn missing_target_does_not_conform() {
        let mut f = Fixture::new();
        let (bob, charlie, alice) = (f.n("bob"), f.n("charlie"), f.n("alice"));
        let knows = f.t.property("knows");
        let my = f.t.shape("MyShape");
        let shapes = ShapeSet::new([Shape::new(
            my,
            Constraint::at_least(1, PathExpr::Prop(knows), Constraint::NodeConst(charlie)).unwrap(),
            TargetQuery::nodes([alice]).unwrap(),
        )])
        .unwrap();
        let g = RdfGraph::from_triples([(bob, knows, charlie)]);
        assert_eq!(
            eval_target(&g, &shapes.get(my).unwrap().target),
            BTreeSet::from([alice])
        );
        let sigma = Assignment::from_pairs(&g, &shapes, [(bob, my)]).unwrap();
        assert!(!is_faithful(&g, &shapes, &sigma).unwrap());
        assert!(is_faithful_under(&g, &shapes, &sigma, Semantics::Original).unwrap());
        assert!(!conforms(&g, &shapes).unwrap());
        let original = SearchConfig {
            semantics: Semantics::Original,
            ..SearchConfig::default()
        };
        assert!(conforms_with(&g, &shapes, &original).unwrap());
        assert_eq!(missing_targets(&g, &shapes), vec![(my, alice)]);
    }

    #[test]
    fn empty_cases() {
        let g = RdfGraph::empty();
        let shapes = ShapeSet::default();
        let sigma = Assignment::empty_for(&g);
        assert!(is_faithful(&g, &shapes, &sigma).unwrap());
        let found = find_faithful(&g, &shapes, 1).unwrap();
        assert_eq!(found.assignments, vec![Assignment::empty_for(&g)]);
    }

    #[test]
    fn node_outside_graph_is_rejected() {
        let mut f = Fixture::new();
        let a = f.n("a");
        let g = RdfGraph::empty();
        let sigma = Assignment::empty_for(&g);
        assert_eq!(
            eval_constraint(&g, &sigma, a, &Constraint::Top),
            Err(EvalError::NodeNotInGraph(a))
        );
    }

    #[test]
    fn non_total_assignment_is_rejected() {
        let mut f = Fixture::new();
        let a = f.n("a");
        let g = RdfGraph::new([a], []).unwrap();
        let sigma = Assignment::empty_for(&RdfGraph::empty());
        assert_eq!(
            is_faithful(&g, &ShapeSet::default(), &sigma),
            Err(EvalError::NotTotal)
        );
    }

    #[test]
    fn unstratified_and_large_is_too_large() {
        let mut f = Fixture::new();
        let a = f.t.shape("A");
        let shapes = ShapeSet::new([Shape::new(
            a,
            Constraint::not(Constraint::ShapeRef(a)),
            TargetQuery::None,
        )])
        .unwrap();
        let nodes: Vec<NodeId> = (0..21).map(|i| f.n(&format!("v{i}"))).collect();
        let g = RdfGraph::new(nodes, []).unwrap();
        assert!(matches!(
            find_faithful(&g, &shapes, 1),
            Err(EvalError::TooLarge { .. })
        ));
    }
}
