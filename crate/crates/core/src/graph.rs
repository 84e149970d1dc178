//! Data graphs and total shape assignments.

use std::collections::{BTreeMap, BTreeSet};

use crate::shapes::{ModelError, ShapeSet};
use crate::symbols::{NodeId, PropertyId, ShapeId, SymbolTable};

pub type Triple = (NodeId, PropertyId, NodeId);

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RdfGraph {
    nodes: BTreeSet<NodeId>,
    triples: BTreeSet<Triple>,
}

impl RdfGraph {
    pub fn new(
        nodes: impl IntoIterator<Item = NodeId>,
        triples: impl IntoIterator<Item = Triple>,
    ) -> Result<RdfGraph, ModelError> {
        let nodes: BTreeSet<NodeId> = nodes.into_iter().collect();
        let triples: BTreeSet<Triple> = triples.into_iter().collect();
        for &(s, _, o) in &triples {
            for v in [s, o] {
                if !nodes.contains(&v) {
                    return Err(ModelError::DanglingTriple(v));
                }
            }
        }
        Ok(RdfGraph { nodes, triples })
    }

    /// Graph whose nodes are exactly the subjects and objects of `triples`.
    pub fn from_triples(triples: impl IntoIterator<Item = Triple>) -> RdfGraph {
        let triples: BTreeSet<Triple> = triples.into_iter().collect();
        let nodes = triples.iter().flat_map(|&(s, _, o)| [s, o]).collect();
        RdfGraph { nodes, triples }
    }

    pub fn empty() -> RdfGraph {
        RdfGraph::default()
    }

    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.nodes
    }

    pub fn triples(&self) -> &BTreeSet<Triple> {
        &self.triples
    }

    pub fn contains_node(&self, v: NodeId) -> bool {
        self.nodes.contains(&v)
    }

    /// Objects of `(v, type, c)` triples.
    pub fn classes_of(&self, v: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.triples
            .range((v, SymbolTable::TYPE, NodeId::MIN)..)
            .take_while(move |t| t.0 == v && t.1 == SymbolTable::TYPE)
            .map(|t| t.2)
    }
}

/// Total map from graph nodes to shape-name sets.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment {
    map: BTreeMap<NodeId, BTreeSet<ShapeId>>,
}

impl Assignment {
    /// Checks totality against `graph` and that shape names come from `shapes`.
    pub fn new(
        graph: &RdfGraph,
        shapes: &ShapeSet,
        map: BTreeMap<NodeId, BTreeSet<ShapeId>>,
    ) -> Result<Assignment, ModelError> {
        for v in graph.nodes() {
            if !map.contains_key(v) {
                return Err(ModelError::NotTotal(*v));
            }
        }
        for (v, names) in &map {
            if !graph.contains_node(*v) {
                return Err(ModelError::ForeignNode(*v));
            }
            if let Some(s) = names.iter().find(|s| !shapes.contains(**s)) {
                return Err(ModelError::ForeignShape(*s));
            }
        }
        Ok(Assignment { map })
    }

    /// Every node of `graph` assigned the empty set.
    pub fn empty_for(graph: &RdfGraph) -> Assignment {
        Assignment {
            map: graph
                .nodes()
                .iter()
                .map(|&v| (v, BTreeSet::new()))
                .collect(),
        }
    }

    /// Builds from pairs; nodes of `graph` not mentioned get the empty set.
    pub fn from_pairs(
        graph: &RdfGraph,
        shapes: &ShapeSet,
        pairs: impl IntoIterator<Item = (NodeId, ShapeId)>,
    ) -> Result<Assignment, ModelError> {
        let mut map: BTreeMap<NodeId, BTreeSet<ShapeId>> = graph
            .nodes()
            .iter()
            .map(|&v| (v, BTreeSet::new()))
            .collect();
        for (v, s) in pairs {
            map.entry(v).or_default().insert(s);
        }
        Assignment::new(graph, shapes, map)
    }

    pub fn get(&self, v: NodeId) -> Option<&BTreeSet<ShapeId>> {
        self.map.get(&v)
    }

    pub fn has(&self, v: NodeId, s: ShapeId) -> bool {
        self.map.get(&v).is_some_and(|set| set.contains(&s))
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeId, &BTreeSet<ShapeId>)> {
        self.map.iter().map(|(v, s)| (*v, s))
    }

    pub fn domain(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.map.keys().copied()
    }

    pub fn is_total_for(&self, graph: &RdfGraph) -> bool {
        self.map.len() == graph.nodes().len()
            && graph.nodes().iter().all(|v| self.map.contains_key(v))
    }
}
