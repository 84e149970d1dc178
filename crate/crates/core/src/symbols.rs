//! Interned names for nodes, classes, properties and shapes.
//!
//! Each partition has its own id type. Ids order by interning index, which is
//! the canonical order used for every set iteration in the crate.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

macro_rules! id_type {
    ($name:ident, $tag:literal) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(u32);

        impl $name {
            pub const MIN: $name = $name(0);

            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($tag, "{}"), self.0)
            }
        }
    };
}

id_type!(NodeId, "n");
id_type!(PropertyId, "p");
id_type!(ShapeId, "s");

#[derive(Debug, Clone, Default)]
struct Interner {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl Interner {
    fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = u32::try_from(self.names.len()).expect("symbol table overflow");
        self.names.push(name.to_owned());
        self.index.insert(name.to_owned(), id);
        id
    }

    fn get(&self, name: &str) -> Option<u32> {
        self.index.get(name).copied()
    }

    fn name(&self, id: u32) -> &str {
        &self.names[id as usize]
    }

    fn fresh(&mut self, prefix: &str) -> u32 {
        let mut i = 1usize;
        loop {
            let candidate = format!("{prefix}{i}");
            if self.get(&candidate).is_none() {
                return self.intern(&candidate);
            }
            i += 1;
        }
    }
}

/// Name side table. Interning needs `&mut`, lookups only `&`.
#[derive(Debug, Clone)]
pub struct SymbolTable {
    nodes: Interner,
    classes: BTreeSet<NodeId>,
    properties: Interner,
    shapes: Interner,
}

impl Default for SymbolTable {
    fn default() -> Self {
        Self::new()
    }
}

impl SymbolTable {
    /// The reserved `type` property, always interned first.
    pub const TYPE: PropertyId = PropertyId(0);

    pub fn new() -> Self {
        let mut properties = Interner::default();
        properties.intern("type");
        SymbolTable {
            nodes: Interner::default(),
            classes: BTreeSet::new(),
            properties,
            shapes: Interner::default(),
        }
    }

    pub fn node(&mut self, name: &str) -> NodeId {
        NodeId(self.nodes.intern(name))
    }

    /// Interns a node and marks it as a class.
    pub fn class(&mut self, name: &str) -> NodeId {
        let id = self.node(name);
        self.classes.insert(id);
        id
    }

    pub fn mark_class(&mut self, id: NodeId) {
        self.classes.insert(id);
    }

    pub fn property(&mut self, name: &str) -> PropertyId {
        PropertyId(self.properties.intern(name))
    }

    pub fn shape(&mut self, name: &str) -> ShapeId {
        ShapeId(self.shapes.intern(name))
    }

    /// A node name of the form `{prefix}{k}` that is not yet taken.
    pub fn fresh_node(&mut self, prefix: &str) -> NodeId {
        NodeId(self.nodes.fresh(prefix))
    }

    pub fn fresh_class(&mut self, prefix: &str) -> NodeId {
        let id = self.fresh_node(prefix);
        self.classes.insert(id);
        id
    }

    pub fn fresh_shape(&mut self, prefix: &str) -> ShapeId {
        ShapeId(self.shapes.fresh(prefix))
    }

    pub fn lookup_node(&self, name: &str) -> Option<NodeId> {
        self.nodes.get(name).map(NodeId)
    }

    pub fn lookup_property(&self, name: &str) -> Option<PropertyId> {
        self.properties.get(name).map(PropertyId)
    }

    pub fn lookup_shape(&self, name: &str) -> Option<ShapeId> {
        self.shapes.get(name).map(ShapeId)
    }

    pub fn is_class(&self, id: NodeId) -> bool {
        self.classes.contains(&id)
    }

    pub fn node_name(&self, id: NodeId) -> &str {
        self.nodes.name(id.0)
    }

    pub fn property_name(&self, id: PropertyId) -> &str {
        self.properties.name(id.0)
    }

    pub fn shape_name(&self, id: ShapeId) -> &str {
        self.shapes.name(id.0)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.names.len()
    }

    pub fn property_count(&self) -> usize {
        self.properties.names.len()
    }

    pub fn shape_count(&self) -> usize {
        self.shapes.names.len()
    }
}
