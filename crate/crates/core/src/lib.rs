//! SHACL shape containment: validation under faithful-assignment semantics,
//! translation of shape sets into description-logic knowledge bases, and a
//! containment checker backed by a tableau and a bounded finite-model finder.

pub mod dl;
pub mod eval;
pub mod fragments;
pub mod graph;
pub mod io;
pub mod reasoner;
pub mod shapes;
pub mod symbols;
pub mod translation;

pub use graph::{Assignment, RdfGraph};
pub use shapes::{Constraint, PathExpr, Shape, ShapeSet, TargetQuery};
pub use symbols::{NodeId, PropertyId, ShapeId, SymbolTable};
