//! Text formats: shape documents, N-Triples data, knowledge bases.

pub mod exchange;
pub mod kb;
pub mod ntriples;
pub mod shapes;

pub use exchange::{serialize_exchange, ExportError};
pub use kb::{parse_kb, serialize_kb, KbError};
pub use ntriples::{
    parse_counterexample, parse_ntriples, render_counterexample, serialize_ntriples, NtError,
};
pub use shapes::{parse_constraint, parse_shapes, serialize_shapes, ParseError, ShapeDocument};
