//! Session-type syntax and the term-level operations the checkers build on.

mod classify;
mod context;
mod parse;
mod render;
mod term;
mod unfold;

pub use classify::{fragments, is_input_guarded, is_single_input, is_single_output, Fragments};
pub use context::{decompose_input_context, InputContext, InputDecomposition, Leaf, PathStep};
pub use parse::{parse, ParseError, Position};
pub use render::render;
pub use term::{is_identifier, Annotation, Annotator, BuildError, Choices, Kind, Label, Name, SessionType, Var};
pub use unfold::{unfold, unfold_annotated};

/// Annotates every branching with a distinct fresh annotation.
pub fn decorate(s: &SessionType, annotator: &mut Annotator) -> SessionType {
    s.decorate(annotator)
}

/// Drops every annotation.
pub fn erase(s: &SessionType) -> SessionType {
    s.erase()
}
