//! Asynchronous subtyping for binary session types.
//!
//! The crate provides:
//!
//! - [`ast`]: session types, their concrete syntax, unfolding, input contexts
//!   and the single-choice fragment predicates;
//! - [`subtyping`]: the rule-based semi-procedure, the terminating procedure
//!   for the single-choice fragments, and a bounded simulation-game oracle;
//! - [`queue_machine`]: queue machines, a simulator, and the encodings of a
//!   machine's control and queue as a pair of session types whose subtyping
//!   holds exactly when the machine does not accept;
//! - [`cfsm`]: communicating automata extracted from session types, with DOT
//!   output.
//!
//! ```
//! use asyncsub::ast::parse;
//! use asyncsub::subtyping::{decide, Verdict};
//!
//! let t = parse("rec t. &{l: +{l: t}}").unwrap();
//! let s = parse("rec t. &{l: &{l: +{l: t}}}").unwrap();
//! assert_eq!(decide(&t, &s).unwrap().verdict(), Verdict::Subtype);
//! ```

pub mod ast;
pub mod cfsm;
pub mod queue_machine;
pub mod subtyping;
