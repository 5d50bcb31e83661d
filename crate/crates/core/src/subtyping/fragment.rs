use std::fmt;

use thiserror::Error;

use crate::ast::{fragments, SessionType};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predicate {
    SingleOutput,
    SingleInput,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Predicate::SingleOutput => "single-output",
            Predicate::SingleInput => "single-input",
        })
    }
}

/// The pair lies outside both decidable fragments.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("outside the decidable fragments: {}", describe(.failed))]
pub struct FragmentViolation {
    /// Predicates that do not hold, by side.
    pub failed: Vec<(Side, Predicate)>,
}

fn describe(failed: &[(Side, Predicate)]) -> String {
    failed.iter().map(|(s, p)| format!("{} side is not {}", s, p)).collect::<Vec<_>>().join(", ")
}

/// Accepts `(t, s)` when `t` is single-output and single-input and `s` is
/// single-input, or `t` is single-output and `s` is single-input and
/// single-output.
pub fn decidable_fragment(t: &SessionType, s: &SessionType) -> Result<(), FragmentViolation> {
    let (ft, fs) = (fragments(t), fragments(s));
    let mut failed = Vec::new();
    if !ft.single_output {
        failed.push((Side::Left, Predicate::SingleOutput));
    }
    if !fs.single_input {
        failed.push((Side::Right, Predicate::SingleInput));
    }
    if !ft.single_input && !fs.single_output {
        failed.push((Side::Left, Predicate::SingleInput));
        failed.push((Side::Right, Predicate::SingleOutput));
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(FragmentViolation { failed })
    }
}

/// Which restricted relations have `(t, s)` in their domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairClass {
    /// Single outputs on the left, single inputs on the right, no infinite
    /// output sequences on either side.
    pub single_choice: bool,
    /// `single_choice`, and both sides have single inputs.
    pub single_input: bool,
    /// `single_choice`, and both sides have single outputs.
    pub single_output: bool,
}

pub fn classify_pair(t: &SessionType, s: &SessionType) -> PairClass {
    let (ft, fs) = (fragments(t), fragments(s));
    let single_choice = ft.single_output && fs.single_input && ft.input_guarded && fs.input_guarded;
    PairClass {
        single_choice,
        single_input: single_choice && ft.single_input,
        single_output: single_choice && fs.single_output,
    }
}
