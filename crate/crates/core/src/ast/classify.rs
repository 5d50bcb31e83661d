use super::term::{Kind, SessionType, Var};

/// Every selection has exactly one choice.
pub fn is_single_output(t: &SessionType) -> bool {
    match t.kind() {
        Kind::End | Kind::Var(_) => true,
        Kind::Rec(_, b) => is_single_output(b),
        Kind::Select(cs) => cs.len() == 1 && cs.iter().all(|(_, c)| is_single_output(c)),
        Kind::Branch(cs, _) => cs.iter().all(|(_, c)| is_single_output(c)),
    }
}

/// Every branching has exactly one choice.
pub fn is_single_input(t: &SessionType) -> bool {
    match t.kind() {
        Kind::End | Kind::Var(_) => true,
        Kind::Rec(_, b) => is_single_input(b),
        Kind::Select(cs) => cs.iter().all(|(_, c)| is_single_input(c)),
        Kind::Branch(cs, _) => cs.len() == 1 && cs.iter().all(|(_, c)| is_single_input(c)),
    }
}

/// Bound `index` occurs somewhere not below a branching.
fn escapes_inputs(t: &SessionType, index: u32) -> bool {
    match t.kind() {
        Kind::Var(Var::Bound { index: i, .. }) => *i == index,
        Kind::Var(Var::Free(_)) | Kind::End | Kind::Branch(..) => false,
        Kind::Rec(_, b) => escapes_inputs(b, index + 1),
        Kind::Select(cs) => cs.iter().any(|(_, c)| escapes_inputs(c, index)),
    }
}

/// Every recursion variable occurs under a branching within its binder's
/// body, so no run of the type performs infinitely many consecutive outputs.
pub fn is_input_guarded(t: &SessionType) -> bool {
    match t.kind() {
        Kind::End | Kind::Var(_) => true,
        Kind::Rec(_, b) => !escapes_inputs(b, 0) && is_input_guarded(b),
        Kind::Select(cs) | Kind::Branch(cs, _) => cs.iter().all(|(_, c)| is_input_guarded(c)),
    }
}

/// The three fragment predicates of one type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fragments {
    pub single_output: bool,
    pub single_input: bool,
    pub input_guarded: bool,
}

pub fn fragments(t: &SessionType) -> Fragments {
    Fragments {
        single_output: is_single_output(t),
        single_input: is_single_input(t),
        input_guarded: is_input_guarded(t),
    }
}
