use crate::ast::{is_identifier, Label, Name, SessionType};

use super::machine::QueueMachine;

/// `rec t. +{A: &{A: t}}` over Γ in declaration order.
pub fn queue_hub(m: &QueueMachine) -> SessionType {
    let choices =
        m.queue_alphabet().iter().map(|a| (a.clone(), SessionType::branch([(a.clone(), SessionType::var("t"))])));
    SessionType::rec("t", SessionType::select(choices.collect::<Vec<_>>()))
}

/// The queue `C₁…Cₘ` as single inputs `C₁ … Cₘ` followed by the hub.
pub fn encode_queue(m: &QueueMachine, content: &[usize]) -> SessionType {
    content.iter().rev().fold(queue_hub(m), |acc, &c| SessionType::branch([(m.queue_alphabet()[c].clone(), acc)]))
}

fn state_variable(name: &str) -> Name {
    if is_identifier(name) && name != "end" && name != "rec" {
        return Name::new(name);
    }
    let cleaned: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '_' | '\'' | '$') { c } else { '_' })
        .collect();
    Name::new(format!("q_{}", cleaned))
}

fn control(m: &QueueMachine, q: usize, seen: &mut Vec<usize>) -> SessionType {
    let name = state_variable(&m.states()[q]);
    if seen.contains(&q) {
        return SessionType::var(name);
    }
    seen.push(q);
    let choices: Vec<(Label, SessionType)> = m
        .queue_alphabet()
        .iter()
        .enumerate()
        .map(|(a, label)| {
            let (target, write) = m.delta(q, a);
            let cont = control(m, target, seen);
            let body =
                write.iter().rev().fold(cont, |acc, &b| SessionType::select([(m.queue_alphabet()[b].clone(), acc)]));
            (label.clone(), body)
        })
        .collect();
    seen.pop();
    SessionType::rec(name, SessionType::branch(choices))
}

/// `⟦q⟧∅`: the finite control started in state `q`.
pub fn encode_control_from(m: &QueueMachine, q: usize) -> SessionType {
    control(m, q, &mut Vec::new())
}

/// `⟦s⟧∅` for the start state `s`.
pub fn encode_control(m: &QueueMachine) -> SessionType {
    encode_control_from(m, m.start())
}

/// The pair `(⟦s⟧∅, ⟦x$⟧)`; the first is a subtype of the second exactly
/// when `m` does not accept `input`.
pub fn reduction(m: &QueueMachine, input: &[usize]) -> (SessionType, SessionType) {
    let mut content = input.to_vec();
    content.push(m.initial_symbol());
    (encode_control(m), encode_queue(m, &content))
}
