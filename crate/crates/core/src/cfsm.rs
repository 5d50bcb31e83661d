//! Communicating automata extracted from session types.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::{self, Write};

use thiserror::Error;

use crate::ast::{Kind, Label, SessionType};

pub const DEFAULT_STATE_LIMIT: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Send,
    Receive,
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Send => "!",
            Polarity::Receive => "?",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub from: usize,
    pub label: Label,
    pub polarity: Polarity,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CfsmError {
    #[error("more than {limit} reachable states")]
    StateExplosion { limit: usize },
}

/// States are numbered in breadth-first order from the initial state `0`.
#[derive(Debug, Clone)]
pub struct Cfsm {
    pub states: Vec<SessionType>,
    pub alphabet: BTreeSet<Label>,
    pub transitions: Vec<Transition>,
}

impl Cfsm {
    pub fn initial(&self) -> usize {
        0
    }

    pub fn outgoing(&self, state: usize) -> impl Iterator<Item = &Transition> {
        self.transitions.iter().filter(move |t| t.from == state)
    }
}

pub fn build_cfsm(t: &SessionType) -> Result<Cfsm, CfsmError> {
    build_cfsm_with_limit(t, DEFAULT_STATE_LIMIT)
}

/// Explores the terms reachable from `t` by `l!` and `l?` moves. A recursion
/// moves as its unfolding does. Alpha-equivalent terms are one state.
pub fn build_cfsm_with_limit(t: &SessionType, limit: usize) -> Result<Cfsm, CfsmError> {
    let mut index: HashMap<SessionType, usize> = HashMap::new();
    let mut states = vec![t.clone()];
    index.insert(t.clone(), 0);
    let mut alphabet = BTreeSet::new();
    let mut transitions = Vec::new();
    let mut work = VecDeque::from([0]);
    while let Some(i) = work.pop_front() {
        let head = states[i].head_normal();
        let (choices, polarity) = match head.kind() {
            Kind::Select(cs) => (cs, Polarity::Send),
            Kind::Branch(cs, _) => (cs, Polarity::Receive),
            _ => continue,
        };
        for (label, next) in choices {
            let to = match index.get(next) {
                Some(&j) => j,
                None => {
                    if states.len() >= limit {
                        return Err(CfsmError::StateExplosion { limit });
                    }
                    let j = states.len();
                    states.push(next.clone());
                    index.insert(next.clone(), j);
                    work.push_back(j);
                    j
                }
            };
            alphabet.insert(label.clone());
            transitions.push(Transition { from: i, label: label.clone(), polarity, to });
        }
    }
    Ok(Cfsm { states, alphabet, transitions })
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering; the initial state is double-circled.
pub fn to_dot(c: &Cfsm) -> String {
    let mut out = String::from("digraph cfsm {\n  rankdir=LR;\n  node [shape=circle];\n");
    for (i, s) in c.states.iter().enumerate() {
        let shape = if i == c.initial() { ", shape=doublecircle" } else { "" };
        let _ = writeln!(out, "  {} [label=\"{}\", tooltip=\"{}\"{}];", i, i, escape(&s.to_string()), shape);
    }
    for t in &c.transitions {
        let _ = writeln!(out, "  {} -> {} [label=\"{}{}\"];", t.from, t.to, escape(t.label.as_str()), t.polarity);
    }
    out.push_str("}\n");
    out
}
