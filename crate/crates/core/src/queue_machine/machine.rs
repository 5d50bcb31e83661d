use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::ast::{is_identifier, Label};

// Target state and written word of one transition.
type Entry = (usize, Vec<usize>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("the machine has no states")]
    NoStates,
    #[error("state `{0}` is declared twice")]
    DuplicateState(String),
    #[error("symbol `{0}` is declared twice")]
    DuplicateSymbol(String),
    #[error("`{0}` is not a valid symbol name")]
    InvalidSymbol(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown queue symbol `{0}`")]
    UnknownSymbol(String),
    #[error("input symbol `{0}` is not a queue symbol")]
    InputNotInQueue(String),
    #[error("initial symbol `{0}` must be a queue symbol outside the input alphabet")]
    BadInitialSymbol(String),
    #[error("no transition for state `{state}` on `{symbol}`")]
    MissingTransition { state: String, symbol: String },
    #[error("two transitions for state `{state}` on `{symbol}`")]
    DuplicateTransition { state: String, symbol: String },
}

/// One entry of the transition function: `δ(state, read) = (target, write)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub state: String,
    pub read: String,
    pub target: String,
    pub write: Vec<String>,
}

impl Transition {
    pub fn new(state: &str, read: &str, target: &str, write: &[&str]) -> Transition {
        Transition {
            state: state.to_string(),
            read: read.to_string(),
            target: target.to_string(),
            write: write.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// A queue machine `(Q, Σ, Γ, $, s, δ)` with a total transition function.
///
/// States and queue symbols are referred to by their index in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueueMachine {
    states: Vec<String>,
    queue_alphabet: Vec<Label>,
    input_alphabet: Vec<usize>,
    initial_symbol: usize,
    start: usize,
    // delta[state][symbol] = (target, written symbols)
    delta: Vec<Vec<(usize, Vec<usize>)>>,
}

fn index_of(
    names: &HashMap<String, usize>,
    name: &str,
    err: impl Fn(String) -> MachineError,
) -> Result<usize, MachineError> {
    names.get(name).copied().ok_or_else(|| err(name.to_string()))
}

impl QueueMachine {
    pub fn new(
        states: &[&str],
        input_alphabet: &[&str],
        queue_alphabet: &[&str],
        initial_symbol: &str,
        start: &str,
        delta: impl IntoIterator<Item = Transition>,
    ) -> Result<QueueMachine, MachineError> {
        if states.is_empty() {
            return Err(MachineError::NoStates);
        }
        let mut state_ix = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            if state_ix.insert(s.to_string(), i).is_some() {
                return Err(MachineError::DuplicateState(s.to_string()));
            }
        }
        let mut sym_ix = HashMap::new();
        for (i, a) in queue_alphabet.iter().enumerate() {
            if !is_identifier(a) || *a == "end" || *a == "rec" {
                return Err(MachineError::InvalidSymbol(a.to_string()));
            }
            if sym_ix.insert(a.to_string(), i).is_some() {
                return Err(MachineError::DuplicateSymbol(a.to_string()));
            }
        }
        let mut input = Vec::new();
        for a in input_alphabet {
            let i = index_of(&sym_ix, a, MachineError::InputNotInQueue)?;
            if input.contains(&i) {
                return Err(MachineError::DuplicateSymbol(a.to_string()));
            }
            input.push(i);
        }
        let init = index_of(&sym_ix, initial_symbol, MachineError::BadInitialSymbol)?;
        if input.contains(&init) {
            return Err(MachineError::BadInitialSymbol(initial_symbol.to_string()));
        }
        let start = index_of(&state_ix, start, MachineError::UnknownState)?;

        let mut table: Vec<Vec<Option<Entry>>> = vec![vec![None; queue_alphabet.len()]; states.len()];
        for tr in delta {
            let q = index_of(&state_ix, &tr.state, MachineError::UnknownState)?;
            let a = index_of(&sym_ix, &tr.read, MachineError::UnknownSymbol)?;
            let target = index_of(&state_ix, &tr.target, MachineError::UnknownState)?;
            let write = tr
                .write
                .iter()
                .map(|b| index_of(&sym_ix, b, MachineError::UnknownSymbol))
                .collect::<Result<Vec<_>, _>>()?;
            if table[q][a].replace((target, write)).is_some() {
                return Err(MachineError::DuplicateTransition { state: tr.state, symbol: tr.read });
            }
        }
        let delta = table
            .into_iter()
            .enumerate()
            .map(|(q, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(a, e)| {
                        e.ok_or_else(|| MachineError::MissingTransition {
                            state: states[q].to_string(),
                            symbol: queue_alphabet[a].to_string(),
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;

        Ok(QueueMachine {
            states: states.iter().map(|s| s.to_string()).collect(),
            queue_alphabet: queue_alphabet.iter().map(Label::new).collect(),
            input_alphabet: input,
            initial_symbol: init,
            start,
            delta,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    /// Γ in declaration order.
    pub fn queue_alphabet(&self) -> &[Label] {
        &self.queue_alphabet
    }

    pub fn input_alphabet(&self) -> impl Iterator<Item = &Label> {
        self.input_alphabet.iter().map(|&i| &self.queue_alphabet[i])
    }

    pub fn initial_symbol(&self) -> usize {
        self.initial_symbol
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn symbol_index(&self, name: &str) -> Option<usize> {
        self.queue_alphabet.iter().position(|a| a.as_str() == name)
    }

    pub fn is_input_symbol(&self, symbol: usize) -> bool {
        self.input_alphabet.contains(&symbol)
    }

    /// `δ(state, symbol)`.
    pub fn delta(&self, state: usize, symbol: usize) -> (usize, &[usize]) {
        let (q, w) = &self.delta[state][symbol];
        (*q, w)
    }

    /// Splits `text` into queue symbols: whitespace-separated names, where a
    /// token that is not itself a symbol is read one character per symbol.
    pub fn tokenize(&self, text: &str) -> Result<Vec<usize>, MachineError> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            if let Some(i) = self.symbol_index(tok) {
                out.push(i);
                continue;
            }
            for c in tok.chars() {
                let s = c.to_string();
                out.push(self.symbol_index(&s).ok_or(MachineError::UnknownSymbol(s))?);
            }
        }
        Ok(out)
    }

    /// The starting configuration `(s, x$)`.
    pub fn initial_configuration(&self, input: &[usize]) -> Configuration {
        let mut queue: VecDeque<usize> = input.iter().copied().collect();
        queue.push_back(self.initial_symbol);
        Configuration { state: self.start, queue }
    }

    /// Renders a configuration as `(q,w)`, with `ε` for the empty queue.
    pub fn show(&self, c: &Configuration) -> String {
        format!("({},{})", self.states[c.state], self.show_word(c.queue.iter().copied()))
    }

    pub fn show_word(&self, word: impl IntoIterator<Item = usize>) -> String {
        let syms: Vec<&str> = word.into_iter().map(|i| self.queue_alphabet[i].as_str()).collect();
        if syms.is_empty() {
            "ε".to_string()
        } else if self.queue_alphabet.iter().all(|a| a.as_str().chars().count() == 1) {
            syms.concat()
        } else {
            syms.join(" ")
        }
    }
}

/// A machine state and queue contents, front first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: usize,
    pub queue: VecDeque<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    Next(Configuration),
    /// The queue is empty: the machine has accepted.
    Terminal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunOutcome {
    Accepted(usize),
    StillRunning(Configuration),
}

impl fmt::Display for RunOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunOutcome::Accepted(n) => write!(f, "accepted in {} steps", n),
            RunOutcome::StillRunning(_) => f.write_str("still running"),
        }
    }
}

/// One move `(p, Aα) → (q, αγ)` where `δ(p, A) = (q, γ)`.
pub fn step(m: &QueueMachine, c: &Configuration) -> Step {
    let mut queue = c.queue.clone();
    match queue.pop_front() {
        None => Step::Terminal,
        Some(a) => {
            let (q, w) = m.delta(c.state, a);
            queue.extend(w.iter().copied());
            Step::Next(Configuration { state: q, queue })
        }
    }
}

/// Runs from `(s, input·$)` for at most `max_steps` moves.
pub fn run(m: &QueueMachine, input: &[usize], max_steps: usize) -> RunOutcome {
    let mut c = m.initial_configuration(input);
    for n in 0..=max_steps {
        if c.queue.is_empty() {
            return RunOutcome::Accepted(n);
        }
        if n == max_steps {
            break;
        }
        match step(m, &c) {
            Step::Next(d) => c = d,
            Step::Terminal => unreachable!("queue is non-empty"),
        }
    }
    RunOutcome::StillRunning(c)
}

/// The configurations visited by [`run`], starting configuration included.
pub fn trace(m: &QueueMachine, input: &[usize], max_steps: usize) -> Vec<Configuration> {
    let mut c = m.initial_configuration(input);
    let mut out = vec![c.clone()];
    for _ in 0..max_steps {
        match step(m, &c) {
            Step::Next(d) => {
                out.push(d.clone());
                c = d;
            }
            Step::Terminal => break,
        }
    }
    out
}

/// The machine accepting `aⁿbⁿ`, with sink state `qs`.
pub fn anbn_machine() -> QueueMachine {
    let t = Transition::new;
    QueueMachine::new(
        &["q1", "q2", "q3", "qs"],
        &["a", "b"],
        &["a", "b", "$"],
        "$",
        "q1",
        [
            t("q1", "a", "q2", &[]),
            t("q1", "b", "qs", &["b"]),
            t("q1", "$", "q1", &[]),
            t("q2", "a", "q2", &["a"]),
            t("q2", "b", "q3", &[]),
            t("q2", "$", "qs", &["$"]),
            t("q3", "a", "qs", &["a"]),
            t("q3", "b", "q3", &["b"]),
            t("q3", "$", "q1", &["$"]),
            t("qs", "a", "qs", &["a"]),
            t("qs", "b", "qs", &["b"]),
            t("qs", "$", "qs", &["$"]),
        ],
    )
    .expect("well-formed machine")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(m: &QueueMachine, s: &str) -> Vec<usize> {
        m.tokenize(s).unwrap()
    }

    fn config(m: &QueueMachine, q: &str, w: &str) -> Configuration {
        Configuration { state: m.state_index(q).unwrap(), queue: word(m, w).into() }
    }

    #[test]
    fn anbn_delta_table() {
        let m = anbn_machine();
        let d = |q: &str, a: &str| {
            let (t, w) = m.delta(m.state_index(q).unwrap(), m.symbol_index(a).unwrap());
            (m.states()[t].clone(), m.show_word(w.iter().copied()))
        };
        assert_eq!(d("q1", "a"), ("q2".into(), "ε".into()));
        assert_eq!(d("qs", "b"), ("qs".into(), "b".into()));
        assert_eq!(d("q3", "$"), ("q1".into(), "$".into()));
    }

    #[test]
    fn single_steps() {
        let m = anbn_machine();
        assert_eq!(step(&m, &config(&m, "q1", "aabb$")), Step::Next(config(&m, "q2", "abb$")));
        assert_eq!(step(&m, &config(&m, "q2", "bb$a")), Step::Next(config(&m, "q3", "b$a")));
        assert_eq!(step(&m, &config(&m, "q1", "")), Step::Terminal);
    }

    #[test]
    fn runs() {
        let m = anbn_machine();
        assert_eq!(run(&m, &word(&m, "aabb"), 100), RunOutcome::Accepted(9));
        assert_eq!(run(&m, &[], 100), RunOutcome::Accepted(1));
        assert!(matches!(run(&m, &word(&m, "ba"), 1000), RunOutcome::StillRunning(_)));
        assert!(matches!(run(&m, &word(&m, "aabb"), 8), RunOutcome::StillRunning(_)));
    }

    #[test]
    fn show_configurations() {
        let m = anbn_machine();
        assert_eq!(m.show(&config(&m, "q1", "aabb$")), "(q1,aabb$)");
        assert_eq!(m.show(&config(&m, "q1", "")), "(q1,ε)");
    }

    #[test]
    fn tokenize_names_and_characters() {
        let m = anbn_machine();
        assert_eq!(word(&m, "a b $"), word(&m, "ab$"));
        assert!(m.tokenize("abc").is_err());
    }

    #[test]
    fn rejects_partial_or_ambiguous_delta() {
        let t = Transition::new;
        let base = [t("q", "a", "q", &[]), t("q", "$", "q", &[])];
        assert!(QueueMachine::new(&["q"], &["a"], &["a", "$"], "$", "q", base.clone()).is_ok());
        let err = QueueMachine::new(&["q"], &["a"], &["a", "$"], "$", "q", base[..1].to_vec()).unwrap_err();
        assert_eq!(err, MachineError::MissingTransition { state: "q".into(), symbol: "$".into() });
        let mut dup = base.to_vec();
        dup.push(t("q", "a", "q", &["a"]));
        assert!(matches!(
            QueueMachine::new(&["q"], &["a"], &["a", "$"], "$", "q", dup),
            Err(MachineError::DuplicateTransition { .. })
        ));
        assert!(matches!(
            QueueMachine::new(&["q"], &["a"], &["a", "$"], "a", "q", base.clone()),
            Err(MachineError::BadInitialSymbol(_))
        ));
        assert!(matches!(
            QueueMachine::new(&["q"], &["c"], &["a", "$"], "$", "q", base),
            Err(MachineError::InputNotInQueue(_))
        ));
    }
}
