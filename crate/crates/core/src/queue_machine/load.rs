use thiserror::Error;

use super::machine::{MachineError, QueueMachine, Transition};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{0}:` line")]
    MissingField(&'static str),
    #[error(transparent)]
    Machine(#[from] MachineError),
}

fn split_word(text: &str, symbols: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    for tok in text.split_whitespace() {
        if tok == "." {
            continue;
        }
        if symbols.iter().any(|s| s == tok) {
            out.push(tok.to_string());
        } else {
            out.extend(tok.chars().map(|c| c.to_string()));
        }
    }
    out
}

/// Reads the line-based machine format:
///
/// ```text
/// states: q1 q2
/// input: a
/// queue: a $
/// init: $
/// start: q1
/// delta: q1 a -> q2 .     # `.` is the empty word
/// ```
pub fn parse_machine(text: &str) -> Result<QueueMachine, LoadError> {
    let mut states = None;
    let mut input = None;
    let mut queue: Option<Vec<String>> = None;
    let mut init = None;
    let mut start = None;
    let mut delta = Vec::new();

    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |message: String| LoadError::Syntax { line, message };
        let (key, rest) = content.split_once(':').ok_or_else(|| syntax("expected `key: value`".into()))?;
        let words: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
        let single = |words: &[String]| match words {
            [w] => Ok(w.clone()),
            _ => Err(syntax(format!("`{}` takes exactly one value", key.trim()))),
        };
        let twice = || syntax(format!("`{}` given twice", key.trim()));
        match key.trim() {
            "states" => {
                if states.is_some() {
                    return Err(twice());
                }
                states = Some(words);
            }
            "input" => {
                if input.is_some() {
                    return Err(twice());
                }
                input = Some(words);
            }
            "queue" => {
                if queue.is_some() {
                    return Err(twice());
                }
                queue = Some(words);
            }
            "init" => {
                if init.is_some() {
                    return Err(twice());
                }
                init = Some(single(&words)?);
            }
            "start" => {
                if start.is_some() {
                    return Err(twice());
                }
                start = Some(single(&words)?);
            }
            "delta" => {
                let (lhs, rhs) =
                    rest.split_once("->").ok_or_else(|| syntax("expected `state symbol -> state word`".into()))?;
                let lhs: Vec<&str> = lhs.split_whitespace().collect();
                let mut rhs = rhs.split_whitespace();
                let (state, read) = match lhs[..] {
                    [q, a] => (q, a),
                    _ => return Err(syntax("expected `state symbol` before `->`".into())),
                };
                let target = rhs.next().ok_or_else(|| syntax("missing target state".into()))?;
                let rest: Vec<&str> = rhs.collect();
                if rest.is_empty() {
                    return Err(syntax("missing written word (use `.` for the empty word)".into()));
                }
                let symbols = queue.clone().ok_or_else(|| syntax("`queue:` must come before `delta:`".into()))?;
                let write = split_word(&rest.join(" "), &symbols);
                delta.push(Transition { state: state.into(), read: read.into(), target: target.into(), write });
            }
            other => return Err(syntax(format!("unknown key `{}`", other))),
        }
    }

    let states = states.ok_or(LoadError::MissingField("states"))?;
    let input = input.ok_or(LoadError::MissingField("input"))?;
    let queue = queue.ok_or(LoadError::MissingField("queue"))?;
    let init = init.ok_or(LoadError::MissingField("init"))?;
    let start = start.ok_or(LoadError::MissingField("start"))?;
    fn refs(v: &[String]) -> Vec<&str> {
        v.iter().map(String::as_str).collect()
    }
    Ok(QueueMachine::new(&refs(&states), &refs(&input), &refs(&queue), &init, &start, delta)?)
}
