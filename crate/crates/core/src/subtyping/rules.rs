use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::ast::{unfold, unfold_annotated, Annotator, Kind, Label, SessionType};

use super::asmp::{match_asmp2, match_asmp3};
use super::depth::depth_in;
use super::env::Environment;

/// `Σ ⊢ left ≤ right`.
#[derive(Debug, Clone)]
pub struct Judgment {
    pub left: SessionType,
    pub right: SessionType,
    pub env: Environment,
}

impl Judgment {
    pub fn initial(left: SessionType, right: SessionType) -> Judgment {
        Judgment { left, right, env: Environment::new() }
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|Σ|={} ⊢ {} ≤ {}", self.env.len(), self.left, self.right)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Asmp,
    End,
    Out,
    In,
    RecL,
    RecR1,
    RecR2,
    Asmp2,
    Asmp3,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Asmp => "Asmp",
            Rule::End => "End",
            Rule::Out => "Out",
            Rule::In => "In",
            Rule::RecL => "RecL",
            Rule::RecR1 => "RecR1",
            Rule::RecR2 => "RecR2",
            Rule::Asmp2 => "Asmp2",
            Rule::Asmp3 => "Asmp3",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// The plain rule set; may run forever on subtypes.
    Semi,
    /// Adds Asmp2/Asmp3 and keeps right-hand annotations fresh.
    Terminating,
}

#[derive(Debug, Clone)]
pub struct RuleApplication {
    pub rule: Rule,
    pub consumed: Judgment,
    pub produced: Vec<Judgment>,
}

/// Why no rule applies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StuckReason {
    /// `end` against a term that is not `end` after unfolding.
    EndMismatch,
    /// Some output label of the left side is missing on the right.
    MissingOutput(Label),
    /// Some input label of the right side is missing on the left.
    MissingInput(Label),
    /// An output on the left against a right side that cannot anticipate it.
    NoOutputReachable,
    /// An input on the left against an output or `end` on the right.
    InputAgainstOutput,
    /// A free variable reached the root of a side.
    OpenTerm,
}

impl fmt::Display for StuckReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StuckReason::EndMismatch => f.write_str("end against a non-end term"),
            StuckReason::MissingOutput(l) => write!(f, "output `{}` is not offered on the right", l),
            StuckReason::MissingInput(l) => write!(f, "input `{}` is not accepted on the left", l),
            StuckReason::NoOutputReachable => f.write_str("no output can be anticipated on the right"),
            StuckReason::InputAgainstOutput => f.write_str("input on the left against a non-input on the right"),
            StuckReason::OpenTerm => f.write_str("unbound variable at the root"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Stuck {
    pub judgment: Judgment,
    pub reason: StuckReason,
}

impl fmt::Display for Stuck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.judgment, self.reason)
    }
}

// Every hole of the maximal input context of `t` holds a selection offering `label`.
fn offers_everywhere(t: &SessionType, label: &Label, checked: &mut HashSet<(usize, Label)>) -> bool {
    if checked.contains(&(t.addr(), label.clone())) {
        return true;
    }
    let ok = match t.kind() {
        Kind::Branch(cs, _) => cs.iter().all(|(_, c)| offers_everywhere(c, label, checked)),
        Kind::Select(_) => t.choice(label).is_some(),
        _ => false,
    };
    if ok {
        checked.insert((t.addr(), label.clone()));
    }
    ok
}

// `A[S_k,label]`: the input context of `t` with each selection replaced by
// its `label` continuation.
fn refill(t: &SessionType, label: &Label, memo: &mut HashMap<usize, SessionType>) -> SessionType {
    if let Some(u) = memo.get(&t.addr()) {
        return u.clone();
    }
    let u = match t.kind() {
        Kind::Branch(..) => t.map_children(|c| refill(c, label, memo)),
        _ => t.choice(label).expect("checked by offers_everywhere").clone(),
    };
    memo.insert(t.addr(), u.clone());
    u
}

fn unfold_right(right: &SessionType, n: usize, mode: Mode, annotator: &mut Annotator) -> SessionType {
    match mode {
        Mode::Semi => unfold(right, n),
        Mode::Terminating => unfold_annotated(right, n, annotator),
    }
}

/// Applies the single rule that fits `j`, or reports that none does.
///
/// Closing rules are tried first: Asmp, then (terminating mode) Asmp2 and
/// Asmp3. Binder names of both sides must be pairwise distinct for the
/// depth computation to be exact; [`super::Checker`] ensures this.
pub fn step(j: &Judgment, mode: Mode, annotator: &mut Annotator) -> Result<RuleApplication, Stuck> {
    let done = |rule| Ok(RuleApplication { rule, consumed: j.clone(), produced: Vec::new() });
    let one = |rule, env: Environment, left: SessionType, right: SessionType| {
        Ok(RuleApplication { rule, consumed: j.clone(), produced: vec![Judgment { left, right, env }] })
    };
    let stuck = |reason| Err(Stuck { judgment: j.clone(), reason });

    if j.env.contains(&j.left, &j.right) {
        return done(Rule::Asmp);
    }
    if mode == Mode::Terminating {
        if match_asmp2(j).is_some() {
            return done(Rule::Asmp2);
        }
        if match_asmp3(j).is_some() {
            return done(Rule::Asmp3);
        }
    }

    let (left, right) = (&j.left, &j.right);
    match (left.kind(), right.kind()) {
        (Kind::Var(_), _) | (_, Kind::Var(_)) => stuck(StuckReason::OpenTerm),
        (Kind::End, Kind::End) => done(Rule::End),
        (Kind::Rec(..), _) => {
            let unrolled = left.unroll().expect("root is a recursion");
            one(Rule::RecL, j.env.with(left, right), unrolled, right.clone())
        }
        (Kind::End | Kind::Branch(..), Kind::Rec(..)) => {
            let r = unfold_right(right, 1, mode, annotator);
            one(Rule::RecR1, j.env.with(left, right), left.clone(), r)
        }
        (Kind::End, _) => stuck(StuckReason::EndMismatch),
        (Kind::Branch(ls, _), Kind::Branch(rs, _)) => {
            let mut produced = Vec::with_capacity(rs.len());
            for (l, s) in rs {
                match ls.iter().find(|(k, _)| k == l) {
                    Some((_, t)) => produced.push(Judgment { left: t.clone(), right: s.clone(), env: j.env.clone() }),
                    None => return stuck(StuckReason::MissingInput(l.clone())),
                }
            }
            Ok(RuleApplication { rule: Rule::In, consumed: j.clone(), produced })
        }
        (Kind::Branch(..), _) => stuck(StuckReason::InputAgainstOutput),
        (Kind::Select(ls), _) => match depth_in(right, &mut Vec::new()) {
            None => stuck(StuckReason::NoOutputReachable),
            Some(n) if n >= 1 => {
                let r = unfold_right(right, n, mode, annotator);
                one(Rule::RecR2, j.env.with(left, right), left.clone(), r)
            }
            Some(_) => {
                let mut checked = HashSet::new();
                for (l, _) in ls {
                    if !offers_everywhere(right, l, &mut checked) {
                        return stuck(StuckReason::MissingOutput(l.clone()));
                    }
                }
                let produced = ls
                    .iter()
                    .map(|(l, t)| Judgment {
                        left: t.clone(),
                        right: refill(right, l, &mut HashMap::new()),
                        env: j.env.clone(),
                    })
                    .collect();
                Ok(RuleApplication { rule: Rule::Out, consumed: j.clone(), produced })
            }
        },
    }
}
