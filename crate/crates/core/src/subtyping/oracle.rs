use std::collections::{HashSet, VecDeque};

use crate::ast::{decompose_input_context, unfold, Kind, SessionType};

/// Largest `n` tried when looking for an `n`-unfolding of the right side.
pub const UNFOLD_BOUND: usize = 8;

/// Pairs whose right side grows past this many constructors are not explored.
pub const TERM_SIZE_BOUND: usize = 2_000;

#[derive(Debug, Clone)]
pub enum OracleVerdict {
    /// A relation with `pairs` elements was found.
    Subtype { pairs: usize },
    /// The pair reaches `witness`, which no unfolding can satisfy.
    NotSubtype { witness: (SessionType, SessionType) },
    /// The exploration hit the pair bound or the unfolding bound.
    Inconclusive { pairs: usize },
}

enum Outcome {
    Holds(Vec<(SessionType, SessionType)>),
    Violated,
    Unknown,
}

// Successors of one pair under the relation's closure conditions, choosing the
// smallest unfolding that works.
fn successors(t: &SessionType, s: &SessionType) -> Outcome {
    match t.kind() {
        Kind::Rec(..) => Outcome::Holds(vec![(t.unroll().expect("recursion"), s.clone())]),
        Kind::Var(_) => Outcome::Violated,
        Kind::End | Kind::Branch(..) => {
            for n in 0..=UNFOLD_BOUND {
                let u = unfold(s, n);
                match (t.kind(), u.kind()) {
                    (_, Kind::Rec(..)) => continue,
                    (Kind::End, Kind::End) => return Outcome::Holds(Vec::new()),
                    (Kind::Branch(ti, _), Kind::Branch(sj, _)) => {
                        let mut next = Vec::new();
                        for (l, sl) in sj {
                            match ti.iter().find(|(k, _)| k == l) {
                                Some((_, tl)) => next.push((tl.clone(), sl.clone())),
                                None => return Outcome::Violated,
                            }
                        }
                        return Outcome::Holds(next);
                    }
                    _ => return Outcome::Violated,
                }
            }
            Outcome::Unknown
        }
        Kind::Select(ti) => {
            for n in 0..=UNFOLD_BOUND {
                let d = decompose_input_context(&unfold(s, n));
                let mut pending = false;
                for leaf in &d.leaves {
                    match leaf.term.kind() {
                        Kind::Select(sj) => {
                            if ti.iter().any(|(l, _)| !sj.iter().any(|(k, _)| k == l)) {
                                return Outcome::Violated;
                            }
                        }
                        Kind::Rec(..) => pending = true,
                        _ => return Outcome::Violated,
                    }
                }
                if pending {
                    continue;
                }
                let next = ti
                    .iter()
                    .map(|(l, tl)| {
                        let fillers: Vec<SessionType> =
                            d.leaves.iter().map(|leaf| leaf.term.choice(l).expect("label present").clone()).collect();
                        (tl.clone(), d.context.fill(&fillers))
                    })
                    .collect();
                return Outcome::Holds(next);
            }
            Outcome::Unknown
        }
    }
}

/// Bounded search for a subtyping relation containing `(t, s)`.
///
/// Explores at most `pair_bound` distinct pairs, skipping right sides larger
/// than [`TERM_SIZE_BOUND`]. A `NotSubtype` answer is
/// definite; a `Subtype` answer comes with the size of the relation built.
pub fn oracle_check(t: &SessionType, s: &SessionType, pair_bound: usize) -> OracleVerdict {
    let t = t.erase();
    let s = s.erase();
    let mut seen: HashSet<(SessionType, SessionType)> = HashSet::new();
    let mut work = VecDeque::new();
    seen.insert((t.clone(), s.clone()));
    work.push_back((t, s));
    let mut unknown = false;
    while let Some((t, s)) = work.pop_front() {
        match successors(&t, &s) {
            Outcome::Violated => return OracleVerdict::NotSubtype { witness: (t, s) },
            Outcome::Unknown => unknown = true,
            Outcome::Holds(next) => {
                for pair in next {
                    if seen.contains(&pair) {
                        continue;
                    }
                    if seen.len() >= pair_bound || pair.1.size() > TERM_SIZE_BOUND {
                        unknown = true;
                        continue;
                    }
                    seen.insert(pair.clone());
                    work.push_back(pair);
                }
            }
        }
    }
    if unknown {
        OracleVerdict::Inconclusive { pairs: seen.len() }
    } else {
        OracleVerdict::Subtype { pairs: seen.len() }
    }
}
