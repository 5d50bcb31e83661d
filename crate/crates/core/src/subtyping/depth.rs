use std::collections::{HashMap, HashSet};

use crate::ast::{Kind, Name, SessionType};

/// Number of unfoldings needed before every input path of `s` reaches an
/// output selection; `None` when no number suffices.
///
/// `visited` holds the recursion variables already unfolded on the current
/// path. Variables are compared by name, so callers should pass terms whose
/// binders are pairwise distinct (see [`SessionType::with_unique_binders`]).
pub fn depth(s: &SessionType, visited: &HashSet<Name>) -> Option<usize> {
    let mut gamma: Vec<Name> = visited.iter().cloned().collect();
    depth_in(s, &mut gamma)
}

pub(crate) fn depth_in(s: &SessionType, gamma: &mut Vec<Name>) -> Option<usize> {
    depth_memo(s, gamma, &mut HashMap::new())
}

// `memo` caches results for shared nodes reached with an empty `gamma`.
fn depth_memo(s: &SessionType, gamma: &mut Vec<Name>, memo: &mut HashMap<usize, Option<usize>>) -> Option<usize> {
    match s.kind() {
        Kind::End | Kind::Var(_) => None,
        Kind::Select(_) => Some(0),
        Kind::Branch(cs, _) => {
            if gamma.is_empty() {
                if let Some(d) = memo.get(&s.addr()) {
                    return *d;
                }
            }
            let mut max = Some(0);
            for (_, c) in cs {
                match depth_memo(c, gamma, memo) {
                    Some(d) => max = max.map(|m| m.max(d)),
                    None => {
                        max = None;
                        break;
                    }
                }
            }
            if gamma.is_empty() {
                memo.insert(s.addr(), max);
            }
            max
        }
        Kind::Rec(name, _) => {
            if gamma.contains(name) {
                return None;
            }
            let unrolled = s.unroll().expect("root is a recursion");
            gamma.push(name.clone());
            let d = depth_memo(&unrolled, gamma, memo);
            gamma.pop();
            d.map(|d| d + 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::parse;

    fn d(src: &str) -> Option<usize> {
        depth(&parse(src).unwrap(), &HashSet::new())
    }

    #[test]
    fn base_cases() {
        assert_eq!(d("+{l: end}"), Some(0));
        assert_eq!(d("end"), None);
    }

    #[test]
    fn recursion() {
        assert_eq!(d("rec t. &{l: +{l: t}}"), Some(1));
        assert_eq!(d("rec t. &{l: t}"), None);
    }

    #[test]
    fn branch_takes_the_maximum() {
        assert_eq!(d("&{a: +{l: end}, b: rec t. +{l: t}}"), Some(1));
        assert_eq!(d("&{a: +{l: end}, b: end}"), None);
        assert_eq!(d("&{a: rec t. rec u. +{l: t, m: u}}"), Some(2));
    }

    #[test]
    fn visited_variable_is_undefined() {
        let t = parse("rec t. +{l: t}").unwrap();
        let visited: HashSet<Name> = [Name::new("t")].into_iter().collect();
        assert_eq!(depth(&t, &visited), None);
    }
}
