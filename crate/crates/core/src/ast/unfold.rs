use std::collections::HashMap;

use super::term::{Annotator, Kind, SessionType};

fn unfold_once(t: &SessionType, annotator: &mut Option<&mut Annotator>) -> SessionType {
    match t.kind() {
        Kind::Rec(..) => {
            let body = t.unroll().expect("root is a recursion");
            match annotator {
                // every branching produced by the substitution is a new instance
                Some(a) => body.decorate(a),
                None => body,
            }
        }
        Kind::Select(_) | Kind::Branch(..) => t.map_children(|c| unfold_once(c, annotator)),
        Kind::End | Kind::Var(_) => t.clone(),
    }
}

/// `n`-unfolding: each round substitutes every recursion reachable from the
/// root through selections and branchings, once.
pub fn unfold(t: &SessionType, n: usize) -> SessionType {
    let mut out = t.clone();
    for _ in 0..n {
        out = unfold_once_shared(&out, &mut HashMap::new());
    }
    out
}

// Plain unfolding that maps each shared node once, so terms with repeated
// subterms stay shared.
fn unfold_once_shared(t: &SessionType, memo: &mut HashMap<usize, SessionType>) -> SessionType {
    if let Some(u) = memo.get(&t.addr()) {
        return u.clone();
    }
    let u = match t.kind() {
        Kind::Rec(..) => t.unroll().expect("root is a recursion"),
        Kind::Select(_) | Kind::Branch(..) => t.map_children(|c| unfold_once_shared(c, memo)),
        Kind::End | Kind::Var(_) => t.clone(),
    };
    memo.insert(t.addr(), u.clone());
    u
}

/// [`unfold`] on a decorated term: branchings exposed by a substitution get
/// fresh annotations, existing ones keep theirs.
pub fn unfold_annotated(t: &SessionType, n: usize, annotator: &mut Annotator) -> SessionType {
    let mut out = t.clone();
    let mut a = Some(annotator);
    for _ in 0..n {
        out = unfold_once(&out, &mut a);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::parse;

    #[test]
    fn zero_is_identity() {
        let t = parse("rec t. &{l: +{l: t}}").unwrap();
        assert!(unfold(&t, 0).identical(&t));
    }

    #[test]
    fn one_step() {
        let t = parse("rec t. &{l: t}").unwrap();
        let expected = parse("&{l: rec t. &{l: t}}").unwrap();
        assert!(unfold(&t, 1).identical(&expected));
    }

    #[test]
    fn two_steps_by_hand() {
        let t = parse("rec t. &{l: &{l': t}}").unwrap();
        let expected = parse("&{l: &{l': &{l: &{l': rec t. &{l: &{l': t}}}}}}").unwrap();
        assert!(unfold(&t, 2).identical(&expected));
    }

    #[test]
    fn recurses_through_selections() {
        let t = parse("+{a: rec t. &{l: t}, b: end}").unwrap();
        let expected = parse("+{a: &{l: rec t. &{l: t}}, b: end}").unwrap();
        assert!(unfold(&t, 1).identical(&expected));
    }

    #[test]
    fn annotated_unfolding_freshens_exposed_branchings() {
        let mut ann = Annotator::new();
        let t = parse("rec t. &{l: t}").unwrap().decorate(&mut ann);
        let u = unfold_annotated(&t, 2, &mut ann);
        let anns = u.annotations();
        let distinct: std::collections::HashSet<_> = anns.iter().collect();
        assert_eq!(anns.len(), distinct.len());
        // two exposed branchings plus the one under the remaining binder
        assert_eq!(anns.len(), 3);
    }

    #[test]
    fn annotated_unfolding_keeps_existing_annotations() {
        let mut ann = Annotator::new();
        let t = parse("&{a: rec t. +{l: &{b: t}}}").unwrap().decorate(&mut ann);
        let root = t.annotation().unwrap();
        let u = unfold_annotated(&t, 1, &mut ann);
        assert_eq!(u.annotation(), Some(root));
        assert_eq!(u, unfold(&t, 1));
    }
}
