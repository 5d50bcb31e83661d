use std::sync::Arc;

use crate::ast::{Annotation, Kind, Label, SessionType};

/// Leading run of single-choice branchings of a term and what follows it.
#[derive(Debug, Clone)]
pub struct InputChain {
    pub labels: Vec<Label>,
    pub annotations: Vec<Option<Annotation>>,
    pub tail: SessionType,
}

impl InputChain {
    pub fn of(t: &SessionType) -> InputChain {
        let mut labels = Vec::new();
        let mut annotations = Vec::new();
        let mut cur = t.clone();
        loop {
            let next = match cur.kind() {
                Kind::Branch(cs, a) if cs.len() == 1 => {
                    labels.push(cs[0].0.clone());
                    annotations.push(*a);
                    cs[0].1.clone()
                }
                _ => break,
            };
            cur = next;
        }
        InputChain { labels, annotations, tail: cur }
    }

    /// The tail starts with an output selection or a recursion.
    pub fn tail_is_output_or_rec(&self) -> bool {
        self.tail.is_select() || self.tail.is_rec()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

/// A visited pair, with the chain view of its right-hand side.
#[derive(Debug, Clone)]
pub struct StoredPair {
    pub left: SessionType,
    pub right: SessionType,
    pub chain: Arc<InputChain>,
}

/// The set of pairs visited along one derivation path.
///
/// Persistent: cloning is O(1), so sibling premises share their parent's
/// environment. Membership compares left terms and annotation-erased right
/// terms up to alpha-renaming.
#[derive(Clone, Default)]
pub struct Environment {
    pairs: im::HashSet<(SessionType, SessionType)>,
    by_left: im::HashMap<SessionType, im::Vector<StoredPair>>,
}

impl Environment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, left: &SessionType, right: &SessionType) -> bool {
        self.pairs.contains(&(left.clone(), right.clone()))
    }

    /// Returns the extended environment.
    pub fn with(&self, left: &SessionType, right: &SessionType) -> Environment {
        let mut next = self.clone();
        if next.pairs.insert((left.clone(), right.clone())).is_none() {
            let stored =
                StoredPair { left: left.clone(), right: right.clone(), chain: Arc::new(InputChain::of(right)) };
            next.by_left.entry(left.clone()).or_default().push_back(stored);
        }
        next
    }

    /// Stored pairs whose left term equals `left`, oldest first.
    pub fn with_left<'a>(&'a self, left: &SessionType) -> impl Iterator<Item = &'a StoredPair> + 'a {
        self.by_left.get(left).into_iter().flat_map(|v| v.iter())
    }

    pub fn iter(&self) -> impl Iterator<Item = &StoredPair> {
        self.by_left.values().flat_map(|v| v.iter())
    }
}

impl std::fmt::Debug for Environment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter().map(|p| (p.left.to_string(), p.right.to_string()))).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{parse, Annotator};

    #[test]
    fn chain_of_single_inputs() {
        let t = parse("&{a: &{b: &{x: end, y: end}}}").unwrap();
        let c = InputChain::of(&t);
        assert_eq!(c.labels, vec![Label::new("a"), Label::new("b")]);
        assert!(c.tail.is_branch());
        assert!(!c.tail_is_output_or_rec());
    }

    #[test]
    fn membership_ignores_annotations_and_names() {
        let t = parse("+{l: end}").unwrap();
        let s = parse("rec t. &{l: +{l: t}}").unwrap();
        let env = Environment::new().with(&t, &s.decorate(&mut Annotator::new()));
        assert!(env.contains(&t, &parse("rec u. &{l: +{l: u}}").unwrap()));
        assert_eq!(env.len(), 1);
        let env2 = env.with(&t, &s);
        assert_eq!(env2.len(), 1);
        assert_eq!(env2.with_left(&t).count(), 1);
    }

    #[test]
    fn persistence() {
        let a = parse("end").unwrap();
        let b = parse("+{l: end}").unwrap();
        let base = Environment::new().with(&a, &a);
        let ext = base.with(&a, &b);
        assert_eq!(base.len(), 1);
        assert_eq!(ext.len(), 2);
        assert!(!base.contains(&a, &b));
    }
}
