use super::term::{Annotation, Kind, Label, SessionType};

/// A term built from input branchings whose leaves are numbered holes `[]^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputContext {
    /// 1-based hole index.
    Hole(usize),
    Branch(Vec<(Label, InputContext)>, Option<Annotation>),
}

impl InputContext {
    /// Fills hole `n` with `fillers[n - 1]`.
    ///
    /// # Panics
    /// When a hole index exceeds `fillers.len()`.
    pub fn fill(&self, fillers: &[SessionType]) -> SessionType {
        match self {
            InputContext::Hole(n) => fillers[n - 1].clone(),
            InputContext::Branch(cs, a) => {
                let cs = cs.iter().map(|(l, c)| (l.clone(), c.fill(fillers))).collect();
                SessionType::try_branch(cs, *a).expect("context choices are well formed")
            }
        }
    }

    /// Hole indices in left-to-right order.
    pub fn holes(&self) -> Vec<usize> {
        fn walk(c: &InputContext, out: &mut Vec<usize>) {
            match c {
                InputContext::Hole(n) => out.push(*n),
                InputContext::Branch(cs, _) => cs.iter().for_each(|(_, c)| walk(c, out)),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }
}

/// One step from a branching into its `label` continuation; `siblings` is
/// the branching's full label set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathStep {
    pub label: Label,
    pub siblings: Vec<Label>,
}

#[derive(Debug, Clone)]
pub struct Leaf {
    pub path: Vec<PathStep>,
    pub term: SessionType,
}

/// The maximal input context of a term together with the subterms in its holes.
#[derive(Debug, Clone)]
pub struct InputDecomposition {
    pub context: InputContext,
    pub leaves: Vec<Leaf>,
}

impl InputDecomposition {
    pub fn hole_count(&self) -> usize {
        self.leaves.len()
    }

    /// Reassembles the decomposed term.
    pub fn reassemble(&self) -> SessionType {
        let terms: Vec<_> = self.leaves.iter().map(|l| l.term.clone()).collect();
        self.context.fill(&terms)
    }
}

/// Descends through branchings only; every other node becomes a hole,
/// numbered left to right from 1. A non-branching root gives `[]^1`.
pub fn decompose_input_context(s: &SessionType) -> InputDecomposition {
    fn walk(t: &SessionType, path: &mut Vec<PathStep>, leaves: &mut Vec<Leaf>) -> InputContext {
        match t.kind() {
            Kind::Branch(cs, a) => {
                let siblings: Vec<Label> = cs.iter().map(|(l, _)| l.clone()).collect();
                let mut out = Vec::with_capacity(cs.len());
                for (l, c) in cs {
                    path.push(PathStep { label: l.clone(), siblings: siblings.clone() });
                    out.push((l.clone(), walk(c, path, leaves)));
                    path.pop();
                }
                InputContext::Branch(out, *a)
            }
            _ => {
                leaves.push(Leaf { path: path.clone(), term: t.clone() });
                InputContext::Hole(leaves.len())
            }
        }
    }
    let mut leaves = Vec::new();
    let context = walk(s, &mut Vec::new(), &mut leaves);
    InputDecomposition { context, leaves }
}
