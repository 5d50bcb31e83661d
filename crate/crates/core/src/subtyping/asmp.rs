use crate::ast::{Kind, Label};

use super::env::{InputChain, StoredPair};
use super::rules::Judgment;

/// Witness that two label sequences are `word^i · word[..s]` and
/// `word^j · word[..s]` with `j > i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Period {
    pub word: Vec<Label>,
    pub i: usize,
    pub j: usize,
    pub s: usize,
}

/// Smallest period length `p` in `1..=stored.len()` making `stored` and
/// `current` repetitions of the same word with the same residue.
pub fn period_witness(stored: &[Label], current: &[Label]) -> Option<Period> {
    let (n, m) = (stored.len(), current.len());
    if m <= n {
        return None;
    }
    (1..=n).find_map(|p| {
        if n % p != m % p {
            return None;
        }
        let word = &stored[..p];
        let periodic = |seq: &[Label]| seq.iter().enumerate().all(|(k, l)| *l == word[k % p]);
        (periodic(stored) && periodic(current)).then(|| Period { word: word.to_vec(), i: n / p, j: m / p, s: n % p })
    })
}

#[derive(Debug, Clone)]
pub struct Asmp2Match {
    pub stored: StoredPair,
    /// 1-based position, in the stored chain, of the branching carrying the
    /// current chain's first annotation.
    pub r: usize,
    pub period: Period,
}

#[derive(Debug, Clone)]
pub struct Asmp3Match {
    pub stored: StoredPair,
    pub n: usize,
    pub m: usize,
}

/// Closing rule for periodic input accumulation when the left term has inputs.
pub fn match_asmp2(j: &Judgment) -> Option<Asmp2Match> {
    if !j.left.contains_branch() {
        return None;
    }
    let current = InputChain::of(&j.right);
    if current.is_empty() || !current.tail_is_output_or_rec() {
        return None;
    }
    let alpha = current.annotations[0]?;
    j.env.with_left(&j.left).find_map(|stored| {
        let chain = &stored.chain;
        if chain.is_empty() || !chain.tail_is_output_or_rec() || chain.tail != current.tail {
            return None;
        }
        let r = chain.annotations.iter().position(|a| *a == Some(alpha))? + 1;
        let period = period_witness(&chain.labels, &current.labels)?;
        Some(Asmp2Match { stored: stored.clone(), r, period })
    })
}

/// Closing rule for input accumulation when the left term only outputs.
///
/// The left term must be able to output at all: `end` never cycles, and a
/// stored pair left by RecR1 would otherwise close `end ≤ rec t. &{l: t}`.
pub fn match_asmp3(j: &Judgment) -> Option<Asmp3Match> {
    if j.left.contains_branch() || matches!(j.left.kind(), Kind::End) {
        return None;
    }
    let current = InputChain::of(&j.right);
    if current.is_empty() || !current.tail_is_output_or_rec() {
        return None;
    }
    j.env.with_left(&j.left).find_map(|stored| {
        let chain = &stored.chain;
        let n = chain.len();
        let ok = n < current.len()
            && chain.tail_is_output_or_rec()
            && chain.labels[..] == current.labels[..n]
            && chain.tail == current.tail;
        ok.then(|| Asmp3Match { stored: stored.clone(), n, m: current.len() })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::{parse, Annotation, Annotator, SessionType};
    use crate::subtyping::Environment;

    fn labels(s: &str) -> Vec<Label> {
        s.chars().map(|c| Label::new(c.to_string())).collect()
    }

    #[test]
    fn period_search() {
        let p = period_witness(&labels("l"), &labels("ll")).unwrap();
        assert_eq!(p, Period { word: labels("l"), i: 1, j: 2, s: 0 });
        let p = period_witness(&labels("aba"), &labels("ababa")).unwrap();
        assert_eq!(p, Period { word: labels("ab"), i: 1, j: 2, s: 1 });
        assert!(period_witness(&labels("ll"), &labels("ll")).is_none());
        assert!(period_witness(&labels("ab"), &labels("abb")).is_none());
        assert!(period_witness(&labels(""), &labels("a")).is_none());
    }

    // Re-annotates the single-choice chain of `t` with the given annotations,
    // leaving everything else as is.
    fn with_chain_annotations(t: &SessionType, anns: &[u64]) -> SessionType {
        if anns.is_empty() {
            return t.clone();
        }
        match t.kind() {
            Kind::Branch(cs, _) => SessionType::try_branch(
                vec![(cs[0].0.clone(), with_chain_annotations(&cs[0].1, &anns[1..]))],
                Some(Annotation(anns[0])),
            )
            .unwrap(),
            _ => panic!("chain too short"),
        }
    }

    fn tail() -> SessionType {
        parse("rec t. +{l: &{l: t}}").unwrap()
    }

    #[test]
    fn asmp2_matches_growing_chain() {
        let t = parse("rec x. &{l: +{l: x}}").unwrap();
        let stored = with_chain_annotations(&SessionType::branch([("l", tail())]), &[7]);
        let current = with_chain_annotations(
            &SessionType::branch([("l", SessionType::branch([("l", tail().decorate(&mut Annotator::new()))]))]),
            &[7, 9],
        );
        let env = Environment::new().with(&t, &stored);
        let j = Judgment { left: t, right: current, env };
        let m = match_asmp2(&j).expect("match");
        assert_eq!(m.r, 1);
        assert_eq!(m.period, Period { word: labels("l"), i: 1, j: 2, s: 0 });
    }

    #[test]
    fn asmp2_needs_a_shared_annotation() {
        let t = parse("rec x. &{l: +{l: x}}").unwrap();
        let stored = with_chain_annotations(&SessionType::branch([("l", tail())]), &[1]);
        let current =
            with_chain_annotations(&SessionType::branch([("l", SessionType::branch([("l", tail())]))]), &[2, 3]);
        let j = Judgment { left: t, right: current, env: Environment::new().with(&parse("end").unwrap(), &stored) };
        assert!(match_asmp2(&j).is_none());
        let env = Environment::new().with(&j.left, &stored);
        assert!(match_asmp2(&Judgment { env, ..j }).is_none());
    }

    #[test]
    fn asmp2_rejects_select_root() {
        let t = parse("rec x. &{l: +{l: x}}").unwrap();
        let env = Environment::new().with(&t, &tail());
        assert!(match_asmp2(&Judgment { left: t, right: tail(), env }).is_none());
    }

    #[test]
    fn asmp2_rejects_equal_lengths() {
        let t = parse("rec x. &{l: +{l: x}}").unwrap();
        let two = SessionType::branch([("l", SessionType::branch([("l", tail())]))]);
        let stored = with_chain_annotations(&two, &[1, 2]);
        let current = with_chain_annotations(&two, &[1, 5]);
        let env = Environment::new().with(&t, &stored);
        assert!(match_asmp2(&Judgment { left: t, right: current, env }).is_none());
    }

    #[test]
    fn asmp3_prefix_growth() {
        let t = parse("rec x. +{a: x}").unwrap();
        let z = parse("rec z. +{a: &{a: z}}").unwrap();
        let stored = SessionType::branch([("a", z.clone())]);
        let current = SessionType::branch([("a", SessionType::branch([("a", z.clone())]))]);
        let env = Environment::new().with(&t, &stored);
        let m = match_asmp3(&Judgment { left: t.clone(), right: current, env: env.clone() }).unwrap();
        assert_eq!((m.n, m.m), (1, 2));

        let stored_ab = SessionType::branch([("a", SessionType::branch([("b", z.clone())]))]);
        let env_ab = Environment::new().with(&t, &stored_ab);
        let longer = SessionType::branch([("a", SessionType::branch([("c", SessionType::branch([("a", z)]))]))]);
        assert!(match_asmp3(&Judgment { left: t, right: longer, env: env_ab }).is_none());
    }

    #[test]
    fn asmp3_requires_output_only_left() {
        let t = parse("rec x. &{a: +{a: x}}").unwrap();
        let z = parse("rec z. +{a: &{a: z}}").unwrap();
        let env = Environment::new().with(&t, &SessionType::branch([("a", z.clone())]));
        let current = SessionType::branch([("a", SessionType::branch([("a", z)]))]);
        assert!(match_asmp3(&Judgment { left: t, right: current, env }).is_none());
    }

    #[test]
    fn asmp3_needs_an_outputting_left_side() {
        let t = parse("end").unwrap();
        let z = parse("rec z. &{b: z}").unwrap();
        let env = Environment::new().with(&t, &z);
        let current = SessionType::branch([("b", z)]);
        assert!(match_asmp3(&Judgment { left: t, right: current, env }).is_none());
    }
}
