mod common;

use asyncsub::ast::{Kind, SessionType};
use asyncsub::queue_machine::{anbn_machine, encode_control, encode_queue, parse_machine, run, trace, RunOutcome};
use proptest::prelude::*;
use rand::Rng;

// Number of branchings before the first recursion.
fn chain_length(t: &SessionType) -> usize {
    match t.kind() {
        Kind::Branch(cs, _) if cs.len() == 1 => 1 + chain_length(&cs[0].1),
        _ => 0,
    }
}

proptest! {
    #[test]
    fn queue_encoding_has_one_input_per_symbol(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let m = common::queue_machine(&mut rng);
        let len = rng.gen_range(0..8);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..m.queue_alphabet().len())).collect();
        let s = encode_queue(&m, &word);
        prop_assert_eq!(chain_length(&s), word.len());
    }

    #[test]
    fn runs_are_deterministic(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let m = common::queue_machine(&mut rng);
        let inputs: Vec<usize> = (0..m.queue_alphabet().len()).filter(|&a| m.is_input_symbol(a)).collect();
        let word: Vec<usize> = (0..3).map(|_| inputs[rng.gen_range(0..inputs.len())]).collect();
        prop_assert_eq!(run(&m, &word, 200), run(&m, &word, 200));
    }
}

#[test]
fn bundled_machine_file_matches_builtin() {
    let m = parse_machine(include_str!("../machines/anbn.qm")).unwrap();
    let builtin = anbn_machine();
    assert_eq!(m.states(), builtin.states());
    assert_eq!(m.queue_alphabet(), builtin.queue_alphabet());
    assert_eq!(encode_control(&m), encode_control(&builtin));
    for x in ["", "ab", "aabb", "ba", "aab"] {
        assert_eq!(run(&m, &m.tokenize(x).unwrap(), 500), run(&builtin, &builtin.tokenize(x).unwrap(), 500));
    }
}

#[test]
fn anbn_language() {
    let m = anbn_machine();
    for (x, accepted) in [("", true), ("ab", true), ("aaabbb", true), ("a", false), ("abab", false), ("aab", false)] {
        let outcome = run(&m, &m.tokenize(x).unwrap(), 1_000);
        assert_eq!(matches!(outcome, RunOutcome::Accepted(_)), accepted, "{:?}: {}", x, outcome);
    }
    let steps = trace(&m, &m.tokenize("ab").unwrap(), 100);
    assert_eq!(m.show(steps.last().unwrap()), "(q1,ε)");
}

#[test]
fn control_variables_are_state_names() {
    let m = anbn_machine();
    let c = encode_control(&m);
    assert!(matches!(c.kind(), Kind::Rec(n, _) if n.as_str() == "q1"));
    assert!(c.to_string().contains("rec q2."));
}
