mod common;

use asyncsub::ast::parse;
use asyncsub::cfsm::{build_cfsm, to_dot, Polarity};
use asyncsub::queue_machine::{anbn_machine, encode_queue};
use common::Shape;
use proptest::prelude::*;

proptest! {
    #[test]
    fn no_mixed_states(seed in any::<u64>()) {
        let t = common::session_type(&mut common::rng(seed), Shape::any(20));
        let c = build_cfsm(&t).unwrap();
        for q in 0..c.states.len() {
            let pols: Vec<Polarity> = c.outgoing(q).map(|tr| tr.polarity).collect();
            prop_assert!(pols.windows(2).all(|w| w[0] == w[1]), "state {} of {}", q, t);
        }
    }

    #[test]
    fn single_choice_types_are_linear(seed in any::<u64>()) {
        let t = common::session_type(&mut common::rng(seed), Shape::single_choice(20));
        let c = build_cfsm(&t).unwrap();
        prop_assert!((0..c.states.len()).all(|q| c.outgoing(q).count() <= 1));
    }

    #[test]
    fn state_count_ignores_bound_names(seed in any::<u64>()) {
        let t = common::session_type(&mut common::rng(seed), Shape::any(20));
        let renamed = parse(&t.to_string().replace('x', "y")).unwrap();
        let (a, b) = (build_cfsm(&t).unwrap(), build_cfsm(&renamed).unwrap());
        prop_assert_eq!(a.states.len(), b.states.len());
        prop_assert_eq!(to_dot(&build_cfsm(&t).unwrap()), to_dot(&a));
    }
}

#[test]
fn small_loop_dot() {
    let c = build_cfsm(&parse("rec t. &{l: +{l: t}}").unwrap()).unwrap();
    let expected = "digraph cfsm {\n  rankdir=LR;\n  node [shape=circle];\n  \
        0 [label=\"0\", tooltip=\"rec t. &{l: +{l: t}}\", shape=doublecircle];\n  \
        1 [label=\"1\", tooltip=\"+{l: rec t. &{l: +{l: t}}}\"];\n  \
        0 -> 1 [label=\"l?\"];\n  1 -> 0 [label=\"l!\"];\n}\n";
    assert_eq!(to_dot(&c), expected);
}

#[test]
fn encoded_queue_shares_the_post_marker_state() {
    let m = anbn_machine();
    let c = build_cfsm(&encode_queue(&m, &m.tokenize("ab$").unwrap())).unwrap();
    assert_eq!(c.states.len(), 6);
    let edges: Vec<String> =
        c.transitions.iter().map(|t| format!("{}{}{}{}", t.from, t.label, t.polarity, t.to)).collect();
    assert_eq!(edges, ["0a?1", "1b?2", "2$?3", "3a!4", "3b!5", "3$!2", "4a?3", "5b?3"]);
}
