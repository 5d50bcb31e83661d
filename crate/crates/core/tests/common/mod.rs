//! Random session types and queue machines shared by the integration suites.
#![allow(dead_code)]

use asyncsub::ast::{is_single_input, is_single_output, unfold, Label, Name, SessionType};
use asyncsub::queue_machine::{QueueMachine, Transition};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub single_output: bool,
    pub single_input: bool,
    /// Upper bound on the number of constructors.
    pub max_size: usize,
    pub labels: &'static [&'static str],
}

impl Shape {
    pub fn any(max_size: usize) -> Shape {
        Shape { single_output: false, single_input: false, max_size, labels: &["a", "b", "c"] }
    }

    pub fn single_choice(max_size: usize) -> Shape {
        Shape { single_output: true, single_input: true, max_size, labels: &["a", "b"] }
    }
}

struct Gen<'a, R> {
    rng: &'a mut R,
    shape: Shape,
    budget: usize,
    next_name: usize,
}

impl<R: Rng> Gen<'_, R> {
    fn labels(&mut self, single: bool) -> Vec<Label> {
        let n = if single { 1 } else { self.rng.gen_range(1..=self.shape.labels.len().min(3)) };
        let mut ls: Vec<&str> = self.shape.labels.to_vec();
        ls.shuffle(self.rng);
        ls.into_iter().take(n).map(Label::new).collect()
    }

    // `scope` holds the enclosing binders with whether a communication
    // separates each from the current position.
    fn term(&mut self, scope: &mut Vec<(Name, bool)>) -> SessionType {
        let guarded: Vec<Name> = scope.iter().filter(|(_, g)| *g).map(|(n, _)| n.clone()).collect();
        if self.budget <= 1 {
            return self.leaf(&guarded);
        }
        let roll = self.rng.gen_range(0..100);
        let recs_allowed = !matches!(scope.last(), Some((_, false)));
        if roll < 12 {
            return self.leaf(&guarded);
        }
        if roll < 30 && recs_allowed && self.budget >= 3 {
            self.budget -= 1;
            let name = Name::new(format!("x{}", self.next_name));
            self.next_name += 1;
            scope.push((name.clone(), false));
            let body = self.term(scope);
            scope.pop();
            return SessionType::rec(name, body);
        }
        let select = roll < 65;
        let single = if select { self.shape.single_output } else { self.shape.single_input };
        let labels = self.labels(single);
        self.budget = self.budget.saturating_sub(1);
        let saved: Vec<bool> = scope.iter().map(|(_, g)| *g).collect();
        scope.iter_mut().for_each(|(_, g)| *g = true);
        let mut choices = Vec::new();
        for l in labels {
            let t = if self.budget == 0 { self.leaf_from(scope) } else { self.term(scope) };
            choices.push((l, t));
        }
        scope.iter_mut().zip(saved).for_each(|((_, g), s)| *g = s);
        if select {
            SessionType::select(choices)
        } else {
            SessionType::branch(choices)
        }
    }

    fn leaf_from(&mut self, scope: &[(Name, bool)]) -> SessionType {
        let guarded: Vec<Name> = scope.iter().filter(|(_, g)| *g).map(|(n, _)| n.clone()).collect();
        self.leaf(&guarded)
    }

    fn leaf(&mut self, guarded: &[Name]) -> SessionType {
        self.budget = self.budget.saturating_sub(1);
        if !guarded.is_empty() && self.rng.gen_bool(0.8) {
            SessionType::var(guarded.choose(self.rng).unwrap().clone())
        } else {
            SessionType::end()
        }
    }
}

/// A closed, contractive type with at most `shape.max_size` constructors.
pub fn session_type<R: Rng>(rng: &mut R, shape: Shape) -> SessionType {
    loop {
        let budget = rng.gen_range(2..=shape.max_size.max(2));
        let mut g = Gen { rng: &mut *rng, shape, budget, next_name: 0 };
        let t = g.term(&mut Vec::new());
        let fits = t.size() <= shape.max_size
            && (!shape.single_output || is_single_output(&t))
            && (!shape.single_input || is_single_input(&t));
        if fits {
            return t;
        }
    }
}

/// A pair in one of the two decidable fragments.
pub fn fragment_pair<R: Rng>(rng: &mut R, max_size: usize) -> (SessionType, SessionType) {
    let labels: &'static [&'static str] = &["a", "b"];
    let roll = rng.gen_range(0..10);
    if roll < 3 {
        // a single-choice type against an unfolding of itself
        let t = session_type(rng, Shape::single_choice(max_size));
        let u = unfold(&t, rng.gen_range(0..=2));
        let s = if u.size() <= max_size { u } else { t.clone() };
        if rng.gen_bool(0.5) {
            (t, s)
        } else {
            (s, t)
        }
    } else if roll < 6 {
        // left single-output and single-input, right single-input
        let t = session_type(rng, Shape { single_output: true, single_input: true, max_size, labels });
        let s = session_type(rng, Shape { single_output: false, single_input: true, max_size, labels });
        (t, s)
    } else {
        // left single-output, right single-input and single-output
        let t = session_type(rng, Shape { single_output: true, single_input: false, max_size, labels });
        let s = session_type(rng, Shape { single_output: true, single_input: true, max_size, labels });
        (t, s)
    }
}

/// A machine with `1..=3` states over `{a, b, $}` or `{a, $}`, writing words
/// of length at most 2.
pub fn queue_machine<R: Rng>(rng: &mut R) -> QueueMachine {
    let states: Vec<String> = (0..rng.gen_range(1..=3)).map(|i| format!("s{}", i)).collect();
    let queue: &[&str] = if rng.gen_bool(0.5) { &["a", "b", "$"] } else { &["a", "$"] };
    let input: Vec<&str> = queue.iter().copied().filter(|a| *a != "$").collect();
    let mut delta = Vec::new();
    for q in &states {
        for a in queue {
            let target = states.choose(rng).unwrap();
            let write: Vec<&str> = (0..rng.gen_range(0..=2)).map(|_| *queue.choose(rng).unwrap()).collect();
            delta.push(Transition::new(q, a, target, &write));
        }
    }
    let refs: Vec<&str> = states.iter().map(String::as_str).collect();
    QueueMachine::new(&refs, &input, queue, "$", &states[0], delta).expect("generated machine is well formed")
}
