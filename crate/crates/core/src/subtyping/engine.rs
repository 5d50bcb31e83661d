use std::collections::{HashSet, VecDeque};
use std::fmt;

use crate::ast::{Annotator, SessionType};

use super::rules::{step, Judgment, Mode, Rule, Stuck};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Subtype,
    NotSubtype,
    FuelExhausted,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Subtype => "subtype",
            Verdict::NotSubtype => "not a subtype",
            Verdict::FuelExhausted => "fuel exhausted",
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub rule_applications: u64,
    /// Largest environment seen on any judgment.
    pub sigma_max: usize,
    /// Distinct `(left, right)` judgments consumed, right sides compared
    /// without annotations.
    pub visited_pairs: usize,
}

/// One rule application: `<rule> | <left> | <right> | <|Σ|>`.
#[derive(Debug, Clone)]
pub struct TraceEntry {
    pub rule: Rule,
    pub left: SessionType,
    pub right: SessionType,
    pub sigma: usize,
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {} | {} | {}", self.rule, self.left, self.right, self.sigma)
    }
}

/// Rule applications in the order performed. `entries` is empty unless
/// tracing was requested.
#[derive(Debug, Clone, Default)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
    pub stats: Stats,
}

#[derive(Debug, Clone)]
pub enum CheckResult {
    /// Every derivation path closed with Asmp, Asmp2, Asmp3 or End.
    Subtype { trace: Trace },
    /// Some reachable judgment has no applicable rule.
    NotSubtype { failing: Stuck, trace: Trace },
    /// The fuel ran out with `frontier` judgments still open.
    FuelExhausted { frontier: usize, steps: u64, trace: Trace },
}

impl CheckResult {
    pub fn verdict(&self) -> Verdict {
        match self {
            CheckResult::Subtype { .. } => Verdict::Subtype,
            CheckResult::NotSubtype { .. } => Verdict::NotSubtype,
            CheckResult::FuelExhausted { .. } => Verdict::FuelExhausted,
        }
    }

    pub fn trace(&self) -> &Trace {
        match self {
            CheckResult::Subtype { trace }
            | CheckResult::NotSubtype { trace, .. }
            | CheckResult::FuelExhausted { trace, .. } => trace,
        }
    }

    pub fn stats(&self) -> Stats {
        self.trace().stats
    }
}

/// Default [`Checker::with_size_budget`] for the plain rule set.
pub const DEFAULT_SIZE_BUDGET: u64 = 10_000_000;

/// Breadth-first driver for the rule system.
#[derive(Debug, Clone)]
pub struct Checker {
    mode: Mode,
    fuel: u64,
    size_budget: u64,
    trace: bool,
}

impl Checker {
    /// The plain rule set, with a default fuel of 10⁵ rule applications.
    pub fn semi() -> Checker {
        Checker { mode: Mode::Semi, fuel: 100_000, size_budget: DEFAULT_SIZE_BUDGET, trace: false }
    }

    /// The rule set extended with Asmp2/Asmp3, without a fuel bound.
    pub fn terminating() -> Checker {
        Checker { mode: Mode::Terminating, fuel: u64::MAX, size_budget: u64::MAX, trace: false }
    }

    /// Maximum number of rule applications.
    pub fn with_fuel(mut self, fuel: u64) -> Checker {
        self.fuel = fuel;
        self
    }

    /// Maximum total number of constructors over the distinct judgments
    /// visited. Running past it counts as running out of fuel.
    pub fn with_size_budget(mut self, budget: u64) -> Checker {
        self.size_budget = budget;
        self
    }

    pub fn with_trace(mut self, trace: bool) -> Checker {
        self.trace = trace;
        self
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Checks `∅ ⊢ t ≤ s`. In terminating mode the right side is decorated first.
    pub fn run(&self, t: &SessionType, s: &SessionType) -> CheckResult {
        let mut annotator = Annotator::new();
        let left = t.erase().with_unique_binders();
        let mut right = s.erase().with_unique_binders();
        if self.mode == Mode::Terminating {
            right = right.decorate(&mut annotator);
        }

        let mut trace = Trace::default();
        let mut seen: HashSet<(SessionType, SessionType)> = HashSet::new();
        let mut retained: u64 = 0;
        let mut work = VecDeque::from([Judgment::initial(left, right)]);
        while let Some(j) = work.pop_front() {
            if trace.stats.rule_applications >= self.fuel || retained > self.size_budget {
                let steps = trace.stats.rule_applications;
                return CheckResult::FuelExhausted { frontier: work.len() + 1, steps, trace };
            }
            trace.stats.sigma_max = trace.stats.sigma_max.max(j.env.len());
            if seen.insert((j.left.clone(), j.right.clone())) {
                trace.stats.visited_pairs += 1;
                retained = retained.saturating_add((j.left.size() + j.right.size()) as u64);
            }
            match step(&j, self.mode, &mut annotator) {
                Ok(app) => {
                    trace.stats.rule_applications += 1;
                    if self.trace {
                        trace.entries.push(TraceEntry {
                            rule: app.rule,
                            left: j.left.clone(),
                            right: j.right.clone(),
                            sigma: j.env.len(),
                        });
                    }
                    for p in app.produced {
                        trace.stats.sigma_max = trace.stats.sigma_max.max(p.env.len());
                        work.push_back(p);
                    }
                }
                Err(failing) => return CheckResult::NotSubtype { failing, trace },
            }
        }
        CheckResult::Subtype { trace }
    }
}
