//! Asynchronous subtyping: the rule-based semi-algorithm, its terminating
//! extension for the single-choice fragments, and a bounded reference oracle.

mod asmp;
mod depth;
mod engine;
mod env;
mod fragment;
mod oracle;
mod rules;

pub use asmp::{match_asmp2, match_asmp3, period_witness, Asmp2Match, Asmp3Match, Period};
pub use depth::depth;
pub use engine::{CheckResult, Checker, Stats, Trace, TraceEntry, Verdict, DEFAULT_SIZE_BUDGET};
pub use env::{Environment, InputChain, StoredPair};
pub use fragment::{classify_pair, decidable_fragment, FragmentViolation, PairClass, Predicate, Side};
pub use oracle::{oracle_check, OracleVerdict, TERM_SIZE_BOUND, UNFOLD_BOUND};
pub use rules::{step, Judgment, Mode, Rule, RuleApplication, Stuck, StuckReason};

use crate::ast::SessionType;

/// Runs the plain rule set from `∅ ⊢ t ≤ s` for at most `fuel` rule applications.
pub fn semi_check(t: &SessionType, s: &SessionType, fuel: u64) -> CheckResult {
    Checker::semi().with_fuel(fuel).run(t, s)
}

/// Decides `t ≤ s` on the single-choice fragments.
pub fn decide(t: &SessionType, s: &SessionType) -> Result<CheckResult, FragmentViolation> {
    decidable_fragment(t, s)?;
    Ok(Checker::terminating().run(t, s))
}

/// [`decide`] with a cap on rule applications, reported as
/// [`CheckResult::FuelExhausted`] when reached.
pub fn decide_bounded(t: &SessionType, s: &SessionType, ceiling: u64) -> Result<CheckResult, FragmentViolation> {
    decidable_fragment(t, s)?;
    Ok(Checker::terminating().with_fuel(ceiling).run(t, s))
}
