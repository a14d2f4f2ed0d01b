//! Proportional clustering rules. Each returns the outcome together with a
//! replayable trace of the radius sweep.

mod expanding_approvals;
mod fair_greedy_capture;
mod greedy_capture;
mod trace;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use expanding_approvals::{
    expanding_approvals, expanding_approvals_with, BudgetState, ClosestFirst, DeductionPolicy, FarthestFirst,
    Supporter,
};
pub use fair_greedy_capture::fair_greedy_capture;
pub use greedy_capture::greedy_capture;
pub use trace::{EventKind, Trace, TraceEvent};

use crate::error::{Error, Result};
use crate::instance::{CandidateSet, Instance, Origin, Outcome};
use crate::metric::TOLERANCE;

/// Seed for the deterministic generator used by randomized rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed(pub u64);

/// Rules that can run on the agent-only candidate set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestrictedRule {
    GreedyCapture,
    ExpandingApprovals,
}

/// Runs `rule` with the candidate set shrunk to the agents' points (kept in
/// the original candidate order) and tags the outcome as restricted.
pub fn restricted_solve(instance: &Instance, rule: RestrictedRule) -> Result<(Outcome, Trace)> {
    if !instance.agents_within_candidates() {
        return Err(Error::Precondition("restricted solving needs every agent to be a candidate".into()));
    }
    let agent_points: BTreeSet<_> = instance.agents().iter().copied().collect();
    let list = instance.candidates().iter().copied().filter(|c| agent_points.contains(c)).collect();
    let restricted = instance.with_candidates(CandidateSet::List(list))?;
    let (outcome, trace) = match rule {
        RestrictedRule::GreedyCapture => greedy_capture(&restricted)?,
        RestrictedRule::ExpandingApprovals => expanding_approvals(&restricted)?,
    };
    let origin = match outcome.origin.clone() {
        Origin::Algorithm { name, seed, .. } => Origin::Algorithm { name, seed, restricted: true },
        Origin::External => Origin::External,
    };
    Ok((Outcome::new(outcome.centers().iter().copied(), origin), trace))
}

/// Rule selector shared by the command line and the fixture corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Gc,
    Ea,
    Fgc,
    GcRestricted,
    EaRestricted,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Gc => "gc",
            Rule::Ea => "ea",
            Rule::Fgc => "fgc",
            Rule::GcRestricted => "gc-restricted",
            Rule::EaRestricted => "ea-restricted",
        }
    }

    /// Runs the rule; `q` and `seed` are only read by fair greedy capture.
    pub fn run(self, instance: &Instance, q: usize, seed: u64) -> Result<(Outcome, Trace)> {
        match self {
            Rule::Gc => greedy_capture(instance),
            Rule::Ea => expanding_approvals(instance),
            Rule::Fgc => fair_greedy_capture(instance, q, Seed(seed)),
            Rule::GcRestricted => restricted_solve(instance, RestrictedRule::GreedyCapture),
            Rule::EaRestricted => restricted_solve(instance, RestrictedRule::ExpandingApprovals),
        }
    }
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Rule::Gc, Rule::Ea, Rule::Fgc, Rule::GcRestricted, Rule::EaRestricted]
            .into_iter()
            .find(|r| r.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown rule {s:?}")))
    }
}

/// Sorts and merges values closer than the comparison tolerance, keeping the
/// smallest representative of each cluster.
pub(crate) fn distinct_sorted(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(f64::total_cmp);
    let mut out: Vec<f64> = Vec::with_capacity(values.len());
    for v in values {
        if out.last().map_or(true, |&last| v > last + TOLERANCE) {
            out.push(v);
        }
    }
    out
}
