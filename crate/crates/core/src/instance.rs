//! Clustering instances, outcomes, and the group-size quota shared by the
//! auditors.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{Distance, MetricSpace, PointId, Rational};

/// Which points may be opened as centers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CandidateSet {
    /// Every point of the metric space.
    All,
    List(Vec<PointId>),
}

/// Agents `N`, candidates `C`, and committee size `k` over a metric space.
///
/// Agents are addressed by position (`0..n`); duplicate point ids among the
/// agents are distinct agents. Candidates are addressed by point id, and
/// their listed order is the tie-breaking order used by the algorithms.
#[derive(Debug, Clone)]
pub struct Instance {
    space: Arc<MetricSpace>,
    agents: Vec<PointId>,
    candidate_spec: CandidateSet,
    candidates: Vec<PointId>,
    k: usize,
}

impl Instance {
    pub fn new(space: Arc<MetricSpace>, agents: Vec<PointId>, candidates: CandidateSet, k: usize) -> Result<Self> {
        if agents.is_empty() {
            return Err(Error::InvalidInstance("at least one agent is required".into()));
        }
        if k == 0 {
            return Err(Error::InvalidInstance("k must be positive".into()));
        }
        for &a in &agents {
            space.check_point(a)?;
        }
        let expanded = match &candidates {
            CandidateSet::All => (0..space.len()).collect(),
            CandidateSet::List(list) => {
                let mut seen = BTreeSet::new();
                for &c in list {
                    space.check_point(c)?;
                    if !seen.insert(c) {
                        return Err(Error::InvalidInstance(format!("candidate {c} listed twice")));
                    }
                }
                list.clone()
            }
        };
        Ok(Instance { space, agents, candidate_spec: candidates, candidates: expanded, k })
    }

    pub fn space(&self) -> &MetricSpace {
        &self.space
    }

    pub fn shared_space(&self) -> &Arc<MetricSpace> {
        &self.space
    }

    pub fn agents(&self) -> &[PointId] {
        &self.agents
    }

    pub fn candidates(&self) -> &[PointId] {
        &self.candidates
    }

    pub fn candidate_spec(&self) -> &CandidateSet {
        &self.candidate_spec
    }

    pub fn n(&self) -> usize {
        self.agents.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Distance from agent `i` (by position) to point `p`.
    #[inline]
    pub fn agent_dist(&self, i: usize, p: PointId) -> Distance {
        self.space.dist(self.agents[i], p)
    }

    /// Distance between agents `i` and `j` (by position).
    #[inline]
    pub fn agent_agent_dist(&self, i: usize, j: usize) -> Distance {
        self.space.dist(self.agents[i], self.agents[j])
    }

    pub fn is_candidate(&self, p: PointId) -> bool {
        match self.candidate_spec {
            CandidateSet::All => p < self.space.len(),
            CandidateSet::List(_) => self.candidates.contains(&p),
        }
    }

    /// `N ⊆ C` as point sets.
    pub fn agents_within_candidates(&self) -> bool {
        self.agents.iter().all(|&a| self.is_candidate(a))
    }

    /// `N = C` as point sets.
    pub fn agents_equal_candidates(&self) -> bool {
        let a: BTreeSet<_> = self.agents.iter().copied().collect();
        let c: BTreeSet<_> = self.candidates.iter().copied().collect();
        a == c
    }

    /// Same space, agents and `k`, different candidates.
    pub fn with_candidates(&self, candidates: CandidateSet) -> Result<Instance> {
        Instance::new(self.space.clone(), self.agents.clone(), candidates, self.k)
    }

    /// Same space, agents and candidates, different `k`.
    pub fn with_k(&self, k: usize) -> Result<Instance> {
        Instance::new(self.space.clone(), self.agents.clone(), self.candidate_spec.clone(), k)
    }

    pub fn quota(&self, ell: usize, gamma: Rational) -> Result<usize> {
        quota(self.n(), self.k, ell, gamma)
    }
}

/// Smallest group size `⌈γ·ℓ·n/k⌉`, computed exactly.
pub fn quota(n: usize, k: usize, ell: usize, gamma: Rational) -> Result<usize> {
    Quota::new(n, k, ell, gamma).map(|q| q.value)
}

/// A group-size threshold `m = ⌈γ·ℓ·n/k⌉`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quota {
    pub ell: usize,
    pub gamma: Rational,
    pub value: usize,
}

impl Quota {
    pub fn new(n: usize, k: usize, ell: usize, gamma: Rational) -> Result<Quota> {
        if k == 0 {
            return Err(Error::InvalidInstance("quota undefined for k = 0".into()));
        }
        if gamma < Rational::from_integer(1) {
            return Err(Error::Precondition(format!("gamma = {gamma} must be at least 1")));
        }
        let overflow = || Error::Overflow("quota".into());
        let num = (*gamma.numer() as i128)
            .checked_mul(ell as i128)
            .and_then(|x| x.checked_mul(n as i128))
            .ok_or_else(overflow)?;
        let den = (*gamma.denom() as i128).checked_mul(k as i128).ok_or_else(overflow)?;
        let value = usize::try_from((num + den - 1) / den).map_err(|_| overflow())?;
        Ok(Quota { ell, gamma, value })
    }
}

/// Parses `"3/2"`, `"1.5"` or `"2"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let den = 10i64.pow(frac.len() as u32);
        let frac: i64 = frac.parse().map_err(|_| bad())?;
        let num = int.abs().checked_mul(den).and_then(|x| x.checked_add(frac)).ok_or_else(bad)?;
        return Ok(Rational::new(if negative { -num } else { num }, den));
    }
    s.parse::<i64>().map(Rational::from_integer).map_err(|_| bad())
}

/// How an outcome was produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Origin {
    Algorithm {
        name: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        #[serde(default)]
        restricted: bool,
    },
    External,
}

/// A set of opened centers `W`, stored sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    centers: Vec<PointId>,
    pub origin: Origin,
}

impl Outcome {
    pub fn new(centers: impl IntoIterator<Item = PointId>, origin: Origin) -> Self {
        let set: BTreeSet<PointId> = centers.into_iter().collect();
        Outcome { centers: set.into_iter().collect(), origin }
    }

    pub fn external(centers: impl IntoIterator<Item = PointId>) -> Self {
        Self::new(centers, Origin::External)
    }

    pub fn centers(&self) -> &[PointId] {
        &self.centers
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn contains(&self, p: PointId) -> bool {
        self.centers.binary_search(&p).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "lowercase")]
pub enum OutcomeViolation {
    /// More centers than `k`.
    Size { centers: usize, k: usize },
    /// A center that is not a candidate.
    Membership { id: PointId },
    /// A center id outside the metric space.
    Id { id: PointId },
}

/// Checks `W ⊆ C`, `|W| ≤ k`, and id validity.
pub fn validate(instance: &Instance, outcome: &Outcome) -> std::result::Result<(), Vec<OutcomeViolation>> {
    let mut violations = Vec::new();
    if outcome.len() > instance.k() {
        violations.push(OutcomeViolation::Size { centers: outcome.len(), k: instance.k() });
    }
    for &c in outcome.centers() {
        if c >= instance.space().len() {
            violations.push(OutcomeViolation::Id { id: c });
        } else if !instance.is_candidate(c) {
            violations.push(OutcomeViolation::Membership { id: c });
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

pub(crate) fn require_valid(instance: &Instance, outcome: &Outcome) -> Result<()> {
    validate(instance, outcome).map_err(Error::InvalidOutcome)
}
