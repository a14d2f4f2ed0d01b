//! Exact fairness auditors.
//!
//! Value audits (`pf`, `if`, `tc` and their `q`-variants) report the
//! smallest approximation factor the outcome satisfies together with the
//! binding witness. Axiom audits (`rank-*`, DPRF, UPRF) report pass or a
//! concrete violation. Every report records whether enumeration caps were
//! hit.

mod clique;
mod dinkelbach;
mod multi;
mod rank;
mod single;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use clique::{find_clique, CliqueSearch};
pub use dinkelbach::{max_subset_ratio, SubsetRatio};
pub use multi::{default_size_cap, q_core_min_alpha, q_if_min_beta, q_tc_min_alpha};
pub use rank::{
    dprf_check, rank_jr_check, rank_pjr_check, rank_pjr_plus_check, thresholds, uprf_check, ApprovalProfile,
    RankCaps, RankViolation,
};
pub use single::{if_min_beta, pf_min_alpha, reevaluate_deviation, tc_min_alpha};

use crate::error::Error;
use crate::instance::{Instance, Outcome};
use crate::metric::{kth_smallest, Distance, PointId, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Notion {
    #[serde(rename = "pf")]
    Pf,
    #[serde(rename = "if")]
    If,
    #[serde(rename = "tc")]
    Tc,
    #[serde(rename = "qcore")]
    QCore,
    #[serde(rename = "qif")]
    QIf,
    #[serde(rename = "qtc")]
    QTc,
    #[serde(rename = "rank-jr")]
    RankJr,
    #[serde(rename = "rank-pjr")]
    RankPjr,
    #[serde(rename = "rank-pjr+")]
    RankPjrPlus,
    #[serde(rename = "dprf")]
    Dprf,
    #[serde(rename = "uprf")]
    Uprf,
}

impl Notion {
    pub const ALL: [Notion; 11] = [
        Notion::Pf,
        Notion::If,
        Notion::Tc,
        Notion::QCore,
        Notion::QIf,
        Notion::QTc,
        Notion::RankJr,
        Notion::RankPjr,
        Notion::RankPjrPlus,
        Notion::Dprf,
        Notion::Uprf,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Notion::Pf => "pf",
            Notion::If => "if",
            Notion::Tc => "tc",
            Notion::QCore => "qcore",
            Notion::QIf => "qif",
            Notion::QTc => "qtc",
            Notion::RankJr => "rank-jr",
            Notion::RankPjr => "rank-pjr",
            Notion::RankPjrPlus => "rank-pjr+",
            Notion::Dprf => "dprf",
            Notion::Uprf => "uprf",
        }
    }

    /// Pass/fail axioms as opposed to minimal-factor audits.
    pub fn is_axiom(self) -> bool {
        matches!(self, Notion::RankJr | Notion::RankPjr | Notion::RankPjrPlus | Notion::Dprf | Notion::Uprf)
    }
}

impl fmt::Display for Notion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Notion {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Notion::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| crate::Error::Parse(format!("unknown notion {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Exact,
    /// An enumeration cap was reached; values are certified lower bounds and
    /// a missing violation is not a certified pass.
    CapExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum AuditResult {
    /// Smallest factor satisfied; may be infinite.
    Value(#[serde(with = "extended_real")] f64),
    Pass,
    Violation,
    /// A cap was hit before either a violation or a complete search.
    Inconclusive,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct AuditParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size_cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_ell: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_budget: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A group deviating to a candidate set. For ratio-of-sums notions the
    /// two sums are recorded.
    Deviation {
        agents: Vec<usize>,
        candidates: Vec<PointId>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ell: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_extended_real")]
        outcome_sum: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        deviation_sum: Option<f64>,
    },
    /// The agent attaining the individual-fairness ratio.
    Agent {
        agent: usize,
        #[serde(with = "extended_real")]
        distance: Distance,
        radius: Distance,
    },
    Rank(RankViolation),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub notion: Notion,
    pub params: AuditParams,
    pub result: AuditResult,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub status: Status,
}

impl AuditReport {
    pub fn value(&self) -> Option<f64> {
        match self.result {
            AuditResult::Value(v) => Some(v),
            _ => None,
        }
    }

    /// `Some(true)` for a pass, `Some(false)` for a violation.
    pub fn passed(&self) -> Option<bool> {
        match self.result {
            AuditResult::Pass => Some(true),
            AuditResult::Violation => Some(false),
            _ => None,
        }
    }

    pub fn rank_violation(&self) -> Option<&RankViolation> {
        match &self.witness {
            Some(Witness::Rank(v)) => Some(v),
            _ => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.status == Status::Exact
    }
}

/// Runs the auditor for `notion`. `q` is required by the `q`-notions and
/// `gamma` by the transferable-core notions; caps fall back to defaults.
pub fn audit(inst: &Instance, w: &Outcome, notion: Notion, params: &AuditParams) -> crate::Result<AuditReport> {
    let need_q = || params.q.ok_or_else(|| Error::Precondition(format!("{notion} needs q")));
    let need_gamma = || params.gamma.ok_or_else(|| Error::Precondition(format!("{notion} needs gamma")));
    let defaults = RankCaps::default();
    let caps = RankCaps {
        max_ell: params.max_ell.unwrap_or(defaults.max_ell),
        node_budget: params.node_budget.unwrap_or(defaults.node_budget),
    };
    match notion {
        Notion::Pf => pf_min_alpha(inst, w),
        Notion::If => if_min_beta(inst, w),
        Notion::Tc => tc_min_alpha(inst, w, need_gamma()?),
        Notion::QCore => q_core_min_alpha(inst, w, need_q()?, params.size_cap),
        Notion::QIf => q_if_min_beta(inst, w, need_q()?),
        Notion::QTc => q_tc_min_alpha(inst, w, need_q()?, need_gamma()?, params.size_cap),
        Notion::RankJr => rank_jr_check(inst, w),
        Notion::RankPjr => rank_pjr_check(inst, w, &caps),
        Notion::RankPjrPlus => rank_pjr_plus_check(inst, w, &caps),
        Notion::Dprf => dprf_check(inst, w, &caps),
        Notion::Uprf => uprf_check(inst, w, &caps),
    }
}

/// `num / den` with the zero conventions shared by all ratio audits:
/// `x/0 = ∞` for `x > 0` and `0/0 = 1`.
#[inline]
pub(crate) fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        if num > 0.0 {
            f64::INFINITY
        } else {
            1.0
        }
    } else {
        num / den
    }
}

/// `q`-th smallest distance from agent `i` to `targets`, or `∞` when there
/// are fewer than `q` targets.
pub(crate) fn agent_dist_q(inst: &Instance, i: usize, targets: &[PointId], q: usize, buf: &mut Vec<f64>) -> f64 {
    if targets.len() < q {
        return f64::INFINITY;
    }
    buf.clear();
    buf.extend(targets.iter().map(|&t| inst.agent_dist(i, t)));
    kth_smallest(buf, q)
}

/// Index list of the `m` largest values (ties by index) and the `m`-th largest value.
pub(crate) fn top_m(values: &[f64], m: usize) -> (Vec<usize>, f64) {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    idx.truncate(m);
    let kth = values[idx[m - 1]];
    idx.sort_unstable();
    (idx, kth)
}

/// Serializes `f64` with infinities as the strings `"inf"` / `"-inf"`.
pub mod extended_real {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
        } else {
            s.serialize_f64(*v)
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(x),
            Repr::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Repr::Text(t) if t == "-inf" => Ok(f64::NEG_INFINITY),
            Repr::Text(t) => Err(serde::de::Error::custom(format!("not a number: {t:?}"))),
        }
    }
}

mod opt_extended_real {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => extended_real::serialize(x, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        extended_real::deserialize(d).map(Some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_conventions() {
        assert_eq!(ratio(2.0, 0.0), f64::INFINITY);
        assert_eq!(ratio(0.0, 0.0), 1.0);
        assert_eq!(ratio(3.0, 2.0), 1.5);
        assert_eq!(ratio(f64::INFINITY, 0.0), f64::INFINITY);
    }

    #[test]
    fn top_m_breaks_ties_by_index() {
        let (idx, kth) = top_m(&[1.0, 3.0, 3.0, 2.0], 2);
        assert_eq!(idx, vec![1, 2]);
        assert_eq!(kth, 3.0);
    }

    #[test]
    fn report_json_round_trip_with_infinity() {
        let r = AuditReport {
            notion: Notion::QTc,
            params: AuditParams { q: Some(2), gamma: Some(Rational::new(3, 2)), ..Default::default() },
            result: AuditResult::Value(f64::INFINITY),
            witness: Some(Witness::Deviation {
                agents: vec![0, 1],
                candidates: vec![3],
                ell: Some(4),
                outcome_sum: Some(1.0),
                deviation_sum: Some(0.0),
            }),
            status: Status::Exact,
        };
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"inf\""));
        assert_eq!(serde_json::from_str::<AuditReport>(&json).unwrap(), r);
    }

    #[test]
    fn notion_names_round_trip() {
        for n in Notion::ALL {
            assert_eq!(n.as_str().parse::<Notion>().unwrap(), n);
            assert_eq!(serde_json::to_string(&n).unwrap(), format!("\"{}\"", n.as_str()));
        }
    }
}
