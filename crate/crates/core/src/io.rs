//! JSON file formats for instances and outcomes.
//!
//! ```json
//! {"metric": {"type": "graph", "nodes": 3, "edges": [[0, 1, 1], [1, 2, [1, 2]]]},
//!  "agents": [0, 1, 2], "candidates": "all", "k": 2}
//! ```
//!
//! Metrics are `matrix` (`d`), `graph` (`nodes`, `edges` with integer or
//! `[num, den]` weights) or `points` (`dim`, `coords`, `norm`). Outcomes are
//! `{"W": [...], "alg": ..., "seed": ..., "trace": [...]}` with everything but
//! `W` optional.

use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algorithms::Trace;
use crate::error::{Error, Result};
use crate::instance::{CandidateSet, Instance, Origin, Outcome};
use crate::metric::{MetricDescriptor, MetricSpace, PointId};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub metric: MetricDescriptor,
    pub agents: Vec<PointId>,
    #[serde(with = "candidates_repr")]
    pub candidates: CandidateSet,
    pub k: usize,
    /// Optional display names for the points of the metric space.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance) -> Self {
        InstanceFile {
            metric: inst.space().descriptor().clone(),
            agents: inst.agents().to_vec(),
            candidates: inst.candidate_spec().clone(),
            k: inst.k(),
            labels: None,
        }
    }

    pub fn to_instance(&self) -> Result<Instance> {
        let space = MetricSpace::new(self.metric.clone())?;
        if let Some(labels) = &self.labels {
            if labels.len() != space.len() {
                return Err(Error::InvalidInstance(format!(
                    "{} labels for {} points",
                    labels.len(),
                    space.len()
                )));
            }
        }
        Instance::new(Arc::new(space), self.agents.clone(), self.candidates.clone(), self.k)
    }

    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files always serialize")
    }
}

/// Parses an instance straight from JSON text.
pub fn parse_instance(json: &str) -> Result<Instance> {
    InstanceFile::parse(json)?.to_instance()
}

mod candidates_repr {
    use super::*;

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Tag(String),
        List(Vec<PointId>),
    }

    pub fn serialize<S: Serializer>(c: &CandidateSet, s: S) -> std::result::Result<S::Ok, S::Error> {
        match c {
            CandidateSet::All => Repr::Tag("all".into()),
            CandidateSet::List(l) => Repr::List(l.clone()),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<CandidateSet, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Tag(t) if t == "all" => Ok(CandidateSet::All),
            Repr::Tag(t) => Err(serde::de::Error::custom(format!("candidates must be \"all\" or a list, got {t:?}"))),
            Repr::List(l) => Ok(CandidateSet::List(l)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutcomeFile {
    #[serde(rename = "W")]
    pub w: Vec<PointId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alg: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub restricted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Trace>,
}

impl OutcomeFile {
    pub fn new(outcome: &Outcome, trace: Option<Trace>) -> Self {
        let (alg, seed, restricted) = match &outcome.origin {
            Origin::Algorithm { name, seed, restricted } => (Some(name.clone()), *seed, *restricted),
            Origin::External => (None, None, false),
        };
        OutcomeFile { w: outcome.centers().to_vec(), alg, seed, restricted, trace }
    }

    pub fn outcome(&self) -> Outcome {
        let origin = match &self.alg {
            Some(name) => Origin::Algorithm { name: name.clone(), seed: self.seed, restricted: self.restricted },
            None => Origin::External,
        };
        Outcome::new(self.w.iter().copied(), origin)
    }

    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("outcome files always serialize")
    }
}
