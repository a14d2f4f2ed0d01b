use serde::{Deserialize, Serialize};

use crate::metric::{Distance, PointId, Rational};

/// One step of a radius sweep. Agents are referenced by position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub delta: Distance,
    #[serde(flatten)]
    pub kind: EventKind,
    /// Agents still in play after the event: uncaptured agents for the
    /// capture rules, agents with positive budget for expanding approvals.
    pub remaining_agents: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum EventKind {
    /// A candidate is opened; `captured` lists the agents it removes.
    Open {
        candidate: PointId,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        captured: Vec<usize>,
    },
    /// A remaining agent is assigned to an already opened center.
    Absorb { agent: usize, center: PointId },
    /// Budget taken from an agent to pay for the preceding opening.
    Deduct { agent: usize, amount: Rational },
    /// A ball around agent `center` is captured: `selected` points join the
    /// outcome, `deleted` agents leave the sweep.
    Capture {
        center: usize,
        selected: Vec<PointId>,
        deleted: Vec<usize>,
    },
    /// Agents never captured because fewer than a quota remained.
    Leftover { agents: Vec<usize> },
    /// Final uniform fill of the outcome.
    Fill { candidate: PointId },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Trace {
    pub events: Vec<TraceEvent>,
}

impl Trace {
    pub(crate) fn push(&mut self, delta: Distance, kind: EventKind, remaining_agents: usize) {
        // Keep the recorded radius monotone even when tolerance merges nearby values.
        let delta = self.events.last().map_or(delta, |e| e.delta.max(delta));
        self.events.push(TraceEvent { delta, kind, remaining_agents });
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &TraceEvent> {
        self.events.iter()
    }
}
