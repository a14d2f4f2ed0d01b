//! Proportional clustering over finite metric spaces.
//!
//! Three clustering rules (greedy capture, expanding approvals, fair greedy
//! capture) and exact auditors for the proportionality notions they are
//! measured against. Audits return the binding witness with every value and
//! flag results that hit an enumeration cap.

pub mod algorithms;
pub mod audit;
pub mod fixtures;
pub mod generate;
pub mod io;
pub mod oracle;
mod error;
pub mod instance;
pub mod metric;

pub use algorithms::{
    expanding_approvals, fair_greedy_capture, greedy_capture, restricted_solve, RestrictedRule, Rule, Seed, Trace,
};
pub use audit::{audit, AuditParams, AuditReport, AuditResult, Notion, RankCaps, Status, Witness};
pub use error::{Error, Result};
pub use instance::{quota, validate, CandidateSet, Instance, Outcome};
pub use metric::{Distance, MetricSpace, PointId, Rational, TOLERANCE};
