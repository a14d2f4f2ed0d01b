//! Embedded corpus of small worked instances, each with the audit results it
//! is known to produce, and the evaluation behind `propclust repro`.
//!
//! Ids look like `fig2a`, `fig3a(k=4)`, `fig4a(2)`, `fig4b(β=3/2)`,
//! `lb_tc(1,2,400,4)` or `qtc_blocks(q=2,n=10,k=4)`. Points of the numbered
//! figures use their printed labels; point id = label − 1.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algorithms::Rule;
use crate::audit::{audit, reevaluate_deviation, AuditParams, AuditReport, AuditResult, Notion, Witness};
use crate::error::{Error, Result};
use crate::instance::{parse_rational, CandidateSet, Instance, Outcome};
use crate::io::InstanceFile;
use crate::metric::{Edge, MetricDescriptor, PointId, Rational, TOLERANCE};
use crate::oracle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixtureName {
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig4a,
    Fig4b,
    Fig4c,
    PathUprf,
    LbTc,
    QtcBlocks,
}

impl FixtureName {
    pub const ALL: [FixtureName; 10] = [
        FixtureName::Fig2a,
        FixtureName::Fig2b,
        FixtureName::Fig3a,
        FixtureName::Fig3b,
        FixtureName::Fig4a,
        FixtureName::Fig4b,
        FixtureName::Fig4c,
        FixtureName::PathUprf,
        FixtureName::LbTc,
        FixtureName::QtcBlocks,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FixtureName::Fig2a => "fig2a",
            FixtureName::Fig2b => "fig2b",
            FixtureName::Fig3a => "fig3a",
            FixtureName::Fig3b => "fig3b",
            FixtureName::Fig4a => "fig4a",
            FixtureName::Fig4b => "fig4b",
            FixtureName::Fig4c => "fig4c",
            FixtureName::PathUprf => "path_uprf",
            FixtureName::LbTc => "lb_tc",
            FixtureName::QtcBlocks => "qtc_blocks",
        }
    }

    fn param_names(self) -> &'static [&'static str] {
        match self {
            FixtureName::Fig4a => &["α"],
            FixtureName::Fig4b | FixtureName::Fig4c => &["β"],
            FixtureName::LbTc => &["α", "γ", "n", "k"],
            FixtureName::QtcBlocks => &["q", "n", "k"],
            _ => &[],
        }
    }

    fn default_params(self) -> Vec<Rational> {
        let r = |v: &[i64]| v.iter().map(|&x| Rational::from_integer(x)).collect();
        match self {
            FixtureName::Fig4a | FixtureName::Fig4b | FixtureName::Fig4c => r(&[2]),
            FixtureName::LbTc => r(&[1, 2, 400, 4]),
            FixtureName::QtcBlocks => r(&[2, 10, 4]),
            _ => Vec::new(),
        }
    }
}

/// A fixture name with its parameters and an optional `k` override.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FixtureId {
    pub name: FixtureName,
    pub params: Vec<Rational>,
    /// Overrides the default `k` of [`Fixture::instance`] for fixtures
    /// without a `k` parameter. The stored checks keep their own `k`.
    pub k: Option<usize>,
}

impl FixtureId {
    pub fn new(name: FixtureName) -> Self {
        FixtureId { name, params: name.default_params(), k: None }
    }

    /// Every fixture at its default parameters.
    pub fn all() -> Vec<FixtureId> {
        FixtureName::ALL.into_iter().map(FixtureId::new).collect()
    }

    fn int_param(&self, idx: usize) -> Result<usize> {
        let v = self.params[idx];
        if !v.is_integer() || v < Rational::from_integer(0) {
            return Err(Error::Parse(format!("{}: {} must be a non-negative integer", self.name.as_str(), self.name.param_names()[idx])));
        }
        Ok(v.to_integer() as usize)
    }
}

impl fmt::Display for FixtureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name.as_str())?;
        let mut args: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
        if let Some(k) = self.k {
            args.push(format!("k={k}"));
        }
        if !args.is_empty() {
            write!(f, "({})", args.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for FixtureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |msg: String| Error::Parse(format!("fixture {s:?}: {msg}"));
        let (head, args) = match s.find('(') {
            Some(open) => {
                let inner = s[open + 1..].strip_suffix(')').ok_or_else(|| bad("missing ')'".into()))?;
                (&s[..open], Some(inner))
            }
            None => (s, None),
        };
        let name = FixtureName::ALL
            .into_iter()
            .find(|n| n.as_str() == head.trim())
            .ok_or_else(|| bad("unknown fixture".into()))?;
        let names = name.param_names();
        let mut params: Vec<Option<Rational>> = vec![None; names.len()];
        let mut k = None;
        for arg in args.into_iter().flat_map(|a| a.split(',')).map(str::trim).filter(|a| !a.is_empty()) {
            let (key, value) = match arg.split_once('=') {
                Some((key, value)) => (Some(canonical_key(key.trim())), value),
                None => (None, arg),
            };
            let value = parse_rational(value)?;
            let slot = match key {
                Some(key) => match names.iter().position(|n| *n == key) {
                    Some(i) => i,
                    None if key == "k" => {
                        if !value.is_integer() || value <= Rational::from_integer(0) {
                            return Err(bad("k must be a positive integer".into()));
                        }
                        k = Some(value.to_integer() as usize);
                        continue;
                    }
                    None => return Err(bad(format!("unknown parameter {key}"))),
                },
                None => params.iter().position(Option::is_none).ok_or_else(|| bad("too many parameters".into()))?,
            };
            if params[slot].replace(value).is_some() {
                return Err(bad(format!("{} given twice", names[slot])));
            }
        }
        let defaults = name.default_params();
        let params = params.into_iter().zip(defaults).map(|(p, d)| p.unwrap_or(d)).collect();
        Ok(FixtureId { name, params, k })
    }
}

fn canonical_key(key: &str) -> &str {
    match key {
        "alpha" | "a" => "α",
        "beta" | "b" => "β",
        "gamma" | "g" => "γ",
        other => other,
    }
}

/// What a check evaluates.
#[derive(Debug, Clone, PartialEq)]
pub enum Probe {
    /// A fast auditor.
    Audit { notion: Notion, params: AuditParams },
    /// The brute-force reference auditor.
    Oracle { notion: Notion, params: AuditParams },
    /// Re-evaluates a given deviation (min of per-agent ratios, or ratio of
    /// sums when `sums`).
    Deviation { notion: Notion, agents: Vec<usize>, candidates: Vec<PointId>, q: usize, sums: bool },
    /// `d^q(from, to)`, with `to` defaulting to the outcome when empty.
    Distance { from: PointId, to: Vec<PointId>, q: usize },
    /// Runs a rule with seeds `0..seeds`.
    Solve { rule: Rule, q: usize, seeds: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expected {
    Value(f64),
    /// Value attained at the given agent (index into the agent list).
    ValueAt(f64, usize),
    AtLeast(f64),
    Above(f64),
    /// Within relative tolerance `.1` of `.0`.
    Near(f64, f64),
    Infinite,
    Finite,
    Pass,
    Violation,
    ViolationAt { y: f64, ell: usize, candidates: Vec<PointId>, group: Option<Vec<usize>> },
    /// Exact outcome of a deterministic rule.
    Centers(Vec<PointId>),
    /// Outcome size for every seed.
    Size(usize),
    /// Some seed produces this outcome.
    Reachable(Vec<PointId>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub k: usize,
    pub outcome: Vec<PointId>,
    pub probe: Probe,
    pub expected: Expected,
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub id: FixtureId,
    /// Instance at the default (or overridden) `k`, with point labels.
    pub file: InstanceFile,
    pub notes: Vec<String>,
    pub checks: Vec<Check>,
}

impl Fixture {
    pub fn instance(&self) -> Result<Instance> {
        self.file.to_instance()
    }

    pub fn label(&self, p: PointId) -> String {
        self.file.labels.as_ref().and_then(|l| l.get(p).cloned()).unwrap_or_else(|| p.to_string())
    }

    /// Point id of a label.
    pub fn point(&self, label: &str) -> Option<PointId> {
        self.file.labels.as_ref()?.iter().position(|l| l == label)
    }

    /// Parses a comma-separated list of labels such as `"1,2,3,6,9"`.
    pub fn points(&self, labels: &str) -> Result<Vec<PointId>> {
        labels
            .trim_matches(|c| c == '{' || c == '}')
            .split(',')
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| self.point(l).ok_or_else(|| Error::Parse(format!("{}: no point labelled {l:?}", self.id))))
            .collect()
    }

    fn set(&self, points: &[PointId]) -> String {
        format!("{{{}}}", points.iter().map(|&p| self.label(p)).collect::<Vec<_>>().join(","))
    }

    /// Agents by label; repeated labels are counted, e.g. `{99×c,101×p}`.
    fn agent_set(&self, agents: &[usize]) -> String {
        let mut counts: Vec<(String, usize)> = Vec::new();
        for &i in agents {
            let label = self.label(self.file.agents[i]);
            match counts.iter_mut().find(|(l, _)| *l == label) {
                Some((_, c)) => *c += 1,
                None => counts.push((label, 1)),
            }
        }
        let parts: Vec<String> =
            counts.into_iter().map(|(l, c)| if c == 1 { l } else { format!("{c}×{l}") }).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// Builds the fixture behind `id`.
pub fn fixture(id: &FixtureId) -> Result<Fixture> {
    let mut fx = match id.name {
        FixtureName::Fig2a => fig2a(),
        FixtureName::Fig2b => fig2b(),
        FixtureName::Fig3a => fig3a(),
        FixtureName::Fig3b => fig3b(),
        FixtureName::Fig4a => fig4a(positive(id, 0)?),
        FixtureName::Fig4b => fig4b(positive(id, 0)?),
        FixtureName::Fig4c => fig4c(positive(id, 0)?),
        FixtureName::PathUprf => path_uprf(),
        FixtureName::LbTc => lb_tc(id)?,
        FixtureName::QtcBlocks => qtc_blocks(id)?,
    };
    fx.id = id.clone();
    if let Some(k) = id.k {
        fx.file.k = k;
    }
    Ok(fx)
}

fn positive(id: &FixtureId, idx: usize) -> Result<Rational> {
    let v = id.params[idx];
    if v <= Rational::from_integer(0) {
        return Err(Error::Parse(format!("{}: {} must be positive", id.name.as_str(), id.name.param_names()[idx])));
    }
    Ok(v)
}

fn f(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn numbered(nodes: usize, edges: &[(usize, usize, Rational)], k: usize) -> InstanceFile {
    InstanceFile {
        metric: MetricDescriptor::Graph {
            nodes,
            edges: edges.iter().map(|&(u, v, w)| Edge::new(u - 1, v - 1, w)).collect(),
        },
        agents: (0..nodes).collect(),
        candidates: CandidateSet::All,
        k,
        labels: Some((1..=nodes).map(|l| l.to_string()).collect()),
    }
}

fn int(v: i64) -> Rational {
    Rational::from_integer(v)
}

/// Labels to ids for the numbered figures.
fn ids(labels: &[usize]) -> Vec<PointId> {
    labels.iter().map(|l| l - 1).collect()
}

fn co_located_1_to_4() -> Vec<(usize, usize, Rational)> {
    vec![(1, 2, int(0)), (1, 3, int(0)), (1, 4, int(0))]
}

fn audit_check(k: usize, outcome: Vec<PointId>, notion: Notion, params: AuditParams, expected: Expected) -> Check {
    Check { k, outcome, probe: Probe::Audit { notion, params }, expected }
}

fn q_params(q: usize) -> AuditParams {
    AuditParams { q: Some(q), ..Default::default() }
}

fn gamma_params(gamma: Rational) -> AuditParams {
    AuditParams { gamma: Some(gamma), ..Default::default() }
}

fn empty(name: FixtureName, file: InstanceFile) -> Fixture {
    Fixture { id: FixtureId::new(name), file, notes: Vec::new(), checks: Vec::new() }
}

fn fig2a() -> Fixture {
    let mut edges = co_located_1_to_4();
    edges.push((1, 5, int(10)));
    for (u, v) in [(5, 6), (6, 7), (5, 8), (6, 9), (7, 10), (8, 9), (9, 10)] {
        edges.push((u, v, int(1)));
    }
    let mut fx = empty(FixtureName::Fig2a, numbered(10, &edges, 5));
    fx.notes = vec![
        "the stated distance 2 from agent 8 to {1,2,6,7} agrees with the drawn edges".into(),
        "the 3-core example deviation C'={6,9,10} re-evaluates to exactly 10/3; the best deviation is C'={5,6,9} \
         with 13/3, so 10/3 is a lower bound on the minimal factor"
            .into(),
        "the third-closest outcome distance of agent 10 to {1,2,3,6,9} is 13".into(),
    ];
    let w5 = ids(&[1, 2, 3, 6, 9]);
    let w4 = ids(&[1, 2, 6, 7]);
    let right: Vec<usize> = (4..10).collect();
    fx.checks = vec![
        audit_check(5, w5.clone(), Notion::Pf, AuditParams::default(), Expected::Value(1.0)),
        audit_check(5, w5.clone(), Notion::QCore, q_params(3), Expected::AtLeast(10.0 / 3.0)),
        Check {
            k: 5,
            outcome: w5.clone(),
            probe: Probe::Deviation { notion: Notion::QCore, agents: right.clone(), candidates: ids(&[6, 9, 10]), q: 3, sums: false },
            expected: Expected::Value(10.0 / 3.0),
        },
        Check {
            k: 5,
            outcome: w5.clone(),
            probe: Probe::Oracle { notion: Notion::QCore, params: q_params(3) },
            expected: Expected::Value(13.0 / 3.0),
        },
        Check {
            k: 5,
            outcome: w5.clone(),
            probe: Probe::Distance { from: 4, to: Vec::new(), q: 3 },
            expected: Expected::AtLeast(10.0),
        },
        audit_check(4, w4.clone(), Notion::Pf, AuditParams::default(), Expected::Value(1.0)),
        audit_check(4, w4.clone(), Notion::If, AuditParams::default(), Expected::ValueAt(2.0, 7)),
        audit_check(4, w4.clone(), Notion::Tc, gamma_params(int(1)), Expected::AtLeast(2.0)),
        Check {
            k: 4,
            outcome: w4.clone(),
            probe: Probe::Deviation { notion: Notion::Tc, agents: vec![7, 8, 9], candidates: ids(&[9]), q: 1, sums: true },
            expected: Expected::Value(2.0),
        },
        Check {
            k: 4,
            outcome: w4,
            probe: Probe::Distance { from: 7, to: Vec::new(), q: 1 },
            expected: Expected::Value(2.0),
        },
    ];
    fx
}

fn fig2b() -> Fixture {
    let mut edges = co_located_1_to_4();
    edges.push((1, 5, int(5)));
    edges.push((5, 6, int(3)));
    for (u, v) in [(6, 7), (6, 9), (8, 9), (9, 10)] {
        edges.push((u, v, int(1)));
    }
    let mut fx = empty(FixtureName::Fig2b, numbered(10, &edges, 5));
    let w = ids(&[1, 2, 3, 6, 9]);
    fx.checks = vec![
        audit_check(
            5,
            w.clone(),
            Notion::Dprf,
            AuditParams::default(),
            Expected::ViolationAt { y: 4.0, ell: 3, candidates: ids(&[6, 7, 9]), group: Some((4..10).collect()) },
        ),
        audit_check(5, w.clone(), Notion::Uprf, AuditParams::default(), Expected::Pass),
        Check { k: 5, outcome: w.clone(), probe: Probe::Oracle { notion: Notion::Dprf, params: AuditParams::default() }, expected: Expected::Violation },
        Check { k: 5, outcome: w.clone(), probe: Probe::Oracle { notion: Notion::Uprf, params: AuditParams::default() }, expected: Expected::Pass },
        Check { k: 5, outcome: w, probe: Probe::Distance { from: 4, to: vec![9], q: 1 }, expected: Expected::Value(5.0) },
    ];
    fx
}

fn fig3a() -> Fixture {
    let mut edges = co_located_1_to_4();
    edges.push((1, 5, int(10)));
    for (u, v) in [(5, 6), (6, 7), (6, 9), (8, 9), (9, 10)] {
        edges.push((u, v, int(1)));
    }
    let mut fx = empty(FixtureName::Fig3a, numbered(10, &edges, 4));
    let w = ids(&[1, 2, 3, 6]);
    let solve = |rule, q, seeds, expected| Check { k: 4, outcome: Vec::new(), probe: Probe::Solve { rule, q, seeds }, expected };
    fx.checks = vec![
        audit_check(4, w.clone(), Notion::Pf, AuditParams::default(), Expected::Above(1.0)),
        audit_check(4, w.clone(), Notion::RankJr, AuditParams::default(), Expected::Pass),
        audit_check(
            4,
            w.clone(),
            Notion::RankPjr,
            AuditParams::default(),
            Expected::ViolationAt { y: 2.0, ell: 2, candidates: ids(&[6, 9]), group: Some((4..10).collect()) },
        ),
        Check { k: 4, outcome: w, probe: Probe::Oracle { notion: Notion::RankPjr, params: AuditParams::default() }, expected: Expected::Violation },
        solve(Rule::Gc, 1, 1, Expected::Size(2)),
        solve(Rule::Gc, 1, 1, Expected::Centers(ids(&[1, 6]))),
        solve(Rule::Ea, 1, 1, Expected::Size(4)),
        solve(Rule::Fgc, 2, 64, Expected::Size(4)),
        solve(Rule::Fgc, 2, 2000, Expected::Reachable(ids(&[1, 5, 9, 10]))),
    ];
    fx
}

fn fig3b() -> Fixture {
    let mut edges = co_located_1_to_4();
    edges.extend([(1, 5, int(4)), (5, 6, int(2)), (6, 7, int(3)), (6, 9, int(2)), (8, 9, int(1)), (9, 10, int(1)), (6, 1, int(4))]);
    let mut fx = empty(FixtureName::Fig3b, numbered(10, &edges, 4));
    let w = ids(&[1, 2, 3, 9]);
    fx.checks = vec![
        audit_check(4, w.clone(), Notion::RankPjr, AuditParams::default(), Expected::Pass),
        audit_check(
            4,
            w.clone(),
            Notion::RankPjrPlus,
            AuditParams::default(),
            Expected::ViolationAt { y: 3.0, ell: 2, candidates: ids(&[6]), group: Some((4..10).collect()) },
        ),
        Check { k: 4, outcome: w.clone(), probe: Probe::Oracle { notion: Notion::RankPjr, params: AuditParams::default() }, expected: Expected::Pass },
        Check { k: 4, outcome: w, probe: Probe::Oracle { notion: Notion::RankPjrPlus, params: AuditParams::default() }, expected: Expected::Violation },
    ];
    fx
}

fn labelled(nodes: usize, labels: &[&str], edges: &[(usize, usize, Rational)], agents: Vec<PointId>, k: usize) -> InstanceFile {
    InstanceFile {
        metric: MetricDescriptor::Graph { nodes, edges: edges.iter().map(|&(u, v, w)| Edge::new(u, v, w)).collect() },
        agents,
        candidates: CandidateSet::All,
        k,
        labels: Some(labels.iter().map(|s| s.to_string()).collect()),
    }
}

fn pf_if_checks(k: usize, w: Vec<PointId>, pf: f64, if_: f64) -> Vec<Check> {
    let none = AuditParams::default;
    vec![
        audit_check(k, w.clone(), Notion::Pf, none(), Expected::Value(pf)),
        audit_check(k, w.clone(), Notion::If, none(), Expected::Value(if_)),
        Check { k, outcome: w.clone(), probe: Probe::Oracle { notion: Notion::Pf, params: none() }, expected: Expected::Value(pf) },
        Check { k, outcome: w, probe: Probe::Oracle { notion: Notion::If, params: none() }, expected: Expected::Value(if_) },
    ]
}

/// `{1,2,3}` co-located, then a path `1 –α– 4 – 5 – 6`; `W = {2,3}`.
fn fig4a(alpha: Rational) -> Fixture {
    let edges = [(0, 1, int(0)), (0, 2, int(0)), (0, 3, alpha), (3, 4, int(1)), (4, 5, int(1))];
    let file = labelled(6, &["1", "2", "3", "4", "5", "6"], &edges, (0..6).collect(), 2);
    let mut fx = empty(FixtureName::Fig4a, file);
    let a = f(alpha);
    fx.checks = pf_if_checks(2, vec![1, 2], a.max(1.0), a + 1.0);
    fx
}

/// A hub `c` with three unit spokes and two winners `w1`, `w2` at distance β.
fn fig4b(beta: Rational) -> Fixture {
    let edges = [(2, 3, int(1)), (2, 4, int(1)), (2, 5, int(1)), (2, 0, beta), (2, 1, beta)];
    let file = labelled(6, &["w1", "w2", "c", "1", "2", "3"], &edges, (0..6).collect(), 2);
    let mut fx = empty(FixtureName::Fig4b, file);
    let b = f(beta);
    fx.checks = pf_if_checks(2, vec![0, 1], b + 1.0, b.max(1.0));
    fx
}

/// Four agents around a hub `c` at distance 1, each at distance 2β from the
/// single winner `w`.
fn fig4c(beta: Rational) -> Fixture {
    let two_beta = beta * int(2);
    let edges = [
        (4, 0, int(1)),
        (4, 1, int(1)),
        (4, 2, int(1)),
        (4, 3, int(1)),
        (0, 5, two_beta),
        (1, 5, two_beta),
        (2, 5, two_beta),
        (3, 5, two_beta),
    ];
    let file = labelled(6, &["1", "2", "3", "4", "c", "w"], &edges, (0..4).collect(), 1);
    let mut fx = empty(FixtureName::Fig4c, file);
    let b = f(beta);
    fx.checks = pf_if_checks(1, vec![5], (2.0 * b).max(1.0), b.max(1.0));
    fx
}

fn path_uprf() -> Fixture {
    let edges = [(0, 1, int(1)), (1, 2, int(1)), (2, 3, int(2))];
    let file = labelled(4, &["1", "2", "3", "c"], &edges, vec![0, 1, 2], 1);
    let mut fx = empty(FixtureName::PathUprf, file);
    fx.notes = vec!["every agent is also a candidate, so candidates are all four points".into()];
    let w = vec![3];
    fx.checks = vec![
        audit_check(1, w.clone(), Notion::Uprf, AuditParams::default(), Expected::Pass),
        audit_check(
            1,
            w.clone(),
            Notion::RankJr,
            AuditParams::default(),
            Expected::ViolationAt { y: 1.0, ell: 1, candidates: vec![1], group: Some(vec![0, 1, 2]) },
        ),
        Check { k: 1, outcome: w.clone(), probe: Probe::Oracle { notion: Notion::Uprf, params: AuditParams::default() }, expected: Expected::Pass },
        Check { k: 1, outcome: w, probe: Probe::Oracle { notion: Notion::RankJr, params: AuditParams::default() }, expected: Expected::Violation },
    ];
    fx
}

/// Points `c`, `p`, `c1` on a path `c –1– p –α– c1`. `⌈n/k − 1⌉` agents sit at
/// `c`, the rest at `p`; candidates are `c` and `c1`, and `W = {c1}`.
fn lb_tc(id: &FixtureId) -> Result<Fixture> {
    let alpha = positive(id, 0)?;
    let gamma = id.params[1];
    let n = id.int_param(2)?;
    let k = id.int_param(3)?;
    if gamma <= int(1) || k == 0 || n < k {
        return Err(Error::Parse(format!("{id}: need γ > 1 and 1 ≤ k ≤ n")));
    }
    let at_c = (n - k).div_ceil(k);
    let mut agents = vec![0; at_c];
    agents.resize(n, 1);
    let file = InstanceFile {
        metric: MetricDescriptor::Graph { nodes: 3, edges: vec![Edge::new(0, 1, 1), Edge::new(1, 2, alpha)] },
        agents,
        candidates: CandidateSet::List(vec![0, 2]),
        k,
        labels: Some(vec!["c".into(), "p".into(), "c1".into()]),
    };
    let mut fx = empty(FixtureName::LbTc, file);
    let (a, g) = (f(alpha), f(gamma));
    let group = crate::instance::quota(n, k, 1, gamma)?;
    let mut checks = vec![audit_check(k, vec![2], Notion::Tc, gamma_params(gamma), Expected::Near((g * a + 1.0) / (g - 1.0), 0.05))];
    if group <= n && group > at_c {
        // the binding group: everyone at c plus just enough agents at p
        let from_p = (group - at_c) as f64;
        let exact = (at_c as f64 * (a + 1.0) + from_p * a) / from_p;
        checks.push(audit_check(k, vec![2], Notion::Tc, gamma_params(gamma), Expected::Value(exact.max(1.0))));
    }
    fx.checks = checks;
    Ok(fx)
}

/// Two co-located blocks of `⌈n/k⌉` and `n − ⌈n/k⌉` agents at distance 1;
/// `W` holds one point of the first block and `k − 1` of the second.
fn qtc_blocks(id: &FixtureId) -> Result<Fixture> {
    let q = id.int_param(0)?;
    let n = id.int_param(1)?;
    let k = id.int_param(2)?;
    let first = if k == 0 { 0 } else { n.div_ceil(k) };
    if q < 2 || 2 * q > k || first < q || n - first < k - 1 {
        return Err(Error::Parse(format!("{id}: need 2 ≤ q, 2q ≤ k, ⌈n/k⌉ ≥ q and n − ⌈n/k⌉ ≥ k − 1")));
    }
    let d = (0..n).map(|i| (0..n).map(|j| if (i < first) == (j < first) { 0.0 } else { 1.0 }).collect()).collect();
    let labels = (0..n).map(|i| if i < first { format!("a{}", i + 1) } else { format!("b{}", i - first + 1) }).collect();
    let file = InstanceFile { metric: MetricDescriptor::Matrix { d }, agents: (0..n).collect(), candidates: CandidateSet::All, k, labels: Some(labels) };
    let mut fx = empty(FixtureName::QtcBlocks, file);
    let w: Vec<PointId> = std::iter::once(0).chain(first..first + k - 1).collect();
    let qtc = |cap| AuditParams { q: Some(q), gamma: Some(int(1)), size_cap: Some(cap), ..Default::default() };
    fx.checks = vec![
        audit_check(k, w.clone(), Notion::QTc, qtc(2 * q), Expected::Infinite),
        audit_check(k, w.clone(), Notion::QTc, qtc(2 * q - 1), Expected::Finite),
        audit_check(k, w.clone(), Notion::RankPjr, AuditParams::default(), Expected::Pass),
        audit_check(k, w.clone(), Notion::Uprf, AuditParams::default(), Expected::Pass),
        audit_check(k, w, Notion::QIf, q_params(q), Expected::Value(1.0)),
    ];
    Ok(fx)
}

/// One line of the reproduction table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproRow {
    pub fixture: String,
    pub notion: String,
    pub params: String,
    pub expected: String,
    pub computed: String,
    pub status: String,
    #[serde(rename = "match")]
    pub matched: bool,
}

/// Evaluates every check of the fixture.
pub fn repro(id: &FixtureId) -> Result<Vec<ReproRow>> {
    let fx = fixture(id)?;
    let base = fx.instance()?;
    fx.checks.iter().map(|c| evaluate(&fx, &base, c)).collect()
}

pub fn repro_all() -> Result<Vec<ReproRow>> {
    let mut rows = Vec::new();
    for id in FixtureId::all() {
        rows.extend(repro(&id)?);
    }
    Ok(rows)
}

/// What a probe produced, before comparison.
enum Computed {
    Report(AuditReport),
    Number(f64),
    Verdict(bool, Option<crate::oracle::OracleWitness>),
    Outcomes(Vec<Vec<PointId>>),
}

fn evaluate(fx: &Fixture, base: &Instance, check: &Check) -> Result<ReproRow> {
    let inst = if check.k == base.k() { base.clone() } else { base.with_k(check.k)? };
    let w = Outcome::external(check.outcome.iter().copied());
    let mut params = vec![format!("k={}", check.k)];
    if !matches!(check.probe, Probe::Solve { .. }) {
        params.push(format!("W={}", fx.set(&check.outcome)));
    }
    let (notion, computed) = match &check.probe {
        Probe::Audit { notion, params: p } => {
            params.extend(describe_params(p));
            (notion.to_string(), Computed::Report(audit(&inst, &w, *notion, p)?))
        }
        Probe::Oracle { notion, params: p } => {
            params.extend(describe_params(p));
            (format!("oracle:{notion}"), run_oracle(&inst, &w, *notion, p)?)
        }
        Probe::Deviation { notion, agents, candidates, q, sums } => {
            params.push(format!("N'={} C'={}", fx.agent_set(agents), fx.set(candidates)));
            if *q != 1 {
                params.push(format!("q={q}"));
            }
            let v = reevaluate_deviation(&inst, &w, agents, candidates, *q, *sums);
            (format!("deviation:{notion}"), Computed::Number(v))
        }
        Probe::Distance { from, to, q } => {
            let targets = if to.is_empty() { check.outcome.clone() } else { to.clone() };
            params.push(format!("from={} to={} q={q}", fx.label(*from), fx.set(&targets)));
            let v = inst.space().dist_q(*from, &targets, *q).unwrap_or(f64::INFINITY);
            ("distance".to_string(), Computed::Number(v))
        }
        Probe::Solve { rule, q, seeds } => {
            if *rule == Rule::Fgc {
                params.push(format!("q={q} seeds=0..{seeds}"));
            }
            let mut outs = Vec::new();
            for seed in 0..*seeds {
                outs.push(rule.run(&inst, *q, seed)?.0.centers().to_vec());
            }
            (format!("solve:{rule}"), Computed::Outcomes(outs))
        }
    };
    let (text, status, matched) = compare(fx, &computed, &check.expected);
    Ok(ReproRow {
        fixture: fx.id.to_string(),
        notion,
        params: params.join(" "),
        expected: describe_expected(fx, &check.expected),
        computed: text,
        status,
        matched,
    })
}

fn run_oracle(inst: &Instance, w: &Outcome, notion: Notion, p: &AuditParams) -> Result<Computed> {
    let q = p.q.unwrap_or(1);
    let gamma = p.gamma.unwrap_or(int(1));
    let max_ell = p.max_ell.unwrap_or(inst.k());
    let r = match notion {
        Notion::Pf => oracle::oracle_pf(inst, w)?,
        Notion::If => oracle::oracle_if(inst, w)?,
        Notion::Tc => oracle::oracle_tc(inst, w, gamma)?,
        Notion::QCore => oracle::oracle_qcore(inst, w, q, max_ell)?,
        Notion::QIf => oracle::oracle_qif(inst, w, q)?,
        Notion::QTc => oracle::oracle_qtc(inst, w, q, gamma, max_ell)?,
        axiom => oracle::oracle_rank(inst, w, axiom)?,
    };
    Ok(match (r.value, r.pass) {
        (Some(v), _) => Computed::Number(v),
        (None, Some(pass)) => Computed::Verdict(pass, r.witness),
        _ => unreachable!("oracle results carry a value or a verdict"),
    })
}

fn describe_params(p: &AuditParams) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(q) = p.q {
        out.push(format!("q={q}"));
    }
    if let Some(g) = p.gamma {
        out.push(format!("gamma={g}"));
    }
    if let Some(c) = p.size_cap {
        out.push(format!("cap={c}"));
    }
    out
}

/// Renders a value as an integer or small fraction when it is one.
pub fn format_value(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    for den in 1..=12u32 {
        let num = v * f64::from(den);
        if (num - num.round()).abs() <= 1e-9 * num.abs().max(1.0) {
            let num = num.round() as i64;
            return if den == 1 { num.to_string() } else { format!("{num}/{den}") };
        }
    }
    let s = format!("{v:.9}");
    s.trim_end_matches('0').to_string()
}

fn close(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

fn describe_expected(fx: &Fixture, e: &Expected) -> String {
    match e {
        Expected::Value(v) => format_value(*v),
        Expected::ValueAt(v, agent) => format!("{} at agent {}", format_value(*v), fx.label(fx.file.agents[*agent])),
        Expected::AtLeast(v) => format!(">= {}", format_value(*v)),
        Expected::Above(v) => format!("> {}", format_value(*v)),
        Expected::Near(v, rel) => format!("{} ± {}%", format_value(*v), rel * 100.0),
        Expected::Infinite => "inf".into(),
        Expected::Finite => "finite".into(),
        Expected::Pass => "pass".into(),
        Expected::Violation => "violation".into(),
        Expected::ViolationAt { y, ell, candidates, group } => {
            let mut s = format!("violation y={} ell={ell} candidates={}", format_value(*y), fx.set(candidates));
            if let Some(g) = group {
                s.push_str(&format!(" group={}", fx.agent_set(g)));
            }
            s
        }
        Expected::Centers(c) => format!("W={}", fx.set(c)),
        Expected::Size(s) => format!("|W|={s}"),
        Expected::Reachable(c) => format!("some seed gives W={}", fx.set(c)),
    }
}

/// Returns (computed text, status, match).
fn compare(fx: &Fixture, computed: &Computed, expected: &Expected) -> (String, String, bool) {
    match computed {
        Computed::Report(report) => {
            let status = serde_json::to_value(report.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            let text = describe_report(fx, report);
            let ok = match (&report.result, expected) {
                (AuditResult::Value(v), _) => value_matches(*v, expected, report.witness.as_ref()),
                (AuditResult::Pass, Expected::Pass) => true,
                (AuditResult::Violation, Expected::Violation) => true,
                (AuditResult::Violation, Expected::ViolationAt { y, ell, candidates, group }) => {
                    report.rank_violation().is_some_and(|v| {
                        close(v.threshold_y, *y)
                            && v.ell == *ell
                            && &v.witness_candidates == candidates
                            && group.as_ref().map_or(true, |g| &v.group == g)
                    })
                }
                _ => false,
            };
            (text, status, ok)
        }
        Computed::Number(v) => (format_value(*v), "exact".into(), value_matches(*v, expected, None)),
        Computed::Verdict(pass, witness) => {
            let text = match (pass, witness) {
                (true, _) => "pass".to_string(),
                (false, Some(w)) => format!(
                    "violation y={} ell={} group={}",
                    w.y.map(format_value).unwrap_or_default(),
                    w.ell.unwrap_or(0),
                    fx.agent_set(&w.agents)
                ),
                (false, None) => "violation".to_string(),
            };
            let ok = matches!((pass, expected), (true, Expected::Pass) | (false, Expected::Violation));
            (text, "exact".into(), ok)
        }
        Computed::Outcomes(outs) => {
            let sorted = |c: &[PointId]| {
                let mut c = c.to_vec();
                c.sort_unstable();
                c
            };
            let (text, ok) = match expected {
                Expected::Centers(c) => (format!("W={}", fx.set(&outs[0])), sorted(&outs[0]) == sorted(c)),
                Expected::Size(s) => {
                    let sizes: std::collections::BTreeSet<usize> = outs.iter().map(Vec::len).collect();
                    let list: Vec<String> = sizes.iter().map(|s| s.to_string()).collect();
                    (format!("|W| in {{{}}}", list.join(",")), sizes.len() == 1 && sizes.contains(s))
                }
                Expected::Reachable(c) => {
                    let target = sorted(c);
                    match outs.iter().position(|o| sorted(o) == target) {
                        Some(seed) => (format!("seed {seed} gives W={}", fx.set(&target)), true),
                        None => (format!("not reached in {} seeds", outs.len()), false),
                    }
                }
                _ => ("-".into(), false),
            };
            (text, "exact".into(), ok)
        }
    }
}

fn value_matches(v: f64, expected: &Expected, witness: Option<&Witness>) -> bool {
    match expected {
        Expected::Value(e) => close(v, *e),
        Expected::ValueAt(e, agent) => close(v, *e) && matches!(witness, Some(Witness::Agent { agent: a, .. }) if a == agent),
        Expected::AtLeast(e) => v >= e - TOLERANCE * e.abs().max(1.0),
        Expected::Above(e) => v > e + TOLERANCE,
        Expected::Near(e, rel) => v.is_finite() && (v - e).abs() <= rel * e.abs(),
        Expected::Infinite => v == f64::INFINITY,
        Expected::Finite => v.is_finite(),
        _ => false,
    }
}

fn describe_report(fx: &Fixture, report: &AuditReport) -> String {
    let head = match report.result {
        AuditResult::Value(v) => format_value(v),
        AuditResult::Pass => "pass".into(),
        AuditResult::Violation => "violation".into(),
        AuditResult::Inconclusive => "inconclusive".into(),
    };
    let tail = match &report.witness {
        None => String::new(),
        Some(Witness::Agent { agent, .. }) => format!(" at agent {}", fx.label(fx.file.agents[*agent])),
        Some(Witness::Deviation { agents, candidates, .. }) => {
            format!(" via N'={} C'={}", fx.agent_set(agents), fx.set(candidates))
        }
        Some(Witness::Rank(v)) => format!(
            " y={} ell={} candidates={} group={}",
            format_value(v.threshold_y),
            v.ell,
            fx.set(&v.witness_candidates),
            fx.agent_set(&v.group)
        ),
    };
    head + &tail
}
