//! Threshold-approval axioms.
//!
//! At threshold `y` agent `i` approves `A_i = B(i, y) ∩ C`. Approval sets
//! only change at agent–candidate distances, so auditing at those values
//! covers every real `y`.
//!
//! A PJR violation at `(y, ℓ)` is a group `N′` of at least `⌈ℓn/k⌉` agents
//! sharing `ℓ` approved candidates `T` whose approved winners number fewer
//! than `ℓ`. Any such group has `T ⊆ ⋂ A_i` and `⋃ A_i ∩ W ⊆ Y` for some
//! `Y ⊆ W` with `|Y| = min(ℓ − 1, |W|)`, and conversely every agent that
//! approves `T` with winners inside `Y` can join it. So the check enumerates
//! `(Y, T)` pairs instead of groups.

use serde::{Deserialize, Serialize};

use crate::algorithms::distinct_sorted;
use crate::audit::{
    clique::{find_clique, CliqueSearch},
    AuditParams, AuditReport, AuditResult, Notion, Status, Witness,
};
use crate::error::{Error, Result};
use crate::instance::{require_valid, Instance, Outcome};
use crate::metric::{approx_le, Distance, PointId, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCaps {
    /// Largest `ℓ` examined.
    pub max_ell: usize,
    /// Search nodes allowed per check.
    pub node_budget: u64,
}

impl Default for RankCaps {
    fn default() -> Self {
        RankCaps { max_ell: 10, node_budget: 1_000_000 }
    }
}

/// Approval sets induced by a distance threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApprovalProfile {
    pub threshold_y: Distance,
    /// Per agent, the approved candidates in candidate order.
    pub approvals: Vec<Vec<PointId>>,
}

impl ApprovalProfile {
    pub fn at(inst: &Instance, y: Distance) -> Self {
        let approvals = (0..inst.n())
            .map(|i| inst.candidates().iter().copied().filter(|&c| approx_le(inst.agent_dist(i, c), y)).collect())
            .collect();
        ApprovalProfile { threshold_y: y, approvals }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankViolation {
    pub axiom: Notion,
    pub threshold_y: Distance,
    pub ell: usize,
    pub group: Vec<usize>,
    /// The cohesive set `T`, or the single unelected candidate for JR / PJR+.
    /// Empty for UPRF.
    pub witness_candidates: Vec<PointId>,
    /// Winners approved by some group member.
    pub covered_winners: Vec<PointId>,
}

impl RankViolation {
    /// Re-checks the violation directly against the axiom's definition.
    pub fn recheck(&self, inst: &Instance, w: &Outcome) -> bool {
        let y = self.threshold_y;
        let Ok(m) = inst.quota(self.ell, Rational::from_integer(1)) else { return false };
        if self.group.len() < m || self.group.iter().any(|&i| i >= inst.n()) {
            return false;
        }
        let near = |i: usize, p: PointId| approx_le(inst.agent_dist(i, p), y);
        let mut covered: Vec<PointId> =
            w.centers().iter().copied().filter(|&c| self.group.iter().any(|&i| near(i, c))).collect();
        covered.sort_unstable();
        if covered != self.covered_winners || covered.len() >= self.ell {
            return false;
        }
        let all_approve = |c: PointId| inst.is_candidate(c) && self.group.iter().all(|&i| near(i, c));
        match self.axiom {
            Notion::RankJr => {
                self.ell == 1 && self.witness_candidates.len() == 1 && all_approve(self.witness_candidates[0])
            }
            Notion::RankPjr | Notion::Dprf => {
                self.witness_candidates.len() == self.ell && self.witness_candidates.iter().all(|&c| all_approve(c))
            }
            Notion::RankPjrPlus => {
                self.witness_candidates.len() == 1
                    && !w.contains(self.witness_candidates[0])
                    && all_approve(self.witness_candidates[0])
            }
            Notion::Uprf => self
                .group
                .iter()
                .all(|&i| self.group.iter().all(|&j| approx_le(inst.agent_agent_dist(i, j), y))),
            _ => false,
        }
    }
}

/// Sorted distinct agent–candidate distances.
pub fn thresholds(inst: &Instance) -> Vec<Distance> {
    distinct_sorted(
        (0..inst.n()).flat_map(|i| inst.candidates().iter().map(move |&c| inst.agent_dist(i, c))).collect(),
    )
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn ones(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &word) in self.0.iter().enumerate() {
            let mut x = word;
            while x != 0 {
                out.push(wi * 64 + x.trailing_zeros() as usize);
                x &= x - 1;
            }
        }
        out
    }
}

struct Ctx<'a> {
    inst: &'a Instance,
    w: &'a Outcome,
    n: usize,
    quotas: Vec<usize>,
    max_ell: usize,
    ell_capped: bool,
}

impl<'a> Ctx<'a> {
    fn new(inst: &'a Instance, w: &'a Outcome, caps: &RankCaps) -> Result<Self> {
        require_valid(inst, w)?;
        if w.len() > 128 {
            return Err(Error::SizeGuard(format!("rank audits support at most 128 winners, got {}", w.len())));
        }
        let max_ell = inst.k().min(caps.max_ell);
        let quotas = (0..=max_ell).map(|l| inst.quota(l, Rational::from_integer(1))).collect::<Result<_>>()?;
        Ok(Ctx { inst, w, n: inst.n(), quotas, max_ell, ell_capped: caps.max_ell < inst.k() })
    }

    /// Per agent, the winners within `y` as a bitmask over `W` positions.
    fn winner_masks(&self, y: f64, dist: impl Fn(usize, PointId) -> f64) -> Vec<u128> {
        (0..self.n)
            .map(|i| {
                self.w
                    .centers()
                    .iter()
                    .enumerate()
                    .filter(|&(_, &c)| approx_le(dist(i, c), y))
                    .fold(0u128, |m, (b, _)| m | 1 << b)
            })
            .collect()
    }

    fn approvers(&self, y: f64) -> Vec<Bits> {
        self.inst
            .candidates()
            .iter()
            .map(|&c| {
                let mut b = Bits::empty(self.n);
                for i in (0..self.n).filter(|&i| approx_le(self.inst.agent_dist(i, c), y)) {
                    b.set(i);
                }
                b
            })
            .collect()
    }

    fn pool(&self, masks: &[u128], cover: u128) -> Bits {
        let mut b = Bits::empty(self.n);
        for (i, &m) in masks.iter().enumerate() {
            if m & !cover == 0 {
                b.set(i);
            }
        }
        b
    }

    fn covered(&self, group: &[usize], masks: &[u128]) -> Vec<PointId> {
        let all = group.iter().fold(0u128, |a, &i| a | masks[i]);
        self.w.centers().iter().enumerate().filter(|&(b, _)| all >> b & 1 == 1).map(|(_, &c)| c).collect()
    }

    fn report(&self, notion: Notion, caps: &RankCaps, found: Option<RankViolation>, exhausted: bool) -> AuditReport {
        let params = AuditParams { max_ell: Some(caps.max_ell), node_budget: Some(caps.node_budget), ..Default::default() };
        let capped = exhausted || self.ell_capped;
        let (result, status) = match (&found, capped) {
            (Some(_), _) => (AuditResult::Violation, if exhausted { Status::CapExhausted } else { Status::Exact }),
            (None, false) => (AuditResult::Pass, Status::Exact),
            (None, true) => (AuditResult::Inconclusive, Status::CapExhausted),
        };
        AuditReport { notion, params, result, witness: found.map(Witness::Rank), status }
    }
}

/// Bitmasks of all `size`-subsets of `0..len`, lexicographic by index list.
fn covers(len: usize, size: usize) -> Vec<u128> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        out.push(idx.iter().fold(0u128, |m, &b| m | 1 << b));
        let mut pos = size;
        while pos > 0 && idx[pos - 1] == len - size + pos - 1 {
            pos -= 1;
        }
        if pos == 0 {
            return out;
        }
        idx[pos - 1] += 1;
        for j in pos..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Rank-JR: at no threshold may a quota of agents share an approved candidate
/// while approving no winner.
pub fn rank_jr_check(inst: &Instance, w: &Outcome) -> Result<AuditReport> {
    let caps = RankCaps::default();
    let ctx = Ctx::new(inst, w, &caps)?;
    let m = inst.quota(1, Rational::from_integer(1))?;
    for y in thresholds(inst) {
        let masks = ctx.winner_masks(y, |i, c| inst.agent_dist(i, c));
        for &c in inst.candidates() {
            let group: Vec<usize> =
                (0..ctx.n).filter(|&i| masks[i] == 0 && approx_le(inst.agent_dist(i, c), y)).collect();
            if m >= 1 && group.len() >= m {
                let v = RankViolation {
                    axiom: Notion::RankJr,
                    threshold_y: y,
                    ell: 1,
                    group,
                    witness_candidates: vec![c],
                    covered_winners: Vec::new(),
                };
                let mut rep = ctx.report(Notion::RankJr, &caps, Some(v), false);
                rep.params = AuditParams::default();
                return Ok(rep);
            }
        }
    }
    let mut rep = ctx.report(Notion::RankJr, &caps, None, false);
    rep.params = AuditParams::default();
    rep.status = Status::Exact;
    rep.result = AuditResult::Pass;
    Ok(rep)
}

/// Rank-PJR by `(Y, T)` enumeration.
pub fn rank_pjr_check(inst: &Instance, w: &Outcome, caps: &RankCaps) -> Result<AuditReport> {
    let ctx = Ctx::new(inst, w, caps)?;
    let mut budget = caps.node_budget;
    let cands = inst.candidates();
    for y in thresholds(inst) {
        let masks = ctx.winner_masks(y, |i, c| inst.agent_dist(i, c));
        let approvers = ctx.approvers(y);
        for ell in 1..=ctx.max_ell {
            let m = ctx.quotas[ell];
            if m > ctx.n {
                break;
            }
            if ell > cands.len() {
                break;
            }
            for cover in covers(w.len(), (ell - 1).min(w.len())) {
                let pool = ctx.pool(&masks, cover);
                if pool.count() < m {
                    continue;
                }
                match cohesive(&approvers, &pool, ell, m, &mut budget) {
                    Search::Found(t, group) => {
                        let group = group.ones();
                        let v = RankViolation {
                            axiom: Notion::RankPjr,
                            threshold_y: y,
                            ell,
                            covered_winners: ctx.covered(&group, &masks),
                            group,
                            witness_candidates: t.iter().map(|&ci| cands[ci]).collect(),
                        };
                        return Ok(ctx.report(Notion::RankPjr, caps, Some(v), false));
                    }
                    Search::None => {}
                    Search::Exhausted => return Ok(ctx.report(Notion::RankPjr, caps, None, true)),
                }
            }
        }
    }
    Ok(ctx.report(Notion::RankPjr, caps, None, false))
}

enum Search {
    Found(Vec<usize>, Bits),
    None,
    Exhausted,
}

/// First `ℓ`-set of candidate positions (lexicographic) approved by at least
/// `m` agents of `pool`.
fn cohesive(approvers: &[Bits], pool: &Bits, ell: usize, m: usize, budget: &mut u64) -> Search {
    let usable: Vec<usize> = (0..approvers.len()).filter(|&c| pool.and(&approvers[c]).count() >= m).collect();
    if usable.len() < ell {
        return Search::None;
    }
    fn dfs(
        approvers: &[Bits],
        usable: &[usize],
        from: usize,
        chosen: &mut Vec<usize>,
        support: &Bits,
        ell: usize,
        m: usize,
        budget: &mut u64,
    ) -> Search {
        if *budget == 0 {
            return Search::Exhausted;
        }
        *budget -= 1;
        if chosen.len() == ell {
            return Search::Found(chosen.clone(), support.clone());
        }
        for j in from..usable.len() {
            if chosen.len() + usable.len() - j < ell {
                break;
            }
            let next = support.and(&approvers[usable[j]]);
            if next.count() < m {
                continue;
            }
            chosen.push(usable[j]);
            match dfs(approvers, usable, j + 1, chosen, &next, ell, m, budget) {
                Search::None => {
                    chosen.pop();
                }
                other => return other,
            }
        }
        Search::None
    }
    dfs(approvers, &usable, 0, &mut Vec::with_capacity(ell), pool, ell, m, budget)
}

/// Rank-PJR+: no quota-sized group with few approved winners may share an
/// approved candidate outside `W`.
pub fn rank_pjr_plus_check(inst: &Instance, w: &Outcome, caps: &RankCaps) -> Result<AuditReport> {
    let ctx = Ctx::new(inst, w, caps)?;
    let mut budget = caps.node_budget;
    for y in thresholds(inst) {
        let masks = ctx.winner_masks(y, |i, c| inst.agent_dist(i, c));
        let approvers = ctx.approvers(y);
        for ell in 1..=ctx.max_ell {
            let m = ctx.quotas[ell];
            if m > ctx.n {
                break;
            }
            for (ci, &c) in inst.candidates().iter().enumerate() {
                if w.contains(c) || approvers[ci].count() < m {
                    continue;
                }
                for cover in covers(w.len(), (ell - 1).min(w.len())) {
                    if budget == 0 {
                        return Ok(ctx.report(Notion::RankPjrPlus, caps, None, true));
                    }
                    budget -= 1;
                    let group = ctx.pool(&masks, cover).and(&approvers[ci]);
                    if group.count() >= m {
                        let group = group.ones();
                        let v = RankViolation {
                            axiom: Notion::RankPjrPlus,
                            threshold_y: y,
                            ell,
                            covered_winners: ctx.covered(&group, &masks),
                            group,
                            witness_candidates: vec![c],
                        };
                        return Ok(ctx.report(Notion::RankPjrPlus, caps, Some(v), false));
                    }
                }
            }
        }
    }
    Ok(ctx.report(Notion::RankPjrPlus, caps, None, false))
}

/// DPRF, checked through its equivalence with rank-PJR.
pub fn dprf_check(inst: &Instance, w: &Outcome, caps: &RankCaps) -> Result<AuditReport> {
    let mut rep = rank_pjr_check(inst, w, caps)?;
    rep.notion = Notion::Dprf;
    if let Some(Witness::Rank(v)) = &mut rep.witness {
        v.axiom = Notion::Dprf;
    }
    Ok(rep)
}

/// UPRF: no group of diameter `y` and size `⌈ℓn/k⌉` may have fewer than `ℓ`
/// winners within `y` of its members.
pub fn uprf_check(inst: &Instance, w: &Outcome, caps: &RankCaps) -> Result<AuditReport> {
    let ctx = Ctx::new(inst, w, caps)?;
    let n = ctx.n;
    let mut budget = caps.node_budget;
    let ys = distinct_sorted((0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| inst.agent_agent_dist(i, j)).collect());
    for y in ys {
        let masks = ctx.winner_masks(y, |i, c| inst.agent_dist(i, c));
        for ell in 1..=ctx.max_ell {
            let m = ctx.quotas[ell];
            if m > n {
                break;
            }
            for cover in covers(w.len(), (ell - 1).min(w.len())) {
                let pool = ctx.pool(&masks, cover).ones();
                if pool.len() < m {
                    continue;
                }
                let adj: Vec<Vec<bool>> = pool
                    .iter()
                    .map(|&a| pool.iter().map(|&b| a != b && approx_le(inst.agent_agent_dist(a, b), y)).collect())
                    .collect();
                match find_clique(&adj, m, &mut budget) {
                    CliqueSearch::Found(members) => {
                        let group: Vec<usize> = members.into_iter().map(|x| pool[x]).collect();
                        let v = RankViolation {
                            axiom: Notion::Uprf,
                            threshold_y: y,
                            ell,
                            covered_winners: ctx.covered(&group, &masks),
                            group,
                            witness_candidates: Vec::new(),
                        };
                        return Ok(ctx.report(Notion::Uprf, caps, Some(v), false));
                    }
                    CliqueSearch::NotFound => {}
                    CliqueSearch::BudgetExhausted => return Ok(ctx.report(Notion::Uprf, caps, None, true)),
                }
            }
        }
    }
    Ok(ctx.report(Notion::Uprf, caps, None, false))
}
