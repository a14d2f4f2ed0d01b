//! Brute-force reference auditors.
//!
//! Each function transcribes a fairness definition literally: every agent
//! group, every deviation set, every `ℓ`, and a dense set of thresholds are
//! enumerated. Nothing here is shared with [`crate::audit`] beyond distance
//! queries and quota arithmetic, so the two act as independent
//! implementations. Inputs are limited to 10 agents and 10 candidates.

use serde::Serialize;

use crate::audit::Notion;
use crate::error::{Error, Result};
use crate::instance::{quota, Instance, Outcome};
use crate::metric::{PointId, Rational, TOLERANCE};

const MAX_AGENTS: usize = 10;
const MAX_CANDIDATES: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleWitness {
    pub agents: Vec<usize>,
    pub candidates: Vec<PointId>,
    pub ell: Option<usize>,
    pub y: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    /// Minimal factor for value notions.
    pub value: Option<f64>,
    /// Verdict for axioms.
    pub pass: Option<bool>,
    pub witness: Option<OracleWitness>,
    /// Number of (group, deviation) combinations examined.
    pub examined: u64,
}

fn guard(inst: &Instance) -> Result<()> {
    if inst.n() > MAX_AGENTS || inst.candidates().len() > MAX_CANDIDATES {
        return Err(Error::SizeGuard(format!(
            "oracle handles at most {MAX_AGENTS} agents and {MAX_CANDIDATES} candidates (got {} and {})",
            inst.n(),
            inst.candidates().len()
        )));
    }
    Ok(())
}

fn one() -> Rational {
    Rational::from_integer(1)
}

fn members(mask: u32, len: usize) -> Vec<usize> {
    (0..len).filter(|&b| mask >> b & 1 == 1).collect()
}

/// `d^q(i, T)`; infinite when `T` has fewer than `q` points.
fn dq(inst: &Instance, i: usize, targets: &[PointId], q: usize) -> f64 {
    inst.space().dist_q(inst.agents()[i], targets, q).unwrap_or(f64::INFINITY)
}

/// Supremum of `α` for which agent `i` strictly prefers the deviation:
/// `α·dev < out` holds exactly for `α < out/dev`, for every `α` when `dev = 0 < out`,
/// and for no `α` when `out = 0`.
fn deviation_bound(out: f64, dev: f64) -> f64 {
    if out == 0.0 {
        0.0
    } else if dev == 0.0 {
        f64::INFINITY
    } else {
        out / dev
    }
}

fn value_result(best: f64, witness: Option<OracleWitness>, examined: u64) -> OracleResult {
    if best > 1.0 {
        OracleResult { value: Some(best), pass: None, witness, examined }
    } else {
        OracleResult { value: Some(1.0), pass: None, witness: None, examined }
    }
}

/// Enumerates groups `N′` of size at least `min_size` and deviation sets,
/// scoring each group with `score(N′, C′)`; returns the supremum.
fn sup_over_groups(
    inst: &Instance,
    deviations: &[(Vec<PointId>, usize)],
    score: impl Fn(&[usize], &[PointId]) -> f64,
) -> OracleResult {
    let n = inst.n();
    let mut best = f64::NEG_INFINITY;
    let mut witness = None;
    let mut examined = 0;
    for (set, min_size) in deviations {
        for mask in 1u32..(1 << n) {
            if (mask.count_ones() as usize) < *min_size {
                continue;
            }
            examined += 1;
            let group = members(mask, n);
            let v = score(&group, set);
            if v > best {
                best = v;
                witness = Some(OracleWitness { agents: group, candidates: set.clone(), ell: None, y: None });
            }
        }
    }
    value_result(best, witness, examined)
}

pub fn oracle_pf(inst: &Instance, w: &Outcome) -> Result<OracleResult> {
    core_impl(inst, w, 1, inst.k(), true)
}

/// `q`-core: deviation sets `C′` with `q ≤ |C′| ≤ ℓ ≤ max_ell`, groups of at
/// least `ℓn/k` agents, all members strictly improving by the factor.
pub fn oracle_qcore(inst: &Instance, w: &Outcome, q: usize, max_ell: usize) -> Result<OracleResult> {
    core_impl(inst, w, q, max_ell, false)
}

fn core_impl(inst: &Instance, w: &Outcome, q: usize, max_ell: usize, single: bool) -> Result<OracleResult> {
    guard(inst)?;
    let deviations = deviation_sets(inst, w, q, max_ell, one(), single)?;
    Ok(sup_over_groups(inst, &deviations, |group, set| {
        group
            .iter()
            .map(|&i| deviation_bound(dq(inst, i, w.centers(), q), dq(inst, i, set, q)))
            .fold(f64::INFINITY, f64::min)
    }))
}

pub fn oracle_tc(inst: &Instance, w: &Outcome, gamma: Rational) -> Result<OracleResult> {
    tc_impl(inst, w, 1, gamma, inst.k(), true)
}

/// `q`-transferable core, comparing summed distances.
pub fn oracle_qtc(inst: &Instance, w: &Outcome, q: usize, gamma: Rational, max_ell: usize) -> Result<OracleResult> {
    tc_impl(inst, w, q, gamma, max_ell, false)
}

fn tc_impl(inst: &Instance, w: &Outcome, q: usize, gamma: Rational, max_ell: usize, single: bool) -> Result<OracleResult> {
    guard(inst)?;
    let deviations = deviation_sets(inst, w, q, max_ell, gamma, single)?;
    Ok(sup_over_groups(inst, &deviations, |group, set| {
        let out: f64 = group.iter().map(|&i| dq(inst, i, w.centers(), q)).sum();
        let dev: f64 = group.iter().map(|&i| dq(inst, i, set, q)).sum();
        deviation_bound(out, dev)
    }))
}

/// Every `(C′, ℓ)` pair as a deviation set with its minimum group size. With
/// `single` the deviation is one candidate outside `W`, as in the
/// single-candidate definitions.
fn deviation_sets(
    inst: &Instance,
    w: &Outcome,
    q: usize,
    max_ell: usize,
    gamma: Rational,
    single: bool,
) -> Result<Vec<(Vec<PointId>, usize)>> {
    let cands = inst.candidates();
    let mut out = Vec::new();
    if single {
        let m = quota(inst.n(), inst.k(), 1, gamma)?;
        for &c in cands {
            if !w.contains(c) {
                out.push((vec![c], m));
            }
        }
        return Ok(out);
    }
    for mask in 1u32..(1 << cands.len()) {
        let set: Vec<PointId> = members(mask, cands.len()).into_iter().map(|b| cands[b]).collect();
        if set.len() < q {
            continue;
        }
        for ell in set.len()..=max_ell {
            let m = quota(inst.n(), inst.k(), ell, gamma)?;
            if m <= inst.n() {
                out.push((set.clone(), m.max(1)));
            }
        }
    }
    Ok(out)
}

pub fn oracle_if(inst: &Instance, w: &Outcome) -> Result<OracleResult> {
    guard(inst)?;
    if !inst.agents_within_candidates() {
        return Err(Error::Precondition("IF needs N ⊆ C".into()));
    }
    individual(inst, w, 1)
}

/// `q`-individual fairness with `r^q(i)` found by scanning radii.
pub fn oracle_qif(inst: &Instance, w: &Outcome, q: usize) -> Result<OracleResult> {
    guard(inst)?;
    let n = inst.n();
    if !inst.agents_within_candidates() || inst.k() > n || q == 0 || q > w.len() {
        return Err(Error::Precondition("q-IF needs N ⊆ C, k <= n and 1 <= q <= |W|".into()));
    }
    individual(inst, w, q)
}

fn individual(inst: &Instance, w: &Outcome, q: usize) -> Result<OracleResult> {
    let n = inst.n();
    let need = quota(n, inst.k(), q, one())?;
    if need > n {
        return Err(Error::Precondition(format!("q = {q} needs {need} agents, only {n} exist")));
    }
    let mut best = 1.0;
    let mut witness = None;
    for i in 0..n {
        // smallest radius among agent distances enclosing `need` agents
        let r = (0..n)
            .map(|j| inst.agent_agent_dist(i, j))
            .filter(|&r| (0..n).filter(|&j| inst.agent_agent_dist(i, j) <= r).count() >= need)
            .fold(f64::INFINITY, f64::min);
        let d = dq(inst, i, w.centers(), q);
        let beta = if d == 0.0 {
            1.0
        } else if r == 0.0 {
            f64::INFINITY
        } else {
            d / r
        };
        if beta > best {
            best = beta;
            witness = Some(OracleWitness { agents: vec![i], candidates: Vec::new(), ell: None, y: Some(r) });
        }
    }
    Ok(OracleResult { value: Some(best), pass: None, witness, examined: n as u64 })
}

/// Literal check of a threshold axiom over all groups, all `ℓ ≤ k`, and
/// thresholds at every pairwise distance, every midpoint between consecutive
/// distances, and one value beyond the largest.
pub fn oracle_rank(inst: &Instance, w: &Outcome, axiom: Notion) -> Result<OracleResult> {
    guard(inst)?;
    if !axiom.is_axiom() {
        return Err(Error::Precondition(format!("{axiom} is not a threshold axiom")));
    }
    let n = inst.n();
    let k = inst.k();
    let cands = inst.candidates();
    let mut ds: Vec<f64> = Vec::new();
    for i in 0..n {
        ds.extend(cands.iter().map(|&c| inst.agent_dist(i, c)));
        ds.extend((0..n).map(|j| inst.agent_agent_dist(i, j)));
        ds.extend(w.centers().iter().map(|&c| inst.agent_dist(i, c)));
    }
    ds.sort_by(f64::total_cmp);
    ds.dedup();
    let mut ys = ds.clone();
    ys.extend(ds.windows(2).map(|p| (p[0] + p[1]) / 2.0));
    ys.push(ds.last().copied().unwrap_or(0.0) + 1.0);
    ys.sort_by(f64::total_cmp);

    let within = |i: usize, p: PointId, y: f64| inst.agent_dist(i, p) <= y + TOLERANCE;
    let mut examined = 0;
    for &y in &ys {
        let approvals: Vec<Vec<PointId>> =
            (0..n).map(|i| cands.iter().copied().filter(|&c| within(i, c, y)).collect()).collect();
        for ell in 1..=k {
            if axiom == Notion::RankJr && ell > 1 {
                break;
            }
            let m = quota(n, k, ell, one())?;
            if m > n {
                break;
            }
            for mask in 1u32..(1 << n) {
                if (mask.count_ones() as usize) < m {
                    continue;
                }
                examined += 1;
                let group = members(mask, n);
                let common: Vec<PointId> =
                    cands.iter().copied().filter(|c| group.iter().all(|&i| approvals[i].contains(c))).collect();
                let represented: Vec<PointId> =
                    w.centers().iter().copied().filter(|&c| group.iter().any(|&i| within(i, c, y))).collect();
                let violated = match axiom {
                    Notion::RankJr => !common.is_empty() && represented.is_empty(),
                    Notion::RankPjr | Notion::Dprf => common.len() >= ell && represented.len() < ell,
                    Notion::RankPjrPlus => {
                        !common.is_empty() && represented.len() < ell && common.iter().any(|c| !w.contains(*c))
                    }
                    Notion::Uprf => {
                        group.iter().all(|&i| group.iter().all(|&j| inst.agent_agent_dist(i, j) <= y + TOLERANCE))
                            && represented.len() < ell
                    }
                    _ => unreachable!(),
                };
                if violated {
                    return Ok(OracleResult {
                        value: None,
                        pass: Some(false),
                        witness: Some(OracleWitness { agents: group, candidates: common, ell: Some(ell), y: Some(y) }),
                        examined,
                    });
                }
            }
        }
    }
    Ok(OracleResult { value: None, pass: Some(true), witness: None, examined })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::CandidateSet;
    use crate::metric::MetricSpace;
    use std::sync::Arc;

    fn line(points: &[f64], k: usize) -> Instance {
        let space = MetricSpace::from_matrix(
            points.iter().map(|a| points.iter().map(|b| (a - b).abs()).collect()).collect(),
        )
        .unwrap();
        Instance::new(Arc::new(space), (0..points.len()).collect(), CandidateSet::All, k).unwrap()
    }

    #[test]
    fn size_guard() {
        let inst = line(&[0.0; 11], 2);
        assert!(matches!(oracle_pf(&inst, &Outcome::external([0])), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn two_clusters_one_center() {
        // two groups of two; the far group improves from 10 to 0.
        let inst = line(&[0.0, 0.0, 10.0, 10.0], 2);
        let w = Outcome::external([0]);
        assert_eq!(oracle_pf(&inst, &w).unwrap().value, Some(f64::INFINITY));
        assert_eq!(oracle_rank(&inst, &w, Notion::RankJr).unwrap().pass, Some(false));
        let w = Outcome::external([0, 2]);
        assert_eq!(oracle_pf(&inst, &w).unwrap().value, Some(1.0));
        assert_eq!(oracle_rank(&inst, &w, Notion::RankPjr).unwrap().pass, Some(true));
    }
}
