use rayon::prelude::*;

use crate::audit::single::individual;
use crate::audit::{
    agent_dist_q, max_subset_ratio, ratio, top_m, AuditParams, AuditReport, AuditResult, Notion, Status, Witness,
};
use crate::error::{Error, Result};
use crate::instance::{require_valid, Instance, Outcome};
use crate::metric::{PointId, Rational};

/// `min(k, |C|, 6)`.
pub fn default_size_cap(inst: &Instance) -> usize {
    inst.k().min(inst.candidates().len()).min(6)
}

/// All subsets of `items` with sizes in `lo..=hi`, ordered by size then lexicographically.
pub(crate) fn subsets_by_size(items: &[PointId], lo: usize, hi: usize) -> Vec<Vec<PointId>> {
    let mut out = Vec::new();
    for size in lo..=hi.min(items.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(idx.iter().map(|&i| items[i]).collect());
            // advance to the next combination
            let mut pos = size;
            while pos > 0 && idx[pos - 1] == items.len() - size + pos - 1 {
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            idx[pos - 1] += 1;
            for j in pos..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}

struct Best {
    value: f64,
    order: usize,
    agents: Vec<usize>,
    sums: Option<(f64, f64)>,
}

/// Enumerates deviation sets in parallel; each set is scored by `score`, and
/// the maximum (earliest set on ties) is kept.
fn scan<F>(sets: &[Vec<PointId>], score: F) -> Option<Best>
where
    F: Fn(&[PointId]) -> Option<(f64, Vec<usize>, Option<(f64, f64)>)> + Sync,
{
    sets.par_iter()
        .enumerate()
        .filter_map(|(order, set)| score(set).map(|(value, agents, sums)| Best { value, order, agents, sums }))
        .reduce_with(|a, b| {
            if b.value > a.value || (b.value == a.value && b.order < a.order) {
                b
            } else {
                a
            }
        })
}

fn check_q(inst: &Instance, q: usize, cap: usize) -> Result<()> {
    if q == 0 || q > inst.k() {
        return Err(Error::Precondition(format!("q must satisfy 1 <= q <= k (q = {q}, k = {})", inst.k())));
    }
    if cap < q {
        return Err(Error::Precondition(format!("size cap {cap} is below q = {q}")));
    }
    Ok(())
}

fn status_for(inst: &Instance, cap: usize) -> Status {
    if cap < inst.k().min(inst.candidates().len()) {
        Status::CapExhausted
    } else {
        Status::Exact
    }
}

fn deviation_report(notion: Notion, params: AuditParams, status: Status, best: Option<Best>, sets: &[Vec<PointId>]) -> AuditReport {
    let (result, witness) = match best {
        Some(b) if b.value > 1.0 => {
            let candidates = sets[b.order].clone();
            let ell = Some(candidates.len());
            let (outcome_sum, deviation_sum) = b.sums.map_or((None, None), |(a, d)| (Some(a), Some(d)));
            (
                AuditResult::Value(b.value),
                Some(Witness::Deviation { agents: b.agents, candidates, ell, outcome_sum, deviation_sum }),
            )
        }
        _ => (AuditResult::Value(1.0), None),
    };
    AuditReport { notion, params, result, witness, status }
}

/// Smallest `α ≥ 1` for which `w` is in the `α`-`q`-core, over deviation sets
/// `C′` with `q ≤ |C′| ≤ size_cap` (default [`default_size_cap`]).
///
/// A set `C′` is only ever required to serve groups of `⌈|C′|·n/k⌉` agents,
/// since larger `ℓ` raises the group size for the same deviation.
pub fn q_core_min_alpha(inst: &Instance, w: &Outcome, q: usize, size_cap: Option<usize>) -> Result<AuditReport> {
    require_valid(inst, w)?;
    let cap = size_cap.unwrap_or_else(|| default_size_cap(inst).max(q));
    check_q(inst, q, cap)?;
    let n = inst.n();
    let mut buf = Vec::new();
    let dw: Vec<f64> = (0..n).map(|i| agent_dist_q(inst, i, w.centers(), q, &mut buf)).collect();
    let quotas: Vec<usize> =
        (0..=cap).map(|l| inst.quota(l, Rational::from_integer(1))).collect::<Result<_>>()?;
    let sets = subsets_by_size(inst.candidates(), q, cap);
    let best = scan(&sets, |set| {
        let m = quotas[set.len()];
        if m == 0 || m > n {
            return None;
        }
        let mut buf = Vec::with_capacity(set.len());
        let rho: Vec<f64> = (0..n).map(|i| ratio(dw[i], agent_dist_q(inst, i, set, q, &mut buf))).collect();
        let (group, v) = top_m(&rho, m);
        Some((v, group, None))
    });
    let params = AuditParams { q: Some(q), size_cap: Some(cap), ..Default::default() };
    Ok(deviation_report(Notion::QCore, params, status_for(inst, cap), best, &sets))
}

/// Smallest `β ≥ 1` for which `w` is `β`-`q`-individually fair.
pub fn q_if_min_beta(inst: &Instance, w: &Outcome, q: usize) -> Result<AuditReport> {
    require_valid(inst, w)?;
    if !inst.agents_within_candidates() {
        return Err(Error::Precondition("q-IF undefined: agents must be candidates".into()));
    }
    if inst.k() > inst.n() {
        return Err(Error::Precondition(format!("q-IF needs k <= n (n = {}, k = {})", inst.n(), inst.k())));
    }
    if q == 0 || q > w.len() {
        return Err(Error::Precondition(format!("q-IF needs 1 <= q <= |W| (q = {q}, |W| = {})", w.len())));
    }
    let count = inst.quota(q, Rational::from_integer(1))?;
    if count > inst.n() {
        return Err(Error::Precondition(format!("q = {q} needs {count} agents, only {} exist", inst.n())));
    }
    individual(inst, w, q, count, Notion::QIf, AuditParams { q: Some(q), ..Default::default() })
}

/// Smallest `α ≥ 1` for which `w` is in the `(γ, α)`-`q`-transferable core,
/// over deviation sets `C′` with `q ≤ |C′| ≤ size_cap`.
pub fn q_tc_min_alpha(
    inst: &Instance,
    w: &Outcome,
    q: usize,
    gamma: Rational,
    size_cap: Option<usize>,
) -> Result<AuditReport> {
    require_valid(inst, w)?;
    if gamma < Rational::from_integer(1) {
        return Err(Error::Precondition(format!("gamma must be at least 1, got {gamma}")));
    }
    let cap = size_cap.unwrap_or_else(|| default_size_cap(inst).max(q));
    if q == 0 || cap < q {
        return Err(Error::Precondition(format!("q-TC needs 1 <= q <= size cap (q = {q}, cap = {cap})")));
    }
    let n = inst.n();
    let mut buf = Vec::new();
    let dw: Vec<f64> = (0..n).map(|i| agent_dist_q(inst, i, w.centers(), q, &mut buf)).collect();
    let quotas: Vec<usize> = (0..=cap).map(|l| inst.quota(l, gamma)).collect::<Result<_>>()?;
    let sets = subsets_by_size(inst.candidates(), q, cap);
    let best = scan(&sets, |set| {
        let m = quotas[set.len()];
        if m > n {
            return None;
        }
        let mut buf = Vec::with_capacity(set.len());
        let pairs: Vec<(f64, f64)> = (0..n).map(|i| (dw[i], agent_dist_q(inst, i, set, q, &mut buf))).collect();
        max_subset_ratio(&pairs, m).map(|r| (r.value, r.members, Some((r.numerator, r.denominator))))
    });
    let params = AuditParams { q: Some(q), gamma: Some(gamma), size_cap: Some(cap), ..Default::default() };
    Ok(deviation_report(Notion::QTc, params, status_for(inst, cap), best, &sets))
}
