use crate::audit::{max_subset_ratio, ratio, top_m, AuditParams, AuditReport, AuditResult, Notion, Status, Witness};
use crate::error::{Error, Result};
use crate::instance::{require_valid, Instance, Outcome};
use crate::metric::Rational;

fn dist_to_outcome(inst: &Instance, w: &Outcome) -> Vec<f64> {
    (0..inst.n())
        .map(|i| w.centers().iter().map(|&c| inst.agent_dist(i, c)).fold(f64::INFINITY, f64::min))
        .collect()
}

fn value_report(notion: Notion, params: AuditParams, value: f64, witness: Option<Witness>) -> AuditReport {
    AuditReport { notion, params, result: AuditResult::Value(value), witness, status: Status::Exact }
}

/// Smallest `α ≥ 1` for which `w` is `α`-proportionally fair.
///
/// For each unopened candidate the binding group is the quota of agents with
/// the largest improvement ratios `d(i,W)/d(i,c)`.
pub fn pf_min_alpha(inst: &Instance, w: &Outcome) -> Result<AuditReport> {
    require_valid(inst, w)?;
    let m = inst.quota(1, Rational::from_integer(1))?;
    let dw = dist_to_outcome(inst, w);
    let mut best: Option<(f64, usize, Vec<usize>)> = None;
    if m >= 1 && m <= inst.n() {
        for &c in inst.candidates() {
            if w.contains(c) {
                continue;
            }
            let rho: Vec<f64> = (0..inst.n()).map(|i| ratio(dw[i], inst.agent_dist(i, c))).collect();
            let (group, v) = top_m(&rho, m);
            if best.as_ref().map_or(true, |b| v > b.0) {
                best = Some((v, c, group));
            }
        }
    }
    Ok(match best {
        Some((v, c, group)) if v > 1.0 => value_report(
            Notion::Pf,
            AuditParams::default(),
            v,
            Some(Witness::Deviation { agents: group, candidates: vec![c], ell: None, outcome_sum: None, deviation_sum: None }),
        ),
        _ => value_report(Notion::Pf, AuditParams::default(), 1.0, None),
    })
}

/// Smallest `β ≥ 1` for which `w` is `β`-individually fair. Needs `N ⊆ C`.
pub fn if_min_beta(inst: &Instance, w: &Outcome) -> Result<AuditReport> {
    require_valid(inst, w)?;
    if !inst.agents_within_candidates() {
        return Err(Error::Precondition("IF undefined: agents must be candidates".into()));
    }
    let m = inst.quota(1, Rational::from_integer(1))?;
    individual(inst, w, 1, m, Notion::If, AuditParams::default())
}

pub(crate) fn individual(
    inst: &Instance,
    w: &Outcome,
    q: usize,
    count: usize,
    notion: Notion,
    params: AuditParams,
) -> Result<AuditReport> {
    let agents = inst.agents();
    let mut buf = Vec::new();
    let mut best: Option<(f64, usize, f64, f64)> = None;
    for i in 0..inst.n() {
        let r = inst.space().neighborhood_radius(agents[i], agents, count)?;
        let d = crate::audit::agent_dist_q(inst, i, w.centers(), q, &mut buf);
        let b = ratio(d, r);
        if best.map_or(true, |x| b > x.0) {
            best = Some((b, i, d, r));
        }
    }
    Ok(match best {
        Some((b, agent, distance, radius)) if b > 1.0 => {
            value_report(notion, params, b, Some(Witness::Agent { agent, distance, radius }))
        }
        _ => value_report(notion, params, 1.0, None),
    })
}

/// Smallest `α ≥ 1` for which `w` is in the `(γ, α)`-transferable core.
pub fn tc_min_alpha(inst: &Instance, w: &Outcome, gamma: Rational) -> Result<AuditReport> {
    require_valid(inst, w)?;
    if gamma < Rational::from_integer(1) {
        return Err(Error::Precondition(format!("gamma must be at least 1, got {gamma}")));
    }
    let params = AuditParams { gamma: Some(gamma), ..Default::default() };
    let m = inst.quota(1, gamma)?;
    let dw = dist_to_outcome(inst, w);
    let mut best: Option<(f64, usize, crate::audit::SubsetRatio)> = None;
    for &c in inst.candidates() {
        if w.contains(c) {
            continue;
        }
        let pairs: Vec<(f64, f64)> = (0..inst.n()).map(|i| (dw[i], inst.agent_dist(i, c))).collect();
        if let Some(r) = max_subset_ratio(&pairs, m) {
            if best.as_ref().map_or(true, |b| r.value > b.0) {
                best = Some((r.value, c, r));
            }
        }
    }
    Ok(match best {
        Some((v, c, r)) if v > 1.0 => value_report(
            Notion::Tc,
            params,
            v,
            Some(Witness::Deviation {
                agents: r.members,
                candidates: vec![c],
                ell: None,
                outcome_sum: Some(r.numerator),
                deviation_sum: Some(r.denominator),
            }),
        ),
        _ => value_report(Notion::Tc, params, 1.0, None),
    })
}

/// Re-evaluates a deviation witness against `w`: the `min` per-agent ratio for
/// single-candidate groups, or the ratio of sums when `sums` is set.
pub fn reevaluate_deviation(inst: &Instance, w: &Outcome, agents: &[usize], candidates: &[usize], q: usize, sums: bool) -> f64 {
    let mut buf = Vec::new();
    let pairs: Vec<(f64, f64)> = agents
        .iter()
        .map(|&i| {
            (
                crate::audit::agent_dist_q(inst, i, w.centers(), q, &mut buf),
                crate::audit::agent_dist_q(inst, i, candidates, q, &mut buf),
            )
        })
        .collect();
    if sums {
        let (a, b) = pairs.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
        ratio(a, b)
    } else {
        pairs.iter().map(|&(a, b)| ratio(a, b)).fold(f64::INFINITY, f64::min)
    }
}
