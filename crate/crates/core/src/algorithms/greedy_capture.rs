use crate::algorithms::trace::{EventKind, Trace};
use crate::error::{Error, Result};
use crate::instance::{Instance, Origin, Outcome};
use crate::metric::{approx_le, kth_smallest, PointId, Rational, TOLERANCE};

enum Next {
    Open { cand: usize, delta: f64 },
    Absorb { agent: usize, center: PointId, delta: f64 },
}

/// Greedy capture as an event-driven simulation of the growing radius.
///
/// At every step the next event is the smallest radius at which either an
/// unopened candidate holds a quota of remaining agents, or an opened center
/// reaches a remaining agent. Opens win ties against absorptions; remaining
/// ties go to the lowest candidate position, then the lowest agent position.
pub fn greedy_capture(instance: &Instance) -> Result<(Outcome, Trace)> {
    let candidates = instance.candidates();
    if candidates.is_empty() {
        return Err(Error::Precondition("greedy capture needs at least one candidate".into()));
    }
    let n = instance.n();
    let quota = instance.quota(1, Rational::from_integer(1))?;
    let mut remaining = vec![true; n];
    let mut left = n;
    let mut opened = vec![false; candidates.len()];
    let mut centers: Vec<PointId> = Vec::new();
    let mut trace = Trace::default();
    let mut scratch = Vec::with_capacity(n);

    while left > 0 {
        let mut best_open: Option<(usize, f64)> = None;
        if centers.len() < instance.k() && left >= quota {
            for (ci, &c) in candidates.iter().enumerate() {
                if opened[ci] {
                    continue;
                }
                scratch.clear();
                scratch.extend((0..n).filter(|&i| remaining[i]).map(|i| instance.agent_dist(i, c)));
                let reach = kth_smallest(&mut scratch, quota);
                if best_open.map_or(true, |(_, d)| reach < d - TOLERANCE) {
                    best_open = Some((ci, reach));
                }
            }
        }

        let mut best_absorb: Option<(usize, PointId, f64)> = None;
        for i in (0..n).filter(|&i| remaining[i]) {
            for (_, &c) in candidates.iter().enumerate().filter(|&(ci, _)| opened[ci]) {
                let d = instance.agent_dist(i, c);
                if best_absorb.map_or(true, |(_, _, bd)| d < bd - TOLERANCE) {
                    best_absorb = Some((i, c, d));
                }
            }
        }

        let next = match (best_open, best_absorb) {
            (Some((cand, od)), Some((agent, center, ad))) => {
                if approx_le(od, ad) {
                    Next::Open { cand, delta: od }
                } else {
                    Next::Absorb { agent, center, delta: ad }
                }
            }
            (Some((cand, delta)), None) => Next::Open { cand, delta },
            (None, Some((agent, center, delta))) => Next::Absorb { agent, center, delta },
            (None, None) => unreachable!("remaining agents with neither an open center nor an openable candidate"),
        };

        match next {
            Next::Open { cand, delta } => {
                let c = candidates[cand];
                opened[cand] = true;
                let captured: Vec<usize> =
                    (0..n).filter(|&i| remaining[i] && approx_le(instance.agent_dist(i, c), delta)).collect();
                for &i in &captured {
                    remaining[i] = false;
                }
                left -= captured.len();
                centers.push(c);
                trace.push(delta, EventKind::Open { candidate: c, captured }, left);
            }
            Next::Absorb { agent, center, delta } => {
                remaining[agent] = false;
                left -= 1;
                trace.push(delta, EventKind::Absorb { agent, center }, left);
            }
        }
    }

    let origin = Origin::Algorithm { name: "greedy_capture".into(), seed: None, restricted: false };
    Ok((Outcome::new(centers, origin), trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::CandidateSet;
    use crate::metric::MetricSpace;
    use std::sync::Arc;

    #[test]
    fn co_located_quota_opens_one_center_at_zero() {
        let space = MetricSpace::from_matrix(vec![vec![0.0; 3]; 3]).unwrap();
        let inst = Instance::new(Arc::new(space), vec![0, 1, 2], CandidateSet::List(vec![1]), 1).unwrap();
        let (w, trace) = greedy_capture(&inst).unwrap();
        assert_eq!(w.centers(), &[1]);
        assert_eq!(trace.len(), 1);
        assert_eq!(trace.events[0].delta, 0.0);
        assert_eq!(trace.events[0].remaining_agents, 0);
    }

    #[test]
    fn empty_candidate_set_is_an_error() {
        let space = MetricSpace::from_matrix(vec![vec![0.0]]).unwrap();
        let inst = Instance::new(Arc::new(space), vec![0], CandidateSet::List(vec![]), 1).unwrap();
        assert!(greedy_capture(&inst).is_err());
    }
}
