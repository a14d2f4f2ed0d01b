use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algorithms::trace::{EventKind, Trace};
use crate::algorithms::{distinct_sorted, Seed};
use crate::error::{Error, Result};
use crate::instance::{Instance, Origin, Outcome};
use crate::metric::{approx_le, Rational};

/// Randomized greedy capture for instances whose agents are exactly the
/// candidates.
///
/// The radius grows over the distinct agent–agent distances. Once a ball
/// around a remaining agent holds `⌈q·n/k⌉` remaining agents, `q` of those
/// are drawn uniformly into the outcome and exactly `⌈q·n/k⌉` are deleted:
/// the drawn ones plus the members closest to the ball's center. Agents left
/// when fewer than a quota remain are reported as leftovers, and the outcome
/// is then topped up to `k` with uniformly drawn unselected agents.
pub fn fair_greedy_capture(instance: &Instance, q: usize, seed: Seed) -> Result<(Outcome, Trace)> {
    let n = instance.n();
    let k = instance.k();
    if q == 0 || q > k {
        return Err(Error::Precondition(format!("fair greedy capture needs 1 <= q <= k (q = {q}, k = {k})")));
    }
    if !instance.agents_equal_candidates() || instance.agents().iter().collect::<BTreeSet<_>>().len() != n {
        return Err(Error::Precondition("fair greedy capture needs N = C with distinct agent points".into()));
    }
    if n < k {
        return Err(Error::Precondition(format!("fair greedy capture needs k <= n (n = {n}, k = {k})")));
    }
    let quota = instance.quota(q, Rational::from_integer(1))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);

    let mut remaining = vec![true; n];
    let mut left = n;
    let mut selected = vec![false; n];
    let mut trace = Trace::default();
    let deltas = distinct_sorted((0..n).flat_map(|i| (i..n).map(move |j| (i, j))).map(|(i, j)| instance.agent_agent_dist(i, j)).collect());
    let mut last_delta = 0.0;

    'sweep: for &delta in &deltas {
        last_delta = delta;
        loop {
            if left < quota {
                break 'sweep;
            }
            let ball_of = |p: usize| -> Vec<usize> {
                (0..n).filter(|&j| remaining[j] && approx_le(instance.agent_agent_dist(p, j), delta)).collect()
            };
            let Some((center, ball)) =
                (0..n).filter(|&p| remaining[p]).map(|p| (p, ball_of(p))).find(|(_, b)| b.len() >= quota)
            else {
                break;
            };

            let mut picked: Vec<usize> = sample(&mut rng, ball.len(), q).into_iter().map(|x| ball[x]).collect();
            picked.sort_unstable();
            let mut rest: Vec<usize> = ball.iter().copied().filter(|j| !picked.contains(j)).collect();
            rest.sort_by(|&a, &b| {
                instance
                    .agent_agent_dist(center, a)
                    .total_cmp(&instance.agent_agent_dist(center, b))
                    .then(a.cmp(&b))
            });
            let mut deleted: Vec<usize> = picked.iter().copied().chain(rest.into_iter().take(quota - q)).collect();
            deleted.sort_unstable();
            for &j in &deleted {
                remaining[j] = false;
            }
            for &j in &picked {
                selected[j] = true;
            }
            left -= deleted.len();
            let points = picked.iter().map(|&j| instance.agents()[j]).collect();
            trace.push(delta, EventKind::Capture { center, selected: points, deleted }, left);
        }
    }

    if left > 0 {
        let agents: Vec<usize> = (0..n).filter(|&j| remaining[j]).collect();
        trace.push(last_delta, EventKind::Leftover { agents }, left);
    }

    let chosen = selected.iter().filter(|&&s| s).count();
    if chosen < k {
        let pool: Vec<usize> = (0..n).filter(|&j| !selected[j]).collect();
        let mut fill: Vec<usize> = sample(&mut rng, pool.len(), k - chosen).into_iter().map(|x| pool[x]).collect();
        fill.sort_unstable();
        for j in fill {
            selected[j] = true;
            trace.push(last_delta, EventKind::Fill { candidate: instance.agents()[j] }, left);
        }
    }

    let centers = (0..n).filter(|&j| selected[j]).map(|j| instance.agents()[j]);
    let origin = Origin::Algorithm { name: "fair_greedy_capture".into(), seed: Some(seed.0), restricted: false };
    Ok((Outcome::new(centers, origin), trace))
}
