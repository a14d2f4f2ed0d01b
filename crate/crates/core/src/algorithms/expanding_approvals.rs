use crate::algorithms::distinct_sorted;
use crate::algorithms::trace::{EventKind, Trace};
use crate::error::{Error, Result};
use crate::instance::{Instance, Origin, Outcome};
use crate::metric::{approx_le, Distance, Rational};

/// An agent able to pay for a candidate at the current radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Supporter {
    pub agent: usize,
    pub distance: Distance,
    /// Remaining budget in units of `1/n`.
    pub budget: u64,
}

/// Decides who pays for an opened candidate.
///
/// `deduct` receives the supporters (agents within the radius holding a
/// positive budget, in agent order) and the cost in units of `1/n`. It must
/// return per-agent deductions that sum to `cost` and never exceed a
/// supporter's budget.
pub trait DeductionPolicy {
    fn deduct(&self, supporters: &[Supporter], cost: u64) -> Vec<(usize, u64)>;
}

fn zero_in_order(order: impl Iterator<Item = Supporter>, cost: u64) -> Vec<(usize, u64)> {
    let mut left = cost;
    let mut out = Vec::new();
    for s in order {
        if left == 0 {
            break;
        }
        let take = s.budget.min(left);
        if take > 0 {
            out.push((s.agent, take));
            left -= take;
        }
    }
    out
}

/// Drains the closest supporters first (ties by agent position).
#[derive(Debug, Clone, Copy, Default)]
pub struct ClosestFirst;

impl DeductionPolicy for ClosestFirst {
    fn deduct(&self, supporters: &[Supporter], cost: u64) -> Vec<(usize, u64)> {
        let mut order = supporters.to_vec();
        order.sort_by(|a, b| a.distance.total_cmp(&b.distance).then(a.agent.cmp(&b.agent)));
        zero_in_order(order.into_iter(), cost)
    }
}

/// Drains the farthest supporters first (ties by agent position).
#[derive(Debug, Clone, Copy, Default)]
pub struct FarthestFirst;

impl DeductionPolicy for FarthestFirst {
    fn deduct(&self, supporters: &[Supporter], cost: u64) -> Vec<(usize, u64)> {
        let mut order = supporters.to_vec();
        order.sort_by(|a, b| b.distance.total_cmp(&a.distance).then(a.agent.cmp(&b.agent)));
        zero_in_order(order.into_iter(), cost)
    }
}

/// Per-agent budgets, held exactly as integer multiples of `1/n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetState {
    units: Vec<u64>,
    n: u64,
}

impl BudgetState {
    fn new(n: usize, k: usize) -> Self {
        BudgetState { units: vec![k as u64; n], n: n as u64 }
    }

    pub fn budget(&self, agent: usize) -> Rational {
        Rational::new(self.units[agent] as i64, self.n as i64)
    }

    pub fn total(&self) -> Rational {
        Rational::new(self.units.iter().sum::<u64>() as i64, self.n as i64)
    }

    fn total_units(&self) -> u64 {
        self.units.iter().sum()
    }
}

/// Expanding approvals with closest-first budget deduction.
pub fn expanding_approvals(instance: &Instance) -> Result<(Outcome, Trace)> {
    expanding_approvals_with(instance, &ClosestFirst).map(|(w, t, _)| (w, t))
}

/// Expanding approvals with an arbitrary deduction policy; also returns the
/// final budgets.
///
/// Every agent starts with `k/n`; a candidate costs `1`. The radius runs over
/// the sorted distinct agent–candidate distances, and at each radius the
/// lowest-position affordable candidate is opened until none is left.
pub fn expanding_approvals_with(
    instance: &Instance,
    policy: &dyn DeductionPolicy,
) -> Result<(Outcome, Trace, BudgetState)> {
    let candidates = instance.candidates();
    if candidates.is_empty() {
        return Err(Error::Precondition("expanding approvals needs at least one candidate".into()));
    }
    let n = instance.n();
    let k = instance.k();
    let cost = n as u64;
    let mut budgets = BudgetState::new(n, k);
    let mut opened = vec![false; candidates.len()];
    let mut centers = Vec::new();
    let mut trace = Trace::default();

    let deltas = distinct_sorted(
        (0..n).flat_map(|i| candidates.iter().map(move |&c| instance.agent_dist(i, c))).collect(),
    );

    'sweep: for &delta in &deltas {
        loop {
            if centers.len() >= k || centers.len() >= candidates.len() || budgets.total_units() < cost {
                break 'sweep;
            }
            let affordable = candidates.iter().enumerate().find(|&(ci, &c)| {
                !opened[ci]
                    && (0..n)
                        .filter(|&i| approx_le(instance.agent_dist(i, c), delta))
                        .map(|i| budgets.units[i])
                        .sum::<u64>()
                        >= cost
            });
            let Some((ci, &c)) = affordable else { break };

            let supporters: Vec<Supporter> = (0..n)
                .filter_map(|i| {
                    let distance = instance.agent_dist(i, c);
                    (approx_le(distance, delta) && budgets.units[i] > 0).then_some(Supporter {
                        agent: i,
                        distance,
                        budget: budgets.units[i],
                    })
                })
                .collect();
            let payments = policy.deduct(&supporters, cost);
            let paid: u64 = payments.iter().map(|&(_, u)| u).sum();
            assert_eq!(paid, cost, "deduction policy must collect exactly the candidate cost");

            opened[ci] = true;
            centers.push(c);
            let positive_before = budgets.units.iter().filter(|&&u| u > 0).count();
            trace.push(delta, EventKind::Open { candidate: c, captured: Vec::new() }, positive_before);
            for (agent, units) in payments {
                assert!(
                    supporters.iter().any(|s| s.agent == agent) && units <= budgets.units[agent],
                    "deduction policy charged a non-supporter or overdrew a budget"
                );
                budgets.units[agent] -= units;
                let positive = budgets.units.iter().filter(|&&u| u > 0).count();
                let amount = Rational::new(units as i64, n as i64);
                trace.push(delta, EventKind::Deduct { agent, amount }, positive);
            }
        }
    }

    let origin = Origin::Algorithm { name: "expanding_approvals".into(), seed: None, restricted: false };
    Ok((Outcome::new(centers, origin), trace, budgets))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(agent: usize, distance: f64, budget: u64) -> Supporter {
        Supporter { agent, distance, budget }
    }

    #[test]
    fn closest_first_zeroes_nearest() {
        let sup = [s(0, 2.0, 4), s(1, 0.0, 4), s(2, 1.0, 4), s(3, 1.0, 4)];
        assert_eq!(ClosestFirst.deduct(&sup, 10), vec![(1, 4), (2, 4), (3, 2)]);
    }

    #[test]
    fn farthest_first_zeroes_farthest() {
        let sup = [s(0, 2.0, 4), s(1, 0.0, 4), s(2, 1.0, 4), s(3, 1.0, 4)];
        assert_eq!(FarthestFirst.deduct(&sup, 10), vec![(0, 4), (2, 4), (3, 2)]);
    }

    #[test]
    fn budget_state_is_exact() {
        let b = BudgetState::new(10, 4);
        assert_eq!(b.budget(3), Rational::new(2, 5));
        assert_eq!(b.total(), Rational::from_integer(4));
    }
}
