/// Outcome of a bounded clique search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliqueSearch {
    /// A clique of at least the requested size (vertex indices, ascending).
    Found(Vec<usize>),
    /// The search completed without finding one.
    NotFound,
    /// The node budget ran out first.
    BudgetExhausted,
}

/// Searches for a clique with at least `target` vertices in the graph given
/// by adjacency rows `adj` (`adj[u][v]` iff `u`–`v` is an edge).
///
/// Branch and bound over a degeneracy ordering: each vertex is tried as the
/// lowest-ordered member of the clique, with candidates restricted to its
/// later neighbours, and a branch is cut when even taking every remaining
/// candidate cannot reach `target`. `budget` is decremented per search node.
pub fn find_clique(adj: &[Vec<bool>], target: usize, budget: &mut u64) -> CliqueSearch {
    let n = adj.len();
    if target == 0 {
        return CliqueSearch::Found(Vec::new());
    }
    if target > n {
        return CliqueSearch::NotFound;
    }
    let order = degeneracy_order(adj);
    let mut rank = vec![0; n];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    for &v in &order {
        let later: Vec<usize> = (0..n).filter(|&u| adj[v][u] && rank[u] > rank[v]).collect();
        if later.len() + 1 < target {
            continue;
        }
        let mut clique = vec![v];
        match extend(adj, &mut clique, later, target, budget) {
            Some(true) => {
                clique.sort_unstable();
                return CliqueSearch::Found(clique);
            }
            Some(false) => {}
            None => return CliqueSearch::BudgetExhausted,
        }
    }
    CliqueSearch::NotFound
}

fn extend(adj: &[Vec<bool>], clique: &mut Vec<usize>, cands: Vec<usize>, target: usize, budget: &mut u64) -> Option<bool> {
    if *budget == 0 {
        return None;
    }
    *budget -= 1;
    if clique.len() >= target {
        return Some(true);
    }
    for (idx, &u) in cands.iter().enumerate() {
        if clique.len() + cands.len() - idx < target {
            break;
        }
        let next: Vec<usize> = cands[idx + 1..].iter().copied().filter(|&x| adj[u][x]).collect();
        if clique.len() + 1 + next.len() < target {
            continue;
        }
        clique.push(u);
        match extend(adj, clique, next, target, budget)? {
            true => return Some(true),
            false => {
                clique.pop();
            }
        }
    }
    Some(false)
}

/// Repeatedly removes a minimum-degree vertex (lowest index on ties).
fn degeneracy_order(adj: &[Vec<bool>]) -> Vec<usize> {
    let n = adj.len();
    let mut deg: Vec<usize> = (0..n).map(|v| (0..n).filter(|&u| u != v && adj[v][u]).count()).collect();
    let mut gone = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n).filter(|&v| !gone[v]).min_by_key(|&v| (deg[v], v)).unwrap();
        gone[v] = true;
        order.push(v);
        for u in 0..n {
            if !gone[u] && u != v && adj[v][u] {
                deg[u] -= 1;
            }
        }
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
        let mut adj = vec![vec![false; n]; n];
        for &(u, v) in edges {
            adj[u][v] = true;
            adj[v][u] = true;
        }
        adj
    }

    #[test]
    fn finds_triangle_not_four_clique() {
        let adj = graph(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)]);
        let mut budget = 1000;
        assert_eq!(find_clique(&adj, 3, &mut budget), CliqueSearch::Found(vec![0, 1, 2]));
        assert_eq!(find_clique(&adj, 4, &mut budget), CliqueSearch::NotFound);
    }

    #[test]
    fn budget_is_respected() {
        let n = 12;
        let adj: Vec<Vec<bool>> = (0..n).map(|u| (0..n).map(|v| u != v && (u + v) % 3 != 0).collect()).collect();
        let mut budget = 1;
        assert_eq!(find_clique(&adj, 7, &mut budget), CliqueSearch::BudgetExhausted);
    }

    #[test]
    fn agrees_with_brute_force() {
        let mut s = 7u64;
        for _ in 0..200 {
            let n = 7;
            let mut adj = vec![vec![false; n]; n];
            for u in 0..n {
                for v in u + 1..n {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    let e = (s >> 33) % 2 == 0;
                    adj[u][v] = e;
                    adj[v][u] = e;
                }
            }
            let omega = (0u32..1 << n)
                .filter(|&m| (0..n).all(|u| (0..n).all(|v| u == v || m >> u & 1 == 0 || m >> v & 1 == 0 || adj[u][v])))
                .map(|m| m.count_ones() as usize)
                .max()
                .unwrap();
            let mut budget = u64::MAX;
            assert!(matches!(find_clique(&adj, omega, &mut budget), CliqueSearch::Found(c) if c.len() == omega));
            assert_eq!(find_clique(&adj, omega + 1, &mut budget), CliqueSearch::NotFound);
        }
    }
}
