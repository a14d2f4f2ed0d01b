/// A subset maximizing `Σ a_i / Σ b_i` together with both sums.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetRatio {
    pub value: f64,
    /// Member indices, ascending.
    pub members: Vec<usize>,
    pub numerator: f64,
    pub denominator: f64,
}

const EPS: f64 = 1e-12;

/// Maximizes `Σ_{S} a_i / Σ_{S} b_i` over index sets of size at least
/// `min_size`, with `a_i ≥ 0` (possibly `∞`) and `b_i ≥ 0` finite.
///
/// A set with zero denominator and positive numerator has ratio `∞`; a set
/// with both sums zero has ratio 0 here (callers clamp at 1). Returns `None`
/// when fewer than `min_size` pairs exist.
///
/// Dinkelbach's iteration: at level `t` the best set for `Σ (a_i − t·b_i)`
/// under the size constraint is the top `min_size` margins plus every further
/// positive margin. Starting from the max-numerator set the ratio strictly
/// increases until the margin vanishes.
pub fn max_subset_ratio(pairs: &[(f64, f64)], min_size: usize) -> Option<SubsetRatio> {
    let m = min_size.max(1);
    let n = pairs.len();
    if m > n {
        return None;
    }

    // Unbounded cases first: an infinite numerator, or at least m agents with
    // zero denominator among which one has a positive numerator.
    if pairs.iter().any(|p| p.0.is_infinite()) {
        let members = best_set(pairs, m, |a, b| if a.is_infinite() { f64::INFINITY } else { a - b });
        return Some(finish(pairs, members, f64::INFINITY));
    }
    let zeros: Vec<usize> = (0..n).filter(|&i| pairs[i].1 == 0.0).collect();
    if zeros.len() >= m && zeros.iter().any(|&i| pairs[i].0 > 0.0) {
        return Some(finish(pairs, zeros, f64::INFINITY));
    }

    let mut set = best_set(pairs, m, |a, _| a);
    let (mut num, den) = sums(pairs, &set);
    if den == 0.0 {
        // Only possible when every numerator in the set is zero as well.
        return Some(finish(pairs, set, 0.0));
    }
    let mut t = num / den;
    for _ in 0..10_000 {
        let next = best_set(pairs, m, |a, b| a - t * b);
        let margin: f64 = next.iter().map(|&i| pairs[i].0 - t * pairs[i].1).sum();
        if margin <= EPS * num.max(1.0) {
            break;
        }
        let (n2, d2) = sums(pairs, &next);
        if d2 == 0.0 {
            break;
        }
        let t2 = n2 / d2;
        if t2 - t < EPS * t.max(1.0) {
            if t2 > t {
                set = next;
                t = t2;
            }
            break;
        }
        set = next;
        num = n2;
        t = t2;
    }
    Some(finish(pairs, set, t))
}

fn best_set(pairs: &[(f64, f64)], m: usize, margin: impl Fn(f64, f64) -> f64) -> Vec<usize> {
    let v: Vec<f64> = pairs.iter().map(|&(a, b)| margin(a, b)).collect();
    let mut idx: Vec<usize> = (0..pairs.len()).collect();
    idx.sort_by(|&x, &y| v[y].total_cmp(&v[x]).then(x.cmp(&y)));
    let mut out: Vec<usize> = idx.iter().take(m).copied().collect();
    out.extend(idx.iter().skip(m).copied().filter(|&i| v[i] > 0.0));
    out.sort_unstable();
    out
}

fn sums(pairs: &[(f64, f64)], set: &[usize]) -> (f64, f64) {
    set.iter().fold((0.0, 0.0), |(a, b), &i| (a + pairs[i].0, b + pairs[i].1))
}

fn finish(pairs: &[(f64, f64)], mut members: Vec<usize>, value: f64) -> SubsetRatio {
    members.sort_unstable();
    let (numerator, denominator) = sums(pairs, &members);
    SubsetRatio { value, members, numerator, denominator }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(pairs: &[(f64, f64)], m: usize) -> f64 {
        let n = pairs.len();
        let mut best = f64::NEG_INFINITY;
        for mask in 1u32..(1 << n) {
            if (mask.count_ones() as usize) < m {
                continue;
            }
            let (a, b) = (0..n).filter(|i| mask >> i & 1 == 1).fold((0.0, 0.0), |(a, b), i| (a + pairs[i].0, b + pairs[i].1));
            let r = if b == 0.0 { if a > 0.0 { f64::INFINITY } else { 0.0 } } else { a / b };
            best = best.max(r);
        }
        best
    }

    #[test]
    fn matches_brute_force() {
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 9) as f64
        };
        for _ in 0..400 {
            let n = 1 + (next() as usize % 7);
            let pairs: Vec<(f64, f64)> = (0..n).map(|_| (next(), next())).collect();
            for m in 1..=n {
                let r = max_subset_ratio(&pairs, m).unwrap();
                let b = brute(&pairs, m);
                if b.is_infinite() {
                    assert!(r.value.is_infinite(), "{pairs:?} m={m}");
                } else {
                    assert!((r.value - b).abs() < 1e-9, "{pairs:?} m={m}: {} vs {b}", r.value);
                    assert!(r.members.len() >= m);
                    if r.denominator > 0.0 {
                        assert_eq!(r.numerator / r.denominator, r.value);
                    }
                }
            }
        }
    }

    #[test]
    fn uses_extra_members_only_when_they_help() {
        // best pair is (4,1); adding (3,1) lowers the ratio
        let r = max_subset_ratio(&[(4.0, 1.0), (3.0, 1.0), (0.0, 5.0)], 1).unwrap();
        assert_eq!(r.members, vec![0]);
        assert_eq!(r.value, 4.0);
    }

    #[test]
    fn too_few_pairs() {
        assert!(max_subset_ratio(&[(1.0, 1.0)], 2).is_none());
    }
}
