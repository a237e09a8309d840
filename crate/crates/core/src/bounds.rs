//! Upper bounds on `A(n, d, w)`, the largest binary constant weight code.
//!
//! The clique number of the pivot graph is exactly this quantity, so any of
//! these bounds is a valid `ub` for the search.

use std::collections::HashMap;

/// Recursive Johnson bound combined with the pairwise intersection count.
///
/// Codewords of weight `w` at distance `>= d` meet in at most `t = w - d/2`
/// positions. If `M` words put `r_p` ones on position `p`, then
/// `sum C(r_p, 2) <= t C(M, 2)`, and the left side is smallest when the `r_p`
/// are balanced.
pub fn johnson_bound(n: u32, d: u32, w: u32) -> u64 {
    let mut memo = HashMap::new();
    bound(n, d, w, &mut memo)
}

fn bound(n: u32, d: u32, w: u32, memo: &mut HashMap<(u32, u32, u32), u64>) -> u64 {
    if w > n {
        return 0;
    }
    let w = w.min(n - w);
    if w == 0 {
        return 1;
    }
    let delta = d / 2;
    if delta > w {
        return 1;
    }
    if delta == w {
        return (n / w) as u64;
    }
    if let Some(&b) = memo.get(&(n, d, w)) {
        return b;
    }
    let mut lim = n as u64 * bound(n - 1, d, w - 1, memo) / w as u64;
    if n > w {
        lim = lim.min(n as u64 * bound(n - 1, d, w, memo) / (n - w) as u64);
    }
    let t = (w - delta) as u64;
    let (n64, w64) = (n as u64, w as u64);
    let mut best = 1;
    for m in 1..=lim {
        let (base, extra) = ((m * w64) / n64, (m * w64) % n64);
        let lhs = extra * (base + 1) * base / 2 + (n64 - extra) * base * base.saturating_sub(1) / 2;
        if lhs <= t * m * (m - 1) / 2 {
            best = m;
        }
    }
    memo.insert((n, d, w), best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_exact_values() {
        assert_eq!(johnson_bound(4, 4, 2), 2);
        assert_eq!(johnson_bound(6, 4, 3), 4);
        assert_eq!(johnson_bound(8, 4, 4), 14);
        assert_eq!(johnson_bound(10, 4, 5), 36);
        assert_eq!(johnson_bound(14, 6, 4), 14);
        assert_eq!(johnson_bound(15, 10, 6), 3);
        assert_eq!(johnson_bound(19, 10, 9), 19);
        assert_eq!(johnson_bound(14, 8, 5), 4);
    }

    #[test]
    fn disjoint_blocks() {
        for n in 4..20 {
            for k in 2..=n / 2 {
                assert_eq!(johnson_bound(n, 2 * k, k), (n / k) as u64);
            }
        }
    }
}
