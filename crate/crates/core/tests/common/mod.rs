//! Small independent reimplementations used as oracles by the integration tests.
#![allow(dead_code)]

/// Bits of a pivot vector, leftmost position first.
pub fn positions(n: u32, bits: u64) -> Vec<bool> {
    (0..n).map(|i| bits >> (n - 1 - i) & 1 == 1).collect()
}

/// Column heights: one column per zero after the first one, height = ones before it.
pub fn columns(n: u32, bits: u64) -> Vec<u32> {
    let mut ones = 0;
    let mut out = Vec::new();
    for b in positions(n, bits) {
        if b {
            ones += 1;
        } else if ones > 0 {
            out.push(ones);
        }
    }
    out
}

/// Dots as (row, column) cells of the echelon form free entries.
pub fn dot_grid(n: u32, bits: u64) -> Vec<(u32, u32)> {
    let pos = positions(n, bits);
    let mut pivots = Vec::new();
    let mut dots = Vec::new();
    for (j, &b) in pos.iter().enumerate() {
        if b {
            pivots.push(j as u32);
        } else {
            for (r, &p) in pivots.iter().enumerate() {
                if p < j as u32 {
                    dots.push((r as u32, j as u32));
                }
            }
        }
    }
    dots
}

/// nu_i counted cell by cell.
pub fn nu_by_cells(n: u32, bits: u64, delta: u32, i: u32) -> u32 {
    let dots = dot_grid(n, bits);
    let mut cols: Vec<u32> = dots.iter().map(|&(_, c)| c).collect();
    cols.sort_unstable();
    cols.dedup();
    let drop = (delta - 1 - i) as usize;
    let kept: Vec<u32> = cols.iter().take(cols.len().saturating_sub(drop)).copied().collect();
    dots.iter().filter(|&&(r, c)| r >= i && kept.contains(&c)).count() as u32
}

pub fn upper_exp_by_cells(n: u32, bits: u64, delta: u32) -> u32 {
    (0..delta).map(|i| nu_by_cells(n, bits, delta, i)).min().unwrap()
}

pub fn weight_k_vectors(n: u32, k: u32) -> Vec<u64> {
    (0u64..1 << n).filter(|b| b.count_ones() == k).collect()
}

pub fn is_clique(bits: &[u64], d: u32) -> bool {
    bits.iter().enumerate().all(|(i, a)| bits[i + 1..].iter().all(|b| (a ^ b).count_ones() >= d))
}

/// Heaviest clique with at most `cap` members, by recursion with a simple bound.
/// `vs` holds (bits, value) sorted by value descending.
pub fn max_clique_value(vs: &[(u64, u128)], d: u32, cap: usize) -> u128 {
    fn rec(vs: &[(u64, u128)], d: u32, cap: usize, start: usize, chosen: &mut Vec<u64>, acc: u128, best: &mut u128) {
        *best = (*best).max(acc);
        if chosen.len() == cap || start == vs.len() {
            return;
        }
        let room = (cap - chosen.len()).min(vs.len() - start) as u128;
        if acc + room * vs[start].1 <= *best {
            return;
        }
        for i in start..vs.len() {
            let (b, w) = vs[i];
            if chosen.iter().all(|c| (c ^ b).count_ones() >= d) {
                chosen.push(b);
                rec(vs, d, cap, i + 1, chosen, acc + w, best);
                chosen.pop();
            }
        }
    }
    let mut sorted = vs.to_vec();
    sorted.sort_by(|a, b| b.1.cmp(&a.1));
    let mut best = 0;
    rec(&sorted, d, cap, 0, &mut Vec::new(), 0, &mut best);
    best
}

/// Heaviest clique at field size `q` when vertex `v` weighs `q^e`.
pub fn max_weight_at(vs: &[(u64, u32)], d: u32, q: u128, cap: usize) -> u128 {
    let w: Vec<(u64, u128)> = vs.iter().map(|&(b, e)| (b, q.pow(e))).collect();
    max_clique_value(&w, d, cap)
}

/// Upper regime exponents for every weight-`k` vector, from the cell count.
pub fn upper_exponents(n: u32, d: u32, k: u32) -> Vec<(u64, u32)> {
    weight_k_vectors(n, k).into_iter().map(|b| (b, upper_exp_by_cells(n, b, d / 2))).collect()
}

/// Largest clique.
pub fn clique_number(vs: &[u64], d: u32) -> usize {
    let w: Vec<(u64, u128)> = vs.iter().map(|&b| (b, 1)).collect();
    max_clique_value(&w, d, usize::MAX) as usize
}
