//! Lower bounds for Ferrers diagram rank-metric codes.
//!
//! Every known construction is a predicate on the column heights plus a
//! dimension formula. The engine evaluates all of them on a diagram and on its
//! transpose, keeps the best, and if that is still below the upper bound it
//! also tries sub-diagrams (a code in a sub-diagram is a code in the diagram).

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::diagrams::FerrersDiagram;

/// Maximum number of single corner dots removed when looking for a better sub-diagram.
pub const PENDING_DOT_BUDGET: u32 = 3;

/// Which construction produced a lower bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Construction {
    /// Dimension zero needs no construction.
    Trivial,
    /// Rank distance 1 or 2.
    SmallDistance,
    /// Square diagram with rank distance 3.
    SquareDistanceThree,
    /// Shortening of an MRD code; needs `gamma_{n-delta+1} >= n`.
    Shortening,
    /// Subcode of a shortened MRD code; needs `gamma_{n-delta+1} >= n-1`.
    SubcodeShortening { optimal: bool },
    /// Gabidulin subcode with parameter `r`.
    RestrictedGabidulin { r: u32 },
    /// Systematic MRD codes over a divisor chain `t_1 | t_2 | ... | t_l`.
    GabidulinChain { chain: Vec<u32>, r: u32, w: u32 },
    /// Systematic MRD codes with extra conditions on the column after the cut.
    SystematicMrd,
    /// MDS codes placed on the diagonals; needs `q >= theta_max - 1`.
    MdsDiagonals { theta: Vec<u32> },
    /// Block decomposition `[[F1, D], [, F2]]` with a full block `D`.
    BlockCombine {
        split_row: u32,
        split_col: u32,
        delta_top: u32,
        parts: Box<(LowerBoundWitness, LowerBoundWitness)>,
    },
    /// Decomposition around a full top-right block of `m1` rows.
    CornerCombine { m1: u32, n1: u32 },
    /// One of three small diagrams with individually constructed codes.
    Sporadic,
    /// A code in a sub-diagram.
    SubDiagram { inner: Box<LowerBoundWitness> },
}

impl Construction {
    pub fn tag(&self) -> &'static str {
        match self {
            Construction::Trivial => "trivial",
            Construction::SmallDistance => "small-distance",
            Construction::SquareDistanceThree => "square-distance-three",
            Construction::Shortening => "shortening",
            Construction::SubcodeShortening { .. } => "subcode-shortening",
            Construction::RestrictedGabidulin { .. } => "restricted-gabidulin",
            Construction::GabidulinChain { .. } => "gabidulin-chain",
            Construction::SystematicMrd => "systematic-mrd",
            Construction::MdsDiagonals { .. } => "mds-diagonals",
            Construction::BlockCombine { .. } => "block-combine",
            Construction::CornerCombine { .. } => "corner-combine",
            Construction::Sporadic => "sporadic",
            Construction::SubDiagram { .. } => "sub-diagram",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBoundWitness {
    pub dimension: u32,
    /// The diagram the construction was applied to, in the orientation used.
    pub diagram: FerrersDiagram,
    pub delta: u32,
    /// True when the construction was applied to the transposed diagram.
    pub transposed: bool,
    /// The bound holds for every prime power `q >= min_q`.
    pub min_q: u64,
    pub construction: Construction,
}

impl LowerBoundWitness {
    fn trivial(f: &FerrersDiagram, delta: u32) -> Self {
        Self {
            dimension: 0,
            diagram: f.clone(),
            delta,
            transposed: false,
            min_q: 2,
            construction: Construction::Trivial,
        }
    }

    /// Construction of the innermost witness, skipping sub-diagram wrappers.
    pub fn root_construction(&self) -> &Construction {
        match &self.construction {
            Construction::SubDiagram { inner } => inner.root_construction(),
            c => c,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct Key {
    delta: u32,
    q_floor: u64,
    budget: u32,
    crop: bool,
}

/// Memoizing evaluator. Reuse one engine across many diagrams.
pub struct LowerBoundEngine {
    pending_budget: u32,
    memo: HashMap<(FerrersDiagram, Key), LowerBoundWitness>,
}

impl Default for LowerBoundEngine {
    fn default() -> Self {
        Self::new(PENDING_DOT_BUDGET)
    }
}

impl LowerBoundEngine {
    pub fn new(pending_budget: u32) -> Self {
        Self { pending_budget, memo: HashMap::new() }
    }

    /// Best lower bound valid for every `q >= q_floor`.
    /// Use `u64::MAX` to accept constructions with any field size restriction.
    pub fn lower_bound(&mut self, f: &FerrersDiagram, delta: u32, q_floor: u64) -> LowerBoundWitness {
        assert!(delta >= 1, "rank distance must be positive");
        let key = Key { delta, q_floor, budget: self.pending_budget, crop: true };
        self.best(f, key)
    }

    /// Only the direct constructions, without sub-diagrams.
    pub fn direct_bound(&mut self, f: &FerrersDiagram, delta: u32, q_floor: u64) -> LowerBoundWitness {
        self.best(f, Key { delta, q_floor, budget: 0, crop: false })
    }

    fn best(&mut self, f: &FerrersDiagram, key: Key) -> LowerBoundWitness {
        if let Some(w) = self.memo.get(&(f.clone(), key)) {
            return w.clone();
        }
        let delta = key.delta;
        let upper = f.upper_exponent(delta);
        let mut best = LowerBoundWitness::trivial(f, delta);
        if upper > 0 {
            for cand in self.direct(f, delta, key.q_floor) {
                if better(&cand, &best) {
                    best = cand;
                }
            }
        }
        if best.dimension < upper && key.budget > 0 {
            for g in f.corner_removals() {
                if g.upper_exponent(delta) <= best.dimension {
                    continue;
                }
                let inner = self.best(&g, Key { budget: key.budget - 1, crop: false, ..key });
                if inner.dimension > best.dimension {
                    best = wrap(f, delta, inner);
                }
                if best.dimension == upper {
                    break;
                }
            }
        }
        if best.dimension < upper && key.crop {
            'outer: for rows in (1..=f.num_rows()).rev() {
                for cols in (1..=f.num_cols()).rev() {
                    if rows == f.num_rows() && cols == f.num_cols() {
                        continue;
                    }
                    let g = f.crop(rows, cols);
                    if g.upper_exponent(delta) <= best.dimension {
                        continue;
                    }
                    let inner = self.best(&g, Key { crop: false, ..key });
                    if inner.dimension > best.dimension {
                        best = wrap(f, delta, inner);
                        if best.dimension == upper {
                            break 'outer;
                        }
                    }
                }
            }
        }
        self.memo.insert((f.clone(), key), best.clone());
        best
    }

    /// Every direct construction that applies, on both orientations, in fixed order.
    fn direct(&mut self, f: &FerrersDiagram, delta: u32, q_floor: u64) -> Vec<LowerBoundWitness> {
        let t = f.transpose();
        let orientations: Vec<(FerrersDiagram, bool)> =
            if t == *f { vec![(f.clone(), false)] } else { vec![(f.clone(), false), (t, true)] };
        let mut out = Vec::new();
        for check in CHECKS {
            for (g, tr) in &orientations {
                if let Some((dim, c, mq)) = check(g.cols(), delta) {
                    if mq <= q_floor {
                        out.push(witness(g, delta, *tr, mq, dim, c));
                    }
                }
            }
        }
        for (g, tr) in &orientations {
            if let Some(w) = self.block_combine(g, delta, q_floor) {
                out.push(LowerBoundWitness { transposed: *tr, ..w });
            }
        }
        for (g, tr) in &orientations {
            if let Some((dim, c)) = corner_combine(g.cols(), delta) {
                out.push(witness(g, delta, *tr, 2, dim, c));
            }
        }
        for (g, tr) in &orientations {
            if let Some((dim, c)) = sporadic(g.cols(), delta) {
                out.push(witness(g, delta, *tr, 2, dim, c));
            }
        }
        let upper = f.upper_exponent(delta);
        out.retain(|w| {
            debug_assert!(w.dimension <= upper, "construction {:?} exceeds the upper bound on {:?}", w.construction, f);
            w.dimension <= upper
        });
        out
    }

    fn block_combine(&mut self, f: &FerrersDiagram, delta: u32, q_floor: u64) -> Option<LowerBoundWitness> {
        if delta < 2 {
            return None;
        }
        let cols = f.cols();
        let rows = f.rows();
        let (n, m) = (cols.len(), rows.len());
        let upper = f.upper_exponent(delta);
        let mut best: Option<LowerBoundWitness> = None;
        for m3 in 1..m {
            for n1 in 1..n {
                let n3 = n - n1;
                // D: the top m3 rows cover the rightmost n3 columns.
                if (rows[m3 - 1] as usize) < n3 {
                    continue;
                }
                // F1 lies in the top m3 rows, F2 in the rightmost n3 columns.
                if cols[n1 - 1] as usize > m3 || rows[m3] as usize > n3 {
                    continue;
                }
                let f1 = FerrersDiagram::from_cols(cols[..n1].to_vec()).expect("prefix of a diagram");
                let f2 = FerrersDiagram::from_rows(&rows[m3..]).expect("suffix of a diagram");
                for d1 in 1..delta {
                    let d2 = delta - d1;
                    let cap = f1.upper_exponent(d1).min(f2.upper_exponent(d2));
                    if best.as_ref().is_some_and(|b| b.dimension >= cap) || cap == 0 {
                        continue;
                    }
                    let key1 = Key { delta: d1, q_floor, budget: 0, crop: false };
                    let key2 = Key { delta: d2, q_floor, budget: 0, crop: false };
                    let w1 = self.best(&f1, key1);
                    let w2 = self.best(&f2, key2);
                    let dim = w1.dimension.min(w2.dimension);
                    let min_q = w1.min_q.max(w2.min_q);
                    let cand = LowerBoundWitness {
                        dimension: dim,
                        diagram: f.clone(),
                        delta,
                        transposed: false,
                        min_q,
                        construction: Construction::BlockCombine {
                            split_row: m3 as u32,
                            split_col: n1 as u32,
                            delta_top: d1,
                            parts: Box::new((w1, w2)),
                        },
                    };
                    if best.as_ref().map_or(true, |b| better(&cand, b)) {
                        best = Some(cand);
                    }
                    if best.as_ref().is_some_and(|b| b.dimension == upper) {
                        return best;
                    }
                }
            }
        }
        best.filter(|b| b.dimension > 0)
    }
}

type Check = fn(&[u32], u32) -> Option<(u32, Construction, u64)>;

/// Closed-form constructions in tie-break order.
const CHECKS: [Check; 8] = [
    small_distance,
    square_distance_three,
    shortening,
    subcode_shortening,
    restricted_gabidulin,
    gabidulin_chain,
    systematic_mrd,
    mds_diagonals,
];

fn witness(g: &FerrersDiagram, delta: u32, transposed: bool, min_q: u64, dim: u32, c: Construction) -> LowerBoundWitness {
    LowerBoundWitness { dimension: dim, diagram: g.clone(), delta, transposed, min_q, construction: c }
}

fn wrap(f: &FerrersDiagram, delta: u32, inner: LowerBoundWitness) -> LowerBoundWitness {
    LowerBoundWitness {
        dimension: inner.dimension,
        diagram: f.clone(),
        delta,
        transposed: false,
        min_q: inner.min_q,
        construction: Construction::SubDiagram { inner: Box::new(inner) },
    }
}

/// Larger dimension wins; on ties the one valid for more field sizes wins.
fn better(a: &LowerBoundWitness, b: &LowerBoundWitness) -> bool {
    a.dimension > b.dimension || (a.dimension == b.dimension && a.min_q < b.min_q)
}

fn prefix_sum(g: &[u32], upto: usize) -> u32 {
    g[..upto].iter().sum()
}

fn small_distance(g: &[u32], delta: u32) -> Option<(u32, Construction, u64)> {
    let n = g.len();
    let m = *g.last()? as usize;
    if delta > 2 || m < n {
        return None;
    }
    let k = (n + 1).saturating_sub(delta as usize);
    Some((prefix_sum(g, k), Construction::SmallDistance, 2))
}

fn square_distance_three(g: &[u32], delta: u32) -> Option<(u32, Construction, u64)> {
    let n = g.len();
    let m = *g.last()? as usize;
    if delta != 3 || n < 3 || m != n {
        return None;
    }
    let f = FerrersDiagram::from_cols(g.to_vec()).ok()?;
    Some((f.upper_exponent(3), Construction::SquareDistanceThree, 2))
}

fn shortening(g: &[u32], delta: u32) -> Option<(u32, Construction, u64)> {
    let n = g.len();
    let m = *g.last()? as usize;
    let d = delta as usize;
    if m < n || d < 2 || d > n {
        return None;
    }
    (g[n - d + 1] as usize >= n).then(|| (prefix_sum(g, n - d + 1), Construction::Shortening, 2))
}

fn subcode_shortening(g: &[u32], delta: u32) -> Option<(u32, Construction, u64)> {
    let n = g.len();
    let m = *g.last()? as usize;
    let d = delta as usize;
    if d < 2 || d + 1 > n {
        return None;
    }
    if (g[n - d + 1] as usize) < n - 1 {
        return None;
    }
    let head = ((m + 1 - n) as u32).min(g[0]);
    let dim = head + g[1..=n - d].iter().sum::<u32>();
    let optimal = m >= n - 1 + g[0] as usize;
    Some((dim, Construction::SubcodeShortening { optimal }, 2))
}

fn restricted_gabidulin(g: &[u32], delta: u32) -> Option<(u32, Construction, u64)> {
    let n = g.len();
    let d = delta as usize;
    if d < 2 {
        return None;
    }
    for r in 0..d {
        if d > n.saturating_sub(r) {
            break;
        }
        let nr = (n - r) as u32;
        if g[n - d] > nr || g[n - d + 1] < nr {
            continue;
        }
        let ok = (0..r).all(|i| g[n - r + i] >= nr + prefix_sum(g, i + 1));
        if ok {
            return Some((prefix_sum(g, n - d + 1), Construction::RestrictedGabidulin { r: r as u32 }, 2));
        }
    }
    None
}

fn gabidulin_chain(g: &[u32], delta: u32) -> Option<(u32, Construction, u64)> {
    let n = g.len();
    let m = *g.last()? as usize;
    let d = delta as usize;
    if d == 0 || d > n {
        return None;
    }
    let k = n - d + 1;
    let top = n.max(m) as u32;
    for r in 0..d {
        if d > n.saturating_sub(r) {
            break;
        }
        let nr = (n - r) as u32;
        for t1 in (k as u32).max(2)..=top {
            let mut chains = Vec::new();
            extend_chains(vec![t1], nr, top, &mut chains);
            for chain in chains {
                let s2 = if chain.len() > 1 { chain[1] / chain[0] } else { 1 };
                for w in 1..=s2 {
                    if chain_conditions(g, k, d, r, &chain, w) {
                        let c = Construction::GabidulinChain { chain: chain.clone(), r: r as u32, w };
                        return Some((prefix_sum(g, k), c, 2));
                    }
                }
            }
        }
    }
    None
}

/// Divisor chains starting at `chain` whose last element is the first one reaching `nr`.
fn extend_chains(chain: Vec<u32>, nr: u32, top: u32, out: &mut Vec<Vec<u32>>) {
    let last = *chain.last().expect("chain is nonempty");
    if last >= nr {
        out.push(chain);
        return;
    }
    let mut next = 2 * last;
    while next <= top {
        let mut c = chain.clone();
        c.push(next);
        extend_chains(c, nr, top, out);
        next += last;
    }
}

fn chain_conditions(g: &[u32], k: usize, d: usize, r: usize, chain: &[u32], w: u32) -> bool {
    let t1 = chain[0];
    let tl = *chain.last().expect("chain is nonempty");
    if (k as u32) > t1 {
        return false;
    }
    if g[k - 1] > w * t1 {
        return false;
    }
    if (k as u32) < t1 && d >= 2 && g[k] < w * t1 {
        return false;
    }
    for theta in 0..chain.len() - 1 {
        let idx = chain[theta] as usize;
        if idx >= g.len() || g[idx] < chain[theta + 1] {
            return false;
        }
    }
    let n = g.len();
    (0..r).all(|h| g[n - r + h] >= tl + prefix_sum(g, h + 1))
}

fn systematic_mrd(g: &[u32], delta: u32) -> Option<(u32, Construction, u64)> {
    let n = g.len();
    let m = *g.last()? as usize;
    let d = delta as usize;
    if !(m >= n && n >= d && d >= 2) {
        return None;
    }
    let k = n - d + 1;
    if k + 1 >= n {
        return None;
    }
    let gk = g[k] as i64;
    let c1 = g[k] as usize >= n || (0..k).all(|i| gk - k as i64 >= g[i] as i64 - i as i64);
    let c2 = g[k + 1] as usize >= n;
    (c1 && c2).then(|| (prefix_sum(g, k), Construction::SystematicMrd, 2))
}

/// Dot counts of the diagonals that start in the rightmost column and run up-left.
pub fn diagonal_counts(g: &[u32]) -> Vec<u32> {
    let n = g.len();
    let m = g.last().copied().unwrap_or(0);
    (0..m)
        .map(|start| {
            (0..=start.min(n as u32 - 1))
                .filter(|&s| {
                    let row = start - s;
                    let col = n - 1 - s as usize;
                    row < g[col]
                })
                .count() as u32
        })
        .collect()
}

fn mds_diagonals(g: &[u32], delta: u32) -> Option<(u32, Construction, u64)> {
    let n = g.len();
    let m = *g.last()? as usize;
    if m < n || delta as usize > n {
        return None;
    }
    let theta = diagonal_counts(g);
    let dim: u32 = theta.iter().map(|&t| (t + 1).saturating_sub(delta)).sum();
    let tmax = theta.iter().copied().max().unwrap_or(0) as u64;
    let min_q = tmax.saturating_sub(1).max(2);
    (dim > 0).then_some((dim, Construction::MdsDiagonals { theta }, min_q))
}

fn corner_combine(g: &[u32], delta: u32) -> Option<(u32, Construction)> {
    let n = g.len();
    let f = FerrersDiagram::from_cols(g.to_vec()).ok()?;
    let rho = f.rows();
    let m = rho.len();
    let d = delta as usize;
    if d < 2 {
        return None;
    }
    for m1 in 1..m {
        if d > m1 + 1 {
            continue;
        }
        let m3 = m - m1;
        for n1 in 1..n {
            let n3 = n - n1;
            if (rho[m1 - 1] as usize) < n3 || rho[m1] as usize > n3 {
                continue;
            }
            if d < m1 + 1 && n3 < m1 {
                continue;
            }
            if 1 + m1 + n3 > n1.max(m3) {
                continue;
            }
            let mut alpha: Vec<i64> = (0..m1).map(|i| rho[i] as i64 - n3 as i64).collect();
            alpha.extend((n1..n).map(|j| g[j] as i64 - m1 as i64));
            alpha.sort_unstable();
            let idx = m1 + n3 + 2 - d;
            if idx == 0 || idx > alpha.len() || alpha[idx - 1] < (m1 + n3) as i64 {
                continue;
            }
            if (rho[d - 2] as i64 - n3 as i64) < m3 as i64 {
                continue;
            }
            let dim: u32 = rho[d - 1..].iter().sum();
            return Some((dim, Construction::CornerCombine { m1: m1 as u32, n1: n1 as u32 }));
        }
    }
    None
}

const SPORADIC: [(&[u32], u32, u32); 3] = [(&[2, 2, 4, 4, 6, 6], 4, 8), (&[3, 3, 3, 5], 3, 6), (&[2, 2, 2, 3, 6], 3, 5)];

fn sporadic(g: &[u32], delta: u32) -> Option<(u32, Construction)> {
    SPORADIC
        .iter()
        .find(|(cols, d, _)| *cols == g && *d == delta)
        .map(|(_, _, dim)| (*dim, Construction::Sporadic))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(r: &[u32]) -> FerrersDiagram {
        FerrersDiagram::from_rows(r).unwrap()
    }

    #[test]
    fn block_combine_example() {
        let f = FerrersDiagram::from_cols(vec![2, 2, 2, 5, 5]).unwrap();
        let mut e = LowerBoundEngine::new(0);
        let w = e.direct_bound(&f, 4, 2);
        assert_eq!(w.dimension, 3);
        assert_eq!(f.upper_exponent(4), 3);
        assert_eq!(w.root_construction().tag(), "block-combine");
    }

    #[test]
    fn corner_combine_rows_below_cut() {
        // m1 = 2, n1 = 5, delta = 3: the two short bottom rows are the code dimension.
        let g = [2, 2, 2, 2, 2, 4, 4];
        let f = FerrersDiagram::from_cols(g.to_vec()).unwrap();
        assert_eq!(f.rows(), vec![7, 7, 2, 2]);
        assert_eq!(corner_combine(&g, 3), Some((4, Construction::CornerCombine { m1: 2, n1: 5 })));
        assert_eq!(f.upper_exponent(3), 4);
        assert_eq!(corner_combine(&[2, 2, 2, 5, 5], 4), None);
    }

    #[test]
    fn sporadic_values() {
        let mut e = LowerBoundEngine::default();
        for (cols, d, dim) in SPORADIC {
            let f = FerrersDiagram::from_cols(cols.to_vec()).unwrap();
            assert_eq!(e.lower_bound(&f, d, 2).dimension, dim);
            assert_eq!(e.lower_bound(&f.transpose(), d, 2).dimension, dim);
        }
    }

    #[test]
    fn staircase_needs_large_field() {
        let f = rows(&[6, 5, 4, 3, 2, 1]);
        let mut e = LowerBoundEngine::default();
        assert_eq!(e.lower_bound(&f, 4, 5).dimension, 6);
        let w = e.lower_bound(&f, 4, 2);
        assert_eq!(w.dimension, 5);
        assert_eq!(w.min_q, 2);
        assert_eq!(diagonal_counts(f.cols()), vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn systematic_needs_sub_diagram() {
        // The table lists 11 for this diagram at rank distance 4.
        let f = rows(&[7, 7, 6, 4, 3, 2, 2, 1]);
        let mut e = LowerBoundEngine::default();
        assert!(e.lower_bound(&f, 4, 2).dimension >= 11);
    }

    #[test]
    fn full_square_mds_is_triangular() {
        for n in 2..7u32 {
            let g = vec![n; n as usize];
            let theta = diagonal_counts(&g);
            assert_eq!(theta, (1..=n).collect::<Vec<_>>());
            for d in 1..=n {
                let (dim, _, _) = mds_diagonals(&g, d).unwrap();
                assert_eq!(dim, (n - d + 1) * (n - d + 2) / 2);
            }
        }
    }
}
