use std::time::Instant;

use num_bigint::BigInt;

use super::kernel::Comparator;
use super::{Prepared, Stats};
use crate::qpoly::QPolynomial;

/// Time checks happen once per this many dive calls.
const CLOCK_STRIDE: u64 = 256;

struct Member {
    clique: Vec<u32>,
    /// Dense weight used for comparisons: `w` in `U`, `w_hat` in `U_hat`.
    key: Vec<i64>,
}

pub(super) struct Searcher<'a> {
    bits: Vec<u64>,
    terms: Vec<Vec<(usize, i64)>>,
    wbar: &'a [u32],
    d: u32,
    ub: usize,
    max_dive: usize,
    len: usize,
    cmp: Comparator,
    front: Vec<Member>,
    front_hat: Vec<Member>,
    sol: Vec<u32>,
    wsol: Vec<i64>,
    scratch: Vec<i64>,
    exps: Vec<u32>,
    stats: Stats,
    deadline: Option<Instant>,
    call_budget: Option<u64>,
    stopped: bool,
}

impl<'a> Searcher<'a> {
    pub(super) fn new(prep: &'a Prepared) -> Self {
        let len = prep.wbar.iter().copied().max().unwrap_or(0) as usize + 1;
        let terms = prep
            .weights
            .iter()
            .map(|w| {
                w.terms()
                    .map(|(e, c)| (e as usize, i64::try_from(c.clone()).expect("weights are bounded in prepare")))
                    .collect()
            })
            .collect();
        Self {
            bits: prep.vertices.iter().map(|v| v.bits()).collect(),
            terms,
            wbar: &prep.wbar,
            d: prep.inst.d,
            ub: prep.inst.ub,
            max_dive: prep.inst.max_dive,
            len,
            cmp: Comparator::new(prep.inst.mode),
            front: Vec::new(),
            front_hat: Vec::new(),
            sol: Vec::new(),
            wsol: vec![0; len],
            scratch: vec![0; len],
            exps: Vec::new(),
            stats: Stats::default(),
            deadline: prep.inst.time_budget.map(|b| Instant::now() + b),
            call_budget: prep.inst.call_budget,
            stopped: false,
        }
    }

    #[inline]
    fn adjacent(&self, a: u32, b: u32) -> bool {
        (self.bits[a as usize] ^ self.bits[b as usize]).count_ones() >= self.d
    }

    fn add_weight(&self, acc: &mut [i64], v: u32, sign: i64) {
        for &(e, c) in &self.terms[v as usize] {
            acc[e] += sign * c;
        }
    }

    /// Offers a known clique to both fronts before the search starts.
    pub(super) fn seed(&mut self, clique: &[u32]) {
        debug_assert!(self.sol.is_empty());
        let common: Vec<u32> =
            (0..self.bits.len() as u32).filter(|&x| clique.iter().all(|&c| self.adjacent(x, c))).collect();
        for &c in clique {
            self.sol.push(c);
            let mut w = std::mem::take(&mut self.wsol);
            self.add_weight(&mut w, c, 1);
            self.wsol = w;
        }
        self.new_record(&common);
        self.sol.clear();
        self.wsol.iter_mut().for_each(|c| *c = 0);
    }

    pub(super) fn search(&mut self) {
        let all: Vec<u32> = (0..self.bits.len() as u32).collect();
        self.dive(&all);
    }

    pub(super) fn finish(self) -> (Vec<(Vec<u32>, QPolynomial)>, Vec<(Vec<u32>, QPolynomial)>, Stats, bool) {
        let hat = self.front_hat.iter().map(|m| (m.clique.clone(), to_poly(&m.key))).collect();
        let u = self.front.iter().map(|m| (m.clique.clone(), self.hat_of(&m.clique))).collect();
        (u, hat, self.stats, self.stopped)
    }

    /// `w(C)` plus the first `ub - |C|` ordering weights compatible with all of `C`.
    fn hat_of(&self, clique: &[u32]) -> QPolynomial {
        let mut acc = vec![0i64; self.len];
        for &c in clique {
            self.add_weight(&mut acc, c, 1);
        }
        let mut room = self.ub.saturating_sub(clique.len());
        for x in 0..self.bits.len() as u32 {
            if room == 0 {
                break;
            }
            if clique.iter().all(|&c| self.adjacent(x, c)) {
                acc[self.wbar[x as usize] as usize] += 1;
                room -= 1;
            }
        }
        to_poly(&acc)
    }

    fn out_of_budget(&mut self) -> bool {
        if self.stopped {
            return true;
        }
        if let Some(max) = self.call_budget {
            if self.stats.dive_calls > max {
                self.stopped = true;
            }
        }
        if let Some(t) = self.deadline {
            if self.stats.dive_calls % CLOCK_STRIDE == 0 && Instant::now() >= t {
                self.stopped = true;
            }
        }
        self.stopped
    }

    /// True when some member of `front` is not beaten by `base + extra`.
    fn some_not_beaten(&mut self, hat: bool, base: &[i64]) -> bool {
        let front = if hat { &self.front_hat } else { &self.front };
        for m in front {
            for (s, (b, k)) in self.scratch.iter_mut().zip(base.iter().zip(&m.key)) {
                *s = b - k;
            }
            if !self.cmp.better(&self.scratch) {
                return true;
            }
        }
        false
    }

    fn dive(&mut self, common: &[u32]) {
        self.stats.dive_calls += 1;
        if self.out_of_budget() {
            return;
        }
        self.new_record(common);
        if self.sol.len() >= self.max_dive {
            return;
        }
        let start = self.sol.last().map_or(0, |&l| l + 1);
        let from = common.partition_point(|&x| x < start);
        let rem_dive = (self.max_dive - self.sol.len()) as i64;
        let rem_ub = (self.ub - self.sol.len()) as i64;
        let mut f = vec![0i64; self.len];
        let mut fh = vec![0i64; self.len];
        for &vi in &common[from..] {
            if self.stopped {
                return;
            }
            let e = self.wbar[vi as usize] as usize;
            // Cut on f = w(sol) + (max_dive - |sol|) w_bar(v_i) and its ub analogue.
            // The ordering makes later candidates no better, so the loop ends here.
            // Skipping only v_i would also be sound; the early return is kept deliberately.
            f.copy_from_slice(&self.wsol);
            f[e] += rem_dive;
            if self.some_not_beaten(false, &f) {
                fh.copy_from_slice(&self.wsol);
                fh[e] += rem_ub;
                if self.some_not_beaten(true, &fh) {
                    return;
                }
            }
            // Bounds for sol + v_i completed by compatible vertices of the whole order.
            let cand = self.sol.len() + 1;
            let cap_dive = self.max_dive - cand;
            let cap_ub = self.ub - cand;
            self.exps.clear();
            if cap_ub > 0 {
                for &x in common {
                    if x != vi && self.adjacent(x, vi) {
                        self.exps.push(self.wbar[x as usize]);
                        if self.exps.len() == cap_ub {
                            break;
                        }
                    }
                }
            }
            f.copy_from_slice(&self.wsol);
            self.add_weight(&mut f, vi, 1);
            fh.copy_from_slice(&f);
            for (j, &x) in self.exps.iter().enumerate() {
                if j < cap_dive {
                    f[x as usize] += 1;
                }
                fh[x as usize] += 1;
            }
            let go = !self.some_not_beaten(false, &f) || !self.some_not_beaten(true, &fh);
            if go {
                let child: Vec<u32> = common.iter().copied().filter(|&x| self.adjacent(x, vi)).collect();
                self.sol.push(vi);
                let mut w = std::mem::take(&mut self.wsol);
                self.add_weight(&mut w, vi, 1);
                self.wsol = w;
                self.dive(&child);
                let mut w = std::mem::take(&mut self.wsol);
                self.add_weight(&mut w, vi, -1);
                self.wsol = w;
                self.sol.pop();
            }
        }
    }

    fn new_record(&mut self, common: &[u32]) {
        self.stats.newrecord_calls += 1;
        let w = self.wsol.clone();
        if !self.some_not_beaten(false, &w) {
            let entry = Member { clique: self.sol.clone(), key: w };
            insert_and_sweep(&mut self.front, entry, &self.cmp, &mut self.scratch);
        }
        let mut hat = self.wsol.clone();
        let room = self.ub.saturating_sub(self.sol.len());
        for &x in common.iter().take(room) {
            hat[self.wbar[x as usize] as usize] += 1;
        }
        if !self.some_not_beaten(true, &hat) {
            let entry = Member { clique: self.sol.clone(), key: hat };
            insert_and_sweep(&mut self.front_hat, entry, &self.cmp, &mut self.scratch);
        }
    }
}

/// Appends `entry` and drops, in insertion order, every member that some
/// other member beats at every admissible `q`.
fn insert_and_sweep(front: &mut Vec<Member>, entry: Member, cmp: &Comparator, scratch: &mut [i64]) {
    front.push(entry);
    let mut i = 0;
    while i < front.len() {
        let dominated = (0..front.len()).any(|j| {
            if i == j {
                return false;
            }
            for (s, (a, b)) in scratch.iter_mut().zip(front[i].key.iter().zip(&front[j].key)) {
                *s = a - b;
            }
            !cmp.better(scratch)
        });
        if dominated {
            front.remove(i);
        } else {
            i += 1;
        }
    }
}

fn to_poly(dense: &[i64]) -> QPolynomial {
    QPolynomial::from_terms(dense.iter().enumerate().filter(|(_, &c)| c != 0).map(|(e, &c)| (e as u32, BigInt::from(c))))
}
