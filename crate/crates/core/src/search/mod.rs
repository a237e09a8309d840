//! Pareto branch-and-bound for heaviest cliques of pivot vectors.
//!
//! Weights are polynomials in `q`, so there is no single heaviest clique.
//! The solver keeps a front `U` of cliques none of which is beaten at every
//! admissible `q`, and a second front `U_hat` of completed upper bounds.

mod engine;
pub(crate) mod kernel;
mod report;

use std::collections::HashMap;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::diagrams::{all_pivots, PivotVector};
use crate::qpoly::QPolynomial;
use crate::weights::{lower_weight, upper_weight, LowerBoundEngine, Regime};
use crate::{check_params, Error, Result};

pub use report::{front_labels, q_label, FrontRecord, SolveReport};

/// Range of field sizes a run is valid for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QMode {
    All,
    Fixed(u64),
    /// `lo <= q <= hi`, unbounded when `hi` is `None`.
    Range { lo: u64, hi: Option<u64> },
}

impl QMode {
    /// Inclusive bounds, with `q >= 2` implied.
    pub fn bounds(&self) -> (u64, Option<u64>) {
        match *self {
            QMode::All => (2, None),
            QMode::Fixed(q) => (q, Some(q)),
            QMode::Range { lo, hi } => (lo.max(2), hi),
        }
    }

    pub fn lowest_q(&self) -> u64 {
        self.bounds().0
    }

    pub fn contains(&self, q: u64) -> bool {
        let (lo, hi) = self.bounds();
        q >= lo && hi.map_or(true, |h| q <= h)
    }

    /// `f` beats `g` for some `q` in range.
    pub fn better(&self, f: &QPolynomial, g: &QPolynomial) -> bool {
        match *self {
            QMode::All => f.is_strictly_better(g),
            QMode::Fixed(q) => f.cmp_at(g, q) == std::cmp::Ordering::Greater,
            QMode::Range { lo, hi } => f.restrict_better(g, lo.max(2), hi),
        }
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.bounds();
        if matches!(self, QMode::Fixed(q) if *q < 2) {
            return Err(Error::Invalid("q must be at least 2".into()));
        }
        if let Some(h) = hi {
            if h < lo {
                return Err(Error::Invalid(format!("empty q range {lo}..{h}")));
            }
        }
        Ok(())
    }
}

impl std::fmt::Display for QMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            QMode::All => f.write_str("all"),
            QMode::Fixed(q) => write!(f, "q={q}"),
            QMode::Range { lo, hi: None } => write!(f, "q>={lo}"),
            QMode::Range { lo, hi: Some(hi) } => write!(f, "{lo}<=q<={hi}"),
        }
    }
}

impl std::str::FromStr for QMode {
    type Err = Error;
    /// Accepts `all`, `Q`, `q=Q`, `Qmin..Qmax`, `Qmin<=q<=Qmax`, `Qmin..` and `q>=Qmin`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad q mode {s:?}")));
        let mode = if s == "all" {
            QMode::All
        } else if let Some((a, b)) = s.split_once("<=q<=") {
            QMode::Range { lo: num(a)?, hi: Some(num(b)?) }
        } else if let Some(rest) = s.strip_prefix("q>=") {
            QMode::Range { lo: num(rest)?, hi: None }
        } else if let Some(rest) = s.strip_prefix("q=") {
            QMode::Fixed(num(rest)?)
        } else if let Some((a, b)) = s.split_once("..") {
            let hi = if b.trim().is_empty() { None } else { Some(num(b)?) };
            QMode::Range { lo: num(a)?, hi }
        } else {
            QMode::Fixed(num(s)?)
        };
        mode.validate()?;
        Ok(mode)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WeightSpec {
    Regime(Regime),
    /// One weight per vertex, in the order of [`all_pivots`]. Coefficients must be nonnegative.
    Custom(Vec<QPolynomial>),
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub n: u32,
    pub d: u32,
    pub k: u32,
    pub weights: WeightSpec,
    pub ub: usize,
    pub max_dive: usize,
    pub mode: QMode,
    pub time_budget: Option<Duration>,
    pub call_budget: Option<u64>,
}

impl Instance {
    /// Instance with `ub = max_dive = ub`, all `q`, no budget.
    pub fn new(n: u32, d: u32, k: u32, regime: Regime, ub: usize) -> Self {
        Self {
            n,
            d,
            k,
            weights: WeightSpec::Regime(regime),
            ub,
            max_dive: ub,
            mode: QMode::All,
            time_budget: None,
            call_budget: None,
        }
    }

    pub fn with_mode(mut self, mode: QMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_max_dive(mut self, max_dive: usize) -> Self {
        self.max_dive = max_dive;
        self
    }

    pub fn with_weights(mut self, weights: WeightSpec) -> Self {
        self.weights = weights;
        self
    }

    pub fn with_time_budget(mut self, budget: Duration) -> Self {
        self.time_budget = Some(budget);
        self
    }

    pub fn with_call_budget(mut self, calls: u64) -> Self {
        self.call_budget = Some(calls);
        self
    }

    pub fn regime(&self) -> Option<Regime> {
        match self.weights {
            WeightSpec::Regime(r) => Some(r),
            WeightSpec::Custom(_) => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_params(self.n, self.d, self.k)?;
        self.mode.validate()?;
        if self.ub == 0 {
            return Err(Error::Invalid("ub must be positive".into()));
        }
        if self.max_dive == 0 || self.max_dive > self.ub {
            return Err(Error::Invalid(format!("max_dive = {} must lie in 1..=ub = {}", self.max_dive, self.ub)));
        }
        Ok(())
    }

    /// Builds the ordered vertex list and its weights.
    pub fn prepare(&self) -> Result<Prepared> {
        self.validate()?;
        let pivots = all_pivots(self.n, self.k);
        let weights: Vec<QPolynomial> = match &self.weights {
            WeightSpec::Regime(Regime::Upper) => pivots.iter().map(|v| upper_weight(v, self.d)).collect(),
            WeightSpec::Regime(Regime::Lower) => {
                let mut engine = LowerBoundEngine::default();
                let floor = self.mode.lowest_q();
                pivots.iter().map(|v| lower_weight(&mut engine, v, self.d, floor).0).collect()
            }
            WeightSpec::Custom(w) => {
                if w.len() != pivots.len() {
                    return Err(Error::Invalid(format!("{} custom weights for {} vertices", w.len(), pivots.len())));
                }
                w.clone()
            }
        };
        let mut wbar = Vec::with_capacity(weights.len());
        for w in &weights {
            wbar.push(wbar_exponent(w)?);
        }
        let mut order: Vec<usize> = (0..pivots.len()).collect();
        order.sort_by(|&a, &b| wbar[b].cmp(&wbar[a]).then(pivots[b].bits().cmp(&pivots[a].bits())));
        let vertices: Vec<PivotVector> = order.iter().map(|&i| pivots[i]).collect();
        let weights: Vec<QPolynomial> = order.iter().map(|&i| weights[i].clone()).collect();
        let wbar: Vec<u32> = order.iter().map(|&i| wbar[i]).collect();
        let index = vertices.iter().enumerate().map(|(i, v)| (v.bits(), i as u32)).collect();
        Ok(Prepared { inst: self.clone(), vertices, weights, wbar, index })
    }
}

/// Exponent `e` of the monomial `q^e` used as the ordering weight.
///
/// A weight `q^e` is its own bound. Otherwise `q^(deg + ceil(log2 sum |c|))`
/// dominates `w` for every `q >= 2`.
pub fn wbar_exponent(w: &QPolynomial) -> Result<u32> {
    let Some(deg) = w.degree() else {
        return Ok(0);
    };
    let mut total = num_bigint::BigInt::from(0);
    for (_, c) in w.terms() {
        if c.sign() == num_bigint::Sign::Minus {
            return Err(Error::Invalid(format!("weight {w} has a negative coefficient")));
        }
        total += c;
    }
    if total > num_bigint::BigInt::from(1i64 << 40) {
        return Err(Error::Guard(format!("weight {w} has coefficients too large for the search kernel")));
    }
    let total = u64::try_from(total).expect("checked above");
    let extra = if total <= 1 { 0 } else { 64 - (total - 1).leading_zeros() };
    Ok(deg + extra)
}

/// An instance with its vertex order fixed.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub inst: Instance,
    /// Vertices by descending ordering weight, ties by descending encoding.
    pub vertices: Vec<PivotVector>,
    pub weights: Vec<QPolynomial>,
    pub wbar: Vec<u32>,
    index: HashMap<u64, u32>,
}

impl Prepared {
    pub fn position(&self, v: &PivotVector) -> Option<usize> {
        self.index.get(&v.bits()).map(|&i| i as usize)
    }

    pub fn weight_of(&self, v: &PivotVector) -> Option<&QPolynomial> {
        self.position(v).map(|i| &self.weights[i])
    }

    fn positions(&self, members: &[PivotVector]) -> Result<Vec<u32>> {
        let mut out = Vec::with_capacity(members.len());
        for m in members {
            let i = self.position(m).ok_or_else(|| Error::Invalid(format!("{m} is not a vertex of this instance")))?;
            out.push(i as u32);
        }
        for (a, &i) in out.iter().enumerate() {
            for &j in &out[..a] {
                if self.vertices[i as usize].hamming(&self.vertices[j as usize]) < self.inst.d {
                    return Err(Error::Invalid(format!(
                        "{} and {} are closer than d = {}",
                        self.vertices[i as usize], self.vertices[j as usize], self.inst.d
                    )));
                }
            }
        }
        Ok(out)
    }

    pub fn clique_weight(&self, members: &[PivotVector]) -> Result<QPolynomial> {
        Ok(self.positions(members)?.iter().map(|&i| self.weights[i as usize].clone()).sum())
    }

    /// Weight of `members` plus the ordering weights of the first compatible
    /// vertices until `ub` members are reached. Bounds every clique containing `members`.
    pub fn ub_extend(&self, members: &[PivotVector]) -> Result<QPolynomial> {
        let pos = self.positions(members)?;
        let mut f: QPolynomial = pos.iter().map(|&i| self.weights[i as usize].clone()).sum();
        let mut room = self.inst.ub.saturating_sub(pos.len());
        for (i, v) in self.vertices.iter().enumerate() {
            if room == 0 {
                break;
            }
            if pos.iter().all(|&p| self.vertices[p as usize].hamming(v) >= self.inst.d) {
                f += &QPolynomial::monomial(1, self.wbar[i]);
                room -= 1;
            }
        }
        Ok(f)
    }

    fn make_clique(&self, mut members: Vec<u32>, weight_hat: QPolynomial) -> Clique {
        members.sort_by(|a, b| self.vertices[*b as usize].bits().cmp(&self.vertices[*a as usize].bits()));
        let weight = members.iter().map(|&i| self.weights[i as usize].clone()).sum();
        Clique { members: members.iter().map(|&i| self.vertices[i as usize]).collect(), weight, weight_hat }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clique {
    /// Members by descending encoding.
    pub members: Vec<PivotVector>,
    pub weight: QPolynomial,
    /// Completed upper bound, as used by the `U_hat` front.
    pub weight_hat: QPolynomial,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub dive_calls: u64,
    pub newrecord_calls: u64,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParetoFront {
    pub mode: QMode,
    pub u: Vec<Clique>,
    pub u_hat: Vec<Clique>,
    pub stats: Stats,
    /// Set when a budget stopped the search. `u` is then only a lower bound.
    pub incomplete: bool,
}

impl ParetoFront {
    /// Best clique weight at `q`.
    pub fn value_at(&self, q: u64) -> num_bigint::BigInt {
        self.u.iter().map(|c| c.weight.eval(q)).max().unwrap_or_default()
    }

    pub fn best_at(&self, q: u64) -> Option<&Clique> {
        let mut best: Option<&Clique> = None;
        for c in &self.u {
            if best.map_or(true, |b| c.weight.cmp_at(&b.weight, q) == std::cmp::Ordering::Greater) {
                best = Some(c);
            }
        }
        best
    }

    /// Best upper bound at `q` from the `U_hat` front.
    pub fn bound_at(&self, q: u64) -> num_bigint::BigInt {
        self.u_hat.iter().map(|c| c.weight_hat.eval(q)).max().unwrap_or_default()
    }

    pub fn weights(&self) -> Vec<QPolynomial> {
        self.u.iter().map(|c| c.weight.clone()).collect()
    }
}

pub fn solve(inst: &Instance) -> Result<ParetoFront> {
    let prep = inst.prepare()?;
    Ok(run(&prep, &[]))
}

pub fn solve_fixed_q(inst: &Instance, q: u64) -> Result<ParetoFront> {
    solve(&inst.clone().with_mode(QMode::Fixed(q)))
}

/// Fixed-`q` runs for `q = 2..=lambda`, then one run for `q > lambda`.
///
/// In the lower regime each run uses the weights valid from its smallest `q`.
pub fn solve_split(inst: &Instance, lambda: u64) -> Result<Vec<ParetoFront>> {
    let (lo, hi) = inst.mode.bounds();
    let mut out = Vec::new();
    let top = hi.map_or(lambda, |h| h.min(lambda));
    for q in lo..=top {
        out.push(solve_fixed_q(inst, q)?);
    }
    let rest_lo = lo.max(lambda + 1);
    if hi.map_or(true, |h| h >= rest_lo) {
        out.push(solve(&inst.clone().with_mode(QMode::Range { lo: rest_lo, hi }))?);
    }
    Ok(out)
}

/// Runs with increasing `ub`, each stage seeded with the previous front.
///
/// Stage `s` uses `ub = schedule[s]` and `max_dive = min(inst.max_dive, ub)`.
/// The final stage always uses the instance's own `ub`.
pub fn staged_solve(inst: &Instance, seed: Option<&ParetoFront>, schedule: &[usize]) -> Result<ParetoFront> {
    if schedule.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Invalid("ub schedule must be nondecreasing".into()));
    }
    if schedule.last().is_some_and(|&u| u > inst.ub) {
        return Err(Error::Invalid("ub schedule exceeds the instance ub".into()));
    }
    let mut stages: Vec<usize> = schedule.to_vec();
    if stages.last() != Some(&inst.ub) {
        stages.push(inst.ub);
    }
    let mut seeds: Vec<Vec<PivotVector>> = seed.map(|f| f.u.iter().map(|c| c.members.clone()).collect()).unwrap_or_default();
    let mut total = Stats::default();
    let mut last = None;
    for ub in stages {
        let mut stage = inst.clone();
        stage.ub = ub;
        stage.max_dive = inst.max_dive.min(ub);
        let prep = stage.prepare()?;
        let mut seed_pos = Vec::new();
        for s in &seeds {
            if s.len() <= stage.max_dive {
                seed_pos.push(prep.positions(s)?);
            }
        }
        let front = run(&prep, &seed_pos);
        total.dive_calls += front.stats.dive_calls;
        total.newrecord_calls += front.stats.newrecord_calls;
        total.seconds += front.stats.seconds;
        seeds = front.u.iter().map(|c| c.members.clone()).collect();
        let incomplete = front.incomplete;
        last = Some(front);
        if incomplete {
            break;
        }
    }
    let mut front = last.expect("at least one stage");
    front.stats = total;
    Ok(front)
}

fn run(prep: &Prepared, seeds: &[Vec<u32>]) -> ParetoFront {
    let start = std::time::Instant::now();
    let mut eng = engine::Searcher::new(prep);
    for s in seeds {
        eng.seed(s);
    }
    eng.search();
    let (u, u_hat, mut stats, incomplete) = eng.finish();
    stats.seconds = start.elapsed().as_secs_f64();
    ParetoFront {
        mode: prep.inst.mode,
        u: u.into_iter().map(|(m, hat)| prep.make_clique(m, hat)).collect(),
        u_hat: u_hat.into_iter().map(|(m, hat)| prep.make_clique(m, hat)).collect(),
        stats,
        incomplete,
    }
}

/// Exhaustive Pareto front over all cliques with at most `max_dive` members.
///
/// Uses only [`QPolynomial`] arithmetic, so it shares no code with the search.
pub fn brute_force_front(inst: &Instance) -> Result<ParetoFront> {
    inst.validate()?;
    let pivots = all_pivots(inst.n, inst.k);
    if pivots.len() > 300 || inst.max_dive > 6 {
        return Err(Error::Guard(format!(
            "brute force refused: {} vertices and max_dive {} (limits 300 and 6)",
            pivots.len(),
            inst.max_dive
        )));
    }
    let weights: Vec<QPolynomial> = match &inst.weights {
        WeightSpec::Regime(Regime::Upper) => pivots.iter().map(|v| upper_weight(v, inst.d)).collect(),
        WeightSpec::Regime(Regime::Lower) => {
            let mut engine = LowerBoundEngine::default();
            pivots.iter().map(|v| lower_weight(&mut engine, v, inst.d, inst.mode.lowest_q()).0).collect()
        }
        WeightSpec::Custom(w) => w.clone(),
    };
    let start = std::time::Instant::now();
    let mut bf = BruteForce {
        pivots: &pivots,
        weights: &weights,
        d: inst.d,
        max: inst.max_dive,
        mode: inst.mode,
        seen: std::collections::HashSet::new(),
        front: Vec::new(),
        stack: Vec::new(),
        visited: 0,
    };
    bf.offer();
    bf.extend(0);
    let mut u: Vec<Clique> = bf
        .front
        .iter()
        .map(|(m, w)| {
            let mut members: Vec<PivotVector> = m.iter().map(|&i| pivots[i]).collect();
            members.sort_by(|a, b| b.bits().cmp(&a.bits()));
            Clique { members, weight: w.clone(), weight_hat: w.clone() }
        })
        .collect();
    u.sort_by(|a, b| b.weight.cmp_infty(&a.weight));
    Ok(ParetoFront {
        mode: inst.mode,
        u_hat: Vec::new(),
        u,
        stats: Stats { dive_calls: bf.visited, newrecord_calls: 0, seconds: start.elapsed().as_secs_f64() },
        incomplete: false,
    })
}

struct BruteForce<'a> {
    pivots: &'a [PivotVector],
    weights: &'a [QPolynomial],
    d: u32,
    max: usize,
    mode: QMode,
    seen: std::collections::HashSet<QPolynomial>,
    front: Vec<(Vec<usize>, QPolynomial)>,
    stack: Vec<usize>,
    visited: u64,
}

impl BruteForce<'_> {
    fn extend(&mut self, from: usize) {
        if self.stack.len() == self.max {
            return;
        }
        for i in from..self.pivots.len() {
            if self.stack.iter().all(|&j| self.pivots[j].hamming(&self.pivots[i]) >= self.d) {
                self.stack.push(i);
                self.offer();
                self.extend(i + 1);
                self.stack.pop();
            }
        }
    }

    fn offer(&mut self) {
        self.visited += 1;
        let w: QPolynomial = self.stack.iter().map(|&i| self.weights[i].clone()).sum();
        if !self.seen.insert(w.clone()) {
            return;
        }
        if self.front.iter().all(|(_, g)| self.mode.better(&w, g)) {
            let mode = self.mode;
            self.front.retain(|(_, g)| mode.better(g, &w));
            self.front.push((self.stack.clone(), w));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qmode_text() {
        for s in ["all", "q=3", "q>=5", "2<=q<=4"] {
            let m: QMode = s.replace("2<=q<=4", "2..4").parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert!("1".parse::<QMode>().is_err());
        assert!("5..3".parse::<QMode>().is_err());
    }

    #[test]
    fn wbar_rounding() {
        assert_eq!(wbar_exponent(&"q^4".parse().unwrap()).unwrap(), 4);
        assert_eq!(wbar_exponent(&"q^4+q+1".parse().unwrap()).unwrap(), 6);
        assert_eq!(wbar_exponent(&"2q^4".parse().unwrap()).unwrap(), 5);
        assert!(wbar_exponent(&"q^4-1".parse().unwrap()).is_err());
    }

    #[test]
    fn smallest_case() {
        let f = solve(&Instance::new(4, 4, 2, Regime::Upper, 2)).unwrap();
        assert_eq!(f.u.len(), 1);
        assert_eq!(f.u[0].weight.render(), "q^2+1");
        let bits: Vec<u64> = f.u[0].members.iter().map(|v| v.bits()).collect();
        assert_eq!(bits, vec![12, 3]);
    }
}
