//! Tabulated reference results and a verifier that re-derives them.
//!
//! The data lives in `data/corpus.json` and is compiled into the binary.
//! Instance ids have the form `d=D:(n,d,k):Q` with `Q` the field sizes the
//! entry holds for.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::diagrams::{FerrersDiagram, PivotVector};
use crate::qpoly::QPolynomial;
use crate::search::{solve, Instance, QMode};
use crate::weights::{rank_distance, upper_exponent, weight_histogram, LowerBoundEngine, Regime};
use crate::{Error, Result};

const CORPUS_JSON: &str = include_str!("../data/corpus.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryKind {
    /// The maximum itself.
    Exact,
    /// The diagram upper bound; equal to the maximum if the diagram bounds are tight.
    Conjectured,
    /// An attained value that is not known to be optimal.
    LowerOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Annotation {
    pub vertex: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pending_dot: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bold: Option<bool>,
    /// Construction parameters attached to the vertex.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub id: String,
    pub n: u32,
    pub d: u32,
    pub k: u32,
    /// `all`, `q=Q`, `q>=Q` or `q in {..}` with consecutive values.
    pub q: String,
    pub kind: EntryKind,
    pub poly: QPolynomial,
    pub clique: Vec<u64>,
    pub ub: usize,
    /// `quoted` for tabulated clique size bounds, `johnson` for the computed bound.
    pub ub_source: String,
    pub tier: u8,
    /// Numeric value at the fixed field size, when one is given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<Annotation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CorpusEntry {
    pub fn q_mode(&self) -> Result<QMode> {
        parse_q_condition(&self.q)
    }

    pub fn members(&self) -> Result<Vec<PivotVector>> {
        self.clique.iter().map(|&b| PivotVector::new(self.n, b)).collect()
    }

    pub fn instance(&self) -> Result<Instance> {
        Ok(Instance::new(self.n, self.d, self.k, Regime::Upper, self.ub).with_mode(self.q_mode()?))
    }
}

/// Parses the field size conditions used in the corpus.
pub fn parse_q_condition(s: &str) -> Result<QMode> {
    if let Some(set) = s.strip_prefix("q in {").and_then(|r| r.strip_suffix('}')) {
        let qs: Vec<u64> = set
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad q set {s:?}"))))
            .collect::<Result<_>>()?;
        let (lo, hi) = (*qs.first().ok_or_else(|| Error::Parse(format!("empty q set {s:?}")))?, *qs.last().unwrap());
        if qs.windows(2).any(|w| w[1] != w[0] + 1) {
            return Err(Error::Parse(format!("q set {s:?} is not a range")));
        }
        return Ok(QMode::Range { lo, hi: Some(hi) });
    }
    s.parse()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagramEntry {
    pub n: u32,
    pub d: u32,
    pub k: u32,
    /// Field size condition of the instance the row belongs to.
    pub instance_q: String,
    /// Field sizes the stated dimension holds for: `all`, `q>=x` or `q<x`.
    pub q: String,
    /// Smallest field size the dimension has to hold for.
    pub q_floor: u64,
    pub pivot: u64,
    pub rows: Vec<u32>,
    /// Diagram actually used after removing pending dots or cropping, if any.
    #[serde(default)]
    pub sub_diagram: Option<Vec<u32>>,
    /// Constructions named for the row.
    pub method: Vec<String>,
    /// Best known dimension.
    pub best: u32,
    /// Upper bound on the dimension.
    pub opt: u32,
}

impl DiagramEntry {
    pub fn delta(&self) -> u32 {
        rank_distance(self.d)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InconsistentRow {
    pub n: u32,
    pub d: u32,
    pub k: u32,
    pub pivot: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramEntry {
    pub n: u32,
    pub d: u32,
    pub k: u32,
    pub counts: BTreeMap<u32, u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SporadicEntry {
    pub cols: Vec<u32>,
    pub delta: u32,
    pub dimension: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub version: u32,
    pub instances: Vec<CorpusEntry>,
    pub fdrm: Vec<DiagramEntry>,
    /// Rows left out of `fdrm` because their printed data contradicts itself.
    pub fdrm_inconsistent: Vec<InconsistentRow>,
    pub histograms: Vec<HistogramEntry>,
    pub sporadic: Vec<SporadicEntry>,
}

pub fn load() -> Result<Corpus> {
    parse(CORPUS_JSON)
}

pub fn parse(text: &str) -> Result<Corpus> {
    let c: Corpus = serde_json::from_str(text)?;
    for e in &c.instances {
        e.q_mode().map_err(|err| Error::Parse(format!("{}: {err}", e.id)))?;
    }
    Ok(c)
}

impl Corpus {
    pub fn entry(&self, id: &str) -> Option<&CorpusEntry> {
        self.instances.iter().find(|e| e.id == id)
    }

    pub fn entries_for(&self, n: u32, d: u32, k: u32) -> Vec<&CorpusEntry> {
        self.instances.iter().filter(|e| (e.n, e.d, e.k) == (n, d, k)).collect()
    }

    /// Clique size bound recorded for `(n, d, k)`.
    pub fn ub(&self, n: u32, d: u32, k: u32) -> Option<usize> {
        self.entries_for(n, d, k).iter().map(|e| e.ub).min()
    }

    pub fn histogram(&self, n: u32, d: u32, k: u32) -> Option<&HistogramEntry> {
        self.histograms.iter().find(|h| (h.n, h.d, h.k) == (n, d, k))
    }
}

/// Selects entries by parameters and field size condition.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Filter {
    pub n: Option<u32>,
    pub d: Option<u32>,
    pub k: Option<u32>,
    pub q: Option<String>,
}

impl std::str::FromStr for Filter {
    type Err = Error;
    /// `n=14,d=6,k=4,q=all`; any subset of the keys.
    fn from_str(s: &str) -> Result<Self> {
        let mut f = Filter::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, val) = part.split_once('=').ok_or_else(|| Error::Parse(format!("bad filter item {part:?}")))?;
            let num = || val.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad filter value {part:?}")));
            match key.trim() {
                "n" => f.n = Some(num()?),
                "d" => f.d = Some(num()?),
                "k" => f.k = Some(num()?),
                "q" => f.q = Some(val.trim().to_string()),
                other => return Err(Error::Parse(format!("unknown filter key {other:?}"))),
            }
        }
        Ok(f)
    }
}

impl Filter {
    fn matches(&self, n: u32, d: u32, k: u32, q: Option<&str>) -> bool {
        self.n.map_or(true, |x| x == n)
            && self.d.map_or(true, |x| x == d)
            && self.k.map_or(true, |x| x == k)
            && match (&self.q, q) {
                (Some(want), Some(have)) => want == have,
                (Some(_), None) => false,
                (None, _) => true,
            }
    }

    pub fn matches_entry(&self, e: &CorpusEntry) -> bool {
        self.matches(e.n, e.d, e.k, Some(&e.q))
    }

    fn matches_row(&self, r: &DiagramEntry) -> bool {
        self.q.is_none() && self.matches(r.n, r.d, r.k, None)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "detail", rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail(String),
    Skipped(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub subject: String,
    pub check: String,
    #[serde(flatten)]
    pub status: Status,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub results: Vec<CheckResult>,
}

impl VerifyReport {
    fn count(&self, f: impl Fn(&Status) -> bool) -> usize {
        self.results.iter().filter(|r| f(&r.status)).count()
    }

    pub fn passed(&self) -> usize {
        self.count(|s| matches!(s, Status::Pass))
    }

    pub fn failed(&self) -> usize {
        self.count(|s| matches!(s, Status::Fail(_)))
    }

    pub fn skipped(&self) -> usize {
        self.count(|s| matches!(s, Status::Skipped(_)))
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| matches!(r.status, Status::Fail(_)))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            let (tag, detail) = match &r.status {
                Status::Pass => ("PASS", String::new()),
                Status::Fail(m) => ("FAIL", format!(": {m}")),
                Status::Skipped(m) => ("SKIP", format!(": {m}")),
            };
            out.push_str(&format!("{tag} {} [{}]{detail}\n", r.subject, r.check));
        }
        out.push_str(&format!("passed {} failed {} skipped {}\n", self.passed(), self.failed(), self.skipped()));
        out
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    /// 0: audits only. 1: also re-solve tier 1 entries. 2: re-solve every entry.
    pub tier: u8,
    pub filter: Filter,
    /// Wall clock budget for each re-solve; over-budget entries are skipped.
    pub solve_budget: Option<Duration>,
    pub jobs: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { tier: 0, filter: Filter::default(), solve_budget: Some(Duration::from_secs(600)), jobs: 1 }
    }
}

fn result(subject: &str, check: &str, status: Status) -> CheckResult {
    CheckResult { subject: subject.to_string(), check: check.to_string(), status }
}

fn pass_or(ok: bool, msg: impl FnOnce() -> String) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail(msg())
    }
}

/// Pairwise distance, weight and length of a stored clique.
pub fn check_clique(e: &CorpusEntry) -> Status {
    let members = match e.members() {
        Ok(m) => m,
        Err(err) => return Status::Fail(err.to_string()),
    };
    if let Some(v) = members.iter().find(|v| v.weight() != e.k) {
        return Status::Fail(format!("{} has weight {}", v.bits(), v.weight()));
    }
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            if a.hamming(b) < e.d {
                return Status::Fail(format!("{} and {} are at distance {}", a.bits(), b.bits(), a.hamming(b)));
            }
        }
    }
    if members.len() > e.ub {
        return Status::Fail(format!("{} members exceed ub {}", members.len(), e.ub));
    }
    Status::Pass
}

/// The diagram bounds of the clique add up to the stored polynomial.
pub fn check_weight(e: &CorpusEntry) -> Status {
    let Ok(members) = e.members() else {
        return Status::Fail("clique does not decode".into());
    };
    let total: QPolynomial = members.iter().map(|v| QPolynomial::monomial(1, upper_exponent(v, e.d))).sum();
    pass_or(total == e.poly, || format!("clique weight {total} differs from {}", e.poly))
}

/// The stored numeric value equals the polynomial at the entry's field size.
pub fn check_value(e: &CorpusEntry) -> Status {
    let Some(v) = &e.value else {
        return Status::Skipped("no numeric value".into());
    };
    let QMode::Fixed(q) = e.q_mode().unwrap_or(QMode::All) else {
        return Status::Skipped("not a fixed field size".into());
    };
    let got = e.poly.eval(q);
    pass_or(v.parse::<BigInt>().ok() == Some(got.clone()), || format!("value {v} but the polynomial gives {got}"))
}

/// Re-runs the search and compares the whole front with the stored polynomial.
pub fn check_resolve(e: &CorpusEntry, budget: Option<Duration>) -> Status {
    if e.kind == EntryKind::LowerOnly {
        return Status::Skipped("lower bound only".into());
    }
    let mut inst = match e.instance() {
        Ok(i) => i,
        Err(err) => return Status::Fail(err.to_string()),
    };
    inst.time_budget = budget;
    match solve(&inst) {
        Err(err) => Status::Fail(err.to_string()),
        Ok(front) if front.incomplete => Status::Skipped(format!("budget exhausted after {:.1}s", front.stats.seconds)),
        Ok(front) => {
            let ws = front.weights();
            pass_or(ws.len() == 1 && ws[0] == e.poly, || {
                let got: Vec<String> = ws.iter().map(|w| w.render()).collect();
                format!("front {} differs from {}", got.join(" ; "), e.poly)
            })
        }
    }
}

/// Diagram row: rows match the pivot, the bound equals `opt`, and the lower
/// bound engine reaches `best` without exceeding `opt`.
pub fn check_row(r: &DiagramEntry, engine: &mut LowerBoundEngine) -> Vec<(String, Status)> {
    let mut out = Vec::new();
    let v = match PivotVector::new(r.n, r.pivot) {
        Ok(v) if v.weight() == r.k => v,
        _ => return vec![("decode".into(), Status::Fail(format!("{} is not a weight {} vector", r.pivot, r.k)))],
    };
    let f = v.to_diagram();
    out.push(("rows".into(), pass_or(f.rows() == r.rows, || format!("pivot gives rows {:?}", f.rows()))));
    let up = f.upper_exponent(r.delta());
    out.push(("upper".into(), pass_or(up == r.opt, || format!("bound {up} but {} is stated", r.opt))));
    let w = engine.lower_bound(&f, r.delta(), r.q_floor);
    out.push((
        "lower".into(),
        pass_or(w.dimension >= r.best && w.dimension <= r.opt, || {
            format!("reached {} via {}, stated best {} and bound {}", w.dimension, w.root_construction().tag(), r.best, r.opt)
        }),
    ));
    out
}

pub fn check_histogram(h: &HistogramEntry) -> Status {
    let got = weight_histogram(h.n, h.d, h.k, Regime::Upper);
    pass_or(got == h.counts, || format!("computed {got:?}"))
}

pub fn check_sporadic(s: &SporadicEntry, engine: &mut LowerBoundEngine) -> Status {
    let f = match FerrersDiagram::from_cols(s.cols.clone()) {
        Ok(f) => f,
        Err(err) => return Status::Fail(err.to_string()),
    };
    let got = engine.lower_bound(&f, s.delta, 2).dimension;
    pass_or(got == s.dimension, || format!("reached {got}, expected {}", s.dimension))
}

/// Runs every check the options select. Failures are reported, never raised.
pub fn verify(corpus: &Corpus, opts: &VerifyOptions) -> VerifyReport {
    let mut rep = VerifyReport::default();
    let entries: Vec<&CorpusEntry> = corpus.instances.iter().filter(|e| opts.filter.matches_entry(e)).collect();
    for e in &entries {
        rep.results.push(result(&e.id, "clique", check_clique(e)));
        rep.results.push(result(&e.id, "weight", check_weight(e)));
        if e.value.is_some() {
            rep.results.push(result(&e.id, "value", check_value(e)));
        }
    }
    let mut engine = LowerBoundEngine::default();
    for r in corpus.fdrm.iter().filter(|r| opts.filter.matches_row(r)) {
        let subject = format!("({},{},{}) pivot {}", r.n, r.d, r.k, r.pivot);
        for (check, status) in check_row(r, &mut engine) {
            rep.results.push(result(&subject, &format!("diagram {check}"), status));
        }
    }
    for h in corpus.histograms.iter().filter(|h| opts.filter.matches(h.n, h.d, h.k, None) && opts.filter.q.is_none()) {
        rep.results.push(result(&format!("({},{},{})", h.n, h.d, h.k), "histogram", check_histogram(h)));
    }
    if opts.filter == Filter::default() {
        for s in &corpus.sporadic {
            rep.results.push(result(&format!("cols {:?} delta {}", s.cols, s.delta), "sporadic", check_sporadic(s, &mut engine)));
        }
    }
    if opts.tier >= 1 {
        let todo: Vec<&CorpusEntry> = entries.iter().copied().filter(|e| e.tier <= opts.tier).collect();
        let next = AtomicUsize::new(0);
        let done = Mutex::new(vec![None; todo.len()]);
        std::thread::scope(|s| {
            for _ in 0..opts.jobs.max(1) {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    let Some(e) = todo.get(i) else { break };
                    let status = check_resolve(e, opts.solve_budget);
                    done.lock().unwrap()[i] = Some(status);
                });
            }
        });
        for (e, status) in todo.iter().zip(done.into_inner().unwrap()) {
            rep.results.push(result(&e.id, "resolve", status.expect("every entry is processed")));
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads() {
        let c = load().unwrap();
        assert!(c.instances.len() >= 200);
        assert!(c.fdrm.len() >= 25);
        assert_eq!(c.ub(14, 6, 4), Some(14));
    }

    #[test]
    fn q_conditions() {
        assert_eq!(parse_q_condition("all").unwrap(), QMode::All);
        assert_eq!(parse_q_condition("q=2").unwrap(), QMode::Fixed(2));
        assert_eq!(parse_q_condition("q>=3").unwrap(), QMode::Range { lo: 3, hi: None });
        assert_eq!(parse_q_condition("q in {2,3,4}").unwrap(), QMode::Range { lo: 2, hi: Some(4) });
        assert!(parse_q_condition("q in {2,4}").is_err());
    }

    #[test]
    fn filters() {
        let f: Filter = "n=14,d=6,k=4".parse().unwrap();
        assert_eq!(f, Filter { n: Some(14), d: Some(6), k: Some(4), q: None });
        assert!("x=1".parse::<Filter>().is_err());
    }
}
