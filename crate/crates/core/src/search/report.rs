//! Result documents shared by the CLI: JSON and an aligned text table.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ParetoFront, QMode, Stats};
use crate::diagrams::PivotVector;
use crate::qpoly::QPolynomial;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontRecord {
    pub poly: String,
    pub coeffs: BTreeMap<u32, i64>,
    pub clique: Vec<u64>,
    pub clique_bits: Vec<String>,
    pub valid_q: String,
    /// `"U"` for attained cliques, `"U_hat"` for completed upper bounds.
    pub kind: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub n: u32,
    pub d: u32,
    pub k: u32,
    pub regime: String,
    pub q_mode: String,
    pub fronts: Vec<FrontRecord>,
    pub stats: Stats,
    pub incomplete: bool,
}

impl FrontRecord {
    pub fn new(n: u32, poly: &QPolynomial, members: &[PivotVector], valid_q: String, kind: &str) -> Self {
        let coeffs = poly
            .terms()
            .map(|(e, c)| (e, i64::try_from(c.clone()).unwrap_or(if c.sign() == num_bigint::Sign::Minus { i64::MIN } else { i64::MAX })))
            .collect();
        Self {
            poly: poly.render(),
            coeffs,
            clique: members.iter().map(|v| v.bits()).collect(),
            clique_bits: members.iter().map(|v| format!("{:0width$b}", v.bits(), width = n as usize)).collect(),
            valid_q,
            kind: kind.to_string(),
        }
    }
}

impl SolveReport {
    /// Collects one or more fronts (several for a split run) into a report.
    pub fn from_fronts(n: u32, d: u32, k: u32, regime: &str, q_mode: &str, fronts: &[ParetoFront]) -> Self {
        let mut records = Vec::new();
        let mut stats = Stats::default();
        let mut incomplete = false;
        for f in fronts {
            let labels = front_labels(&f.weights(), f.mode);
            for (c, label) in f.u.iter().zip(labels) {
                records.push(FrontRecord::new(n, &c.weight, &c.members, label, "U"));
            }
            let hats: Vec<QPolynomial> = f.u_hat.iter().map(|c| c.weight_hat.clone()).collect();
            for (c, label) in f.u_hat.iter().zip(front_labels(&hats, f.mode)) {
                records.push(FrontRecord::new(n, &c.weight_hat, &c.members, label, "U_hat"));
            }
            stats.dive_calls += f.stats.dive_calls;
            stats.newrecord_calls += f.stats.newrecord_calls;
            stats.seconds += f.stats.seconds;
            incomplete |= f.incomplete;
        }
        Self { n, d, k, regime: regime.to_string(), q_mode: q_mode.to_string(), fronts: records, stats, incomplete }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("instance: n={} d={} k={}\n", self.n, self.d, self.k));
        out.push_str(&format!("regime: {}\n", self.regime));
        out.push_str(&format!("q_mode: {}\n", self.q_mode));
        out.push_str(&format!(
            "stats: dive_calls={} newrecord_calls={} seconds={}\n",
            self.stats.dive_calls, self.stats.newrecord_calls, self.stats.seconds
        ));
        out.push_str(&format!("incomplete: {}\n", self.incomplete));
        let rows: Vec<[String; 4]> = self
            .fronts
            .iter()
            .map(|r| {
                let clique = r.clique.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
                [r.kind.clone(), r.valid_q.clone(), r.poly.clone(), clique]
            })
            .collect();
        let header = ["kind".to_string(), "valid_q".to_string(), "poly".to_string(), "clique".to_string()];
        let mut widths = header.clone().map(|h| h.len());
        for r in &rows {
            for (w, cell) in widths.iter_mut().zip(r) {
                *w = (*w).max(cell.len());
            }
        }
        for r in std::iter::once(&header).chain(rows.iter()) {
            let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            out.push_str(cells.join(" | ").trim_end());
            out.push('\n');
        }
        out
    }

    pub fn from_table(s: &str) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("table: {what}"));
        let mut lines = s.lines();
        let mut field = |name: &str| -> Result<String> {
            let line = lines.next().ok_or_else(|| bad(name))?;
            line.strip_prefix(name).and_then(|r| r.strip_prefix(": ")).map(str::to_string).ok_or_else(|| bad(name))
        };
        let inst = field("instance")?;
        let regime = field("regime")?;
        let q_mode = field("q_mode")?;
        let stats_line = field("stats")?;
        let incomplete = field("incomplete")? == "true";
        let kv = |text: &str| -> BTreeMap<String, String> {
            text.split_whitespace()
                .filter_map(|p| p.split_once('='))
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect()
        };
        let iv = kv(&inst);
        let num = |m: &BTreeMap<String, String>, key: &str| -> Result<u64> {
            m.get(key).and_then(|v| v.parse().ok()).ok_or_else(|| bad(key))
        };
        let (n, d, k) = (num(&iv, "n")? as u32, num(&iv, "d")? as u32, num(&iv, "k")? as u32);
        let sv = kv(&stats_line);
        let stats = Stats {
            dive_calls: num(&sv, "dive_calls")?,
            newrecord_calls: num(&sv, "newrecord_calls")?,
            seconds: sv.get("seconds").and_then(|v| v.parse().ok()).ok_or_else(|| bad("seconds"))?,
        };
        lines.next().ok_or_else(|| bad("header"))?;
        let mut fronts = Vec::new();
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let cells: Vec<&str> = line.split('|').map(str::trim).collect();
            if cells.len() != 4 {
                return Err(bad("row"));
            }
            let poly: QPolynomial = cells[2].parse()?;
            let mut members = Vec::new();
            for c in cells[3].split(',').filter(|c| !c.is_empty()) {
                let bits: u64 = c.parse().map_err(|_| bad("clique"))?;
                members.push(PivotVector::new(n, bits)?);
            }
            fronts.push(FrontRecord::new(n, &poly, &members, cells[1].to_string(), cells[0]));
        }
        Ok(Self { n, d, k, regime, q_mode, fronts, stats, incomplete })
    }
}

/// For each polynomial, the `q` in `mode` where it is the largest
/// (ties go to the earlier entry), rendered with [`q_label`].
pub fn front_labels(weights: &[QPolynomial], mode: QMode) -> Vec<String> {
    if let QMode::Fixed(q) = mode {
        return weights.iter().map(|_| format!("q={q}")).collect();
    }
    let (lo, hi) = mode.bounds();
    let mut stable = lo;
    for (i, a) in weights.iter().enumerate() {
        for b in &weights[i + 1..] {
            stable = stable.max((a - b).stable_from(lo));
        }
    }
    let scan_end = hi.map_or(stable, |h| stable.min(h + 1));
    let mut wins: Vec<Vec<u64>> = vec![Vec::new(); weights.len()];
    for q in lo..scan_end {
        if let Some(i) = argmax(weights, |a, b| a.cmp_at(b, q)) {
            wins[i].push(q);
        }
    }
    let tail = if hi.map_or(true, |h| h >= stable) { argmax(weights, |a, b| a.cmp_infty(b)) } else { None };
    let all = mode == QMode::All;
    (0..weights.len())
        .map(|i| q_label(&wins[i], if tail == Some(i) { Some((stable, hi)) } else { None }, all))
        .collect()
}

fn argmax(ws: &[QPolynomial], cmp: impl Fn(&QPolynomial, &QPolynomial) -> std::cmp::Ordering) -> Option<usize> {
    let mut best: Option<usize> = None;
    for i in 0..ws.len() {
        if best.map_or(true, |b| cmp(&ws[i], &ws[b]) == std::cmp::Ordering::Greater) {
            best = Some(i);
        }
    }
    best
}

/// Renders a set of field sizes: explicit values `small` plus an optional
/// interval `[from, to]` (`to = None` for unbounded).
///
/// `"all"` is used for `q >= 2` when `all_q` is set, `"none"` for the empty set.
pub fn q_label(small: &[u64], tail: Option<(u64, Option<u64>)>, all_q: bool) -> String {
    let mut runs: Vec<(u64, Option<u64>)> = Vec::new();
    let mut qs = small.to_vec();
    qs.sort_unstable();
    qs.dedup();
    for q in qs {
        match runs.last_mut() {
            Some((_, Some(end))) if *end + 1 == q => *end = q,
            _ => runs.push((q, Some(q))),
        }
    }
    if let Some((from, to)) = tail {
        match runs.last_mut() {
            Some((_, Some(end))) if *end + 1 >= from => *end = to.unwrap_or(u64::MAX),
            _ => runs.push((from, Some(to.unwrap_or(u64::MAX)))),
        }
        if let Some(last) = runs.last_mut() {
            if last.1 == Some(u64::MAX) {
                last.1 = None;
            }
        }
    }
    if runs.is_empty() {
        return "none".into();
    }
    if runs.len() == 1 && runs[0] == (2, None) && all_q {
        return "all".into();
    }
    let count: Option<u64> = runs.iter().map(|(a, b)| b.map(|b| b - a + 1)).sum();
    if let Some(c) = count {
        if c == 1 {
            return format!("q={}", runs[0].0);
        }
        if c <= 4 {
            let items: Vec<String> = runs.iter().flat_map(|&(a, b)| a..=b.unwrap()).map(|q| q.to_string()).collect();
            return format!("q in {{{}}}", items.join(","));
        }
    }
    runs.iter()
        .map(|&(a, b)| match b {
            None => format!("q>={a}"),
            Some(b) if a == b => format!("q={a}"),
            Some(b) => format!("{a}<=q<={b}"),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(q_label(&[], Some((2, None)), true), "all");
        assert_eq!(q_label(&[], Some((3, None)), true), "q>=3");
        assert_eq!(q_label(&[2], None, true), "q=2");
        assert_eq!(q_label(&[2, 3], None, true), "q in {2,3}");
        assert_eq!(q_label(&[2, 3], Some((4, None)), true), "all");
        assert_eq!(q_label(&[], None, true), "none");
        assert_eq!(q_label(&[2], Some((5, None)), true), "q=2, q>=5");
    }

    #[test]
    fn split_front_labels() {
        let a: QPolynomial = "q^3".parse().unwrap();
        let b: QPolynomial = "9q^2".parse().unwrap();
        let l = front_labels(&[a, b], QMode::All);
        assert_eq!(l[1], "2<=q<=8");
        assert_eq!(l[0], "q>=9");
    }
}
