//! Depth-first branch and bound for small pure integer models.
//!
//! Only meant to check emitted models on toy instances; it refuses anything
//! with more than [`MAX_VARS`] variables.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use super::{Model, Relation};
use crate::{Error, Result};

pub const MAX_VARS: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub objective: BigInt,
    pub values: BTreeMap<String, i64>,
}

struct Search {
    lo: Vec<i64>,
    hi: Vec<i64>,
    obj: Vec<i128>,
    /// Per variable: (constraint, coefficient).
    touches: Vec<Vec<(usize, i64)>>,
    rel: Vec<Relation>,
    rhs: Vec<i64>,
    /// `suffix_min[c][j]`: smallest contribution of variables `j..` to constraint `c`.
    suffix_min: Vec<Vec<i64>>,
    suffix_max: Vec<Vec<i64>>,
    obj_suffix_max: Vec<i128>,
    partial: Vec<i64>,
    values: Vec<i64>,
    best: Option<(i128, Vec<i64>)>,
}

pub fn solve_small(m: &Model) -> Result<Solution> {
    let names = m.variables();
    if names.len() > MAX_VARS {
        return Err(Error::Guard(format!("{} variables exceed the toy solver limit of {MAX_VARS}", names.len())));
    }
    let idx: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let nv = names.len();
    let mut lo = vec![0i64; nv];
    let mut hi = vec![1i64; nv];
    for g in &m.generals {
        let b = m.bounds.iter().find(|b| &b.0 == g).ok_or_else(|| Error::Guard(format!("general {g} has no finite bound")))?;
        lo[idx[g.as_str()]] = b.1;
        hi[idx[g.as_str()]] = b.2;
    }
    for (name, l, h) in &m.bounds {
        if let Some(&i) = idx.get(name.as_str()) {
            lo[i] = *l;
            hi[i] = *h;
        }
    }
    let mut obj = vec![0i128; nv];
    for (c, name) in &m.objective {
        let i = *idx.get(name.as_str()).ok_or_else(|| Error::Invalid(format!("objective uses unknown variable {name}")))?;
        obj[i] += i128::try_from(c.clone()).map_err(|_| Error::Guard("objective coefficient too large".into()))?;
    }
    let mut touches = vec![Vec::new(); nv];
    for (ci, c) in m.constraints.iter().enumerate() {
        for (coef, name) in &c.terms {
            let i = *idx.get(name.as_str()).ok_or_else(|| Error::Invalid(format!("{} uses unknown variable {name}", c.name)))?;
            touches[i].push((ci, *coef));
        }
    }
    let nc = m.constraints.len();
    let mut suffix_min = vec![vec![0i64; nv + 1]; nc];
    let mut suffix_max = vec![vec![0i64; nv + 1]; nc];
    for j in (0..nv).rev() {
        for c in 0..nc {
            suffix_min[c][j] = suffix_min[c][j + 1];
            suffix_max[c][j] = suffix_max[c][j + 1];
        }
        for &(c, coef) in &touches[j] {
            let (a, b) = (coef * lo[j], coef * hi[j]);
            suffix_min[c][j] += a.min(b);
            suffix_max[c][j] += a.max(b);
        }
    }
    let mut obj_suffix_max = vec![0i128; nv + 1];
    for j in (0..nv).rev() {
        obj_suffix_max[j] = obj_suffix_max[j + 1] + (obj[j] * lo[j] as i128).max(obj[j] * hi[j] as i128);
    }
    let mut s = Search {
        lo,
        hi,
        obj,
        touches,
        rel: m.constraints.iter().map(|c| c.rel).collect(),
        rhs: m.constraints.iter().map(|c| c.rhs).collect(),
        suffix_min,
        suffix_max,
        obj_suffix_max,
        partial: vec![0; nc],
        values: vec![0; nv],
        best: None,
    };
    if s.feasible(0) {
        s.branch(0, 0);
    }
    let (value, vals) = s.best.ok_or_else(|| Error::Invalid("model is infeasible".into()))?;
    Ok(Solution { objective: BigInt::from(value), values: names.into_iter().zip(vals).collect() })
}

impl Search {
    fn feasible(&self, depth: usize) -> bool {
        (0..self.rel.len()).all(|c| {
            let lo = self.partial[c] + self.suffix_min[c][depth];
            let hi = self.partial[c] + self.suffix_max[c][depth];
            match self.rel[c] {
                Relation::Le => lo <= self.rhs[c],
                Relation::Ge => hi >= self.rhs[c],
                Relation::Eq => lo <= self.rhs[c] && hi >= self.rhs[c],
            }
        })
    }

    fn branch(&mut self, depth: usize, value: i128) {
        if let Some((b, _)) = &self.best {
            if value + self.obj_suffix_max[depth] <= *b {
                return;
            }
        }
        if depth == self.lo.len() {
            self.best = Some((value, self.values.clone()));
            return;
        }
        let (lo, hi) = (self.lo[depth], self.hi[depth]);
        let mut xs: Vec<i64> = (lo..=hi).collect();
        if self.obj[depth] >= 0 {
            xs.reverse();
        }
        for x in xs {
            for &(c, coef) in &self.touches[depth] {
                self.partial[c] += coef * x;
            }
            self.values[depth] = x;
            if self.feasible(depth + 1) {
                self.branch(depth + 1, value + self.obj[depth] * x as i128);
            }
            for &(c, coef) in &self.touches[depth] {
                self.partial[c] -= coef * x;
            }
        }
    }
}
