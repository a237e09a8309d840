//! Integer programming models for the clique problems, written as LP text.
//!
//! Vertex `v` becomes the binary variable `x_<encoding>`; the counting model
//! adds general integers `a_<i>` for each occurring weight exponent `i`.

mod bnb;
mod lp;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::diagrams::{all_pivots, PivotVector};
use crate::weights::upper_exponent;
use crate::{check_params, Error, Result};

pub use bnb::{solve_small, Solution};
pub use lp::parse_lp;

/// Objective values above this are not exactly representable as `f64`.
pub const EXACT_FLOAT_LIMIT: u64 = 1 << 53;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// `x_u + x_v <= 1` for every incompatible pair; maximises the clique size.
    Edge,
    /// Same constraints taken over compatible pairs instead (an independent set model).
    EdgeLiteral,
    /// `sum_{v in I_S} x_v <= 1` for every `t`-subset `S` of positions, `t = k - d/2 + 1`.
    Cover,
    /// Pairwise constraints with objective `sum w(v)(q) x_v` for a fixed `q`.
    WeightedFixedQ,
    /// Cover constraints plus counting variables `a_i` for vertices of weight `q^i`.
    Counting,
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "edge" => Variant::Edge,
            "edge-literal" => Variant::EdgeLiteral,
            "cover" | "independent-set-cover" => Variant::Cover,
            "weighted" | "weighted-fixed-q" => Variant::WeightedFixedQ,
            "counting" => Variant::Counting,
            _ => return Err(Error::Parse(format!("unknown ILP variant {s:?}"))),
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct IlpOptions {
    /// Field size, required by the weighted variant.
    pub q: Option<u64>,
    /// Counting objective `c_i`; all ones when absent.
    pub objective: Option<BTreeMap<u32, i64>>,
    /// Counting variables fixed to a value.
    pub fixed: BTreeMap<u32, i64>,
    /// Cap on `sum a_i`; required by the counting variant.
    pub a1_bound: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    pub fn symbol(&self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(i64, String)>,
    pub rel: Relation,
    pub rhs: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Model {
    /// Comment lines written at the top of the file.
    pub comments: Vec<String>,
    pub objective: Vec<(BigInt, String)>,
    pub constraints: Vec<Constraint>,
    /// Finite bounds `(name, lo, hi)` for general variables.
    pub bounds: Vec<(String, i64, i64)>,
    pub binaries: Vec<String>,
    pub generals: Vec<String>,
    pub warnings: Vec<String>,
    /// Set when some objective coefficient exceeds 2^53.
    pub overflow_risk: bool,
}

impl Model {
    pub fn to_lp(&self) -> String {
        lp::write_lp(self)
    }

    pub fn variables(&self) -> Vec<String> {
        self.binaries.iter().chain(&self.generals).cloned().collect()
    }

    pub fn constraint(&self, name: &str) -> Option<&Constraint> {
        self.constraints.iter().find(|c| c.name == name)
    }
}

pub fn var_x(v: &PivotVector) -> String {
    format!("x_{}", v.bits())
}

pub fn var_a(i: u32) -> String {
    format!("a_{i}")
}

/// Builds the model for a variant.
pub fn emit(n: u32, d: u32, k: u32, variant: Variant, opts: &IlpOptions) -> Result<Model> {
    check_params(n, d, k)?;
    let vs = all_pivots(n, k);
    let mut m = Model {
        comments: vec![format!("n={n} d={d} k={k} variant={variant:?}")],
        objective: Vec::new(),
        constraints: Vec::new(),
        bounds: Vec::new(),
        binaries: vs.iter().map(var_x).collect(),
        generals: Vec::new(),
        warnings: Vec::new(),
        overflow_risk: false,
    };
    match variant {
        Variant::Edge | Variant::EdgeLiteral => {
            m.objective = vs.iter().map(|v| (BigInt::from(1), var_x(v))).collect();
            pair_constraints(&mut m, &vs, d, variant == Variant::EdgeLiteral);
        }
        Variant::Cover => {
            m.objective = vs.iter().map(|v| (BigInt::from(1), var_x(v))).collect();
            cover_constraints(&mut m, &vs, n, d, k);
        }
        Variant::WeightedFixedQ => {
            let q = opts.q.ok_or_else(|| Error::Invalid("the weighted variant needs q".into()))?;
            if q < 2 {
                return Err(Error::Invalid("q must be at least 2".into()));
            }
            m.comments.push(format!("weights w(v) evaluated at q={q}"));
            let limit = BigInt::from(EXACT_FLOAT_LIMIT);
            for v in &vs {
                let c = num_traits::pow(BigInt::from(q), upper_exponent(v, d) as usize);
                if c > limit {
                    m.overflow_risk = true;
                }
                m.objective.push((c, var_x(v)));
            }
            if m.overflow_risk {
                m.warnings.push("objective coefficients exceed 2^53; floating point solvers may lose precision".into());
            }
            pair_constraints(&mut m, &vs, d, false);
        }
        Variant::Counting => {
            let cap = opts.a1_bound.ok_or_else(|| Error::Invalid("the counting variant needs an A_1 bound".into()))?;
            cover_constraints(&mut m, &vs, n, d, k);
            let mut classes: BTreeMap<u32, Vec<&PivotVector>> = BTreeMap::new();
            for v in &vs {
                classes.entry(upper_exponent(v, d)).or_default().push(v);
            }
            for (&i, members) in classes.iter().rev() {
                let mut terms = vec![(-1, var_a(i))];
                terms.extend(members.iter().map(|v| (1, var_x(v))));
                m.constraints.push(Constraint { name: format!("count_{i}"), terms, rel: Relation::Eq, rhs: 0 });
            }
            m.constraints.push(Constraint {
                name: "cap".into(),
                terms: classes.keys().rev().map(|&i| (1, var_a(i))).collect(),
                rel: Relation::Le,
                rhs: cap as i64,
            });
            for &i in classes.keys().rev() {
                let c = opts.objective.as_ref().map_or(1, |o| o.get(&i).copied().unwrap_or(0));
                if c != 0 {
                    m.objective.push((BigInt::from(c), var_a(i)));
                }
                let (lo, hi) = match opts.fixed.get(&i) {
                    Some(&f) => (f, f),
                    None => (0, cap as i64),
                };
                m.bounds.push((var_a(i), lo, hi));
                m.generals.push(var_a(i));
            }
            for i in opts.fixed.keys() {
                if !classes.contains_key(i) {
                    return Err(Error::Invalid(format!("no vertex has weight q^{i}")));
                }
            }
        }
    }
    Ok(m)
}

fn pair_constraints(m: &mut Model, vs: &[PivotVector], d: u32, over_edges: bool) {
    for (i, u) in vs.iter().enumerate() {
        for v in &vs[i + 1..] {
            let incompatible = u.hamming(v) < d;
            if incompatible != over_edges {
                m.constraints.push(Constraint {
                    name: format!("p_{}_{}", u.bits(), v.bits()),
                    terms: vec![(1, var_x(u)), (1, var_x(v))],
                    rel: Relation::Le,
                    rhs: 1,
                });
            }
        }
    }
}

/// One constraint per `t`-subset of positions, over the vertices with ones on all of it.
fn cover_constraints(m: &mut Model, vs: &[PivotVector], n: u32, d: u32, k: u32) {
    let t = k + 1 - d / 2;
    m.comments.push(format!("cover constraints over {t}-subsets of positions"));
    for s in all_pivots(n, t) {
        let members: Vec<String> = vs.iter().filter(|v| v.bits() & s.bits() == s.bits()).map(var_x).collect();
        if members.len() < 2 {
            continue;
        }
        m.constraints.push(Constraint {
            name: format!("s_{}", s.bits()),
            terms: members.into_iter().map(|x| (1, x)).collect(),
            rel: Relation::Le,
            rhs: 1,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_edge_model() {
        let m = emit(4, 4, 2, Variant::Edge, &IlpOptions::default()).unwrap();
        assert_eq!(m.binaries.len(), 6);
        // Each vector is compatible only with its complement.
        assert_eq!(m.constraints.len(), 15 - 3);
        let s = solve_small(&m).unwrap();
        assert_eq!(s.objective, BigInt::from(2));
    }

    #[test]
    fn counting_cap_line() {
        let opts = IlpOptions { a1_bound: Some(4), ..Default::default() };
        let m = emit(14, 8, 5, Variant::Counting, &opts).unwrap();
        let cap = m.constraint("cap").unwrap();
        assert_eq!(cap.terms.len(), 19);
        assert_eq!(cap.rhs, 4);
        assert!(m.to_lp().contains("cap: a_18 + a_17"));
    }

    #[test]
    fn weighted_warns_on_large_weights() {
        let m = emit(13, 4, 4, Variant::WeightedFixedQ, &IlpOptions { q: Some(5), ..Default::default() }).unwrap();
        assert!(m.overflow_risk);
        let m = emit(6, 4, 3, Variant::WeightedFixedQ, &IlpOptions { q: Some(2), ..Default::default() }).unwrap();
        assert!(!m.overflow_risk);
        assert_eq!(solve_small(&m).unwrap().objective, BigInt::from(64 + 4 + 2 + 1));
    }
}
