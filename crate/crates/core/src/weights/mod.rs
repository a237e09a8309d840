//! Vertex weights: how many codewords a pivot vector can contribute.

pub mod lower;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diagrams::{all_pivots, PivotVector};
use crate::qpoly::QPolynomial;

pub use lower::{Construction, LowerBoundEngine, LowerBoundWitness};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `q` to the upper bound on the rank-metric code dimension.
    Upper,
    /// `q` to the best dimension reachable by a known construction.
    Lower,
}

impl std::str::FromStr for Regime {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "upper" => Ok(Regime::Upper),
            "lower" => Ok(Regime::Lower),
            _ => Err(crate::Error::Parse(format!("unknown regime {s:?}"))),
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Upper => "upper",
            Regime::Lower => "lower",
        })
    }
}

/// Rank distance of the diagram codes for subspace distance `d`.
pub fn rank_distance(d: u32) -> u32 {
    d / 2
}

pub fn upper_exponent(v: &PivotVector, d: u32) -> u32 {
    v.to_diagram().upper_exponent(rank_distance(d))
}

pub fn upper_weight(v: &PivotVector, d: u32) -> QPolynomial {
    QPolynomial::monomial(1, upper_exponent(v, d))
}

/// Lower bound weight valid for every `q >= q_floor`, with the construction used.
pub fn lower_weight(engine: &mut LowerBoundEngine, v: &PivotVector, d: u32, q_floor: u64) -> (QPolynomial, LowerBoundWitness) {
    let w = engine.lower_bound(&v.to_diagram(), rank_distance(d), q_floor);
    (QPolynomial::monomial(1, w.dimension), w)
}

/// Number of pivot vectors per weight exponent.
pub fn weight_histogram(n: u32, d: u32, k: u32, regime: Regime) -> BTreeMap<u32, u64> {
    let mut engine = LowerBoundEngine::default();
    let mut out = BTreeMap::new();
    for v in all_pivots(n, k) {
        let e = match regime {
            Regime::Upper => upper_exponent(&v, d),
            Regime::Lower => engine.lower_bound(&v.to_diagram(), rank_distance(d), 2).dimension,
        };
        *out.entry(e).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skeleton_exponents() {
        let vs = ["11111000000000", "00001111100000", "00010100011100", "00100000100111"];
        let exps: Vec<u32> = vs.iter().map(|s| upper_exponent(&PivotVector::parse_bit_string(s).unwrap(), 8)).collect();
        assert_eq!(exps, vec![18, 10, 3, 0]);
    }

    #[test]
    fn histogram_total() {
        let h = weight_histogram(8, 4, 4, Regime::Upper);
        assert_eq!(h.values().sum::<u64>(), 70);
        assert_eq!(h.keys().next_back(), Some(&12));
    }
}
