//! Partial spreads: the case `d = 2k`, where the heaviest clique has a closed form.

use crate::diagrams::PivotVector;
use crate::qpoly::QPolynomial;
use crate::weights::upper_exponent;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpreadParams {
    pub n: u32,
    pub k: u32,
}

impl SpreadParams {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        if k == 0 || k > n || n > crate::diagrams::MAX_N {
            return Err(Error::Invalid(format!("need 1 <= k <= n <= {}, got n = {n}, k = {k}", crate::diagrams::MAX_N)));
        }
        Ok(Self { n, k })
    }
}

/// `sum_{i < n/k} q^(ik)` when `k | n`, else `1 + sum_{i=1}^{floor(n/k)-1} q^(n-ik)`.
pub fn spread_polynomial(p: SpreadParams) -> QPolynomial {
    let (n, k) = (p.n, p.k);
    let r = n / k;
    if n % k == 0 {
        QPolynomial::from_terms((0..r).map(|i| (i * k, 1)))
    } else {
        QPolynomial::from_terms(std::iter::once((0, 1)).chain((1..r).map(|i| (n - i * k, 1))))
    }
}

/// The block vectors `0^(ik) 1^k 0^(n-(i+1)k)` for `i < floor(n/k)`.
pub fn spread_clique(p: SpreadParams) -> Vec<PivotVector> {
    let (n, k) = (p.n, p.k);
    let block = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    (0..n / k)
        .map(|i| PivotVector::new(n, block << (n - (i + 1) * k)).expect("block fits in n bits"))
        .collect()
}

/// Weight of `v` for distance `2k`, and whether it is attained.
///
/// With `j` the position of the last one, the weight is `q^(n-j)` and an MRD
/// code on the rectangle attains it when `j <= n - k`. Otherwise the diagram
/// bound is returned and not claimed to be attained.
pub fn spread_weight(v: &PivotVector) -> (QPolynomial, bool) {
    let n = v.n();
    let k = v.weight();
    let j = v.last_one().unwrap_or(0);
    if j <= n - k {
        (QPolynomial::monomial(1, n - j), true)
    } else {
        (QPolynomial::monomial(1, upper_exponent(v, 2 * k)), false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(n: u32, k: u32) -> SpreadParams {
        SpreadParams::new(n, k).unwrap()
    }

    #[test]
    fn closed_forms() {
        assert_eq!(spread_polynomial(sp(8, 4)).render(), "q^4+1");
        assert_eq!(spread_polynomial(sp(9, 4)).render(), "q^5+1");
        assert_eq!(spread_polynomial(sp(19, 9)).render(), "q^10+1");
        assert_eq!(spread_polynomial(sp(5, 5)).render(), "1");
    }

    #[test]
    fn block_cliques() {
        let bits = |n, k| spread_clique(sp(n, k)).iter().map(|v| v.bits()).collect::<Vec<_>>();
        assert_eq!(bits(8, 4), vec![240, 15]);
        assert_eq!(bits(10, 5), vec![992, 31]);
        assert_eq!(bits(9, 4), vec![480, 30]);
    }

    #[test]
    fn weights_sum_to_polynomial() {
        for n in 2..=19 {
            for k in 1..=n {
                let p = sp(n, k);
                let clique = spread_clique(p);
                let total: QPolynomial = clique.iter().map(|v| spread_weight(v).0).sum();
                assert_eq!(total, spread_polynomial(p), "n={n} k={k}");
                let exact = clique.iter().filter(|v| spread_weight(v).1).count();
                assert!(exact + 1 >= clique.len());
            }
        }
    }
}
