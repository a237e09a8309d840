//! Exact comparisons on dense `i64` coefficient vectors.
//!
//! Inside the search every weight is a short sum of monomials with small
//! coefficients, so differences are kept as dense arrays indexed by exponent.
//! Signs at a given `q` are found by Horner's rule in `i128` with an early
//! exit, which never overflows and never needs big integers.

use std::cmp::Ordering;

use super::QMode;

pub(crate) fn top_nonzero(h: &[i64]) -> Option<usize> {
    h.iter().rposition(|&c| c != 0)
}

/// Sign of `h(q)` for an integer `q >= 2`.
///
/// After reading the coefficients down to index `i` the accumulator is
/// `acc = sum_{l >= i} h_l q^(l-i)` and the remaining tail is bounded by
/// `H (q^i - 1)/(q - 1) < H q^i` with `H = max |h_l|`. Once `|acc| >= H` the
/// tail can no longer change the sign.
pub(crate) fn sign_at(h: &[i64], q: u64) -> Ordering {
    debug_assert!(q >= 2);
    let Some(top) = top_nonzero(h) else {
        return Ordering::Equal;
    };
    let bound: i128 = h[..=top].iter().map(|c| (*c as i128).abs()).max().unwrap_or(0);
    let q = q as i128;
    let mut acc: i128 = 0;
    for l in (0..=top).rev() {
        acc = acc * q + h[l] as i128;
        if acc != 0 && acc.abs() >= bound {
            return acc.cmp(&0);
        }
    }
    acc.cmp(&0)
}

/// Decides "is there a `q` in the mode's range with `h(q) > 0`".
#[derive(Clone, Copy, Debug)]
pub(crate) struct Comparator {
    lo: u64,
    hi: Option<u64>,
}

impl Comparator {
    pub(crate) fn new(mode: QMode) -> Self {
        let (lo, hi) = mode.bounds();
        Self { lo: lo.max(2), hi }
    }

    pub(crate) fn better(&self, h: &[i64]) -> bool {
        let Some(top) = top_nonzero(h) else {
            return false;
        };
        let lead = h[top];
        if top == 0 {
            return lead > 0;
        }
        if self.hi.is_none() && lead > 0 {
            return true;
        }
        // Beyond q_stable the sign of h equals the sign of its leading coefficient.
        let pos: i128 = h[..top].iter().filter(|&&c| c > 0).map(|&c| c as i128).sum();
        let abs_sum: i128 = h[..top].iter().map(|&c| (c as i128).abs()).sum();
        let lead_abs = (lead as i128).abs();
        let (scan_end, tail_wins) = match self.hi {
            None => {
                // Negative lead: f(q) <= g(q) once q |lead| >= sum of positive parts.
                ((pos + lead_abs - 1) / lead_abs, false)
            }
            Some(hi) => {
                let stable = abs_sum / lead_abs + 1;
                if (hi as i128) <= stable {
                    (hi as i128 + 1, false)
                } else {
                    (stable, lead > 0)
                }
            }
        };
        let mut q = self.lo as i128;
        while q < scan_end {
            if sign_at(h, q as u64) == Ordering::Greater {
                return true;
            }
            q += 1;
        }
        tail_wins
    }
}
