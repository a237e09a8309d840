//! Pivot vectors and their Ferrers diagrams.
//!
//! A pivot vector of length `n` and weight `k` is stored in a `u64` using the
//! integer encoding `sum b_i 2^(n-i)`, so the first coordinate is the most
//! significant bit. Diagrams are kept as column heights, nondecreasing from
//! left to right; rows are top-right justified.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::Error;

pub const MAX_N: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PivotVector {
    n: u32,
    bits: u64,
}

impl PivotVector {
    pub fn new(n: u32, bits: u64) -> Result<Self, Error> {
        if n == 0 || n > MAX_N {
            return Err(Error::Invalid(format!("vector length {n} outside 1..={MAX_N}")));
        }
        if n < 64 && bits >> n != 0 {
            return Err(Error::Invalid(format!("{bits} does not fit in {n} coordinates")));
        }
        Ok(Self { n, bits })
    }

    /// Build from coordinates `b_1..b_n`.
    pub fn from_coords(coords: &[u8]) -> Result<Self, Error> {
        let mut bits = 0u64;
        for &c in coords {
            if c > 1 {
                return Err(Error::Invalid(format!("coordinate {c} is not binary")));
            }
            bits = (bits << 1) | c as u64;
        }
        Self::new(coords.len() as u32, bits)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Coordinate `b_i`, 1-based.
    pub fn coord(&self, i: u32) -> u8 {
        ((self.bits >> (self.n - i)) & 1) as u8
    }

    pub fn coords(&self) -> Vec<u8> {
        (1..=self.n).map(|i| self.coord(i)).collect()
    }

    pub fn hamming(&self, other: &Self) -> u32 {
        (self.bits ^ other.bits).count_ones()
    }

    /// Number of free entries of the echelon form: for every zero, the number of ones before it.
    pub fn dot_count(&self) -> u32 {
        let mut ones = 0;
        let mut dots = 0;
        for i in 1..=self.n {
            if self.coord(i) == 1 {
                ones += 1;
            } else {
                dots += ones;
            }
        }
        dots
    }

    pub fn to_diagram(&self) -> FerrersDiagram {
        let mut ones = 0;
        let mut cols = Vec::new();
        for i in 1..=self.n {
            if self.coord(i) == 1 {
                ones += 1;
            } else if ones > 0 {
                cols.push(ones);
            }
        }
        FerrersDiagram { cols }
    }

    /// 1-based position of the last one, if any.
    pub fn last_one(&self) -> Option<u32> {
        if self.bits == 0 {
            None
        } else {
            Some(self.n - self.bits.trailing_zeros())
        }
    }

    pub fn to_bit_string(&self) -> String {
        self.coords().iter().map(|c| if *c == 1 { '1' } else { '0' }).collect()
    }

    pub fn parse_bit_string(s: &str) -> Result<Self, Error> {
        let coords: Result<Vec<u8>, Error> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::Parse(format!("not a bit string: {s:?}"))),
            })
            .collect();
        Self::from_coords(&coords?)
    }
}

impl fmt::Display for PivotVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

/// All vectors of length `n` and weight `k`, in increasing integer order.
pub fn all_pivots(n: u32, k: u32) -> Vec<PivotVector> {
    let mut out = Vec::new();
    if k > n || n > MAX_N {
        return out;
    }
    if k == 0 {
        out.push(PivotVector { n, bits: 0 });
        return out;
    }
    // Gosper's hack over k-subsets.
    let limit: u128 = 1u128 << n;
    let mut x: u128 = (1u128 << k) - 1;
    while x < limit {
        out.push(PivotVector { n, bits: x as u64 });
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

/// A Ferrers diagram given by its column heights `gamma_0 <= ... <= gamma_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FerrersDiagram {
    cols: Vec<u32>,
}

impl FerrersDiagram {
    pub fn from_cols(mut cols: Vec<u32>) -> Result<Self, Error> {
        if cols.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Invalid(format!("column heights {cols:?} are not nondecreasing")));
        }
        cols.retain(|&c| c > 0);
        Ok(Self { cols })
    }

    /// Rows listed top to bottom, nonincreasing.
    pub fn from_rows(rows: &[u32]) -> Result<Self, Error> {
        if rows.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invalid(format!("row lengths {rows:?} are not nonincreasing")));
        }
        Ok(Self { cols: conjugate_rev(rows) })
    }

    pub fn empty() -> Self {
        Self { cols: Vec::new() }
    }

    pub fn cols(&self) -> &[u32] {
        &self.cols
    }

    pub fn rows(&self) -> Vec<u32> {
        let mut r = conjugate_rev(&self.cols);
        r.reverse();
        r
    }

    pub fn num_cols(&self) -> u32 {
        self.cols.len() as u32
    }

    pub fn num_rows(&self) -> u32 {
        self.cols.last().copied().unwrap_or(0)
    }

    pub fn dots(&self) -> u32 {
        self.cols.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.cols.is_empty()
    }

    pub fn contains(&self, row: u32, col: u32) -> bool {
        (col as usize) < self.cols.len() && row < self.cols[col as usize]
    }

    /// Transpose followed by a half turn: the new rows are the old columns reversed.
    pub fn transpose(&self) -> Self {
        let mut cols = self.rows();
        cols.reverse();
        Self { cols }
    }

    /// Dots left after dropping the top `i` rows and the rightmost `delta - 1 - i` columns.
    pub fn nu(&self, delta: u32, i: u32) -> u32 {
        assert!(i < delta, "nu index {i} must be below delta {delta}");
        let drop = (delta - 1 - i) as usize;
        if drop >= self.cols.len() {
            return 0;
        }
        self.cols[..self.cols.len() - drop].iter().map(|&g| g.saturating_sub(i)).sum()
    }

    pub fn nu_vector(&self, delta: u32) -> Vec<u32> {
        (0..delta).map(|i| self.nu(delta, i)).collect()
    }

    /// Upper bound on the dimension of a rank-metric code in this shape with distance `delta`.
    pub fn upper_exponent(&self, delta: u32) -> u32 {
        assert!(delta >= 1, "rank distance must be positive");
        (0..delta).map(|i| self.nu(delta, i)).min().unwrap_or(0)
    }

    /// Sub-diagram made of the top `rows` rows and the rightmost `cols` columns.
    pub fn crop(&self, rows: u32, cols: u32) -> Self {
        let skip = self.cols.len().saturating_sub(cols as usize);
        let c: Vec<u32> = self.cols[skip..].iter().map(|&g| g.min(rows)).filter(|&g| g > 0).collect();
        Self { cols: c }
    }

    /// Diagrams obtained by deleting one removable corner dot.
    pub fn corner_removals(&self) -> Vec<Self> {
        let mut out = Vec::new();
        for c in 0..self.cols.len() {
            let g = self.cols[c];
            if c == 0 || self.cols[c - 1] < g {
                let mut cols = self.cols.clone();
                cols[c] -= 1;
                if cols[c] == 0 {
                    cols.remove(c);
                }
                out.push(Self { cols });
            }
        }
        out
    }

    /// Is `other` contained in this diagram when both are top-right justified?
    pub fn contains_diagram(&self, other: &Self) -> bool {
        if other.cols.len() > self.cols.len() {
            return false;
        }
        let off = self.cols.len() - other.cols.len();
        other.cols.iter().enumerate().all(|(i, &g)| g <= self.cols[off + i])
    }
}

impl fmt::Display for FerrersDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.cols.len();
        for r in 0..self.num_rows() {
            let line: String = (0..n).map(|c| if self.contains(r, c as u32) { '•' } else { ' ' }).collect();
            writeln!(f, "{}", line.trim_end())?;
        }
        Ok(())
    }
}

/// Conjugate partition, returned in nondecreasing order.
fn conjugate_rev(parts: &[u32]) -> Vec<u32> {
    let max = parts.iter().copied().max().unwrap_or(0);
    let mut sorted: Vec<u32> = parts.iter().copied().filter(|&p| p > 0).collect();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut out: Vec<u32> = (1..=max).map(|t| sorted.iter().filter(|&&p| p >= t).count() as u32).collect();
    out.reverse();
    out
}

/// Diagram summary used by the command line and JSON output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramView {
    pub pivot: Option<String>,
    pub rows: Vec<u32>,
    pub cols: Vec<u32>,
    pub delta: u32,
    pub nu: Vec<u32>,
    pub upper_exponent: u32,
}

impl DiagramView {
    pub fn new(diagram: &FerrersDiagram, delta: u32, pivot: Option<&PivotVector>) -> Self {
        Self {
            pivot: pivot.map(|p| p.to_bit_string()),
            rows: diagram.rows(),
            cols: diagram.cols().to_vec(),
            delta,
            nu: diagram.nu_vector(delta),
            upper_exponent: diagram.upper_exponent(delta),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pivot_roundtrip_and_diagram() {
        let v = PivotVector::new(12, 1256).unwrap();
        assert_eq!(v.to_bit_string(), "010011101000");
        let f = v.to_diagram();
        assert_eq!(f.cols(), &[1, 1, 4, 5, 5, 5]);
        assert_eq!(f.rows(), vec![6, 4, 4, 4, 3]);
        assert_eq!(f.dots(), v.dot_count());
        assert_eq!(FerrersDiagram::from_rows(&[6, 4, 4, 4, 3]).unwrap(), f);
    }

    #[test]
    fn rows_example_profile() {
        let f = FerrersDiagram::from_rows(&[6, 5, 2, 2, 2]).unwrap();
        assert_eq!(f.nu_vector(4), vec![5, 3, 3, 4]);
        assert_eq!(f.upper_exponent(4), 3);
    }

    #[test]
    fn gosper_counts() {
        assert_eq!(all_pivots(10, 5).len(), 252);
        assert!(all_pivots(10, 5).iter().all(|v| v.weight() == 5));
        assert_eq!(all_pivots(4, 0).len(), 1);
    }

    #[test]
    fn crop_and_corners() {
        let f = FerrersDiagram::from_rows(&[10, 4, 3, 3, 2, 2]).unwrap();
        assert_eq!(f.crop(6, 6).rows(), vec![6, 4, 3, 3, 2, 2]);
        for g in f.corner_removals() {
            assert_eq!(g.dots() + 1, f.dots());
            assert!(f.contains_diagram(&g));
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(PivotVector::new(3, 8).is_err());
        assert!(FerrersDiagram::from_cols(vec![3, 1]).is_err());
        assert!(FerrersDiagram::from_rows(&[1, 3]).is_err());
    }
}
