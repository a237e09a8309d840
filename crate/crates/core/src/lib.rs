//! Bounds for constant dimension codes from weighted cliques of pivot vectors.
//!
//! Each binary vector of length `n` and weight `k` stands for the set of
//! subspaces whose reduced echelon form has that pivot pattern. Two pivot
//! vectors at Hamming distance at least `d` can both contribute codewords, and
//! each contributes as many codewords as the best Ferrers diagram rank-metric
//! code in its diagram. A heaviest clique then bounds the largest code built
//! this way.
//!
//! * [`qpoly`]: polynomials in `q` and the "better for some q" order
//! * [`diagrams`]: pivot vectors and Ferrers diagrams
//! * [`weights`]: upper and lower dimension bounds for diagrams
//! * [`search`]: the weighted clique search
//! * [`spreads`]: closed forms for the partial spread case `d = 2k`
//! * [`ilpgen`]: integer programming formulations
//! * [`corpus`]: tabulated reference results and their verification
//! * [`cli`]: command line front end

pub mod bounds;
pub mod cli;
pub mod corpus;
pub mod diagrams;
pub mod ilpgen;
pub mod qpoly;
pub mod search;
pub mod spreads;
pub mod weights;

pub use diagrams::{FerrersDiagram, PivotVector};
pub use qpoly::QPolynomial;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Guard(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Checks the basic parameter constraints shared by every entry point.
pub fn check_params(n: u32, d: u32, k: u32) -> Result<()> {
    if n == 0 || n > diagrams::MAX_N {
        return Err(Error::Invalid(format!("n = {n} must lie in 1..={}", diagrams::MAX_N)));
    }
    if k == 0 || k >= n {
        return Err(Error::Invalid(format!("k = {k} must satisfy 0 < k < n = {n}")));
    }
    if d == 0 || d % 2 == 1 {
        return Err(Error::Invalid(format!("d = {d} must be a positive even number")));
    }
    if d > 2 * k.min(n - k) {
        return Err(Error::Invalid(format!("d = {d} exceeds 2 min(k, n-k) = {}", 2 * k.min(n - k))));
    }
    Ok(())
}
