//! Polynomials in the field size `q` with integer coefficients.
//!
//! Clique weights are sums of monomials `q^e`, and the search has to compare
//! them as functions of `q` over every prime power at once. Values are never
//! stored as evaluated integers; evaluation happens on demand and is exact.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// Sparse polynomial `sum c_e q^e`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QPolynomial {
    terms: BTreeMap<u32, BigInt>,
}

impl QPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(coeff: impl Into<BigInt>, exp: u32) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff.into());
        p
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    /// Adds `c q^e` in place.
    pub fn add_term(&mut self, exp: u32, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.terms.values().next_back()
    }

    pub fn coeff(&self, exp: u32) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Exact value at the integer `q`.
    pub fn eval(&self, q: u64) -> BigInt {
        self.eval_big(&BigInt::from(q))
    }

    pub fn eval_big(&self, q: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut prev: Option<u32> = None;
        for (&e, c) in self.terms.iter().rev() {
            if let Some(p) = prev {
                acc *= num_traits::pow(q.clone(), (p - e) as usize);
            }
            acc += c;
            prev = Some(e);
        }
        if let Some(p) = prev {
            acc *= num_traits::pow(q.clone(), p as usize);
        }
        acc
    }

    /// Compare the values at a fixed `q`.
    pub fn cmp_at(&self, other: &Self, q: u64) -> Ordering {
        (self - other).eval(q).sign_cmp_zero()
    }

    /// Compare for all sufficiently large `q`: the highest differing coefficient decides.
    pub fn cmp_infty(&self, other: &Self) -> Ordering {
        let h = self - other;
        match h.leading_coeff() {
            None => Ordering::Equal,
            Some(c) => c.sign_cmp_zero(),
        }
    }

    /// True iff `self(q) > other(q)` for at least one integer `q >= 2`.
    pub fn is_strictly_better(&self, other: &Self) -> bool {
        exists_positive(&(self - other), 2, None)
    }

    /// True iff `self(q) > other(q)` for some integer `q` in `[q_min, q_max]`
    /// (`q_max = None` means unbounded).
    pub fn restrict_better(&self, other: &Self, q_min: u64, q_max: Option<u64>) -> bool {
        exists_positive(&(self - other), q_min.max(2), q_max)
    }

    /// Every `q >= q_min` at which `self(q) > other(q)`, up to the point where
    /// the order becomes fixed. The last element of the returned pair is true
    /// when `self` wins for all large `q`.
    pub fn winning_range(&self, other: &Self, q_min: u64) -> (Vec<u64>, bool) {
        let h = self - other;
        let Some(lead) = h.leading_coeff() else {
            return (Vec::new(), false);
        };
        let stable = h.stable_from(q_min.max(2));
        let mut small: Vec<u64> = (q_min.max(2)..stable).filter(|&q| h.eval(q).is_positive()).collect();
        if lead.is_positive() {
            // Drop the run that already belongs to the final winning stretch.
            let mut end = stable;
            while small.last() == Some(&(end - 1)) {
                small.pop();
                end -= 1;
            }
        }
        (small, lead.is_positive())
    }

    /// A `q0 >= q_min` such that the sign of `self(q)` is constant for all `q >= q0`.
    pub fn stable_from(&self, q_min: u64) -> u64 {
        let Some((&top, lead)) = self.terms.iter().next_back() else {
            return q_min;
        };
        if top == 0 {
            return q_min;
        }
        // |lower terms| <= S q^(top-1) <= |lead| q^top once q >= S/|lead|.
        let s: BigInt = self.terms.iter().rev().skip(1).map(|(_, c)| c.abs()).sum();
        let lead = lead.abs();
        let mut q0 = (&s + &lead) / &lead;
        q0 += 1;
        let q0 = u64::try_from(q0).unwrap_or(u64::MAX);
        q0.max(q_min)
    }

    /// Multiply by `q^shift`.
    pub fn shift(&self, shift: u32) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
        }
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (&e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let a = c.abs();
            match e {
                0 => out.push_str(&a.to_string()),
                _ => {
                    if !a.is_one() {
                        out.push_str(&a.to_string());
                    }
                    if e == 1 {
                        out.push('q');
                    } else {
                        out.push_str(&format!("q^{e}"));
                    }
                }
            }
        }
        out
    }

    /// Parse forms like `q^18+q^5+1`, `2q^{10}-q`, `3\cdot q^4`, `q^0`.
    pub fn parse(s: &str) -> Result<Self, Error> {
        let cleaned: String = s
            .replace("\\cdot", "*")
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '{' && *c != '}')
            .collect();
        if cleaned.is_empty() {
            return Err(Error::Parse(format!("empty polynomial: {s:?}")));
        }
        let mut p = Self::zero();
        let bytes = cleaned.as_bytes();
        let mut i = 0;
        let mut first = true;
        while i < bytes.len() {
            let mut sign = BigInt::one();
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -sign;
                }
                i += 1;
            } else if !first {
                return Err(Error::Parse(format!("expected sign at offset {i} in {s:?}")));
            }
            first = false;
            let start = i;
            while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
                i += 1;
            }
            let term = &cleaned[start..i];
            let (coeff, exp) = parse_term(term).ok_or_else(|| Error::Parse(format!("bad term {term:?} in {s:?}")))?;
            p.add_term(exp, sign * coeff);
        }
        Ok(p)
    }
}

fn parse_term(t: &str) -> Option<(BigInt, u32)> {
    if t.is_empty() {
        return None;
    }
    let Some(qpos) = t.find('q') else {
        return Some((t.parse().ok()?, 0));
    };
    let head = t[..qpos].trim_end_matches('*');
    let coeff = if head.is_empty() { BigInt::one() } else { head.parse().ok()? };
    let tail = &t[qpos + 1..];
    let exp = if tail.is_empty() {
        1
    } else {
        tail.strip_prefix('^')?.parse().ok()?
    };
    Some((coeff, exp))
}

/// Is there an integer `q` in `[q_min, q_max]` with `h(q) > 0`?
///
/// Unbounded ranges use the crossover bound: once `q * |h_top| >= sum of the
/// positive lower coefficients`, the negative leading term dominates.
fn exists_positive(h: &QPolynomial, q_min: u64, q_max: Option<u64>) -> bool {
    let Some((&top, lead)) = h.terms.iter().next_back() else {
        return false;
    };
    if let Some(hi) = q_max {
        let stable = h.stable_from(q_min);
        if (q_min..=hi.min(stable)).any(|q| h.eval(q).is_positive()) {
            return true;
        }
        return hi > stable && lead.is_positive();
    }
    if lead.is_positive() {
        return true;
    }
    if top == 0 {
        return false;
    }
    let pos: BigInt = h.terms.values().filter(|c| c.is_positive()).sum();
    let neg_lead = -lead;
    let mut q = q_min;
    while BigInt::from(q) * &neg_lead < pos {
        if h.eval(q).is_positive() {
            return true;
        }
        q += 1;
    }
    false
}

trait SignCmp {
    fn sign_cmp_zero(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp_zero(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for QPolynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Self::parse(s)
    }
}

impl Serialize for QPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

impl<'de> Deserialize<'de> for QPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Self::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl AddAssign<&QPolynomial> for QPolynomial {
    fn add_assign(&mut self, rhs: &QPolynomial) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, c.clone());
        }
    }
}

impl SubAssign<&QPolynomial> for QPolynomial {
    fn sub_assign(&mut self, rhs: &QPolynomial) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, -c.clone());
        }
    }
}

impl Add for &QPolynomial {
    type Output = QPolynomial;
    fn add(self, rhs: &QPolynomial) -> QPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &QPolynomial {
    type Output = QPolynomial;
    fn sub(self, rhs: &QPolynomial) -> QPolynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for QPolynomial {
    type Output = QPolynomial;
    fn add(mut self, rhs: QPolynomial) -> QPolynomial {
        self += &rhs;
        self
    }
}

impl Sub for QPolynomial {
    type Output = QPolynomial;
    fn sub(mut self, rhs: QPolynomial) -> QPolynomial {
        self -= &rhs;
        self
    }
}

impl Neg for QPolynomial {
    type Output = QPolynomial;
    fn neg(self) -> QPolynomial {
        Self {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul<&QPolynomial> for &QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: &QPolynomial) -> QPolynomial {
        let mut out = QPolynomial::zero();
        for (&a, x) in &self.terms {
            for (&b, y) in &rhs.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }
}

impl Mul<i64> for &QPolynomial {
    type Output = QPolynomial;
    fn mul(self, rhs: i64) -> QPolynomial {
        let mut out = QPolynomial::zero();
        for (&e, c) in &self.terms {
            out.add_term(e, c * rhs);
        }
        out
    }
}

impl std::iter::Sum for QPolynomial {
    fn sum<I: Iterator<Item = QPolynomial>>(iter: I) -> Self {
        let mut out = QPolynomial::zero();
        for p in iter {
            out += &p;
        }
        out
    }
}
