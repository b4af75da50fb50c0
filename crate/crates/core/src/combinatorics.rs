//! Cycle types, class sizes, divisors and the Möbius function.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Conjugacy class of `S_n`, stored as a dense multiplicity vector.
///
/// `mult(k)` is the number of `k`-cycles. This is *not* the `k`-th largest
/// part of a partition.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, usize)>", into = "Vec<(usize, usize)>")]
pub struct CycleType {
    // index k holds the number of k-cycles; index 0 is always 0
    mult: Vec<usize>,
    n: usize,
}

impl CycleType {
    /// Builds a cycle type from `(k, m)` pairs ("m cycles of length k").
    /// Repeated `k` accumulate; `m = 0` entries are ignored.
    pub fn from_pairs(pairs: &[(usize, usize)]) -> Result<Self> {
        let mut n = 0usize;
        for &(k, m) in pairs {
            if k == 0 && m > 0 {
                return Err(Error::InvalidInput("cycle length must be at least 1".into()));
            }
            n = k
                .checked_mul(m)
                .and_then(|km| n.checked_add(km))
                .ok_or_else(|| Error::InvalidInput("cycle type size overflows".into()))?;
        }
        let mut mult = vec![0usize; n + 1];
        for &(k, m) in pairs {
            if m > 0 {
                mult[k] += m;
            }
        }
        Ok(CycleType { mult, n })
    }

    /// Builds a cycle type from a dense vector where `mult[k]` counts k-cycles.
    pub fn from_dense(mult: &[usize]) -> Result<Self> {
        if mult.first().copied().unwrap_or(0) != 0 {
            return Err(Error::InvalidInput("index 0 of a multiplicity vector must be 0".into()));
        }
        let pairs: Vec<_> = mult.iter().copied().enumerate().skip(1).collect();
        Self::from_pairs(&pairs)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_pairs(&[(1, n)]).expect("valid")
    }

    /// The class of a single `n`-cycle (`n >= 1`).
    pub fn ncycle(n: usize) -> Self {
        Self::from_pairs(&[(n, 1)]).expect("valid")
    }

    /// Fixed-point-free involutions of `S_n`; `n` must be even.
    pub fn fpf_involution(n: usize) -> Result<Self> {
        if !n.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!("fixed-point-free involutions need even n, got {n}")));
        }
        Self::from_pairs(&[(2, n / 2)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of `k`-cycles; zero for `k = 0` or `k > n`.
    pub fn mult(&self, k: usize) -> usize {
        self.mult.get(k).copied().unwrap_or(0)
    }

    pub fn fixed_points(&self) -> usize {
        self.mult(1)
    }

    /// Fixed-point density `λ₁ / n`; 0 for the empty class.
    pub fn alpha1(&self) -> BigRational {
        if self.n == 0 {
            return BigRational::zero();
        }
        BigRational::new(BigInt::from(self.fixed_points()), BigInt::from(self.n))
    }

    pub fn alpha1_f64(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.fixed_points() as f64 / self.n as f64
        }
    }

    /// `(k, mult(k))` for every `k` with a nonzero count, ascending in `k`.
    pub fn parts(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mult.iter().copied().enumerate().filter(|&(_, m)| m > 0)
    }

    /// Cycle lengths as a multiset, longest first.
    pub fn lengths_desc(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for k in (1..=self.n).rev() {
            out.extend(std::iter::repeat_n(k, self.mult[k]));
        }
        out
    }

    /// Total number of cycles, `Σ_k mult(k)`.
    pub fn num_cycles(&self) -> usize {
        self.mult.iter().sum()
    }
}

impl TryFrom<Vec<(usize, usize)>> for CycleType {
    type Error = Error;
    fn try_from(pairs: Vec<(usize, usize)>) -> Result<Self> {
        Self::from_pairs(&pairs)
    }
}

impl From<CycleType> for Vec<(usize, usize)> {
    fn from(c: CycleType) -> Self {
        c.parts().collect()
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, m) in self.parts() {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{k}^{m}")?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycleType[{self}]")
    }
}

impl FromStr for CycleType {
    type Err = Error;

    /// Accepts `"1^2 3^1"` (a bare `k` means `k^1`) or a JSON array of `[k, m]` pairs.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('[') {
            let pairs: Vec<(usize, usize)> = serde_json::from_str(s)
                .map_err(|e| Error::Parse(format!("cycle type JSON {s:?}: {e}")))?;
            return Self::from_pairs(&pairs);
        }
        let mut pairs = Vec::new();
        for tok in s.split_whitespace() {
            let (k, m) = match tok.split_once('^') {
                Some((k, m)) => (k, m),
                None => (tok, "1"),
            };
            let k: usize = k
                .parse()
                .map_err(|_| Error::Parse(format!("bad cycle length {k:?} in factor {tok:?}")))?;
            let m: usize = m
                .parse()
                .map_err(|_| Error::Parse(format!("bad multiplicity {m:?} in factor {tok:?}")))?;
            if k == 0 {
                return Err(Error::Parse(format!("cycle length 0 in factor {tok:?}")));
            }
            pairs.push((k, m));
        }
        Self::from_pairs(&pairs)
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `|C_λ| = n! / ∏_k (m_k! k^{m_k})`.
pub fn class_size(lam: &CycleType) -> BigInt {
    factorial(lam.n()) / centralizer_order(lam)
}

/// `∏_k m_k! k^{m_k}`, the order of the centralizer of any element of `C_λ`.
pub fn centralizer_order(lam: &CycleType) -> BigInt {
    lam.parts()
        .map(|(k, m)| factorial(m) * num_traits::pow(BigInt::from(k), m))
        .fold(BigInt::one(), |a, b| a * b)
}

/// Calls `f` with the dense multiplicity vector (length `n + 1`) of every
/// partition of `n`, without allocating per partition.
pub fn for_each_partition<F: FnMut(&[usize])>(n: usize, mut f: F) {
    let mut mult = vec![0usize; n + 1];
    fn rec<F: FnMut(&[usize])>(rest: usize, max_part: usize, mult: &mut [usize], f: &mut F) {
        if rest == 0 {
            f(mult);
            return;
        }
        for k in (1..=max_part.min(rest)).rev() {
            mult[k] += 1;
            rec(rest - k, k, mult, f);
            mult[k] -= 1;
        }
    }
    rec(n, n, &mut mult, &mut f);
}

/// All cycle types of `S_n`, largest part first in reverse-lexicographic order.
pub fn partitions_of(n: usize) -> Vec<CycleType> {
    let mut out = Vec::new();
    for_each_partition(n, |m| out.push(CycleType::from_dense(m).expect("valid partition")));
    out
}

/// Number of partitions of `n`, by Euler's pentagonal recurrence.
pub fn partition_count(n: usize) -> BigInt {
    let mut p = vec![BigInt::zero(); n + 1];
    p[0] = BigInt::one();
    for m in 1..=n {
        let mut acc = BigInt::zero();
        for j in 1.. {
            let g1 = j * (3 * j - 1) / 2;
            if g1 > m {
                break;
            }
            let sign_pos = j % 2 == 1;
            let mut term = p[m - g1].clone();
            let g2 = j * (3 * j + 1) / 2;
            if g2 <= m {
                term += &p[m - g2];
            }
            if sign_pos {
                acc += term;
            } else {
                acc -= term;
            }
        }
        p[m] = acc;
    }
    p[n].clone()
}

fn check_positive(d: i64, what: &str) -> Result<u64> {
    if d < 1 {
        return Err(Error::InvalidInput(format!("{what} requires a positive integer, got {d}")));
    }
    Ok(d as u64)
}

/// Möbius function μ(d).
pub fn mobius(d: i64) -> Result<i32> {
    let mut d = check_positive(d, "mobius")?;
    let mut mu = 1;
    let mut p = 2u64;
    while p * p <= d {
        if d % p == 0 {
            d /= p;
            if d % p == 0 {
                return Ok(0);
            }
            mu = -mu;
        }
        p += 1;
    }
    if d > 1 {
        mu = -mu;
    }
    Ok(mu)
}

/// Positive divisors of `i`, ascending.
pub fn divisors(i: i64) -> Result<Vec<u64>> {
    let i = check_positive(i, "divisors")?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= i {
        if i % d == 0 {
            small.push(d);
            if d * d != i {
                large.push(i / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

/// Greatest common divisor of a list of nonnegative integers (0 for an all-zero list).
pub fn gcd_all(values: &[usize]) -> usize {
    values.iter().fold(0usize, |g, &v| num_integer::gcd(g, v))
}

/// `n!` as `f64`, saturating to infinity.
pub fn factorial_f64(n: usize) -> f64 {
    factorial(n).to_f64().unwrap_or(f64::INFINITY)
}
