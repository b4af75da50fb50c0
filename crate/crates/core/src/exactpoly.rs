//! Dense univariate polynomials in `q` and sparse bivariate polynomials in
//! `(t, q)`, generic over the coefficient ring.
//!
//! The exact instantiations (`BigInt`, `BigRational`) carry every identity of
//! the generating-function layer; floating instantiations are only used for
//! final numeric evaluation.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense polynomial; `coeffs[k]` is the coefficient of `q^k`.
///
/// Always normalized: the last stored coefficient is nonzero, and the zero
/// polynomial stores nothing.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Poly<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        let mut p = Poly { coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `c * q^deg`.
    pub fn monomial(c: T, deg: usize) -> Self {
        let mut v = vec![T::zero(); deg + 1];
        v[deg] = c;
        Self::new(v)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Multiplies by `q^j`.
    pub fn shift(&self, j: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![T::zero(); j];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    /// Drops every term of degree above `cap`.
    pub fn truncate(&self, cap: usize) -> Self {
        Self::new(self.coeffs.iter().take(cap + 1).cloned().collect())
    }

    /// Product with every term above degree `cap` dropped. The retained
    /// coefficients are exact: the coefficient of `q^m` only depends on
    /// coefficients of degree `<= m` in each factor.
    pub fn mul_truncated(&self, other: &Self, cap: usize) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(cap + 1);
        let mut out = vec![T::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    /// Full product, failing if its degree would exceed `cap`.
    pub fn checked_mul(&self, other: &Self, cap: usize) -> Result<Self> {
        if let (Some(a), Some(b)) = (self.degree(), other.degree()) {
            if a + b > cap {
                return Err(Error::DegreeOverflow { degree: a + b, cap });
            }
        }
        Ok(self.mul_truncated(other, cap))
    }

    pub fn pow(&self, e: usize) -> Self {
        num_traits::pow(self.clone(), e)
    }

    pub fn pow_truncated(&self, e: usize, cap: usize) -> Self {
        let mut acc = Self::one();
        let mut base = self.truncate(cap);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_truncated(&base, cap);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_truncated(&base, cap);
            }
        }
        acc
    }

    /// `self^e`, failing if the degree would exceed `cap`.
    pub fn checked_pow(&self, e: usize, cap: usize) -> Result<Self> {
        if let Some(d) = self.degree() {
            let degree = d.saturating_mul(e);
            if degree > cap {
                return Err(Error::DegreeOverflow { degree, cap });
            }
        }
        Ok(self.pow_truncated(e, cap))
    }

    /// Substitutes `q -> q^k`, dropping terms above `cap`.
    pub fn substitute_power(&self, k: usize, cap: usize) -> Self {
        assert!(k >= 1, "substitution power must be positive");
        let Some(d) = self.degree() else { return Self::zero() };
        let len = (d * k).min(cap) + 1;
        let mut out = vec![T::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            if i * k >= len {
                break;
            }
            out[i * k] = c.clone();
        }
        Self::new(out)
    }

    /// Multiplies by `[a]_{q^power} = 1 + q^power + ... + q^{power(a-1)}`,
    /// truncated at `cap`, in `O(deg)` ring operations.
    pub fn mul_qbracket(&self, a: usize, power: usize, cap: usize) -> Self {
        assert!(power >= 1);
        if a == 0 || self.is_zero() {
            return Self::zero();
        }
        let len = (self.coeffs.len() + power * (a - 1)).min(cap + 1);
        // prefix sums along each residue class mod `power`
        let mut prefix: Vec<T> = Vec::with_capacity(len);
        for m in 0..len {
            let mut v = self.coeff(m);
            if m >= power {
                v = v + prefix[m - power].clone();
            }
            prefix.push(v);
        }
        let window = a * power;
        let out = (0..len)
            .map(|m| {
                if m >= window {
                    prefix[m].clone() - prefix[m - window].clone()
                } else {
                    prefix[m].clone()
                }
            })
            .collect();
        Self::new(out)
    }

    /// Horner evaluation in the coefficient ring.
    pub fn evaluate(&self, x: &T) -> T {
        self.coeffs.iter().rev().fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Horner evaluation in another ring, converting each coefficient with `conv`.
    pub fn evaluate_with<U: Scalar>(&self, x: &U, conv: impl Fn(&T) -> U) -> U {
        self.coeffs.iter().rev().fold(U::zero(), |acc, c| acc * x.clone() + conv(c))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Sum of the coefficients (the value at `q = 1`).
    pub fn coeff_sum(&self) -> T {
        self.coeffs.iter().cloned().fold(T::zero(), |a, b| a + b)
    }
}

impl Poly<BigInt> {
    pub fn to_rational(&self) -> Poly<BigRational> {
        self.map(|c| BigRational::from_integer(c.clone()))
    }
}

impl Poly<BigRational> {
    /// The integer polynomial with the same coefficients, if they are all integers.
    pub fn to_integer(&self) -> Option<Poly<BigInt>> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            if !c.denom().is_one() {
                return None;
            }
            out.push(c.numer().clone());
        }
        Some(Poly::new(out))
    }
}

impl<T: Scalar> Zero for Poly<T> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<T: Scalar> One for Poly<T> {
    fn one() -> Self {
        Poly::one()
    }
}

impl<'a, T: Scalar> Add<&'a Poly<T>> for &'a Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<'a, T: Scalar> Sub<&'a Poly<T>> for &'a Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<'a, T: Scalar> Mul<&'a Poly<T>> for &'a Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        self.mul_truncated(rhs, usize::MAX - 1)
    }
}

impl<T: Scalar> Add for Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Poly<T>) -> Poly<T> {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Poly<T>) -> Poly<T> {
        &self - &rhs
    }
}

impl<T: Scalar> Mul for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Poly<T>) -> Poly<T> {
        &self * &rhs
    }
}

impl<T: Scalar> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})q")?,
                _ => write!(f, "({c})q^{k}")?,
            }
        }
        Ok(())
    }
}

impl<T: Scalar> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Poly").field(&self.coeffs).finish()
    }
}

/// `[a]_{q^power} = Σ_{x=0}^{a-1} q^{power·x}`. `a = 0` gives the zero polynomial.
pub fn qbracket(a: i64, power: i64) -> Result<Poly<BigRational>> {
    if a < 0 {
        return Err(Error::InvalidInput(format!("q-bracket size must be nonnegative, got {a}")));
    }
    if power < 1 {
        return Err(Error::InvalidInput(format!("q-bracket power must be positive, got {power}")));
    }
    Ok(qbracket_with::<BigRational>(a as usize, power as usize))
}

pub(crate) fn qbracket_with<T: Scalar>(a: usize, power: usize) -> Poly<T> {
    if a == 0 {
        return Poly::zero();
    }
    let mut v = vec![T::zero(); power * (a - 1) + 1];
    for x in 0..a {
        v[power * x] = T::one();
    }
    Poly::new(v)
}

/// Sparse polynomial in `(t, q)`; keys are `(t-degree, q-degree)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly<T> {
    terms: BTreeMap<(usize, usize), T>,
}

impl<T: Scalar> BiPoly<T> {
    pub fn zero() -> Self {
        BiPoly { terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c t^dt q^dq`, removing the entry if it cancels.
    pub fn add_term(&mut self, dt: usize, dq: usize, c: T) {
        if c.is_zero() {
            return;
        }
        let key = (dt, dq);
        let v = match self.terms.remove(&key) {
            Some(old) => old + c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    pub fn coeff(&self, dt: usize, dq: usize) -> T {
        self.terms.get(&(dt, dq)).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.terms.iter().map(|(&(a, b), c)| (a, b, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn t_degree(&self) -> Option<usize> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn q_degree(&self) -> Option<usize> {
        self.terms.keys().map(|k| k.1).max()
    }

    pub fn min_t_degree(&self) -> Option<usize> {
        self.terms.keys().map(|k| k.0).min()
    }

    /// Builds from rows indexed by t-degree.
    pub fn from_rows(rows: &[Poly<T>]) -> Self {
        let mut out = Self::zero();
        for (dt, row) in rows.iter().enumerate() {
            for (dq, c) in row.coeffs().iter().enumerate() {
                out.add_term(dt, dq, c.clone());
            }
        }
        out
    }

    /// Coefficient of `t^dt` as a polynomial in `q`.
    pub fn row(&self, dt: usize) -> Poly<T> {
        let deg = self.terms.range((dt, 0)..=(dt, usize::MAX)).map(|(k, _)| k.1).max();
        let Some(deg) = deg else { return Poly::zero() };
        let mut v = vec![T::zero(); deg + 1];
        for (&(_, dq), c) in self.terms.range((dt, 0)..=(dt, usize::MAX)) {
            v[dq] = c.clone();
        }
        Poly::new(v)
    }

    /// Setting `q = 1`: a polynomial in `t`.
    pub fn at_q_one(&self) -> Poly<T> {
        let mut v = vec![T::zero(); self.t_degree().map_or(0, |d| d + 1)];
        for (&(dt, _), c) in &self.terms {
            v[dt] = v[dt].clone() + c.clone();
        }
        Poly::new(v)
    }

    /// Setting `t = 1`: a polynomial in `q`.
    pub fn at_t_one(&self) -> Poly<T> {
        let mut v = vec![T::zero(); self.q_degree().map_or(0, |d| d + 1)];
        for (&(_, dq), c) in &self.terms {
            v[dq] = v[dq].clone() + c.clone();
        }
        Poly::new(v)
    }

    pub fn coeff_sum(&self) -> T {
        self.terms.values().cloned().fold(T::zero(), |a, b| a + b)
    }

    pub fn evaluate(&self, t: &T, q: &T) -> T {
        self.evaluate_with(t, q, |c| c.clone())
    }

    /// `Σ c t^dt q^dq` in another ring; each row is evaluated by Horner in `q`.
    pub fn evaluate_with<U: Scalar>(&self, t: &U, q: &U, conv: impl Fn(&T) -> U) -> U {
        let Some(td) = self.t_degree() else { return U::zero() };
        let mut acc = U::zero();
        for dt in (0..=td).rev() {
            let row = self.row(dt);
            acc = acc * t.clone() + row.evaluate_with(q, &conv);
        }
        acc
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> BiPoly<U> {
        let mut out = BiPoly::zero();
        for (&(a, b), c) in &self.terms {
            out.add_term(a, b, f(c));
        }
        out
    }
}

impl<'a, T: Scalar> Add<&'a BiPoly<T>> for &'a BiPoly<T> {
    type Output = BiPoly<T>;
    fn add(self, rhs: &BiPoly<T>) -> BiPoly<T> {
        let mut out = self.clone();
        for (&(a, b), c) in &rhs.terms {
            out.add_term(a, b, c.clone());
        }
        out
    }
}

impl<'a, T: Scalar> Mul<&'a BiPoly<T>> for &'a BiPoly<T> {
    type Output = BiPoly<T>;
    fn mul(self, rhs: &BiPoly<T>) -> BiPoly<T> {
        let mut out = BiPoly::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.add_term(a1 + a2, b1 + b2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<T: Scalar + fmt::Display> fmt::Debug for BiPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("BiPoly{")?;
        for (i, (&(a, b), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}·t^{a}q^{b}")?;
        }
        f.write_str("}")
    }
}

#[derive(Serialize, Deserialize)]
struct TermsRepr {
    terms: Vec<(usize, usize, String)>,
}

impl BiPoly<BigRational> {
    /// `{"terms": [[dt, dq, "p/q"], ...]}`, sorted by `(dt, dq)`.
    pub fn to_json_value(&self) -> serde_json::Value {
        let repr = TermsRepr { terms: self.terms().map(|(a, b, c)| (a, b, c.to_string())).collect() };
        serde_json::to_value(repr).expect("serializable")
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let repr: TermsRepr = serde_json::from_str(s).map_err(|e| Error::Parse(format!("TQPoly JSON: {e}")))?;
        let mut out = BiPoly::zero();
        for (a, b, c) in repr.terms {
            let v = BigRational::from_str(c.trim())
                .map_err(|_| Error::Parse(format!("bad rational coefficient {c:?}")))?;
            out.add_term(a, b, v);
        }
        Ok(out)
    }

    pub fn to_integer(&self) -> Option<BiPoly<BigInt>> {
        let mut out = BiPoly::zero();
        for (a, b, c) in self.terms() {
            if !c.denom().is_one() {
                return None;
            }
            out.add_term(a, b, c.numer().clone());
        }
        Some(out)
    }
}

impl BiPoly<BigInt> {
    pub fn to_rational(&self) -> BiPoly<BigRational> {
        self.map(|c| BigRational::from_integer(c.clone()))
    }
}
