//! Necklace polynomials, cycle-index expectations and the joint generating
//! function of `(d, maj)` over a conjugacy class.
//!
//! The central routine is [`GfEngine::joint_gf`]. Writing
//! `P_a(q) = ∏_i E[∏_k f_{i,a}(q^k)^{m_k(σ_i)}]` with `σ_i` uniform on
//! `S_{λ_i}`, the class generating function is the t-truncation of
//!
//! ```text
//!   ∏_{j=0}^{n} (1 - t q^j) · Σ_{a>=1} t^a P_a(q)
//! ```
//!
//! The left factor has t-degree `n + 1`, the true numerator has t-degree at
//! most `n`, so the sum is carried to `a = n + 3` and the coefficients of
//! `t^{n+1}, t^{n+2}, t^{n+3}` are required to vanish. All q-arithmetic is
//! exact and truncated at degree `n(n-1)/2 + n`; the coefficients above
//! `n(n-1)/2` are required to vanish as well.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::bigfloat::{self, BigFloat};
use crate::combinatorics::{self, binomial, class_size, factorial, CycleType};
use crate::error::{Error, Result};
use crate::exactpoly::Poly;
use crate::scalar::{FromExact, Real};
use crate::{IntPoly, IntTQPoly, QPoly, TQPoly};

/// Result of [`GfEngine::joint_gf`].
#[derive(Clone, Debug)]
pub struct MasterGFResult {
    pub lam: CycleType,
    /// `Σ_{π ∈ C_λ} t^{d(π)} q^{maj(π)}`.
    pub gf: TQPoly,
    /// `P_a(q)` for `a = 1..=n`, truncated at the working degree `n(n-1)/2 + n`.
    pub per_a: Vec<QPoly>,
}

impl MasterGFResult {
    /// The generating function with integer coefficients.
    pub fn counts(&self) -> IntTQPoly {
        self.gf.to_integer().expect("joint_gf coefficients are integers")
    }
}

/// Largest power of `q` that can occur in `maj` on `S_n`.
pub fn max_major_index(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Working degree cap for a class of size `n`.
pub fn degree_cap(n: usize) -> usize {
    max_major_index(n) + n
}

fn mobius_u(d: u64) -> i32 {
    combinatorics::mobius(d as i64).expect("positive")
}

fn divisors_u(i: usize) -> Vec<usize> {
    combinatorics::divisors(i as i64).expect("positive").into_iter().map(|d| d as usize).collect()
}

/// `f_{i,a}(q) = (1/i) Σ_{d|i} μ(d) [a]_{q^d}^{i/d}`, truncated at `cap`.
fn f_ia_truncated(i: usize, a: usize, cap: usize) -> Result<IntPoly> {
    let mut total: IntPoly = Poly::zero();
    for d in divisors_u(i) {
        let mu = mobius_u(d as u64);
        if mu == 0 {
            continue;
        }
        let mut p = IntPoly::one();
        for _ in 0..i / d {
            p = p.mul_qbracket(a, d, cap);
        }
        total = if mu > 0 { &total + &p } else { &total - &p };
    }
    let i_big = BigInt::from(i);
    let mut out = Vec::with_capacity(total.coeffs().len());
    for c in total.coeffs() {
        let (q, r) = c.div_rem(&i_big);
        if !r.is_zero() {
            return Err(Error::Inconsistency(format!("f_{{{i},{a}}} has a non-integer coefficient")));
        }
        out.push(q);
    }
    Ok(Poly::new(out))
}

/// `f_{i,a}(q)` as an exact polynomial of degree `i(a-1)`.
pub fn f_iaq(i: usize, a: usize) -> Result<QPoly> {
    if i == 0 || a == 0 {
        return Err(Error::InvalidInput(format!("f_iaq needs i, a >= 1, got i={i}, a={a}")));
    }
    Ok(f_ia_truncated(i, a, i * (a - 1))?.to_rational())
}

/// `f_{i,a}(1)`: the number of primitive necklaces of length `i` over `a` letters.
pub fn f_ia_at_one(i: usize, a: usize) -> BigInt {
    let mut total = BigInt::zero();
    for d in divisors_u(i) {
        let term = num_traits::pow(BigInt::from(a), i / d);
        match mobius_u(d as u64) {
            1 => total += term,
            -1 => total -= term,
            _ => {}
        }
    }
    total / BigInt::from(i)
}

/// `M(r_1, ..., r_a)`: primitive circular words in which letter `k` occurs `r_k` times.
pub fn necklace_count(r: &[usize]) -> Result<BigInt> {
    let n: usize = r.iter().sum();
    if r.is_empty() || n == 0 {
        return Err(Error::InvalidInput("necklace_count needs a nonempty letter count with positive total".into()));
    }
    let g = combinatorics::gcd_all(r);
    let mut total = BigInt::zero();
    for d in divisors_u(g) {
        let mu = mobius_u(d as u64);
        if mu == 0 {
            continue;
        }
        let denom = r.iter().map(|&ri| factorial(ri / d)).fold(BigInt::one(), |a, b| a * b);
        let term = factorial(n / d) / denom;
        if mu > 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Ok(total / BigInt::from(n))
}

/// `J_{i,m,a} = Σ M(r)` over `r ∈ N^a` with `Σ r_k = i` and `Σ k r_k = i + m`.
pub fn j_ima(i: usize, m: usize, a: usize) -> Result<BigInt> {
    if i == 0 || a == 0 {
        return Err(Error::InvalidInput(format!("j_ima needs i, a >= 1, got i={i}, a={a}")));
    }
    fn rec(k: usize, a: usize, left: usize, weight_left: usize, r: &mut Vec<usize>, acc: &mut BigInt) {
        // letters k..=a remain; each copy of letter k contributes k - 1 to the weight
        if k == a {
            if weight_left == left * (a - 1) {
                r.push(left);
                *acc += necklace_count(r).expect("nonempty");
                r.pop();
            }
            return;
        }
        for c in 0..=left {
            let w = c * (k - 1);
            if w > weight_left {
                break;
            }
            r.push(c);
            rec(k + 1, a, left - c, weight_left - w, r, acc);
            r.pop();
        }
    }
    let mut acc = BigInt::zero();
    if m <= i * (a - 1) {
        rec(1, a, i, m, &mut Vec::with_capacity(a), &mut acc);
    }
    Ok(acc)
}

/// `E[∏_k x_k^{m_k(σ)}]` for `σ` uniform on `S_size`, by the partition sum
/// `Σ_{r ⊢ size} ∏_k (x_k / k)^{r_k} / r_k!`.
pub fn cycle_index_expectation(size: usize, x: &BTreeMap<usize, QPoly>) -> Result<QPoly> {
    for k in 1..=size {
        if !x.contains_key(&k) {
            return Err(Error::MissingVariable(k));
        }
    }
    let mut total: QPoly = Poly::zero();
    combinatorics::for_each_partition(size, |mult| {
        let mut term = QPoly::one();
        for (k, &rk) in mult.iter().enumerate().skip(1) {
            if rk == 0 {
                continue;
            }
            let scale = BigRational::new(BigInt::one(), factorial(rk) * num_traits::pow(BigInt::from(k), rk));
            term = (&term * &x[&k].pow(rk)).scale(&scale);
        }
        total = &total + &term;
    });
    Ok(total)
}

/// `size! · E[∏_k x_k^{m_k(σ)}]` by the recurrence
/// `A_m = Σ_{k=1}^{m} (m-1)!/(m-k)! · x_k · A_{m-k}`, truncated at `cap`.
/// `x[k - 1]` holds `x_k`.
pub fn cycle_index_scaled(size: usize, x: &[IntPoly], cap: usize) -> Result<IntPoly> {
    if x.len() < size {
        return Err(Error::MissingVariable(x.len() + 1));
    }
    let mut a: Vec<IntPoly> = Vec::with_capacity(size + 1);
    a.push(IntPoly::one());
    for m in 1..=size {
        let mut acc = IntPoly::zero();
        // falling factorial (m-1)!/(m-k)!
        let mut ff = BigInt::one();
        for k in 1..=m {
            if k > 1 {
                ff *= m - k + 1;
            }
            let term = x[k - 1].mul_truncated(&a[m - k], cap).scale(&ff);
            acc = &acc + &term;
        }
        a.push(acc);
    }
    Ok(a.pop().expect("nonempty"))
}

/// Shared, thread-safe memo of truncated necklace polynomials `f_{i,a}`.
#[derive(Default)]
pub struct GfEngine {
    cache: RwLock<HashMap<(usize, usize, usize), Arc<IntPoly>>>,
}

impl GfEngine {
    pub fn new() -> Self {
        Self::default()
    }

    fn f_ia(&self, i: usize, a: usize, cap: usize) -> Result<Arc<IntPoly>> {
        let key = (i, a, cap);
        if let Some(p) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(p.clone());
        }
        let p = Arc::new(f_ia_truncated(i, a, cap)?);
        self.cache.write().expect("cache lock").insert(key, p.clone());
        Ok(p)
    }

    /// `D · P_a(q)` with `D = ∏_i λ_i! i^{λ_i}`, truncated at `cap`.
    fn scaled_inner_product(&self, lam: &CycleType, a: usize, cap: usize) -> Result<IntPoly> {
        let mut prod = IntPoly::one();
        for (i, li) in lam.parts() {
            let f = self.f_ia(i, a, cap)?;
            let x: Vec<IntPoly> = (1..=li).map(|k| f.substitute_power(k, cap)).collect();
            let scaled = cycle_index_scaled(li, &x, cap)?;
            let weight = num_traits::pow(BigInt::from(i), li);
            prod = prod.mul_truncated(&scaled.scale(&weight), cap);
        }
        Ok(prod)
    }

    pub fn joint_gf(&self, lam: &CycleType) -> Result<MasterGFResult> {
        let n = lam.n();
        if n == 0 {
            return Err(Error::InvalidInput("joint_gf needs n >= 1".into()));
        }
        let max_maj = max_major_index(n);
        let cap = degree_cap(n);
        let top = n + 3;

        let scaled: Vec<IntPoly> =
            (1..=top).into_par_iter().map(|a| self.scaled_inner_product(lam, a, cap)).collect::<Result<_>>()?;

        // rows[k] = coefficient of t^k
        let mut rows: Vec<IntPoly> = Vec::with_capacity(top + 1);
        rows.push(IntPoly::zero());
        rows.extend(scaled.iter().cloned());
        for j in 0..=n {
            for k in (1..=top).rev() {
                let shifted = rows[k - 1].shift(j).truncate(cap);
                rows[k] = &rows[k] - &shifted;
            }
        }

        for (k, row) in rows.iter().enumerate().skip(n + 1) {
            if !row.is_zero() {
                return Err(Error::Inconsistency(format!(
                    "guard coefficient of t^{k} does not vanish for {lam}"
                )));
            }
        }
        if !rows[0].is_zero() {
            return Err(Error::Inconsistency(format!("constant t-term does not vanish for {lam}")));
        }

        let denom = combinatorics::centralizer_order(lam);
        let mut gf = IntTQPoly::zero();
        for (k, row) in rows.iter().enumerate().take(n + 1) {
            if let Some(d) = row.degree() {
                if d > max_maj {
                    return Err(Error::Inconsistency(format!(
                        "q-degree {d} exceeds the largest major index {max_maj} in t^{k} for {lam}"
                    )));
                }
            }
            for (m, c) in row.coeffs().iter().enumerate() {
                let (quot, rem) = c.div_rem(&denom);
                if !rem.is_zero() || quot.is_negative() {
                    return Err(Error::Inconsistency(format!(
                        "coefficient of t^{k} q^{m} is not a nonnegative integer for {lam}"
                    )));
                }
                gf.add_term(k, m, quot);
            }
        }
        let size = class_size(lam);
        if gf.coeff_sum() != size {
            return Err(Error::Inconsistency(format!(
                "coefficients sum to {} instead of the class size {size} for {lam}",
                gf.coeff_sum()
            )));
        }

        let denom_q = BigRational::from_integer(denom);
        let per_a = scaled
            .iter()
            .take(n)
            .map(|p| p.to_rational().scale(&(BigRational::one() / denom_q.clone())))
            .collect();

        Ok(MasterGFResult { lam: lam.clone(), gf: gf.to_rational(), per_a })
    }

    /// `Σ_{π ∈ C_λ} t^{d(π)}` from the q = 1 form
    /// `(1-t)^{n+1} Σ_a t^a ∏_i C(λ_i + f_{i,a}(1) - 1, λ_i)`, with the same
    /// t-guard as [`GfEngine::joint_gf`].
    pub fn eulerian_specialization(&self, lam: &CycleType) -> Result<IntPoly> {
        let n = lam.n();
        if n == 0 {
            return Err(Error::InvalidInput("eulerian_specialization needs n >= 1".into()));
        }
        let top = n + 3;
        let mut series = vec![BigInt::zero(); top + 1];
        for (a, slot) in series.iter_mut().enumerate().skip(1) {
            let mut prod = BigInt::one();
            for (i, li) in lam.parts() {
                let f = f_ia_at_one(i, a);
                // f >= 0, so λ_i + f - 1 >= -1 only when λ_i = 0, which parts() skips
                let upper = BigInt::from(li) + &f - 1;
                let upper = usize::try_from(upper).map_err(|_| Error::Inconsistency("binomial overflow".into()))?;
                prod *= binomial(upper, li);
            }
            *slot = prod;
        }
        let one_minus_t = Poly::new(vec![BigInt::one(), -BigInt::one()]);
        let factor = one_minus_t.pow(n + 1);
        let out = Poly::new(series).mul_truncated(&factor, top);
        for k in n + 1..=top {
            if !out.coeff(k).is_zero() {
                return Err(Error::Inconsistency(format!("guard coefficient of t^{k} does not vanish for {lam}")));
            }
        }
        Ok(out.truncate(n))
    }
}

pub fn joint_gf(lam: &CycleType) -> Result<MasterGFResult> {
    GfEngine::new().joint_gf(lam)
}

pub fn eulerian_specialization(lam: &CycleType) -> Result<IntPoly> {
    GfEngine::new().eulerian_specialization(lam)
}

/// `M_W(-s, -r) = t^{-(1-α²)n/2} q^{-(1-α²)n²/4} E[t^d q^maj]` with
/// `t = e^{-s/√n}`, `q = e^{-r/n^{3/2}}`, for any real scalar.
///
/// `counts` is the class generating function and `total` its coefficient sum.
pub fn mgf_from_counts<T: Real + FromExact>(
    counts: &IntTQPoly,
    total: &BigInt,
    n: usize,
    alpha1: &BigRational,
    s: &T,
    r: &T,
) -> T {
    let nn = T::from_bigint(&BigInt::from(n));
    let sqrt_n = nn.sqrt();
    let t = (-(s.clone() / sqrt_n.clone())).exp();
    let q = (-(r.clone() / (nn.clone() * sqrt_n.clone()))).exp();
    let expectation = counts.evaluate_with(&t, &q, T::from_bigint) / T::from_bigint(total);
    let c = T::from_rational(&(BigRational::one() - alpha1 * alpha1));
    let half = T::from_rational(&BigRational::new(1.into(), 2.into()));
    let quarter = T::from_rational(&BigRational::new(1.into(), 4.into()));
    // log of the centering prefactor: (1-α²)(s√n/2 + r√n/4)
    let log_pref = c * sqrt_n * (s.clone() * half + r.clone() * quarter);
    expectation * log_pref.exp()
}

fn check_precision(digits: u32) -> Result<u32> {
    if !(bigfloat::MIN_DIGITS..=bigfloat::MAX_DIGITS).contains(&digits) {
        return Err(Error::Precision { requested: digits, min: bigfloat::MIN_DIGITS, max: bigfloat::MAX_DIGITS });
    }
    Ok(bigfloat::digits_to_bits(digits) + 32)
}

fn check_sr(s: f64, r: f64) -> Result<()> {
    if !(s.is_finite() && r.is_finite() && s > 0.0 && r > 0.0) {
        return Err(Error::InvalidInput(format!("s and r must be positive and finite, got s={s}, r={r}")));
    }
    Ok(())
}

/// [`mgf_from_counts`] at `digits` significant decimal digits for a precomputed generating function.
pub fn mgf_from_gf(gf: &MasterGFResult, s: f64, r: f64, digits: u32) -> Result<BigFloat> {
    check_sr(s, r)?;
    let prec = check_precision(digits)?;
    let lam = &gf.lam;
    let sb = BigFloat::from_f64_prec(s, prec).expect("finite");
    let rb = BigFloat::from_f64_prec(r, prec).expect("finite");
    let v = mgf_from_counts(&gf.counts(), &class_size(lam), lam.n(), &lam.alpha1(), &sb, &rb);
    Ok(v.with_prec(bigfloat::digits_to_bits(digits)))
}

/// Exact-distribution value of `M_{W_λ}(-s, -r)` to `digits` significant digits.
pub fn mgf_exact(lam: &CycleType, s: f64, r: f64, digits: u32) -> Result<BigFloat> {
    check_sr(s, r)?;
    check_precision(digits)?;
    mgf_from_gf(&joint_gf(lam)?, s, r, digits)
}

/// Checks `[a]_q^i − (i/2)[a]_q^{i/2} ≤ i·f_{i,a}(q) ≤ [a]_q^i` at a rational
/// `q ∈ [0, 1]`. The half-integer power is compared after squaring, so the
/// check is exact for odd `i` too.
pub fn necklace_bounds_hold(i: usize, a: usize, q: &BigRational) -> Result<bool> {
    if *q < BigRational::zero() || *q > BigRational::one() {
        return Err(Error::InvalidInput(format!("q must lie in [0, 1], got {q}")));
    }
    let b = crate::exactpoly::qbracket(a as i64, 1)?.evaluate(q);
    let bi = crate::scalar::powu(&b, i);
    let ifq = f_iaq(i, a)?.evaluate(q) * BigRational::from_integer(BigInt::from(i));
    if ifq > bi {
        return Ok(false);
    }
    // remaining: bi - ifq <= (i/2) b^{i/2}
    let gap = &bi - &ifq;
    if gap <= BigRational::zero() {
        return Ok(true);
    }
    let half_i = BigRational::new(BigInt::from(i), BigInt::from(2));
    Ok(&gap * &gap <= &half_i * &half_i * bi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn ct(s: &str) -> CycleType {
        s.parse().unwrap()
    }

    fn rp(v: &[i64]) -> QPoly {
        Poly::new(v.iter().map(|&x| ratio(x, 1)).collect())
    }

    fn ip(v: &[i64]) -> IntPoly {
        Poly::new(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Primitive words of length `i` over `a` letters, one representative per rotation class,
    /// weighted by `q^{Σ (x_k - 1)}`.
    fn necklace_oracle(i: usize, a: usize) -> IntPoly {
        let mut coeffs = vec![0i64; i * (a - 1) + 1];
        let total = a.pow(i as u32);
        for code in 0..total {
            let mut w = Vec::with_capacity(i);
            let mut c = code;
            for _ in 0..i {
                w.push(c % a);
                c /= a;
            }
            let rotations: Vec<Vec<usize>> =
                (0..i).map(|s| w[s..].iter().chain(w[..s].iter()).copied().collect()).collect();
            let primitive = (1..i).all(|s| rotations[s] != w);
            let canonical = rotations.iter().all(|r| &w <= r);
            if primitive && canonical {
                coeffs[w.iter().sum::<usize>()] += 1;
            }
        }
        ip(&coeffs)
    }

    #[test]
    fn f_iaq_examples() {
        for a in [1, 2, 5] {
            assert_eq!(f_iaq(1, a).unwrap(), crate::exactpoly::qbracket(a as i64, 1).unwrap());
        }
        assert_eq!(f_iaq(2, 2).unwrap(), rp(&[0, 1]));
        assert_eq!(f_iaq(2, 3).unwrap(), rp(&[0, 1, 1, 1]));
        assert!(f_iaq(0, 1).is_err());
    }

    #[test]
    fn f_iaq_matches_necklace_enumeration() {
        for i in 1..=6 {
            for a in 1..=4 {
                assert_eq!(f_iaq(i, a).unwrap(), necklace_oracle(i, a).to_rational(), "i={i} a={a}");
            }
        }
    }

    #[test]
    fn f_iaq_coefficients_are_nonnegative_integers() {
        for i in 1..=10 {
            for a in 1..=10 {
                let f = f_iaq(i, a).unwrap().to_integer().expect("integer coefficients");
                assert!(f.coeffs().iter().all(|c| !c.is_negative()), "i={i} a={a}");
                assert_eq!(f.coeff_sum(), f_ia_at_one(i, a));
            }
        }
    }

    #[test]
    fn necklace_count_examples() {
        assert_eq!(necklace_count(&[1, 1]).unwrap(), BigInt::from(1));
        assert_eq!(necklace_count(&[2]).unwrap(), BigInt::from(0));
        assert_eq!(necklace_count(&[1, 1, 1]).unwrap(), BigInt::from(2));
        assert_eq!(necklace_count(&[1]).unwrap(), BigInt::from(1));
        assert!(necklace_count(&[]).is_err());
        assert!(necklace_count(&[0, 0]).is_err());
    }

    #[test]
    fn j_ima_examples() {
        assert_eq!(j_ima(2, 1, 2).unwrap(), BigInt::from(1));
        for a in 1..=4 {
            for m in 0..=6 {
                let want = if m < a { 1 } else { 0 };
                assert_eq!(j_ima(1, m, a).unwrap(), BigInt::from(want), "m={m} a={a}");
            }
        }
        let series = Poly::new((0..=3).map(|m| j_ima(3, m, 2).unwrap()).collect());
        assert_eq!(series.to_rational(), f_iaq(3, 2).unwrap());
        assert!(j_ima(3, 10, 2).unwrap().is_zero());
    }

    fn xvars(vals: &[&[i64]]) -> BTreeMap<usize, QPoly> {
        vals.iter().enumerate().map(|(k, v)| (k + 1, rp(v))).collect()
    }

    #[test]
    fn cycle_index_small_sizes() {
        // x1 = 2 + q, x2 = q^2, x3 = 3
        let x = xvars(&[&[2, 1], &[0, 0, 1], &[3]]);
        assert_eq!(cycle_index_expectation(1, &x).unwrap(), x[&1]);
        let want2 = (&x[&1].pow(2) + &x[&2]).scale(&ratio(1, 2));
        assert_eq!(cycle_index_expectation(2, &x).unwrap(), want2);
        let want3 = (&(&x[&1].pow(3) + &(&x[&1] * &x[&2]).scale(&ratio(3, 1))) + &x[&3].scale(&ratio(2, 1)))
            .scale(&ratio(1, 6));
        assert_eq!(cycle_index_expectation(3, &x).unwrap(), want3);
        assert_eq!(cycle_index_expectation(0, &x).unwrap(), QPoly::one());
        assert_eq!(cycle_index_expectation(4, &x), Err(Error::MissingVariable(4)));
    }

    #[test]
    fn cycle_index_recurrence_matches_partition_sum() {
        let xs: Vec<IntPoly> = (1..=7).map(|k| ip(&[k as i64, 1, (k % 3) as i64])).collect();
        let map: BTreeMap<usize, QPoly> = xs.iter().enumerate().map(|(k, p)| (k + 1, p.to_rational())).collect();
        for size in 0..=7 {
            let scaled = cycle_index_scaled(size, &xs, 1000).unwrap();
            let direct = cycle_index_expectation(size, &map).unwrap();
            let fact = BigRational::from_integer(factorial(size));
            assert_eq!(scaled.to_rational(), direct.scale(&fact), "size={size}");
        }
    }

    fn gf_of(terms: &[(usize, usize, i64)]) -> TQPoly {
        let mut g = TQPoly::zero();
        for &(a, b, c) in terms {
            g.add_term(a, b, ratio(c, 1));
        }
        g
    }

    #[test]
    fn joint_gf_examples() {
        assert_eq!(joint_gf(&ct("1^1")).unwrap().gf, gf_of(&[(1, 0, 1)]));
        assert_eq!(joint_gf(&ct("2^1")).unwrap().gf, gf_of(&[(2, 1, 1)]));
        assert_eq!(joint_gf(&ct("3^1")).unwrap().gf, gf_of(&[(2, 1, 1), (2, 2, 1)]));
        assert!(joint_gf(&CycleType::identity(0)).is_err());
    }

    #[test]
    fn joint_gf_per_a_diagnostics() {
        let res = joint_gf(&ct("3^1")).unwrap();
        assert_eq!(res.per_a.len(), 3);
        // single 3-cycle: P_a = f_{3,a}
        for (a, p) in res.per_a.iter().enumerate() {
            assert_eq!(p, &f_iaq(3, a + 1).unwrap().truncate(degree_cap(3)));
        }
    }

    #[test]
    fn eulerian_examples() {
        assert_eq!(eulerian_specialization(&ct("1^2")).unwrap(), ip(&[0, 1]));
        assert_eq!(eulerian_specialization(&ct("3^1")).unwrap(), ip(&[0, 0, 2]));
        // transpositions of S_3: 132 and 213 have one descent, 321 has two
        assert_eq!(eulerian_specialization(&ct("1^1 2^1")).unwrap(), ip(&[0, 0, 2, 1]));
    }

    #[test]
    fn mgf_exact_small_classes() {
        let v = mgf_exact(&ct("1^1"), 0.7, 1.3, 30).unwrap();
        assert!((v.to_f64() - (-0.7f64).exp()).abs() < 1e-15);
        let v = mgf_exact(&ct("2^1"), 1.0, 2.0, 30).unwrap();
        assert!((v.to_f64() - (-1.0 / 2f64.sqrt()).exp()).abs() < 1e-15);
        let v = mgf_exact(&CycleType::ncycle(8), 1.0, 1.0, 30).unwrap().to_f64();
        assert!(v > 0.0 && (v - (7.0f64 / 72.0).exp()).abs() < 0.25, "{v}");
    }

    #[test]
    fn mgf_exact_rejects_bad_arguments() {
        assert!(matches!(mgf_exact(&ct("2^1"), 1.0, 1.0, 5), Err(Error::Precision { .. })));
        assert!(matches!(mgf_exact(&ct("2^1"), -1.0, 1.0, 30), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn mgf_generic_scalar_agrees_with_bigfloat() {
        let res = joint_gf(&ct("1^2 3^2")).unwrap();
        let lam = &res.lam;
        let f = mgf_from_counts(&res.counts(), &class_size(lam), lam.n(), &lam.alpha1(), &0.8f64, &1.7f64);
        let b = mgf_from_gf(&res, 0.8, 1.7, 40).unwrap();
        assert!((f - b.to_f64()).abs() < 1e-13 * f.abs());
    }
}
