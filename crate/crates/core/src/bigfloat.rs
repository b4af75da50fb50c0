//! Fixed-precision binary floating point on top of `BigInt`.
//!
//! A value is `mant * 2^exp` with `|mant| < 2^prec`. Every operation rounds
//! its result to the larger precision of its operands (round half away from
//! zero). This is enough for evaluating degree-~500 polynomials with
//! nonnegative coefficients and a handful of `exp`/`sqrt` calls at 30+
//! significant digits; it is not a general MPFR replacement.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Decimal digits used when none is specified.
pub const DEFAULT_DIGITS: u32 = 30;
/// Smallest accepted working precision (the CLI prints 17 digits).
pub const MIN_DIGITS: u32 = 17;
/// Largest accepted working precision.
pub const MAX_DIGITS: u32 = 2000;

static DEFAULT_PREC_BITS: AtomicU32 = AtomicU32::new(0);

/// Bits needed for `digits` significant decimal digits, plus 16 guard bits.
pub fn digits_to_bits(digits: u32) -> u32 {
    ((digits as f64) * std::f64::consts::LOG2_10).ceil() as u32 + 16
}

/// Sets the precision used by constructors that take none (`One`, `FromPrimitive`).
pub fn set_default_digits(digits: u32) {
    DEFAULT_PREC_BITS.store(digits_to_bits(digits), AtomicOrdering::Relaxed);
}

pub fn default_prec_bits() -> u32 {
    match DEFAULT_PREC_BITS.load(AtomicOrdering::Relaxed) {
        0 => digits_to_bits(DEFAULT_DIGITS),
        b => b,
    }
}

#[derive(Clone)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

fn bits(v: &BigInt) -> i64 {
    v.bits() as i64
}

/// Rounds `v / 2^shift` half away from zero.
fn shr_round(v: &BigInt, shift: u64) -> BigInt {
    if shift == 0 {
        return v.clone();
    }
    let mag = v.magnitude();
    let half = num_bigint::BigUint::one() << (shift - 1);
    let r = (mag + half) >> shift;
    BigInt::from_biguint(if v.is_negative() { Sign::Minus } else { Sign::Plus }, r)
}

impl BigFloat {
    pub fn zero_with_prec(prec: u32) -> Self {
        BigFloat { mant: BigInt::zero(), exp: 0, prec }
    }

    fn new(mant: BigInt, exp: i64, prec: u32) -> Self {
        let mut v = BigFloat { mant, exp, prec };
        v.normalize();
        v
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let excess = bits(&self.mant) - self.prec as i64;
        if excess > 0 {
            self.mant = shr_round(&self.mant, excess as u64);
            self.exp += excess;
            // rounding may carry into a new top bit
            if bits(&self.mant) > self.prec as i64 {
                self.mant >>= 1;
                self.exp += 1;
            }
        }
        // strip trailing zero bits so equal values share a representation
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Rounds to a new precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        BigFloat::new(self.mant.clone(), self.exp, prec)
    }

    pub fn from_bigint_prec(v: BigInt, prec: u32) -> Self {
        BigFloat::new(v, 0, prec)
    }

    pub fn from_bigint(v: BigInt) -> Self {
        BigFloat::from_bigint_prec(v, default_prec_bits())
    }

    pub fn from_i64_prec(v: i64, prec: u32) -> Self {
        BigFloat::new(BigInt::from(v), 0, prec)
    }

    /// Exact conversion of a finite `f64` (then rounded to `prec`).
    pub fn from_f64_prec(v: f64, prec: u32) -> Option<Self> {
        if !v.is_finite() {
            return None;
        }
        let (m, e, s) = v.integer_decode();
        let mant = BigInt::from(m) * BigInt::from(s);
        Some(BigFloat::new(mant, e as i64, prec))
    }

    pub fn from_rational_prec(v: &BigRational, prec: u32) -> Self {
        let n = BigFloat::from_bigint_prec(v.numer().clone(), prec + 8);
        let d = BigFloat::from_bigint_prec(v.denom().clone(), prec + 8);
        (n / d).with_prec(prec)
    }

    pub fn from_rational(v: &BigRational) -> Self {
        BigFloat::from_rational_prec(v, default_prec_bits())
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        BigFloat { mant: self.mant.abs(), exp: self.exp, prec: self.prec }
    }

    /// Exponent `e` with `|self| < 2^e`; `i64::MIN` for zero.
    fn top(&self) -> i64 {
        if self.mant.is_zero() {
            i64::MIN
        } else {
            self.exp + bits(&self.mant)
        }
    }

    /// Multiplies by `2^k` exactly.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.mant.is_zero() {
            return self.clone();
        }
        BigFloat { mant: self.mant.clone(), exp: self.exp + k, prec: self.prec }
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of a negative BigFloat");
        if self.mant.is_zero() {
            return self.clone();
        }
        let want = 2 * self.prec as i64 + 4;
        let mut shift = (want - bits(&self.mant)).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.mant << (shift as u64);
        let r = m.sqrt();
        BigFloat::new(r, (self.exp - shift) / 2, self.prec)
    }

    pub fn exp(&self) -> Self {
        let prec = self.prec;
        if self.mant.is_zero() {
            return BigFloat::from_i64_prec(1, prec);
        }
        // exp(x) = exp(x / 2^k)^(2^k) with |x / 2^k| < 2^-12
        let k = (self.top() + 12).max(0);
        let work = prec + k as u32 + 24;
        let y = self.with_prec(work).mul_pow2(-k);
        let one = BigFloat::from_i64_prec(1, work);
        let mut sum = one.clone();
        let mut term = one;
        let tiny = -(work as i64) - 4;
        for i in 1u32.. {
            term = &(&term * &y) / &BigFloat::from_i64_prec(i as i64, work);
            if term.mant.is_zero() || term.top() < tiny {
                break;
            }
            sum = &sum + &term;
        }
        for _ in 0..k {
            sum = &sum * &sum;
        }
        sum.with_prec(prec)
    }

    /// `self^e` for a nonnegative integer exponent.
    pub fn powu(&self, e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = BigFloat::from_i64_prec(1, self.prec);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let b = bits(&self.mant);
        let shift = (b - 62).max(0);
        let m = shr_round(&self.mant, shift as u64).to_i64().unwrap_or(0) as f64;
        let mut e = self.exp + shift;
        let mut v = m;
        // scale in steps that stay inside the f64 exponent range
        while e > 0 {
            let step = e.min(1000);
            v *= 2f64.powi(step as i32);
            e -= step;
        }
        while e < 0 {
            let step = (-e).min(1000);
            v /= 2f64.powi(step as i32);
            e += step;
        }
        v
    }

    /// Scientific notation with `digits` significant decimal digits, e.g. `1.0212e0`.
    pub fn to_sci_string(&self, digits: u32) -> String {
        if self.mant.is_zero() {
            return "0".to_string();
        }
        let digits = digits.max(1);
        let approx = self.abs().top() as f64 * std::f64::consts::LOG10_2;
        let mut e10 = approx.floor() as i64;
        loop {
            let scaled = self.scaled_decimal(digits as i64 - 1 - e10);
            let s = scaled.to_string();
            if s.len() as u32 > digits {
                e10 += 1;
                continue;
            }
            if (s.len() as u32) < digits {
                e10 -= 1;
                continue;
            }
            let sign = if self.is_negative() { "-" } else { "" };
            let (head, tail) = s.split_at(1);
            return if tail.is_empty() {
                format!("{sign}{head}e{e10}")
            } else {
                format!("{sign}{head}.{tail}e{e10}")
            };
        }
    }

    /// `round(|self| * 10^k)` as an integer.
    fn scaled_decimal(&self, k: i64) -> BigInt {
        let mut num = self.mant.abs();
        let mut den = BigInt::one();
        let ten = BigInt::from(10);
        if k >= 0 {
            num *= num_traits::pow(ten, k as usize);
        } else {
            den *= num_traits::pow(ten, (-k) as usize);
        }
        if self.exp >= 0 {
            num <<= self.exp as u64;
        } else {
            den <<= (-self.exp) as u64;
        }
        (&num * 2 + &den) / (&den * 2)
    }
}

impl fmt::Debug for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigFloat({})", self.to_sci_string(20))
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().map(|p| p as u32 + 1).unwrap_or(17);
        f.write_str(&self.to_sci_string(digits))
    }
}

impl<'a> Add<&'a BigFloat> for &'a BigFloat {
    type Output = BigFloat;
    fn add(self, rhs: &BigFloat) -> BigFloat {
        let prec = self.prec.max(rhs.prec);
        if rhs.mant.is_zero() {
            return self.with_prec(prec);
        }
        if self.mant.is_zero() {
            return rhs.with_prec(prec);
        }
        // a summand more than prec+2 binary orders below the other cannot affect rounding
        let gap = self.top() - rhs.top();
        if gap > prec as i64 + 2 {
            return self.with_prec(prec);
        }
        if -gap > prec as i64 + 2 {
            return rhs.with_prec(prec);
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << ((self.exp - e) as u64);
        let b = &rhs.mant << ((rhs.exp - e) as u64);
        BigFloat::new(a + b, e, prec)
    }
}

impl<'a> Sub<&'a BigFloat> for &'a BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: &BigFloat) -> BigFloat {
        self + &(-rhs.clone())
    }
}

impl<'a> Mul<&'a BigFloat> for &'a BigFloat {
    type Output = BigFloat;
    fn mul(self, rhs: &BigFloat) -> BigFloat {
        BigFloat::new(&self.mant * &rhs.mant, self.exp + rhs.exp, self.prec.max(rhs.prec))
    }
}

impl<'a> Div<&'a BigFloat> for &'a BigFloat {
    type Output = BigFloat;
    fn div(self, rhs: &BigFloat) -> BigFloat {
        assert!(!rhs.mant.is_zero(), "BigFloat division by zero");
        let prec = self.prec.max(rhs.prec);
        if self.mant.is_zero() {
            return BigFloat::zero_with_prec(prec);
        }
        let shift = (prec as i64 + 2 + bits(&rhs.mant) - bits(&self.mant)).max(0);
        let q = (&self.mant << (shift as u64)) / &rhs.mant;
        BigFloat::new(q, self.exp - shift - rhs.exp, prec)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for BigFloat {
            type Output = BigFloat;
            fn $m(self, rhs: BigFloat) -> BigFloat {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat { mant: -self.mant, exp: self.exp, prec: self.prec }
    }
}

impl Zero for BigFloat {
    fn zero() -> Self {
        BigFloat::zero_with_prec(default_prec_bits())
    }
    fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }
}

impl One for BigFloat {
    fn one() -> Self {
        BigFloat::from_i64_prec(1, default_prec_bits())
    }
}

impl FromPrimitive for BigFloat {
    fn from_i64(n: i64) -> Option<Self> {
        Some(BigFloat::from_i64_prec(n, default_prec_bits()))
    }
    fn from_u64(n: u64) -> Option<Self> {
        Some(BigFloat::from_bigint(BigInt::from(n)))
    }
    fn from_f64(n: f64) -> Option<Self> {
        BigFloat::from_f64_prec(n, default_prec_bits())
    }
}

impl Ord for BigFloat {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.mant.sign(), other.mant.sign());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == Sign::NoSign {
            return Ordering::Equal;
        }
        let by_mag = match self.top().cmp(&other.top()) {
            Ordering::Equal => {
                let e = self.exp.min(other.exp);
                let a = self.mant.magnitude() << ((self.exp - e) as u64);
                let b = other.mant.magnitude() << ((other.exp - e) as u64);
                a.cmp(&b)
            }
            o => o,
        };
        if sa == Sign::Minus {
            by_mag.reverse()
        } else {
            by_mag
        }
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for BigFloat {}
