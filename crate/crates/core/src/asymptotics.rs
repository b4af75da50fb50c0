//! The limiting covariance `Σ_α`, the m.g.f. target, and the numeric pieces
//! of the Laplace-method proof: the `F`/`G` weights, the beta-integral common
//! factor, the `L` decomposition, the dominating function and the Gaussian
//! integral identity.

use serde::Serialize;
use std::f64::consts::{E, PI};

use crate::combinatorics::{for_each_partition, CycleType};
use crate::error::{Error, Result};
use crate::genfun;
use crate::montecarlo;
use crate::quadrature::{self, DEFAULT_ABS_TOL, DEFAULT_REL_TOL};
use crate::scalar::{Field, Scalar};

/// Symmetric 2×2 matrix `[[s11, s12], [s12, s22]]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CovMatrix2<T> {
    pub s11: T,
    pub s12: T,
    pub s22: T,
}

impl<T: Scalar> CovMatrix2<T> {
    pub fn new(s11: T, s12: T, s22: T) -> Self {
        CovMatrix2 { s11, s12, s22 }
    }

    pub fn det(&self) -> T {
        self.s11.clone() * self.s22.clone() - self.s12.clone() * self.s12.clone()
    }

    /// `xᵀ Σ x` for `x = (s, r)`.
    pub fn quadform(&self, s: &T, r: &T) -> T {
        let two = T::one() + T::one();
        s.clone() * s.clone() * self.s11.clone()
            + two * s.clone() * r.clone() * self.s12.clone()
            + r.clone() * r.clone() * self.s22.clone()
    }
}

impl CovMatrix2<f64> {
    pub fn correlation(&self) -> f64 {
        self.s12 / (self.s11 * self.s22).sqrt()
    }
}

/// `Σ_α`: `s11 = (1 − 4α³ + 3α⁴)/12`, `s12 = s11/2`, `s22 = (1 − α³)/36`.
pub fn sigma<T: Field>(alpha: &T) -> Result<CovMatrix2<T>> {
    if !(*alpha >= T::zero() && *alpha <= T::one()) {
        return Err(Error::InvalidInput(format!("alpha must lie in [0, 1], got {alpha:?}")));
    }
    let c = |v: i64| T::from_i64(v).expect("small constant");
    let a3 = alpha.clone() * alpha.clone() * alpha.clone();
    let a4 = a3.clone() * alpha.clone();
    let s11 = (T::one() - c(4) * a3.clone() + c(3) * a4) / c(12);
    let s12 = s11.clone() / c(2);
    let s22 = (T::one() - a3) / c(36);
    Ok(CovMatrix2 { s11, s12, s22 })
}

pub fn quadform<T: Scalar>(m: &CovMatrix2<T>, s: &T, r: &T) -> T {
    m.quadform(s, r)
}

/// `e^{½ Σ_α(s, r)}`, the m.g.f. of the limit law at `(−s, −r)`.
pub fn target_mgf(alpha: f64, s: f64, r: f64) -> Result<f64> {
    Ok((0.5 * sigma(&alpha)?.quadform(&s, &r)).exp())
}

/// The normalized pair `W = ((d − (1−α²)n/2)/√n, (maj − (1−α²)n²/4)/n^{3/2})`.
#[allow(non_snake_case)]
pub fn normalize_W(lam: &CycleType, d: usize, maj: usize) -> Result<(f64, f64)> {
    if lam.n() == 0 {
        return Err(Error::InvalidInput("normalization needs n >= 1".into()));
    }
    Ok(montecarlo::Normalization::of(lam).apply(d, maj))
}

/// `f_n(z) = (1 + z/√n)₊ⁿ e^{−√n z}`.
pub fn f_dominating(n: usize, z: f64) -> f64 {
    let rn = (n as f64).sqrt();
    let base = 1.0 + z / rn;
    if base <= 0.0 {
        return 0.0;
    }
    (n as f64 * (z / rn).ln_1p() - rn * z).exp()
}

/// Default `ε`, chosen so that `2e(s+r)ε/r = 1/2`.
pub fn default_epsilon(s: f64, r: f64) -> f64 {
    r / (4.0 * E * (s + r))
}

/// Cap on `λ₁` for the partition sum in [`g`].
pub const G_PARTITION_CAP: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AsymptoticParams {
    pub n: usize,
    pub s: f64,
    pub r: f64,
    pub delta: f64,
    pub t: f64,
    pub q: f64,
    pub epsilon: f64,
    pub theta: f64,
}

impl AsymptoticParams {
    /// `epsilon = None` selects [`default_epsilon`].
    pub fn new(n: usize, s: f64, r: f64, epsilon: Option<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        if !(s.is_finite() && r.is_finite() && s > 0.0 && r > 0.0) {
            return Err(Error::InvalidInput(format!("s and r must be positive and finite, got s={s}, r={r}")));
        }
        let epsilon = epsilon.unwrap_or_else(|| default_epsilon(s, r));
        if !(epsilon > 0.0 && 2.0 * E * (s + r) * epsilon / r < 1.0) {
            return Err(Error::InvalidInput(format!("epsilon = {epsilon} must satisfy 0 < 2e(s+r)ε/r < 1")));
        }
        let nf = n as f64;
        let delta = r / (nf * nf.sqrt());
        Ok(AsymptoticParams {
            n,
            s,
            r,
            delta,
            t: (-s / nf.sqrt()).exp(),
            q: (-delta).exp(),
            epsilon,
            theta: s / (s + r),
        })
    }

    /// Exponent `sn/r` of `u` (plus one) in the beta integrand.
    pub fn beta_shape(&self) -> f64 {
        self.s * self.n as f64 / self.r
    }
}

/// `F_k(u) = δ^{k−1}/k² · (1 − u^k)/(1 − u)^k`.
pub fn f_k(params: &AsymptoticParams, k: usize, u: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if !(0.0..1.0).contains(&u) {
        return Err(Error::InvalidInput(format!("F_k needs 0 <= u < 1, got {u}")));
    }
    if k == 1 {
        return Ok(1.0);
    }
    let kf = k as f64;
    let log = (kf - 1.0) * params.delta.ln() - 2.0 * kf.ln() + (-u.powi(k as i32)).ln_1p() - kf * (-u).ln_1p();
    Ok(log.exp())
}

/// `G(u) = t^{α²n/2} q^{α²n²/4} λ₁! Σ_{μ ⊢ λ₁} ∏_k F_k(u)^{μ_k}/μ_k!`, summed
/// over the partitions of `λ₁` directly.
pub fn g(params: &AsymptoticParams, lam: &CycleType, u: f64) -> Result<f64> {
    let l = lam.fixed_points();
    if lam.n() != params.n {
        return Err(Error::InvalidInput(format!("class has n = {}, parameters have n = {}", lam.n(), params.n)));
    }
    if l == 0 {
        if !(0.0..1.0).contains(&u) {
            return Err(Error::InvalidInput(format!("G needs 0 <= u < 1, got {u}")));
        }
        return Ok(1.0);
    }
    if l > G_PARTITION_CAP {
        return Err(Error::CapExceeded { what: "fixed points", got: l, cap: G_PARTITION_CAP });
    }
    let fs = (1..=l).map(|k| f_k(params, k, u)).collect::<Result<Vec<f64>>>()?;
    // λ₁! ∏ 1/μ_k! is carried as a log to keep every term in range
    let lnfact: Vec<f64> = (0..=l).scan(0.0, |acc, j| {
        if j > 0 {
            *acc += (j as f64).ln();
        }
        Some(*acc)
    }).collect();
    let lnf: Vec<f64> = fs.iter().map(|f| f.ln()).collect();
    let mut sum = 0.0;
    for_each_partition(l, |mult| {
        let mut lg = lnfact[l];
        for (k, &m) in mult.iter().enumerate().skip(1) {
            if m > 0 {
                lg += m as f64 * lnf[k - 1] - lnfact[m];
            }
        }
        sum += lg.exp();
    });
    let nf = params.n as f64;
    let a = l as f64 / nf;
    let pref = params.t.ln() * a * a * nf / 2.0 + params.q.ln() * a * a * nf * nf / 4.0;
    Ok(pref.exp() * sum)
}

/// `ln B(sn/r, n+1) = ln ∫₀¹ u^{sn/r−1}(1−u)^n du`.
pub fn ln_beta_denominator(params: &AsymptoticParams) -> f64 {
    let x = params.beta_shape();
    let mut acc = -x.ln();
    for j in 1..=params.n {
        let jf = j as f64;
        acc += jf.ln() - (x + jf).ln();
    }
    acc
}

/// `∫₀¹ u^{sn/r−1}(1−u)^n du = Γ(sn/r) n! / Γ(sn/r + n + 1)`.
pub fn beta_denominator(params: &AsymptoticParams) -> f64 {
    let x = params.beta_shape();
    let mut acc = 1.0 / x;
    for j in 1..=params.n {
        let jf = j as f64;
        acc *= jf / (x + jf);
    }
    acc
}

/// Integral of `u^{x−1}(1−u)^n w(u)` over `[0, upper]`, returned as
/// `(scaled, log_scale)` with value `scaled · e^{log_scale}`.
///
/// For `x ≥ 1` the integrand is divided by its peak value so the absolute
/// tolerance stays meaningful; for `x < 1` the substitution `u = v^{1/x}`
/// removes the endpoint singularity.
fn beta_weighted<W: Fn(f64) -> f64>(x: f64, n: usize, upper: f64, w: W) -> Result<(f64, f64)> {
    let nf = n as f64;
    if x < 1.0 {
        let vmax = upper.powf(x);
        let f = |v: f64| {
            let u = v.powf(1.0 / x);
            (nf * (-u).ln_1p()).exp() * w(u) / x
        };
        let res = quadrature::integrate(f, 0.0, vmax, DEFAULT_ABS_TOL, DEFAULT_REL_TOL)?;
        return Ok((res.value, 0.0));
    }
    let peak = (x - 1.0) / (x - 1.0 + nf);
    let log_g = |u: f64| {
        let a = if x == 1.0 { 0.0 } else { (x - 1.0) * u.ln() };
        a + nf * (-u).ln_1p()
    };
    let log_peak = log_g(peak);
    let width = (peak * (1.0 - peak) / (x + nf)).sqrt();
    let mut points = vec![0.0];
    for p in [peak - 8.0 * width, peak, peak + 8.0 * width] {
        if p > *points.last().unwrap() && p < upper {
            points.push(p);
        }
    }
    points.push(upper);
    let f = |u: f64| (log_g(u) - log_peak).exp() * w(u);
    let res = quadrature::integrate_pieces(f, &points, DEFAULT_ABS_TOL, DEFAULT_REL_TOL)?;
    Ok((res.value, log_peak))
}

/// [`beta_denominator`] by adaptive quadrature.
pub fn beta_quadrature(params: &AsymptoticParams) -> Result<f64> {
    let (v, ls) = beta_weighted(params.beta_shape(), params.n, 1.0, |_| 1.0)?;
    Ok(v * ls.exp())
}

/// Relative gap between the closed form and quadrature of the beta integral,
/// compared on the log scale so tiny values do not underflow.
pub fn beta_relative_gap(params: &AsymptoticParams) -> Result<f64> {
    let (v, ls) = beta_weighted(params.beta_shape(), params.n, 1.0, |_| 1.0)?;
    Ok((v.ln() + ls - ln_beta_denominator(params)).exp_m1().abs())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LDecomposition {
    pub epsilon: f64,
    /// `√n (2e(s+r)ε/r)^{n+1}`
    pub l_small_bound: f64,
    /// `∫₀^{e^{−ε}} u^{sn/r−1}(1−u)^n G(u) du / ∫₀¹ u^{sn/r−1}(1−u)^n du`
    pub l_large_numeric: f64,
}

pub fn l_decomposition(params: &AsymptoticParams, lam: &CycleType) -> Result<LDecomposition> {
    if lam.n() != params.n {
        return Err(Error::InvalidInput(format!("class has n = {}, parameters have n = {}", lam.n(), params.n)));
    }
    if lam.fixed_points() > G_PARTITION_CAP {
        return Err(Error::CapExceeded { what: "fixed points", got: lam.fixed_points(), cap: G_PARTITION_CAP });
    }
    let (s, r, eps, n) = (params.s, params.r, params.epsilon, params.n);
    let l_small_bound = (n as f64).sqrt() * (2.0 * E * (s + r) * eps / r).powi(n as i32 + 1);
    let x = params.beta_shape();
    // G only fails outside [0, 1), which the integration range excludes
    let (num, ls_num) = beta_weighted(x, n, (-eps).exp(), |u| g(params, lam, u).unwrap_or(f64::NAN))?;
    let (den, ls_den) = beta_weighted(x, n, 1.0, |_| 1.0)?;
    Ok(LDecomposition { epsilon: eps, l_small_bound, l_large_numeric: num / den * (ls_num - ls_den).exp() })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GaussianIdentity {
    pub quadrature: f64,
    pub closed_form: f64,
}

impl GaussianIdentity {
    pub fn relative_gap(&self) -> f64 {
        (self.quadrature / self.closed_form - 1.0).abs()
    }
}

/// `∫ e^{−z²/2 + (α²/2)√(s(r+s)) z − (α³/72)(r² + 12rs + 12s²)} dz` by quadrature,
/// against `√(2π) e^{½(Σ_α(s,r) − Σ₀(s,r))}`.
pub fn gaussian_identity_check(alpha: f64, s: f64, r: f64) -> Result<GaussianIdentity> {
    if !(s > 0.0 && r > 0.0 && s.is_finite() && r.is_finite()) {
        return Err(Error::InvalidInput(format!("s and r must be positive and finite, got s={s}, r={r}")));
    }
    let sa = sigma(&alpha)?.quadform(&s, &r);
    let s0 = sigma(&0.0)?.quadform(&s, &r);
    let b = alpha * alpha / 2.0 * (s * (r + s)).sqrt();
    let c = alpha.powi(3) / 72.0 * (r * r + 12.0 * r * s + 12.0 * s * s);
    let f = |z: f64| (-z * z / 2.0 + b * z - c).exp();
    let closed_form = (2.0 * PI).sqrt() * (0.5 * (sa - s0)).exp();
    let res = quadrature::integrate_pieces(f, &[b - 40.0, b, b + 40.0], DEFAULT_ABS_TOL, DEFAULT_REL_TOL)?;
    Ok(GaussianIdentity { quadrature: res.value, closed_form })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CommonFactor {
    pub n: usize,
    /// `ln((1/n!) ∏_{j=0}^n (1 − t q^j))`
    pub ln_exact: f64,
    /// `ln(t^{n/2} q^{n²/4} e^{½Σ₀(s,r)} δ^{n+1} / B(sn/r, n+1))`
    pub ln_approx: f64,
    pub rel_err: f64,
}

/// Compares the common factor of the generating function with its Laplace approximation.
pub fn common_factor_check(params: &AsymptoticParams) -> Result<CommonFactor> {
    let n = params.n;
    let nf = n as f64;
    let ln_t = -params.s / nf.sqrt();
    let mut ln_exact = 0.0;
    for j in 0..=n {
        let x = -(ln_t - j as f64 * params.delta);
        ln_exact += (-(-x).exp_m1()).ln();
    }
    ln_exact -= crate::combinatorics::factorial_f64(n).ln();
    let half_sigma = 0.5 * sigma(&0.0)?.quadform(&params.s, &params.r);
    let ln_approx = nf / 2.0 * ln_t - nf * nf / 4.0 * params.delta + half_sigma + (nf + 1.0) * params.delta.ln()
        - ln_beta_denominator(params);
    Ok(CommonFactor { n, ln_exact, ln_approx, rel_err: (ln_exact - ln_approx).exp_m1().abs() })
}

/// Parses `ncycle:8,16` | `fpf-involution:100,400` | `identity:5,10` | `file:<path>`
/// (one cycle type per line; blank lines and `#` comments ignored).
pub fn parse_family(spec: &str) -> Result<Vec<CycleType>> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("family `{spec}` should look like `ncycle:8,16,24`")))?;
    let sizes = || -> Result<Vec<usize>> {
        rest.split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad size `{x}` in family `{spec}`"))))
            .collect()
    };
    let family: Vec<CycleType> = match kind.trim() {
        "ncycle" => sizes()?.into_iter().map(CycleType::ncycle).collect(),
        "identity" => sizes()?.into_iter().map(CycleType::identity).collect(),
        "fpf-involution" => sizes()?.into_iter().map(CycleType::fpf_involution).collect::<Result<_>>()?,
        "file" => {
            let text = std::fs::read_to_string(rest)
                .map_err(|e| Error::InvalidInput(format!("cannot read family file `{rest}`: {e}")))?;
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::parse)
                .collect::<Result<_>>()?
        }
        other => return Err(Error::Parse(format!("unknown family `{other}`; use ncycle, fpf-involution, identity or file"))),
    };
    if family.is_empty() || family.iter().any(|l| l.n() == 0) {
        return Err(Error::InvalidInput(format!("family `{spec}` needs classes with n >= 1")));
    }
    if family.windows(2).any(|w| w[0].n() > w[1].n()) {
        return Err(Error::InvalidInput(format!("family `{spec}` must be ordered by increasing n")));
    }
    Ok(family)
}

/// How the m.g.f. of each class in a convergence report is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Budget {
    /// Classes up to this size use the exact generating function.
    pub exact_max_n: usize,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    pub digits: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { exact_max_n: 24, samples: 1_000_000, seed: 42, workers: 0, digits: crate::bigfloat::DEFAULT_DIGITS }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub lambda: CycleType,
    pub n: usize,
    pub alpha1: f64,
    /// `exact` or `sampled`
    pub source: &'static str,
    pub mgf: f64,
    /// Standard error of a sampled value; 0 for exact rows.
    pub std_error: f64,
    pub target: f64,
    pub abs_err: f64,
    pub err_times_n16: f64,
    /// The error grew from the previous row by more than twice the combined standard errors.
    pub growth: bool,
}

pub fn convergence_report(family: &[CycleType], s: f64, r: f64, budget: &Budget) -> Result<Vec<ConvergenceRow>> {
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(family.len());
    for lam in family {
        let n = lam.n();
        let (source, mgf, std_error) = if n <= budget.exact_max_n {
            ("exact", genfun::mgf_exact(lam, s, r, budget.digits)?.to_f64(), 0.0)
        } else {
            let st = montecarlo::run_sampling(lam, budget.samples, &[(s, r)], budget.seed, budget.workers)?;
            let p = &st.mgf_grid[0];
            ("sampled", p.mean(st.count), p.std_error(st.count))
        };
        let alpha1 = lam.alpha1_f64();
        let target = target_mgf(alpha1, s, r)?;
        let abs_err = (mgf - target).abs();
        let growth = rows
            .last()
            .is_some_and(|prev| abs_err > prev.abs_err + 2.0 * (std_error + prev.std_error));
        rows.push(ConvergenceRow {
            lambda: lam.clone(),
            n,
            alpha1,
            source,
            mgf,
            std_error,
            target,
            abs_err,
            err_times_n16: abs_err * (n as f64).powf(1.0 / 6.0),
            growth,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn ct(s: &str) -> CycleType {
        s.parse().unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn sigma_examples() {
        let s0 = sigma(&BigRational::from_integer(0.into())).unwrap();
        assert_eq!(s0, CovMatrix2::new(ratio(1, 12), ratio(1, 24), ratio(1, 36)));
        assert_eq!(s0.quadform(&ratio(1, 1), &ratio(1, 1)), ratio(7, 36));
        let s1 = sigma(&ratio(1, 1)).unwrap();
        assert_eq!(s1, CovMatrix2::new(ratio(0, 1), ratio(0, 1), ratio(0, 1)));
        assert_eq!(sigma(&ratio(1, 2)).unwrap().s11, ratio(11, 192));
        assert!(sigma(&1.5f64).is_err());
        assert!(sigma(&-0.1f64).is_err());
        assert!(sigma(&f64::NAN).is_err());
        assert!(close(target_mgf(0.0, 1.0, 1.0).unwrap(), (7.0f64 / 72.0).exp(), 1e-15));
        assert!((target_mgf(0.0, 1.0, 1.0).unwrap() - 1.10212).abs() < 5e-5);
        assert!((sigma(&0.0f64).unwrap().correlation() - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn sigma_is_psd_on_a_grid() {
        for i in 0..=100 {
            let a = ratio(i, 100);
            let m = sigma(&a).unwrap();
            assert_eq!(&m.s12 + &m.s12, m.s11);
            let zero = ratio(0, 1);
            assert!(m.s11 >= zero && m.s22 >= zero && m.det() >= zero);
            if i < 100 {
                assert!(m.s11 > zero && m.s22 > zero);
            }
        }
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_W(&ct("1^1"), 1, 0).unwrap(), (1.0, 0.0));
        let (a, b) = normalize_W(&ct("2^1"), 2, 1).unwrap();
        assert!(close(a, 1.0 / 2f64.sqrt(), 1e-15) && b == 0.0);
        assert_eq!(normalize_W(&ct("4^1"), 1, 0).unwrap(), (-0.5, -0.5));
    }

    #[test]
    fn dominating_function_values() {
        assert_eq!(f_dominating(7, 0.0), 1.0);
        assert_eq!(f_dominating(1, -2.0), 0.0);
        assert!(close(f_dominating(4, 1.0), 1.5f64.powi(4) * (-2.0f64).exp(), 1e-14));
    }

    #[test]
    fn f_and_g_examples() {
        let p = AsymptoticParams::new(100, 1.0, 1.0, None).unwrap();
        assert_eq!(f_k(&p, 1, 0.3).unwrap(), 1.0);
        assert!(close(f_k(&p, 2, 0.0).unwrap(), p.delta / 4.0, 1e-14));
        assert!(close(f_k(&p, 2, 0.5).unwrap(), 7.5e-4, 1e-12));
        assert!(f_k(&p, 2, 1.0).is_err());
        assert_eq!(g(&p, &CycleType::ncycle(100), 0.4).unwrap(), 1.0);

        let lam = ct("1^1 99^1");
        let pref = p.t.powf(0.5 / 100.0) * p.q.powf(0.25);
        assert!(close(g(&p, &lam, 0.3).unwrap(), pref, 1e-14));
        let lam2 = ct("1^2 98^1");
        let u = 0.6;
        let direct = p.t.powf(4.0 / 200.0) * p.q.powf(1.0) * 2.0 * (0.5 + f_k(&p, 2, u).unwrap());
        assert!(close(g(&p, &lam2, u).unwrap(), direct, 1e-13));
        let big = CycleType::from_pairs(&[(1, 61), (39, 1)]).unwrap();
        assert!(matches!(g(&p, &big, 0.1), Err(Error::CapExceeded { .. })));
    }

    // Σ_{μ ⊢ l} ∏ x_k^{μ_k}/μ_k! is the z^l coefficient of exp(Σ x_k z^k)
    fn g_by_recurrence(p: &AsymptoticParams, l: usize, u: f64) -> f64 {
        let x: Vec<f64> = (1..=l).map(|k| f_k(p, k, u).unwrap()).collect();
        let mut h = vec![1.0f64];
        for m in 1..=l {
            let v: f64 = (1..=m).map(|k| k as f64 * x[k - 1] * h[m - k]).sum::<f64>() / m as f64;
            h.push(v);
        }
        let nf = p.n as f64;
        let a = l as f64 / nf;
        let fact: f64 = (1..=l).map(|j| j as f64).product();
        p.t.powf(a * a * nf / 2.0) * p.q.powf(a * a * nf * nf / 4.0) * fact * h[l]
    }

    #[test]
    fn g_matches_recurrence() {
        let p = AsymptoticParams::new(60, 1.0, 2.0, None).unwrap();
        for l in [1, 3, 7, 15, 25] {
            let lam = CycleType::from_pairs(&[(1, l), (60 - l, 1)]).unwrap();
            for u in [0.0, 0.3, 0.8, 0.95] {
                assert!(close(g(&p, &lam, u).unwrap(), g_by_recurrence(&p, l, u), 1e-11), "l={l} u={u}");
            }
        }
    }

    #[test]
    fn params_invariants() {
        let p = AsymptoticParams::new(16, 1.0, 1.0, None).unwrap();
        assert!((2.0 * E * 2.0 * p.epsilon - 0.5).abs() < 1e-15);
        assert!(p.q > 0.0 && p.q < 1.0 && p.t > 0.0 && p.t < 1.0 && p.theta == 0.5);
        assert!(AsymptoticParams::new(16, 1.0, 1.0, Some(0.1)).is_err());
        assert!(AsymptoticParams::new(16, -1.0, 1.0, None).is_err());
        assert!(AsymptoticParams::new(0, 1.0, 1.0, None).is_err());
    }

    #[test]
    fn beta_examples() {
        let b = |n, s, r| beta_denominator(&AsymptoticParams::new(n, s, r, None).unwrap());
        assert!(close(b(1, 1.0, 1.0), 0.5, 1e-15));
        assert!(close(b(2, 1.0, 1.0), 1.0 / 12.0, 1e-15));
        assert!(close(b(3, 2.0, 1.0), 1.0 / 504.0, 1e-15));
        for (n, s, r) in [(1, 1.0, 1.0), (1, 1.0, 2.0), (3, 2.0, 1.0), (50, 1.0, 2.0), (200, 2.0, 1.0)] {
            let p = AsymptoticParams::new(n, s, r, None).unwrap();
            assert!(beta_relative_gap(&p).unwrap() < 1e-10, "n={n}");
        }
        let p = AsymptoticParams::new(3, 2.0, 1.0, None).unwrap();
        assert!(close(beta_quadrature(&p).unwrap(), 1.0 / 504.0, 1e-10));
    }

    #[test]
    fn l_small_bound_example() {
        let p = AsymptoticParams::new(30, 1.0, 1.0, None).unwrap();
        let l = l_decomposition(&p, &CycleType::ncycle(30)).unwrap();
        assert!(close(l.l_small_bound, 30f64.sqrt() * 2f64.powi(-31), 1e-12));
        assert!(l.l_small_bound < 1e-8);
        assert!(l.l_large_numeric > 0.99 && l.l_large_numeric <= 1.0 + 1e-12, "{l:?}");
    }

    #[test]
    fn gaussian_identity_examples() {
        let g0 = gaussian_identity_check(0.0, 1.3, 0.7).unwrap();
        assert!(close(g0.closed_form, (2.0 * PI).sqrt(), 1e-15));
        assert!(g0.relative_gap() < 1e-8);
        let g1 = gaussian_identity_check(1.0, 1.0, 1.0).unwrap();
        assert!(close(g1.closed_form, (2.0 * PI).sqrt() * (-7.0f64 / 72.0).exp(), 1e-14));
        assert!(g1.relative_gap() < 1e-8);
        assert!(gaussian_identity_check(0.5, 1.0, 2.0).unwrap().relative_gap() < 1e-8);
    }

    #[test]
    fn family_parsing() {
        let f = parse_family("ncycle:8,16").unwrap();
        assert_eq!(f, vec![CycleType::ncycle(8), CycleType::ncycle(16)]);
        assert_eq!(parse_family("fpf-involution:4").unwrap()[0], ct("2^2"));
        assert!(parse_family("fpf-involution:5").is_err());
        assert!(parse_family("ncycle:16,8").is_err());
        assert!(parse_family("blob:3").is_err());
        assert!(parse_family("ncycle").is_err());
    }

    #[test]
    fn identity_family_closes_in() {
        let fam = parse_family("identity:4,16,64").unwrap();
        let b = Budget { exact_max_n: 4, samples: 10, ..Budget::default() };
        let rows = convergence_report(&fam, 1.0, 1.0, &b).unwrap();
        for row in &rows {
            assert!(close(row.mgf, (-1.0 / (row.n as f64).sqrt()).exp(), 1e-12));
            assert_eq!(row.target, 1.0);
        }
        assert_eq!(rows[0].source, "exact");
        assert_eq!(rows[2].source, "sampled");
        assert!(rows.iter().all(|r| !r.growth));
    }

    proptest! {
        #[test]
        fn dominating_inequalities(n in 1usize..10_000, m_frac in 0.0f64..1.0, z in -5.0f64..5.0) {
            let m = 1 + ((n - 1) as f64 * m_frac) as usize;
            let fz = f_dominating(n, z);
            if z < 0.0 {
                prop_assert!(fz <= (-z * z / 2.0).exp() * (1.0 + 1e-12));
            } else {
                prop_assert!(fz <= f_dominating(m, z) * (1.0 + 1e-12));
            }
        }

        #[test]
        fn target_is_lipschitz_in_alpha(a in 0.0f64..0.9999, s in 0.1f64..2.0, r in 0.1f64..2.0) {
            let h = 1e-4;
            let d = (target_mgf(a + h, s, r).unwrap() - target_mgf(a, s, r).unwrap()).abs();
            prop_assert!(d <= 10.0 * h);
        }
    }
}
