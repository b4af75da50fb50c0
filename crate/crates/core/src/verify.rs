//! Runnable invariant suites, one per module, reported as a pass/fail table.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::asymptotics::{self, AsymptoticParams};
use crate::combinatorics::{self, class_size, factorial, partitions_of, CycleType};
use crate::error::{Error, Result};
use crate::exactpoly::qbracket;
use crate::genfun::{self, GfEngine};
use crate::montecarlo;
use crate::oracle;
use crate::scalar::ratio;
use crate::{IntPoly, IntTQPoly, QPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Combinatorics,
    Exactpoly,
    Genfun,
    Oracle,
    Montecarlo,
    Asymptotics,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "combinatorics" => Suite::Combinatorics,
            "exactpoly" => Suite::Exactpoly,
            "genfun" => Suite::Genfun,
            "oracle" => Suite::Oracle,
            "montecarlo" => Suite::Montecarlo,
            "asymptotics" => Suite::Asymptotics,
            "all" => Suite::All,
            _ => {
                return Err(Error::Parse(format!(
                    "unknown suite `{s}`; use combinatorics, exactpoly, genfun, oracle, montecarlo, asymptotics or all"
                )))
            }
        })
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct VerifyConfig {
    /// Largest `n` for the exhaustive checks (clamped to 9).
    pub max_n: usize,
    pub samples: u64,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { max_n: 8, samples: 200_000, seed: 42 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn record(&mut self, suite: &'static str, name: impl Into<String>, outcome: Result<(bool, String)>) {
        let (passed, detail) = match outcome {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        self.checks.push(Check { suite, name: name.into(), passed, detail });
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.suite.len() + c.name.len() + 1).max().unwrap_or(0);
        for c in &self.checks {
            let label = format!("{}/{}", c.suite, c.name);
            writeln!(f, "{} {label:<width$}  {}", if c.passed { "PASS" } else { "FAIL" }, c.detail)?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        write!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> VerifyReport {
    let mut rep = VerifyReport::default();
    let cfg = VerifyConfig { max_n: cfg.max_n.clamp(1, oracle::FILTER_MAX_N), ..*cfg };
    let all = suite == Suite::All;
    if all || suite == Suite::Combinatorics {
        combinatorics_suite(&mut rep, &cfg);
    }
    if all || suite == Suite::Exactpoly {
        exactpoly_suite(&mut rep);
    }
    if all || suite == Suite::Genfun {
        genfun_suite(&mut rep, &cfg);
    }
    if all || suite == Suite::Oracle {
        oracle_suite(&mut rep, &cfg);
    }
    if all || suite == Suite::Montecarlo {
        montecarlo_suite(&mut rep, &cfg);
    }
    if all || suite == Suite::Asymptotics {
        asymptotics_suite(&mut rep);
    }
    rep
}

fn combinatorics_suite(rep: &mut VerifyReport, cfg: &VerifyConfig) {
    const S: &str = "combinatorics";
    rep.record(S, "class sizes sum to n! and divide it", (|| {
        for n in 1..=cfg.max_n {
            let nf = factorial(n);
            let mut total = BigInt::zero();
            for lam in partitions_of(n) {
                let c = class_size(&lam);
                if c < BigInt::one() || !(&nf % &c).is_zero() {
                    return Ok((false, format!("class {lam}")));
                }
                total += c;
            }
            if total != nf {
                return Ok((false, format!("n = {n}")));
            }
        }
        Ok((true, format!("n <= {}", cfg.max_n)))
    })());
    rep.record(S, "mobius sums over divisors", (|| {
        for i in 1..=1000i64 {
            let s: i32 = combinatorics::divisors(i)?.iter().map(|&d| combinatorics::mobius(d as i64)).sum::<Result<i32>>()?;
            if s != i32::from(i == 1) {
                return Ok((false, format!("i = {i}")));
            }
        }
        Ok((true, "i <= 1000".into()))
    })());
}

fn exactpoly_suite(rep: &mut VerifyReport) {
    const S: &str = "exactpoly";
    rep.record(S, "(1-q)[a]_q = 1-q^a", (|| {
        let one_minus_q = QPoly::new(vec![ratio(1, 1), ratio(-1, 1)]);
        for a in 1..=50 {
            let lhs = &one_minus_q * &qbracket(a, 1)?;
            let mut rhs = vec![ratio(0, 1); a as usize + 1];
            rhs[0] = ratio(1, 1);
            rhs[a as usize] = ratio(-1, 1);
            if lhs != QPoly::new(rhs) {
                return Ok((false, format!("a = {a}")));
            }
        }
        Ok((true, "a <= 50".into()))
    })());
    rep.record(S, "ring axioms and evaluation", (|| {
        let f = QPoly::new(vec![ratio(1, 2), ratio(-3, 1), ratio(0, 1), ratio(7, 5)]);
        let g = qbracket(4, 2)?;
        let h = QPoly::new(vec![ratio(-2, 3), ratio(1, 1)]);
        let assoc = &(&f * &g) * &h == &f * &(&g * &h);
        let distr = &f * &(&g + &h) == &(&f * &g) + &(&f * &h);
        let x = ratio(-5, 7);
        let eval = (&f * &g).evaluate(&x) == f.evaluate(&x) * g.evaluate(&x);
        Ok((assoc && distr && eval, format!("assoc {assoc}, distr {distr}, eval {eval}")))
    })());
}

fn genfun_suite(rep: &mut VerifyReport, cfg: &VerifyConfig) {
    const S: &str = "genfun";
    let engine = GfEngine::new();
    rep.record(S, "joint_gf equals brute force", (|| {
        let mut classes = 0;
        for n in 1..=cfg.max_n {
            let brute = oracle::all_classes_bruteforce(n, oracle::DEFAULT_CAP)?;
            for (lam, dist) in &brute {
                if engine.joint_gf(lam)?.counts() != dist.to_bipoly() {
                    return Ok((false, format!("class {lam}")));
                }
                classes += 1;
            }
        }
        Ok((true, format!("{classes} classes, n <= {}", cfg.max_n)))
    })());
    rep.record(S, "f_{i,a}(q) = sum_m J_{i,m,a} q^m", (|| {
        for i in 1..=8 {
            for a in 1..=5 {
                let f = genfun::f_iaq(i, a)?;
                let deg = i * (a - 1);
                let j = QPoly::new((0..=deg).map(|m| genfun::j_ima(i, m, a).map(BigRational::from_integer)).collect::<Result<_>>()?);
                if f != j {
                    return Ok((false, format!("i = {i}, a = {a}")));
                }
            }
        }
        Ok((true, "i <= 8, a <= 5".into()))
    })());
    rep.record(S, "necklace polynomial bounds", (|| {
        for i in 1..=10 {
            for a in 1..=20 {
                for k in 0..=10 {
                    if !genfun::necklace_bounds_hold(i, a, &ratio(k, 10))? {
                        return Ok((false, format!("i = {i}, a = {a}, q = {k}/10")));
                    }
                }
            }
        }
        Ok((true, "i <= 10, a <= 20, q in {0, 1/10, .., 1}".into()))
    })());
    rep.record(S, "necklace coefficients are nonnegative integers", (|| {
        for i in 1..=10 {
            for a in 1..=10 {
                let f = genfun::f_iaq(i, a)?;
                if f.coeffs().iter().any(|c| !c.is_integer() || *c < BigRational::zero()) {
                    return Ok((false, format!("i = {i}, a = {a}")));
                }
            }
        }
        Ok((true, "i, a <= 10".into()))
    })());
    rep.record(S, "q -> 1 specialization over S_n gives Eulerian numbers", (|| {
        let top = cfg.max_n.min(8);
        for n in 1..=top {
            let mut total = IntPoly::zero();
            for lam in partitions_of(n) {
                let e = engine.eulerian_specialization(&lam)?;
                if e != engine.joint_gf(&lam)?.counts().at_q_one() {
                    return Ok((false, format!("class {lam}")));
                }
                total = &total + &e;
            }
            if total != eulerian_row(n) {
                return Ok((false, format!("n = {n}")));
            }
        }
        Ok((true, format!("n <= {top}")))
    })());
}

/// `t^d` coefficients: permutations of `n` with `d - 1` descents.
fn eulerian_row(n: usize) -> IntPoly {
    let mut row = vec![BigInt::zero(); n + 1];
    row[1] = BigInt::one();
    for m in 2..=n {
        let mut next = vec![BigInt::zero(); n + 1];
        for d in 1..=m {
            next[d] = &row[d] * BigInt::from(d) + &row[d - 1] * BigInt::from(m + 1 - d);
        }
        row = next;
    }
    IntPoly::new(row)
}

fn oracle_suite(rep: &mut VerifyReport, cfg: &VerifyConfig) {
    const S: &str = "oracle";
    rep.record(S, "marginals over S_n", (|| {
        for n in 1..=cfg.max_n {
            let brute = oracle::all_classes_bruteforce(n, oracle::DEFAULT_CAP)?;
            let mut pooled = IntTQPoly::zero();
            for dist in brute.values() {
                pooled = &pooled + &dist.to_bipoly();
            }
            if pooled.at_q_one() != eulerian_row(n) {
                return Ok((false, format!("descent marginal, n = {n}")));
            }
            let mut maj: BTreeMap<usize, BigInt> = BTreeMap::new();
            oracle::for_each_permutation(n, |w| *maj.entry(oracle::descent_stats(w).1).or_default() += 1);
            let maj = IntPoly::new((0..=genfun::max_major_index(n)).map(|m| maj.get(&m).cloned().unwrap_or_default()).collect());
            if pooled.at_t_one() != maj {
                return Ok((false, format!("major index marginal, n = {n}")));
            }
        }
        Ok((true, format!("n <= {}", cfg.max_n)))
    })());
    rep.record(S, "generator agrees with filtering", (|| {
        let n = cfg.max_n.min(7);
        for lam in partitions_of(n) {
            let mut a: Vec<Vec<u32>> = Vec::new();
            oracle::for_each_class_member(&lam, |w| a.push(w.to_vec()));
            a.sort();
            let mut b: Vec<Vec<u32>> = Vec::new();
            oracle::for_each_permutation(n, |w| {
                if oracle::cycle_type_of(&oracle::Permutation::from_unchecked(w.to_vec())) == lam {
                    b.push(w.to_vec());
                }
            });
            if a != b {
                return Ok((false, format!("class {lam}")));
            }
        }
        Ok((true, format!("n = {n}")))
    })());
}

fn montecarlo_suite(rep: &mut VerifyReport, cfg: &VerifyConfig) {
    const S: &str = "montecarlo";
    let n6 = cfg.max_n.min(6);
    rep.record(S, "uniform on every class", (|| {
        let mut worst = 1.0f64;
        for lam in partitions_of(n6) {
            let u = montecarlo::uniformity_test(&lam, cfg.samples, cfg.seed)?;
            if !u.all_in_class {
                return Ok((false, format!("class {lam}: wrong cycle type drawn")));
            }
            worst = worst.min(u.p_value);
        }
        Ok((worst > 1e-3, format!("n = {n6}, {} draws per class, min p = {worst:.4}", cfg.samples)))
    })());
    rep.record(S, "sampled m.g.f. within 5 standard errors of exact", (|| {
        let n = cfg.max_n;
        let mut classes = vec![CycleType::ncycle(n)];
        if n >= 3 {
            classes.push(CycleType::from_pairs(&[(1, 2), (n - 2, 1)])?);
        }
        let mut worst = 0.0f64;
        for lam in &classes {
            for &(s, r) in &[(1.0, 1.0), (0.5, 2.0)] {
                let st = montecarlo::run_sampling(lam, cfg.samples, &[(s, r)], cfg.seed, 0)?;
                let exact = genfun::mgf_exact(lam, s, r, 30)?.to_f64();
                let p = &st.mgf_grid[0];
                let se = p.std_error(st.count);
                let z = if se > 0.0 { (p.mean(st.count) - exact).abs() / se } else { 0.0 };
                worst = worst.max(z);
            }
        }
        Ok((worst < 5.0, format!("max |z| = {worst:.2}")))
    })());
    rep.record(S, "worker count does not change results", (|| {
        let lam = CycleType::from_pairs(&[(2, 3), (3, 1)])?;
        let grid = [(1.0, 1.0)];
        let n = cfg.samples.max(2 * montecarlo::BLOCK_SIZE + 1);
        let one = montecarlo::run_sampling(&lam, n, &grid, cfg.seed, 1)?;
        let many = montecarlo::run_sampling(&lam, n, &grid, cfg.seed, 3)?;
        Ok((one == many, format!("{n} draws, 1 vs 3 workers")))
    })());
}

fn asymptotics_suite(rep: &mut VerifyReport) {
    const S: &str = "asymptotics";
    rep.record(S, "sigma is positive semidefinite", (|| {
        for i in 0..=100 {
            let m = asymptotics::sigma(&ratio(i, 100))?;
            let zero = BigRational::zero();
            if &m.s12 + &m.s12 != m.s11 || m.s11 < zero || m.s22 < zero || m.det() < zero {
                return Ok((false, format!("alpha = {i}/100")));
            }
        }
        Ok((true, "101-point alpha grid".into()))
    })());
    rep.record(S, "dominating function inequalities", (|| {
        let sizes = [1usize, 2, 3, 5, 10, 30, 100, 500, 2000, 10_000];
        let mut count = 0;
        for (j, &n) in sizes.iter().enumerate() {
            for &m in &sizes[..=j] {
                for k in -50..=50 {
                    let z = k as f64 / 10.0;
                    let fz = asymptotics::f_dominating(n, z);
                    let bound = if z < 0.0 { (-z * z / 2.0).exp() } else { asymptotics::f_dominating(m, z) };
                    if fz > bound * (1.0 + 1e-12) {
                        return Ok((false, format!("n = {n}, m = {m}, z = {z}")));
                    }
                    count += 1;
                }
            }
        }
        Ok((true, format!("{count} (n, m, z) points")))
    })());
    rep.record(S, "beta integral closed form vs quadrature", (|| {
        let mut worst = 0.0f64;
        for n in 1..=200 {
            for (s, r) in [(1.0, 2.0), (1.0, 1.0), (2.0, 1.0)] {
                worst = worst.max(asymptotics::beta_relative_gap(&AsymptoticParams::new(n, s, r, None)?)?);
            }
        }
        Ok((worst <= 1e-10, format!("max relative gap {worst:.2e}")))
    })());
    rep.record(S, "gaussian integral identity", (|| {
        let mut worst = 0.0f64;
        for i in 0..=10 {
            for (s, r) in [(1.0, 1.0), (1.0, 2.0), (0.3, 1.7), (2.0, 0.5)] {
                worst = worst.max(asymptotics::gaussian_identity_check(i as f64 / 10.0, s, r)?.relative_gap());
            }
        }
        Ok((worst <= 1e-8, format!("max relative gap {worst:.2e}")))
    })());
    rep.record(S, "target is Lipschitz in alpha", (|| {
        let h = 1e-4;
        let mut worst = 0.0f64;
        for i in 0..1000 {
            let a = i as f64 / 1000.0 * (1.0 - h);
            for s in [0.1, 0.7, 1.3, 2.0] {
                for r in [0.1, 0.7, 1.3, 2.0] {
                    let d = (asymptotics::target_mgf(a + h, s, r)? - asymptotics::target_mgf(a, s, r)?).abs() / h;
                    worst = worst.max(d);
                }
            }
        }
        Ok((worst <= 10.0, format!("max slope {worst:.3}")))
    })());
    rep.record(S, "common factor approximation improves with n", (|| {
        let errs = [8, 16, 24, 32]
            .iter()
            .map(|&n| Ok(asymptotics::common_factor_check(&AsymptoticParams::new(n, 1.0, 1.0, None)?)?.rel_err))
            .collect::<Result<Vec<f64>>>()?;
        let ok = errs.windows(2).all(|w| w[1] < w[0]);
        Ok((ok, format!("relative errors {errs:.4?}")))
    })());
}
