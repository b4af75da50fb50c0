//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use permclt_core::asymptotics::{self, AsymptoticParams};
use permclt_core::bigfloat::{digits_to_bits, BigFloat};
use permclt_core::combinatorics::{class_size, partitions_of};
use permclt_core::genfun::{self, GfEngine};
use permclt_core::montecarlo;
use permclt_core::oracle;
use permclt_core::scalar::{powu, ratio};
use permclt_core::{CycleType, IntTQPoly, Result};

type Outcome = Result<(bool, String)>;

/// Master identity against enumeration, every class of S_n for n <= 9.
fn master_identity() -> Outcome {
    let engine = GfEngine::new();
    let mut classes = 0;
    for n in 1..=9 {
        for (lam, dist) in oracle::all_classes_bruteforce(n, oracle::DEFAULT_CAP)? {
            // joint_gf itself rejects nonzero guard coefficients
            let gf = engine.joint_gf(&lam)?;
            if gf.gf.t_degree().is_some_and(|d| d > n) || gf.counts() != dist.to_bipoly() {
                return Ok((false, format!("mismatch at {lam}")));
            }
            classes += 1;
        }
    }
    Ok((true, format!("{classes} classes, n = 1..9")))
}

/// Primitive words of length `i` over `1..=a` with letter sum `i + m`, up to rotation.
fn j_by_enumeration(i: usize, a: usize) -> Vec<BigInt> {
    let mut counts = vec![0u64; i * (a - 1) + 1];
    let mut w = vec![1usize; i];
    loop {
        let primitive = (1..i).filter(|d| i.is_multiple_of(*d)).all(|d| (0..i).any(|k| w[k] != w[(k + d) % i]));
        if primitive {
            counts[w.iter().sum::<usize>() - i] += 1;
        }
        let mut k = 0;
        while k < i && w[k] == a {
            w[k] = 1;
            k += 1;
        }
        if k == i {
            break;
        }
        w[k] += 1;
    }
    counts.into_iter().map(|c| BigInt::from(c / i as u64)).collect()
}

fn necklace_series() -> Outcome {
    for i in 1..=8 {
        for a in 1..=5 {
            let f = genfun::f_iaq(i, a)?;
            let j = j_by_enumeration(i, a);
            let lib: Vec<BigInt> = (0..j.len()).map(|m| genfun::j_ima(i, m, a)).collect::<Result<_>>()?;
            let f_coeffs: Vec<BigRational> = (0..j.len()).map(|m| f.coeff(m)).collect();
            let expect: Vec<BigRational> = j.iter().cloned().map(BigRational::from_integer).collect();
            if f.degree().unwrap_or(0) >= j.len() || f_coeffs != expect || lib != j {
                return Ok((false, format!("i = {i}, a = {a}")));
            }
        }
    }
    Ok((true, "i <= 8, a <= 5, against word enumeration".into()))
}

/// `B^i − (i/2)B^{i/2} ≤ i·f(q) ≤ B^i` with `B = 1 + q + ... + q^{a−1}`, exact;
/// the half-integer power is handled by squaring.
fn necklace_bounds() -> Outcome {
    let mut points = 0;
    for i in 1..=10usize {
        for a in 1..=20usize {
            let f = genfun::f_iaq(i, a)?;
            for k in 0..=10 {
                let q = ratio(k, 10);
                let b: BigRational = (0..a).map(|e| powu(&q, e)).fold(BigRational::zero(), |s, x| s + x);
                let bi = powu(&b, i);
                let ifq = f.evaluate(&q) * BigRational::from_integer(BigInt::from(i));
                let gap = &bi - &ifq;
                let half = ratio(i as i64, 2);
                let lower = gap <= BigRational::zero() || &gap * &gap <= &half * &half * &bi;
                if !(lower && gap >= BigRational::zero()) {
                    return Ok((false, format!("i = {i}, a = {a}, q = {q}")));
                }
                points += 1;
            }
        }
    }
    Ok((true, format!("{points} (i, a, q) points")))
}

fn eulerian_specialization() -> Outcome {
    let engine = GfEngine::new();
    let mut classes = 0;
    for n in 1..=8 {
        for (lam, dist) in oracle::all_classes_bruteforce(n, oracle::DEFAULT_CAP)? {
            if engine.eulerian_specialization(&lam)? != dist.to_bipoly().at_q_one() {
                return Ok((false, format!("mismatch at {lam}")));
            }
            classes += 1;
        }
    }
    Ok((true, format!("{classes} classes, n = 1..8")))
}

fn sampler_uniformity() -> Outcome {
    let mut worst = 1.0f64;
    let mut worst_class = String::new();
    for lam in partitions_of(6) {
        let u = montecarlo::uniformity_test(&lam, 1_000_000, 42)?;
        if !u.all_in_class {
            return Ok((false, format!("{lam}: drew a permutation of another cycle type")));
        }
        if u.p_value < worst {
            worst = u.p_value;
            worst_class = lam.to_string();
        }
    }
    Ok((worst > 1e-3, format!("11 classes of S_6, 10^6 draws each, min p = {worst:.4} ({worst_class})")))
}

fn clt_moments() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for (name, lam) in [("4000-cycle", CycleType::ncycle(4000)), ("fpf involution", CycleType::fpf_involution(4000)?)] {
        let st = montecarlo::run_sampling(&lam, 1_000_000, &[], 42, 0)?;
        let m = montecarlo::normalized_moments(&st)?;
        let v1 = m.cov_w.s11 / (1.0 / 12.0) - 1.0;
        let v2 = m.cov_w.s22 / (1.0 / 36.0) - 1.0;
        let corr = m.cov_w.correlation();
        ok &= v1.abs() <= 0.02 && v2.abs() <= 0.02 && (corr - 3f64.sqrt() / 2.0).abs() <= 0.02;
        detail.push(format!("{name}: Var W1 {:+.2}%, Var W2 {:+.2}%, corr {corr:.4}", 100.0 * v1, 100.0 * v2));
    }
    Ok((ok, detail.join("; ")))
}

fn ncycle_mgf(n: usize) -> Result<f64> {
    Ok(genfun::mgf_exact(&CycleType::ncycle(n), 1.0, 1.0, 30)?.to_f64())
}

fn mgf_trend() -> Outcome {
    let target = asymptotics::target_mgf(0.0, 1.0, 1.0)?;
    let errs = [8, 16, 24, 32].iter().map(|&n| Ok((ncycle_mgf(n)? - target).abs())).collect::<Result<Vec<f64>>>()?;
    let ok = errs.windows(2).all(|w| w[1] < w[0]) && errs[3] < 0.1;
    Ok((ok, format!("|M - e^(7/72)| at n = 8, 16, 24, 32: {errs:.4?}")))
}

fn decreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] < w[0])
}

fn structural_identities() -> Outcome {
    let mut beta = 0.0f64;
    for n in 1..=200 {
        for (s, r) in [(1.0, 2.0), (1.0, 1.0), (2.0, 1.0)] {
            beta = beta.max(asymptotics::beta_relative_gap(&AsymptoticParams::new(n, s, r, None)?)?);
        }
    }
    let mut gauss = 0.0f64;
    for i in 0..=20 {
        for (s, r) in [(1.0, 1.0), (1.0, 2.0), (0.25, 1.5), (2.0, 0.5), (1.7, 1.7)] {
            gauss = gauss.max(asymptotics::gaussian_identity_check(i as f64 / 20.0, s, r)?.relative_gap());
        }
    }
    let mut dominated = true;
    let sizes = [1usize, 2, 3, 4, 7, 10, 25, 100, 400, 1000, 4000, 10_000];
    for (j, &n) in sizes.iter().enumerate() {
        for &m in &sizes[..=j] {
            for k in -100..=100 {
                let z = k as f64 / 20.0;
                let f = asymptotics::f_dominating(n, z);
                let bound = if z < 0.0 { (-z * z / 2.0).exp() } else { asymptotics::f_dominating(m, z) };
                dominated &= f <= bound * (1.0 + 1e-12);
            }
        }
    }
    let ns = [8usize, 16, 24, 32];
    let mut common = Vec::new();
    let mut laplace = Vec::new();
    let half_sigma0 = (0.5 * asymptotics::sigma(&0.0f64)?.quadform(&1.0, &1.0)).exp();
    for &n in &ns {
        let p = AsymptoticParams::new(n, 1.0, 1.0, None)?;
        common.push(asymptotics::common_factor_check(&p)?.rel_err);
        let l = asymptotics::l_decomposition(&p, &CycleType::ncycle(n))?;
        laplace.push((half_sigma0 * l.l_large_numeric / ncycle_mgf(n)? - 1.0).abs());
    }
    let ok = beta <= 1e-10 && gauss <= 1e-8 && dominated && decreasing(&common) && decreasing(&laplace);
    Ok((
        ok,
        format!(
            "beta gap {beta:.1e}, gaussian gap {gauss:.1e}, dominating {dominated}, common factor {common:.4?}, L_large {laplace:.4?}"
        ),
    ))
}

/// Classes of S_n with exactly two fixed points: the class-size weighted
/// mixture of per-class results against the pooled enumeration.
fn conjugation_invariance() -> Outcome {
    let engine = GfEngine::new();
    let digits = 40;
    let prec = digits_to_bits(digits);
    let (s, r) = (1.0, 1.0);
    let mut detail = Vec::new();
    let mut ok = true;
    for n in [8usize, 9] {
        let classes: Vec<CycleType> = partitions_of(n).into_iter().filter(|l| l.fixed_points() == 2).collect();
        let mut pooled: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        oracle::for_each_permutation(n, |w| {
            if w.iter().enumerate().filter(|&(k, &v)| v as usize == k + 1).count() == 2 {
                *pooled.entry(oracle::descent_stats(w)).or_default() += 1;
            }
        });
        let mut pooled_gf = IntTQPoly::zero();
        for (&(d, m), c) in &pooled {
            pooled_gf.add_term(d, m, c.clone());
        }
        let total: BigInt = pooled.values().sum();

        let mut mixed_gf = IntTQPoly::zero();
        let mut weight = BigInt::zero();
        let mut mixture = BigFloat::zero_with_prec(prec);
        for lam in &classes {
            let gf = engine.joint_gf(lam)?;
            let size = class_size(lam);
            mixed_gf = &mixed_gf + &gf.counts();
            mixture = mixture + BigFloat::from_bigint_prec(size.clone(), prec) * genfun::mgf_from_gf(&gf, s, r, digits)?;
            weight += size;
        }
        let mixture = mixture / BigFloat::from_bigint_prec(weight.clone(), prec);
        let alpha = ratio(2, n as i64);
        let sb = BigFloat::from_f64_prec(s, prec).unwrap();
        let rb = BigFloat::from_f64_prec(r, prec).unwrap();
        let direct = genfun::mgf_from_counts(&pooled_gf, &total, n, &alpha, &sb, &rb);
        let rel = ((mixture.clone() - direct.clone()) / direct.clone()).abs().to_f64();
        let same = mixed_gf == pooled_gf && weight == total;
        ok &= same && rel < 1e-30;
        detail.push(format!("n = {n}: {} classes, distributions equal {same}, m.g.f. gap {rel:.1e}", classes.len()));
    }
    Ok((ok, detail.join("; ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("master identity vs enumeration", master_identity),
        ("necklace polynomial series", necklace_series),
        ("necklace polynomial bounds", necklace_bounds),
        ("q -> 1 specialization", eulerian_specialization),
        ("sampler uniformity", sampler_uniformity),
        ("CLT covariance at n = 4000", clt_moments),
        ("m.g.f. convergence trend", mgf_trend),
        ("structural identities", structural_identities),
        ("conjugation-invariant mixture", conjugation_invariance),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = match run() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        let secs = start.elapsed().as_secs_f64();
        println!("criterion {} {}: {name} ({secs:.1}s) {detail}", k + 1, if pass { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
