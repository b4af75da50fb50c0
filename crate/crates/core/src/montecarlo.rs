//! Exactly uniform sampling from a conjugacy class and streaming estimation
//! of the moments and m.g.f. values of the normalized pair `W_λ`.
//!
//! # Reproducibility
//!
//! Samples are drawn in blocks of [`BLOCK_SIZE`]. Block `b` uses its own
//! ChaCha8 stream, [`substream`]`(seed, b)`, and block accumulators are merged
//! in block order. Results are therefore bit-identical for a given seed
//! whatever the worker count.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};
use std::collections::HashMap;

use crate::asymptotics::CovMatrix2;
use crate::combinatorics::CycleType;
use crate::error::{Error, Result};
use crate::oracle::{self, descent_stats, Permutation};

/// Samples per RNG stream.
pub const BLOCK_SIZE: u64 = 1 << 16;

/// Name of the generator behind [`substream`], echoed into outputs.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.9), seed_from_u64(seed), set_stream(block)";

/// The RNG stream for block `index` under `seed`.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Reusable buffers for drawing members of one class.
///
/// A uniform word `w` of `1..=n` is cut into consecutive blocks whose lengths
/// are the cycle lengths of `λ` (longest first); each block `w_1 .. w_k` is
/// read as the cycle `w_1 -> w_2 -> ... -> w_k -> w_1`. Every member of `C_λ`
/// arises from exactly `∏_k m_k! k^{m_k}` words, so the law is exactly uniform.
pub struct ClassSampler {
    lengths: Vec<usize>,
    word: Vec<u32>,
    image: Vec<u32>,
}

impl ClassSampler {
    pub fn new(lam: &CycleType) -> Self {
        let n = lam.n();
        ClassSampler { lengths: lam.lengths_desc(), word: (1..=n as u32).collect(), image: vec![0; n] }
    }

    /// Draws a member of the class; the slice is its one-line notation.
    pub fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> &[u32] {
        self.word.shuffle(rng);
        let mut pos = 0;
        for &k in &self.lengths {
            let block = &self.word[pos..pos + k];
            for j in 0..k {
                let from = block[j] as usize;
                self.image[from - 1] = block[(j + 1) % k];
            }
            pos += k;
        }
        &self.image
    }
}

pub fn sample_permutation<R: Rng + ?Sized>(lam: &CycleType, rng: &mut R) -> Result<Permutation> {
    if lam.n() == 0 {
        return Err(Error::InvalidInput("sampling needs n >= 1".into()));
    }
    let mut s = ClassSampler::new(lam);
    Ok(Permutation::new(s.draw(rng).to_vec()).expect("sampler yields permutations"))
}

/// Running sums of `e^{-s W₁ - r W₂}` at one grid point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MgfPoint {
    pub s: f64,
    pub r: f64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl MgfPoint {
    pub fn mean(&self, count: u64) -> f64 {
        self.sum / count as f64
    }

    /// Plain standard error of the mean.
    pub fn std_error(&self, count: u64) -> f64 {
        if count < 2 {
            return f64::NAN;
        }
        let n = count as f64;
        let mean = self.sum / n;
        let var = ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        (var / n).sqrt()
    }
}

/// Streaming accumulator for one class.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleStats {
    pub lam: CycleType,
    pub count: u64,
    pub sum_d: BigInt,
    pub sum_maj: BigInt,
    pub sum_d2: BigInt,
    pub sum_maj2: BigInt,
    pub sum_dmaj: BigInt,
    pub mgf_grid: Vec<MgfPoint>,
}

/// Centering and scale of `W_λ`.
#[derive(Clone, Copy, Debug)]
pub struct Normalization {
    pub center_d: f64,
    pub center_maj: f64,
    pub scale_d: f64,
    pub scale_maj: f64,
}

impl Normalization {
    pub fn of(lam: &CycleType) -> Self {
        let n = lam.n() as f64;
        let a = lam.alpha1_f64();
        let c = 1.0 - a * a;
        Normalization { center_d: c * n / 2.0, center_maj: c * n * n / 4.0, scale_d: n.sqrt(), scale_maj: n * n.sqrt() }
    }

    pub fn apply(&self, d: usize, maj: usize) -> (f64, f64) {
        ((d as f64 - self.center_d) / self.scale_d, (maj as f64 - self.center_maj) / self.scale_maj)
    }
}

impl SampleStats {
    pub fn empty(lam: &CycleType, grid: &[(f64, f64)]) -> Self {
        SampleStats {
            lam: lam.clone(),
            count: 0,
            sum_d: BigInt::zero(),
            sum_maj: BigInt::zero(),
            sum_d2: BigInt::zero(),
            sum_maj2: BigInt::zero(),
            sum_dmaj: BigInt::zero(),
            mgf_grid: grid.iter().map(|&(s, r)| MgfPoint { s, r, sum: 0.0, sum_sq: 0.0 }).collect(),
        }
    }

    /// Appends `other`'s samples after this accumulator's.
    pub fn merge(&mut self, other: &SampleStats) -> Result<()> {
        if self.lam != other.lam || self.mgf_grid.len() != other.mgf_grid.len() {
            return Err(Error::InvalidInput("cannot merge statistics of different runs".into()));
        }
        self.count += other.count;
        self.sum_d += &other.sum_d;
        self.sum_maj += &other.sum_maj;
        self.sum_d2 += &other.sum_d2;
        self.sum_maj2 += &other.sum_maj2;
        self.sum_dmaj += &other.sum_dmaj;
        for (a, b) in self.mgf_grid.iter_mut().zip(&other.mgf_grid) {
            if a.s != b.s || a.r != b.r {
                return Err(Error::InvalidInput("cannot merge statistics on different grids".into()));
            }
            a.sum += b.sum;
            a.sum_sq += b.sum_sq;
        }
        Ok(())
    }

    pub fn mgf_means(&self) -> Vec<f64> {
        self.mgf_grid.iter().map(|p| p.mean(self.count)).collect()
    }
}

fn sample_block(lam: &CycleType, grid: &[(f64, f64)], size: u64, rng: &mut ChaCha8Rng) -> SampleStats {
    let norm = Normalization::of(lam);
    let mut sampler = ClassSampler::new(lam);
    let (mut sd, mut sm, mut sd2, mut sm2, mut sdm) = (0u128, 0u128, 0u128, 0u128, 0u128);
    let mut sums = vec![(0.0f64, 0.0f64); grid.len()];
    for _ in 0..size {
        let (d, maj) = descent_stats(sampler.draw(rng));
        let (d, maj) = (d as u128, maj as u128);
        sd += d;
        sm += maj;
        sd2 += d * d;
        sm2 += maj * maj;
        sdm += d * maj;
        if !grid.is_empty() {
            let (w1, w2) = norm.apply(d as usize, maj as usize);
            for (acc, &(s, r)) in sums.iter_mut().zip(grid) {
                let v = (-s * w1 - r * w2).exp();
                acc.0 += v;
                acc.1 += v * v;
            }
        }
    }
    let mut st = SampleStats::empty(lam, grid);
    st.count = size;
    st.sum_d = sd.into();
    st.sum_maj = sm.into();
    st.sum_d2 = sd2.into();
    st.sum_maj2 = sm2.into();
    st.sum_dmaj = sdm.into();
    for (p, (a, b)) in st.mgf_grid.iter_mut().zip(sums) {
        p.sum = a;
        p.sum_sq = b;
    }
    st
}

fn block_sizes(n_samples: u64) -> impl Iterator<Item = (u64, u64)> {
    let blocks = n_samples.div_ceil(BLOCK_SIZE);
    (0..blocks).map(move |b| (b, BLOCK_SIZE.min(n_samples - b * BLOCK_SIZE)))
}

/// Draws `n_samples` members of `C_λ` and accumulates moment sums and the
/// empirical m.g.f. on `grid`, using `workers` threads (0 means rayon's default).
pub fn run_sampling(
    lam: &CycleType,
    n_samples: u64,
    grid: &[(f64, f64)],
    seed: u64,
    workers: usize,
) -> Result<SampleStats> {
    if lam.n() == 0 {
        return Err(Error::InvalidInput("sampling needs n >= 1".into()));
    }
    if n_samples == 0 {
        return Err(Error::InvalidInput("n_samples must be at least 1".into()));
    }
    for &(s, r) in grid {
        if !(s.is_finite() && r.is_finite()) {
            return Err(Error::InvalidInput(format!("grid point ({s}, {r}) is not finite")));
        }
    }
    let blocks: Vec<(u64, u64)> = block_sizes(n_samples).collect();
    let run = |&(b, size): &(u64, u64)| sample_block(lam, grid, size, &mut substream(seed, b));
    let parts: Vec<SampleStats> = if workers == 1 {
        blocks.iter().map(run).collect()
    } else {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if workers > 1 {
            builder = builder.num_threads(workers);
        }
        let pool = builder.build().map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
        pool.install(|| blocks.par_iter().map(run).collect())
    };
    let mut total = SampleStats::empty(lam, grid);
    for p in &parts {
        total.merge(p)?;
    }
    Ok(total)
}

/// Sample mean and unbiased sample covariance of `W_λ`.
#[derive(Clone, Debug, Serialize)]
pub struct NormalizedMoments {
    pub mean_w: [f64; 2],
    pub cov_w: CovMatrix2<f64>,
}

fn rational_to_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

pub fn normalized_moments(stats: &SampleStats) -> Result<NormalizedMoments> {
    if stats.count < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 samples, have {}", stats.count)));
    }
    let lam = &stats.lam;
    let n = lam.n();
    let nb = BigInt::from(n);
    let cnt = BigInt::from(stats.count);
    let alpha = lam.alpha1();
    let c = BigRational::from_integer(1.into()) - &alpha * &alpha;
    let center_d = &c * BigRational::new(nb.clone(), 2.into());
    let center_maj = &c * BigRational::new(&nb * &nb, 4.into());
    let mean_d = BigRational::new(stats.sum_d.clone(), cnt.clone());
    let mean_maj = BigRational::new(stats.sum_maj.clone(), cnt.clone());
    let nf = n as f64;
    let mean_w = [
        rational_to_f64(&(mean_d - center_d)) / nf.sqrt(),
        rational_to_f64(&(mean_maj - center_maj)) / (nf * nf.sqrt()),
    ];

    // N Σxy - Σx Σy over N(N-1): exact until the final division
    let denom: BigInt = &cnt * (&cnt - BigInt::from(1));
    let cov = |sxy: &BigInt, sx: &BigInt, sy: &BigInt| {
        rational_to_f64(&BigRational::new(&cnt * sxy - sx * sy, denom.clone()))
    };
    let var_d = cov(&stats.sum_d2, &stats.sum_d, &stats.sum_d);
    let var_maj = cov(&stats.sum_maj2, &stats.sum_maj, &stats.sum_maj);
    let cov_dm = cov(&stats.sum_dmaj, &stats.sum_d, &stats.sum_maj);
    let cov_w = CovMatrix2::new(var_d / nf, cov_dm / (nf * nf), var_maj / (nf * nf * nf));
    Ok(NormalizedMoments { mean_w, cov_w })
}

/// Outcome of a χ² goodness-of-fit test against the uniform law on `C_λ`.
#[derive(Clone, Debug, Serialize)]
pub struct UniformityReport {
    pub class_size: usize,
    pub samples: u64,
    pub chi2: f64,
    pub df: usize,
    pub p_value: f64,
    /// Every draw had cycle type `λ`.
    pub all_in_class: bool,
}

/// Draws `n_samples` sequentially with the block protocol and tests them
/// against the member list produced by the oracle.
pub fn uniformity_test(lam: &CycleType, n_samples: u64, seed: u64) -> Result<UniformityReport> {
    let members = oracle::class_members(lam, oracle::HARD_CAP)?;
    let index: HashMap<&[u32], usize> = members.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let mut counts = vec![0u64; members.len()];
    let mut all_in_class = true;
    let mut sampler = ClassSampler::new(lam);
    for (b, size) in block_sizes(n_samples) {
        let mut rng = substream(seed, b);
        for _ in 0..size {
            match index.get(sampler.draw(&mut rng)) {
                Some(&i) => counts[i] += 1,
                None => all_in_class = false,
            }
        }
    }
    let k = members.len();
    let expected = n_samples as f64 / k as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let df = k.saturating_sub(1);
    let p_value = if df == 0 {
        1.0
    } else {
        ChiSquared::new(df as f64).map_err(|e| Error::InvalidInput(e.to_string()))?.sf(chi2)
    };
    Ok(UniformityReport { class_size: k, samples: n_samples, chi2, df, p_value, all_in_class })
}
