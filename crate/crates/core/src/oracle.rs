//! Brute-force ground truth: permutations, their descent number and major
//! index read directly off the one-line notation, and exact `(d, maj)` count
//! tables per conjugacy class.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::combinatorics::CycleType;
use crate::error::{Error, Result};
use crate::IntTQPoly;

/// Default largest `n` the oracle will enumerate.
pub const DEFAULT_CAP: usize = 9;
/// No configuration may raise the cap beyond this.
pub const HARD_CAP: usize = 11;
/// Up to this `n` a class is obtained by filtering all of `S_n`.
pub const FILTER_MAX_N: usize = 9;

/// A permutation of `1..=n` in one-line notation (`one_line[i-1] = π(i)`), `n >= 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    one_line: Vec<u32>,
}

impl Permutation {
    pub fn new(one_line: Vec<u32>) -> Result<Self> {
        let n = one_line.len();
        if n == 0 {
            return Err(Error::InvalidInput("a permutation needs n >= 1".into()));
        }
        let mut seen = vec![false; n + 1];
        for &v in &one_line {
            let v = v as usize;
            if v == 0 || v > n || seen[v] {
                return Err(Error::InvalidInput(format!("{one_line:?} is not a permutation of 1..={n}")));
            }
            seen[v] = true;
        }
        Ok(Permutation { one_line })
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1);
        Permutation { one_line: (1..=n as u32).collect() }
    }

    pub(crate) fn from_unchecked(one_line: Vec<u32>) -> Self {
        Permutation { one_line }
    }

    pub fn n(&self) -> usize {
        self.one_line.len()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.one_line
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.one_line)
    }
}

/// `(d, maj)` of a one-line word: `d` is one plus the number of descents,
/// `maj` the sum of descent positions (1-based).
pub fn descent_stats(w: &[u32]) -> (usize, usize) {
    let mut d = 1;
    let mut maj = 0;
    for i in 1..w.len() {
        if w[i - 1] > w[i] {
            d += 1;
            maj += i;
        }
    }
    (d, maj)
}

pub fn descent_number(p: &Permutation) -> usize {
    descent_stats(&p.one_line).0
}

pub fn major_index(p: &Permutation) -> usize {
    descent_stats(&p.one_line).1
}

/// Cycle multiplicities of a one-line word; `scratch` must have length `n + 1`
/// and comes back all `false`.
pub(crate) fn cycle_counts(w: &[u32], scratch: &mut [bool], counts: &mut [usize]) {
    counts.iter_mut().for_each(|c| *c = 0);
    for start in 1..=w.len() {
        if scratch[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !scratch[x] {
            scratch[x] = true;
            x = w[x - 1] as usize;
            len += 1;
        }
        counts[len] += 1;
    }
    scratch.iter_mut().for_each(|s| *s = false);
}

pub fn cycle_type_of(p: &Permutation) -> CycleType {
    let n = p.n();
    let mut scratch = vec![false; n + 1];
    let mut counts = vec![0; n + 1];
    cycle_counts(&p.one_line, &mut scratch, &mut counts);
    CycleType::from_dense(&counts).expect("cycle counts form a partition")
}

/// Visits every permutation of `1..=n` in lexicographic order.
pub fn for_each_permutation<F: FnMut(&[u32])>(n: usize, mut f: F) {
    let mut w: Vec<u32> = (1..=n as u32).collect();
    loop {
        f(&w);
        // next lexicographic permutation
        let Some(i) = (1..w.len()).rev().find(|&i| w[i - 1] < w[i]) else { return };
        let j = (i..w.len()).rev().find(|&j| w[j] > w[i - 1]).expect("exists");
        w.swap(i - 1, j);
        w[i..].reverse();
    }
}

/// Visits each member of `C_λ` exactly once.
///
/// The smallest unused point always opens the next cycle; its length ranges
/// over the distinct lengths still available and the rest of the cycle over
/// ordered choices of unused points, so no two branches meet.
pub fn for_each_class_member<F: FnMut(&[u32])>(lam: &CycleType, mut f: F) {
    let n = lam.n();
    if n == 0 {
        return;
    }
    let mut gen = ClassGen {
        n,
        remaining: (0..=n).map(|k| lam.mult(k)).collect(),
        used: vec![false; n + 1],
        w: vec![0u32; n],
    };
    gen.open_cycle(0, &mut f);
}

struct ClassGen {
    n: usize,
    remaining: Vec<usize>,
    used: Vec<bool>,
    w: Vec<u32>,
}

impl ClassGen {
    fn open_cycle<F: FnMut(&[u32])>(&mut self, placed: usize, f: &mut F) {
        if placed == self.n {
            f(&self.w);
            return;
        }
        let start = (1..=self.n).find(|&x| !self.used[x]).expect("unused point");
        self.used[start] = true;
        for len in 1..=self.n - placed {
            if self.remaining[len] == 0 {
                continue;
            }
            self.remaining[len] -= 1;
            self.grow(placed, len, start, start, len - 1, f);
            self.remaining[len] += 1;
        }
        self.used[start] = false;
    }

    fn grow<F: FnMut(&[u32])>(&mut self, placed: usize, len: usize, start: usize, prev: usize, left: usize, f: &mut F) {
        if left == 0 {
            self.w[prev - 1] = start as u32;
            self.open_cycle(placed + len, f);
            return;
        }
        for x in 1..=self.n {
            if self.used[x] {
                continue;
            }
            self.used[x] = true;
            self.w[prev - 1] = x as u32;
            self.grow(placed, len, start, x, left - 1, f);
            self.used[x] = false;
        }
    }
}

/// Exact `(d, maj)` count table of one conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointDistribution {
    pub lam: CycleType,
    pub counts: BTreeMap<(usize, usize), BigInt>,
}

impl JointDistribution {
    pub fn total(&self) -> BigInt {
        self.counts.values().fold(BigInt::zero(), |a, b| a + b)
    }

    /// The table as `Σ count · t^d q^maj`.
    pub fn to_bipoly(&self) -> IntTQPoly {
        let mut out = IntTQPoly::zero();
        for (&(d, m), c) in &self.counts {
            out.add_term(d, m, c.clone());
        }
        out
    }

    pub fn from_bipoly(lam: &CycleType, gf: &IntTQPoly) -> Self {
        let counts = gf.terms().map(|(d, m, c)| ((d, m), c.clone())).collect();
        JointDistribution { lam: lam.clone(), counts }
    }

    /// Rows `(d, maj, count)` in increasing `(d, maj)` order.
    pub fn rows(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.counts.iter().map(|(&(d, m), c)| (d, m, c))
    }

    fn from_tally(lam: &CycleType, tally: &BTreeMap<(usize, usize), u64>) -> Self {
        let counts = tally.iter().map(|(&k, &v)| (k, BigInt::from(v))).collect();
        JointDistribution { lam: lam.clone(), counts }
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    let cap = cap.min(HARD_CAP);
    if n > cap {
        return Err(Error::CapExceeded { what: "oracle n", got: n, cap });
    }
    Ok(())
}

/// Exact joint distribution of `(d, maj)` over `C_λ` by enumeration.
///
/// `n <= 9` filters all of `S_n`; `n` in `{10, 11}` uses the direct class
/// generator. `cap` is clamped to [`HARD_CAP`].
pub fn joint_distribution_bruteforce(lam: &CycleType, cap: usize) -> Result<JointDistribution> {
    let n = lam.n();
    if n == 0 {
        return Err(Error::InvalidInput("the oracle needs n >= 1".into()));
    }
    check_cap(n, cap)?;
    let mut tally: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    if n <= FILTER_MAX_N {
        let mut scratch = vec![false; n + 1];
        let mut counts = vec![0usize; n + 1];
        let target: Vec<usize> = (0..=n).map(|k| lam.mult(k)).collect();
        for_each_permutation(n, |w| {
            cycle_counts(w, &mut scratch, &mut counts);
            if counts == target {
                *tally.entry(descent_stats(w)).or_default() += 1;
            }
        });
    } else {
        for_each_class_member(lam, |w| {
            *tally.entry(descent_stats(w)).or_default() += 1;
        });
    }
    Ok(JointDistribution::from_tally(lam, &tally))
}

/// Joint distributions of every class of `S_n` from one pass over the group.
pub fn all_classes_bruteforce(n: usize, cap: usize) -> Result<BTreeMap<CycleType, JointDistribution>> {
    if n == 0 {
        return Err(Error::InvalidInput("the oracle needs n >= 1".into()));
    }
    check_cap(n, cap)?;
    let mut tallies: BTreeMap<Vec<usize>, BTreeMap<(usize, usize), u64>> = BTreeMap::new();
    let mut scratch = vec![false; n + 1];
    let mut counts = vec![0usize; n + 1];
    for_each_permutation(n, |w| {
        cycle_counts(w, &mut scratch, &mut counts);
        let t = match tallies.get_mut(&counts) {
            Some(t) => t,
            None => tallies.entry(counts.clone()).or_default(),
        };
        *t.entry(descent_stats(w)).or_default() += 1;
    });
    Ok(tallies
        .into_iter()
        .map(|(mult, tally)| {
            let lam = CycleType::from_dense(&mult).expect("partition");
            let jd = JointDistribution::from_tally(&lam, &tally);
            (lam, jd)
        })
        .collect())
}

/// Every member of `C_λ`, in generation order.
pub fn class_members(lam: &CycleType, cap: usize) -> Result<Vec<Permutation>> {
    check_cap(lam.n(), cap)?;
    let mut out = Vec::new();
    for_each_class_member(lam, |w| out.push(Permutation::from_unchecked(w.to_vec())));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{class_size, factorial, partitions_of};
    use std::collections::HashSet;

    fn perm(v: &[u32]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn ct(s: &str) -> CycleType {
        s.parse().unwrap()
    }

    #[test]
    fn statistics_examples() {
        for n in 1..6 {
            let id = Permutation::identity(n);
            assert_eq!((descent_number(&id), major_index(&id)), (1, 0));
        }
        assert_eq!((descent_number(&perm(&[2, 3, 1])), major_index(&perm(&[2, 3, 1]))), (2, 2));
        assert_eq!((descent_number(&perm(&[3, 2, 1])), major_index(&perm(&[3, 2, 1]))), (3, 3));
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![]).is_err());
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![3, 1]).is_err());
    }

    #[test]
    fn cycle_type_examples() {
        assert_eq!(cycle_type_of(&Permutation::identity(4)), ct("1^4"));
        assert_eq!(cycle_type_of(&perm(&[2, 3, 1])), ct("3^1"));
        assert_eq!(cycle_type_of(&perm(&[2, 1, 4, 3])), ct("2^2"));
    }

    #[test]
    fn bruteforce_examples() {
        let jd = joint_distribution_bruteforce(&ct("3^1"), DEFAULT_CAP).unwrap();
        let want: BTreeMap<_, _> = [((2, 1), BigInt::from(1)), ((2, 2), BigInt::from(1))].into_iter().collect();
        assert_eq!(jd.counts, want);
        let jd = joint_distribution_bruteforce(&ct("1^2"), DEFAULT_CAP).unwrap();
        assert_eq!(jd.counts, [((1, 0), BigInt::from(1))].into_iter().collect());
        let jd = joint_distribution_bruteforce(&ct("2^2"), DEFAULT_CAP).unwrap();
        assert_eq!(jd.total(), BigInt::from(3));
    }

    #[test]
    fn cap_is_enforced() {
        let lam = CycleType::ncycle(10);
        assert_eq!(
            joint_distribution_bruteforce(&lam, DEFAULT_CAP),
            Err(Error::CapExceeded { what: "oracle n", got: 10, cap: 9 })
        );
        let lam = CycleType::ncycle(12);
        assert_eq!(
            joint_distribution_bruteforce(&lam, 50),
            Err(Error::CapExceeded { what: "oracle n", got: 12, cap: HARD_CAP })
        );
    }

    #[test]
    fn class_generator_is_exact() {
        for n in 1..=7 {
            for lam in partitions_of(n) {
                let members = class_members(&lam, DEFAULT_CAP).unwrap();
                let distinct: HashSet<_> = members.iter().cloned().collect();
                assert_eq!(distinct.len(), members.len(), "{lam}: duplicates");
                assert_eq!(BigInt::from(members.len()), class_size(&lam), "{lam}");
                assert!(members.iter().all(|p| cycle_type_of(p) == lam), "{lam}");
            }
        }
    }

    #[test]
    fn generator_and_filter_agree() {
        for lam in partitions_of(7) {
            let filtered = joint_distribution_bruteforce(&lam, DEFAULT_CAP).unwrap();
            let mut tally: BTreeMap<(usize, usize), u64> = BTreeMap::new();
            for_each_class_member(&lam, |w| *tally.entry(descent_stats(w)).or_default() += 1);
            assert_eq!(JointDistribution::from_tally(&lam, &tally), filtered, "{lam}");
        }
    }

    #[test]
    fn all_classes_partition_the_group() {
        let all = all_classes_bruteforce(6, DEFAULT_CAP).unwrap();
        assert_eq!(all.len(), 11);
        let total = all.values().fold(BigInt::zero(), |a, jd| a + jd.total());
        assert_eq!(total, factorial(6));
        for (lam, jd) in &all {
            assert_eq!(jd, &joint_distribution_bruteforce(lam, DEFAULT_CAP).unwrap());
        }
    }

    #[test]
    fn generator_reaches_n_ten() {
        let lam = ct("1^1 3^3");
        let jd = joint_distribution_bruteforce(&lam, HARD_CAP).unwrap();
        assert_eq!(jd.total(), class_size(&lam));
    }
}
