//! Finite-radius densities of sets of endomorphisms.
//!
//! An endomorphism of rank `m` is an `m`-tuple of elements of the ball `G_p`.
//! Sampling draws each image independently and uniformly from `G_p`. Estimates
//! are split into a fixed number of shards; shard `s` draws from a ChaCha8
//! stream `s` seeded by the user seed. The split depends only on the sample
//! count and the shard count, so results do not depend on how many threads
//! run the shards.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigUint;
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::count::{count_words_at_most, enumerate_words, BallCounts};
use crate::endo::Endomorphism;
use crate::remnant::remnant_decomposition;
use crate::word::Word;

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.5758293035489004;

/// Shard count used unless a caller asks for another.
pub const DEFAULT_SHARDS: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DensityError {
    #[error("rank must be at least 1")]
    ZeroRank,
    #[error("at least one sample is required")]
    NoSamples,
    #[error("at least one shard is required")]
    NoShards,
    #[error("{count} endomorphisms exceed the budget of {budget}")]
    BudgetExceeded { count: BigUint, budget: u64 },
    #[error("bound needs m >= 2 and k >= 2, got m={m}, k={k}")]
    Domain { m: usize, k: usize },
}

/// A predicate evaluation that failed on a particular sample.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("predicate failed on sample {sample}: {error}")]
pub struct SampleFailure<E> {
    /// Index of the sample in the shard-major sample order.
    pub sample: u64,
    pub error: E,
}

/// Built-in predicates on endomorphisms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Predicate {
    HasRemnant,
    Rk(usize),
    Sl(usize),
    Always(bool),
}

impl Predicate {
    pub fn eval(&self, phi: &Endomorphism) -> bool {
        match *self {
            Predicate::Always(b) => b,
            Predicate::HasRemnant => remnant_decomposition(phi).has_remnant(),
            Predicate::Rk(k) => remnant_decomposition(phi).in_rk(k),
            Predicate::Sl(l) => remnant_decomposition(phi).in_sl(phi, l),
        }
    }

    /// Identifier used in reports: `remnant`, `Rk=<k>`, `Sl=<l>`, `true` or `false`.
    pub fn id(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::HasRemnant => f.write_str("remnant"),
            Predicate::Rk(k) => write!(f, "Rk={k}"),
            Predicate::Sl(l) => write!(f, "Sl={l}"),
            Predicate::Always(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown predicate `{0}`; expected remnant, Rk=<k>, Sl=<l>, true or false")]
pub struct ParsePredicateError(pub String);

impl FromStr for Predicate {
    type Err = ParsePredicateError;

    fn from_str(s: &str) -> Result<Predicate, ParsePredicateError> {
        let bad = || ParsePredicateError(s.to_string());
        let t = s.trim();
        match t {
            "remnant" => return Ok(Predicate::HasRemnant),
            "true" => return Ok(Predicate::Always(true)),
            "false" => return Ok(Predicate::Always(false)),
            _ => {}
        }
        let (name, value) = t.split_once('=').ok_or_else(bad)?;
        let value: usize = value.trim().parse().map_err(|_| bad())?;
        match name.trim() {
            "Rk" | "R" | "rk" => Ok(Predicate::Rk(value)),
            "Sl" | "S" | "sl" => Ok(Predicate::Sl(value)),
            _ => Err(bad()),
        }
    }
}

/// `m` independent uniform draws from `G_p`.
pub fn sample_endomorphism<R: Rng + ?Sized>(m: usize, p: u32, rng: &mut R) -> Endomorphism {
    let counts = BallCounts::new(m, p);
    sample_with_counts(m, &counts, rng)
}

fn sample_with_counts<R: Rng + ?Sized>(m: usize, counts: &BallCounts, rng: &mut R) -> Endomorphism {
    let images = (0..m)
        .map(|_| {
            let len = counts.sample_length(rng);
            crate::count::sample_word_of_length(m, len, rng)
        })
        .collect();
    Endomorphism::new(images).expect("sampled words use generators below m")
}

/// Samples per shard: an even split, remainders going to the first shards.
pub fn shard_plan(samples: u64, shards: u32) -> Vec<u64> {
    let shards = u64::from(shards.max(1));
    (0..shards).map(|s| samples / shards + u64::from(s < samples % shards)).collect()
}

/// The random stream of one shard.
pub fn shard_rng(seed: u64, shard: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::from(shard));
    rng
}

/// Runs one shard of an estimate and returns its hit count.
///
/// `first_index` is the global index of the shard's first sample, used to
/// report failures.
pub fn run_shard<E, F>(m: usize, p: u32, seed: u64, shard: u32, count: u64, first_index: u64, mut predicate: F) -> Result<u64, SampleFailure<E>>
where
    F: FnMut(&Endomorphism) -> Result<bool, E>,
{
    let counts = BallCounts::new(m, p);
    let mut rng = shard_rng(seed, shard);
    let mut hits = 0;
    for i in 0..count {
        let phi = sample_with_counts(m, &counts, &mut rng);
        if predicate(&phi).map_err(|error| SampleFailure { sample: first_index + i, error })? {
            hits += 1;
        }
    }
    Ok(hits)
}

/// Wilson score interval for `hits` successes in `n` trials at normal quantile `z`.
pub fn wilson_interval(hits: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * libm::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    ((centre - half).clamp(0.0, p), (centre + half).clamp(p, 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityEstimate {
    pub m: usize,
    pub p: u32,
    pub predicate: String,
    pub samples: u64,
    pub hits: u64,
    pub estimate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub seed: u64,
    pub shards: u32,
}

impl DensityEstimate {
    pub fn from_counts(predicate: String, m: usize, p: u32, samples: u64, hits: u64, seed: u64, shards: u32) -> DensityEstimate {
        let (ci_lo, ci_hi) = wilson_interval(hits, samples, Z_99);
        let estimate = if samples == 0 { 0.0 } else { hits as f64 / samples as f64 };
        DensityEstimate { m, p, predicate, samples, hits, estimate, ci_lo, ci_hi, seed, shards }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.ci_lo <= x && x <= self.ci_hi
    }

    /// Binomial standard error of the estimate.
    pub fn std_error(&self) -> f64 {
        libm::sqrt(self.estimate * (1.0 - self.estimate) / self.samples as f64)
    }
}

fn check_args(m: usize, samples: u64, shards: u32) -> Result<(), DensityError> {
    if m == 0 {
        return Err(DensityError::ZeroRank);
    }
    if samples == 0 {
        return Err(DensityError::NoSamples);
    }
    if shards == 0 {
        return Err(DensityError::NoShards);
    }
    Ok(())
}

/// Monte-Carlo estimate with a fallible predicate.
///
/// # Panics
/// When `m`, `samples` or `shards` is zero; [`estimate_density`] reports these as errors.
pub fn estimate_density_with<E, F>(id: &str, m: usize, p: u32, samples: u64, seed: u64, shards: u32, mut predicate: F) -> Result<DensityEstimate, SampleFailure<E>>
where
    F: FnMut(&Endomorphism) -> Result<bool, E>,
{
    assert!(check_args(m, samples, shards).is_ok(), "m, samples and shards must be positive");
    let mut hits = 0;
    let mut first = 0;
    for (s, count) in shard_plan(samples, shards).into_iter().enumerate() {
        hits += run_shard(m, p, seed, s as u32, count, first, &mut predicate)?;
        first += count;
    }
    Ok(DensityEstimate::from_counts(id.to_string(), m, p, samples, hits, seed, shards))
}

/// Monte-Carlo estimate of the density of `predicate` in `G_p^m`, on [`DEFAULT_SHARDS`] shards.
pub fn estimate_density(predicate: Predicate, m: usize, p: u32, samples: u64, seed: u64) -> Result<DensityEstimate, DensityError> {
    estimate_density_sharded(predicate, m, p, samples, seed, DEFAULT_SHARDS)
}

pub fn estimate_density_sharded(predicate: Predicate, m: usize, p: u32, samples: u64, seed: u64, shards: u32) -> Result<DensityEstimate, DensityError> {
    check_args(m, samples, shards)?;
    let est = estimate_density_with::<core::convert::Infallible, _>(&predicate.id(), m, p, samples, seed, shards, |phi| Ok(predicate.eval(phi)));
    Ok(est.unwrap_or_else(|f| match f.error {}))
}

/// One estimate per radius, all from the same seed.
pub fn density_curve(predicate: Predicate, m: usize, ps: &[u32], samples: u64, seed: u64) -> Result<Vec<DensityEstimate>, DensityError> {
    ps.iter().map(|&p| estimate_density(predicate, m, p, samples, seed)).collect()
}

/// Exact `|S ∩ G_p^m| / |G_p^m|` by enumerating every `m`-tuple.
pub fn exact_density(predicate: Predicate, m: usize, p: u32, budget: u64) -> Result<Ratio<BigUint>, DensityError> {
    exact_density_with(m, p, budget, |phi| predicate.eval(phi))
}

pub fn exact_density_with<F: FnMut(&Endomorphism) -> bool>(m: usize, p: u32, budget: u64, mut predicate: F) -> Result<Ratio<BigUint>, DensityError> {
    if m == 0 {
        return Err(DensityError::ZeroRank);
    }
    let total = count_words_at_most(m, p).pow(m as u32);
    if total > BigUint::from(budget) {
        return Err(DensityError::BudgetExceeded { count: total, budget });
    }
    let words: Vec<Word> = enumerate_words(m, p, budget).expect("ball fits the budget").collect();
    let mut digits = alloc::vec![0usize; m];
    let mut hits = 0u64;
    loop {
        let phi = Endomorphism::new(digits.iter().map(|&d| words[d].clone()).collect()).expect("words use generators below m");
        if predicate(&phi) {
            hits += 1;
        }
        let Some(i) = digits.iter().rposition(|&d| d + 1 < words.len()) else { break };
        digits[i] += 1;
        digits[i + 1..].iter_mut().for_each(|d| *d = 0);
    }
    Ok(Ratio::new(BigUint::from(hits), total))
}

/// `((2m-3)/(2m-1))^{k-2}`, the bound on the density of maps outside `S_1` among those in `R_k`.
pub fn conditional_complement_bound(m: usize, k: usize) -> Result<f64, DensityError> {
    if m < 2 || k < 2 {
        return Err(DensityError::Domain { m, k });
    }
    let ratio = (2 * m - 3) as f64 / (2 * m - 1) as f64;
    Ok(libm::pow(ratio, (k - 2) as f64))
}
