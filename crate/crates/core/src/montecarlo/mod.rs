//! Monte Carlo oracle: i.i.d. Rayleigh channels, direct SINR evaluation,
//! decomposition sampling, and empirical-distribution statistics.
//!
//! Randomness is organised in fixed blocks of [`BLOCK_SIZE`] draws. Block b
//! uses ChaCha8 seeded from the run seed on stream b, so the sample sequence
//! depends only on (seed, n_samples). Shards are contiguous ranges of blocks
//! and their outputs are concatenated or merged in block order, which makes
//! every aggregate bit-identical for any shard count.

mod channel;
mod stats;

pub use channel::{
    channel_components, sample_channel, sample_decomposed, sinr_direct, ChannelMatrix, SinrComponents,
};
pub use stats::{
    dkw_half_width, empirical_cdf, empirical_cdf_values, kolmogorov_p_value, ks_statistic, ks_test,
    two_sample_ks, two_sample_ks_test, KsResult, RunningStats,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::parallel::{map_indexed, Execution};

/// The generator behind every Monte Carlo stream.
pub type McRng = ChaCha8Rng;

/// Draws per RNG block.
pub const BLOCK_SIZE: usize = 4096;

/// How SINR draws are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampler {
    /// Full L×K channel matrix per draw.
    #[default]
    Direct,
    /// Independent Y ~ Inv-Gamma and X_i ~ Beta(1, L-1) per draw.
    Decomposed,
}

impl Sampler {
    pub fn as_str(&self) -> &'static str {
        match self {
            Sampler::Direct => "direct",
            Sampler::Decomposed => "decomposed",
        }
    }
}

impl std::str::FromStr for Sampler {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Sampler::Direct),
            "decomposed" => Ok(Sampler::Decomposed),
            _ => Err(Error::domain("Sampler", format!("unknown sampler '{s}'"))),
        }
    }
}

/// Sample count, seed and work partitioning of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McSpec {
    pub n_samples: usize,
    pub seed: u64,
    pub shards: usize,
    pub sampler: Sampler,
}

impl McSpec {
    pub fn new(n_samples: usize, seed: u64) -> Self {
        McSpec {
            n_samples,
            seed,
            shards: default_shards(),
            sampler: Sampler::Direct,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_shards(mut self, shards: usize) -> Self {
        self.shards = shards;
        self
    }

    pub fn with_sampler(mut self, sampler: Sampler) -> Self {
        self.sampler = sampler;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::domain("McSpec", "n_samples must be positive"));
        }
        if self.shards == 0 {
            return Err(Error::domain("McSpec", "shards must be positive"));
        }
        Ok(())
    }

    fn blocks(&self) -> usize {
        self.n_samples.div_ceil(BLOCK_SIZE)
    }

    fn block_len(&self, block: usize) -> usize {
        BLOCK_SIZE.min(self.n_samples - block * BLOCK_SIZE)
    }
}

fn default_shards() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Generator for block `block` of a run seeded with `seed`.
pub fn block_rng(seed: u64, block: usize) -> McRng {
    let mut rng = McRng::seed_from_u64(seed);
    rng.set_stream(block as u64);
    rng
}

/// Run `per_block(rng, len)` on every block and return the results in block
/// order. Shards process contiguous block ranges.
pub fn run_blocks<T, F>(mc: &McSpec, exec: Execution, per_block: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut McRng, usize) -> T + Sync,
{
    mc.validate()?;
    let blocks = mc.blocks();
    let shards = mc.shards.min(blocks);
    let per_shard = blocks.div_ceil(shards);
    let parts = map_indexed(shards, exec, |s| {
        let lo = s * per_shard;
        let hi = ((s + 1) * per_shard).min(blocks);
        (lo..hi)
            .map(|b| per_block(&mut block_rng(mc.seed, b), mc.block_len(b)))
            .collect::<Vec<T>>()
    });
    Ok(parts.into_iter().flatten().collect())
}

/// Like [`run_blocks`] for per-draw values, flattened into one vector.
pub fn sample_values<T, F>(mc: &McSpec, exec: Execution, draw: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut McRng) -> T + Sync,
{
    let blocks = run_blocks(mc, exec, |rng, len| (0..len).map(|_| draw(rng)).collect::<Vec<T>>())?;
    Ok(blocks.into_iter().flatten().collect())
}

/// SINR components of the tagged user (index 0), one per draw.
pub fn sample_components(cfg: &SystemConfig, mc: &McSpec, exec: Execution) -> Result<Vec<SinrComponents>> {
    match mc.sampler {
        Sampler::Direct => sample_values(mc, exec, |rng| {
            let h = sample_channel(cfg, rng);
            channel_components(&h, 0).expect("Gaussian columns are nonzero with probability one")
        }),
        Sampler::Decomposed => sample_values(mc, exec, |rng| sample_decomposed(cfg, rng)),
    }
}

/// SINR draws of the tagged user at the configured transmit power.
pub fn sample_sinr(cfg: &SystemConfig, mc: &McSpec, exec: Execution) -> Result<Vec<f64>> {
    let comps = sample_components(cfg, mc, exec)?;
    Ok(comps.iter().map(|c| c.sinr(cfg.p_t(), cfg.sigma2(), cfg.users())).collect())
}

/// Draws of |h_kᵀh_i*|²/(‖h_k‖²‖h_i‖²) from pairs of raw Gaussian columns.
pub fn sample_normalized_interference(antennas: u32, mc: &McSpec, exec: Execution) -> Result<Vec<f64>> {
    if antennas < 2 {
        return Err(Error::domain("sample_normalized_interference", "needs L >= 2"));
    }
    let cfg = SystemConfig::new(antennas, 2, 1.0, 1.0)?;
    sample_values(mc, exec, |rng| {
        let h = sample_channel(&cfg, rng);
        let (hk, hi) = (h.column(0), h.column(1));
        let inner: num_complex::Complex64 = hk.iter().zip(hi).map(|(a, b)| a * b.conj()).sum();
        inner.norm_sqr() / (norm_sqr(hk) * norm_sqr(hi))
    })
}

pub(crate) fn norm_sqr(v: &[num_complex::Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// Sample mean and standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

/// Mean of ln(1 + SINR) over channel draws, in nats/s/Hz.
pub fn ergodic_rate_mc(cfg: &SystemConfig, mc: &McSpec, exec: Execution) -> Result<Estimate> {
    Ok(ergodic_rate_mc_sweep(cfg, &[cfg.p_t()], mc, exec)?[0])
}

/// Ergodic rate at several transmit powers from one set of channel draws.
pub fn ergodic_rate_mc_sweep(cfg: &SystemConfig, powers: &[f64], mc: &McSpec, exec: Execution) -> Result<Vec<Estimate>> {
    for &p in powers {
        cfg.with_power(p)?;
    }
    let (sigma2, k) = (cfg.sigma2(), cfg.users());
    let per_block = run_blocks(mc, exec, |rng, len| {
        let mut acc = vec![RunningStats::new(); powers.len()];
        for _ in 0..len {
            let c = match mc.sampler {
                Sampler::Direct => channel_components(&sample_channel(cfg, rng), 0)
                    .expect("Gaussian columns are nonzero with probability one"),
                Sampler::Decomposed => sample_decomposed(cfg, rng),
            };
            for (s, &p) in acc.iter_mut().zip(powers) {
                s.push(c.sinr(p, sigma2, k).ln_1p());
            }
        }
        acc
    })?;
    let mut total = vec![RunningStats::new(); powers.len()];
    for block in &per_block {
        for (t, b) in total.iter_mut().zip(block) {
            t.merge(b);
        }
    }
    total.iter().map(RunningStats::estimate).collect()
}

/// Empirical Pr{|E - L·X_i| ≤ ε} with E ~ Exp(1) drawn independently of
/// X_i ~ Beta(1, L-1).
pub fn coupling_probability(antennas: u32, eps: f64, mc: &McSpec, exec: Execution) -> Result<Estimate> {
    if antennas < 2 || !(eps > 0.0) {
        return Err(Error::domain("coupling_probability", "needs L >= 2 and eps > 0"));
    }
    let l = f64::from(antennas);
    let shape = 1.0 / (l - 1.0);
    let hits = run_blocks(mc, exec, |rng, len| {
        (0..len)
            .filter(|_| {
                let x = 1.0 - rng.random::<f64>().powf(shape);
                let e: f64 = rng.sample(Exp1);
                (e - l * x).abs() <= eps
            })
            .count()
    })?;
    let n = mc.n_samples as f64;
    let p = hits.iter().sum::<usize>() as f64 / n;
    Ok(Estimate {
        mean: p,
        std_error: (p * (1.0 - p) / n).sqrt(),
    })
}
