use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::InfluencerGameConfig;
use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// Draws per independent random stream. Fixing the chunking keeps results identical
/// across thread counts.
const CHUNK: usize = 4096;

fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// Samples the predicted vaccinated cost at the last decision period,
/// `Gamma_{T-1}(C_{T-1}) = (c_1 + xi_2 + ... + xi_{T-1} + E[xi]) / T`.
pub fn sample_gamma_c<T: Scalar>(cfg: &InfluencerGameConfig<T>, n: usize, seed: u64) -> Result<Vec<T>> {
    cfg.xi.validate()?;
    if cfg.horizon < 2 {
        return Err(invalid("need T >= 2"));
    }
    if n == 0 {
        return Err(invalid("need at least one sample"));
    }
    let base = cfg.c_se_1.as_f64() + cfg.xi.expected().as_f64();
    let tt = cfg.horizon as f64;
    let draws = cfg.horizon - 2;
    let n_chunks = n.div_ceil(CHUNK);
    let out: Vec<Vec<T>> = (0..n_chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = chunk_rng(seed, k);
            let len = CHUNK.min(n - k * CHUNK);
            (0..len)
                .map(|_| {
                    let s: f64 = (0..draws).map(|_| cfg.xi.sample(&mut rng)).sum();
                    T::lit((base + s) / tt)
                })
                .collect()
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutcomeSummary {
    /// Mean equilibrium vaccination probability in the last period.
    pub p_mean: f64,
    /// Counts of the number of vaccinated influencers at the horizon, indexed `0..=M`.
    pub histogram: Vec<u64>,
    /// Fraction of runs reaching the eradication threshold.
    pub eradication_rate: f64,
}

/// Plays the wait-and-watch equilibrium `n` times with incentive `g_0`.
pub fn simulate_outcomes(cfg: &InfluencerGameConfig<f64>, n: usize, seed: u64) -> Result<OutcomeSummary> {
    cfg.validate()?;
    let gammas = sample_gamma_c(cfg, n, seed)?;
    let om = cfg.outcome_model();
    let g = cfg.incentive(0);
    let n_chunks = n.div_ceil(CHUNK);
    let parts: Vec<(f64, Vec<u64>)> = (0..n_chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = chunk_rng(seed ^ 0x5eed_0f_2a11, k);
            let mut hist = vec![0u64; cfg.m + 1];
            let mut psum = 0.0;
            for &gamma in &gammas[k * CHUNK..(k * CHUNK + CHUNK).min(n)] {
                let p = om.probability(g, gamma);
                psum += p;
                let z = (0..cfg.m).filter(|_| rng.random::<f64>() < p).count();
                hist[z] += 1;
            }
            (psum, hist)
        })
        .collect();
    let mut histogram = vec![0u64; cfg.m + 1];
    let mut psum = 0.0;
    for (p, h) in parts {
        psum += p;
        for (a, b) in histogram.iter_mut().zip(h) {
            *a += b;
        }
    }
    let hits: u64 = histogram[cfg.z_bar..].iter().sum();
    Ok(OutcomeSummary {
        p_mean: psum / n as f64,
        histogram,
        eradication_rate: hits as f64 / n as f64,
    })
}
