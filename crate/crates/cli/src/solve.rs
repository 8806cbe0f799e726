use anyhow::Result;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use vaxgame_core::game::InfluencerGameConfig;
use vaxgame_core::leader::{perfect_info_solution, solve_optimal_incentive, ExpectationSampler, LeaderProblem};
use vaxgame_core::LeaderSolution;

/// Margin added to the boundary incentive when every influencer is needed and the
/// predicted cost is known; the exact boundary itself is a tie that nobody breaks.
pub const PERFECT_EPS: f64 = 1e-9;

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Monte Carlo over the side-effect signals.
    Mc,
    /// Predicted cost fixed at its deterministic value.
    Perfect,
}

/// Sampler for the predicted vaccinated cost; degenerate signals need no sampling.
pub fn sampler(cfg: &InfluencerGameConfig<f64>, mode: Mode, samples: usize, seed: u64) -> Result<ExpectationSampler<f64>> {
    let degenerate = cfg.xi.var == 0.0 && cfg.xi.p0 == 0.0;
    if mode == Mode::Perfect || degenerate {
        return Ok(ExpectationSampler::perfect_info(cfg.gamma_limit()));
    }
    Ok(ExpectationSampler::monte_carlo(cfg, samples, seed)?)
}

pub fn solve(
    cfg: &InfluencerGameConfig<f64>,
    z_bar: usize,
    delta: f64,
    sampler: &ExpectationSampler<f64>,
) -> Result<LeaderSolution> {
    let problem = LeaderProblem { game: cfg.clone(), delta }.with_z_bar(z_bar);
    let sol = match sampler {
        ExpectationSampler::PerfectInfo { gamma } => perfect_info_solution(&problem, *gamma, PERFECT_EPS)?,
        _ => solve_optimal_incentive(&problem, sampler)?,
    };
    Ok(sol)
}

/// Solutions for every threshold `1..=M`, and the index of the cheapest (lowest
/// threshold on ties).
pub fn all_thresholds(
    cfg: &InfluencerGameConfig<f64>,
    delta: f64,
    sampler: &ExpectationSampler<f64>,
) -> Result<(Vec<LeaderSolution>, usize)> {
    use rayon::prelude::*;
    let sols = (1..=cfg.m)
        .into_par_iter()
        .map(|z| solve(cfg, z, delta, sampler))
        .collect::<Result<Vec<_>>>()?;
    let best = cheapest(&sols);
    Ok((sols, best))
}

pub fn cheapest(sols: &[LeaderSolution]) -> usize {
    let mut best = 0;
    for (i, s) in sols.iter().enumerate() {
        if s.u_star < sols[best].u_star {
            best = i;
        }
    }
    best
}

/// Seed for sweep point `i`, derived from the master seed.
pub fn derive_seed(master: u64, i: usize) -> u64 {
    master ^ (i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}
