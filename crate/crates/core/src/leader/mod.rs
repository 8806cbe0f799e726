//! Leader layer: choose the influencer incentive, and jointly the adoption rates, so
//! that eradication fails with probability at most `delta` at least cost.

mod joint;
mod perfect;
mod sampler;

pub use joint::{
    eps_vaccine_optimal_nu, incentive_optimal_design, incentive_optimal_exists, threshold_bound,
    vaccine_optimal_k, EpsDesign, IncentiveOptimalDesign, JointDesign,
};
pub use perfect::{compare_across_zbar, p_star, perfect_info_solution, CompareRow};
pub use sampler::ExpectationSampler;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::game::InfluencerGameConfig;
use crate::scalar::Scalar;

/// Incentive design problem for a fixed eradication threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeaderProblem<T> {
    /// Game primitives; `z_bar` is the threshold and `incentives` is ignored.
    pub game: InfluencerGameConfig<T>,
    /// Tolerated probability of failing to eradicate.
    pub delta: T,
}

impl<T: Scalar> LeaderProblem<T> {
    pub fn validate(&self) -> Result<()> {
        let mut g = self.game.clone();
        g.set_uniform_incentive(T::zero());
        g.validate()?;
        if !(self.delta > T::zero() && self.delta < T::one()) {
            return Err(invalid("delta must lie in (0, 1)"));
        }
        Ok(())
    }

    pub fn with_z_bar(&self, z_bar: usize) -> Self {
        let mut p = self.clone();
        p.game.z_bar = z_bar;
        p.game.set_uniform_incentive(T::zero());
        p
    }

    pub fn with_delta(&self, delta: T) -> Self {
        Self { delta, ..self.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LeaderSolution<T> {
    pub z_bar: usize,
    pub delta: T,
    /// Incentive paid per vaccinating influencer, clamped at zero.
    pub g_star: T,
    /// Expected total payout `M g E[p]`.
    pub u_star: T,
    /// Failure probability at `g_star`.
    pub np_at_g: T,
    /// Mean equilibrium vaccination probability at `g_star`.
    pub p_mean: T,
    /// The failure constraint is active.
    pub binding: bool,
    /// Unclamped incentive from the closed form, when it differs from `g_star`.
    pub g_star_raw: Option<T>,
    pub u_star_raw: Option<T>,
}

/// Smallest incentive whose failure probability is at most `delta`, by bisection on the
/// monotone failure curve over the sampler's draws.
pub fn solve_optimal_incentive<T: Scalar>(
    problem: &LeaderProblem<T>,
    sampler: &ExpectationSampler<T>,
) -> Result<LeaderSolution<T>> {
    problem.validate()?;
    let cfg = &problem.game;
    let om = cfg.outcome_model();
    let m = T::count(cfg.m);
    let delta = problem.delta;
    let np0 = sampler.failure_probability(&om, T::zero());
    if np0 <= delta {
        return Ok(LeaderSolution {
            z_bar: cfg.z_bar,
            delta,
            g_star: T::zero(),
            u_star: T::zero(),
            np_at_g: np0,
            p_mean: sampler.mean_probability(&om, T::zero()),
            binding: false,
            g_star_raw: None,
            u_star_raw: None,
        });
    }
    // Below `lo` nobody vaccinates for any draw; above `hi` everybody does.
    let (gmin, gmax) = sampler.gamma_range();
    let mut lo = (cfg.c_v - cfg.c_i + gmin).max(T::zero());
    let mut hi = (cfg.c_v + gmax).max(lo + T::one());
    let mut grow = 0;
    while sampler.failure_probability(&om, hi) > delta {
        lo = hi;
        hi = hi * T::lit(2.0);
        grow += 1;
        if grow > 60 {
            return Err(Error::Bracketing("failure probability never drops below delta".into()));
        }
    }
    let tol = T::lit(1e-12).max(T::lit(16.0) * T::epsilon());
    // Illinois false position on the bracket; a bisection step whenever two steps
    // left more than 80% of it, which is what happens on the step-shaped curves.
    let excess = |g: T| sampler.failure_probability(&om, g) - delta;
    let (mut f_lo, mut f_hi) = (excess(lo), excess(hi));
    let mut kept = 0i8;
    let mut widths = [T::infinity(); 2];
    for _ in 0..400 {
        let w = hi - lo;
        if w <= tol * T::one().max(hi.abs()) {
            break;
        }
        let bisect = w > widths[0] * T::lit(0.8);
        widths = [widths[1], w];
        let mut mid = hi - f_hi * w / (f_hi - f_lo);
        if bisect || !(mid > lo && mid < hi) {
            mid = (lo + hi) / T::lit(2.0);
        }
        if mid <= lo || mid >= hi {
            break;
        }
        let f = excess(mid);
        if f > T::zero() {
            lo = mid;
            f_lo = f;
            if kept == 1 {
                f_hi = f_hi / T::lit(2.0);
            }
            kept = 1;
        } else {
            hi = mid;
            f_hi = f;
            if kept == -1 {
                f_lo = f_lo / T::lit(2.0);
            }
            kept = -1;
        }
    }
    let p_mean = sampler.mean_probability(&om, hi);
    Ok(LeaderSolution {
        z_bar: cfg.z_bar,
        delta,
        g_star: hi,
        u_star: m * hi * p_mean,
        np_at_g: sampler.failure_probability(&om, hi),
        p_mean,
        binding: true,
        g_star_raw: None,
        u_star_raw: None,
    })
}
