//! Finite-horizon stochastic game among influencers deciding when to vaccinate.

mod binomial;
mod mixed;
mod sample;
mod strategy;
mod verify;

pub use binomial::{binom_cdf, binom_cdf_dp, binom_pmf};
pub use mixed::{solve_mixed_probability, OutcomeModel};
pub use sample::{sample_gamma_c, simulate_outcomes, OutcomeSummary};
pub use strategy::{ActionSet, Selector, SpecialStrategy, SymmetricProfile};
pub use verify::{verify_symmetric_ne, NeReport};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// Law of the per-period side-effect signal: zero with probability `p0`, otherwise a
/// normal variable censored at zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideEffectLaw<T> {
    /// Mean of the underlying normal.
    pub mean: T,
    /// Variance of the underlying normal.
    pub var: T,
    /// Extra mass at zero.
    pub p0: T,
}

impl<T: Scalar> SideEffectLaw<T> {
    pub fn validate(&self) -> Result<()> {
        if !self.mean.is_finite() || !(self.var >= T::zero() && self.var.is_finite()) {
            return Err(invalid("side-effect law needs finite mean and variance >= 0"));
        }
        if !(self.p0 >= T::zero() && self.p0 < T::one()) {
            return Err(invalid("p0 must lie in [0, 1)"));
        }
        Ok(())
    }

    /// Mean after censoring, `(1 - p0) (mu Phi(mu/sigma) + sigma phi(mu/sigma))`.
    pub fn expected(&self) -> T {
        let mu = self.mean.as_f64();
        let sd = self.var.as_f64().sqrt();
        let m = if sd == 0.0 {
            mu.max(0.0)
        } else {
            let n = Normal::standard();
            let a = mu / sd;
            mu * n.cdf(a) + sd * (-0.5 * a * a).exp() / (2.0 * std::f64::consts::PI).sqrt()
        };
        T::lit((1.0 - self.p0.as_f64()) * m)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let p0 = self.p0.as_f64();
        if p0 > 0.0 && rng.random::<f64>() < p0 {
            return 0.0;
        }
        let z: f64 = StandardNormal.sample(rng);
        (self.mean.as_f64() + self.var.as_f64().sqrt() * z).max(0.0)
    }

    /// Discrete approximation `(value, weight)`; exact for zero variance, otherwise
    /// `n` mid-point quantiles of the normal, shifted to keep the censored mean.
    pub fn atoms(&self, n: usize) -> Vec<(T, T)> {
        let mut out = Vec::new();
        if self.p0 > T::zero() {
            out.push((T::zero(), self.p0));
        }
        let rest = T::one() - self.p0;
        if self.var == T::zero() || n <= 1 {
            out.push((self.mean.max(T::zero()), rest));
        } else {
            let nd = Normal::new(self.mean.as_f64(), self.var.as_f64().sqrt()).expect("valid normal");
            let w = rest / T::count(n);
            for i in 0..n {
                let u = (i as f64 + 0.5) / n as f64;
                out.push((T::lit(nd.inverse_cdf(u).max(0.0)), w));
            }
            // Shift the positive atoms so the grid mean equals `expected()`; the
            // predicted-cost formula relies on that mean.
            let mean: T = out.iter().map(|(v, w)| *v * *w).sum();
            let pos: T = out.iter().filter(|(v, _)| *v > T::zero()).map(|(_, w)| *w).sum();
            if pos > T::zero() {
                let shift = (self.expected() - mean) / pos;
                for (v, _) in out.iter_mut().filter(|(v, _)| *v > T::zero()) {
                    *v = (*v + shift).max(T::zero());
                }
            }
        }
        out
    }
}

/// Influencer game primitives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfluencerGameConfig<T> {
    /// Number of influencers.
    pub m: usize,
    /// Horizon; decisions happen at `t = 1..T-1`, the outcome is settled at `T`.
    pub horizon: usize,
    /// Cost of vaccinating before incentives.
    pub c_v: T,
    /// Cost of staying susceptible when eradication fails.
    pub c_i: T,
    /// Initial side-effect estimate.
    pub c_se_1: T,
    pub xi: SideEffectLaw<T>,
    /// Number of vaccinated influencers needed for eradication.
    pub z_bar: usize,
    /// Incentive `g_z` paid to an influencer vaccinating while `z < z_bar` others have.
    pub incentives: Vec<T>,
}

impl<T: Scalar> InfluencerGameConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.horizon < 2 {
            return Err(invalid("need M >= 1 and T >= 2"));
        }
        if self.z_bar == 0 || self.z_bar > self.m {
            return Err(invalid("need 1 <= z_bar <= M"));
        }
        if !(self.c_i > T::zero()) || !self.c_v.is_finite() || !self.c_se_1.is_finite() {
            return Err(invalid("need C_i > 0 and finite C_v, c_1"));
        }
        if self.incentives.len() != self.z_bar {
            return Err(invalid(format!("expected {} incentives, got {}", self.z_bar, self.incentives.len())));
        }
        if self.incentives.iter().any(|g| !(*g >= T::zero() && g.is_finite())) {
            return Err(invalid("incentives must be finite and non-negative"));
        }
        self.xi.validate()
    }

    /// Same incentive for every `z < z_bar`.
    pub fn set_uniform_incentive(&mut self, g: T) {
        self.incentives = vec![g; self.z_bar];
    }

    pub fn incentive(&self, z: usize) -> T {
        self.incentives.get(z).copied().unwrap_or(T::zero())
    }

    pub fn outcome_model(&self) -> OutcomeModel<T> {
        OutcomeModel { m: self.m, z_bar: self.z_bar, c_v: self.c_v, c_i: self.c_i }
    }

    /// Expected terminal side-effect cost seen from period `t` with running mean `c`.
    pub fn gamma(&self, t: usize, c: T) -> T {
        let tt = T::count(self.horizon);
        let ts = T::count(t);
        ts / tt * c + (tt - ts) / tt * self.xi.expected()
    }

    /// Running mean update from period `t - 1` to `t`.
    pub fn next_cost(t: usize, c: T, xi: T) -> T {
        c + (xi - c) / T::count(t)
    }

    /// Long-run predicted cost `(c_1 + (T - 1) E[xi]) / T`, the value of `Gamma` at
    /// the last decision when signals are deterministic.
    pub fn gamma_limit(&self) -> T {
        (self.c_se_1 + T::count(self.horizon - 1) * self.xi.expected()) / T::count(self.horizon)
    }
}
