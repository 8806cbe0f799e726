use rayon::prelude::*;

use crate::error::Result;
use crate::game::{binom_cdf, sample_gamma_c, InfluencerGameConfig, OutcomeModel};
use crate::scalar::Scalar;

const CHUNK: usize = 2048;

/// Distribution of the predicted vaccinated cost at the last decision period, either a
/// single known value or a fixed set of draws reused across every evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum ExpectationSampler<T> {
    PerfectInfo { gamma: T },
    Draws(Vec<T>),
}

impl<T: Scalar> ExpectationSampler<T> {
    pub fn perfect_info(gamma: T) -> Self {
        Self::PerfectInfo { gamma }
    }

    pub fn monte_carlo(cfg: &InfluencerGameConfig<T>, n: usize, seed: u64) -> Result<Self> {
        // Sorted so that consecutive draws can share root-finding work.
        let mut d = sample_gamma_c(cfg, n, seed)?;
        d.sort_by(|a, b| a.partial_cmp(b).expect("finite draws"));
        Ok(Self::Draws(d))
    }

    pub fn len(&self) -> usize {
        match self {
            Self::PerfectInfo { .. } => 1,
            Self::Draws(d) => d.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn gamma_range(&self) -> (T, T) {
        match self {
            Self::PerfectInfo { gamma } => (*gamma, *gamma),
            Self::Draws(d) => d
                .iter()
                .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &x| (lo.min(x), hi.max(x))),
        }
    }

    /// Mean of `f` applied to the equilibrium probability at each draw. The chunked
    /// reduction keeps the result independent of the thread count.
    fn mean_over_probability<F: Fn(T) -> T + Sync>(&self, om: &OutcomeModel<T>, g: T, f: F) -> T {
        match self {
            Self::PerfectInfo { gamma } => f(om.probability(g, *gamma)),
            Self::Draws(d) => {
                let parts: Vec<T> = d
                    .par_chunks(CHUNK)
                    .map(|c| {
                        let mut warm = None;
                        c.iter().map(|&x| f(om.probability_warm(g, x, &mut warm))).sum()
                    })
                    .collect();
                parts.into_iter().sum::<T>() / T::count(d.len())
            }
        }
    }

    /// Probability that fewer than `z_bar` influencers vaccinate under incentive `g`.
    pub fn failure_probability(&self, om: &OutcomeModel<T>, g: T) -> T {
        let l = om.z_bar as isize - 1;
        self.mean_over_probability(om, g, |p| binom_cdf(om.m, l, p))
    }

    /// Expected equilibrium vaccination probability under incentive `g`.
    pub fn mean_probability(&self, om: &OutcomeModel<T>, g: T) -> T {
        self.mean_over_probability(om, g, |p| p)
    }
}
