use serde::{Deserialize, Serialize};

use super::binomial::{binom_cdf, binom_cdf_with_dp};
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Solves `P(Bin(n, p) <= m) = target` for `p` in `(0, 1)` with Newton steps kept
/// inside a shrinking bisection bracket.
pub fn solve_mixed_probability<T: Scalar>(n: usize, m: isize, target: T) -> Result<T> {
    if m < 0 || m as usize >= n {
        return Err(invalid(format!("need 0 <= m < n, got m={m}, n={n}")));
    }
    if !(target > T::zero() && target < T::one()) {
        return Err(Error::NotMixedRegime);
    }
    if m == 0 {
        // (1 - p)^n = target.
        return Ok(-(target.ln() / T::count(n)).exp_m1());
    }
    // Normal approximation for the start: m + 1/2 = n p + z sqrt(n p q) with z ~ 0.
    let start = (T::count(m as usize) + T::lit(0.5)) / T::count(n);
    mixed_root_from(n, m as usize, target, start)
}

/// Newton iteration for the mixed root from `start`, for `1 <= m < n` and a target in `(0, 1)`.
pub(crate) fn mixed_root_from<T: Scalar>(n: usize, m: usize, target: T, start: T) -> Result<T> {
    let tol = T::lit(1e-12).max(T::lit(64.0) * T::epsilon());
    let (mut lo, mut hi) = (T::zero(), T::one());
    let mut p = if start > T::zero() && start < T::one() { start } else { T::lit(0.5) };
    for _ in 0..200 {
        let (cdf, df) = binom_cdf_with_dp(n, m, p);
        let f = cdf - target;
        if f.abs() < tol {
            return Ok(p);
        }
        if f > T::zero() {
            lo = p;
        } else {
            hi = p;
        }
        if hi - lo <= T::epsilon() * T::lit(4.0) {
            return Ok(p);
        }
        let newton = p - f / df;
        p = if df < T::zero() && newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) / T::lit(2.0)
        };
    }
    Err(Error::IterationCap("mixed probability root".into()))
}

/// Cost constants that pin down the last-period equilibrium vaccination probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeModel<T> {
    /// Number of influencers.
    pub m: usize,
    /// Eradication threshold in `1..=m`.
    pub z_bar: usize,
    pub c_v: T,
    pub c_i: T,
}

impl<T: Scalar> OutcomeModel<T> {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.z_bar == 0 || self.z_bar > self.m {
            return Err(invalid("need 1 <= z_bar <= M"));
        }
        if !(self.c_i > T::zero() && self.c_v.is_finite()) {
            return Err(invalid("need C_i > 0 and finite C_v"));
        }
        Ok(())
    }

    /// Equilibrium vaccination probability in the last period when nobody has vaccinated,
    /// for incentive `g` and predicted vaccinated cost `gamma`.
    pub fn probability(&self, g: T, gamma: T) -> T {
        let k = self.c_v + gamma - g;
        if self.z_bar == self.m {
            return if k < self.c_i { T::one() } else { T::zero() };
        }
        if k <= T::zero() {
            return T::one();
        }
        let x = k / self.c_i;
        if x >= T::one() {
            return T::zero();
        }
        solve_mixed_probability(self.m - 1, self.z_bar as isize - 1, x)
            .expect("target lies strictly inside (0, 1)")
    }

    /// As [`Self::probability`], starting the root search from `warm` and storing the
    /// root there; neighbouring predicted costs have neighbouring roots.
    pub(crate) fn probability_warm(&self, g: T, gamma: T, warm: &mut Option<T>) -> T {
        let x = (self.c_v + gamma - g) / self.c_i;
        if self.z_bar == self.m || self.z_bar == 1 || !(x > T::zero() && x < T::one()) {
            return self.probability(g, gamma);
        }
        let m = self.z_bar - 1;
        let start = warm.unwrap_or_else(|| (T::count(m) + T::lit(0.5)) / T::count(self.m - 1));
        let p = mixed_root_from(self.m - 1, m, x, start).expect("target lies strictly inside (0, 1)");
        *warm = Some(p);
        p
    }

    /// Probability that fewer than `z_bar` influencers vaccinate.
    pub fn failure_probability(&self, g: T, gamma: T) -> T {
        binom_cdf(self.m, self.z_bar as isize - 1, self.probability(g, gamma))
    }
}
