use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{acceptance, DiseaseParams, OdeState, VaRatePolicy};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct JumpOptions {
    /// Initial population size.
    pub n0: u64,
    /// Number of events to simulate.
    pub events: u64,
    /// Record every k-th event.
    pub record_every: u64,
    pub seed: u64,
}

impl Default for JumpOptions {
    fn default() -> Self {
        Self { n0: 10_000, events: 200_000, record_every: 100, seed: 0 }
    }
}

#[derive(Debug, Clone)]
pub struct JumpTrajectory {
    /// Rescaled time matched to the ODE clock.
    pub times: Vec<f64>,
    pub states: Vec<OdeState<f64>>,
    /// The population died out before the event budget was spent.
    pub extinct: bool,
}

/// Finite-population jump process whose rescaled path follows the mean-field ODE.
///
/// Each event is drawn from the embedded chain with probability proportional to its
/// per-capita rate. The event counter starts at `n0 / eta0` so that `eta = N / n`, and
/// event `n` advances the ODE clock by `1 / (n + 1)`.
pub fn simulate_jump(
    x0: OdeState<f64>,
    disease: &DiseaseParams<f64>,
    nu: &VaRatePolicy<f64>,
    beta: f64,
    opts: &JumpOptions,
) -> Result<JumpTrajectory> {
    disease.validate()?;
    nu.validate()?;
    if !x0.in_simplex(1e-12) || x0.eta <= 0.0 {
        return Err(invalid("initial state must lie in the simplex with eta > 0"));
    }
    if opts.n0 == 0 {
        return Err(invalid("initial population must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let n0 = opts.n0 as f64;
    let mut i = (x0.theta * n0).round() as u64;
    let mut v = (x0.psi * n0).round() as u64;
    let mut s = opts.n0.saturating_sub(i + v);
    let mut n = (n0 / x0.eta).round().max(1.0);
    let mut t = 0.0;
    let every = opts.record_every.max(1);

    let snapshot = |s: u64, i: u64, v: u64, n: f64| {
        let tot = (s + i + v) as f64;
        if tot == 0.0 {
            return OdeState::new(0.0, 0.0, 0.0);
        }
        OdeState::new(i as f64 / tot, v as f64 / tot, tot / n)
    };
    let mut times = vec![t];
    let mut states = vec![snapshot(s, i, v, n)];

    for k in 1..=opts.events {
        let tot = s + i + v;
        if tot == 0 {
            return Ok(JumpTrajectory { times, states, extinct: true });
        }
        let totf = tot as f64;
        let (theta, psi, phi) = (i as f64 / totf, v as f64 / totf, s as f64 / totf);
        let rates = [
            disease.b,
            disease.d,
            disease.lambda * theta * phi,
            (nu.nu_b + nu.nu_e * psi) * phi,
            disease.r * theta,
        ];
        let total: f64 = rates.iter().sum();
        let mut u = rng.random::<f64>() * total;
        let mut ev = rates.len() - 1;
        for (j, r) in rates.iter().enumerate() {
            if u < *r {
                ev = j;
                break;
            }
            u -= r;
        }
        match ev {
            0 => s += 1,
            1 => {
                let pick = rng.random_range(0..tot);
                if pick < s {
                    s -= 1;
                } else if pick < s + i {
                    i -= 1;
                } else {
                    v -= 1;
                }
            }
            2 => {
                s -= 1;
                i += 1;
            }
            3 => {
                if rng.random::<f64>() < acceptance(beta, psi) {
                    s -= 1;
                    v += 1;
                }
            }
            _ => {
                i -= 1;
                s += 1;
            }
        }
        t += 1.0 / (n + 1.0);
        n += 1.0;
        if k % every == 0 {
            times.push(t);
            states.push(snapshot(s, i, v, n));
        }
    }
    Ok(JumpTrajectory { times, states, extinct: false })
}
