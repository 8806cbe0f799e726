use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::strategy::SymmetricProfile;
use super::InfluencerGameConfig;
use crate::error::{invalid, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeReport<T> {
    pub passed: bool,
    /// Largest cost reduction a single agent gets from a one-period deviation.
    pub worst_gain: T,
    /// `(t, z, c)` attaining `worst_gain`.
    pub worst_state: Option<(usize, usize, T)>,
    /// Largest gap between the brute-force vaccinated value and `Gamma_t(c)`.
    pub vaccinated_value_gap: T,
    /// Expected cost of a susceptible influencer at the first period under the profile.
    pub start_value: T,
}

fn pmf<T: Scalar>(n: usize, k: usize, p: T) -> T {
    let mut c = T::one();
    for j in 0..k {
        c = c * T::count(n - j) / T::count(j + 1);
    }
    c * p.powi(k as i32) * (T::one() - p).powi((n - k) as i32)
}

/// Checks a symmetric profile for profitable one-shot deviations at every reachable
/// cost state and every count `z < M`, by backward induction on the discretised
/// signal law `atoms`. In a finite game this is equivalent to subgame perfection.
pub fn verify_symmetric_ne<T: Scalar, P: SymmetricProfile<T> + ?Sized>(
    profile: &P,
    cfg: &InfluencerGameConfig<T>,
    atoms: &[(T, T)],
    tol: T,
) -> Result<NeReport<T>> {
    cfg.validate()?;
    let tt = cfg.horizon;
    let m = cfg.m;
    // Reachable running means per period, keyed by bit pattern.
    let mut levels: Vec<Vec<T>> = vec![Vec::new(); tt + 1];
    levels[1].push(cfg.c_se_1);
    for t in 1..tt {
        let mut seen = HashMap::new();
        for &c in &levels[t] {
            for &(xi, _) in atoms {
                let c1 = InfluencerGameConfig::next_cost(t + 1, c, xi);
                seen.entry(c1.as_f64().to_bits()).or_insert(c1);
            }
        }
        let mut next: Vec<T> = seen.into_values().collect();
        next.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        levels[t + 1] = next;
    }
    let key = |c: T| c.as_f64().to_bits();

    let mut vac: HashMap<u64, T> = levels[tt].iter().map(|&c| (key(c), c)).collect();
    let mut sus: HashMap<(usize, u64), T> = HashMap::new();
    for &c in &levels[tt] {
        for z in 0..=m {
            sus.insert((z, key(c)), if z < cfg.z_bar { cfg.c_i } else { T::zero() });
        }
    }

    let mut worst = T::neg_infinity();
    let mut worst_state = None;
    let mut vac_gap = T::zero();
    for t in (1..tt).rev() {
        let mut vac_t = HashMap::new();
        let mut sus_t = HashMap::new();
        for &c in &levels[t] {
            let nexts: Vec<(T, u64)> = atoms
                .iter()
                .map(|&(xi, w)| (w, key(InfluencerGameConfig::next_cost(t + 1, c, xi))))
                .collect();
            let ev: T = nexts.iter().map(|(w, k)| *w * vac[k]).sum();
            vac_gap = vac_gap.max((ev - cfg.gamma(t, c)).abs());
            vac_t.insert(key(c), ev);
            for z in 0..m {
                let q = profile.decision(t, z, c)?;
                if !(q >= T::zero() && q <= T::one()) {
                    return Err(invalid(format!("profile returned {q} at t={t}, z={z}")));
                }
                let a_v = cfg.c_v - cfg.incentive(z) + ev;
                let l = m - z - 1;
                let mut a_s = T::zero();
                for y in 0..=l {
                    let py = pmf(l, y, q);
                    if py == T::zero() {
                        continue;
                    }
                    let cont: T = nexts.iter().map(|(w, k)| *w * sus[&(z + y, *k)]).sum();
                    a_s = a_s + py * cont;
                }
                let own = q * a_v + (T::one() - q) * a_s;
                let gain = own - a_v.min(a_s);
                if gain > worst {
                    worst = gain;
                    worst_state = Some((t, z, c));
                }
                sus_t.insert((z, key(c)), own);
            }
            sus_t.insert((m, key(c)), T::zero());
        }
        vac = vac_t;
        sus = sus_t;
    }
    let start_value = sus[&(0, key(cfg.c_se_1))];
    Ok(NeReport { passed: worst <= tol, worst_gain: worst, worst_state, vaccinated_value_gap: vac_gap, start_value })
}
