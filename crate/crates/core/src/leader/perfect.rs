use serde::{Deserialize, Serialize};

use super::{solve_optimal_incentive, ExpectationSampler, LeaderProblem, LeaderSolution};
use crate::error::{invalid, Result};
use crate::game::{binom_cdf, solve_mixed_probability};
use crate::scalar::Scalar;

/// Vaccination probability at which exactly `delta` of runs miss the threshold:
/// `P(Bin(M, p) <= z_bar - 1) = delta`.
pub fn p_star<T: Scalar>(m: usize, z_bar: usize, delta: T) -> Result<T> {
    if z_bar == 0 || z_bar > m {
        return Err(invalid("need 1 <= z_bar <= M"));
    }
    solve_mixed_probability(m, z_bar as isize - 1, delta)
}

/// Optimal incentive when the predicted vaccinated cost is known to be `gamma`.
///
/// For `z_bar = M` the infimum is not attained; `eps` is added to the boundary incentive.
pub fn perfect_info_solution<T: Scalar>(problem: &LeaderProblem<T>, gamma: T, eps: T) -> Result<LeaderSolution<T>> {
    problem.validate()?;
    let cfg = &problem.game;
    let (m, z_bar) = (cfg.m, cfg.z_bar);
    let mf = T::count(m);
    let (g_raw, p) = if z_bar == m {
        (cfg.c_v + gamma - cfg.c_i + eps, T::one())
    } else {
        let p = p_star(m, z_bar, problem.delta)?;
        (cfg.c_v + gamma - cfg.c_i * binom_cdf(m - 1, z_bar as isize - 1, p), p)
    };
    let u_raw = mf * g_raw * p;
    let om = cfg.outcome_model();
    let sampler = ExpectationSampler::perfect_info(gamma);
    if g_raw <= T::zero() {
        return Ok(LeaderSolution {
            z_bar,
            delta: problem.delta,
            g_star: T::zero(),
            u_star: T::zero(),
            np_at_g: sampler.failure_probability(&om, T::zero()),
            p_mean: om.probability(T::zero(), gamma),
            binding: false,
            g_star_raw: Some(g_raw),
            u_star_raw: Some(u_raw),
        });
    }
    Ok(LeaderSolution {
        z_bar,
        delta: problem.delta,
        g_star: g_raw,
        u_star: u_raw,
        np_at_g: sampler.failure_probability(&om, g_raw),
        p_mean: p,
        binding: true,
        g_star_raw: None,
        u_star_raw: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompareRow<T> {
    pub z_bar: usize,
    pub delta: T,
    pub g_star: T,
    pub u_star: T,
    pub np_at_g: T,
    /// Cheapest threshold for this `delta` among the compared ones.
    pub is_argmin: bool,
}

/// Solves every `(z_bar, delta)` pair with the same draws and flags the cheapest
/// threshold per `delta`.
pub fn compare_across_zbar<T: Scalar>(
    problem: &LeaderProblem<T>,
    sampler: &ExpectationSampler<T>,
    z_bars: &[usize],
    deltas: &[T],
) -> Result<Vec<CompareRow<T>>> {
    let mut rows = Vec::with_capacity(z_bars.len() * deltas.len());
    for &delta in deltas {
        let start = rows.len();
        for &z in z_bars {
            let s = solve_optimal_incentive(&problem.with_z_bar(z).with_delta(delta), sampler)?;
            rows.push(CompareRow {
                z_bar: z,
                delta,
                g_star: s.g_star,
                u_star: s.u_star,
                np_at_g: s.np_at_g,
                is_argmin: false,
            });
        }
        if let Some(best) = (start..rows.len())
            .min_by(|&a, &b| rows[a].u_star.partial_cmp(&rows[b].u_star).expect("finite"))
        {
            rows[best].is_argmin = true;
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{InfluencerGameConfig, SideEffectLaw};

    fn problem(z_bar: usize) -> LeaderProblem<f64> {
        LeaderProblem {
            game: InfluencerGameConfig {
                m: 40,
                horizon: 20,
                c_v: 1.0,
                c_i: 5.0,
                c_se_1: 3.0,
                xi: SideEffectLaw { mean: 5.0, var: 0.0, p0: 0.0 },
                z_bar,
                incentives: vec![0.0; z_bar],
            },
            delta: 0.05,
        }
    }

    #[test]
    fn full_threshold_costs_m_times_the_boundary_incentive() {
        let p = problem(40);
        let s = perfect_info_solution(&p, 4.9, 0.0).unwrap();
        assert!((s.g_star - 0.9).abs() < 1e-12);
        assert!((s.u_star - 36.0).abs() < 1e-10);
    }

    #[test]
    fn clamps_negative_incentives_and_keeps_the_raw_value() {
        let mut p = problem(40);
        p.game.c_i = 10.0;
        let s = perfect_info_solution(&p, 4.9, 0.0).unwrap();
        assert_eq!(s.g_star, 0.0);
        assert!((s.g_star_raw.unwrap() + 4.1).abs() < 1e-12);
    }

    #[test]
    fn bisection_agrees_with_closed_form_for_interior_thresholds() {
        for z in [2, 10, 39] {
            let p = problem(z);
            let a = perfect_info_solution(&p, 4.9, 0.0).unwrap();
            let b = solve_optimal_incentive(&p, &ExpectationSampler::perfect_info(4.9)).unwrap();
            assert!((a.g_star - b.g_star).abs() < 1e-9, "{z}: {} {}", a.g_star, b.g_star);
        }
    }
}
