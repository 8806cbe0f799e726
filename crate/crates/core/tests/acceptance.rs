//! End-to-end acceptance checks. Runs as a plain binary so every criterion prints one
//! PASS/FAIL line even when the output is not captured.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vaxgame_core::epidemic::{
    candidate_attractors, integrate, simulate_jump, AttractorKind, DiseaseParams, IntegrateOptions, JumpOptions,
    OdeState, VaRatePolicy, ode_rhs,
};
use vaxgame_core::ess::{eradication_probability, eradication_threshold, InfluenceCost, PublicCostModel};
use vaxgame_core::game::{
    binom_cdf, InfluencerGameConfig, Selector, SideEffectLaw, SpecialStrategy, SymmetricProfile,
    verify_symmetric_ne,
};
use vaxgame_core::leader::{
    eps_vaccine_optimal_nu, incentive_optimal_exists, perfect_info_solution, solve_optimal_incentive,
    threshold_bound, vaccine_optimal_k, ExpectationSampler, JointDesign, LeaderProblem,
};
use vaxgame_core::{Error, Result};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within(start: Instant, limit: Duration) -> bool {
    start.elapsed() <= limit
}

/// Game parameters shared by the leader figures.
fn fig1_game(var: f64, z_bar: usize) -> InfluencerGameConfig<f64> {
    InfluencerGameConfig {
        m: 40,
        horizon: 20,
        c_v: 1.0,
        c_i: 5.0,
        c_se_1: 3.0,
        xi: SideEffectLaw { mean: 5.0, var, p0: 0.0 },
        z_bar,
        incentives: vec![0.0; z_bar],
    }
}

fn fig5_costs(s: f64) -> PublicCostModel<f64> {
    PublicCostModel { c_v1: 0.2, c_v2: 0.05, c_v2_bar: 100.0, c_i: 0.5, m: 40, influence: InfluenceCost::Linear { s } }
}

fn fig5_disease() -> DiseaseParams<f64> {
    DiseaseParams::new(15.0, 2.0, 2.0)
}

fn closed_form_single(m: usize, delta: f64, c_v: f64, gamma: f64, c_i: f64) -> f64 {
    (c_v + gamma - c_i * delta.powf((m as f64 - 1.0) / m as f64)).max(0.0)
}

fn criterion_1() -> Result<Outcome> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let m = rng.random_range(1..=40usize);
        let delta = 10f64.powf(rng.random_range(-3.0..(0.3f64).log10()));
        let c_v = rng.random_range(0.0..3.0);
        let gamma = rng.random_range(0.0..10.0);
        let c_i = rng.random_range(0.5..10.0);
        let mut game = fig1_game(0.0, 1);
        game.m = m;
        game.c_v = c_v;
        game.c_i = c_i;
        let problem = LeaderProblem { game, delta };
        let bis = solve_optimal_incentive(&problem, &ExpectationSampler::perfect_info(gamma))?;
        let exact = closed_form_single(m, delta, c_v, gamma, c_i);
        let formula = perfect_info_solution(&problem, gamma, 0.0)?;
        worst = worst.max((bis.g_star - exact).abs()).max((formula.g_star - exact).abs());
    }
    let ok = worst < 1e-9 && within(start, Duration::from_secs(5));
    Ok(outcome(ok, format!("max |g* - closed form| = {worst:.2e} over 200 tuples")))
}

/// Draws parameters until the requested candidate is active with some margin.
fn draw_case(rng: &mut ChaCha8Rng, kind: AttractorKind) -> (DiseaseParams<f64>, VaRatePolicy<f64>, f64) {
    loop {
        let b: f64 = rng.random_range(0.5..3.0);
        let r: f64 = rng.random_range(0.0..3.0);
        let lambda = match kind {
            AttractorKind::SelfEradicating => rng.random_range(0.1..0.9) * (r + b),
            _ => rng.random_range(1.3..6.0) * (r + b),
        };
        let d = rng.random_range(0.0..0.9) * b;
        let disease = DiseaseParams { lambda, r, b, d };
        let rho = disease.rho();
        let ts = if rho > 1.0 { disease.theta_star() } else { 0.0 };
        let nu_b = rng.random_range(0.05..2.0) * b * rho.max(1.0);
        let bound = b * rho - nu_b / ts.max(1e-12);
        let nu_e = match kind {
            AttractorKind::Eradicating => bound.max(0.0) + rng.random_range(0.1..3.0) * b,
            AttractorKind::CoOccurring => {
                if bound <= 0.2 * b {
                    continue;
                }
                rng.random_range(0.0..0.8) * bound
            }
            _ => rng.random_range(0.0..2.0) * b,
        };
        let nu = VaRatePolicy::new(nu_b, nu_e);
        let set = candidate_attractors(&disease, &nu, 1.0);
        let psi = match set.get(kind).state {
            Some(x) => x.psi,
            None => continue,
        };
        let beta = match kind {
            AttractorKind::SelfEradicating => rng.random_range(0.1..0.9) * b / nu_b,
            AttractorKind::NonVaccinating => rng.random_range(0.1..0.9) * b * rho / nu_b,
            _ => rng.random_range(1.2..4.0) / psi,
        };
        let set = candidate_attractors(&disease, &nu, beta);
        if set.get(kind).active {
            return (disease, nu, beta);
        }
    }
}

fn criterion_2() -> Result<Outcome> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let opts = IntegrateOptions { t_max: 1e6, ..Default::default() };
    let kinds = [
        AttractorKind::NonVaccinating,
        AttractorKind::Eradicating,
        AttractorKind::CoOccurring,
        AttractorKind::SelfEradicating,
    ];
    let (mut worst_res, mut worst_ret, mut failures): (f64, f64, usize) = (0.0, 0.0, 0);
    for kind in kinds {
        for _ in 0..500 {
            let (disease, nu, beta) = draw_case(&mut rng, kind);
            let set = candidate_attractors(&disease, &nu, beta);
            let target = set.get(kind).state.expect("active implies state");
            worst_res = worst_res.max(ode_rhs(&target, &disease, &nu, beta).max_norm());
            let mut x0 = target;
            x0.theta = (x0.theta + rng.random_range(-1e-2..1e-2)).max(if target.theta > 0.0 { 0.0 } else { 1e-2 });
            x0.psi = (x0.psi + rng.random_range(-1e-2..1e-2)).max(0.0);
            if x0.theta + x0.psi > 1.0 {
                x0.psi = 1.0 - x0.theta;
            }
            x0.eta += rng.random_range(-1e-2..1e-2);
            match integrate(x0, &disease, &nu, beta, &opts)?.limit {
                Some(lim) => worst_ret = worst_ret.max(lim.max_abs_diff(&target)),
                None => failures += 1,
            }
        }
    }
    let ok = worst_res < 1e-10 && worst_ret < 1e-4 && failures == 0 && within(start, Duration::from_secs(60));
    Ok(outcome(
        ok,
        format!("residual {worst_res:.1e}, return distance {worst_ret:.1e}, {failures} unconverged of 2000"),
    ))
}

fn interp(times: &[f64], states: &[OdeState<f64>], t: f64) -> OdeState<f64> {
    let i = times.partition_point(|&s| s < t).clamp(1, times.len() - 1);
    let (t0, t1) = (times[i - 1], times[i]);
    let w = if t1 > t0 { ((t - t0) / (t1 - t0)).clamp(0.0, 1.0) } else { 1.0 };
    let (a, b) = (states[i - 1], states[i]);
    OdeState::new(a.theta + w * (b.theta - a.theta), a.psi + w * (b.psi - a.psi), a.eta + w * (b.eta - a.eta))
}

fn criterion_3() -> Result<Outcome> {
    let start = Instant::now();
    let disease = DiseaseParams::new(15.0, 2.0, 2.0);
    let nu = VaRatePolicy::new(5.0, 0.7);
    let beta = 2.0;
    let x0 = OdeState::new(0.2, 0.3, 0.3);
    let horizon = 3.0;
    let opts = IntegrateOptions { t_max: horizon, eq_patience: usize::MAX, eq_window: f64::INFINITY, ..Default::default() };
    let ode = integrate(x0, &disease, &nu, beta, &opts)?;
    let n0 = 100_000u64;
    let events = ((n0 as f64 / x0.eta) * (horizon.exp() - 1.0)) as u64;
    let mut dists = Vec::new();
    for seed in [1u64, 2, 3] {
        let jo = JumpOptions { n0, events, record_every: 1000, seed };
        let jump = simulate_jump(x0, &disease, &nu, beta, &jo)?;
        let mut sup: f64 = 0.0;
        for (t, x) in jump.times.iter().zip(&jump.states) {
            if *t > horizon {
                break;
            }
            let y = interp(&ode.times, &ode.states, *t);
            sup = sup.max((x.theta - y.theta).abs()).max((x.psi - y.psi).abs());
        }
        dists.push(sup);
    }
    let good = dists.iter().filter(|d| **d < 0.02).count();
    let ok = good >= 2 && within(start, Duration::from_secs(120));
    Ok(outcome(ok, format!("sup distances {dists:.4?} ({good}/3 below 0.02)")))
}

fn criterion_4() -> Result<Outcome> {
    let disease = fig5_disease();
    let mut mismatches = 0;
    let mut zbars = Vec::new();
    for nu in [VaRatePolicy::new(5.0, 0.7), VaRatePolicy::new(6.0, 0.0), VaRatePolicy::new(1.0, 7.0)] {
        for i in 1..=10 {
            let s = 0.05 * i as f64;
            let costs = fig5_costs(s);
            // Without enough influence no z guarantees eradication.
            let zb = match eradication_threshold(&costs, &disease, &nu) {
                Err(Error::InsufficientInfluence) => costs.m + 1,
                r => r?,
            };
            zbars.push(zb);
            for z in 0..=40 {
                let pe = eradication_probability(z, &costs, &disease, &nu)?;
                if (pe == 1.0) != (z >= zb) {
                    mismatches += 1;
                }
            }
        }
    }
    Ok(outcome(mismatches == 0, format!("{mismatches} mismatches; thresholds {zbars:?}")))
}

fn small_instance(z_bar: usize, c_v: f64, g: f64) -> InfluencerGameConfig<f64> {
    InfluencerGameConfig {
        m: 3,
        horizon: 3,
        c_v,
        c_i: 5.0,
        c_se_1: 4.0,
        xi: SideEffectLaw { mean: 4.0, var: 0.0, p0: 0.0 },
        z_bar,
        incentives: vec![g; z_bar],
    }
}

/// Profile that flips the last-period decision at `z = 0`.
struct Flipped<'a>(&'a SpecialStrategy<f64>);

impl SymmetricProfile<f64> for Flipped<'_> {
    fn decision(&self, t: usize, z: usize, c: f64) -> Result<f64> {
        let d = self.0.decision(t, z, c)?;
        Ok(if t == 2 && z == 0 { if d >= 0.5 { 0.0 } else { 1.0 } } else { d })
    }
}

fn criterion_5() -> Result<Outcome> {
    let start = Instant::now();
    // Last-period regimes: K = C_v + c - g with c = 4, C_i = 5.
    let instances = [
        (1, 1.0, 6.0),
        (1, 1.0, 2.5),
        (1, 1.0, 0.0),
        (2, 1.0, 6.0),
        (2, 1.0, 2.5),
        (2, 1.0, 0.0),
        (3, 1.0, 2.0),
        (3, 2.0, 0.0),
    ];
    let mut notes = Vec::new();
    let mut ok = true;
    for (z_bar, c_v, g) in instances {
        let cfg = small_instance(z_bar, c_v, g);
        let atoms = cfg.xi.atoms(1);
        let mut values = Vec::new();
        for sel in [Selector::WaitAndWatch, Selector::Eager] {
            let s = SpecialStrategy::new(cfg.clone(), atoms.clone(), sel)?;
            let rep = verify_symmetric_ne(&s, &cfg, &atoms, 1e-9)?;
            let v1 = s.value(1, 0, cfg.c_se_1)?;
            ok &= rep.passed && rep.vaccinated_value_gap < 1e-12 && (rep.start_value - v1).abs() < 1e-9;
            values.push(v1);
            let bad = verify_symmetric_ne(&Flipped(&s), &cfg, &atoms, 1e-9)?;
            ok &= !bad.passed;
            notes.push(format!("{:.3}/{:.3}", rep.worst_gain.max(0.0), bad.worst_gain));
        }
        // Waiting is the cheapest equilibrium for the influencers.
        ok &= values[0] <= values[1] + 1e-9;
    }
    ok &= within(start, Duration::from_secs(10));
    Ok(outcome(ok, format!("8 instances, gain equilibrium/mutant: {}", notes.join(" "))))
}

fn criterion_6() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut violations = 0usize;
    let mut checks = 0usize;
    for z_bar in [1usize, 5, 20, 39, 40] {
        let cfg = fig1_game(2.0, z_bar);
        let om = cfg.outcome_model();
        let tl = cfg.horizon - 1;
        for _ in 0..1000 {
            let c = rng.random_range(0.0..10.0);
            let (g1, g2) = {
                let a: f64 = rng.random_range(0.0..12.0);
                let b: f64 = rng.random_range(0.0..12.0);
                (a.min(b), a.max(b))
            };
            let (p1, p2) = (om.probability(g1, cfg.gamma(tl, c)), om.probability(g2, cfg.gamma(tl, c)));
            let interior = |p: f64| p > 0.0 && p < 1.0;
            checks += 1;
            if p1 > p2 || (z_bar < cfg.m && g1 < g2 && interior(p1) && interior(p2) && p1 >= p2) {
                violations += 1;
            }
            let g = rng.random_range(0.0..12.0);
            let (c1, c2) = {
                let a: f64 = rng.random_range(0.0..10.0);
                let b: f64 = rng.random_range(0.0..10.0);
                (a.min(b), a.max(b))
            };
            let (q1, q2) = (om.probability(g, cfg.gamma(tl, c1)), om.probability(g, cfg.gamma(tl, c2)));
            checks += 1;
            if q1 < q2 || (z_bar < cfg.m && c1 < c2 && interior(q1) && interior(q2) && q1 <= q2) {
                violations += 1;
            }
        }
        // Failure probability along common draws.
        let draws = match ExpectationSampler::monte_carlo(&cfg, 2000, 17)? {
            ExpectationSampler::Draws(d) => d,
            ExpectationSampler::PerfectInfo { .. } => unreachable!(),
        };
        let lmin = draws.iter().cloned().fold(f64::INFINITY, f64::min);
        let g_tilde = (cfg.c_v - cfg.c_i + lmin).max(0.0);
        let sampler = ExpectationSampler::Draws(draws.clone());
        for _ in 0..1000 {
            let a = rng.random_range(g_tilde..g_tilde + 8.0);
            let b = rng.random_range(g_tilde..g_tilde + 8.0);
            let (g1, g2) = (a.min(b), a.max(b));
            for &gamma in draws.iter().step_by(50) {
                checks += 1;
                let f1 = binom_cdf(cfg.m, z_bar as isize - 1, om.probability(g1, gamma));
                let f2 = binom_cdf(cfg.m, z_bar as isize - 1, om.probability(g2, gamma));
                if f2 > f1 {
                    violations += 1;
                }
            }
            let (n1, n2) = (sampler.failure_probability(&om, g1), sampler.failure_probability(&om, g2));
            checks += 1;
            let strict_zone = z_bar < cfg.m && g1 < g2 && n1 < 1.0 && n2 > 0.0;
            if n2 > n1 || (strict_zone && n2 >= n1) {
                violations += 1;
            }
        }
    }
    Ok(outcome(violations == 0, format!("{violations} violations in {checks} checks")))
}

fn u_star(var: f64, z_bar: usize, delta: f64, sampler: &ExpectationSampler<f64>) -> Result<f64> {
    let p = LeaderProblem { game: fig1_game(var, z_bar), delta };
    Ok(solve_optimal_incentive(&p, sampler)?.u_star)
}

fn criterion_7() -> Result<Outcome> {
    let start = Instant::now();
    let sampler = ExpectationSampler::monte_carlo(&fig1_game(2.0, 1), 100_000, 7)?;
    let gap = |d: f64| -> Result<f64> { Ok(u_star(2.0, 1, d, &sampler)? - u_star(2.0, 40, d, &sampler)?) };
    let (g05, g10) = (gap(0.05)?, gap(0.1)?);
    let (mut lo, mut hi) = (0.05, 0.1);
    let mut crossover = f64::NAN;
    if g05 > 0.0 && g10 < 0.0 {
        for _ in 0..12 {
            let mid = 0.5 * (lo + hi);
            if gap(mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        crossover = 0.5 * (lo + hi);
    }
    let ok = g05 > 0.0 && g10 < 0.0 && (0.03..=0.12).contains(&crossover) && within(start, Duration::from_secs(180));
    Ok(outcome(
        ok,
        format!("U1-UM: {g05:.2} at 0.05, {g10:.2} at 0.1; crossover delta {crossover:.4}"),
    ))
}

fn criterion_8() -> Result<Outcome> {
    let sampler = ExpectationSampler::monte_carlo(&fig1_game(2.0, 1), 100_000, 8)?;
    let g = |z: usize| -> Result<f64> {
        let p = LeaderProblem { game: fig1_game(2.0, z), delta: 1e-3 };
        Ok(solve_optimal_incentive(&p, &sampler)?.g_star)
    };
    let g_m = g(40)?;
    let mut best = (f64::INFINITY, 0);
    for z in 1..40 {
        let d = g(z)? - g_m;
        if d < best.0 {
            best = (d, z);
        }
    }
    let ok = (2.5..=7.5).contains(&best.0);
    Ok(outcome(ok, format!("min gap {:.3} at z_bar = {} (g*_M = {g_m:.3})", best.0, best.1)))
}

fn criterion_9() -> Result<Outcome> {
    let cfg = fig1_game(1e-4, 1);
    let sampler = ExpectationSampler::monte_carlo(&cfg, 100_000, 9)?;
    let gamma = cfg.gamma_limit();
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for delta in [0.01, 0.05, 0.1] {
        for z in [1usize, 20, 39] {
            let p = LeaderProblem { game: fig1_game(1e-4, z), delta };
            let mc = solve_optimal_incentive(&p, &sampler)?.g_star;
            let pi = perfect_info_solution(&p, gamma, 0.0)?.g_star;
            worst = worst.max((mc - pi).abs());
        }
        let p = LeaderProblem { game: fig1_game(1e-4, 40), delta };
        let g_m = solve_optimal_incentive(&p, &sampler)?.g_star;
        let dm = (g_m - (cfg.c_v + gamma - cfg.c_i)).abs();
        worst = worst.max(dm);
        parts.push(format!("{dm:.4}"));
    }
    Ok(outcome(worst <= 0.05, format!("max deviation {worst:.4}; full-threshold deviations {}", parts.join(","))))
}

fn fig4(theta_star: f64) -> JointDesign<f64> {
    let (r, b) = (5.0, 2.0);
    JointDesign {
        disease: DiseaseParams::new((r + b) / (1.0 - theta_star), r, b),
        costs: PublicCostModel {
            c_v1: 6.0,
            c_v2: 2.0,
            c_v2_bar: 15.0,
            c_i: 50.0,
            m: 40,
            influence: InfluenceCost::Linear { s: 0.5 },
        },
    }
}

/// Counts thresholds satisfying the defining inequality pair.
fn brute_k(d: &JointDesign<f64>) -> Vec<usize> {
    let c = &d.costs;
    let strict = c.c_v2_bar > c.c_v2 / d.disease.theta_star();
    let o = |k: usize| c.c_v1 - c.c_f(k) - threshold_bound(d, k);
    (1..=c.m)
        .filter(|&k| if strict { o(k) <= 0.0 && o(k - 1) > 0.0 } else { o(k) < 0.0 && o(k - 1) >= 0.0 })
        .collect()
}

fn criterion_10() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut bad_unique = 0;
    let mut tried = 0;
    while tried < 200 {
        let m = rng.random_range(2..=60usize);
        let theta_star: f64 = rng.random_range(0.05..0.95);
        let (r, b) = (rng.random_range(0.0..5.0), rng.random_range(0.5..4.0));
        let c_v1 = rng.random_range(0.1..5.0);
        let s = rng.random_range(1.01..5.0) * c_v1 / m as f64;
        let d = JointDesign {
            disease: DiseaseParams::new((r + b) / (1.0 - theta_star), r, b),
            costs: PublicCostModel {
                c_v1,
                c_v2: rng.random_range(0.01..5.0),
                c_v2_bar: rng.random_range(0.1..50.0),
                c_i: rng.random_range(0.1..50.0),
                m,
                influence: InfluenceCost::Linear { s },
            },
        };
        let brute = brute_k(&d);
        let k = vaccine_optimal_k(&d)?;
        if brute.len() != 1 || brute[0] != k {
            bad_unique += 1;
        }
        tried += 1;
    }
    let mut eps_ok = true;
    let mut designs = vec![fig4(0.5), fig4(0.2), fig4(0.9)];
    for s in [0.1, 0.2, 0.4] {
        designs.push(JointDesign { disease: fig5_disease(), costs: fig5_costs(s) });
    }
    for d in &designs {
        let k = vaccine_optimal_k(d)?;
        let ts = d.disease.theta_star();
        for eps in [1e-2, 1e-3] {
            let e = eps_vaccine_optimal_nu(d, eps)?;
            eps_ok &= e.psi_e > ts && e.psi_e <= ts + eps && e.z_bar == k;
        }
    }
    let sweep: Vec<(f64, usize)> = (1..100)
        .map(|i| {
            let t = i as f64 / 100.0;
            vaccine_optimal_k(&fig4(t)).map(|k| (t, k))
        })
        .collect::<Result<_>>()?;
    let ks: Vec<usize> = sweep.iter().map(|x| x.1).collect();
    let low = ks[..10].iter().all(|&k| k == ks[0]);
    let high = ks[90..].iter().all(|&k| k == ks[98]);
    let k_mid = vaccine_optimal_k(&fig4(0.5))?;
    let ok = bad_unique == 0 && eps_ok && low && high && ks[0] != ks[98] && k_mid == 17;
    Ok(outcome(
        ok,
        format!(
            "{bad_unique}/200 non-unique; eps designs {}; k* {} (theta* <= 0.1) .. {} (theta* >= 0.9), 17 expected at 0.5 got {k_mid}",
            if eps_ok { "ok" } else { "failed" },
            ks[0],
            ks[98]
        ),
    ))
}

fn criterion_11() -> Result<Outcome> {
    let disease = fig5_disease();
    let mut flips = Vec::new();
    let mut prev = None;
    for i in 1..=500 {
        let s = i as f64 / 1000.0 + 0.005;
        let now = incentive_optimal_exists(&JointDesign { disease, costs: fig5_costs(s) })?;
        if let Some(p) = prev {
            if p != now {
                flips.push((s, now));
            }
        }
        prev = Some(now);
    }
    let ok = flips.len() == 1 && !flips[0].1 && (0.05..=0.08).contains(&flips[0].0);
    Ok(outcome(ok, format!("flips at {flips:?}")))
}

fn main() {
    let criteria: [(&str, fn() -> Result<Outcome>); 11] = [
        ("perfect-information closed form", criterion_1),
        ("attractor residuals and return", criterion_2),
        ("jump process tracks the ODE", criterion_3),
        ("threshold characterises eradication", criterion_4),
        ("equilibrium oracle", criterion_5),
        ("monotonicity of outcome and failure probability", criterion_6),
        ("cost crossover between thresholds 1 and M", criterion_7),
        ("incentive gap at small delta", criterion_8),
        ("small-variance convergence", criterion_9),
        ("joint design", criterion_10),
        ("incentive-optimality boundary", criterion_11),
    ];
    // ACCEPTANCE_ONLY=4,7 runs a subset.
    let only: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|v| v.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if only.as_ref().is_some_and(|o| !o.contains(&(i + 1))) {
            continue;
        }
        let t = Instant::now();
        let (pass, detail) = match run() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<48} {} [{:.1}s] {}",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            detail
        );
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
