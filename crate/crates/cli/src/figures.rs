//! Presets regenerating the data behind the numerical figures.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Result;
use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use vaxgame_core::epidemic::DiseaseParams;
use vaxgame_core::ess::{InfluenceCost, PublicCostModel};
use vaxgame_core::game::{InfluencerGameConfig, SideEffectLaw};
use vaxgame_core::leader::{
    eps_vaccine_optimal_nu, incentive_optimal_design, incentive_optimal_exists, threshold_bound, vaccine_optimal_k,
    ExpectationSampler, JointDesign,
};

use crate::config::overlay;
use crate::output::{cell, Table};
use crate::plot::{line_chart, Series};
use crate::solve::{self, Mode};

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct FigCmd {
    /// Figure number.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
    pub id: u8,
    #[arg(long, default_value = "figures")]
    pub outdir: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Monte Carlo draws of the predicted vaccinated cost.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Also write SVG charts next to the CSV.
    #[arg(long)]
    #[serde(default)]
    pub plot: bool,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

/// Influencer game shared by the incentive figures: M=40, T=20, c=3, E=5, C_v=1, C_i=5.
pub fn incentive_game(var: f64) -> InfluencerGameConfig<f64> {
    InfluencerGameConfig {
        m: 40,
        horizon: 20,
        c_v: 1.0,
        c_i: 5.0,
        c_se_1: 3.0,
        xi: SideEffectLaw { mean: 5.0, var, p0: 0.0 },
        z_bar: 40,
        incentives: vec![0.0; 40],
    }
}

fn public_costs(c_v1: f64, c_v2: f64, c_v2_bar: f64, c_i: f64, s: f64) -> PublicCostModel<f64> {
    PublicCostModel { c_v1, c_v2, c_v2_bar, c_i, m: 40, influence: InfluenceCost::Linear { s } }
}

/// Threshold-versus-endemic-share preset: r=5, b=2 with the infection rate set by theta*.
fn theta_design(theta_star: f64, costs: PublicCostModel<f64>) -> JointDesign<f64> {
    let (r, b) = (5.0, 2.0);
    JointDesign { disease: DiseaseParams::new((r + b) / (1.0 - theta_star), r, b), costs }
}

/// Sensitivity preset: lambda=15, r=2, b=2, c_v1=0.2, c_v2=0.05, c_v2_bar=100, c_i=0.5.
pub fn sensitivity_design(s: f64) -> JointDesign<f64> {
    JointDesign { disease: DiseaseParams::new(15.0, 2.0, 2.0), costs: public_costs(0.2, 0.05, 100.0, 0.5, s) }
}

const DELTAS: [f64; 3] = [0.01, 0.05, 0.1];

fn grid(lo: f64, step: f64, n: usize) -> Vec<f64> {
    // Rounded so the CSV shows 0.05 rather than 0.05000000000000001.
    (0..n).map(|i| ((lo + step * i as f64) * 1e9).round() / 1e9).collect()
}

pub fn reproduce(cmd: FigCmd) -> Result<()> {
    let path = cmd.config.clone();
    let cmd = overlay(cmd, path.as_deref())?;
    if cmd.samples == 0 {
        return Err(crate::UsageError("samples must be positive".into()).into());
    }
    std::fs::create_dir_all(&cmd.outdir)?;
    let csv = cmd.outdir.join(format!("fig{}.csv", cmd.id));
    let table = match cmd.id {
        1 => by_threshold(&cmd)?,
        2 => by_budget(&cmd)?,
        3 => by_variance(&cmd)?,
        4 => by_endemic_share()?,
        5 => by_sensitivity(&cmd)?,
        _ => unreachable!("clap restricts the id"),
    };
    table.write(Some(&csv))?;
    if cmd.plot {
        plots(cmd.id, &table, &cmd.outdir)?;
    }
    eprintln!("wrote {}", csv.display());
    Ok(())
}

/// Optimal incentive and cost for every threshold at a few failure budgets.
fn by_threshold(cmd: &FigCmd) -> Result<Table> {
    let cfg = incentive_game(2.0);
    let sampler = solve::sampler(&cfg, Mode::Mc, cmd.samples, cmd.seed)?;
    let mut t = Table::new(&["zbar", "delta", "sigma2", "g_star", "U_star", "NP_at_g", "cheapest"]);
    for delta in DELTAS {
        let (sols, best) = solve::all_thresholds(&cfg, delta, &sampler)?;
        for (i, s) in sols.iter().enumerate() {
            let mut row = crate::commands::leader_row(s, cfg.xi.var);
            row.push(u8::from(i == best).to_string());
            t.push(row);
        }
    }
    Ok(t)
}

const BUDGET_THRESHOLDS: [usize; 7] = [1, 2, 5, 10, 20, 39, 40];

/// Optimal incentive against the failure budget for selected thresholds.
fn by_budget(cmd: &FigCmd) -> Result<Table> {
    let cfg = incentive_game(2.0);
    let sampler = solve::sampler(&cfg, Mode::Mc, cmd.samples, cmd.seed)?;
    let deltas = grid(0.01, 0.01, 15);
    let jobs: Vec<(f64, usize)> =
        deltas.iter().flat_map(|&d| BUDGET_THRESHOLDS.iter().map(move |&z| (d, z))).collect();
    let sols = jobs
        .par_iter()
        .map(|&(d, z)| solve::solve(&cfg, z, d, &sampler))
        .collect::<Result<Vec<_>>>()?;
    let mut t = Table::new(&["zbar", "delta", "sigma2", "g_star", "g_plot", "U_star", "NP_at_g", "cheapest"]);
    for chunk in sols.chunks(BUDGET_THRESHOLDS.len()) {
        let best = solve::cheapest(chunk);
        for (i, s) in chunk.iter().enumerate() {
            t.push(incentive_row(s, &cfg, 2.0, i == best));
        }
    }
    Ok(t)
}

/// `g_plot` shifts the full-threshold incentive by `C_i` so both ends share a scale.
fn incentive_row(s: &vaxgame_core::LeaderSolution, cfg: &InfluencerGameConfig<f64>, sigma2: f64, best: bool) -> Vec<String> {
    let g_plot = if s.z_bar == cfg.m { s.g_star + cfg.c_i } else { s.g_star };
    vec![
        s.z_bar.to_string(),
        cell(s.delta),
        cell(sigma2),
        cell(s.g_star),
        cell(g_plot),
        cell(s.u_star),
        cell(s.np_at_g),
        u8::from(best).to_string(),
    ]
}

/// Thresholds 1 and M against the signal variance, with the known-cost limits.
fn by_variance(cmd: &FigCmd) -> Result<Table> {
    let vars = [0.05, 0.1, 0.25, 0.5, 1.0, 1.5, 2.0, 2.5];
    let base = incentive_game(0.0);
    let exact = ExpectationSampler::perfect_info(base.gamma_limit());
    let mut t = Table::new(&[
        "zbar", "delta", "sigma2", "g_star", "g_plot", "U_star", "NP_at_g", "cheapest", "g_limit", "U_limit",
    ]);
    let samplers = vars
        .par_iter()
        .enumerate()
        .map(|(i, &v)| solve::sampler(&incentive_game(v), Mode::Mc, cmd.samples, solve::derive_seed(cmd.seed, i)))
        .collect::<Result<Vec<_>>>()?;
    for (v, sampler) in vars.iter().zip(&samplers) {
        let cfg = incentive_game(*v);
        for delta in DELTAS {
            let pair = [1, cfg.m]
                .par_iter()
                .map(|&z| solve::solve(&cfg, z, delta, sampler))
                .collect::<Result<Vec<_>>>()?;
            let best = solve::cheapest(&pair);
            for (i, s) in pair.iter().enumerate() {
                let lim = solve::solve(&base, s.z_bar, delta, &exact)?;
                let mut row = incentive_row(s, &cfg, *v, i == best);
                let g_lim = if s.z_bar == cfg.m { lim.g_star + cfg.c_i } else { lim.g_star };
                row.push(cell(g_lim));
                row.push(cell(lim.u_star));
                t.push(row);
            }
        }
    }
    Ok(t)
}

/// Vaccine-optimal threshold against the endemic share. The primary cost set is
/// c_v1=6, c_v2=2, c_v2_bar=15, c_i=50, c_f(k)=0.5k; `k_star_alt` repeats the scan
/// with the sensitivity preset's costs at s=0.1 for comparison.
fn by_endemic_share() -> Result<Table> {
    let mut t = Table::new(&["theta_star", "lambda", "k_star", "L_k_star", "k_star_alt"]);
    for th in grid(0.02, 0.02, 49) {
        let d = theta_design(th, public_costs(6.0, 2.0, 15.0, 50.0, 0.5));
        let alt = theta_design(th, sensitivity_design(0.1).costs);
        let k = vaccine_optimal_k(&d)?;
        t.push(vec![
            cell(th),
            cell(d.disease.lambda),
            k.to_string(),
            cell(threshold_bound(&d, k)),
            vaccine_optimal_k(&alt)?.to_string(),
        ]);
    }
    Ok(t)
}

/// Steps of 0.01 up to 0.1, where incentive optimality is lost, then ten points per
/// decade up to 100, where the threshold reaches 1.
fn slope_grid() -> Vec<f64> {
    let mut s = grid(0.01, 0.01, 10);
    s.extend((1..=30).map(|i| {
        let v = 0.1 * 10f64.powf(i as f64 / 10.0);
        let mag = 10f64.powi(3 - v.log10().floor() as i32);
        (v * mag).round() / mag
    }));
    s
}

/// Threshold, incentive cost and vaccinated share against the influence slope.
fn by_sensitivity(cmd: &FigCmd) -> Result<Table> {
    let eps = 1e-3;
    let cfg = incentive_game(2.0);
    let sampler = solve::sampler(&cfg, Mode::Mc, cmd.samples, cmd.seed)?;
    let slopes = slope_grid();
    let designs: Vec<_> = slopes.iter().map(|&s| sensitivity_design(s)).collect();
    let ks = designs.iter().map(vaccine_optimal_k).collect::<vaxgame_core::Result<Vec<_>>>()?;
    let mut wanted: Vec<(usize, f64)> = Vec::new();
    for &k in ks.iter().filter(|k| **k > 0) {
        for d in DELTAS {
            if !wanted.contains(&(k, d)) {
                wanted.push((k, d));
            }
        }
    }
    let solved = wanted
        .par_iter()
        .map(|&(k, d)| solve::solve(&cfg, k, d, &sampler).map(|s| s.u_star))
        .collect::<Result<Vec<_>>>()?;
    let cost: BTreeMap<(usize, u64), f64> =
        wanted.iter().zip(solved).map(|(&(k, d), u)| ((k, d.to_bits()), u)).collect();

    let mut header = vec!["s".to_string(), "zbar".into(), "psi_e_vaccine_opt".into()];
    header.extend(DELTAS.iter().map(|d| format!("U_delta_{d}")));
    header.extend(["incentive_optimal".to_string(), "psi_e_incentive_opt".into()]);
    let mut t = Table::new(&header);
    for ((s, design), k) in slopes.iter().zip(&designs).zip(&ks) {
        let eps_design = eps_vaccine_optimal_nu(design, eps)?;
        let mut row = vec![cell(*s), k.to_string(), cell(eps_design.psi_e)];
        for d in DELTAS {
            row.push(cell(if *k == 0 { 0.0 } else { cost[&(*k, d.to_bits())] }));
        }
        row.push(u8::from(incentive_optimal_exists(design)?).to_string());
        row.push(cell(incentive_optimal_design(design, eps)?.map(|o| o.psi_e)));
        t.push(row);
    }
    Ok(t)
}

fn num(t: &Table, col: &str) -> Vec<f64> {
    t.column(col).into_iter().map(|v| v.unwrap_or(f64::NAN)).collect()
}

/// Splits rows by the value of `key` into series of (`x`, `y`).
fn grouped(t: &Table, key: &str, x: &str, y: &str, label: impl Fn(f64) -> String) -> Vec<Series> {
    let (ks, xs, ys) = (num(t, key), num(t, x), t.column(y));
    let mut groups: Vec<(f64, Vec<f64>, Vec<Option<f64>>)> = Vec::new();
    for i in 0..ks.len() {
        match groups.iter_mut().find(|g| g.0 == ks[i]) {
            Some(g) => {
                g.1.push(xs[i]);
                g.2.push(ys[i]);
            }
            None => groups.push((ks[i], vec![xs[i]], vec![ys[i]])),
        }
    }
    groups.into_iter().map(|(k, xs, ys)| Series::new(label(k), &xs, &ys)).collect()
}

fn plots(id: u8, t: &Table, dir: &Path) -> Result<()> {
    let p = |name: &str| dir.join(format!("fig{id}_{name}.svg"));
    match id {
        1 => {
            let lab = |d: f64| format!("delta = {d}");
            line_chart(&p("g"), "Optimal incentive by threshold", "zbar", "g*", &grouped(t, "delta", "zbar", "g_star", lab))?;
            line_chart(&p("U"), "Incentive cost by threshold", "zbar", "U*", &grouped(t, "delta", "zbar", "U_star", lab))?;
        }
        2 => {
            let lab = |z: f64| format!("zbar = {z}");
            line_chart(&p("g"), "Optimal incentive by budget (g* + C_i at zbar = M)", "delta", "g*", &grouped(t, "zbar", "delta", "g_plot", lab))?;
            line_chart(&p("U"), "Incentive cost by budget", "delta", "U*", &grouped(t, "zbar", "delta", "U_star", lab))?;
        }
        3 => {
            let mut g = Vec::new();
            let mut u = Vec::new();
            for z in [1.0, 40.0] {
                for d in DELTAS {
                    let rows: Vec<usize> = (0..t.rows.len())
                        .filter(|&i| num(t, "zbar")[i] == z && num(t, "delta")[i] == d)
                        .collect();
                    let xs: Vec<f64> = rows.iter().map(|&i| num(t, "sigma2")[i]).collect();
                    let pick = |c: &str| rows.iter().map(|&i| t.column(c)[i]).collect::<Vec<_>>();
                    g.push(Series::new(format!("zbar {z}, delta {d}"), &xs, &pick("g_plot")));
                    g.push(Series::new(format!("limit zbar {z}, delta {d}"), &xs, &pick("g_limit")));
                    u.push(Series::new(format!("zbar {z}, delta {d}"), &xs, &pick("U_star")));
                }
            }
            line_chart(&p("g"), "Optimal incentive by variance (g* + C_i at zbar = M)", "sigma^2", "g*", &g)?;
            line_chart(&p("U"), "Incentive cost by variance", "sigma^2", "U*", &u)?;
        }
        4 => {
            let xs = num(t, "theta_star");
            let s = [
                Series::new("k*", &xs, &t.column("k_star")),
                Series::new("k* (alternative costs)", &xs, &t.column("k_star_alt")),
            ];
            line_chart(&p("zbar"), "Vaccine-optimal threshold by endemic share", "theta*", "zbar", &s)?;
        }
        5 => {
            let xs: Vec<f64> = num(t, "s").iter().map(|s| s.log10()).collect();
            line_chart(&p("zbar"), "Vaccine-optimal threshold by sensitivity", "log10 s", "zbar", &[Series::new("zbar", &xs, &t.column("zbar"))])?;
            let u: Vec<Series> =
                DELTAS.iter().map(|d| Series::new(format!("delta = {d}"), &xs, &t.column(&format!("U_delta_{d}")))).collect();
            line_chart(&p("U"), "Incentive cost of vaccine-optimal rates", "log10 s", "U*", &u)?;
            let psi = [
                Series::new("vaccine-optimal", &xs, &t.column("psi_e_vaccine_opt")),
                Series::new("incentive-optimal", &xs, &t.column("psi_e_incentive_opt")),
            ];
            line_chart(&p("psi"), "Vaccinated share at eradication", "log10 s", "psi_e", &psi)?;
        }
        _ => {}
    }
    Ok(())
}
