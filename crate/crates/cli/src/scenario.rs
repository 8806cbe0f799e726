//! One-variable sweeps described by a TOML or JSON file.
//!
//! ```toml
//! name = "budget"
//! seed = 7
//! samples = 100000
//! outdir = "out"
//! delta = 0.05
//! auto_zbar = false
//!
//! [disease]          # lambda, r, b, d (optional)
//! [nu]               # nu_b, nu_e; omit to use the vaccine-optimal design
//! [costs]            # m, cv1, cv2, cv2_bar, c_inf, s or cf_table
//! [game]             # m, t, cv, ci, cse1, xi_mean, xi_var, p0, zbar, g0
//!
//! [sweep]
//! variable = "delta" # zbar | delta | sigma2 | theta_star | s
//! values = [0.01, 0.05, 0.1]
//! ```

use std::path::PathBuf;
use std::time::Instant;

use anyhow::Result;
use clap::Args;
use rayon::prelude::*;
use serde::Deserialize;
use vaxgame_core::epidemic::{psi_eradicate, DiseaseParams};
use vaxgame_core::ess::{eradication_threshold, InfluenceCost, PublicCostModel};
use vaxgame_core::game::InfluencerGameConfig;
use vaxgame_core::leader::{eps_vaccine_optimal_nu, JointDesign};

use crate::args::{CostArgs, DiseaseArgs, GameArgs, RateArgs};
use crate::config::read_value;
use crate::output::{cell, Table};
use crate::plot::{line_chart, Series};
use crate::solve::{self, Mode};
use crate::UsageError;

/// Share above the endemic level allowed when the adoption rates are designed.
const DESIGN_EPS: f64 = 1e-3;

#[derive(Args, Debug, Clone)]
pub struct ScenarioCmd {
    /// Scenario file (TOML, or JSON by extension).
    #[arg(long)]
    pub config: PathBuf,
    /// Also write SVG charts of the report.
    #[arg(long)]
    pub plot: bool,
    /// Add a runtime_ms column.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Deserialize, Debug, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SweepVar {
    Zbar,
    Delta,
    Sigma2,
    ThetaStar,
    S,
}

impl SweepVar {
    fn name(self) -> &'static str {
        match self {
            SweepVar::Zbar => "zbar",
            SweepVar::Delta => "delta",
            SweepVar::Sigma2 => "sigma2",
            SweepVar::ThetaStar => "theta_star",
            SweepVar::S => "s",
        }
    }
}

#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub variable: SweepVar,
    pub values: Vec<f64>,
}

#[derive(Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default = "default_name")]
    pub name: String,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_outdir")]
    pub outdir: PathBuf,
    #[serde(default = "default_delta")]
    pub delta: f64,
    /// Pick the cheapest threshold at each point instead of the one the public implies.
    #[serde(default)]
    pub auto_zbar: bool,
    pub disease: Option<DiseaseArgs>,
    pub nu: Option<RateArgs>,
    pub costs: Option<CostArgs>,
    pub game: Option<GameArgs>,
    pub sweep: Sweep,
}

fn default_name() -> String {
    "scenario".into()
}
fn default_seed() -> u64 {
    1
}
fn default_samples() -> usize {
    100_000
}
fn default_outdir() -> PathBuf {
    "out".into()
}
fn default_delta() -> f64 {
    0.05
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

impl ScenarioConfig {
    fn validate(&self) -> Result<()> {
        let values = &self.sweep.values;
        if values.is_empty() {
            return Err(usage("sweep.values is empty"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(usage("sweep.values must be finite"));
        }
        if self.samples == 0 {
            return Err(usage("samples must be positive"));
        }
        if self.costs.is_none() && self.game.is_none() {
            return Err(usage("a scenario needs a [costs] or a [game] section"));
        }
        if self.costs.is_some() != self.disease.is_some() {
            return Err(usage("[costs] and [disease] must be given together"));
        }
        if let (Some(c), Some(g)) = (&self.costs, &self.game) {
            if c.m != g.m {
                return Err(usage(format!("costs.m = {} differs from game.m = {}", c.m, g.m)));
            }
        }
        let in_range = |lo: f64, hi: f64| values.iter().all(|v| *v > lo && *v < hi);
        let ok = match self.sweep.variable {
            SweepVar::Zbar => {
                let m = self.game.as_ref().ok_or_else(|| usage("sweeping zbar needs a [game] section"))?.m;
                values.iter().all(|v| v.fract() == 0.0 && *v >= 1.0 && *v <= m as f64)
            }
            SweepVar::Delta => in_range(0.0, 1.0),
            SweepVar::Sigma2 => {
                if self.game.is_none() {
                    return Err(usage("sweeping sigma2 needs a [game] section"));
                }
                values.iter().all(|v| *v >= 0.0)
            }
            SweepVar::ThetaStar | SweepVar::S => {
                if self.costs.is_none() {
                    return Err(usage(format!("sweeping {} needs [disease] and [costs]", self.sweep.variable.name())));
                }
                match self.sweep.variable {
                    SweepVar::ThetaStar => in_range(0.0, 1.0),
                    _ => values.iter().all(|v| *v >= 0.0),
                }
            }
        };
        if !ok {
            return Err(usage(format!("sweep.values out of range for {}", self.sweep.variable.name())));
        }
        if self.sweep.variable != SweepVar::Delta && !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(usage("delta must lie in (0, 1)"));
        }
        if self.game.is_some() && self.costs.is_none() && !self.auto_zbar {
            let fixed = self.game.as_ref().is_some_and(|g| g.zbar.is_some());
            if !fixed && self.sweep.variable != SweepVar::Zbar {
                return Err(usage("without [costs], set game.zbar, auto_zbar or sweep zbar"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
struct ReportRow {
    value: f64,
    z_bar: Option<usize>,
    g_star: Option<f64>,
    u_star: Option<f64>,
    psi_e: Option<f64>,
    np: Option<f64>,
    runtime_ms: u128,
}

/// Threshold and vaccinated share implied by the public at one sweep point.
fn public_side(cfg: &ScenarioConfig, x: f64) -> Result<Option<(usize, f64)>> {
    let (Some(d), Some(c)) = (&cfg.disease, &cfg.costs) else { return Ok(None) };
    let mut disease: DiseaseParams<f64> = d.build()?;
    let mut costs: PublicCostModel<f64> = c.build()?;
    match cfg.sweep.variable {
        SweepVar::ThetaStar => disease.lambda = (disease.r + disease.b) / (1.0 - x),
        SweepVar::S => costs.influence = InfluenceCost::Linear { s: x },
        _ => {}
    }
    match &cfg.nu {
        Some(n) => {
            let nu = n.build()?;
            let z = eradication_threshold(&costs, &disease, &nu)?;
            Ok(Some((z, psi_eradicate(disease.b, &nu))))
        }
        None => {
            let e = eps_vaccine_optimal_nu(&JointDesign { disease, costs }, DESIGN_EPS)?;
            Ok(Some((e.z_bar, e.psi_e)))
        }
    }
}

fn point(cfg: &ScenarioConfig, i: usize, x: f64) -> Result<ReportRow> {
    let start = Instant::now();
    let mut row = ReportRow { value: x, ..Default::default() };
    let public = public_side(cfg, x)?;
    if let Some((z, psi)) = public {
        row.z_bar = Some(z);
        row.psi_e = Some(psi);
    }
    if let Some(g) = &cfg.game {
        let mut game: InfluencerGameConfig<f64> = g.build()?;
        if cfg.sweep.variable == SweepVar::Sigma2 {
            game.xi.var = x;
        }
        let delta = if cfg.sweep.variable == SweepVar::Delta { x } else { cfg.delta };
        let sampler = solve::sampler(&game, Mode::Mc, cfg.samples, solve::derive_seed(cfg.seed, i))?;
        let z_bar = match cfg.sweep.variable {
            SweepVar::Zbar => Some(x as usize),
            _ if g.zbar.is_some() => g.zbar,
            _ if cfg.auto_zbar => None,
            _ => public.map(|p| p.0),
        };
        let sol = match z_bar {
            // Eradication without any vaccinated influencer costs the leader nothing.
            Some(0) => None,
            Some(z) => Some(solve::solve(&game, z, delta, &sampler)?),
            None => {
                let (sols, best) = solve::all_thresholds(&game, delta, &sampler)?;
                Some(sols[best])
            }
        };
        match sol {
            Some(s) => {
                row.z_bar = Some(s.z_bar);
                row.g_star = Some(s.g_star);
                row.u_star = Some(s.u_star);
                row.np = Some(s.np_at_g);
            }
            None => {
                row.z_bar = Some(0);
                row.g_star = Some(0.0);
                row.u_star = Some(0.0);
            }
        }
    }
    row.runtime_ms = start.elapsed().as_millis();
    Ok(row)
}

pub fn run(cmd: ScenarioCmd) -> Result<()> {
    let cfg: ScenarioConfig =
        serde_json::from_value(read_value(&cmd.config)?).map_err(|e| usage(format!("{}: {e}", cmd.config.display())))?;
    cfg.validate()?;
    let mut values = cfg.sweep.values.clone();
    values.sort_by(f64::total_cmp);

    let rows = values
        .par_iter()
        .enumerate()
        .map(|(i, &x)| point(&cfg, i, x))
        .collect::<Result<Vec<_>>>()?;

    let var = cfg.sweep.variable.name();
    let mut header = vec![var, "zbar", "g_star", "U_star", "psi_e", "NP_at_g"];
    if cmd.timing {
        header.push("runtime_ms");
    }
    let mut t = Table::new(&header);
    for r in &rows {
        let mut cells = vec![
            cell(r.value),
            r.z_bar.map(|z| z.to_string()).unwrap_or_default(),
            cell(r.g_star),
            cell(r.u_star),
            cell(r.psi_e),
            cell(r.np),
        ];
        if cmd.timing {
            cells.push(r.runtime_ms.to_string());
        }
        t.push(cells);
    }
    std::fs::create_dir_all(&cfg.outdir)?;
    let csv = cfg.outdir.join(format!("{}.csv", cfg.name));
    t.write(Some(&csv))?;
    if cmd.plot {
        let xs: Vec<f64> = rows.iter().map(|r| r.value).collect();
        let col = |f: fn(&ReportRow) -> Option<f64>| rows.iter().map(f).collect::<Vec<_>>();
        let svg = |s: &str| cfg.outdir.join(format!("{}_{s}.svg", cfg.name));
        line_chart(&svg("g"), "Optimal incentive", var, "g*", &[Series::new("g*", &xs, &col(|r| r.g_star))])?;
        line_chart(&svg("U"), "Incentive cost", var, "U*", &[Series::new("U*", &xs, &col(|r| r.u_star))])?;
        line_chart(
            &svg("zbar"),
            "Eradication threshold",
            var,
            "zbar",
            &[Series::new("zbar", &xs, &col(|r| r.z_bar.map(|z| z as f64)))],
        )?;
    }
    eprintln!("wrote {}", csv.display());
    Ok(())
}
