use std::path::PathBuf;
use std::time::Instant;

use anyhow::Result;
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use vaxgame_core::epidemic::{integrate, simulate_jump, IntegrateOptions, JumpOptions, OdeState};
use vaxgame_core::ess::{classify, eradication_threshold, is_admissible};
use vaxgame_core::game::{simulate_outcomes, verify_symmetric_ne, Selector, SpecialStrategy};
use vaxgame_core::Error;

use crate::args::{CostArgs, DiseaseArgs, GameArgs, RateArgs};
use crate::config::overlay;
use crate::output::{cell, print_json, Table};
use crate::plot::{line_chart, Series};
use crate::solve::{self, Mode};
use crate::UsageError;

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Table,
    Both,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct EssCmd {
    #[command(flatten)]
    #[serde(flatten)]
    pub disease: DiseaseArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub rates: RateArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub costs: CostArgs,
    /// Only report this number of vaccinated influencers [default: every z in 0..=M].
    #[arg(long)]
    #[serde(default)]
    pub z: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Both)]
    pub format: Format,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Serialize)]
struct EssOutput {
    rho: f64,
    theta_star: Option<f64>,
    admissible: bool,
    z_bar: Option<usize>,
    reports: Vec<vaxgame_core::ess::EssReport<f64>>,
}

pub fn analyze_ess(cmd: EssCmd) -> Result<()> {
    let path = cmd.config.clone();
    let cmd = overlay(cmd, path.as_deref())?;
    let disease = cmd.disease.build()?;
    let nu = cmd.rates.build()?;
    let costs = cmd.costs.build()?;
    if cmd.z.is_some_and(|z| z > costs.m) {
        return Err(UsageError(format!("z must be at most M = {}", costs.m)).into());
    }
    let supercritical = disease.rho() > 1.0;
    let z_bar = match eradication_threshold(&costs, &disease, &nu) {
        Ok(z) => Some(z),
        Err(Error::NoInterventionNeeded | Error::NotAdmissible) => None,
        Err(e) => return Err(e.into()),
    };
    let zs: Vec<usize> = match cmd.z {
        Some(z) => vec![z],
        None => (0..=costs.m).collect(),
    };
    let reports = zs.iter().map(|&z| classify(z, &costs, &disease, &nu)).collect::<vaxgame_core::Result<Vec<_>>>()?;
    for r in reports.iter().filter(|r| r.near_tie) {
        eprintln!("warning: an h-value at z = {} is within 1e-12 of zero; classification is rounding-sensitive", r.z);
    }
    let out = EssOutput {
        rho: disease.rho(),
        theta_star: supercritical.then(|| disease.theta_star()),
        admissible: supercritical && is_admissible(&disease, &nu),
        z_bar,
        reports,
    };
    if matches!(cmd.format, Format::Json | Format::Both) {
        print_json(&out)?;
    }
    if matches!(cmd.format, Format::Table | Format::Both) {
        let mut t = Table::new(&["z", "h_i", "h_v", "h_v_o", "esss", "eradication_probability", "near_tie"]);
        for r in &out.reports {
            let kinds: Vec<String> = r.esss.iter().map(|k| format!("{k:?}")).collect();
            t.push(vec![
                r.z.to_string(),
                cell(r.h.map(|h| h.h_i)),
                cell(r.h.map(|h| h.h_v)),
                cell(r.h.and_then(|h| h.h_v_o)),
                if kinds.is_empty() { "none".into() } else { kinds.join(";") },
                cell(r.eradication_probability),
                u8::from(r.near_tie).to_string(),
            ]);
        }
        t.write(None)?;
    }
    Ok(())
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectorName {
    Wait,
    Eager,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct GameCmd {
    #[command(flatten)]
    #[serde(flatten)]
    pub game: GameArgs,
    /// Monte Carlo runs of the signal path.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Histogram CSV path [default: stdout].
    #[arg(long)]
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Check the equilibrium by backward induction (small M and T only).
    #[arg(long)]
    #[serde(default)]
    pub verify: bool,
    #[arg(long, value_enum, default_value_t = SelectorName::Wait)]
    pub selector: SelectorName,
    /// Quantile atoms used to discretise the signal law for the check.
    #[arg(long, default_value_t = 8)]
    pub atoms: usize,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Serialize)]
struct GameOutput {
    gamma_mean_path: f64,
    p_mean_path: f64,
    p_mean: f64,
    eradication_rate: f64,
    ne_check: Option<vaxgame_core::game::NeReport<f64>>,
}

pub fn solve_game(cmd: GameCmd) -> Result<()> {
    let path = cmd.config.clone();
    let cmd = overlay(cmd, path.as_deref())?;
    if cmd.samples == 0 {
        return Err(UsageError("samples must be positive".into()).into());
    }
    let cfg = cmd.game.build()?;
    let om = cfg.outcome_model();
    let gamma = cfg.gamma_limit();
    let summary = simulate_outcomes(&cfg, cmd.samples, cmd.seed)?;
    let ne_check = if cmd.verify {
        if cfg.m > 4 || cfg.horizon > 4 {
            return Err(UsageError("--verify needs M <= 4 and T <= 4".into()).into());
        }
        let selector = match cmd.selector {
            SelectorName::Wait => Selector::WaitAndWatch,
            SelectorName::Eager => Selector::Eager,
        };
        let s = SpecialStrategy::from_config(cfg.clone(), cmd.atoms, selector)?;
        Some(verify_symmetric_ne(&s, &cfg, s.atoms(), 1e-9)?)
    } else {
        None
    };
    print_json(&GameOutput {
        gamma_mean_path: gamma,
        p_mean_path: om.probability(cfg.incentive(0), gamma),
        p_mean: summary.p_mean,
        eradication_rate: summary.eradication_rate,
        ne_check,
    })?;
    let mut t = Table::new(&["z", "count", "frequency"]);
    for (z, &n) in summary.histogram.iter().enumerate() {
        t.push(vec![z.to_string(), n.to_string(), cell(n as f64 / cmd.samples as f64)]);
    }
    t.write(cmd.out.as_deref())
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct LeaderCmd {
    #[command(flatten)]
    #[serde(flatten)]
    pub game: GameArgs,
    /// Failure budgets, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.05")]
    pub delta: Vec<f64>,
    /// Solve every threshold 1..=M and report the cheapest.
    #[arg(long)]
    #[serde(default)]
    pub auto_zbar: bool,
    #[arg(long, value_enum, default_value_t = Mode::Mc)]
    pub mode: Mode,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// CSV file the solutions are appended to.
    #[arg(long)]
    #[serde(default)]
    pub csv: Option<PathBuf>,
    /// Include wall-clock time in the JSON output.
    #[arg(long)]
    #[serde(default)]
    pub timing: bool,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

#[derive(Serialize)]
struct LeaderRun {
    delta: f64,
    /// Index into `solutions` of the cheapest threshold.
    best: usize,
    solutions: Vec<vaxgame_core::LeaderSolution>,
    #[serde(skip_serializing_if = "Option::is_none")]
    runtime_ms: Option<u128>,
}

pub const LEADER_COLUMNS: [&str; 6] = ["zbar", "delta", "sigma2", "g_star", "U_star", "NP_at_g"];

pub fn leader_row(sol: &vaxgame_core::LeaderSolution, sigma2: f64) -> Vec<String> {
    vec![sol.z_bar.to_string(), cell(sol.delta), cell(sigma2), cell(sol.g_star), cell(sol.u_star), cell(sol.np_at_g)]
}

pub fn optimize_leader(cmd: LeaderCmd) -> Result<()> {
    let path = cmd.config.clone();
    let cmd = overlay(cmd, path.as_deref())?;
    if cmd.delta.is_empty() || cmd.delta.iter().any(|d| !(*d > 0.0 && *d < 1.0)) {
        return Err(UsageError("delta values must lie in (0, 1)".into()).into());
    }
    if cmd.samples == 0 {
        return Err(UsageError("samples must be positive".into()).into());
    }
    let cfg = cmd.game.build()?;
    let sampler = solve::sampler(&cfg, cmd.mode, cmd.samples, cmd.seed)?;
    let sigma2 = if matches!(cmd.mode, Mode::Perfect) { 0.0 } else { cfg.xi.var };
    let mut runs = Vec::new();
    let mut table = Table::new(&LEADER_COLUMNS);
    for &delta in &cmd.delta {
        let start = Instant::now();
        let (solutions, best) = if cmd.auto_zbar {
            solve::all_thresholds(&cfg, delta, &sampler)?
        } else {
            (vec![solve::solve(&cfg, cfg.z_bar, delta, &sampler)?], 0)
        };
        for s in &solutions {
            table.push(leader_row(s, sigma2));
        }
        let runtime_ms = cmd.timing.then(|| start.elapsed().as_millis());
        runs.push(LeaderRun { delta, best, solutions, runtime_ms });
    }
    print_json(&runs)?;
    if let Some(p) = &cmd.csv {
        table.append(p)?;
    }
    Ok(())
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SimMode {
    Ode,
    Jump,
    Both,
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct SimulateCmd {
    #[command(flatten)]
    #[serde(flatten)]
    pub disease: DiseaseArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub rates: RateArgs,
    /// Sensitivity of the public to the vaccinated share.
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.2)]
    pub theta0: f64,
    #[arg(long, default_value_t = 0.3)]
    pub psi0: f64,
    #[arg(long, default_value_t = 0.3)]
    pub eta0: f64,
    /// End of the simulated time window.
    #[arg(long, default_value_t = 20.0)]
    pub t_max: f64,
    #[arg(long, value_enum, default_value_t = SimMode::Ode)]
    pub mode: SimMode,
    /// Initial population of the jump process.
    #[arg(long, default_value_t = 10_000)]
    pub n0: u64,
    /// Cap on jump-process events.
    #[arg(long, default_value_t = 5_000_000)]
    pub max_events: u64,
    /// Keep every k-th jump event.
    #[arg(long, default_value_t = 100)]
    pub record_every: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Trajectory CSV path [default: stdout].
    #[arg(long)]
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Also draw the trajectory as SVG.
    #[arg(long)]
    #[serde(default)]
    pub plot: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

pub fn simulate(cmd: SimulateCmd) -> Result<()> {
    let path = cmd.config.clone();
    let cmd = overlay(cmd, path.as_deref())?;
    let disease = cmd.disease.build()?;
    let nu = cmd.rates.build()?;
    if !(cmd.t_max > 0.0 && cmd.t_max.is_finite()) {
        return Err(UsageError("t_max must be positive".into()).into());
    }
    let x0 = OdeState::new(cmd.theta0, cmd.psi0, cmd.eta0);
    let mut series: Vec<(&str, Vec<f64>, Vec<OdeState<f64>>)> = Vec::new();
    if matches!(cmd.mode, SimMode::Ode | SimMode::Both) {
        // Fixed window: the path is reported up to t_max even after it settles.
        let opts = IntegrateOptions {
            t_max: cmd.t_max,
            eq_patience: usize::MAX,
            eq_window: f64::INFINITY,
            ..Default::default()
        };
        let tr = integrate(x0, &disease, &nu, cmd.beta, &opts)?;
        series.push(("ode", tr.times, tr.states));
    }
    if matches!(cmd.mode, SimMode::Jump | SimMode::Both) {
        // The event counter starts at n0 / eta0 and each event adds 1 / (n + 1) time.
        let start = cmd.n0 as f64 / cmd.eta0;
        let needed = (start * cmd.t_max.exp_m1()).ceil();
        let events = if needed.is_finite() { (needed as u64).min(cmd.max_events) } else { cmd.max_events };
        let jo = JumpOptions { n0: cmd.n0, events, record_every: cmd.record_every.max(1), seed: cmd.seed };
        let tr = simulate_jump(x0, &disease, &nu, cmd.beta, &jo)?;
        let keep = tr.times.partition_point(|t| *t <= cmd.t_max);
        if needed > cmd.max_events as f64 {
            eprintln!("note: jump process stopped at t = {:.3} after {events} events", tr.times[keep - 1]);
        }
        series.push(("jump", tr.times[..keep].to_vec(), tr.states[..keep].to_vec()));
    }
    let borrowed: Vec<(&str, &[f64], &[OdeState<f64>])> =
        series.iter().map(|(l, t, s)| (*l, t.as_slice(), s.as_slice())).collect();
    match &cmd.out {
        Some(p) => vaxgame_core::epidemic::write_trajectory_csv(std::fs::File::create(p)?, &borrowed)?,
        None => vaxgame_core::epidemic::write_trajectory_csv(std::io::stdout().lock(), &borrowed)?,
    }
    if let Some(p) = &cmd.plot {
        let mut lines = Vec::new();
        for (label, times, states) in &series {
            for (name, f) in [("theta", 0usize), ("psi", 1)] {
                let ys: Vec<Option<f64>> =
                    states.iter().map(|x| Some(if f == 0 { x.theta } else { x.psi })).collect();
                lines.push(Series::new(format!("{name} ({label})"), times, &ys));
            }
        }
        line_chart(p, "Population shares", "t", "share", &lines)?;
    }
    Ok(())
}
