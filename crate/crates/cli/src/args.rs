//! Flag groups shared by several subcommands. Every group also deserialises from a
//! config file, where keys are the snake_case field names.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};
use vaxgame_core::epidemic::{DiseaseParams, VaRatePolicy};
use vaxgame_core::ess::{InfluenceCost, PublicCostModel};
use vaxgame_core::game::{InfluencerGameConfig, SideEffectLaw};

use crate::UsageError;

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct DiseaseArgs {
    /// Infection rate.
    #[arg(long, default_value_t = 15.0)]
    pub lambda: f64,
    /// Recovery rate.
    #[arg(long, default_value_t = 2.0)]
    pub r: f64,
    /// Birth rate.
    #[arg(long, default_value_t = 2.0)]
    pub b: f64,
    /// Death rate [default: b / 4].
    #[arg(long)]
    #[serde(default)]
    pub d: Option<f64>,
}

impl DiseaseArgs {
    pub fn build(&self) -> Result<DiseaseParams<f64>> {
        let mut p = DiseaseParams::new(self.lambda, self.r, self.b);
        if let Some(d) = self.d {
            p.d = d;
        }
        p.validate()?;
        Ok(p)
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct RateArgs {
    /// Baseline vaccine-adoption epoch rate.
    #[arg(long, default_value_t = 5.0)]
    pub nu_b: f64,
    /// Adoption rate growth per vaccinated share.
    #[arg(long, default_value_t = 0.7)]
    pub nu_e: f64,
}

impl RateArgs {
    pub fn build(&self) -> Result<VaRatePolicy<f64>> {
        let nu = VaRatePolicy::new(self.nu_b, self.nu_e);
        nu.validate()?;
        Ok(nu)
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct CostArgs {
    /// Number of influencers.
    #[arg(long, default_value_t = 40)]
    pub m: usize,
    /// Direct vaccination cost for the public.
    #[arg(long, default_value_t = 0.2)]
    pub cv1: f64,
    /// Side-effect cost scale for the public.
    #[arg(long, default_value_t = 0.05)]
    pub cv2: f64,
    /// Cap on the public side-effect cost.
    #[arg(long, default_value_t = 100.0)]
    pub cv2_bar: f64,
    /// Public infection cost.
    #[arg(long, default_value_t = 0.5)]
    pub c_inf: f64,
    /// Influence slope, c_f(z) = s z.
    #[arg(long, default_value_t = 0.1, conflicts_with = "cf_table")]
    pub s: f64,
    /// File with M + 1 influence costs c_f(0..=M), separated by whitespace or commas.
    #[arg(long)]
    #[serde(default)]
    pub cf_table: Option<PathBuf>,
}

impl CostArgs {
    pub fn build(&self) -> Result<PublicCostModel<f64>> {
        let influence = match &self.cf_table {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let vals = text
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<f64>().map_err(|e| UsageError(format!("bad influence cost {t:?}: {e}"))))
                    .collect::<std::result::Result<Vec<_>, _>>()?;
                InfluenceCost::Table(vals)
            }
            None => InfluenceCost::Linear { s: self.s },
        };
        let costs = PublicCostModel {
            c_v1: self.cv1,
            c_v2: self.cv2,
            c_v2_bar: self.cv2_bar,
            c_i: self.c_inf,
            m: self.m,
            influence,
        };
        costs.validate()?;
        Ok(costs)
    }
}

#[derive(Args, Debug, Clone, Serialize, Deserialize)]
pub struct GameArgs {
    /// Number of influencers.
    #[arg(long, default_value_t = 40)]
    pub m: usize,
    /// Horizon in days.
    #[arg(long, default_value_t = 20)]
    pub t: usize,
    /// Vaccination cost for an influencer.
    #[arg(long, default_value_t = 1.0)]
    pub cv: f64,
    /// Infection cost for an influencer.
    #[arg(long, default_value_t = 5.0)]
    pub ci: f64,
    /// Initial side-effect estimate.
    #[arg(long, default_value_t = 3.0)]
    pub cse1: f64,
    /// Mean of the normal behind each side-effect signal.
    #[arg(long, default_value_t = 5.0)]
    pub xi_mean: f64,
    /// Variance of the normal behind each side-effect signal.
    #[arg(long, default_value_t = 2.0)]
    pub xi_var: f64,
    /// Extra probability mass at a zero signal.
    #[arg(long, default_value_t = 0.0)]
    pub p0: f64,
    /// Vaccinated influencers needed for eradication [default: M].
    #[arg(long)]
    #[serde(default)]
    pub zbar: Option<usize>,
    /// Uniform incentive paid while fewer than zbar have vaccinated.
    #[arg(long, default_value_t = 0.0)]
    pub g0: f64,
}

impl GameArgs {
    pub fn build(&self) -> Result<InfluencerGameConfig<f64>> {
        let z_bar = self.zbar.unwrap_or(self.m);
        let cfg = InfluencerGameConfig {
            m: self.m,
            horizon: self.t,
            c_v: self.cv,
            c_i: self.ci,
            c_se_1: self.cse1,
            xi: SideEffectLaw { mean: self.xi_mean, var: self.xi_var, p0: self.p0 },
            z_bar,
            incentives: vec![self.g0; z_bar.min(self.m)],
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
