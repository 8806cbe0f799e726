//! Vaccination incentive design as a three-layer Stackelberg game.
//!
//! A leader picks vaccine-adoption rates and a cash incentive for influencers; the
//! influencers play a finite-horizon stochastic game over when to vaccinate; the
//! wider population follows evolutionary dynamics driven by how many influencers
//! vaccinated.
//!
//! Analytic routines are generic over [`Scalar`] (`f32`, `f64`). The aliases below fix
//! the common `f64` instantiation.

pub mod epidemic;
pub mod error;
pub mod ess;
pub mod game;
pub mod leader;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Disease = epidemic::DiseaseParams<f64>;
pub type VaRate = epidemic::VaRatePolicy<f64>;
pub type State = epidemic::OdeState<f64>;
pub type Attractors = epidemic::AttractorSet<f64>;
pub type Costs = ess::PublicCostModel<f64>;
pub type GameConfig = game::InfluencerGameConfig<f64>;
pub type Leader = leader::LeaderProblem<f64>;
pub type LeaderSolution = leader::LeaderSolution<f64>;
