//! Population dynamics of infection and vaccination: the mean-field ODE, its
//! attractors, and the finite-population jump process it approximates.

mod attractor;
mod jump;
mod ode;
mod trajectory;

pub use attractor::{candidate_attractors, psi_coexist, psi_eradicate, Attractor, AttractorKind, AttractorSet};
pub use jump::{simulate_jump, JumpOptions, JumpTrajectory};
pub use ode::{integrate, IntegrateOptions, Trajectory};
pub use trajectory::write_trajectory_csv;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// Disease and demography rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiseaseParams<T> {
    /// Infection rate.
    pub lambda: T,
    /// Recovery rate.
    pub r: T,
    /// Birth rate.
    pub b: T,
    /// Death rate.
    pub d: T,
}

impl<T: Scalar> DiseaseParams<T> {
    /// Death rate defaults to a quarter of the birth rate.
    pub fn new(lambda: T, r: T, b: T) -> Self {
        Self { lambda, r, b, d: b / T::lit(4.0) }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.lambda, self.r, self.b, self.d];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(invalid("disease rates must be finite"));
        }
        if self.lambda <= T::zero() || self.b <= T::zero() || self.r < T::zero() || self.d < T::zero() {
            return Err(invalid("need lambda > 0, b > 0, r >= 0, d >= 0"));
        }
        if self.d >= self.b {
            return Err(invalid("birth rate must exceed death rate"));
        }
        Ok(())
    }

    /// Basic reproduction number `lambda / (r + b)`.
    pub fn rho(&self) -> T {
        self.lambda / (self.r + self.b)
    }

    /// Endemic infected fraction without vaccination, `1 - 1/rho`.
    pub fn theta_star(&self) -> T {
        T::one() - T::one() / self.rho()
    }
}

/// Vaccine-adoption rates set by the leader: baseline and social-influence terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VaRatePolicy<T> {
    pub nu_b: T,
    pub nu_e: T,
}

impl<T: Scalar> VaRatePolicy<T> {
    pub fn new(nu_b: T, nu_e: T) -> Self {
        Self { nu_b, nu_e }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu_b.is_finite() && self.nu_e.is_finite()) || self.nu_b < T::zero() || self.nu_e < T::zero() {
            return Err(invalid("adoption rates must be finite and non-negative"));
        }
        Ok(())
    }
}

/// Proportions of infected (`theta`) and vaccinated (`psi`) agents and the
/// population-per-event ratio `eta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OdeState<T> {
    pub theta: T,
    pub psi: T,
    pub eta: T,
}

impl<T: Scalar> OdeState<T> {
    pub fn new(theta: T, psi: T, eta: T) -> Self {
        Self { theta, psi, eta }
    }

    pub fn phi(&self) -> T {
        T::one() - self.theta - self.psi
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self.theta - other.theta)
            .abs()
            .max((self.psi - other.psi).abs())
            .max((self.eta - other.eta).abs())
    }

    pub fn max_norm(&self) -> T {
        self.theta.abs().max(self.psi.abs()).max(self.eta.abs())
    }

    pub fn in_simplex(&self, tol: T) -> bool {
        self.theta >= -tol && self.psi >= -tol && self.theta + self.psi <= T::one() + tol
    }
}

/// Probability that a vaccine-adoption epoch converts, `min(1, beta * psi)`.
#[inline]
pub fn acceptance<T: Scalar>(beta: T, psi: T) -> T {
    (beta * psi).min(T::one())
}

/// Mean event rate per capita.
pub fn event_rate<T: Scalar>(x: &OdeState<T>, disease: &DiseaseParams<T>, nu: &VaRatePolicy<T>) -> T {
    let phi = x.phi();
    disease.b
        + disease.d
        + disease.lambda * x.theta * phi
        + (nu.nu_b + nu.nu_e * x.psi) * phi
        + disease.r * x.theta
}

/// Right-hand side of the mean-field ODE.
pub fn ode_rhs<T: Scalar>(
    x: &OdeState<T>,
    disease: &DiseaseParams<T>,
    nu: &VaRatePolicy<T>,
    beta: T,
) -> OdeState<T> {
    let varrho = event_rate(x, disease, nu);
    let phi = x.phi();
    let scale = x.eta * varrho;
    let theta_dot = x.theta * disease.lambda / scale * (phi - T::one() / disease.rho());
    let psi_dot =
        (phi * acceptance(beta, x.psi) * (nu.nu_b + nu.nu_e * x.psi) - disease.b * x.psi) / scale;
    let eta_dot = (disease.b - disease.d) / varrho - x.eta;
    OdeState::new(theta_dot, psi_dot, eta_dot)
}
