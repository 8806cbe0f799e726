use serde::{Deserialize, Serialize};

use super::{event_rate, DiseaseParams, OdeState, VaRatePolicy};
use crate::scalar::Scalar;

/// Guard band around the boundary cases where the stability classification is degenerate.
const GUARD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttractorKind {
    /// Disease dies out on its own: `(0, 0)`.
    SelfEradicating,
    /// Endemic disease, nobody vaccinated: `(theta*, 0)`.
    NonVaccinating,
    /// Vaccination wipes out the disease: `(0, psi_e)`.
    Eradicating,
    /// Disease and vaccination coexist: `(theta_o, psi_o)`.
    CoOccurring,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Attractor<T> {
    pub kind: AttractorKind,
    /// Equilibrium point, when it exists for the given rates.
    pub state: Option<OdeState<T>>,
    /// Locally asymptotically stable for the given parameters.
    pub active: bool,
    /// Parameters fall within the guard band of a boundary case.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttractorSet<T> {
    pub candidates: Vec<Attractor<T>>,
}

impl<T: Scalar> AttractorSet<T> {
    pub fn active(&self) -> impl Iterator<Item = &Attractor<T>> {
        self.candidates.iter().filter(|a| a.active)
    }

    pub fn get(&self, kind: AttractorKind) -> &Attractor<T> {
        self.candidates.iter().find(|a| a.kind == kind).expect("all kinds listed")
    }

    /// The unique active attractor, if exactly one is active.
    pub fn unique(&self) -> Option<&Attractor<T>> {
        let mut it = self.active();
        match (it.next(), it.next()) {
            (Some(a), None) => Some(a),
            _ => None,
        }
    }
}

/// Vaccinated share at the disease-free equilibrium, the positive root of
/// `nu_e psi^2 + (b + nu_b - nu_e) psi - nu_b = 0`.
pub fn psi_eradicate<T: Scalar>(b: T, nu: &VaRatePolicy<T>) -> T {
    let (nb, ne) = (nu.nu_b, nu.nu_e);
    if ne == T::zero() {
        return nb / (b + nb);
    }
    let q = b + nb - ne;
    let disc = (q * q + T::lit(4.0) * ne * nb).sqrt();
    // Rationalised form avoids cancellation when q > 0.
    if q > T::zero() {
        T::lit(2.0) * nb / (q + disc)
    } else {
        (disc - q) / (T::lit(2.0) * ne)
    }
}

/// Vaccinated share at the coexistence equilibrium, `nu_b / (b rho - nu_e)`; `None` when
/// the denominator is not positive.
pub fn psi_coexist<T: Scalar>(disease: &DiseaseParams<T>, nu: &VaRatePolicy<T>) -> Option<T> {
    let den = disease.b * disease.rho() - nu.nu_e;
    (den > T::zero()).then(|| nu.nu_b / den)
}

fn near<T: Scalar>(a: T, b: T) -> bool {
    (a - b).abs() <= T::lit(GUARD) * T::one().max(a.abs()).max(b.abs())
}

fn with_eta<T: Scalar>(theta: T, psi: T, disease: &DiseaseParams<T>, nu: &VaRatePolicy<T>) -> OdeState<T> {
    let mut x = OdeState::new(theta, psi, T::one());
    x.eta = (disease.b - disease.d) / event_rate(&x, disease, nu);
    x
}

/// Lists the four equilibrium families and marks which are stable for `(nu, beta)`.
pub fn candidate_attractors<T: Scalar>(
    disease: &DiseaseParams<T>,
    nu: &VaRatePolicy<T>,
    beta: T,
) -> AttractorSet<T> {
    let b = disease.b;
    let rho = disease.rho();
    let mut out = Vec::with_capacity(4);

    // Disease-free, vaccine-free point.
    let self_state = with_eta(T::zero(), T::zero(), disease, nu);
    let self_deg = near(beta * nu.nu_b, b) || near(rho, T::one());
    out.push(Attractor {
        kind: AttractorKind::SelfEradicating,
        state: Some(self_state),
        active: rho <= T::one() && beta * nu.nu_b < b && !self_deg,
        degenerate: self_deg,
    });

    if rho <= T::one() {
        let psi_e = psi_eradicate(b, nu);
        out.push(Attractor {
            kind: AttractorKind::NonVaccinating,
            state: None,
            active: false,
            degenerate: false,
        });
        // Herd adoption can still take over when influence alone sustains vaccination.
        let deg = near(beta * psi_e, T::one());
        out.push(Attractor {
            kind: AttractorKind::Eradicating,
            state: (psi_e > T::zero()).then(|| with_eta(T::zero(), psi_e, disease, nu)),
            active: beta * psi_e > T::one() && !deg,
            degenerate: deg,
        });
        out.push(Attractor { kind: AttractorKind::CoOccurring, state: None, active: false, degenerate: false });
        return AttractorSet { candidates: out };
    }

    let theta_star = disease.theta_star();
    let threshold = b * rho - nu.nu_b / theta_star;

    let nv_deg = nu.nu_b > T::zero() && near(beta, b * rho / nu.nu_b);
    out.push(Attractor {
        kind: AttractorKind::NonVaccinating,
        state: Some(with_eta(theta_star, T::zero(), disease, nu)),
        active: beta * nu.nu_b < b * rho && !nv_deg,
        degenerate: nv_deg,
    });

    let psi_e = psi_eradicate(b, nu);
    let er_deg = near(beta * psi_e, T::one()) || near(nu.nu_e, threshold);
    out.push(Attractor {
        kind: AttractorKind::Eradicating,
        state: (psi_e > T::zero()).then(|| with_eta(T::zero(), psi_e, disease, nu)),
        active: beta * psi_e > T::one() && nu.nu_e > threshold && !er_deg,
        degenerate: er_deg,
    });

    let co = psi_coexist(disease, nu).and_then(|psi_o| {
        let theta_o = theta_star - psi_o;
        (theta_o > T::zero() && psi_o > T::zero()).then_some((theta_o, psi_o))
    });
    let (co_state, co_active, co_deg) = match co {
        Some((theta_o, psi_o)) => {
            let deg = near(beta * psi_o, T::one()) || near(nu.nu_e, threshold);
            (
                Some(with_eta(theta_o, psi_o, disease, nu)),
                beta * psi_o > T::one() && nu.nu_e < threshold && !deg,
                deg,
            )
        }
        None => (None, false, near(nu.nu_e, threshold)),
    };
    out.push(Attractor { kind: AttractorKind::CoOccurring, state: co_state, active: co_active, degenerate: co_deg });

    AttractorSet { candidates: out }
}
