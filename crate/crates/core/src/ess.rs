//! Evolutionarily stable states of the population given how many influencers vaccinated,
//! and the resulting eradication threshold.

use serde::{Deserialize, Serialize};

use crate::epidemic::{psi_coexist, psi_eradicate, AttractorKind, DiseaseParams, VaRatePolicy};
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Cost to influencers of steering followers toward vaccination, as a function of the
/// number `z` of influencers that vaccinated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfluenceCost<T> {
    /// `c_f(z) = s z`.
    Linear { s: T },
    /// `c_f(z) = table[z]` for `z = 0..=M`.
    Table(Vec<T>),
}

/// Population-level cost parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublicCostModel<T> {
    /// Direct cost of vaccination.
    pub c_v1: T,
    /// Side-effect cost scale, paid in proportion to `1 / psi`.
    pub c_v2: T,
    /// Cap on the side-effect cost.
    pub c_v2_bar: T,
    /// Cost of infection.
    pub c_i: T,
    /// Number of influencers.
    pub m: usize,
    pub influence: InfluenceCost<T>,
}

impl<T: Scalar> PublicCostModel<T> {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(invalid("need at least one influencer"));
        }
        let vals = [self.c_v1, self.c_v2, self.c_v2_bar, self.c_i];
        if vals.iter().any(|x| !x.is_finite()) {
            return Err(invalid("costs must be finite"));
        }
        if self.c_v2 < T::zero() || self.c_v2_bar < T::zero() || self.c_i <= T::zero() {
            return Err(invalid("need c_v2 >= 0, c_v2_bar >= 0, c_i > 0"));
        }
        match &self.influence {
            InfluenceCost::Linear { s } => {
                if !(s.is_finite() && *s >= T::zero()) {
                    return Err(invalid("influence slope must be non-negative"));
                }
            }
            InfluenceCost::Table(t) => {
                if t.len() != self.m + 1 {
                    return Err(invalid(format!("influence table needs {} entries", self.m + 1)));
                }
                if t.windows(2).any(|w| !(w[1] >= w[0])) || t.iter().any(|x| !x.is_finite()) {
                    return Err(invalid("influence table must be finite and non-decreasing"));
                }
            }
        }
        Ok(())
    }

    pub fn c_f(&self, z: usize) -> T {
        match &self.influence {
            InfluenceCost::Linear { s } => *s * T::count(z),
            InfluenceCost::Table(t) => t[z],
        }
    }

    fn frac_left(&self, z: usize) -> T {
        T::one() - T::count(z) / T::count(self.m)
    }

    /// Full influence outweighs the direct vaccination cost: `c_v1 - c_f(M) < 0`.
    pub fn full_influence_suffices(&self) -> bool {
        self.c_v1 - self.c_f(self.m) < T::zero()
    }
}

/// Payoff gaps for a follower choosing vaccination, evaluated at the candidate states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HValues<T> {
    /// Gap at the non-vaccinating state; positive means nobody wants to vaccinate.
    pub h_i: T,
    /// Gap at the eradicating state; negative means vaccination pays.
    pub h_v: T,
    /// Gap at the co-occurring state, when that state exists.
    pub h_v_o: Option<T>,
}

impl<T: Scalar> HValues<T> {
    pub fn h_v_o(&self) -> Result<T> {
        self.h_v_o
            .ok_or_else(|| Error::Domain("co-occurring state does not exist for these rates".into()))
    }
}

/// `nu_e` strictly above `b rho - nu_b / theta*`, which makes the eradicating state the
/// only vaccinating candidate.
pub fn is_admissible<T: Scalar>(disease: &DiseaseParams<T>, nu: &VaRatePolicy<T>) -> bool {
    nu.nu_e >= T::zero() && nu.nu_e > admissibility_bound(disease, nu)
}

/// `b rho - nu_b / theta*`.
pub fn admissibility_bound<T: Scalar>(disease: &DiseaseParams<T>, nu: &VaRatePolicy<T>) -> T {
    disease.b * disease.rho() - nu.nu_b / disease.theta_star()
}

fn check_inputs<T: Scalar>(
    z: usize,
    costs: &PublicCostModel<T>,
    disease: &DiseaseParams<T>,
    nu: &VaRatePolicy<T>,
) -> Result<()> {
    costs.validate()?;
    disease.validate()?;
    nu.validate()?;
    if z > costs.m {
        return Err(invalid(format!("z = {z} exceeds M = {}", costs.m)));
    }
    Ok(())
}

pub fn h_values<T: Scalar>(
    z: usize,
    costs: &PublicCostModel<T>,
    disease: &DiseaseParams<T>,
    nu: &VaRatePolicy<T>,
) -> Result<HValues<T>> {
    check_inputs(z, costs, disease, nu)?;
    if disease.rho() <= T::one() {
        return Err(Error::NoInterventionNeeded);
    }
    let lam = disease.lambda;
    let ts = disease.theta_star();
    let left = costs.frac_left(z);
    let cf = costs.c_f(z);
    let h_i = costs.c_v1 + left * costs.c_v2_bar - lam * ts * costs.c_i / (lam * ts + nu.nu_b) - cf;
    let psi_e = psi_eradicate(disease.b, nu);
    let side = |psi: T| if psi > T::zero() { costs.c_v2_bar.min(costs.c_v2 / psi) } else { costs.c_v2_bar };
    let h_v = costs.c_v1 + left * side(psi_e) - cf;
    let h_v_o = psi_coexist(disease, nu).and_then(|psi_o| {
        let theta_o = ts - psi_o;
        (theta_o > T::zero()).then(|| {
            costs.c_v1 + left * side(psi_o)
                - lam * theta_o * costs.c_i / (lam * theta_o + nu.nu_b + nu.nu_e * psi_o)
                - cf
        })
    });
    Ok(HValues { h_i, h_v, h_v_o })
}

/// Open interval of `beta` under which a state is also a stable point of the dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaRange<T> {
    pub lower: Option<T>,
    pub upper: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EssReport<T> {
    pub z: usize,
    /// `None` when the reproduction number is at most one.
    pub h: Option<HValues<T>>,
    /// All stable states; empty means no evolutionarily stable state exists.
    pub esss: Vec<AttractorKind>,
    /// Matching `beta` ranges, aligned with `esss`.
    pub beta_ranges: Vec<BetaRange<T>>,
    pub admissible: bool,
    /// Probability that the population ends up disease-free (0 or 1).
    pub eradication_probability: T,
    /// Some h-value lies within `TIE_WARN` of zero, so the exact comparisons that
    /// decided this report are sensitive to rounding.
    pub near_tie: bool,
}

/// Magnitude below which an h-value is flagged as a near tie.
pub const TIE_WARN: f64 = 1e-12;

impl<T: Scalar> HValues<T> {
    fn near_tie(&self) -> bool {
        let close = |h: T| h.abs() < T::lit(TIE_WARN);
        close(self.h_i) || close(self.h_v) || self.h_v_o.is_some_and(close)
    }
}

/// Determines which states are evolutionarily stable when `z` influencers vaccinated.
pub fn classify<T: Scalar>(
    z: usize,
    costs: &PublicCostModel<T>,
    disease: &DiseaseParams<T>,
    nu: &VaRatePolicy<T>,
) -> Result<EssReport<T>> {
    check_inputs(z, costs, disease, nu)?;
    if disease.rho() <= T::one() {
        let upper = (nu.nu_b > T::zero()).then(|| disease.b / nu.nu_b);
        return Ok(EssReport {
            z,
            h: None,
            esss: vec![AttractorKind::SelfEradicating],
            beta_ranges: vec![BetaRange { lower: None, upper }],
            admissible: false,
            eradication_probability: T::one(),
            near_tie: false,
        });
    }
    let h = h_values(z, costs, disease, nu)?;
    let bound = admissibility_bound(disease, nu);
    let admissible = is_admissible(disease, nu);
    let mut esss = Vec::new();
    let mut ranges = Vec::new();
    if h.h_i > T::zero() {
        esss.push(AttractorKind::NonVaccinating);
        let upper = (nu.nu_b > T::zero()).then(|| disease.b * disease.rho() / nu.nu_b);
        ranges.push(BetaRange { lower: None, upper });
    }
    if h.h_v < T::zero() && admissible {
        esss.push(AttractorKind::Eradicating);
        let psi_e = psi_eradicate(disease.b, nu);
        ranges.push(BetaRange { lower: Some(T::one() / psi_e), upper: None });
    }
    if let (Some(hvo), Some(psi_o)) = (h.h_v_o, psi_coexist(disease, nu)) {
        if hvo < T::zero() && nu.nu_e >= T::zero() && nu.nu_e < bound {
            esss.push(AttractorKind::CoOccurring);
            ranges.push(BetaRange { lower: Some(T::one() / psi_o), upper: None });
        }
    }
    let erad = h.h_i <= T::zero() && h.h_v < T::zero() && admissible;
    Ok(EssReport {
        z,
        h: Some(h),
        esss,
        beta_ranges: ranges,
        admissible,
        eradication_probability: if erad { T::one() } else { T::zero() },
        near_tie: h.near_tie(),
    })
}

/// Probability of eradication given `z` vaccinated influencers.
pub fn eradication_probability<T: Scalar>(
    z: usize,
    costs: &PublicCostModel<T>,
    disease: &DiseaseParams<T>,
    nu: &VaRatePolicy<T>,
) -> Result<T> {
    classify(z, costs, disease, nu).map(|r| r.eradication_probability)
}

/// Smallest number of vaccinated influencers that guarantees eradication.
pub fn eradication_threshold<T: Scalar>(
    costs: &PublicCostModel<T>,
    disease: &DiseaseParams<T>,
    nu: &VaRatePolicy<T>,
) -> Result<usize> {
    check_inputs(0, costs, disease, nu)?;
    if disease.rho() <= T::one() {
        return Err(Error::NoInterventionNeeded);
    }
    if !costs.full_influence_suffices() {
        return Err(Error::InsufficientInfluence);
    }
    if !is_admissible(disease, nu) {
        return Err(Error::NotAdmissible);
    }
    for z in 0..=costs.m {
        let h = h_values(z, costs, disease, nu)?;
        if h.h_v < T::zero() && h.h_i <= T::zero() {
            return Ok(z);
        }
    }
    // Unreachable once full influence suffices: h_v(M) = h_i(M) + positive < 0.
    Err(Error::Domain("no threshold found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig5(s: f64) -> (PublicCostModel<f64>, DiseaseParams<f64>) {
        (
            PublicCostModel {
                c_v1: 0.2,
                c_v2: 0.05,
                c_v2_bar: 100.0,
                c_i: 0.5,
                m: 40,
                influence: InfluenceCost::Linear { s },
            },
            DiseaseParams::new(15.0, 2.0, 2.0),
        )
    }

    #[test]
    fn exact_zero_gap_is_flagged() {
        // c_f(M) = c_v1 makes h_v(M) = 0 exactly: not eradicating, but flagged.
        let (c, d) = fig5(0.005);
        let nu = VaRatePolicy::new(5.0, 0.7);
        let r = classify(40, &c, &d, &nu).unwrap();
        assert_eq!(r.h.unwrap().h_v, 0.0);
        assert!(r.near_tie);
        assert_eq!(r.eradication_probability, 0.0);
        assert!(!classify(39, &c, &d, &nu).unwrap().near_tie);
    }

    #[test]
    fn threshold_matches_direct_scan_of_inequalities() {
        let (c, p) = fig5(0.2);
        let nu = VaRatePolicy::new(5.0, 0.7);
        let z = eradication_threshold(&c, &p, &nu).unwrap();
        // Both gaps written out with lambda theta* = 11.
        let psi_e = psi_eradicate(2.0, &nu);
        let hv = |z: f64| 0.2 + (1.0 - z / 40.0) * (0.05 / psi_e).min(100.0) - 0.2 * z;
        let hi = |z: f64| 0.2 + (1.0 - z / 40.0) * 100.0 - 5.5 / 16.0 - 0.2 * z;
        let ok = |z: f64| hv(z) < 0.0 && hi(z) <= 0.0;
        assert!(ok(z as f64) && !ok(z as f64 - 1.0), "z = {z}");
    }

    #[test]
    fn h_i_hand_value() {
        let c = PublicCostModel::<f64> {
            c_v1: 0.2,
            c_v2: 0.05,
            c_v2_bar: 100.0,
            c_i: 0.5,
            m: 40,
            influence: InfluenceCost::Linear { s: 0.1 },
        };
        let p = DiseaseParams::new(15.0, 2.0, 2.0);
        let h = h_values(10, &c, &p, &VaRatePolicy::new(5.0, 0.0)).unwrap();
        let lt = 15.0 * (1.0 - 4.0 / 15.0);
        assert!((h.h_i - (0.2 + 75.0 - lt * 0.5 / (lt + 5.0) - 1.0)).abs() < 1e-12);
        let full = h_values(40, &c, &p, &VaRatePolicy::new(5.0, 0.7)).unwrap();
        assert!((full.h_v - (0.2 - 4.0)).abs() < 1e-12);
    }

    #[test]
    fn admissibility_examples() {
        let p = DiseaseParams::new(15.0, 2.0, 2.0);
        assert!(is_admissible(&p, &VaRatePolicy::new(6.0, 0.0)));
        assert!(!is_admissible(&p, &VaRatePolicy::new(0.0, 7.5)));
        assert!(is_admissible(&p, &VaRatePolicy::new(5.0, 0.7)));
    }

    #[test]
    fn infeasible_when_influence_is_too_weak() {
        let (mut c, p) = fig5(0.0);
        c.c_v1 = 0.2;
        let nu = VaRatePolicy::new(5.0, 0.7);
        assert_eq!(eradication_threshold(&c, &p, &nu), Err(Error::InsufficientInfluence));
    }

    #[test]
    fn inadmissible_rates_are_rejected() {
        let (c, p) = fig5(0.2);
        let nu = VaRatePolicy::new(1.0, 0.0);
        assert_eq!(eradication_threshold(&c, &p, &nu), Err(Error::NotAdmissible));
        let r = classify(40, &c, &p, &nu).unwrap();
        assert_eq!(r.eradication_probability, 0.0);
    }

    #[test]
    fn co_occurring_value_needs_the_state_to_exist() {
        let (c, p) = fig5(0.2);
        let h = h_values(0, &c, &p, &VaRatePolicy::new(5.0, 30.0)).unwrap();
        assert!(h.h_v_o().is_err());
    }
}
