use serde::{Deserialize, Serialize};

use crate::epidemic::{psi_eradicate, DiseaseParams, VaRatePolicy};
use crate::error::{Error, Result};
use crate::ess::{eradication_threshold, PublicCostModel};
use crate::scalar::Scalar;

/// Joint choice of adoption rates and incentive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDesign<T> {
    pub disease: DiseaseParams<T>,
    pub costs: PublicCostModel<T>,
}

impl<T: Scalar> JointDesign<T> {
    pub fn validate(&self) -> Result<()> {
        self.disease.validate()?;
        self.costs.validate()?;
        if self.disease.rho() <= T::one() {
            return Err(Error::NoInterventionNeeded);
        }
        if !self.costs.full_influence_suffices() {
            return Err(Error::InsufficientInfluence);
        }
        Ok(())
    }

    /// Side-effect cap binds at the endemic share: `c_v2_bar > c_v2 / theta*`.
    fn cap_binds(&self) -> bool {
        self.costs.c_v2_bar > self.costs.c_v2 / self.disease.theta_star()
    }
}

/// Limit of the eradication conditions as the adoption rates approach the boundary
/// where the vaccinated share equals `theta*`:
/// `min{-min(c_v2_bar, c_v2/theta*) (M-k)/M, (r+b)/(r+2b) c_i - c_v2_bar (M-k)/M}`.
pub fn threshold_bound<T: Scalar>(design: &JointDesign<T>, k: usize) -> T {
    let (d, c) = (&design.disease, &design.costs);
    let left = T::count(c.m - k) / T::count(c.m);
    let side = c.c_v2_bar.min(c.c_v2 / d.theta_star());
    let inf = (d.r + d.b) / (d.r + T::lit(2.0) * d.b) * c.c_i;
    (-side * left).min(inf - c.c_v2_bar * left)
}

/// Smallest eradication threshold reachable by any admissible adoption rates.
/// Can be zero when eradication needs no influencer at all.
pub fn vaccine_optimal_k<T: Scalar>(design: &JointDesign<T>) -> Result<usize> {
    design.validate()?;
    let c = &design.costs;
    let strict = design.cap_binds();
    for k in 0..=c.m {
        let o = c.c_v1 - c.c_f(k) - threshold_bound(design, k);
        if (strict && o <= T::zero()) || (!strict && o < T::zero()) {
            return Ok(k);
        }
    }
    // c_v1 - c_f(M) < 0 = L_M makes k = M always qualify.
    Err(Error::Domain("no vaccine-optimal threshold".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsDesign<T> {
    pub nu: VaRatePolicy<T>,
    pub psi_e: T,
    pub z_bar: usize,
}

/// Adoption rates just inside the admissible region whose vaccinated share is within
/// `eps` of `theta*` and whose threshold equals the vaccine-optimal one.
pub fn eps_vaccine_optimal_nu<T: Scalar>(design: &JointDesign<T>, eps: T) -> Result<EpsDesign<T>> {
    let k = vaccine_optimal_k(design)?;
    let d = &design.disease;
    let ts = d.theta_star();
    let top = d.b * d.rho() * ts;
    let mut e1 = top / T::lit(2.0);
    let mut e2 = T::one();
    for _ in 0..200 {
        let nu_b = top - e1;
        let nu = VaRatePolicy::new(nu_b, d.b * d.rho() - nu_b / ts + e2);
        let psi_e = psi_eradicate(d.b, &nu);
        if psi_e > ts && psi_e <= ts + eps {
            if let Ok(z) = eradication_threshold(&design.costs, d, &nu) {
                if z == k {
                    return Ok(EpsDesign { nu, psi_e, z_bar: z });
                }
            }
        }
        e1 = e1 / T::lit(2.0);
        e2 = e2 / T::lit(2.0);
    }
    Err(Error::IterationCap("epsilon construction of adoption rates".into()))
}

/// Some admissible adoption rates make full participation (`z_bar = M`) necessary.
pub fn incentive_optimal_exists<T: Scalar>(design: &JointDesign<T>) -> Result<bool> {
    design.validate()?;
    let c = &design.costs;
    let lhs = c.c_v1 - c.c_f(c.m - 1);
    let rhs = -c.c_v2_bar / T::count(c.m);
    Ok(if design.cap_binds() { lhs > rhs } else { lhs >= rhs })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncentiveOptimalDesign<T> {
    /// Infimum of the vaccinated share over adoption rates with threshold `M`.
    pub psi_e_inf: T,
    /// Concrete rates with threshold `M`.
    pub nu: VaRatePolicy<T>,
    /// Vaccinated share under `nu`, within `eps` of the infimum.
    pub psi_e: T,
}

/// Least vaccinated share among adoption rates that force `z_bar = M`, with a witness.
pub fn incentive_optimal_design<T: Scalar>(
    design: &JointDesign<T>,
    eps: T,
) -> Result<Option<IncentiveOptimalDesign<T>>> {
    if !incentive_optimal_exists(design)? {
        return Ok(None);
    }
    let (d, c) = (&design.disease, &design.costs);
    let ts = d.theta_star();
    let top = d.b * d.rho() * ts;
    let mf = T::count(c.m);
    let b_gap = c.c_v1 - c.c_f(c.m - 1);
    // Threshold M through the vaccinating condition failing at M-1: needs
    // min(c_v2_bar, c_v2/psi_e) >= -M b_gap with psi_e > theta*.
    let via_vac = b_gap >= T::zero() || (c.c_v2_bar >= -mf * b_gap && c.c_v2 > -mf * b_gap * ts);
    // Or through the non-vaccinating condition holding at M-1: nu_b above this bound.
    let a_gap = b_gap + c.c_v2_bar / mf;
    let nu_b_min = (a_gap > T::zero()).then(|| {
        let lt = d.lambda * ts;
        (lt * c.c_i / a_gap - lt).max(T::zero())
    });
    let near_boundary = via_vac || nu_b_min.is_some_and(|v| v < top);
    let psi_e_inf = if near_boundary {
        ts
    } else {
        let v = nu_b_min.expect("existence implies one route");
        v / (d.b + v)
    };

    let mut slack = T::one();
    for _ in 0..200 {
        let nu = if near_boundary {
            let nu_b = match nu_b_min {
                Some(v) if !via_vac => v + (top - v) * (T::one() - slack / T::lit(2.0)),
                _ => top * (T::one() - slack / T::lit(2.0)),
            };
            VaRatePolicy::new(nu_b, (d.b * d.rho() - nu_b / ts).max(T::zero()) + slack)
        } else {
            let v = nu_b_min.expect("checked");
            VaRatePolicy::new(v + slack, T::zero())
        };
        let psi_e = psi_eradicate(d.b, &nu);
        if psi_e <= psi_e_inf + eps {
            if let Ok(z) = eradication_threshold(c, d, &nu) {
                if z == c.m {
                    return Ok(Some(IncentiveOptimalDesign { psi_e_inf, nu, psi_e }));
                }
            }
        }
        slack = slack / T::lit(2.0);
    }
    Err(Error::IterationCap("incentive-optimal adoption rates".into()))
}
