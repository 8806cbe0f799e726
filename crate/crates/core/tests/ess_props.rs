use proptest::prelude::*;
use vaxgame_core::epidemic::{AttractorKind, DiseaseParams, VaRatePolicy};
use vaxgame_core::ess::{
    classify, eradication_probability, eradication_threshold, h_values, is_admissible, InfluenceCost,
    PublicCostModel,
};
use vaxgame_core::Error;

fn fig5_costs(s: f64) -> PublicCostModel<f64> {
    PublicCostModel { c_v1: 0.2, c_v2: 0.05, c_v2_bar: 100.0, c_i: 0.5, m: 40, influence: InfluenceCost::Linear { s } }
}

/// Supercritical disease with admissible rates.
fn model() -> impl Strategy<Value = (DiseaseParams<f64>, VaRatePolicy<f64>, PublicCostModel<f64>)> {
    (
        0.5..3.0f64,
        0.0..3.0f64,
        1.3..8.0f64,
        0.05..2.0f64,
        0.01..3.0f64,
        (0.0..2.0f64, 0.0..2.0f64, 1.0..200.0f64, 0.1..60.0f64),
        (2usize..60, 0.02..3.0f64),
    )
        .prop_map(|(b, r, mult, nb, extra, (c_v1, c_v2, c_v2_bar, c_i), (m, s))| {
            let d = DiseaseParams::new(mult * (r + b), r, b);
            let nu_b = nb * b * d.rho();
            let nu_e = (b * d.rho() - nu_b / d.theta_star()).max(0.0) + extra;
            let costs = PublicCostModel { c_v1, c_v2, c_v2_bar, c_i, m, influence: InfluenceCost::Linear { s } };
            (d, VaRatePolicy::new(nu_b, nu_e), costs)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn gaps_decrease_with_influencers((d, nu, costs) in model()) {
        let hs: Vec<_> = (0..=costs.m).map(|z| h_values(z, &costs, &d, &nu).unwrap()).collect();
        for w in hs.windows(2) {
            prop_assert!(w[1].h_i < w[0].h_i);
            prop_assert!(w[1].h_v < w[0].h_v);
        }
    }

    #[test]
    fn full_influence_ordering((d, nu, costs) in model()) {
        prop_assume!(costs.full_influence_suffices());
        let h = h_values(costs.m, &costs, &d, &nu).unwrap();
        prop_assert!(h.h_i < h.h_v && h.h_v < 0.0, "{h:?}");
    }

    #[test]
    fn threshold_characterises_eradication((d, nu, costs) in model()) {
        prop_assert!(is_admissible(&d, &nu));
        match eradication_threshold(&costs, &d, &nu) {
            Ok(zb) => {
                for z in 0..=costs.m {
                    let p = eradication_probability(z, &costs, &d, &nu).unwrap();
                    prop_assert_eq!(p == 1.0, z >= zb, "z = {}, threshold {}", z, zb);
                }
            }
            Err(Error::InsufficientInfluence) => {
                prop_assert!(!costs.full_influence_suffices());
                for z in 0..=costs.m {
                    prop_assert_eq!(eradication_probability(z, &costs, &d, &nu).unwrap(), 0.0);
                }
            }
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }

    #[test]
    fn subcritical_reports_only_self_eradication(
        b in 0.5..3.0f64, r in 0.0..3.0f64, frac in 0.05..0.95f64, nu_b in 0.0..5.0f64, nu_e in 0.0..5.0f64, z in 0usize..=40
    ) {
        let d = DiseaseParams::new(frac * (r + b), r, b);
        let rep = classify(z, &fig5_costs(0.1), &d, &VaRatePolicy::new(nu_b, nu_e)).unwrap();
        prop_assert_eq!(rep.esss, vec![AttractorKind::SelfEradicating]);
        prop_assert_eq!(rep.eradication_probability, 1.0);
    }
}

#[test]
fn no_influencers_means_no_eradication() {
    let d = DiseaseParams::new(15.0, 2.0, 2.0);
    let nu = VaRatePolicy::new(5.0, 0.7);
    let h = h_values(0, &fig5_costs(0.2), &d, &nu).unwrap();
    assert!(h.h_v > 0.0);
}

#[test]
fn full_participation_with_moderate_influence_is_stable() {
    let d = DiseaseParams::new(15.0, 2.0, 2.0);
    let nu = VaRatePolicy::new(5.0, 0.7);
    let costs = fig5_costs(0.2);
    let h = h_values(40, &costs, &d, &nu).unwrap();
    assert!((h.h_v - (0.2 - 8.0)).abs() < 1e-12);
    let rep = classify(40, &costs, &d, &nu).unwrap();
    assert!(rep.esss.contains(&AttractorKind::Eradicating));
    assert_eq!(rep.eradication_probability, 1.0);
}

#[test]
fn strong_influence_needs_one_influencer() {
    let d = DiseaseParams::new(15.0, 2.0, 2.0);
    let nu = VaRatePolicy::new(5.0, 0.7);
    let costs = PublicCostModel { c_v1: 0.01, ..fig5_costs(100.0) };
    assert_eq!(eradication_threshold(&costs, &d, &nu).unwrap(), 1);
}

#[test]
fn barely_sufficient_influence_needs_everyone() {
    let d = DiseaseParams::new(15.0, 2.0, 2.0);
    let nu = VaRatePolicy::new(5.0, 0.7);
    let mut table = vec![0.0; 41];
    table[40] = 0.2 + 1e-6;
    let costs = PublicCostModel { c_v2: 0.0, c_v2_bar: 0.0, influence: InfluenceCost::Table(table), ..fig5_costs(0.0) };
    assert_eq!(eradication_threshold(&costs, &d, &nu).unwrap(), 40);
}

#[test]
fn threshold_falls_as_influence_grows() {
    let d = DiseaseParams::new(15.0, 2.0, 2.0);
    let nu = VaRatePolicy::new(5.0, 0.7);
    let zs: Vec<usize> =
        (0..=200).map(|i| eradication_threshold(&fig5_costs(0.01 * 1.05f64.powi(i)), &d, &nu).unwrap()).collect();
    assert!(zs.windows(2).all(|w| w[1] <= w[0]), "{zs:?}");
    assert_eq!(zs[0], 40);
    assert_eq!(*zs.last().unwrap(), 1);
}

#[test]
fn admissibility_is_strict() {
    let d = DiseaseParams::new(15.0, 2.0, 2.0);
    assert!(!is_admissible(&d, &VaRatePolicy::new(0.0, 7.5)));
    assert!(is_admissible(&d, &VaRatePolicy::new(6.0, 0.0)));
    assert!(is_admissible(&d, &VaRatePolicy::new(5.0, 0.7)));
}
