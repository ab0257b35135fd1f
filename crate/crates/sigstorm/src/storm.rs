//! Population-level load aggregation and per-user anomaly fingerprints.
//!
//! A signalling storm is a population effect: some fraction of a cell's users
//! runs an application (malicious or merely badly written) that fires channel
//! promotions at a burst rate. Users are independent, so the network-side
//! totals are a mixture of the two per-user loads. The detection metrics
//! expose why storm participants are distinguishable from heavy legitimate
//! users: they hold channels while idle and connect far more often than they
//! transfer data.

use crate::analytic::{load_report, occupancy_fractions, stationary_distribution, AnalyticError};
use crate::model::{build_transition_table, MainState, ModelParams, SignallingCosts};
use thiserror::Error;

/// A mixed population: `n_users` independent users, a `fraction_misbehaving`
/// share of which runs with the attack burst rates instead of zero bursts.
#[derive(Debug, Clone, PartialEq)]
pub struct StormScenario {
    pub n_users: u64,
    /// Share of users with the attack parameters, in [0, 1].
    pub fraction_misbehaving: f64,
    /// Per-user behaviour of the well-behaved class; burst rates must be 0.
    pub normal_params: ModelParams,
    /// Per-user behaviour of the misbehaving class; must equal `normal_params`
    /// except in the two burst rates.
    pub attack_params: ModelParams,
    pub costs: SignallingCosts,
}

/// Errors from scenario validation or the underlying load evaluation.
#[derive(Debug, Error, PartialEq)]
pub enum StormError {
    #[error("invalid scenario: {}", .0.join("; "))]
    InvalidScenario(Vec<String>),
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
}

fn validate_scenario(s: &StormScenario) -> Result<(), StormError> {
    let mut v = Vec::new();
    if !(s.fraction_misbehaving >= 0.0 && s.fraction_misbehaving <= 1.0) {
        v.push(format!(
            "fraction_misbehaving must be in [0, 1], got {}",
            s.fraction_misbehaving
        ));
    }
    if s.normal_params.alpha_l != 0.0 || s.normal_params.alpha_h != 0.0 {
        v.push("normal_params must have zero burst rates".to_string());
    }
    let n = &s.normal_params;
    let a = &s.attack_params;
    if (n.lambda_l, n.lambda_h, n.mu_l, n.mu_h, n.tau_l, n.tau_h, n.tau_p)
        != (a.lambda_l, a.lambda_h, a.mu_l, a.mu_h, a.tau_l, a.tau_h, a.tau_p)
    {
        v.push(
            "attack_params must equal normal_params in everything except the burst rates"
                .to_string(),
        );
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(StormError::InvalidScenario(v))
    }
}

/// Total `(gamma_r, gamma_c)` over the population (messages/s): the user count
/// times the mixture of the two per-user loads.
pub fn population_load(s: &StormScenario) -> Result<(f64, f64), StormError> {
    validate_scenario(s)?;
    let normal = load_report(&s.normal_params, &s.costs)?;
    let attack = load_report(&s.attack_params, &s.costs)?;
    let n = s.n_users as f64;
    let f = s.fraction_misbehaving;
    Ok((
        n * ((1.0 - f) * normal.gamma_r + f * attack.gamma_r),
        n * ((1.0 - f) * normal.gamma_c + f * attack.gamma_c),
    ))
}

/// The per-user fingerprint used to tell storm participants from merely busy
/// users.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionMetrics {
    /// Fraction of time a channel is held with no traffic flowing (signalling
    /// procedures excluded).
    pub inactive_fraction: f64,
    /// Fraction of time user traffic is actually flowing.
    pub active_fraction: f64,
    /// Connection-attempt frequency (1/s): total stationary rate of leaving
    /// IDLE or PCH.
    pub promotion_rate: f64,
}

/// Computes the fingerprint for one behaviour profile.
///
/// Storm participants show a high `inactive_fraction` (channels held by
/// bursts that carry nothing) and a high `promotion_rate`; heavy legitimate
/// users raise `active_fraction` instead.
pub fn detection_metrics(
    p: &ModelParams,
    c: &SignallingCosts,
) -> Result<DetectionMetrics, AnalyticError> {
    let d = stationary_distribution(p, c)?;
    let occ = occupancy_fractions(&d);
    // Validation already passed, and the analytic path rejects the same
    // symbolic-infinite rates the table builder does.
    let table = build_transition_table(p, c)
        .expect("table construction accepts every input the closed form accepts");
    let promotion_rate = [MainState::Idle, MainState::Pch]
        .iter()
        .map(|&s| d.pi(s) * table.exit_rate(s))
        .sum();
    Ok(DetectionMetrics {
        inactive_fraction: occ.inactive_main(),
        active_fraction: occ.active(),
        promotion_rate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::load_report;
    use crate::numeric::rel_err;

    fn storm_params() -> ModelParams {
        // Population reference set: light browsing plus rare large transfers.
        ModelParams {
            lambda_l: 1.0 / 600.0,
            lambda_h: 1.0 / 600.0,
            mu_l: 0.2,
            mu_h: 1.0 / 180.0,
            alpha_l: 0.0,
            alpha_h: 0.0,
            tau_l: 0.2,
            tau_h: 0.2,
            tau_p: 1.0 / 600.0,
        }
    }

    fn scenario(n_users: u64, f: f64, alpha_l: f64, alpha_h: f64) -> StormScenario {
        let normal = storm_params();
        StormScenario {
            n_users,
            fraction_misbehaving: f,
            normal_params: normal,
            attack_params: normal.with_bursts(alpha_l, alpha_h),
            costs: SignallingCosts::default(),
        }
    }

    #[test]
    fn degenerate_fractions_reduce_to_single_class_loads() {
        let s0 = scenario(10_000, 0.0, 0.0, 0.5);
        let normal = load_report(&s0.normal_params, &s0.costs).unwrap();
        let (gr, gc) = population_load(&s0).unwrap();
        assert_eq!(gr, 10_000.0 * normal.gamma_r);
        assert_eq!(gc, 10_000.0 * normal.gamma_c);

        let s1 = scenario(1, 1.0, 0.0, 0.5);
        let attack = load_report(&s1.attack_params, &s1.costs).unwrap();
        let (gr1, gc1) = population_load(&s1).unwrap();
        assert_eq!(gr1, attack.gamma_r);
        assert_eq!(gc1, attack.gamma_c);
    }

    #[test]
    fn load_is_linear_in_population_size() {
        let (gr, gc) = population_load(&scenario(5_000, 0.1, 0.02, 0.0)).unwrap();
        let (gr2, gc2) = population_load(&scenario(10_000, 0.1, 0.02, 0.0)).unwrap();
        assert_eq!(gr2, 2.0 * gr);
        assert_eq!(gc2, 2.0 * gc);
    }

    #[test]
    fn load_is_affine_in_the_misbehaving_fraction() {
        let at = |f: f64| population_load(&scenario(10_000, f, 0.0, 0.5)).unwrap();
        let (r0, c0) = at(0.0);
        let (r1, c1) = at(1.0);
        let (rh, ch) = at(0.5);
        assert!(rel_err(rh, 0.5 * (r0 + r1)) < 1e-12);
        assert!(rel_err(ch, 0.5 * (c0 + c1)) < 1e-12);
    }

    #[test]
    fn invalid_scenarios_are_rejected_with_reasons() {
        let mut s = scenario(100, 1.5, 0.0, 0.5);
        match population_load(&s).unwrap_err() {
            StormError::InvalidScenario(v) => assert!(v[0].contains("fraction_misbehaving")),
            other => panic!("unexpected error {other:?}"),
        }
        s.fraction_misbehaving = 0.5;
        s.normal_params.alpha_h = 0.1;
        assert!(matches!(
            population_load(&s).unwrap_err(),
            StormError::InvalidScenario(_)
        ));
        let mut s2 = scenario(100, 0.5, 0.0, 0.5);
        s2.attack_params.tau_l = 99.0;
        assert!(matches!(
            population_load(&s2).unwrap_err(),
            StormError::InvalidScenario(_)
        ));
    }

    #[test]
    fn promotion_rate_matches_the_closed_form_identity() {
        let p = storm_params().with_bursts(0.01, 0.02);
        let c = SignallingCosts::default();
        let m = detection_metrics(&p, &c).unwrap();
        let d = stationary_distribution(&p, &c).unwrap();
        let lam = p.lambda_l + p.lambda_h + p.alpha_l + p.alpha_h;
        let expected = d.pi(MainState::Idle) * lam + d.pi(MainState::Pch) * (lam + p.tau_p);
        assert!(rel_err(m.promotion_rate, expected) < 1e-14);

        let c_off = SignallingCosts {
            pch_enabled: false,
            ..c
        };
        let m_off = detection_metrics(&p, &c_off).unwrap();
        let d_off = stationary_distribution(&p, &c_off).unwrap();
        assert!(rel_err(m_off.promotion_rate, d_off.pi(MainState::Idle) * lam) < 1e-14);
    }

    #[test]
    fn attacker_fingerprint_differs_from_heavy_user_fingerprint() {
        let base = ModelParams {
            lambda_l: 1.0 / 600.0,
            lambda_h: 1.0 / 1800.0,
            mu_l: 0.2,
            mu_h: 1.0 / 120.0,
            alpha_l: 0.0,
            alpha_h: 0.0,
            tau_l: 0.2,
            tau_h: 0.5,
            tau_p: 1.0 / 600.0,
        };
        let c = SignallingCosts::default();
        let attacker = detection_metrics(&base.with_bursts(0.0, 0.1), &c).unwrap();
        let heavy = detection_metrics(
            &ModelParams {
                lambda_h: base.lambda_h * 10.0,
                ..base
            },
            &c,
        )
        .unwrap();
        assert!(
            attacker.inactive_fraction > heavy.inactive_fraction,
            "attacker {} vs heavy {}",
            attacker.inactive_fraction,
            heavy.inactive_fraction
        );
        assert!(
            attacker.promotion_rate > heavy.promotion_rate,
            "attacker {} vs heavy {}",
            attacker.promotion_rate,
            heavy.promotion_rate
        );
        // The attacker moves a fraction of the traffic but holds channels far
        // longer; its genuinely-active share stays below the heavy user's.
        assert!(attacker.active_fraction < heavy.active_fraction);
    }

    #[test]
    fn no_traffic_means_no_promotions() {
        let p = ModelParams {
            lambda_l: 1e-12,
            lambda_h: 1e-12,
            ..storm_params()
        };
        let m = detection_metrics(&p, &SignallingCosts::default()).unwrap();
        assert!(m.promotion_rate < 1e-11, "rate {}", m.promotion_rate);
    }

    #[test]
    fn population_totals_grow_with_the_misbehaving_fraction() {
        // With the optimizer's worst-case core burst, both totals must be
        // nondecreasing in f.
        let normal = storm_params();
        let c = SignallingCosts::default();
        let worst = crate::optimizer::core_optimal_alpha_l(&normal, &c).unwrap();
        let at =
            |f: f64| population_load(&scenario(10_000, f, worst.alpha_l_star, 0.0)).unwrap();
        let mut prev = at(0.0);
        for i in 1..=10 {
            let cur = at(i as f64 / 10.0);
            assert!(
                cur.0 >= prev.0 && cur.1 >= prev.1,
                "dip at f={}",
                i as f64 / 10.0
            );
            prev = cur;
        }
    }
}
