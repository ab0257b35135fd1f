//! Closed-form stationary distribution and the two signalling-load formulas.
//!
//! The reduced chain admits an explicit product-form-like solution: every main
//! state's probability is a rational expression in the rates times a common
//! normalization constant `G`. Signalling time is not represented by separate
//! states here; instead each main state carries a weight `w_s >= 1` such that
//! `sum_s pi(s) * w_s = 1`, the weight counting the mean signalling time
//! attached to one unit of sojourn in `s`. The RNC and SGSN load formulas then
//! follow as flow-times-cost sums over the reduced edges.

use crate::model::{validate_params, MainState, ModelParams, SignallingCosts};
use thiserror::Error;

/// Aggregate rates and dimensionless ratios used throughout the closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedQuantities {
    /// Total low-band initiation rate `lambda_L + alpha_L` (1/s).
    pub lambda_l_total: f64,
    /// Total high-band initiation rate `lambda_H + alpha_H` (1/s).
    pub lambda_h_total: f64,
    /// Total initiation rate (1/s).
    pub lambda_total: f64,
    /// `lambda_L / (lambda_H + mu_L)`.
    pub q_l: f64,
    /// `lambda_L / (lambda_H + alpha_H + mu_L)`; equals `q_l` at `alpha_H = 0`.
    pub rho_l: f64,
    /// `lambda_H / mu_H`.
    pub q_h: f64,
}

/// Computes the aggregate quantities for one parameter set.
pub fn derived_quantities(p: &ModelParams) -> DerivedQuantities {
    let lambda_l_total = p.lambda_l + p.alpha_l;
    let lambda_h_total = p.lambda_h + p.alpha_h;
    DerivedQuantities {
        lambda_l_total,
        lambda_h_total,
        lambda_total: lambda_l_total + lambda_h_total,
        q_l: p.lambda_l / (p.lambda_h + p.mu_l),
        rho_l: p.lambda_l / (lambda_h_total + p.mu_l),
        q_h: p.lambda_h / p.mu_h,
    }
}

/// Per-state normalization weights: `w_s` is one plus the mean signalling time
/// charged per unit of sojourn in `s`, so `sum_s pi(s) w_s = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateWeights {
    w: [f64; 10],
}

impl StateWeights {
    pub fn weight(&self, s: MainState) -> f64 {
        self.w[s.index()]
    }

    pub fn as_array(&self) -> [f64; 10] {
        self.w
    }
}

/// Computes the normalization weights for one parameter/cost set.
pub fn state_weights(p: &ModelParams, c: &SignallingCosts) -> StateWeights {
    let d = derived_quantities(p);
    let (ll, lh) = (d.lambda_l_total, d.lambda_h_total);
    let mut w = [1.0f64; 10];
    w[MainState::Idle.index()] = 1.0 + lh * c.sigma_inv_dh + ll * c.sigma_inv_dl;
    if c.pch_enabled {
        w[MainState::Pch.index()] = 1.0
            + lh * c.sigma_inv_ph
            + ll * c.sigma_inv_pl
            + p.tau_p * (c.sigma_inv_pl + c.sigma_inv_ld_release);
        let w_tail = 1.0 + lh * c.sigma_inv_lh + p.tau_l * c.sigma_inv_lp;
        w[MainState::FachTail.index()] = w_tail;
        w[MainState::FachTailAttack.index()] = w_tail;
    } else {
        let w_tail = 1.0 + lh * c.sigma_inv_lh + p.tau_l * c.sigma_inv_ld;
        w[MainState::FachTail.index()] = w_tail;
        w[MainState::FachTailAttack.index()] = w_tail;
    }
    w[MainState::FachActive.index()] = 1.0 + lh * c.sigma_inv_lh;
    w[MainState::DchTail.index()] = 1.0 + p.tau_h * c.sigma_inv_hl;
    w[MainState::DchTailAttack.index()] = 1.0 + p.tau_h * c.sigma_inv_hl;
    StateWeights { w }
}

/// Closed-form stationary distribution over the ten main states.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDistribution {
    pi: [f64; 10],
    weights: StateWeights,
    g: f64,
}

impl StationaryDistribution {
    pub fn pi(&self, s: MainState) -> f64 {
        self.pi[s.index()]
    }

    pub fn pi_array(&self) -> [f64; 10] {
        self.pi
    }

    pub fn weights(&self) -> &StateWeights {
        &self.weights
    }

    /// Normalization constant shared by every state probability.
    pub fn normalization(&self) -> f64 {
        self.g
    }
}

/// Mean time fractions over one stationary cycle, seven exhaustive buckets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Occupancy {
    /// IDLE, no resources held.
    pub idle: f64,
    /// PCH paging state.
    pub pch: f64,
    /// FACH with a call in progress.
    pub fach_active: f64,
    /// FACH held idle waiting for the inactivity timer (normal plus attack).
    pub fach_inactive: f64,
    /// DCH with a call in progress (high call, or low call while DCH held).
    pub dch_active: f64,
    /// DCH held idle waiting for the inactivity timer (normal plus attack).
    pub dch_inactive: f64,
    /// Time spent inside signalling procedures.
    pub signalling: f64,
}

impl Occupancy {
    /// Fraction of time user traffic is actually flowing.
    pub fn active(&self) -> f64 {
        self.fach_active + self.dch_active
    }

    /// Fraction of time a channel is held with no traffic, excluding
    /// signalling procedures.
    pub fn inactive_main(&self) -> f64 {
        self.fach_inactive + self.dch_inactive
    }

    /// Channel-held-idle time including the signalling overhead attribution.
    pub fn inactive_with_signalling(&self) -> f64 {
        self.inactive_main() + self.signalling
    }

    /// Sum of all seven buckets; one up to rounding.
    pub fn total(&self) -> f64 {
        self.idle
            + self.pch
            + self.fach_active
            + self.fach_inactive
            + self.dch_active
            + self.dch_inactive
            + self.signalling
    }

    /// The seven buckets with their CSV column labels, in fixed order.
    pub fn columns(&self) -> [(&'static str, f64); 7] {
        [
            ("idle", self.idle),
            ("pch", self.pch),
            ("fach_active", self.fach_active),
            ("fach_inactive", self.fach_inactive),
            ("dch_active", self.dch_active),
            ("dch_inactive", self.dch_inactive),
            ("signalling", self.signalling),
        ]
    }
}

/// Per-user signalling loads and time budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadReport {
    /// RNC signalling rate (messages/s).
    pub gamma_r: f64,
    /// SGSN signalling rate (messages/s).
    pub gamma_c: f64,
    pub occupancy: Occupancy,
}

/// Errors from the closed-form evaluation path.
#[derive(Debug, Error, PartialEq)]
pub enum AnalyticError {
    #[error("invalid parameters: {}", .0.join("; "))]
    InvalidParams(Vec<String>),
    #[error("{0} is infinite; the closed forms evaluate finite rates only")]
    InfiniteRate(&'static str),
    #[error(
        "closed form is singular at lambda_L = 0 with alpha_H > 0; \
         solve this regime through the numeric generator instead"
    )]
    UnsupportedRegime,
}

/// Evaluates the closed-form stationary distribution.
///
/// With PCH disabled the PCH-related terms are taken in their algebraic limit
/// (PCH mass zero, the IDLE factor losing its PCH release term) rather than by
/// substituting huge rates, so the disabled path is exact. Rejects the
/// `lambda_L = 0, alpha_H > 0` corner: two of the printed state formulas
/// divide by `lambda_L` there and the limit is not derivable from the closed
/// form alone.
pub fn stationary_distribution(
    p: &ModelParams,
    c: &SignallingCosts,
) -> Result<StationaryDistribution, AnalyticError> {
    let violations = validate_params(p, c);
    if !violations.is_empty() {
        return Err(AnalyticError::InvalidParams(violations));
    }
    if !p.alpha_l.is_finite() {
        return Err(AnalyticError::InfiniteRate("alpha_L"));
    }
    if !p.alpha_h.is_finite() {
        return Err(AnalyticError::InfiniteRate("alpha_H"));
    }
    if c.pch_enabled && !p.tau_p.is_finite() {
        return Err(AnalyticError::InfiniteRate("tau_P"));
    }
    if p.lambda_l == 0.0 && p.alpha_h > 0.0 {
        return Err(AnalyticError::UnsupportedRegime);
    }

    let d = derived_quantities(p);
    let (lh, lam) = (d.lambda_h_total, d.lambda_total);
    let (q_l, rho_l, q_h) = (d.q_l, d.rho_l, d.q_h);
    // q_L / lambda_L in a form that stays finite as lambda_L -> 0.
    let ql_over_laml = 1.0 / (p.lambda_h + p.mu_l);
    let weights = state_weights(p, c);
    let w = weights.as_array();
    let chi = p.lambda_h * (1.0 + q_l) + p.tau_h;

    let t1 = (1.0 + rho_l)
        * (q_h + (lh / p.tau_h) * ((1.0 + q_l) * (1.0 + q_h) + p.tau_h * c.sigma_inv_hl));
    let t2 = if c.pch_enabled {
        ((p.tau_l / (lam + p.tau_p)) * (p.tau_p * w[0] + lam * w[1]) + lam * w[2])
            / (lam + p.tau_l)
    } else {
        (p.tau_l * w[0] + lam * w[2]) / (lam + p.tau_l)
    };
    let t3 = rho_l * (w[3] + ql_over_laml * (1.0 + q_h) * p.alpha_h);
    let g = 1.0 / (t1 + t2 + t3);

    let mut pi = [0.0f64; 10];
    use MainState::*;
    if c.pch_enabled {
        pi[Idle.index()] = p.tau_p * p.tau_l / ((lam + p.tau_p) * (lam + p.tau_l)) * g;
        pi[Pch.index()] = lam * p.tau_l / ((lam + p.tau_p) * (lam + p.tau_l)) * g;
    } else {
        pi[Idle.index()] = p.tau_l / (lam + p.tau_l) * g;
        pi[Pch.index()] = 0.0;
    }
    pi[FachActive.index()] = rho_l * g;
    pi[DchActive.index()] = q_h
        * (rho_l * p.alpha_h * ql_over_laml + (1.0 + rho_l) * ((lh / p.tau_h) * (1.0 + q_l) + 1.0))
        * g;
    pi[DchTail.index()] = p.mu_h / chi * pi[DchActive.index()];
    pi[DchLowCall.index()] = q_l * pi[DchTail.index()];
    pi[FachTail.index()] = (p.mu_l * rho_l * g + p.mu_h * p.tau_h * pi[DchActive.index()] / chi)
        / (lh + p.lambda_l + p.tau_l);
    pi[DchTailAttack.index()] =
        p.alpha_h / chi * (1.0 + rho_l * p.mu_l * ql_over_laml) * g;
    pi[DchLowCallAttack.index()] = p.alpha_h * q_l / chi
        * (1.0 + (p.lambda_h + p.tau_h + p.lambda_l) / (lh + p.mu_l))
        * g;
    pi[FachTailAttack.index()] = (p.alpha_l * p.tau_l / (lam + p.tau_l)
        + p.alpha_h * p.tau_h * (1.0 + rho_l * p.mu_l * ql_over_laml) / chi)
        * g
        / (lh + p.lambda_l + p.tau_l);

    Ok(StationaryDistribution { pi, weights, g })
}

/// RNC signalling rate (messages/s): every promotion and demotion charged at
/// its radio-side message count.
pub fn radio_load(d: &StationaryDistribution, p: &ModelParams, c: &SignallingCosts) -> f64 {
    let dq = derived_quantities(p);
    let (ll, lh) = (dq.lambda_l_total, dq.lambda_h_total);
    use MainState::*;
    let fach_tails = d.pi(FachTail) + d.pi(FachTailAttack);
    let mut g = d.pi(Idle) * (lh * c.n_dh + ll * c.n_dl);
    g += d.pi(Pch) * (lh * c.n_ph + ll * c.n_pl);
    g += (fach_tails + d.pi(FachActive)) * lh * c.n_lh;
    g += (d.pi(DchTail) + d.pi(DchTailAttack)) * p.tau_h * c.n_hl;
    if c.pch_enabled {
        g += fach_tails * p.tau_l * c.n_lp + d.pi(Pch) * p.tau_p * c.n_pd;
    } else {
        g += fach_tails * p.tau_l * c.n_ld;
    }
    g
}

/// SGSN signalling rate (messages/s): only IDLE-adjacent procedures reach the
/// core network, so the sum has the IDLE-exit term plus one demotion term that
/// depends on the PCH mode.
pub fn core_load(d: &StationaryDistribution, p: &ModelParams, c: &SignallingCosts) -> f64 {
    let dq = derived_quantities(p);
    let (ll, lh) = (dq.lambda_l_total, dq.lambda_h_total);
    use MainState::*;
    let mut g = d.pi(Idle) * (lh * c.m_dh + ll * c.m_dl);
    if c.pch_enabled {
        g += d.pi(Pch) * p.tau_p * c.m_pd;
    } else {
        g += (d.pi(FachTail) + d.pi(FachTailAttack)) * p.tau_l * c.m_ld;
    }
    g
}

/// Splits the time budget into the seven occupancy buckets.
pub fn occupancy_fractions(d: &StationaryDistribution) -> Occupancy {
    use MainState::*;
    let signalling: f64 = MainState::ALL
        .iter()
        .map(|&s| (d.weights().weight(s) - 1.0) * d.pi(s))
        .sum();
    Occupancy {
        idle: d.pi(Idle),
        pch: d.pi(Pch),
        fach_active: d.pi(FachActive),
        fach_inactive: d.pi(FachTail) + d.pi(FachTailAttack),
        dch_active: d.pi(DchLowCall) + d.pi(DchLowCallAttack) + d.pi(DchActive),
        dch_inactive: d.pi(DchTail) + d.pi(DchTailAttack),
        signalling,
    }
}

/// Solves the closed form and assembles both loads plus the occupancy split.
pub fn load_report(p: &ModelParams, c: &SignallingCosts) -> Result<LoadReport, AnalyticError> {
    let d = stationary_distribution(p, c)?;
    Ok(LoadReport {
        gamma_r: radio_load(&d, p, c),
        gamma_c: core_load(&d, p, c),
        occupancy: occupancy_fractions(&d),
    })
}
