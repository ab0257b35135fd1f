//! Model structure: behavioural rates, per-transition signalling costs, and the
//! explicit transition table of the RRC state chain.
//!
//! A user cycles between the radio states IDLE, PCH, FACH and DCH. Calls promote
//! the user towards FACH (low bandwidth) or DCH (high bandwidth); inactivity
//! timers demote it back towards IDLE. Every promotion or demotion traverses a
//! signalling procedure with a mean delay and fixed message costs: `n` messages
//! handled by the radio network controller (RNC), of which `m` also reach the
//! core-network node (SGSN). Malicious or misbehaving traffic is modelled by two
//! extra burst rates that trigger the same promotions without carrying user
//! traffic, landing the chain in dedicated attack states.

use thiserror::Error;

/// The ten main (non-signalling) states of the reduced chain.
///
/// `FachTail` / `DchTail` hold a channel with no traffic flowing (waiting for an
/// inactivity timer); the `*Attack` variants are the same band occupancies when
/// the promotion was caused by a burst rather than a call. `DchLowCall` is a
/// low-bandwidth call served while the user still holds DCH.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MainState {
    /// IDLE: no radio resources held.
    Idle,
    /// PCH: paging state, reachable only by demotion from FACH.
    Pch,
    /// FACH held with no active call, waiting for the FACH inactivity timer.
    FachTail,
    /// FACH with a low-bandwidth call in progress.
    FachActive,
    /// DCH held with no active call, waiting for the DCH inactivity timer.
    DchTail,
    /// Low-bandwidth call served while DCH is still held.
    DchLowCall,
    /// DCH with a high-bandwidth call in progress.
    DchActive,
    /// FACH held because of a burst, no user traffic.
    FachTailAttack,
    /// DCH held because of a burst, no user traffic.
    DchTailAttack,
    /// Low-bandwidth call served while burst-acquired DCH is held.
    DchLowCallAttack,
}

impl MainState {
    /// All main states in canonical index order.
    pub const ALL: [MainState; 10] = [
        MainState::Idle,
        MainState::Pch,
        MainState::FachTail,
        MainState::FachActive,
        MainState::DchTail,
        MainState::DchLowCall,
        MainState::DchActive,
        MainState::FachTailAttack,
        MainState::DchTailAttack,
        MainState::DchLowCallAttack,
    ];

    /// Canonical index in `ALL`, used for dense vectors over the state space.
    pub fn index(self) -> usize {
        match self {
            MainState::Idle => 0,
            MainState::Pch => 1,
            MainState::FachTail => 2,
            MainState::FachActive => 3,
            MainState::DchTail => 4,
            MainState::DchLowCall => 5,
            MainState::DchActive => 6,
            MainState::FachTailAttack => 7,
            MainState::DchTailAttack => 8,
            MainState::DchLowCallAttack => 9,
        }
    }

    /// Stable lower-case label used in CSV output and config-facing text.
    pub fn label(self) -> &'static str {
        match self {
            MainState::Idle => "idle",
            MainState::Pch => "pch",
            MainState::FachTail => "fach_tail",
            MainState::FachActive => "fach_active",
            MainState::DchTail => "dch_tail",
            MainState::DchLowCall => "dch_low_call",
            MainState::DchActive => "dch_active",
            MainState::FachTailAttack => "fach_tail_attack",
            MainState::DchTailAttack => "dch_tail_attack",
            MainState::DchLowCallAttack => "dch_low_call_attack",
        }
    }

    /// True for the three states reachable only through burst-triggered promotions.
    pub fn is_attack(self) -> bool {
        matches!(
            self,
            MainState::FachTailAttack | MainState::DchTailAttack | MainState::DchLowCallAttack
        )
    }
}

/// Behavioural rates of one user, all in events per second.
///
/// `alpha_l` and `alpha_h` are the burst rates of misbehaving/attack traffic
/// towards the low- and high-bandwidth channel; either may be `f64::INFINITY`
/// as a symbolic limit, which every finite evaluation path rejects.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Rate of normally initiated low-bandwidth calls (1/s).
    pub lambda_l: f64,
    /// Rate of normally initiated high-bandwidth calls (1/s).
    pub lambda_h: f64,
    /// Termination rate of low-bandwidth calls (1/s).
    pub mu_l: f64,
    /// Termination rate of high-bandwidth calls (1/s).
    pub mu_h: f64,
    /// Burst rate towards the low-bandwidth channel (1/s); may be infinite.
    pub alpha_l: f64,
    /// Burst rate towards the high-bandwidth channel (1/s); may be infinite.
    pub alpha_h: f64,
    /// FACH inactivity timer rate (1/s).
    pub tau_l: f64,
    /// DCH inactivity timer rate (1/s).
    pub tau_h: f64,
    /// PCH release timer rate (1/s); only meaningful when PCH is enabled.
    pub tau_p: f64,
}

impl ModelParams {
    /// Copy of `self` with the two burst rates replaced.
    pub fn with_bursts(&self, alpha_l: f64, alpha_h: f64) -> ModelParams {
        ModelParams {
            alpha_l,
            alpha_h,
            ..*self
        }
    }
}

/// Per-transition signalling costs and delays, plus the PCH mode flag.
///
/// For each state transition `X -> Y` the triple is: `n_xy` messages absorbed by
/// the RNC, `m_xy` of those also reaching the SGSN, and `sigma_inv_xy`, the mean
/// signalling delay in seconds. The PCH release to IDLE is a composite procedure
/// that demotes through FACH: it is charged `n_pd`/`m_pd` once and traverses two
/// delay segments, `sigma_inv_pl` then `sigma_inv_ld_release`. When PCH is
/// disabled, FACH demotes directly to IDLE with the `*_ld` row instead.
#[derive(Debug, Clone, PartialEq)]
pub struct SignallingCosts {
    pub n_dl: f64,
    pub m_dl: f64,
    /// Mean IDLE -> FACH promotion delay (s).
    pub sigma_inv_dl: f64,
    pub n_pl: f64,
    pub m_pl: f64,
    /// Mean PCH -> FACH promotion delay (s).
    pub sigma_inv_pl: f64,
    pub n_dh: f64,
    pub m_dh: f64,
    /// Mean IDLE -> DCH promotion delay (s).
    pub sigma_inv_dh: f64,
    pub n_ph: f64,
    pub m_ph: f64,
    /// Mean PCH -> DCH promotion delay (s).
    pub sigma_inv_ph: f64,
    pub n_lh: f64,
    pub m_lh: f64,
    /// Mean FACH -> DCH promotion delay (s).
    pub sigma_inv_lh: f64,
    pub n_hl: f64,
    pub m_hl: f64,
    /// Mean DCH -> FACH demotion delay (s).
    pub sigma_inv_hl: f64,
    pub n_lp: f64,
    pub m_lp: f64,
    /// Mean FACH -> PCH demotion delay (s).
    pub sigma_inv_lp: f64,
    /// RNC messages of the composite PCH -> (FACH) -> IDLE release.
    pub n_pd: f64,
    /// SGSN messages of the composite PCH -> (FACH) -> IDLE release.
    pub m_pd: f64,
    /// Mean delay (s) of the second segment (FACH -> IDLE leg) of the composite
    /// PCH release; the first segment reuses `sigma_inv_pl`.
    pub sigma_inv_ld_release: f64,
    /// RNC messages of the direct FACH -> IDLE demotion (PCH disabled).
    pub n_ld: f64,
    /// SGSN messages of the direct FACH -> IDLE demotion (PCH disabled).
    pub m_ld: f64,
    /// Mean direct FACH -> IDLE demotion delay (s), used when PCH is disabled.
    pub sigma_inv_ld: f64,
    /// Selects the FACH demotion path: to PCH when true, directly to IDLE when false.
    pub pch_enabled: bool,
}

impl Default for SignallingCosts {
    /// Reference cost set of a UMTS network, PCH enabled.
    fn default() -> Self {
        SignallingCosts {
            n_dl: 15.0,
            m_dl: 5.0,
            sigma_inv_dl: 0.75,
            n_pl: 3.0,
            m_pl: 0.0,
            sigma_inv_pl: 0.15,
            n_dh: 20.0,
            m_dh: 5.0,
            sigma_inv_dh: 1.0,
            n_ph: 10.0,
            m_ph: 0.0,
            sigma_inv_ph: 0.5,
            n_lh: 7.0,
            m_lh: 0.0,
            sigma_inv_lh: 0.35,
            n_hl: 5.0,
            m_hl: 0.0,
            sigma_inv_hl: 0.25,
            n_lp: 2.0,
            m_lp: 0.0,
            sigma_inv_lp: 0.1,
            n_pd: 6.0,
            m_pd: 2.0,
            sigma_inv_ld_release: 0.15,
            n_ld: 6.0,
            m_ld: 2.0,
            sigma_inv_ld: 0.3,
            pch_enabled: true,
        }
    }
}

/// One edge of the reduced chain.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub from: MainState,
    /// Firing rate (1/s).
    pub rate: f64,
    pub to: MainState,
    /// Mean delays (s) of the signalling segments traversed, in order; empty
    /// means the move is instantaneous and carries no signalling cost.
    pub segments: Vec<f64>,
    /// RNC messages charged when the transition fires.
    pub n_cost: f64,
    /// SGSN messages charged when the transition fires.
    pub m_cost: f64,
}

/// Explicit edge list of the reduced chain for one parameter/cost set.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionTable {
    pub edges: Vec<Transition>,
    pub pch_enabled: bool,
}

impl TransitionTable {
    /// Total exit rate of a main state (sum of its outgoing edge rates).
    pub fn exit_rate(&self, s: MainState) -> f64 {
        self.edges
            .iter()
            .filter(|e| e.from == s)
            .map(|e| e.rate)
            .sum()
    }

    /// Outgoing edges of a main state.
    pub fn edges_from(&self, s: MainState) -> impl Iterator<Item = &Transition> {
        self.edges.iter().filter(move |e| e.from == s)
    }

    /// Total number of signalling segments across all edges.
    pub fn segment_count(&self) -> usize {
        self.edges.iter().map(|e| e.segments.len()).sum()
    }
}

/// Errors from table construction and cost projection.
#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("invalid parameters: {}", .0.join("; "))]
    InvalidParams(Vec<String>),
    #[error("{0} is infinite; finite evaluation paths reject symbolic-infinite rates")]
    InfiniteRate(&'static str),
    #[error("PCH is already disabled in this cost set")]
    AlreadyDisabled,
}

fn check_nonneg_finite(v: f64, name: &str, out: &mut Vec<String>) {
    if !(v >= 0.0) || !v.is_finite() {
        out.push(format!("{name} must be >= 0 and finite"));
    }
}

fn check_positive(v: f64, name: &str, out: &mut Vec<String>) {
    if !(v > 0.0) {
        out.push(format!("{name} must be > 0"));
    } else if !v.is_finite() {
        out.push(format!("{name} must be finite"));
    }
}

fn check_delay(v: f64, name: &str, out: &mut Vec<String>) {
    if !(v > 0.0) || !v.is_finite() {
        out.push(format!("{name} must be > 0 and finite"));
    }
}

/// Checks every structural invariant of a parameter/cost pair and returns the
/// list of violations, empty iff the pair is valid. Burst rates may be
/// `f64::INFINITY` (symbolic limits); everything else must be finite.
pub fn validate_params(p: &ModelParams, c: &SignallingCosts) -> Vec<String> {
    let mut v = Vec::new();

    check_nonneg_finite(p.lambda_l, "lambda_L", &mut v);
    check_nonneg_finite(p.lambda_h, "lambda_H", &mut v);
    check_positive(p.mu_l, "mu_L", &mut v);
    check_positive(p.mu_h, "mu_H", &mut v);
    check_positive(p.tau_l, "tau_L", &mut v);
    check_positive(p.tau_h, "tau_H", &mut v);
    if !(p.alpha_l >= 0.0) {
        v.push("alpha_L must be >= 0".to_string());
    }
    if !(p.alpha_h >= 0.0) {
        v.push("alpha_H must be >= 0".to_string());
    }
    if c.pch_enabled && !(p.tau_p > 0.0) {
        v.push("tau_P must be > 0 when PCH is enabled".to_string());
    }

    let rows: [(&str, f64, f64); 9] = [
        ("D->L", c.n_dl, c.m_dl),
        ("P->L", c.n_pl, c.m_pl),
        ("D->H", c.n_dh, c.m_dh),
        ("P->H", c.n_ph, c.m_ph),
        ("L->H", c.n_lh, c.m_lh),
        ("H->L", c.n_hl, c.m_hl),
        ("L->P", c.n_lp, c.m_lp),
        ("P->D", c.n_pd, c.m_pd),
        ("L->D", c.n_ld, c.m_ld),
    ];
    for (label, n, m) in rows {
        if !n.is_finite() || !(n >= 0.0) {
            v.push(format!("n cost must be >= 0 and finite for {label}"));
        }
        if !m.is_finite() || !(m >= 0.0) {
            v.push(format!("m cost must be >= 0 and finite for {label}"));
        }
        if n.is_finite() && m.is_finite() && m > n {
            v.push(format!("m_XY <= n_XY violated for {label}"));
        }
    }
    // SGSN traffic exists only on transitions adjacent to IDLE; a nonzero core
    // cost anywhere else would make the load formulas and the brute-force
    // message count disagree.
    let core_free: [(&str, f64); 5] = [
        ("m_PL", c.m_pl),
        ("m_PH", c.m_ph),
        ("m_LH", c.m_lh),
        ("m_HL", c.m_hl),
        ("m_LP", c.m_lp),
    ];
    for (name, m) in core_free {
        if m != 0.0 {
            v.push(format!(
                "{name} must be 0 (core-network messages occur only on IDLE-adjacent transitions)"
            ));
        }
    }

    check_delay(c.sigma_inv_dl, "sigma_inv_DL", &mut v);
    check_delay(c.sigma_inv_pl, "sigma_inv_PL", &mut v);
    check_delay(c.sigma_inv_dh, "sigma_inv_DH", &mut v);
    check_delay(c.sigma_inv_ph, "sigma_inv_PH", &mut v);
    check_delay(c.sigma_inv_lh, "sigma_inv_LH", &mut v);
    check_delay(c.sigma_inv_hl, "sigma_inv_HL", &mut v);
    check_delay(c.sigma_inv_lp, "sigma_inv_LP", &mut v);
    check_delay(c.sigma_inv_ld_release, "sigma_inv_LD_release", &mut v);
    check_delay(c.sigma_inv_ld, "sigma_inv_LD", &mut v);

    v
}

/// Materializes the reduced chain for one parameter/cost set.
///
/// Edges with rate zero are omitted, so with both burst rates at zero the
/// attack states have no incoming edges from the normal states and are
/// unreachable. Rejects symbolic-infinite burst rates (and an infinite PCH
/// timer when PCH is enabled): an infinite rate has no finite generator.
pub fn build_transition_table(
    p: &ModelParams,
    c: &SignallingCosts,
) -> Result<TransitionTable, ModelError> {
    let violations = validate_params(p, c);
    if !violations.is_empty() {
        return Err(ModelError::InvalidParams(violations));
    }
    if !p.alpha_l.is_finite() {
        return Err(ModelError::InfiniteRate("alpha_L"));
    }
    if !p.alpha_h.is_finite() {
        return Err(ModelError::InfiniteRate("alpha_H"));
    }
    if c.pch_enabled && !p.tau_p.is_finite() {
        return Err(ModelError::InfiniteRate("tau_P"));
    }

    use MainState::*;
    let mut edges: Vec<Transition> = Vec::with_capacity(26);
    let mut add = |from: MainState, rate: f64, to: MainState, segments: Vec<f64>, n: f64, m: f64| {
        if rate > 0.0 {
            edges.push(Transition {
                from,
                rate,
                to,
                segments,
                n_cost: n,
                m_cost: m,
            });
        }
    };

    add(Idle, p.lambda_l, FachActive, vec![c.sigma_inv_dl], c.n_dl, c.m_dl);
    add(Idle, p.alpha_l, FachTailAttack, vec![c.sigma_inv_dl], c.n_dl, c.m_dl);
    add(Idle, p.lambda_h, DchActive, vec![c.sigma_inv_dh], c.n_dh, c.m_dh);
    add(Idle, p.alpha_h, DchTailAttack, vec![c.sigma_inv_dh], c.n_dh, c.m_dh);

    if c.pch_enabled {
        add(Pch, p.lambda_l, FachActive, vec![c.sigma_inv_pl], c.n_pl, c.m_pl);
        add(Pch, p.alpha_l, FachTailAttack, vec![c.sigma_inv_pl], c.n_pl, c.m_pl);
        add(Pch, p.lambda_h, DchActive, vec![c.sigma_inv_ph], c.n_ph, c.m_ph);
        add(Pch, p.alpha_h, DchTailAttack, vec![c.sigma_inv_ph], c.n_ph, c.m_ph);
        add(
            Pch,
            p.tau_p,
            Idle,
            vec![c.sigma_inv_pl, c.sigma_inv_ld_release],
            c.n_pd,
            c.m_pd,
        );
    }

    for src in [FachTail, FachTailAttack] {
        add(src, p.lambda_l, FachActive, vec![], 0.0, 0.0);
        add(src, p.lambda_h, DchActive, vec![c.sigma_inv_lh], c.n_lh, c.m_lh);
        add(src, p.alpha_h, DchTailAttack, vec![c.sigma_inv_lh], c.n_lh, c.m_lh);
        if c.pch_enabled {
            add(src, p.tau_l, Pch, vec![c.sigma_inv_lp], c.n_lp, c.m_lp);
        } else {
            add(src, p.tau_l, Idle, vec![c.sigma_inv_ld], c.n_ld, c.m_ld);
        }
    }

    add(FachActive, p.lambda_h, DchActive, vec![c.sigma_inv_lh], c.n_lh, c.m_lh);
    add(
        FachActive,
        p.alpha_h,
        DchLowCallAttack,
        vec![c.sigma_inv_lh],
        c.n_lh,
        c.m_lh,
    );
    add(FachActive, p.mu_l, FachTail, vec![], 0.0, 0.0);

    add(DchTail, p.lambda_l, DchLowCall, vec![], 0.0, 0.0);
    add(DchTail, p.lambda_h, DchActive, vec![], 0.0, 0.0);
    add(DchTail, p.tau_h, FachTail, vec![c.sigma_inv_hl], c.n_hl, c.m_hl);

    add(DchTailAttack, p.lambda_l, DchLowCallAttack, vec![], 0.0, 0.0);
    add(DchTailAttack, p.lambda_h, DchActive, vec![], 0.0, 0.0);
    add(
        DchTailAttack,
        p.tau_h,
        FachTailAttack,
        vec![c.sigma_inv_hl],
        c.n_hl,
        c.m_hl,
    );

    add(DchLowCall, p.lambda_h, DchActive, vec![], 0.0, 0.0);
    add(DchLowCall, p.mu_l, DchTail, vec![], 0.0, 0.0);
    add(DchLowCallAttack, p.lambda_h, DchActive, vec![], 0.0, 0.0);
    add(DchLowCallAttack, p.mu_l, DchTailAttack, vec![], 0.0, 0.0);

    add(DchActive, p.mu_h, DchTail, vec![], 0.0, 0.0);

    Ok(TransitionTable {
        edges,
        pch_enabled: c.pch_enabled,
    })
}

/// Switches a cost set to the PCH-disabled demotion path.
///
/// The direct FACH -> IDLE demotion costs (`n_ld`, `m_ld`, `sigma_inv_ld`) are
/// carried from the input unchanged, so configured overrides survive the
/// projection. Errors if the input is already PCH-disabled.
pub fn pch_disabled_projection(c: &SignallingCosts) -> Result<SignallingCosts, ModelError> {
    if !c.pch_enabled {
        return Err(ModelError::AlreadyDisabled);
    }
    Ok(SignallingCosts {
        pch_enabled: false,
        ..c.clone()
    })
}
