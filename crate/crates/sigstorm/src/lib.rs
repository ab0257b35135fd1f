//! Continuous-time Markov model of a cellular data user's radio-resource
//! states, built to quantify control-plane signalling load.
//!
//! A user moves between IDLE, a paging state (PCH), a shared low-speed channel
//! (FACH) and a dedicated high-speed channel (DCH), driven by call arrivals,
//! call completions and inactivity timers; every state change costs the radio
//! network controller (RNC) and sometimes the core network (SGSN) a burst of
//! signalling messages and a delay. The crate provides:
//!
//! - [`model`]: parameter/cost types and the explicit transition table,
//!   including per-transition signalling delays and message counts.
//! - [`analytic`]: the closed-form stationary distribution, per-user RNC and
//!   SGSN message rates, and the occupancy time budget.
//! - [`oracle`]: an independent numeric path — expand signalling delays into
//!   extra states, solve the full generator by elimination — used to validate
//!   the closed forms.
//! - [`optimizer`]: closed-form worst-case burst rates: the burst parameters a
//!   misbehaving application would pick to maximize RNC or SGSN load.
//! - [`sim`]: a seeded discrete-event simulation of the same chain.
//! - [`storm`]: population-level load when a fraction of users misbehave, and
//!   the state-occupancy fingerprint that distinguishes them.
//! - [`config`]: the INI-style parameter file format used by the CLI.
//! - [`presets`]: canonical parameter sets and sweep layouts.

pub mod analytic;
pub mod config;
pub mod model;
pub mod numeric;
pub mod optimizer;
pub mod oracle;
pub mod presets;
pub mod sim;
pub mod storm;

pub use analytic::{
    core_load, load_report, occupancy_fractions, radio_load, stationary_distribution,
    AnalyticError, LoadReport, Occupancy, StationaryDistribution,
};
pub use model::{
    build_transition_table, pch_disabled_projection, validate_params, MainState, ModelError,
    ModelParams, SignallingCosts, Transition, TransitionTable,
};
pub use optimizer::{
    core_alpha_h_hat, core_optimal_alpha_l, radio_limit_load, radio_optimal_bursts, BurstPolicy,
    OptimizerResult, ThetaQuantities,
};
pub use oracle::{
    argmax_scan, build_full_generator, message_rate_oracle, reduce_full_distribution,
    solve_stationary, GeneratorMatrix, OracleError, ReducedDistribution,
};
pub use sim::{simulate, SimError, SimulationStats};
pub use storm::{detection_metrics, population_load, DetectionMetrics, StormScenario};
