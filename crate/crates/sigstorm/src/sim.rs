//! Seeded discrete-event Monte Carlo simulation of the chain.
//!
//! The simulator plays the transition table literally, with no recourse to the
//! closed forms: in each main state it draws one exponential sojourn per
//! outgoing edge and lets the shortest win; a firing edge charges its message
//! costs and walks its signalling segments as explicit exponentially-timed
//! states. It therefore estimates the same stationary occupancies and message
//! rates as the analytic and oracle paths while sharing no algebra with them.
//!
//! Reproducibility: each replication's generator is a ChaCha stream keyed by
//! `SHA-256(seed || replication_index)`, so results are bit-identical across
//! runs, platforms, and thread counts. Replications run in parallel and are
//! merged in index order.

use crate::model::{MainState, TransitionTable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Errors from simulation and confidence summarization.
#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("horizon must be > 0 and finite, got {0}")]
    InvalidHorizon(f64),
    #[error("at least one replication is required")]
    NoReplications,
    #[error("confidence intervals require at least 2 replications, got {0}")]
    TooFewReplications(usize),
}

/// Raw tallies of one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct RepStats {
    /// Seconds spent in each main state, by canonical index.
    pub time_in_state: [f64; 10],
    /// Seconds spent inside signalling segments.
    pub signalling_time: f64,
    /// RNC messages charged.
    pub n_messages: f64,
    /// SGSN messages charged.
    pub m_messages: f64,
}

impl RepStats {
    /// Total accounted time; equals the horizon up to rounding.
    pub fn total_time(&self) -> f64 {
        self.time_in_state.iter().sum::<f64>() + self.signalling_time
    }

    /// The seven occupancy fractions, in the canonical column order
    /// (idle, pch, fach_active, fach_inactive, dch_active, dch_inactive,
    /// signalling).
    pub fn occupancy_fractions(&self, horizon: f64) -> [f64; 7] {
        let t = &self.time_in_state;
        use MainState::*;
        [
            t[Idle.index()] / horizon,
            t[Pch.index()] / horizon,
            t[FachActive.index()] / horizon,
            (t[FachTail.index()] + t[FachTailAttack.index()]) / horizon,
            (t[DchLowCall.index()] + t[DchLowCallAttack.index()] + t[DchActive.index()])
                / horizon,
            (t[DchTail.index()] + t[DchTailAttack.index()]) / horizon,
            self.signalling_time / horizon,
        ]
    }
}

/// Mean and across-replication standard error of one estimated quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricEstimate {
    pub mean: f64,
    /// Standard error of the mean (0 for a single replication).
    pub stderr: f64,
}

/// Column labels of the seven occupancy fractions, in estimate order.
pub const OCCUPANCY_LABELS: [&str; 7] = [
    "idle",
    "pch",
    "fach_active",
    "fach_inactive",
    "dch_active",
    "dch_inactive",
    "signalling",
];

/// Aggregated simulation output: raw tallies plus per-metric estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationStats {
    /// Per-replication simulated time (seconds).
    pub horizon: f64,
    pub replications: usize,
    /// Per-replication tallies, in replication order.
    pub reps: Vec<RepStats>,
    /// Seconds per main state, summed over replications.
    pub time_in_state: [f64; 10],
    /// Seconds in signalling segments, summed over replications.
    pub signalling_time: f64,
    /// Total RNC messages over all replications.
    pub n_messages: f64,
    /// Total SGSN messages over all replications.
    pub m_messages: f64,
    /// RNC message rate (messages/s).
    pub gamma_r: MetricEstimate,
    /// SGSN message rate (messages/s).
    pub gamma_c: MetricEstimate,
    /// The seven occupancy fractions, ordered as [`OCCUPANCY_LABELS`].
    pub occupancy: [MetricEstimate; 7],
}

fn estimate(samples: &[f64]) -> MetricEstimate {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return MetricEstimate { mean, stderr: 0.0 };
    }
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    MetricEstimate {
        mean,
        stderr: (var / n).sqrt(),
    }
}

impl SimulationStats {
    /// Aggregates per-replication tallies into estimates. Exposed so callers
    /// can assemble statistics from replications they produced or duplicated
    /// themselves (e.g. to verify that identical replications give zero
    /// standard error).
    pub fn from_replications(horizon: f64, reps: Vec<RepStats>) -> Result<SimulationStats, SimError> {
        if !(horizon > 0.0) || !horizon.is_finite() {
            return Err(SimError::InvalidHorizon(horizon));
        }
        if reps.is_empty() {
            return Err(SimError::NoReplications);
        }
        let mut time_in_state = [0.0f64; 10];
        let mut signalling_time = 0.0;
        let mut n_messages = 0.0;
        let mut m_messages = 0.0;
        for r in &reps {
            for (acc, t) in time_in_state.iter_mut().zip(r.time_in_state.iter()) {
                *acc += t;
            }
            signalling_time += r.signalling_time;
            n_messages += r.n_messages;
            m_messages += r.m_messages;
        }
        let gamma_r = estimate(&reps.iter().map(|r| r.n_messages / horizon).collect::<Vec<_>>());
        let gamma_c = estimate(&reps.iter().map(|r| r.m_messages / horizon).collect::<Vec<_>>());
        let occ_samples: Vec<[f64; 7]> =
            reps.iter().map(|r| r.occupancy_fractions(horizon)).collect();
        let occupancy: [MetricEstimate; 7] = std::array::from_fn(|i| {
            estimate(&occ_samples.iter().map(|o| o[i]).collect::<Vec<_>>())
        });
        Ok(SimulationStats {
            horizon,
            replications: reps.len(),
            reps,
            time_in_state,
            signalling_time,
            n_messages,
            m_messages,
            gamma_r,
            gamma_c,
            occupancy,
        })
    }
}

/// One row of a confidence summary.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfidenceRow {
    pub metric: String,
    pub mean: f64,
    pub stderr: f64,
    /// Half-width of a 95% normal confidence interval (1.96 standard errors)
    /// divided by |mean|; infinite when the mean is zero but the spread is not.
    pub rel_half_width: f64,
    /// Set when the relative half-width exceeds 5%.
    pub flagged: bool,
}

/// Derives the ChaCha key of one replication from the run seed.
fn replication_rng(seed: u64, rep: u64) -> ChaCha12Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(rep.to_le_bytes());
    let digest = hasher.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha12Rng::from_seed(key)
}

fn draw_exponential(rng: &mut ChaCha12Rng, rate: f64) -> f64 {
    let u: f64 = rng.gen();
    -(1.0 - u).ln() / rate
}

/// Flattened outgoing edge, resolved to dense indices for the hot loop.
struct EdgeView<'a> {
    rate: f64,
    to: usize,
    segments: &'a [f64],
    n_cost: f64,
    m_cost: f64,
}

fn run_replication(per_state: &[Vec<EdgeView>; 10], horizon: f64, mut rng: ChaCha12Rng) -> RepStats {
    let mut stats = RepStats {
        time_in_state: [0.0; 10],
        signalling_time: 0.0,
        n_messages: 0.0,
        m_messages: 0.0,
    };
    let mut state = MainState::Idle.index();
    let mut t = 0.0f64;
    'run: while t < horizon {
        let edges = &per_state[state];
        if edges.is_empty() {
            // Absorbing state: the rest of the horizon is spent here.
            stats.time_in_state[state] += horizon - t;
            break;
        }
        // Competing exponentials: every outgoing edge draws, shortest wins.
        let mut winner = 0usize;
        let mut sojourn = f64::INFINITY;
        for (i, e) in edges.iter().enumerate() {
            let dt = draw_exponential(&mut rng, e.rate);
            if dt < sojourn {
                sojourn = dt;
                winner = i;
            }
        }
        if t + sojourn >= horizon {
            stats.time_in_state[state] += horizon - t;
            break;
        }
        stats.time_in_state[state] += sojourn;
        t += sojourn;
        let edge = &edges[winner];
        // Messages are exchanged when the procedure starts.
        stats.n_messages += edge.n_cost;
        stats.m_messages += edge.m_cost;
        for &mean_delay in edge.segments {
            let dt = draw_exponential(&mut rng, 1.0 / mean_delay);
            if t + dt >= horizon {
                stats.signalling_time += horizon - t;
                break 'run;
            }
            stats.signalling_time += dt;
            t += dt;
        }
        state = edge.to;
    }
    stats
}

/// Simulates the chain for `replications` independent runs of `horizon`
/// seconds each, starting from IDLE, and aggregates the tallies.
///
/// Identical `(table, seed, horizon, replications)` give bit-identical
/// results regardless of thread count, because each replication's randomness
/// is keyed only by `(seed, replication_index)` and the merge is ordered.
pub fn simulate(
    table: &TransitionTable,
    seed: u64,
    horizon: f64,
    replications: usize,
) -> Result<SimulationStats, SimError> {
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(SimError::InvalidHorizon(horizon));
    }
    if replications == 0 {
        return Err(SimError::NoReplications);
    }
    let per_state: [Vec<EdgeView>; 10] = std::array::from_fn(|i| {
        table
            .edges
            .iter()
            .filter(|e| e.from.index() == i)
            .map(|e| EdgeView {
                rate: e.rate,
                to: e.to.index(),
                segments: &e.segments,
                n_cost: e.n_cost,
                m_cost: e.m_cost,
            })
            .collect()
    });
    let reps: Vec<RepStats> = (0..replications as u64)
        .into_par_iter()
        .map(|rep| run_replication(&per_state, horizon, replication_rng(seed, rep)))
        .collect();
    SimulationStats::from_replications(horizon, reps)
}

/// Summarizes each estimated metric (the two message rates and the seven
/// occupancy fractions) with its across-replication mean, standard error,
/// and relative 95% half-width, flagging metrics wider than 5% relative.
pub fn confidence(stats: &SimulationStats) -> Result<Vec<ConfidenceRow>, SimError> {
    if stats.replications < 2 {
        return Err(SimError::TooFewReplications(stats.replications));
    }
    let mut rows = Vec::with_capacity(9);
    let mut push = |metric: String, est: &MetricEstimate| {
        let half = 1.96 * est.stderr;
        let rel_half_width = if half == 0.0 {
            0.0
        } else if est.mean != 0.0 {
            half / est.mean.abs()
        } else {
            f64::INFINITY
        };
        rows.push(ConfidenceRow {
            metric,
            mean: est.mean,
            stderr: est.stderr,
            rel_half_width,
            flagged: rel_half_width > 0.05,
        });
    };
    push("gamma_r".to_string(), &stats.gamma_r);
    push("gamma_c".to_string(), &stats.gamma_c);
    for (label, est) in OCCUPANCY_LABELS.iter().zip(stats.occupancy.iter()) {
        push(format!("occupancy_{label}"), est);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::{core_load, radio_load, stationary_distribution};
    use crate::model::{build_transition_table, ModelParams, SignallingCosts, Transition};

    fn two_state_toy() -> TransitionTable {
        // A (Idle) -> B at rate 1, B (Pch) -> A at rate 3; stationary
        // occupancy of A is 3/4.
        TransitionTable {
            edges: vec![
                Transition {
                    from: MainState::Idle,
                    rate: 1.0,
                    to: MainState::Pch,
                    segments: vec![],
                    n_cost: 2.0,
                    m_cost: 1.0,
                },
                Transition {
                    from: MainState::Pch,
                    rate: 3.0,
                    to: MainState::Idle,
                    segments: vec![],
                    n_cost: 0.0,
                    m_cost: 0.0,
                },
            ],
            pch_enabled: true,
        }
    }

    fn fig_params(alpha_h: f64) -> ModelParams {
        ModelParams {
            lambda_l: 1.0 / 600.0,
            lambda_h: 1.0 / 1800.0,
            mu_l: 0.2,
            mu_h: 1.0 / 120.0,
            alpha_l: 0.0,
            alpha_h,
            tau_l: 0.2,
            tau_h: 0.2,
            tau_p: 1.0 / 300.0,
        }
    }

    #[test]
    fn two_state_occupancy_within_three_standard_errors() {
        let stats = simulate(&two_state_toy(), 7, 1e6, 10).unwrap();
        let est = stats.occupancy[0]; // "idle" bucket holds state A
        assert!(est.stderr > 0.0);
        assert!(
            (est.mean - 0.75).abs() <= 3.0 * est.stderr,
            "mean {} stderr {}",
            est.mean,
            est.stderr
        );
        let rows = confidence(&stats).unwrap();
        let idle = rows.iter().find(|r| r.metric == "occupancy_idle").unwrap();
        assert!((idle.mean - 0.75).abs() <= 3.0 * idle.stderr);
    }

    #[test]
    fn replication_time_budget_adds_up_to_the_horizon() {
        let horizon = 1e5;
        let stats = simulate(&two_state_toy(), 3, horizon, 4).unwrap();
        for rep in &stats.reps {
            assert!(
                (rep.total_time() - horizon).abs() < 1e-6 * horizon,
                "total {}",
                rep.total_time()
            );
        }
    }

    #[test]
    fn identical_seeds_give_bit_identical_results() {
        let table = build_transition_table(&fig_params(0.01), &SignallingCosts::default()).unwrap();
        let a = simulate(&table, 42, 1e5, 4).unwrap();
        let b = simulate(&table, 42, 1e5, 4).unwrap();
        assert_eq!(a, b);
        let c = simulate(&table, 43, 1e5, 4).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn zero_cost_table_counts_no_messages() {
        let mut table = two_state_toy();
        for e in &mut table.edges {
            e.n_cost = 0.0;
            e.m_cost = 0.0;
        }
        let stats = simulate(&table, 11, 1e4, 2).unwrap();
        assert_eq!(stats.n_messages, 0.0);
        assert_eq!(stats.m_messages, 0.0);
        assert_eq!(stats.gamma_r.mean, 0.0);
    }

    #[test]
    fn cloned_replications_have_zero_standard_error() {
        let table = two_state_toy();
        let one = simulate(&table, 5, 1e4, 1).unwrap();
        let rep = one.reps[0].clone();
        let stats =
            SimulationStats::from_replications(1e4, vec![rep.clone(), rep.clone(), rep]).unwrap();
        let rows = confidence(&stats).unwrap();
        for row in rows {
            // The sample mean of three bit-identical values can round one
            // ulp away from them, so allow dispersion at machine precision.
            assert!(
                row.stderr <= row.mean.abs() * 1e-12,
                "metric {} stderr {}",
                row.metric,
                row.stderr
            );
            assert!(!row.flagged);
        }
    }

    #[test]
    fn message_rates_match_analytic_values_within_three_standard_errors() {
        let p = fig_params(0.01);
        let c = SignallingCosts::default();
        let table = build_transition_table(&p, &c).unwrap();
        let stats = simulate(&table, 1234, 1e7, 10).unwrap();
        let d = stationary_distribution(&p, &c).unwrap();
        let gr = radio_load(&d, &p, &c);
        let gc = core_load(&d, &p, &c);
        assert!(
            (stats.gamma_r.mean - gr).abs() <= 3.0 * stats.gamma_r.stderr,
            "gamma_r sim {} +/- {} vs analytic {gr}",
            stats.gamma_r.mean,
            stats.gamma_r.stderr
        );
        assert!(
            (stats.gamma_c.mean - gc).abs() <= 3.0 * stats.gamma_c.stderr,
            "gamma_c sim {} +/- {} vs analytic {gc}",
            stats.gamma_c.mean,
            stats.gamma_c.stderr
        );
    }

    #[test]
    fn past_optimum_burst_rate_lowers_simulated_core_load() {
        // The core load curve rises to an interior optimum near 0.02/s and
        // falls past it; the simulator must see the drop at 0.2/s.
        let p_opt = ModelParams {
            lambda_l: 1.0 / 300.0,
            lambda_h: 1.0 / 600.0,
            mu_l: 0.2,
            mu_h: 1.0 / 180.0,
            alpha_l: 0.02,
            alpha_h: 0.0,
            tau_l: 0.2,
            tau_h: 0.2,
            tau_p: 1.0 / 300.0,
        };
        let p_past = ModelParams {
            alpha_l: 0.2,
            ..p_opt
        };
        let c = SignallingCosts::default();
        let at = simulate(&build_transition_table(&p_opt, &c).unwrap(), 9, 1e6, 6).unwrap();
        let past = simulate(&build_transition_table(&p_past, &c).unwrap(), 9, 1e6, 6).unwrap();
        assert!(
            past.gamma_c.mean < at.gamma_c.mean,
            "past-optimum {} vs optimum {}",
            past.gamma_c.mean,
            at.gamma_c.mean
        );
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let table = two_state_toy();
        assert_eq!(
            simulate(&table, 1, 0.0, 1).unwrap_err(),
            SimError::InvalidHorizon(0.0)
        );
        assert_eq!(
            simulate(&table, 1, 1e3, 0).unwrap_err(),
            SimError::NoReplications
        );
        let one = simulate(&table, 1, 1e3, 1).unwrap();
        assert_eq!(
            confidence(&one).unwrap_err(),
            SimError::TooFewReplications(1)
        );
    }

    #[test]
    fn occupancy_fractions_match_analytic_within_three_standard_errors() {
        let p = fig_params(0.016);
        let c = SignallingCosts::default();
        let table = build_transition_table(&p, &c).unwrap();
        let stats = simulate(&table, 77, 1e7, 10).unwrap();
        let d = stationary_distribution(&p, &c).unwrap();
        let occ = crate::analytic::occupancy_fractions(&d);
        let truth = [
            occ.idle,
            occ.pch,
            occ.fach_active,
            occ.fach_inactive,
            occ.dch_active,
            occ.dch_inactive,
            occ.signalling,
        ];
        let mut misses = 0;
        for (i, (est, t)) in stats.occupancy.iter().zip(truth.iter()).enumerate() {
            if (est.mean - t).abs() > 3.0 * est.stderr {
                misses += 1;
                eprintln!(
                    "occupancy {} missed: sim {} +/- {} vs analytic {}",
                    OCCUPANCY_LABELS[i], est.mean, est.stderr, t
                );
            }
        }
        assert!(misses <= 1, "{misses} of 7 occupancy fractions missed 3 SE");
    }
}
