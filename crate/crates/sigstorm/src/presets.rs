//! Canned parameter sets for the four reference scenarios the CLI can
//! reproduce end to end (`fig2`..`fig5`), each bundling a full rate/cost
//! configuration with the sweep that generates its output table.

use crate::model::{ModelParams, SignallingCosts};
use crate::numeric::{linear_grid, log_grid};

/// What a preset sweeps and over which grid.
#[derive(Debug, Clone, PartialEq)]
pub enum PresetKind {
    /// Sweep the high-band burst rate over a log-spaced grid and report both
    /// network loads at each point (worst-case rate study).
    HighBurstLogSweep { lo: f64, hi: f64, points: usize },
    /// Grid over (low-band burst rate, high-band burst rate): a log-spaced
    /// low-band axis crossed with a short list of fixed high-band rates,
    /// reporting the core-network load surface.
    LowBurstGrid {
        lo: f64,
        hi: f64,
        points: usize,
        alpha_h_values: [f64; 5],
    },
    /// Sweep the high-band burst rate linearly and report the stationary
    /// occupancy split (active/inactive/signalling) used for detection.
    OccupancySweep { lo: f64, hi: f64, points: usize },
    /// Sweep the misbehaving-population fraction and report aggregate
    /// radio and core loads for a population of `n_users`.
    StormSweep {
        f_lo: f64,
        f_hi: f64,
        points: usize,
        n_users: u64,
    },
}

/// A named, self-contained scenario: baseline rates (bursts zeroed), costs,
/// and the sweep recipe.
#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub name: &'static str,
    pub params: ModelParams,
    pub costs: SignallingCosts,
    pub kind: PresetKind,
}

fn base_rates(
    lambda_l: f64,
    lambda_h: f64,
    mu_h: f64,
    tau_h: f64,
    tau_p: f64,
) -> ModelParams {
    ModelParams {
        lambda_l,
        lambda_h,
        mu_l: 1.0 / 5.0,
        mu_h,
        alpha_l: 0.0,
        alpha_h: 0.0,
        tau_l: 1.0 / 5.0,
        tau_h,
        tau_p,
    }
}

/// All presets, in `fig2`..`fig5` order.
pub fn all() -> Vec<FigurePreset> {
    vec![
        FigurePreset {
            name: "fig2",
            params: base_rates(
                1.0 / 600.0,
                1.0 / 1800.0,
                1.0 / 120.0,
                1.0 / 5.0,
                1.0 / 300.0,
            ),
            costs: SignallingCosts::default(),
            kind: PresetKind::HighBurstLogSweep {
                lo: 1e-4,
                hi: 1e2,
                points: 400,
            },
        },
        FigurePreset {
            name: "fig3",
            params: base_rates(
                1.0 / 300.0,
                1.0 / 600.0,
                1.0 / 180.0,
                1.0 / 5.0,
                1.0 / 300.0,
            ),
            costs: SignallingCosts::default(),
            kind: PresetKind::LowBurstGrid {
                lo: 1e-3,
                hi: 1.0,
                points: 61,
                alpha_h_values: [0.0, 0.005, 0.01, 0.02, 0.05],
            },
        },
        FigurePreset {
            name: "fig4",
            params: base_rates(
                1.0 / 600.0,
                1.0 / 1800.0,
                1.0 / 120.0,
                1.0 / 2.0,
                1.0 / 600.0,
            ),
            costs: SignallingCosts::default(),
            kind: PresetKind::OccupancySweep {
                lo: 0.0,
                hi: 1.0,
                points: 101,
            },
        },
        FigurePreset {
            name: "fig5",
            params: base_rates(
                1.0 / 600.0,
                1.0 / 600.0,
                1.0 / 180.0,
                1.0 / 5.0,
                1.0 / 600.0,
            ),
            costs: SignallingCosts::default(),
            kind: PresetKind::StormSweep {
                f_lo: 0.0,
                f_hi: 0.2,
                points: 41,
                n_users: 10_000,
            },
        },
    ]
}

/// Looks a preset up by name (`"fig2"`..`"fig5"`).
pub fn preset(name: &str) -> Option<FigurePreset> {
    all().into_iter().find(|p| p.name == name)
}

/// The grid points a preset's primary axis takes, in order.
pub fn sweep_axis(kind: &PresetKind) -> Vec<f64> {
    match *kind {
        PresetKind::HighBurstLogSweep { lo, hi, points }
        | PresetKind::LowBurstGrid { lo, hi, points, .. } => log_grid(lo, hi, points),
        PresetKind::OccupancySweep { lo, hi, points } => linear_grid(lo, hi, points),
        PresetKind::StormSweep {
            f_lo, f_hi, points, ..
        } => linear_grid(f_lo, f_hi, points),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::stationary_distribution;

    #[test]
    fn all_presets_are_valid_baselines() {
        let presets = all();
        assert_eq!(presets.len(), 4);
        for p in &presets {
            assert_eq!(p.params.alpha_l, 0.0);
            assert_eq!(p.params.alpha_h, 0.0);
            let sd = stationary_distribution(&p.params, &p.costs).unwrap();
            let total: f64 = sd
                .pi_array()
                .iter()
                .zip(sd.weights().as_array())
                .map(|(pi, w)| pi * w)
                .sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lookup_by_name_matches_listing() {
        for p in all() {
            assert_eq!(preset(p.name).unwrap(), p);
        }
        assert!(preset("fig9").is_none());
    }

    #[test]
    fn grids_hit_their_endpoints() {
        let g = log_grid(1e-4, 1e2, 400);
        assert_eq!(g.len(), 400);
        assert_eq!(g[0], 1e-4);
        assert_eq!(g[399], 1e2);
        assert!(g.windows(2).all(|w| w[1] > w[0]));

        let l = linear_grid(0.0, 1.0, 101);
        assert_eq!(l.len(), 101);
        assert_eq!(l[0], 0.0);
        assert_eq!(l[100], 1.0);
        // 61-point log decade grid lands on round powers of ten.
        let d = log_grid(1e-3, 1.0, 61);
        assert!((d[20] - 1e-2).abs() < 1e-12);
        assert!((d[40] - 1e-1).abs() < 1e-12);
    }

    #[test]
    fn low_burst_grid_argmax_sits_near_the_analytic_optimum() {
        // The fig3 grid exists to surface the worst-case low-band rate; its
        // argmax row must land on (~0.02, 0) at grid resolution.
        let p = preset("fig3").unwrap();
        let PresetKind::LowBurstGrid {
            lo,
            hi,
            points,
            alpha_h_values,
        } = p.kind
        else {
            panic!("fig3 must be a low-burst grid");
        };
        let axis = log_grid(lo, hi, points);
        let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
        for &ah in &alpha_h_values {
            for &al in &axis {
                let q = ModelParams {
                    alpha_l: al,
                    alpha_h: ah,
                    ..p.params
                };
                let g = crate::analytic::load_report(&q, &p.costs).unwrap().gamma_c;
                if g > best.0 {
                    best = (g, al, ah);
                }
            }
        }
        assert_eq!(best.2, 0.0);
        assert!((best.1 - 0.02).abs() / 0.02 < 0.05, "argmax {} off", best.1);
    }
}
