//! Resolution of command-line flags into a validated run plan.

use crate::CliError;
use sigstorm::config::parse_config;
use sigstorm::model::{ModelParams, SignallingCosts};
use sigstorm::presets::{preset, FigurePreset};
use std::path::PathBuf;

/// Rate parameters addressable by `--sweep`.
pub const RATE_PARAMS: [&str; 9] = [
    "lambda_l", "lambda_h", "mu_l", "mu_h", "alpha_l", "alpha_h", "tau_l", "tau_h", "tau_p",
];

/// One sweep axis: a parameter name and its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub param: String,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    pub log: bool,
}

impl SweepAxis {
    /// The grid values, in order.
    pub fn grid(&self) -> Vec<f64> {
        if self.log {
            sigstorm::numeric::log_grid(self.lo, self.hi, self.points)
        } else {
            sigstorm::numeric::linear_grid(self.lo, self.hi, self.points)
        }
    }
}

/// Fully resolved run plan shared by every subcommand.
pub struct RunSpec {
    pub params: ModelParams,
    pub costs: SignallingCosts,
    /// Present when the parameters came from a named preset.
    pub preset: Option<FigurePreset>,
    /// Explicit `--sweep` axis, if any.
    pub axis: Option<SweepAxis>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub replications: usize,
    pub horizon: f64,
    pub users: u64,
}

/// Parses `PARAM=lo:hi:points[:log]`. `extra_params` lists axis names valid
/// beyond the nine rates (the storm subcommand accepts `fraction`).
pub fn parse_sweep(spec: &str, extra_params: &[&str]) -> Result<SweepAxis, CliError> {
    let bad = |msg: String| CliError::Config(vec![format!("--sweep {spec}: {msg}")]);
    let Some((param, rest)) = spec.split_once('=') else {
        return Err(bad("expected PARAM=lo:hi:points[:log]".to_string()));
    };
    let param = param.trim().to_ascii_lowercase();
    if !RATE_PARAMS.contains(&param.as_str()) && !extra_params.contains(&param.as_str()) {
        return Err(bad(format!("`{param}` is not a sweepable parameter")));
    }
    let parts: Vec<&str> = rest.split(':').collect();
    let (lo_s, hi_s, pts_s, log) = match parts.as_slice() {
        [lo, hi, pts] => (lo, hi, pts, false),
        [lo, hi, pts, scale] if *scale == "log" => (lo, hi, pts, true),
        [_, _, _, scale] => {
            return Err(bad(format!("unknown scale `{scale}` (only `log`)")));
        }
        _ => return Err(bad("expected lo:hi:points[:log]".to_string())),
    };
    let lo: f64 = lo_s
        .parse()
        .map_err(|_| bad(format!("`{lo_s}` is not a number")))?;
    let hi: f64 = hi_s
        .parse()
        .map_err(|_| bad(format!("`{hi_s}` is not a number")))?;
    let points: usize = pts_s
        .parse()
        .map_err(|_| bad(format!("`{pts_s}` is not a point count")))?;
    if !(lo.is_finite() && hi.is_finite() && hi > lo && lo >= 0.0) {
        return Err(bad(format!("range [{lo}, {hi}] is not an increasing finite range of nonnegative values")));
    }
    if points < 2 {
        return Err(bad("a sweep needs at least 2 points".to_string()));
    }
    if log && lo <= 0.0 {
        return Err(bad("a log sweep needs lo > 0".to_string()));
    }
    Ok(SweepAxis {
        param,
        lo,
        hi,
        points,
        log,
    })
}

/// Sets one rate parameter by its `--sweep` name.
pub fn set_param(p: &mut ModelParams, name: &str, v: f64) {
    match name {
        "lambda_l" => p.lambda_l = v,
        "lambda_h" => p.lambda_h = v,
        "mu_l" => p.mu_l = v,
        "mu_h" => p.mu_h = v,
        "alpha_l" => p.alpha_l = v,
        "alpha_h" => p.alpha_h = v,
        "tau_l" => p.tau_l = v,
        "tau_h" => p.tau_h = v,
        "tau_p" => p.tau_p = v,
        other => unreachable!("unvalidated sweep parameter `{other}`"),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn resolve(
    config: Option<PathBuf>,
    preset_name: Option<String>,
    sweep: Option<String>,
    sweep_extra: &[&str],
    pch: Option<bool>,
    out: Option<PathBuf>,
    seed: u64,
    replications: usize,
    horizon: f64,
    users: u64,
) -> Result<RunSpec, CliError> {
    let (params, costs, pre) = match (config, preset_name) {
        (Some(_), Some(_)) => {
            return Err(CliError::Config(vec![
                "--config and --preset are mutually exclusive".to_string(),
            ]));
        }
        (None, None) => {
            return Err(CliError::Config(vec![
                "either --config or --preset is required".to_string(),
            ]));
        }
        (Some(path), None) => {
            let text = std::fs::read_to_string(&path).map_err(|e| {
                CliError::Config(vec![format!("cannot read {}: {e}", path.display())])
            })?;
            let cfg = parse_config(&text)
                .map_err(|errs| CliError::Config(errs.iter().map(|e| e.to_string()).collect()))?;
            (cfg.params, cfg.costs, None)
        }
        (None, Some(name)) => {
            let p = preset(&name).ok_or_else(|| {
                CliError::Config(vec![format!(
                    "unknown preset `{name}` (expected fig2, fig3, fig4 or fig5)"
                )])
            })?;
            (p.params.clone(), p.costs.clone(), Some(p))
        }
    };
    let mut costs = costs;
    if let Some(enabled) = pch {
        costs.pch_enabled = enabled;
    }
    let axis = sweep.map(|s| parse_sweep(&s, sweep_extra)).transpose()?;
    if replications == 0 {
        return Err(CliError::Config(vec![
            "--replications must be at least 1".to_string(),
        ]));
    }
    if !(horizon > 0.0) || !horizon.is_finite() {
        return Err(CliError::Config(vec![format!(
            "--horizon must be a positive finite number of seconds, got {horizon}"
        )]));
    }
    Ok(RunSpec {
        params,
        costs,
        preset: pre,
        axis,
        out,
        seed,
        replications,
        horizon,
        users,
    })
}
