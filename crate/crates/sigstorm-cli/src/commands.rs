//! The seven subcommand bodies. Each returns the complete output document;
//! `main` routes it to `--out` or stdout.

use crate::csvout::{num, Csv};
use crate::runspec::{set_param, RunSpec, SweepAxis};
use crate::CliError;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use sigstorm::analytic::{
    load_report, radio_load, stationary_distribution, AnalyticError, LoadReport,
};
use sigstorm::model::{build_transition_table, MainState, ModelParams, SignallingCosts};
use sigstorm::numeric::rel_err;
use sigstorm::optimizer::{
    core_alpha_h_hat, core_optimal_alpha_l, radio_limit_load, radio_optimal_bursts, BurstPolicy,
    OptimizerResult,
};
use sigstorm::oracle::{
    build_full_generator, message_rate_oracle, reduce_full_distribution, solve_stationary,
};
use sigstorm::presets::PresetKind;
use sigstorm::sim::{confidence, simulate};
use sigstorm::storm::{population_load, StormScenario};

fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

/// Parameter-domain violations exit as config errors; genuinely numerical
/// conditions (unsupported regimes, symbolic-infinite inputs to finite
/// formulas) exit as numerical failures.
fn analytic_err(e: AnalyticError) -> CliError {
    match e {
        AnalyticError::InvalidParams(v) => CliError::Config(v),
        other => CliError::Numerical(other.to_string()),
    }
}

/// Same split for transition-table construction.
fn model_err(e: sigstorm::model::ModelError) -> CliError {
    match e {
        sigstorm::model::ModelError::InvalidParams(v) => CliError::Config(v),
        other => CliError::Numerical(other.to_string()),
    }
}

/// The shared `# key = value` header block: scenario, rates, paging mode.
fn header(csv: &mut Csv, spec: &RunSpec) {
    header_for(csv, spec, &spec.params);
}

fn header_for(csv: &mut Csv, spec: &RunSpec, p: &ModelParams) {
    if let Some(pre) = &spec.preset {
        csv.comment(&format!("preset = {}", pre.name));
    }
    for (key, v) in [
        ("lambda_l", p.lambda_l),
        ("lambda_h", p.lambda_h),
        ("mu_l", p.mu_l),
        ("mu_h", p.mu_h),
        ("alpha_l", p.alpha_l),
        ("alpha_h", p.alpha_h),
        ("tau_l", p.tau_l),
        ("tau_h", p.tau_h),
        ("tau_p", p.tau_p),
    ] {
        csv.comment(&format!("{key} = {}", num(v)));
    }
    csv.comment(&format!(
        "pch = {}",
        if spec.costs.pch_enabled { "on" } else { "off" }
    ));
}

/// `solve`: stationary distribution, one row per state.
pub fn solve(spec: &RunSpec) -> Result<String, CliError> {
    let d = stationary_distribution(&spec.params, &spec.costs).map_err(analytic_err)?;
    let mut csv = Csv::new();
    header(&mut csv, spec);
    csv.comment(&format!("normalization_g = {}", num(d.normalization())));
    csv.comment("columns: state,pi,weight");
    csv.row(["state", "pi", "weight"]);
    for s in MainState::ALL {
        csv.row([
            s.label().to_string(),
            num(d.pi(s)),
            num(d.weights().weight(s)),
        ]);
    }
    Ok(csv.finish())
}

const LOAD_COLUMNS: [&str; 9] = [
    "gamma_r",
    "gamma_c",
    "idle",
    "pch",
    "fach_active",
    "fach_inactive",
    "dch_active",
    "dch_inactive",
    "signalling",
];

fn load_row(r: &LoadReport) -> [String; 9] {
    [
        num(r.gamma_r),
        num(r.gamma_c),
        num(r.occupancy.idle),
        num(r.occupancy.pch),
        num(r.occupancy.fach_active),
        num(r.occupancy.fach_inactive),
        num(r.occupancy.dch_active),
        num(r.occupancy.dch_inactive),
        num(r.occupancy.signalling),
    ]
}

/// `loads`: both message rates plus the seven occupancy fractions, one row.
pub fn loads(spec: &RunSpec) -> Result<String, CliError> {
    let report = load_report(&spec.params, &spec.costs).map_err(analytic_err)?;
    let mut csv = Csv::new();
    header(&mut csv, spec);
    csv.comment(&format!("columns: {}", LOAD_COLUMNS.join(",")));
    csv.row(LOAD_COLUMNS);
    csv.row(load_row(&report));
    Ok(csv.finish())
}

const OPTIMIZE_COLUMNS: [&str; 13] = [
    "operation",
    "policy",
    "alpha_l_star",
    "alpha_h_star",
    "alpha_h_hat",
    "gamma_star",
    "a",
    "b",
    "c",
    "big_a",
    "big_b",
    "no_profitable_attack",
    "regime_warning",
];

fn policy_label(p: BurstPolicy) -> &'static str {
    match p {
        BurstPolicy::UnboundedLow => "unbounded_low",
        BurstPolicy::UnboundedHigh => "unbounded_high",
        BurstPolicy::Finite => "finite",
    }
}

fn opt_row(csv: &mut Csv, operation: &str, r: &OptimizerResult) {
    let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
    csv.row([
        operation.to_string(),
        policy_label(r.policy).to_string(),
        num(r.alpha_l_star),
        num(r.alpha_h_star),
        opt(r.alpha_h_hat),
        num(r.gamma_star),
        opt(r.a),
        opt(r.b),
        opt(r.c),
        opt(r.big_a),
        opt(r.big_b),
        r.no_profitable_attack.to_string(),
        r.regime_warning.to_string(),
    ]);
}

/// `optimize`: every closed-form worst-case result applicable to the paging
/// mode, one operation per row, intermediates included.
pub fn optimize(spec: &RunSpec) -> Result<String, CliError> {
    let (p, c) = (&spec.params, &spec.costs);
    let mut csv = Csv::new();
    header(&mut csv, spec);
    csv.comment(&format!("columns: {}", OPTIMIZE_COLUMNS.join(",")));
    csv.row(OPTIMIZE_COLUMNS);
    let radio = radio_optimal_bursts(p, c).map_err(analytic_err)?;
    opt_row(&mut csv, "radio_optimal_bursts", &radio);
    if c.pch_enabled {
        let limit = radio_limit_load(p, c).map_err(analytic_err)?;
        csv.row([
            "radio_limit_load".to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            num(limit),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
        ]);
        let core_l = core_optimal_alpha_l(p, c).map_err(analytic_err)?;
        opt_row(&mut csv, "core_optimal_alpha_l", &core_l);
    }
    let core_h = core_alpha_h_hat(p, c).map_err(analytic_err)?;
    opt_row(&mut csv, "core_alpha_h_hat", &core_h);
    Ok(csv.finish())
}

/// Evaluates the full load report with one rate overridden.
fn report_at(
    p: &ModelParams,
    c: &SignallingCosts,
    param: &str,
    v: f64,
) -> Result<LoadReport, CliError> {
    let mut q = *p;
    set_param(&mut q, param, v);
    load_report(&q, c).map_err(analytic_err)
}

/// `sweep`: one parameter against every output metric. An explicit `--sweep`
/// axis wins; otherwise the preset supplies its own recipe.
pub fn sweep(spec: &RunSpec) -> Result<String, CliError> {
    if let Some(axis) = &spec.axis {
        return single_axis_sweep(spec, axis);
    }
    match spec.preset.as_ref().map(|p| &p.kind) {
        Some(PresetKind::HighBurstLogSweep { lo, hi, points }) => single_axis_sweep(
            spec,
            &SweepAxis {
                param: "alpha_h".to_string(),
                lo: *lo,
                hi: *hi,
                points: *points,
                log: true,
            },
        ),
        Some(PresetKind::OccupancySweep { lo, hi, points }) => single_axis_sweep(
            spec,
            &SweepAxis {
                param: "alpha_h".to_string(),
                lo: *lo,
                hi: *hi,
                points: *points,
                log: false,
            },
        ),
        Some(PresetKind::LowBurstGrid {
            lo,
            hi,
            points,
            alpha_h_values,
        }) => burst_grid(spec, *lo, *hi, *points, alpha_h_values),
        Some(PresetKind::StormSweep { .. }) => Err(CliError::Config(vec![
            "this preset describes a population sweep; use the `storm` subcommand".to_string(),
        ])),
        None => Err(CliError::Config(vec![
            "sweep needs --sweep PARAM=lo:hi:points[:log] or a preset with a sweep recipe"
                .to_string(),
        ])),
    }
}

fn single_axis_sweep(spec: &RunSpec, axis: &SweepAxis) -> Result<String, CliError> {
    let rows: Result<Vec<_>, CliError> = axis
        .grid()
        .into_par_iter()
        .map(|v| Ok((v, report_at(&spec.params, &spec.costs, &axis.param, v)?)))
        .collect();
    let rows = rows?;
    let mut csv = Csv::new();
    header(&mut csv, spec);
    csv.comment(&format!(
        "sweep: {} from {} to {}, {} points, {} scale",
        axis.param,
        num(axis.lo),
        num(axis.hi),
        axis.points,
        if axis.log { "log" } else { "linear" }
    ));
    csv.comment(&format!("columns: {},{}", axis.param, LOAD_COLUMNS.join(",")));
    let mut head = vec![axis.param.clone()];
    head.extend(LOAD_COLUMNS.iter().map(|s| s.to_string()));
    csv.row(head);
    for (v, report) in rows {
        let mut row = vec![num(v)];
        row.extend(load_row(&report));
        csv.row(row);
    }
    Ok(csv.finish())
}

/// The two-burst grid recipe: a log axis in the low-band rate crossed with a
/// short list of high-band rates.
fn burst_grid(
    spec: &RunSpec,
    lo: f64,
    hi: f64,
    points: usize,
    alpha_h_values: &[f64; 5],
) -> Result<String, CliError> {
    let axis = SweepAxis {
        param: "alpha_l".to_string(),
        lo,
        hi,
        points,
        log: true,
    };
    let mut cells = Vec::new();
    for &ah in alpha_h_values {
        for al in axis.grid() {
            cells.push((al, ah));
        }
    }
    let rows: Result<Vec<_>, CliError> = cells
        .into_par_iter()
        .map(|(al, ah)| {
            let mut q = spec.params;
            q.alpha_l = al;
            q.alpha_h = ah;
            Ok(((al, ah), load_report(&q, &spec.costs).map_err(analytic_err)?))
        })
        .collect();
    let rows = rows?;
    let mut csv = Csv::new();
    header(&mut csv, spec);
    csv.comment(&format!(
        "grid: alpha_l log [{}, {}] x {} points, alpha_h in {{{}}}",
        num(lo),
        num(hi),
        points,
        alpha_h_values.map(num).join(", ")
    ));
    csv.comment(&format!(
        "columns: alpha_l,alpha_h,{}",
        LOAD_COLUMNS.join(",")
    ));
    let mut head = vec!["alpha_l".to_string(), "alpha_h".to_string()];
    head.extend(LOAD_COLUMNS.iter().map(|s| s.to_string()));
    csv.row(head);
    for ((al, ah), report) in rows {
        let mut row = vec![num(al), num(ah)];
        row.extend(load_row(&report));
        csv.row(row);
    }
    Ok(csv.finish())
}

/// `simulate`: seeded event-driven run, per-metric confidence rows.
pub fn simulate_cmd(spec: &RunSpec) -> Result<String, CliError> {
    if spec.replications < 2 {
        return Err(CliError::Config(vec![
            "simulate needs --replications >= 2 for standard errors".to_string(),
        ]));
    }
    let table = build_transition_table(&spec.params, &spec.costs).map_err(model_err)?;
    let stats = simulate(&table, spec.seed, spec.horizon, spec.replications).map_err(numerical)?;
    let rows = confidence(&stats).map_err(numerical)?;
    let mut csv = Csv::new();
    header(&mut csv, spec);
    csv.comment(&format!(
        "seed = {}, horizon_s = {}, replications = {}",
        spec.seed,
        num(spec.horizon),
        spec.replications
    ));
    csv.comment(&format!(
        "total_messages: rnc = {}, sgsn = {}",
        num(stats.n_messages),
        num(stats.m_messages)
    ));
    csv.comment("columns: metric,mean,stderr,rel_half_width,flagged");
    csv.row(["metric", "mean", "stderr", "rel_half_width", "flagged"]);
    for r in rows {
        csv.row([
            r.metric.clone(),
            num(r.mean),
            num(r.stderr),
            num(r.rel_half_width),
            r.flagged.to_string(),
        ]);
    }
    Ok(csv.finish())
}

/// `storm`: population totals over the misbehaving fraction. The misbehaving
/// class runs the closed-form worst-case burst for the active paging mode.
pub fn storm(spec: &RunSpec) -> Result<String, CliError> {
    let normal = ModelParams {
        alpha_l: 0.0,
        alpha_h: 0.0,
        ..spec.params
    };
    let mut attack = normal;
    if spec.costs.pch_enabled {
        let r = core_optimal_alpha_l(&normal, &spec.costs).map_err(analytic_err)?;
        attack.alpha_l = r.alpha_l_star;
        attack.alpha_h = r.alpha_h_star;
    } else {
        let r = core_alpha_h_hat(&normal, &spec.costs).map_err(analytic_err)?;
        attack.alpha_l = 0.0;
        attack.alpha_h = r.alpha_h_star;
    }

    let (grid, users) = match (&spec.axis, spec.preset.as_ref().map(|p| &p.kind)) {
        (Some(axis), _) => {
            if axis.param != "fraction" {
                return Err(CliError::Config(vec![format!(
                    "storm sweeps the misbehaving fraction; got --sweep {}",
                    axis.param
                )]));
            }
            if axis.hi > 1.0 {
                return Err(CliError::Config(vec![
                    "fraction sweep must stay within [0, 1]".to_string(),
                ]));
            }
            (axis.grid(), spec.users)
        }
        (
            None,
            Some(PresetKind::StormSweep {
                f_lo,
                f_hi,
                points,
                n_users,
            }),
        ) => (
            sigstorm::numeric::linear_grid(*f_lo, *f_hi, *points),
            *n_users,
        ),
        (None, _) => (sigstorm::numeric::linear_grid(0.0, 0.2, 41), spec.users),
    };

    let rows: Result<Vec<_>, CliError> = grid
        .into_par_iter()
        .map(|f| {
            let scenario = StormScenario {
                n_users: users,
                fraction_misbehaving: f,
                normal_params: normal,
                attack_params: attack,
                costs: spec.costs.clone(),
            };
            let (radio_total, core_total) =
                population_load(&scenario).map_err(|e| CliError::Numerical(e.to_string()))?;
            Ok((f, radio_total, core_total))
        })
        .collect();
    let rows = rows?;
    let mut csv = Csv::new();
    header_for(&mut csv, spec, &normal);
    csv.comment(&format!(
        "population = {users}, attack_alpha_l = {}, attack_alpha_h = {}",
        num(attack.alpha_l),
        num(attack.alpha_h)
    ));
    csv.comment("columns: fraction,radio_total,core_total");
    csv.row(["fraction", "radio_total", "core_total"]);
    for (f, r, c) in rows {
        csv.row([num(f), num(r), num(c)]);
    }
    Ok(csv.finish())
}

/// `verify`: cross-checks the closed form against the numeric oracle on
/// random parameter sets and against the simulator on the preset scenarios.
/// A `fail` row exits with the verification-mismatch code.
pub fn verify(spec: &RunSpec) -> Result<String, CliError> {
    const ORACLE_SETS: usize = 100;
    const ORACLE_TOL: f64 = 1e-9;
    const SIM_Z_MAX: f64 = 4.0;
    // The z threshold is calibrated for a healthy degrees-of-freedom count;
    // tiny replication counts would turn estimate noise into false alarms.
    const SIM_REPS_FLOOR: usize = 10;

    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    let mut sets = Vec::with_capacity(ORACLE_SETS);
    for _ in 0..ORACLE_SETS {
        let log_rate = |r: &mut ChaCha12Rng| 10f64.powf(r.gen_range(-4.0..1.0));
        sets.push(ModelParams {
            lambda_l: log_rate(&mut rng),
            lambda_h: log_rate(&mut rng),
            mu_l: log_rate(&mut rng),
            mu_h: log_rate(&mut rng),
            alpha_l: if rng.gen_bool(0.5) { log_rate(&mut rng) } else { 0.0 },
            alpha_h: if rng.gen_bool(0.5) { log_rate(&mut rng) } else { 0.0 },
            tau_l: log_rate(&mut rng),
            tau_h: log_rate(&mut rng),
            tau_p: log_rate(&mut rng),
        });
    }
    let worst_oracle = sets
        .par_iter()
        .map(|p| {
            let mut worst: f64 = 0.0;
            for pch in [true, false] {
                let c = SignallingCosts {
                    pch_enabled: pch,
                    ..spec.costs.clone()
                };
                let d = stationary_distribution(p, &c).map_err(analytic_err)?;
                let table =
                    build_transition_table(p, &c).map_err(|e| numerical(e.to_string()))?;
                let g = build_full_generator(&table);
                let full = solve_stationary(&g).map_err(numerical)?;
                let reduced = reduce_full_distribution(&full, &g);
                for (cf, nm) in d.pi_array().iter().zip(reduced.main.iter()) {
                    worst = worst.max(rel_err(*cf, *nm));
                }
                let (n_rate, m_rate) = message_rate_oracle(&full, &g);
                worst = worst.max(rel_err(radio_load(&d, p, &c), n_rate));
                worst = worst.max(rel_err(
                    sigstorm::analytic::core_load(&d, p, &c),
                    m_rate,
                ));
            }
            Ok(worst)
        })
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))?;

    // Simulator leg: the four preset scenarios with a mild burst each.
    let mut worst_z: f64 = 0.0;
    for name in ["fig2", "fig3", "fig4", "fig5"] {
        let pre = sigstorm::presets::preset(name).expect("built-in preset");
        let p = ModelParams {
            alpha_h: 0.02,
            ..pre.params
        };
        let d = stationary_distribution(&p, &pre.costs).map_err(analytic_err)?;
        let (gr, gc) = (
            radio_load(&d, &p, &pre.costs),
            sigstorm::analytic::core_load(&d, &p, &pre.costs),
        );
        let table =
            build_transition_table(&p, &pre.costs).map_err(|e| numerical(e.to_string()))?;
        let stats = simulate(&table, spec.seed, spec.horizon, spec.replications.max(SIM_REPS_FLOOR))
            .map_err(numerical)?;
        for (analytic, est) in [(gr, &stats.gamma_r), (gc, &stats.gamma_c)] {
            if est.stderr > 0.0 {
                worst_z = worst_z.max((est.mean - analytic).abs() / est.stderr);
            }
        }
    }

    let oracle_ok = worst_oracle <= ORACLE_TOL;
    let sim_ok = worst_z <= SIM_Z_MAX;
    let mut csv = Csv::new();
    csv.comment(&format!(
        "seed = {}, horizon_s = {}, replications = {}",
        spec.seed,
        num(spec.horizon),
        spec.replications.max(SIM_REPS_FLOOR)
    ));
    csv.comment("columns: check,cases,worst,threshold,status");
    csv.row(["check", "cases", "worst", "threshold", "status"]);
    csv.row([
        "closed_form_vs_oracle".to_string(),
        format!("{}", ORACLE_SETS * 2),
        num(worst_oracle),
        num(ORACLE_TOL),
        (if oracle_ok { "ok" } else { "fail" }).to_string(),
    ]);
    csv.row([
        "closed_form_vs_simulator_z".to_string(),
        "8".to_string(),
        num(worst_z),
        num(SIM_Z_MAX),
        (if sim_ok { "ok" } else { "fail" }).to_string(),
    ]);
    let report = csv.finish();
    if oracle_ok && sim_ok {
        Ok(report)
    } else {
        // The report still reaches the user before the mismatch exit code.
        Err(CliError::Verification(report))
    }
}

/// Re-serializes the effective parameters; `--dump-config` output.
pub fn dump(spec: &RunSpec) -> String {
    sigstorm::config::dump_config(&spec.params, &spec.costs)
}
