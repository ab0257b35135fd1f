//! Parameter-file format: a small INI dialect with explicit rate units.
//!
//! ```text
//! # comment (also after values); ';' works too
//! [rates]
//! lambda_l = 600 mean_s     # one low-band call every 600 s  => 1/600 per s
//! lambda_h = 30 mean_min    # mean inter-event time in minutes
//! mu_l     = 0.2            # plain numbers are rates in 1/s
//! mu_h     = 120 mean_s
//! alpha_l  = 0              # burst rates default to 0 when omitted
//! alpha_h  = inf            # symbolic-infinite bursts are allowed
//! tau_l    = 0.2
//! tau_h    = 0.2
//! tau_p    = 300 mean_s
//!
//! [costs]                   # optional; defaults to the reference cost set
//! n_dl = 15
//! m_dl = 5
//! sigma_inv_dl = 0.75       # delays are seconds, plain numbers only
//!
//! [options]                 # optional
//! pch = on                  # or off
//! ```
//!
//! Every key accepts exactly one value form. In `[rates]`, `x` is a rate in
//! 1/s, `x mean_s` means one event per `x` seconds (rate `1/x`), and
//! `x mean_min` one event per `x` minutes (rate `1/(60 x)`); `inf` is valid
//! for the two burst rates only. The non-burst rates are all required.
//! Unknown sections or keys, duplicate keys, and malformed values are errors;
//! the parser reports every violation it finds, each with its line number.

use crate::model::{ModelParams, SignallingCosts};
use std::collections::HashSet;
use thiserror::Error;

/// One parse-time violation; `Display` renders a one-line diagnostic.
#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown section [{name}] (expected [rates], [costs] or [options])")]
    UnknownSection { line: usize, name: String },
    #[error("line {line}: `{key}` is not a valid key in section [{section}]")]
    UnknownKey {
        line: usize,
        section: String,
        key: String,
    },
    #[error("line {line}: key `{key}` appears outside any section")]
    KeyOutsideSection { line: usize, key: String },
    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: {message}")]
    InvalidValue { line: usize, message: String },
    #[error("missing required key `{key}` in section [rates]")]
    MissingKey { key: &'static str },
}

/// A fully parsed parameter file.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub params: ModelParams,
    pub costs: SignallingCosts,
}

const RATE_KEYS: [&str; 9] = [
    "lambda_l", "lambda_h", "mu_l", "mu_h", "alpha_l", "alpha_h", "tau_l", "tau_h", "tau_p",
];
const REQUIRED_RATE_KEYS: [&str; 7] = [
    "lambda_l", "lambda_h", "mu_l", "mu_h", "tau_l", "tau_h", "tau_p",
];
const COST_KEYS: [&str; 27] = [
    "n_dl",
    "m_dl",
    "sigma_inv_dl",
    "n_pl",
    "m_pl",
    "sigma_inv_pl",
    "n_dh",
    "m_dh",
    "sigma_inv_dh",
    "n_ph",
    "m_ph",
    "sigma_inv_ph",
    "n_lh",
    "m_lh",
    "sigma_inv_lh",
    "n_hl",
    "m_hl",
    "sigma_inv_hl",
    "n_lp",
    "m_lp",
    "sigma_inv_lp",
    "n_pd",
    "m_pd",
    "sigma_inv_ld_release",
    "n_ld",
    "m_ld",
    "sigma_inv_ld",
];

fn parse_rate_value(value: &str, key: &str, line: usize) -> Result<f64, ConfigError> {
    let tokens: Vec<&str> = value.split_whitespace().collect();
    let invalid = |message: String| ConfigError::InvalidValue { line, message };
    match tokens.as_slice() {
        ["inf"] => {
            if key == "alpha_l" || key == "alpha_h" {
                Ok(f64::INFINITY)
            } else {
                Err(invalid(format!(
                    "`inf` is only valid for alpha_l and alpha_h, not `{key}`"
                )))
            }
        }
        [num] => num
            .parse::<f64>()
            .map_err(|_| invalid(format!("`{num}` is not a number for `{key}`"))),
        [num, unit @ ("mean_s" | "mean_min")] => {
            let mean: f64 = num
                .parse()
                .map_err(|_| invalid(format!("`{num}` is not a number for `{key}`")))?;
            if !(mean > 0.0) || !mean.is_finite() {
                return Err(invalid(format!(
                    "mean inter-event time for `{key}` must be a positive finite number"
                )));
            }
            let seconds = if *unit == "mean_min" { mean * 60.0 } else { mean };
            Ok(1.0 / seconds)
        }
        _ => Err(invalid(format!(
            "`{value}` is not a valid rate for `{key}` (use `<num>`, `<num> mean_s`, `<num> mean_min`, or `inf`)"
        ))),
    }
}

fn parse_number_value(value: &str, key: &str, line: usize) -> Result<f64, ConfigError> {
    let tokens: Vec<&str> = value.split_whitespace().collect();
    match tokens.as_slice() {
        [num] => num.parse::<f64>().map_err(|_| ConfigError::InvalidValue {
            line,
            message: format!("`{num}` is not a number for `{key}`"),
        }),
        _ => Err(ConfigError::InvalidValue {
            line,
            message: format!("`{value}` is not a valid value for `{key}` (one plain number)"),
        }),
    }
}

fn set_rate(p: &mut ModelParams, key: &str, v: f64) {
    match key {
        "lambda_l" => p.lambda_l = v,
        "lambda_h" => p.lambda_h = v,
        "mu_l" => p.mu_l = v,
        "mu_h" => p.mu_h = v,
        "alpha_l" => p.alpha_l = v,
        "alpha_h" => p.alpha_h = v,
        "tau_l" => p.tau_l = v,
        "tau_h" => p.tau_h = v,
        "tau_p" => p.tau_p = v,
        _ => unreachable!("rate key checked against RATE_KEYS"),
    }
}

fn set_cost(c: &mut SignallingCosts, key: &str, v: f64) {
    match key {
        "n_dl" => c.n_dl = v,
        "m_dl" => c.m_dl = v,
        "sigma_inv_dl" => c.sigma_inv_dl = v,
        "n_pl" => c.n_pl = v,
        "m_pl" => c.m_pl = v,
        "sigma_inv_pl" => c.sigma_inv_pl = v,
        "n_dh" => c.n_dh = v,
        "m_dh" => c.m_dh = v,
        "sigma_inv_dh" => c.sigma_inv_dh = v,
        "n_ph" => c.n_ph = v,
        "m_ph" => c.m_ph = v,
        "sigma_inv_ph" => c.sigma_inv_ph = v,
        "n_lh" => c.n_lh = v,
        "m_lh" => c.m_lh = v,
        "sigma_inv_lh" => c.sigma_inv_lh = v,
        "n_hl" => c.n_hl = v,
        "m_hl" => c.m_hl = v,
        "sigma_inv_hl" => c.sigma_inv_hl = v,
        "n_lp" => c.n_lp = v,
        "m_lp" => c.m_lp = v,
        "sigma_inv_lp" => c.sigma_inv_lp = v,
        "n_pd" => c.n_pd = v,
        "m_pd" => c.m_pd = v,
        "sigma_inv_ld_release" => c.sigma_inv_ld_release = v,
        "n_ld" => c.n_ld = v,
        "m_ld" => c.m_ld = v,
        "sigma_inv_ld" => c.sigma_inv_ld = v,
        _ => unreachable!("cost key checked against COST_KEYS"),
    }
}

/// Parses a parameter file. Collects every violation rather than stopping at
/// the first; structural parameter validity (positivity and the like) is not
/// checked here — feed the result to the model/analytic constructors for
/// that.
pub fn parse_config(text: &str) -> Result<Config, Vec<ConfigError>> {
    let mut errors: Vec<ConfigError> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut section: Option<String> = None;

    let mut params = ModelParams {
        lambda_l: f64::NAN,
        lambda_h: f64::NAN,
        mu_l: f64::NAN,
        mu_h: f64::NAN,
        alpha_l: 0.0,
        alpha_h: 0.0,
        tau_l: f64::NAN,
        tau_h: f64::NAN,
        tau_p: f64::NAN,
    };
    let mut costs = SignallingCosts::default();
    let mut rate_present: HashSet<&'static str> = HashSet::new();
    let mut pch_seen = false;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        // Strip comments ('#' or ';' anywhere — no valid value contains them).
        let stripped = match raw.find(['#', ';']) {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let trimmed = stripped.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(name) = trimmed.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let name = name.trim();
            if matches!(name, "rates" | "costs" | "options") {
                section = Some(name.to_string());
            } else {
                errors.push(ConfigError::UnknownSection {
                    line,
                    name: name.to_string(),
                });
                section = None;
            }
            continue;
        }
        let Some((key_part, value_part)) = trimmed.split_once('=') else {
            errors.push(ConfigError::Syntax {
                line,
                text: trimmed.to_string(),
            });
            continue;
        };
        let key = key_part.trim().to_ascii_lowercase();
        let value = value_part.trim();
        if key.is_empty() || value.is_empty() {
            errors.push(ConfigError::Syntax {
                line,
                text: trimmed.to_string(),
            });
            continue;
        }
        let Some(section_name) = section.as_deref() else {
            errors.push(ConfigError::KeyOutsideSection { line, key });
            continue;
        };
        if !seen.insert(format!("{section_name}.{key}")) {
            errors.push(ConfigError::DuplicateKey { line, key });
            continue;
        }
        match section_name {
            "rates" => {
                let Some(canonical) = RATE_KEYS.iter().find(|k| **k == key) else {
                    errors.push(ConfigError::UnknownKey {
                        line,
                        section: "rates".to_string(),
                        key,
                    });
                    continue;
                };
                match parse_rate_value(value, &key, line) {
                    Ok(v) => {
                        set_rate(&mut params, &key, v);
                        rate_present.insert(canonical);
                    }
                    Err(e) => errors.push(e),
                }
            }
            "costs" => {
                if !COST_KEYS.contains(&key.as_str()) {
                    errors.push(ConfigError::UnknownKey {
                        line,
                        section: "costs".to_string(),
                        key,
                    });
                    continue;
                }
                match parse_number_value(value, &key, line) {
                    Ok(v) => set_cost(&mut costs, &key, v),
                    Err(e) => errors.push(e),
                }
            }
            "options" => {
                if key != "pch" {
                    errors.push(ConfigError::UnknownKey {
                        line,
                        section: "options".to_string(),
                        key,
                    });
                    continue;
                }
                pch_seen = true;
                match value {
                    "on" => costs.pch_enabled = true,
                    "off" => costs.pch_enabled = false,
                    other => errors.push(ConfigError::InvalidValue {
                        line,
                        message: format!("`pch` must be `on` or `off`, got `{other}`"),
                    }),
                }
            }
            _ => unreachable!("section name checked on entry"),
        }
    }
    let _ = pch_seen;

    for key in REQUIRED_RATE_KEYS {
        if !rate_present.contains(key) {
            errors.push(ConfigError::MissingKey { key });
        }
    }

    if errors.is_empty() {
        Ok(Config { params, costs })
    } else {
        Err(errors)
    }
}

fn fmt_f64(v: f64) -> String {
    // `{:?}` prints the shortest representation that parses back to the same
    // bits (and `inf` for infinity), which is exactly what a round-trippable
    // dump needs.
    format!("{v:?}")
}

/// Renders a canonical parameter file that [`parse_config`] parses back to
/// exactly the same values: rates in 1/s, one key per line, all sections
/// present.
pub fn dump_config(params: &ModelParams, costs: &SignallingCosts) -> String {
    let mut out = String::new();
    out.push_str("[rates]\n");
    for (key, v) in [
        ("lambda_l", params.lambda_l),
        ("lambda_h", params.lambda_h),
        ("mu_l", params.mu_l),
        ("mu_h", params.mu_h),
        ("alpha_l", params.alpha_l),
        ("alpha_h", params.alpha_h),
        ("tau_l", params.tau_l),
        ("tau_h", params.tau_h),
        ("tau_p", params.tau_p),
    ] {
        out.push_str(&format!("{key} = {}\n", fmt_f64(v)));
    }
    out.push_str("\n[costs]\n");
    for (key, v) in [
        ("n_dl", costs.n_dl),
        ("m_dl", costs.m_dl),
        ("sigma_inv_dl", costs.sigma_inv_dl),
        ("n_pl", costs.n_pl),
        ("m_pl", costs.m_pl),
        ("sigma_inv_pl", costs.sigma_inv_pl),
        ("n_dh", costs.n_dh),
        ("m_dh", costs.m_dh),
        ("sigma_inv_dh", costs.sigma_inv_dh),
        ("n_ph", costs.n_ph),
        ("m_ph", costs.m_ph),
        ("sigma_inv_ph", costs.sigma_inv_ph),
        ("n_lh", costs.n_lh),
        ("m_lh", costs.m_lh),
        ("sigma_inv_lh", costs.sigma_inv_lh),
        ("n_hl", costs.n_hl),
        ("m_hl", costs.m_hl),
        ("sigma_inv_hl", costs.sigma_inv_hl),
        ("n_lp", costs.n_lp),
        ("m_lp", costs.m_lp),
        ("sigma_inv_lp", costs.sigma_inv_lp),
        ("n_pd", costs.n_pd),
        ("m_pd", costs.m_pd),
        ("sigma_inv_ld_release", costs.sigma_inv_ld_release),
        ("n_ld", costs.n_ld),
        ("m_ld", costs.m_ld),
        ("sigma_inv_ld", costs.sigma_inv_ld),
    ] {
        out.push_str(&format!("{key} = {}\n", fmt_f64(v)));
    }
    out.push_str("\n[options]\n");
    out.push_str(&format!(
        "pch = {}\n",
        if costs.pch_enabled { "on" } else { "off" }
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
[rates]
lambda_l = 600 mean_s
lambda_h = 30 mean_min
mu_l = 0.2
mu_h = 120 mean_s
tau_l = 0.2
tau_h = 0.2
tau_p = 5 mean_min
";

    #[test]
    fn minimal_config_parses_with_unit_conversion_and_default_bursts() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.params.lambda_l, 1.0 / 600.0);
        assert_eq!(cfg.params.lambda_h, 1.0 / 1800.0);
        assert_eq!(cfg.params.mu_l, 0.2);
        assert_eq!(cfg.params.mu_h, 1.0 / 120.0);
        assert_eq!(cfg.params.tau_p, 1.0 / 300.0);
        assert_eq!(cfg.params.alpha_l, 0.0);
        assert_eq!(cfg.params.alpha_h, 0.0);
        assert_eq!(cfg.costs, SignallingCosts::default());
    }

    #[test]
    fn comments_cost_overrides_and_pch_off_parse() {
        let text = format!(
            "{MINIMAL}
# full-line comment
[costs]
n_ld = 8   ; trailing comment
sigma_inv_ld = 0.4

[options]
pch = off
"
        );
        let cfg = parse_config(&text).unwrap();
        assert_eq!(cfg.costs.n_ld, 8.0);
        assert_eq!(cfg.costs.sigma_inv_ld, 0.4);
        assert!(!cfg.costs.pch_enabled);
    }

    #[test]
    fn symbolic_infinite_bursts_parse_only_for_alphas() {
        let ok = format!("{MINIMAL}alpha_h = inf\n");
        let cfg = parse_config(&ok).unwrap();
        assert!(cfg.params.alpha_h.is_infinite());

        let bad = MINIMAL.replace("mu_l = 0.2", "mu_l = inf");
        let errs = parse_config(&bad).unwrap_err();
        assert!(errs
            .iter()
            .any(|e| matches!(e, ConfigError::InvalidValue { .. })));
    }

    #[test]
    fn violations_are_collected_with_line_numbers() {
        let text = "\
lambda_l = 1
[rates]
lambda_l = 0.001
lambda_l = 0.002
bogus = 3
mu_l = fast
[nonsense]
";
        let errs = parse_config(text).unwrap_err();
        assert!(errs.contains(&ConfigError::KeyOutsideSection {
            line: 1,
            key: "lambda_l".to_string()
        }));
        assert!(errs.contains(&ConfigError::DuplicateKey {
            line: 4,
            key: "lambda_l".to_string()
        }));
        assert!(errs.contains(&ConfigError::UnknownKey {
            line: 5,
            section: "rates".to_string(),
            key: "bogus".to_string()
        }));
        assert!(errs
            .iter()
            .any(|e| matches!(e, ConfigError::InvalidValue { line: 6, .. })));
        assert!(errs.contains(&ConfigError::UnknownSection {
            line: 7,
            name: "nonsense".to_string()
        }));
        // Missing keys are reported too (lambda_h, mu_h, tau_l, tau_h, tau_p).
        assert!(errs.contains(&ConfigError::MissingKey { key: "lambda_h" }));
    }

    #[test]
    fn missing_required_rates_are_all_reported() {
        let errs = parse_config("[rates]\nlambda_l = 1\n").unwrap_err();
        let missing: Vec<_> = errs
            .iter()
            .filter(|e| matches!(e, ConfigError::MissingKey { .. }))
            .collect();
        assert_eq!(missing.len(), 6);
    }

    #[test]
    fn dump_round_trips_exactly() {
        let params = ModelParams {
            lambda_l: 1.0 / 600.0,
            lambda_h: 1.0 / 1800.0,
            mu_l: 0.2,
            mu_h: 1.0 / 120.0,
            alpha_l: 0.1234567890123456,
            alpha_h: f64::INFINITY,
            tau_l: 0.2,
            tau_h: 1.0 / 3.0,
            tau_p: 1.0 / 300.0,
        };
        let costs = SignallingCosts {
            n_ld: 7.5,
            pch_enabled: false,
            ..SignallingCosts::default()
        };
        let text = dump_config(&params, &costs);
        let cfg = parse_config(&text).unwrap();
        assert_eq!(cfg.params, params);
        assert_eq!(cfg.costs, costs);
    }

    #[test]
    fn rate_value_forms_are_exclusive_and_checked() {
        let bad_unit = format!("{MINIMAL}alpha_l = 3 mean_hours\n");
        assert!(parse_config(&bad_unit).is_err());
        let bad_mean = MINIMAL.replace("mu_l = 0.2", "mu_l = 0 mean_s");
        assert!(parse_config(&bad_mean).is_err());
        let bad_syntax = format!("{MINIMAL}alpha_l\n");
        assert!(parse_config(&bad_syntax).is_err());
    }
}
