//! Run configuration.
//!
//! The text form is one `key = value` per line with dotted section
//! prefixes (`model.rho = 0.98`); `#` starts a comment. A JSON object with
//! the same sections nested one level deep is accepted interchangeably.
//! Sources are layered: preset, then file, then `--set` overrides, with the
//! last assignment of a key winning.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::analysis::{
    DEFAULT_BURN_IN, DEFAULT_E0, DEFAULT_GRID_POINTS, DEFAULT_LAMBDA0, DEFAULT_LYAPUNOV_STEPS,
    DEFAULT_SAMPLES, MAX_PERIOD, PERIOD_TOL,
};
use crate::model::{ModelParams, Param, PopulationMix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("{origin}: {message}")]
    Parse { origin: String, message: String },

    #[error("{origin}: unknown key `{key}`")]
    UnknownKey { origin: String, key: String },

    #[error("invalid value for `{field}`: {message}")]
    Invalid { field: String, message: String },

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

impl ConfigError {
    pub fn kind(&self) -> &'static str {
        match self {
            ConfigError::Parse { .. } => "config_parse",
            ConfigError::UnknownKey { .. } => "config_unknown_key",
            ConfigError::Invalid { .. } => "config_invalid",
            ConfigError::UnknownPreset(_) => "config_unknown_preset",
            ConfigError::Io { .. } => "config_io",
        }
    }
}

fn invalid(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Simulate,
    Cobweb,
    FixedPoints,
    AbsorbingInterval,
    Bifurcate,
    Stability,
    MuThreshold,
    ComparativeStatics,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Simulate,
        Experiment::Cobweb,
        Experiment::FixedPoints,
        Experiment::AbsorbingInterval,
        Experiment::Bifurcate,
        Experiment::Stability,
        Experiment::MuThreshold,
        Experiment::ComparativeStatics,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Simulate => "simulate",
            Experiment::Cobweb => "cobweb",
            Experiment::FixedPoints => "fixed-points",
            Experiment::AbsorbingInterval => "absorbing-interval",
            Experiment::Bifurcate => "bifurcate",
            Experiment::Stability => "stability",
            Experiment::MuThreshold => "mu-threshold",
            Experiment::ComparativeStatics => "comparative-statics",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| format!("unknown experiment `{s}`"))
    }
}

/// Which map an experiment runs on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MapKind {
    OneD,
    TwoD,
}

impl MapKind {
    pub fn name(self) -> &'static str {
        match self {
            MapKind::OneD => "1d",
            MapKind::TwoD => "2d",
        }
    }
}

impl FromStr for MapKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "1d" => Ok(MapKind::OneD),
            "2d" => Ok(MapKind::TwoD),
            _ => Err(format!("expected `1d` or `2d`, got `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSettings {
    pub map: MapKind,
    pub steps: usize,
    pub burn_in: usize,
    pub e0: f64,
    pub lambda0: f64,
    pub lyapunov_steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSettings {
    pub parameter: Param,
    pub lo: f64,
    pub hi: f64,
    pub grid_points: usize,
    pub tie_sigma_pi: bool,
    pub continuation: bool,
    pub max_period: usize,
    pub period_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub experiment: Experiment,
    pub preset: Option<String>,
    pub model: ModelParams,
    pub mix: PopulationMix,
    pub run: RunSettings,
    pub sweep: SweepSettings,
    /// Grid used by fixed-point scans.
    pub scan_grid: usize,
    pub cobweb_steps: usize,
    pub cobweb_curve_grid: usize,
    /// Every key with its effective value, in canonical order.
    pub effective: Vec<(String, String)>,
}

struct Preset {
    name: &'static str,
    summary: &'static str,
    text: &'static str,
}

const PRESETS: &[Preset] = &[
    Preset {
        name: "fig1a",
        summary: "rho sweep at sigma = sigma_pi = 4.1 (single flip)",
        text: include_str!("../presets/fig1a.conf"),
    },
    Preset {
        name: "fig1b",
        summary: "sigma sweep on [0, 20] (period doubling to chaos)",
        text: include_str!("../presets/fig1b.conf"),
    },
    Preset {
        name: "fig3",
        summary: "time series at sigma = 16.5",
        text: include_str!("../presets/fig3.conf"),
    },
    Preset {
        name: "fig4",
        summary: "cobweb from E0 = 0.3 at sigma = 16.5",
        text: include_str!("../presets/fig4.conf"),
    },
    Preset {
        name: "fig5-lambda",
        summary: "lambda sweep at rho = 1.18, sigma = 17.9",
        text: include_str!("../presets/fig5-lambda.conf"),
    },
    Preset {
        name: "restabilize",
        summary: "time series at sigma = 16.5 with rho_pi = 0.98",
        text: include_str!("../presets/restabilize.conf"),
    },
    Preset {
        name: "restabilize-sweep",
        summary: "rho_pi sweep on [0, 2] at sigma = 16.5",
        text: include_str!("../presets/restabilize-sweep.conf"),
    },
    Preset {
        name: "fig6",
        summary: "two-dimensional sigma sweep at mu = 6",
        text: include_str!("../presets/fig6.conf"),
    },
    Preset {
        name: "fig7",
        summary: "two-dimensional mu sweep at sigma = 16.5",
        text: include_str!("../presets/fig7.conf"),
    },
];

/// `(name, summary)` of every bundled preset.
pub fn presets() -> impl Iterator<Item = (&'static str, &'static str)> {
    PRESETS.iter().map(|p| (p.name, p.summary))
}

pub fn preset_text(name: &str) -> Result<&'static str, ConfigError> {
    PRESETS
        .iter()
        .find(|p| p.name == name)
        .map(|p| p.text)
        .ok_or_else(|| ConfigError::UnknownPreset(name.to_string()))
}

const KEYS: &[&str] = &[
    "experiment",
    "preset",
    "model.income",
    "model.price_education",
    "model.price_consumption",
    "model.rho",
    "model.rho_pi",
    "model.sigma",
    "model.sigma_pi",
    "model.kappa",
    "model.pi_bar",
    "mix.lambda",
    "mix.mu",
    "run.map",
    "run.steps",
    "run.burn_in",
    "run.e0",
    "run.lambda0",
    "run.lyapunov_steps",
    "sweep.parameter",
    "sweep.lo",
    "sweep.hi",
    "sweep.grid_points",
    "sweep.tie_sigma_pi",
    "sweep.continuation",
    "sweep.max_period",
    "sweep.period_tol",
    "scan.grid_n",
    "cobweb.steps",
    "cobweb.curve_grid",
    "tol.denominator",
    "tol.weight",
    "tol.kink",
    "tol.fd_step",
    "tol.domain",
];

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    origin: String,
}

/// Ordered key assignments from one or more sources.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, Entry>,
}

impl RawConfig {
    fn insert(&mut self, key: &str, value: &str, origin: String) -> Result<(), ConfigError> {
        if !KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey {
                origin,
                key: key.to_string(),
            });
        }
        self.entries.insert(
            key.to_string(),
            Entry {
                value: value.to_string(),
                origin,
            },
        );
        Ok(())
    }

    /// Parses either form; `source` labels diagnostics.
    pub fn parse(text: &str, source: &str) -> Result<Self, ConfigError> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text, source)
        } else {
            Self::parse_lines(text, source)
        }
    }

    fn parse_lines(text: &str, source: &str) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::default();
        for (i, line) in text.lines().enumerate() {
            let origin = format!("{source}:{}", i + 1);
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(ConfigError::Parse {
                    origin,
                    message: format!("expected `key = value`, got `{line}`"),
                });
            };
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || v.is_empty() {
                return Err(ConfigError::Parse {
                    origin,
                    message: "empty key or value".into(),
                });
            }
            raw.insert(k, v, origin)?;
        }
        Ok(raw)
    }

    fn parse_json(text: &str, source: &str) -> Result<Self, ConfigError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
            origin: format!("{source}:{}", e.line()),
            message: e.to_string(),
        })?;
        let top = value.as_object().ok_or_else(|| ConfigError::Parse {
            origin: source.to_string(),
            message: "expected a JSON object".into(),
        })?;
        let mut raw = RawConfig::default();
        for (k, v) in top {
            match v {
                serde_json::Value::Object(inner) => {
                    for (ik, iv) in inner {
                        let key = format!("{k}.{ik}");
                        raw.insert(&key, &json_scalar(iv, &key, source)?, format!("{source}:{key}"))?;
                    }
                }
                _ => raw.insert(k, &json_scalar(v, k, source)?, format!("{source}:{k}"))?,
            }
        }
        Ok(raw)
    }

    /// Parses `key=value` overrides.
    pub fn parse_overrides<'a>(sets: impl IntoIterator<Item = &'a str>) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::default();
        for s in sets {
            let origin = format!("--set {s}");
            let Some((k, v)) = s.split_once('=') else {
                return Err(ConfigError::Parse {
                    origin,
                    message: "expected key=value".into(),
                });
            };
            raw.insert(k.trim(), v.trim(), origin)?;
        }
        Ok(raw)
    }

    /// Applies `other` on top of `self`.
    pub fn merge(mut self, other: RawConfig) -> Self {
        self.entries.extend(other.entries);
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }
}

fn json_scalar(v: &serde_json::Value, key: &str, source: &str) -> Result<String, ConfigError> {
    match v {
        serde_json::Value::String(s) => Ok(s.clone()),
        serde_json::Value::Number(n) => Ok(n.to_string()),
        serde_json::Value::Bool(b) => Ok(b.to_string()),
        _ => Err(ConfigError::Parse {
            origin: format!("{source}:{key}"),
            message: "expected a string, number or boolean".into(),
        }),
    }
}

/// Where a configuration comes from.
#[derive(Debug, Clone, Default)]
pub struct ConfigSources<'a> {
    pub preset: Option<&'a str>,
    pub file: Option<&'a Path>,
    pub experiment: Option<Experiment>,
    pub overrides: Vec<&'a str>,
}

/// Layers preset, file and overrides, then builds and validates.
pub fn load_config(sources: &ConfigSources<'_>) -> Result<RunConfig, ConfigError> {
    let file = match sources.file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            RawConfig::parse(&text, &path.display().to_string())?
        }
        None => RawConfig::default(),
    };
    let overrides = RawConfig::parse_overrides(sources.overrides.iter().copied())?;

    let preset = sources
        .preset
        .or_else(|| overrides.get("preset"))
        .or_else(|| file.get("preset"))
        .map(str::to_string);
    let mut raw = match &preset {
        Some(name) => RawConfig::parse(preset_text(name)?, &format!("preset {name}"))?,
        None => RawConfig::default(),
    };
    if let Some(name) = &preset {
        raw.insert("preset", name, "preset".into())?;
    }
    raw = raw.merge(file);
    if let Some(e) = sources.experiment {
        raw.insert("experiment", e.name(), "command line".into())?;
    }
    raw = raw.merge(overrides);
    build(&raw)
}

/// Parses one config text on its own (no preset expansion).
pub fn parse_config(text: &str, source: &str) -> Result<RunConfig, ConfigError> {
    build(&RawConfig::parse(text, source)?)
}

struct Reader<'a> {
    raw: &'a RawConfig,
}

impl Reader<'_> {
    fn value<T: FromStr>(&self, key: &str, default: T) -> Result<T, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.raw.entries.get(key) {
            None => Ok(default),
            Some(e) => e.value.parse::<T>().map_err(|err| ConfigError::Parse {
                origin: e.origin.clone(),
                message: format!("`{key}`: {err}"),
            }),
        }
    }

    fn float(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        let v: f64 = self.value(key, default)?;
        if !v.is_finite() {
            return Err(invalid(key, "must be finite"));
        }
        Ok(v)
    }
}

fn build(raw: &RawConfig) -> Result<RunConfig, ConfigError> {
    let r = Reader { raw };
    let base = ModelParams::default();

    let experiment: Experiment = match raw.get("experiment") {
        Some(_) => r.value("experiment", Experiment::Simulate)?,
        None => return Err(invalid("experiment", "no experiment given")),
    };

    let sigma = r.float("model.sigma", base.sigma)?;
    let mut model = ModelParams {
        income: r.float("model.income", base.income)?,
        price_education: r.float("model.price_education", base.price_education)?,
        price_consumption: r.float("model.price_consumption", base.price_consumption)?,
        rho: r.float("model.rho", base.rho)?,
        rho_pi: r.float("model.rho_pi", base.rho_pi)?,
        sigma,
        sigma_pi: r.float("model.sigma_pi", sigma)?,
        kappa: r.float("model.kappa", base.kappa)?,
        pi_bar: r.float("model.pi_bar", base.pi_bar)?,
        tol: base.tol,
    };
    model.tol.denominator = r.float("tol.denominator", model.tol.denominator)?;
    model.tol.weight = r.float("tol.weight", model.tol.weight)?;
    model.tol.kink = r.float("tol.kink", model.tol.kink)?;
    model.tol.fd_step = r.float("tol.fd_step", model.tol.fd_step)?;
    model.tol.domain = r.float("tol.domain", model.tol.domain)?;
    if let Err(e) = model.validate() {
        let field = match &e {
            crate::ModelError::InvalidParameter { name, .. } if name.starts_with("tol.") => name.to_string(),
            crate::ModelError::InvalidParameter { name, .. } => format!("model.{name}"),
            _ => "model".into(),
        };
        return Err(invalid(&field, e.to_string()));
    }

    let mix = PopulationMix {
        lambda: r.float("mix.lambda", 0.5)?,
        mu: r.float("mix.mu", 0.0)?,
    };
    if !(0.0..=1.0).contains(&mix.lambda) {
        return Err(invalid("mix.lambda", "must lie in [0, 1]"));
    }
    if mix.mu < 0.0 {
        return Err(invalid("mix.mu", "must be >= 0"));
    }

    let run = RunSettings {
        map: r.value("run.map", MapKind::OneD)?,
        steps: r.value("run.steps", DEFAULT_SAMPLES)?,
        burn_in: r.value("run.burn_in", DEFAULT_BURN_IN)?,
        e0: r.float("run.e0", DEFAULT_E0)?,
        lambda0: r.float("run.lambda0", DEFAULT_LAMBDA0)?,
        lyapunov_steps: r.value("run.lyapunov_steps", DEFAULT_LYAPUNOV_STEPS)?,
    };
    if run.steps == 0 {
        return Err(invalid("run.steps", "must be >= 1"));
    }
    if !(0.0..=model.max_enrolment()).contains(&run.e0) {
        return Err(invalid("run.e0", format!("must lie in [0, {}]", model.max_enrolment())));
    }
    if !(0.0..=1.0).contains(&run.lambda0) {
        return Err(invalid("run.lambda0", "must lie in [0, 1]"));
    }

    let sweep = SweepSettings {
        parameter: r.value("sweep.parameter", Param::Sigma)?,
        lo: r.float("sweep.lo", 0.0)?,
        hi: r.float("sweep.hi", 20.0)?,
        grid_points: r.value("sweep.grid_points", DEFAULT_GRID_POINTS)?,
        tie_sigma_pi: r.value("sweep.tie_sigma_pi", raw.get("model.sigma_pi").is_none())?,
        continuation: r.value("sweep.continuation", false)?,
        max_period: r.value("sweep.max_period", MAX_PERIOD)?,
        period_tol: r.float("sweep.period_tol", PERIOD_TOL)?,
    };
    if !sweep.parameter.sweepable() {
        return Err(invalid("sweep.parameter", format!("`{}` cannot be swept", sweep.parameter)));
    }
    if sweep.lo >= sweep.hi {
        return Err(invalid("sweep.hi", "must exceed sweep.lo"));
    }
    if sweep.grid_points < 100 {
        return Err(invalid("sweep.grid_points", "must be >= 100"));
    }

    let scan_grid = r.value("scan.grid_n", 2000usize)?;
    if scan_grid < 1000 {
        return Err(invalid("scan.grid_n", "must be >= 1000"));
    }
    let cobweb_steps = r.value("cobweb.steps", 100usize)?;
    let cobweb_curve_grid = r.value("cobweb.curve_grid", 1000usize)?;
    if cobweb_curve_grid < 2 {
        return Err(invalid("cobweb.curve_grid", "must be >= 2"));
    }

    let preset = raw.get("preset").map(str::to_string);
    let t = &model.tol;
    let effective = vec![
        ("experiment", experiment.name().to_string()),
        ("preset", preset.clone().unwrap_or_else(|| "none".into())),
        ("model.income", model.income.to_string()),
        ("model.price_education", model.price_education.to_string()),
        ("model.price_consumption", model.price_consumption.to_string()),
        ("model.rho", model.rho.to_string()),
        ("model.rho_pi", model.rho_pi.to_string()),
        ("model.sigma", model.sigma.to_string()),
        ("model.sigma_pi", model.sigma_pi.to_string()),
        ("model.kappa", model.kappa.to_string()),
        ("model.pi_bar", model.pi_bar.to_string()),
        ("mix.lambda", mix.lambda.to_string()),
        ("mix.mu", mix.mu.to_string()),
        ("run.map", run.map.name().to_string()),
        ("run.steps", run.steps.to_string()),
        ("run.burn_in", run.burn_in.to_string()),
        ("run.e0", run.e0.to_string()),
        ("run.lambda0", run.lambda0.to_string()),
        ("run.lyapunov_steps", run.lyapunov_steps.to_string()),
        ("sweep.parameter", sweep.parameter.name().to_string()),
        ("sweep.lo", sweep.lo.to_string()),
        ("sweep.hi", sweep.hi.to_string()),
        ("sweep.grid_points", sweep.grid_points.to_string()),
        ("sweep.tie_sigma_pi", sweep.tie_sigma_pi.to_string()),
        ("sweep.continuation", sweep.continuation.to_string()),
        ("sweep.max_period", sweep.max_period.to_string()),
        ("sweep.period_tol", sweep.period_tol.to_string()),
        ("scan.grid_n", scan_grid.to_string()),
        ("cobweb.steps", cobweb_steps.to_string()),
        ("cobweb.curve_grid", cobweb_curve_grid.to_string()),
        ("tol.denominator", t.denominator.to_string()),
        ("tol.weight", t.weight.to_string()),
        ("tol.kink", t.kink.to_string()),
        ("tol.fd_step", t.fd_step.to_string()),
        ("tol.domain", t.domain.to_string()),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();

    Ok(RunConfig {
        experiment,
        preset,
        model,
        mix,
        run,
        sweep,
        scan_grid,
        cobweb_steps,
        cobweb_curve_grid,
        effective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_key_is_echoed() {
        let c = parse_config("experiment = simulate", "t").unwrap();
        let keys: Vec<&str> = c.effective.iter().map(|(k, _)| k.as_str()).collect();
        assert_eq!(keys, KEYS);
    }

    #[test]
    fn defaults_apply() {
        let c = parse_config("experiment = simulate\nmodel.sigma = 7", "t").unwrap();
        assert_eq!(c.run.burn_in, 2000);
        assert_eq!(c.run.steps, 300);
        assert_eq!(c.model.sigma_pi, 7.0);
        assert!(c.sweep.tie_sigma_pi);
        assert!(c.effective.contains(&("run.burn_in".into(), "2000".into())));
    }

    #[test]
    fn explicit_sigma_pi_unties() {
        let c = parse_config("experiment = simulate\nmodel.sigma = 7\nmodel.sigma_pi = 2", "t").unwrap();
        assert_eq!(c.model.sigma_pi, 2.0);
        assert!(!c.sweep.tie_sigma_pi);
    }

    #[test]
    fn diagnostics_carry_locations() {
        let e = parse_config("experiment = simulate\n\nmodel.rh = 1", "cfg").unwrap_err();
        assert_eq!(
            e,
            ConfigError::UnknownKey {
                origin: "cfg:3".into(),
                key: "model.rh".into()
            }
        );
        let e = parse_config("experiment = simulate\nmodel.rho = abc", "cfg").unwrap_err();
        assert!(e.to_string().starts_with("cfg:2"), "{e}");
        let e = parse_config("experiment = simulate\njunk", "cfg").unwrap_err();
        assert!(matches!(e, ConfigError::Parse { .. }));
    }

    #[test]
    fn bound_violation_names_the_field() {
        let e = parse_config("experiment = simulate\nmodel.price_education = -1", "t").unwrap_err();
        match e {
            ConfigError::Invalid { field, .. } => assert_eq!(field, "model.price_education"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn json_and_text_agree() {
        let text = "experiment = bifurcate\nmodel.rho = 1.18\nmix.lambda = 0.3\nsweep.parameter = lambda\nsweep.lo = 0\nsweep.hi = 1";
        let json = r#"{"experiment": "bifurcate", "model": {"rho": 1.18}, "mix": {"lambda": 0.3},
                       "sweep": {"parameter": "lambda", "lo": 0, "hi": 1}}"#;
        assert_eq!(parse_config(text, "a").unwrap(), parse_config(json, "b").unwrap());
        assert!(matches!(
            parse_config(r#"{"experiment": "simulate", "model": {"rhoo": 1}}"#, "j"),
            Err(ConfigError::UnknownKey { .. })
        ));
    }

    #[test]
    fn overrides_win() {
        let sources = ConfigSources {
            preset: Some("fig3"),
            overrides: vec!["model.sigma=10", "run.steps=20"],
            ..Default::default()
        };
        let c = load_config(&sources).unwrap();
        assert_eq!(c.model.sigma, 10.0);
        assert_eq!(c.model.sigma_pi, 10.0);
        assert_eq!(c.run.steps, 20);
        assert_eq!(c.preset.as_deref(), Some("fig3"));
    }

    #[test]
    fn all_presets_parse() {
        for (name, _) in presets() {
            let sources = ConfigSources {
                preset: Some(name),
                ..Default::default()
            };
            load_config(&sources).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn fig1b_preset_has_the_baseline_calibration() {
        let c = load_config(&ConfigSources {
            preset: Some("fig1b"),
            ..Default::default()
        })
        .unwrap();
        let m = &c.model;
        assert_eq!(
            (m.rho, m.income, m.price_education, m.price_consumption, m.kappa, m.pi_bar),
            (0.98, 1.0, 1.2, 0.53, 0.3, 100.0)
        );
        assert_eq!(c.mix.lambda, 0.5);
        assert_eq!(m.rho_pi, 0.0);
        assert_eq!(c.experiment, Experiment::Bifurcate);
        assert_eq!(c.sweep.parameter, Param::Sigma);
        assert!(c.sweep.tie_sigma_pi);
    }
}
