//! Experiment configuration: a TOML file read as flat dotted keys.
//!
//! `grid.n = 96` and `[grid]\nn = 96` are the same key. Unknown keys are
//! errors. Any key can be overridden from the environment as `DIL_` followed
//! by the key upper-cased with dots turned into underscores (`DIL_GRID_N`,
//! `DIL_SWEEP_C_VALUES`); the value is parsed as a TOML value.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Value as Json};
use thiserror::Error;
use toml::Value;

use crate::lattice::GridSpec;
use crate::spectral::{EigenOptions, IndexParams};
use crate::susy::ModelSpec;

pub const ENV_PREFIX: &str = "DIL_";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed config: {0}")]
    Syntax(String),
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("`{key}` must be {expected}")]
    Type { key: String, expected: &'static str },
    #[error("`{key}`: {message}")]
    Invalid { key: String, message: String },
}

/// Known keys. `grid.L` is the only mixed-case one.
pub const KEYS: &[&str] = &[
    "grid.L",
    "grid.n",
    "model.t",
    "model.epsilon",
    "model.f1",
    "model.f1_series",
    "model.f2",
    "solver.tol",
    "solver.k",
    "index.gap_threshold",
    "index.loc_radius",
    "index.loc_min",
    "sweep.c_values",
    "convergence.n_values",
    "winding.radius",
    "winding.samples",
    "seed",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub grid: GridSpec,
    pub model: ModelSpec,
    pub solver_tol: f64,
    pub solver_k: usize,
    pub gap_threshold: f64,
    pub loc_radius: Option<f64>,
    pub loc_min: f64,
    pub c_values: Vec<f64>,
    pub convergence_n: Vec<usize>,
    pub winding_radius: f64,
    pub winding_samples: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            grid: GridSpec::desk(),
            model: ModelSpec::default(),
            solver_tol: 1e-8,
            solver_k: 10,
            gap_threshold: 0.5,
            loc_radius: None,
            loc_min: 0.95,
            c_values: vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5],
            convergence_n: vec![49, 96, 191],
            winding_radius: 1.0,
            winding_samples: 256,
            seed: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::parse(&text, std::iter::empty::<(String, String)>())
    }

    /// Parses `text` (possibly empty) and applies `DIL_*` overrides from `env`.
    pub fn parse<I, K, V>(text: &str, env: I) -> Result<Self, ConfigError>
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: AsRef<str>,
    {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Syntax(e.message().to_string()))?;
        let mut flat = BTreeMap::new();
        flatten("", &Value::Table(table), &mut flat);
        for key in flat.keys() {
            if !KEYS.contains(&key.as_str()) {
                return Err(ConfigError::UnknownKey(key.clone()));
            }
        }
        for (name, raw) in env {
            let Some(suffix) = name.as_ref().strip_prefix(ENV_PREFIX) else { continue };
            let key = KEYS
                .iter()
                .find(|k| k.to_uppercase().replace('.', "_") == suffix)
                .ok_or_else(|| ConfigError::UnknownKey(name.as_ref().to_string()))?;
            flat.insert(key.to_string(), parse_env_value(key, raw.as_ref())?);
        }
        Self::from_flat(&flat)
    }

    fn from_flat(flat: &BTreeMap<String, Value>) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        let get = |k: &str| flat.get(k);
        let half_width = get("grid.L").map(|v| real("grid.L", v)).transpose()?.unwrap_or(cfg.grid.half_width());
        let n = get("grid.n").map(|v| count("grid.n", v)).transpose()?.unwrap_or(cfg.grid.n());
        cfg.grid = GridSpec::new(half_width, n).map_err(|e| invalid(if n < 8 { "grid.n" } else { "grid.L" }, e))?;

        if let Some(v) = get("model.t") {
            cfg.model.t = real("model.t", v)?;
        }
        if let Some(v) = get("model.epsilon") {
            cfg.model.epsilon = real("model.epsilon", v)?;
        }
        if let Some(v) = get("model.f1") {
            cfg.model.f1_value = real("model.f1", v)?;
        }
        if let Some(v) = get("model.f1_series") {
            cfg.model.f1_series = reals("model.f1_series", v)?;
        }
        if let Some(v) = get("model.f2") {
            cfg.model.f2_value = real("model.f2", v)?;
        }
        cfg.model.validate().map_err(|e| invalid("model", e))?;

        if let Some(v) = get("solver.tol") {
            cfg.solver_tol = real("solver.tol", v)?;
        }
        if !(cfg.solver_tol > 0.0) {
            return Err(invalid("solver.tol", "must be positive"));
        }
        if let Some(v) = get("solver.k") {
            cfg.solver_k = count("solver.k", v)?;
        }
        if cfg.solver_k == 0 {
            return Err(invalid("solver.k", "must be at least 1"));
        }

        if let Some(v) = get("index.gap_threshold") {
            cfg.gap_threshold = real("index.gap_threshold", v)?;
        }
        if !(cfg.gap_threshold > 0.0) {
            return Err(invalid("index.gap_threshold", "must be positive"));
        }
        if let Some(v) = get("index.loc_radius") {
            let r = real("index.loc_radius", v)?;
            if !(r > 0.0 && r <= half_width) {
                return Err(invalid("index.loc_radius", format!("must lie in (0, grid.L = {half_width}], got {r}")));
            }
            cfg.loc_radius = Some(r);
        }
        if let Some(v) = get("index.loc_min") {
            cfg.loc_min = real("index.loc_min", v)?;
        }
        if !(cfg.loc_min > 0.0 && cfg.loc_min <= 1.0) {
            return Err(invalid("index.loc_min", format!("must lie in (0, 1], got {}", cfg.loc_min)));
        }

        if let Some(v) = get("sweep.c_values") {
            cfg.c_values = reals("sweep.c_values", v)?;
        }
        if let Some(c) = cfg.c_values.iter().find(|c| !(**c < 1.0)) {
            return Err(invalid("sweep.c_values", format!("every coupling must be below 1, got {c}")));
        }
        if let Some(v) = get("convergence.n_values") {
            let Value::Array(items) = v else { return Err(type_err("convergence.n_values", "a list of integers")) };
            cfg.convergence_n = items.iter().map(|x| count("convergence.n_values", x)).collect::<Result<_, _>>()?;
        }
        if let Some(&bad) = cfg.convergence_n.iter().find(|&&n| n < 8) {
            return Err(invalid("convergence.n_values", format!("every n must be >= 8, got {bad}")));
        }

        if let Some(v) = get("winding.radius") {
            cfg.winding_radius = real("winding.radius", v)?;
        }
        if !(cfg.winding_radius > 0.0) {
            return Err(invalid("winding.radius", "must be positive"));
        }
        if let Some(v) = get("winding.samples") {
            cfg.winding_samples = count("winding.samples", v)?;
        }
        if cfg.winding_samples < 64 {
            return Err(invalid("winding.samples", format!("must be >= 64, got {}", cfg.winding_samples)));
        }
        if let Some(v) = get("seed") {
            cfg.seed = count("seed", v)? as u64;
        }
        Ok(cfg)
    }

    pub fn eigen_options(&self) -> EigenOptions {
        EigenOptions { k: self.solver_k, tol: self.solver_tol, seed: self.seed, ..EigenOptions::default() }
    }

    pub fn index_params(&self) -> IndexParams {
        IndexParams {
            eigen: self.eigen_options(),
            gap_threshold: self.gap_threshold,
            loc_radius: self.loc_radius,
            loc_min: self.loc_min,
            winding_radius: self.winding_radius,
            winding_samples: self.winding_samples,
        }
    }

    /// Every key with its resolved value.
    pub fn to_flat_json(&self) -> Json {
        json!({
            "grid.L": self.grid.half_width(),
            "grid.n": self.grid.n(),
            "model.t": self.model.t,
            "model.epsilon": self.model.epsilon,
            "model.f1": self.model.f1_value,
            "model.f1_series": self.model.f1_series,
            "model.f2": self.model.f2_value,
            "solver.tol": self.solver_tol,
            "solver.k": self.solver_k,
            "index.gap_threshold": self.gap_threshold,
            "index.loc_radius": self.loc_radius.unwrap_or(self.grid.half_width() / 2.0),
            "index.loc_min": self.loc_min,
            "sweep.c_values": self.c_values,
            "convergence.n_values": self.convergence_n,
            "winding.radius": self.winding_radius,
            "winding.samples": self.winding_samples,
            "seed": self.seed,
        })
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut BTreeMap<String, Value>) {
    match v {
        Value::Table(t) => {
            for (k, v) in t {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        other => {
            out.insert(prefix.to_string(), other.clone());
        }
    }
}

fn parse_env_value(key: &str, raw: &str) -> Result<Value, ConfigError> {
    let doc = format!("v = {raw}");
    match doc.parse::<toml::Table>() {
        Ok(mut t) => Ok(t.remove("v").expect("key present")),
        // bare words fall back to strings so the type error names the key
        Err(_) => Err(type_err(key, "a TOML value")),
    }
}

fn invalid(key: &str, message: impl ToString) -> ConfigError {
    ConfigError::Invalid { key: key.to_string(), message: message.to_string() }
}

fn type_err(key: &str, expected: &'static str) -> ConfigError {
    ConfigError::Type { key: key.to_string(), expected }
}

fn real(key: &str, v: &Value) -> Result<f64, ConfigError> {
    let x = match v {
        Value::Float(f) => *f,
        Value::Integer(i) => *i as f64,
        _ => return Err(type_err(key, "a number")),
    };
    if !x.is_finite() {
        return Err(type_err(key, "a finite number"));
    }
    Ok(x)
}

fn reals(key: &str, v: &Value) -> Result<Vec<f64>, ConfigError> {
    match v {
        Value::Array(items) => items.iter().map(|x| real(key, x).map_err(|_| type_err(key, "a list of numbers"))).collect(),
        _ => Err(type_err(key, "a list of numbers")),
    }
}

fn count(key: &str, v: &Value) -> Result<usize, ConfigError> {
    match v {
        Value::Integer(i) if *i >= 0 => Ok(*i as usize),
        _ => Err(type_err(key, "a non-negative integer")),
    }
}
