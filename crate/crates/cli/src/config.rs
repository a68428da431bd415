//! Flat `key = value` experiment files and run manifests.
//!
//! Blank lines and lines starting with `#` are ignored. Lists are comma
//! separated. Recognised keys:
//!
//! | key | meaning |
//! |-----|---------|
//! | `amplitude`, `mu`, `sigma` | Gaussian model |
//! | `x_start`, `x_end` | sampled span |
//! | `rates` | sampling rates (samples per x unit) |
//! | `sigma_n_levels` | noise standard deviations |
//! | `threshold_multipliers` | threshold = multiplier * sigma_n |
//! | `trials` | Monte Carlo trials per cell |
//! | `seed` | master seed |
//! | `estimators` | subset of `centroid, mim1, mim2` |
//! | `tol`, `max_iters`, `interpolation` | iteration control |
//!
//! A manifest is the same format with the fully resolved experiment plus
//! `experiment`, `tool_version`, `timestamp` and `output`, so it can be fed
//! back as a config to rerun the exact same study.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use mimpeak::bench::{ExperimentSpec, Sweep};
use mimpeak::estimators::Interpolation;
use mimpeak::{Method, SignalModel};

use crate::error::{CliError, Result};

const MANIFEST_ONLY: [&str; 3] = ["tool_version", "timestamp", "output"];

fn config_err(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("line {line}: {msg}"))
}

fn parse_f64(line: usize, key: &str, v: &str) -> Result<f64> {
    v.trim()
        .parse()
        .map_err(|_| config_err(line, format!("{key}: '{}' is not a number", v.trim())))
}

fn parse_list(line: usize, key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|item| parse_f64(line, key, item)).collect()
}

fn parse_int<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| config_err(line, format!("{key}: '{}' is not a non-negative integer", v.trim())))
}

/// Overlays the keys found in `text` onto `spec`.
pub fn apply(spec: &mut ExperimentSpec, text: &str, sweep: Sweep) -> Result<()> {
    let (mut amplitude, mut mu, mut sigma) = (spec.model.amplitude(), spec.model.mu(), spec.model.sigma());
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(config_err(line, format!("expected 'key = value', found '{content}'")));
        };
        let key = key.trim();
        let value = value.trim();
        match key {
            "amplitude" => amplitude = parse_f64(line, key, value)?,
            "mu" => mu = parse_f64(line, key, value)?,
            "sigma" => sigma = parse_f64(line, key, value)?,
            "x_start" => spec.x_start = parse_f64(line, key, value)?,
            "x_end" => spec.x_end = parse_f64(line, key, value)?,
            "rates" => spec.rates = parse_list(line, key, value)?,
            "sigma_n_levels" => spec.sigma_n_levels = parse_list(line, key, value)?,
            "threshold_multipliers" => spec.threshold_multipliers = parse_list(line, key, value)?,
            "trials" => spec.trials = parse_int(line, key, value)?,
            "seed" => spec.master_seed = parse_int(line, key, value)?,
            "max_iters" => spec.iteration.max_iters = parse_int(line, key, value)?,
            "tol" => spec.iteration.tol = parse_f64(line, key, value)?,
            "estimators" => {
                spec.estimators = value
                    .split(',')
                    .map(|m| m.parse::<Method>().map_err(|e| config_err(line, e)))
                    .collect::<Result<_>>()?
            }
            "interpolation" => {
                if value != "linear" {
                    return Err(config_err(line, format!("unsupported interpolation '{value}'")));
                }
                spec.iteration.interpolation = Interpolation::Linear;
            }
            "experiment" => {
                if value != sweep.name() {
                    return Err(config_err(
                        line,
                        format!("file describes '{value}' but '{}' was requested", sweep.name()),
                    ));
                }
            }
            k if MANIFEST_ONLY.contains(&k) => {}
            other => return Err(config_err(line, format!("unknown key '{other}'"))),
        }
    }
    spec.model = SignalModel::gaussian(amplitude, mu, sigma).map_err(|e| CliError::Config(e.to_string()))?;
    Ok(())
}

/// Default spec for `sweep` overlaid with the contents of `path`.
pub fn load(path: &Path, sweep: Sweep) -> Result<ExperimentSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut spec = sweep.default_spec();
    apply(&mut spec, &text, sweep)?;
    Ok(spec)
}

/// Record written next to every results file.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub sweep: Sweep,
    pub spec: ExperimentSpec,
    pub tool_version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub output: PathBuf,
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

impl RunManifest {
    pub fn new(sweep: Sweep, spec: ExperimentSpec, output: PathBuf) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            sweep,
            spec,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
            output,
        }
    }

    /// Serialises the manifest. Floats use the shortest representation that
    /// parses back to the same value, so a reparsed manifest reproduces the
    /// run bit for bit.
    pub fn to_text(&self) -> String {
        let s = &self.spec;
        let estimators: Vec<&str> = s.estimators.iter().map(|m| m.name()).collect();
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("experiment", self.sweep.name().into());
        kv("tool_version", self.tool_version.clone());
        kv("timestamp", self.timestamp.to_string());
        kv("output", self.output.display().to_string());
        kv("amplitude", s.model.amplitude().to_string());
        kv("mu", s.model.mu().to_string());
        kv("sigma", s.model.sigma().to_string());
        kv("x_start", s.x_start.to_string());
        kv("x_end", s.x_end.to_string());
        kv("rates", join(&s.rates));
        kv("sigma_n_levels", join(&s.sigma_n_levels));
        kv("threshold_multipliers", join(&s.threshold_multipliers));
        kv("trials", s.trials.to_string());
        kv("seed", s.master_seed.to_string());
        kv("estimators", estimators.join(","));
        kv("tol", format!("{:e}", s.iteration.tol));
        kv("max_iters", s.iteration.max_iters.to_string());
        kv("interpolation", "linear".into());
        out
    }
}

/// `results.csv` -> `results.manifest`.
pub fn manifest_path(output: &Path) -> PathBuf {
    output.with_extension("manifest")
}
