//! Command implementations behind the binary's subcommands.

use std::fmt::Write as _;
use std::path::PathBuf;

use mimpeak::bench::{run_sweep, ExperimentSpec, Sweep, SweepTable};
use mimpeak::estimators::{residual_s, Residual};
use mimpeak::select::select_window;
use mimpeak::{IterationConfig, Method, PeakEstimate, Spectrum};

use crate::config::{self, RunManifest};
use crate::error::{CliError, Result};
use crate::report;

/// Multiplier applied to `--sigma-n` when no absolute threshold is given.
pub const DEFAULT_THRESHOLD_MULTIPLIER: f64 = 0.5;

/// Absolute selection threshold for `estimate`.
///
/// An explicit threshold wins. Otherwise a noise level turns into
/// `multiplier * sigma_n` (multiplier 0.5 unless given). With neither, every
/// non-negative sample around the maximum is kept.
pub fn resolve_threshold(
    threshold: Option<f64>,
    multiplier: Option<f64>,
    sigma_n: Option<f64>,
) -> Result<f64> {
    match (threshold, multiplier, sigma_n) {
        (Some(_), Some(_), _) => Err(CliError::Config(
            "--threshold and --threshold-multiplier are mutually exclusive".into(),
        )),
        (Some(t), None, _) => Ok(t),
        (None, m, Some(s)) => Ok(m.unwrap_or(DEFAULT_THRESHOLD_MULTIPLIER) * s),
        (None, Some(_), None) => Err(CliError::Config(
            "--threshold-multiplier needs --sigma-n".into(),
        )),
        (None, None, None) => Ok(0.0),
    }
}

#[derive(Debug, Clone)]
pub struct EstimateOutcome {
    pub method: Method,
    pub threshold: f64,
    pub window: (usize, usize),
    pub estimate: PeakEstimate,
    pub residual: Residual,
}

impl EstimateOutcome {
    pub fn to_text(&self) -> String {
        let e = &self.estimate;
        let status = if e.converged {
            "converged"
        } else if e.oscillating {
            "oscillating"
        } else {
            "not converged"
        };
        let mut out = String::new();
        let _ = writeln!(out, "method      {}", self.method);
        let _ = writeln!(out, "threshold   {}", self.threshold);
        let _ = writeln!(out, "window      [{}, {}]", self.window.0, self.window.1);
        let _ = writeln!(out, "x_p         {:.12}", e.x_p);
        let _ = writeln!(out, "iterations  {}", e.iterations);
        let _ = writeln!(out, "status      {status}");
        let _ = writeln!(out, "residual_s  {:.6e} ({} samples)", self.residual.s, self.residual.count);
        out
    }
}

pub fn estimate(
    spectrum: &Spectrum,
    method: Method,
    threshold: f64,
    cfg: &IterationConfig,
) -> Result<EstimateOutcome> {
    cfg.validate().map_err(CliError::from_core)?;
    let window = select_window(spectrum, threshold).map_err(CliError::from_core)?;
    let estimate = method.estimate(&window, cfg).map_err(CliError::from_core)?;
    let residual = residual_s(&window, estimate.x_p).map_err(CliError::Estimator)?;
    Ok(EstimateOutcome {
        method,
        threshold,
        window: (window.lo(), window.hi()),
        estimate,
        residual,
    })
}

/// Command-line values that override the config file.
#[derive(Debug, Clone, Default)]
pub struct SweepOverrides {
    pub config: Option<PathBuf>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub rates: Option<Vec<f64>>,
    pub sigma_n_levels: Option<Vec<f64>>,
    pub threshold_multipliers: Option<Vec<f64>>,
    pub estimators: Option<Vec<Method>>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
}

/// Defaults for `sweep`, then the config file, then flags.
pub fn resolve_spec(sweep: Sweep, o: &SweepOverrides) -> Result<ExperimentSpec> {
    let mut spec = match &o.config {
        Some(path) => config::load(path, sweep)?,
        None => sweep.default_spec(),
    };
    if let Some(v) = o.trials {
        spec.trials = v;
    }
    if let Some(v) = o.seed {
        spec.master_seed = v;
    }
    if let Some(v) = &o.rates {
        spec.rates = v.clone();
    }
    if let Some(v) = &o.sigma_n_levels {
        spec.sigma_n_levels = v.clone();
    }
    if let Some(v) = &o.threshold_multipliers {
        spec.threshold_multipliers = v.clone();
    }
    if let Some(v) = &o.estimators {
        spec.estimators = v.clone();
    }
    if let Some(v) = o.tol {
        spec.iteration.tol = v;
    }
    if let Some(v) = o.max_iters {
        spec.iteration.max_iters = v;
    }
    spec.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(spec)
}

/// Runs the study, writes the CSV and its manifest, and returns the table.
pub fn sweep(sweep: Sweep, spec: ExperimentSpec, out: PathBuf) -> Result<SweepTable> {
    let table = run_sweep(&spec).map_err(CliError::from_core)?;
    report::write_results(&table, &RunManifest::new(sweep, spec, out))?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_resolution() {
        assert_eq!(resolve_threshold(Some(0.2), None, Some(0.1)).unwrap(), 0.2);
        assert_eq!(resolve_threshold(None, None, Some(0.1)).unwrap(), 0.05);
        assert_eq!(resolve_threshold(None, Some(2.0), Some(0.1)).unwrap(), 0.2);
        assert_eq!(resolve_threshold(None, None, None).unwrap(), 0.0);
        assert_eq!(resolve_threshold(None, Some(2.0), None).unwrap_err().exit_code(), 5);
        assert_eq!(resolve_threshold(Some(0.1), Some(2.0), None).unwrap_err().exit_code(), 5);
    }

    #[test]
    fn flags_override_defaults() {
        let o = SweepOverrides {
            trials: Some(3),
            rates: Some(vec![4.0]),
            estimators: Some(vec![Method::Centroid]),
            ..Default::default()
        };
        let spec = resolve_spec(Sweep::Rate, &o).unwrap();
        assert_eq!(spec.trials, 3);
        assert_eq!(spec.rates, vec![4.0]);
        assert_eq!(spec.estimators, vec![Method::Centroid]);
        assert_eq!(spec.sigma_n_levels, vec![0.025]);

        let bad = SweepOverrides {
            trials: Some(0),
            ..Default::default()
        };
        assert_eq!(resolve_spec(Sweep::Rate, &bad).unwrap_err().exit_code(), 5);
    }

    #[test]
    fn estimate_errors_map_to_exit_codes() {
        let s = Spectrum::new(0.0, 1.0, vec![0.1, 0.2, 1.0, 0.2, 0.1]).unwrap();
        let cfg = IterationConfig::default();
        let err = estimate(&s, Method::Mim2, 5.0, &cfg).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let err = estimate(&s, Method::Mim2, 0.5, &cfg).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        let ok = estimate(&s, Method::Mim1, 0.0, &cfg).unwrap();
        assert!((ok.estimate.x_p - 2.0).abs() < 1e-12);
        assert!(ok.to_text().contains("converged"));
    }
}
