//! Monte Carlo precision studies.
//!
//! An [`ExperimentSpec`] describes a grid of cells `(rate, sigma_n,
//! multiplier)`. Each cell runs `trials` independent noisy realisations of the
//! model; every configured estimator sees the same noisy spectrum and the same
//! window within a trial. The noise stream for trial `t` depends only on the
//! master seed, the cell's rate and noise level, and `t`, so trials can run in
//! any order or on any number of threads. Per-trial results are reduced in
//! trial order, which makes the statistics bit-identical between runs.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::{IterationConfig, Method};
use crate::select::select_window;
use crate::signal::{sigma_n_for_snr, NoiseConfig, SignalModel, Spectrum};

pub const DEFAULT_TRIALS: usize = 5000;
pub const DEFAULT_SEED: u64 = 0x5eed_2020;

/// Noise levels of the SNR study (14 dB ... 46 dB for a unit peak).
pub const SNR_SWEEP_SIGMA_N: [f64; 7] = [0.2, 0.15, 0.1, 0.05, 0.025, 0.01, 0.005];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    /// Precision against noise level at rate 10, threshold 0.5 sigma_n.
    Snr,
    /// Precision against sampling rate 3..=10 at sigma_n = 0.025.
    Rate,
    /// Precision against selection threshold 0.1..=3.5 sigma_n at 20 dB.
    Threshold,
}

impl Sweep {
    pub fn name(self) -> &'static str {
        match self {
            Sweep::Snr => "snr-sweep",
            Sweep::Rate => "rate-sweep",
            Sweep::Threshold => "threshold-sweep",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "snr-sweep" => Some(Sweep::Snr),
            "rate-sweep" => Some(Sweep::Rate),
            "threshold-sweep" => Some(Sweep::Threshold),
            _ => None,
        }
    }

    pub fn default_spec(self) -> ExperimentSpec {
        match self {
            Sweep::Snr => ExperimentSpec::snr_sweep(),
            Sweep::Rate => ExperimentSpec::rate_sweep(),
            Sweep::Threshold => ExperimentSpec::threshold_sweep(),
        }
    }
}

/// Configuration of a Monte Carlo study.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub model: SignalModel,
    pub x_start: f64,
    pub x_end: f64,
    pub rates: Vec<f64>,
    pub sigma_n_levels: Vec<f64>,
    /// Selection threshold is `multiplier * sigma_n`.
    pub threshold_multipliers: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    pub estimators: Vec<Method>,
    pub iteration: IterationConfig,
}

impl ExperimentSpec {
    /// Unit Gaussian at 5 with width 0.2 on [0, 10], sampled at rate 10 with
    /// threshold 0.5 sigma_n. Every sweep starts from this.
    fn base() -> Self {
        Self {
            model: SignalModel::gaussian(1.0, 5.0, 0.2).expect("valid default model"),
            x_start: 0.0,
            x_end: 10.0,
            rates: vec![10.0],
            sigma_n_levels: vec![0.025],
            threshold_multipliers: vec![0.5],
            trials: DEFAULT_TRIALS,
            master_seed: DEFAULT_SEED,
            estimators: Method::ALL.to_vec(),
            iteration: IterationConfig::default(),
        }
    }

    pub fn snr_sweep() -> Self {
        Self {
            sigma_n_levels: SNR_SWEEP_SIGMA_N.to_vec(),
            ..Self::base()
        }
    }

    pub fn rate_sweep() -> Self {
        Self {
            rates: (3..=10).map(f64::from).collect(),
            ..Self::base()
        }
    }

    pub fn threshold_sweep() -> Self {
        Self {
            sigma_n_levels: vec![sigma_n_for_snr(1.0, 20.0)],
            threshold_multipliers: default_threshold_multipliers(),
            ..Self::base()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidExperiment(msg));
        if self.trials == 0 {
            return bad("trials must be >= 1".into());
        }
        if self.rates.is_empty()
            || self.sigma_n_levels.is_empty()
            || self.threshold_multipliers.is_empty()
            || self.estimators.is_empty()
        {
            return bad("rates, noise levels, multipliers and estimators must be non-empty".into());
        }
        if let Some(r) = self.rates.iter().find(|r| !(**r > 0.0 && r.is_finite())) {
            return bad(format!("sampling rate must be > 0, got {r}"));
        }
        if let Some(s) = self.sigma_n_levels.iter().find(|s| !(**s >= 0.0 && s.is_finite())) {
            return bad(format!("noise level must be >= 0, got {s}"));
        }
        if let Some(m) = self
            .threshold_multipliers
            .iter()
            .find(|m| !(**m > 0.0 && m.is_finite()))
        {
            return bad(format!("threshold multiplier must be > 0, got {m}"));
        }
        if !(self.x_end > self.x_start) {
            return bad(format!("x_end ({}) must exceed x_start ({})", self.x_end, self.x_start));
        }
        self.iteration.validate()
    }
}

/// `0.1, 0.3, ..., 3.5`.
pub fn default_threshold_multipliers() -> Vec<f64> {
    (0..18).map(|k| f64::from(1 + 2 * k) / 10.0).collect()
}

/// Aggregated results of one estimator in one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialStats {
    pub estimator: Method,
    pub rate: f64,
    pub sigma_n: f64,
    pub multiplier: f64,
    pub trials: usize,
    pub n_ok: usize,
    pub n_failed: usize,
    pub mean: f64,
    /// `mean - mu`.
    pub bias: f64,
    /// Sample standard deviation (n - 1 denominator; 0 for a single trial).
    pub std: f64,
    pub mean_iterations: f64,
    pub median_iterations: f64,
    /// Fraction of successful trials that ended on the oscillation guard.
    pub oscillation_rate: f64,
}

#[derive(Debug, Clone, Copy)]
struct Outcome {
    x_p: f64,
    iterations: usize,
    oscillating: bool,
}

/// SplitMix64 finaliser.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Noise seed for trial `trial` of the cell at (`rate`, `sigma_n`). The
/// threshold multiplier is deliberately excluded so cells differing only in
/// threshold share their noise realisations.
pub fn trial_seed(master_seed: u64, rate: f64, sigma_n: f64, trial: u64) -> u64 {
    let mut h = splitmix64(master_seed);
    h = splitmix64(h ^ rate.to_bits());
    h = splitmix64(h ^ sigma_n.to_bits());
    splitmix64(h ^ trial)
}

fn run_trial(
    spec: &ExperimentSpec,
    clean: &Spectrum,
    rate: f64,
    sigma_n: f64,
    multiplier: f64,
    trial: usize,
) -> Vec<Option<Outcome>> {
    let noise = NoiseConfig {
        sigma_n,
        seed: trial_seed(spec.master_seed, rate, sigma_n, trial as u64),
    };
    let noisy = clean.add_noise(&noise);
    let Ok(window) = select_window(&noisy, multiplier * sigma_n) else {
        return vec![None; spec.estimators.len()];
    };
    spec.estimators
        .iter()
        .map(|m| {
            m.estimate(&window, &spec.iteration)
                .ok()
                .map(|e| Outcome {
                    x_p: e.x_p,
                    iterations: e.iterations,
                    oscillating: e.oscillating,
                })
        })
        .collect()
}

fn median(values: &mut [usize]) -> f64 {
    values.sort_unstable();
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2] as f64
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2]) as f64
    }
}

fn aggregate(
    spec: &ExperimentSpec,
    estimator: Method,
    (rate, sigma_n, multiplier): (f64, f64, f64),
    outcomes: &[Outcome],
) -> Result<TrialStats> {
    let n_ok = outcomes.len();
    if n_ok == 0 {
        return Err(Error::EmptyCell {
            rate,
            sigma_n,
            multiplier,
            estimator: estimator.name(),
        });
    }
    let n = n_ok as f64;
    let mean = outcomes.iter().map(|o| o.x_p).sum::<f64>() / n;
    let std = if n_ok > 1 {
        (outcomes.iter().map(|o| (o.x_p - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    let mut iterations: Vec<usize> = outcomes.iter().map(|o| o.iterations).collect();
    let mean_iterations = iterations.iter().sum::<usize>() as f64 / n;
    let oscillating = outcomes.iter().filter(|o| o.oscillating).count();
    Ok(TrialStats {
        estimator,
        rate,
        sigma_n,
        multiplier,
        trials: spec.trials,
        n_ok,
        n_failed: spec.trials - n_ok,
        mean,
        bias: mean - spec.model.mu(),
        std,
        mean_iterations,
        median_iterations: median(&mut iterations),
        oscillation_rate: oscillating as f64 / n,
    })
}

/// Runs every configured estimator on one cell, returning one row per
/// estimator in `spec.estimators` order.
pub fn run_cell_all(
    spec: &ExperimentSpec,
    rate: f64,
    sigma_n: f64,
    multiplier: f64,
) -> Result<Vec<TrialStats>> {
    spec.validate()?;
    let clean = spec.model.sample(spec.x_start, spec.x_end, rate)?;
    let per_trial: Vec<Vec<Option<Outcome>>> = (0..spec.trials)
        .into_par_iter()
        .map(|t| run_trial(spec, &clean, rate, sigma_n, multiplier, t))
        .collect();

    spec.estimators
        .iter()
        .enumerate()
        .map(|(k, &estimator)| {
            let outcomes: Vec<Outcome> = per_trial.iter().filter_map(|row| row[k]).collect();
            aggregate(spec, estimator, (rate, sigma_n, multiplier), &outcomes)
        })
        .collect()
}

/// Statistics of a single estimator on one cell.
pub fn run_cell(
    spec: &ExperimentSpec,
    rate: f64,
    sigma_n: f64,
    multiplier: f64,
    estimator: Method,
) -> Result<TrialStats> {
    let single = ExperimentSpec {
        estimators: vec![estimator],
        ..spec.clone()
    };
    Ok(run_cell_all(&single, rate, sigma_n, multiplier)?.remove(0))
}

/// All rows of a sweep, ordered by rate, then noise level, then multiplier,
/// then estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<TrialStats>,
}

impl SweepTable {
    pub fn get(&self, rate: f64, sigma_n: f64, multiplier: f64, estimator: Method) -> Option<&TrialStats> {
        self.rows.iter().find(|r| {
            r.estimator == estimator && r.rate == rate && r.sigma_n == sigma_n && r.multiplier == multiplier
        })
    }

    pub fn for_estimator(&self, estimator: Method) -> impl Iterator<Item = &TrialStats> {
        self.rows.iter().filter(move |r| r.estimator == estimator)
    }
}

/// Runs the full `rates x sigma_n_levels x threshold_multipliers` grid.
pub fn run_sweep(spec: &ExperimentSpec) -> Result<SweepTable> {
    spec.validate()?;
    let mut rows = Vec::new();
    for &rate in &spec.rates {
        for &sigma_n in &spec.sigma_n_levels {
            for &multiplier in &spec.threshold_multipliers {
                rows.extend(run_cell_all(spec, rate, sigma_n, multiplier)?);
            }
        }
    }
    Ok(SweepTable { rows })
}
