//! Ideal symmetric single-peak signals, uniform sampling, and additive white
//! Gaussian noise.
//!
//! A [`Spectrum`] is a uniformly spaced sequence of amplitudes. Positions are
//! never stored; sample `i` sits at `x0 + i * dx`.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};

/// Relative slack applied when deciding whether a position falls on or
/// inside the sampled grid.
pub(crate) const GRID_SLACK: f64 = 1e-9;

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum ModelKind {
    Gaussian,
    /// A caller-supplied profile. It must be symmetric about the model's
    /// `mu` and non-increasing away from it.
    Custom(Evaluator),
}

impl fmt::Debug for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Gaussian => f.write_str("Gaussian"),
            ModelKind::Custom(_) => f.write_str("Custom(<fn>)"),
        }
    }
}

/// Parametric symmetric single-peak profile.
#[derive(Debug, Clone)]
pub struct SignalModel {
    kind: ModelKind,
    amplitude: f64,
    mu: f64,
    sigma: f64,
}

impl SignalModel {
    pub fn gaussian(amplitude: f64, mu: f64, sigma: f64) -> Result<Self> {
        Self::validate(amplitude, mu, sigma)?;
        Ok(Self {
            kind: ModelKind::Gaussian,
            amplitude,
            mu,
            sigma,
        })
    }

    /// Wraps an arbitrary evaluator. `amplitude`, `mu` and `sigma` are kept
    /// as metadata (true peak position for bias, nominal height and width).
    pub fn custom<F>(amplitude: f64, mu: f64, sigma: f64, evaluator: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::validate(amplitude, mu, sigma)?;
        Ok(Self {
            kind: ModelKind::Custom(Arc::new(evaluator)),
            amplitude,
            mu,
            sigma,
        })
    }

    fn validate(amplitude: f64, mu: f64, sigma: f64) -> Result<()> {
        if !(amplitude > 0.0 && amplitude.is_finite()) {
            return Err(Error::InvalidModel(format!("amplitude must be > 0, got {amplitude}")));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidModel(format!("width must be > 0, got {sigma}")));
        }
        if !mu.is_finite() {
            return Err(Error::InvalidModel(format!("peak position must be finite, got {mu}")));
        }
        Ok(())
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self.kind, ModelKind::Gaussian)
    }

    /// Amplitude of the noise-free profile at `x`.
    pub fn evaluate(&self, x: f64) -> f64 {
        match &self.kind {
            ModelKind::Gaussian => {
                let d = x - self.mu;
                self.amplitude * (-(d * d) / (2.0 * self.sigma * self.sigma)).exp()
            }
            ModelKind::Custom(f) => f(x),
        }
    }

    /// Samples the profile on the uniform grid `x_start, x_start + 1/rate, ...`
    /// up to the last grid point not beyond `x_end`.
    pub fn sample(&self, x_start: f64, x_end: f64, rate: f64) -> Result<Spectrum> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::InvalidRange(format!("sampling rate must be > 0, got {rate}")));
        }
        if !(x_end > x_start) || !x_start.is_finite() || !x_end.is_finite() {
            return Err(Error::InvalidRange(format!(
                "x_end ({x_end}) must exceed x_start ({x_start})"
            )));
        }
        let span = (x_end - x_start) * rate;
        let n = (span + GRID_SLACK).floor() as usize + 1;
        if n < 3 {
            return Err(Error::InvalidRange(format!(
                "[{x_start}, {x_end}] at rate {rate} yields {n} samples, at least 3 are required"
            )));
        }
        let dx = 1.0 / rate;
        let y = (0..n).map(|i| self.evaluate(x_start + i as f64 * dx)).collect();
        Spectrum::new(x_start, dx, y)
    }
}

/// Additive white Gaussian noise parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConfig {
    pub sigma_n: f64,
    pub seed: u64,
}

impl NoiseConfig {
    pub fn new(sigma_n: f64, seed: u64) -> Result<Self> {
        if !(sigma_n >= 0.0 && sigma_n.is_finite()) {
            return Err(Error::InvalidModel(format!("noise level must be >= 0, got {sigma_n}")));
        }
        Ok(Self { sigma_n, seed })
    }
}

/// Uniformly sampled signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    x0: f64,
    dx: f64,
    y: Vec<f64>,
}

impl Spectrum {
    pub fn new(x0: f64, dx: f64, y: Vec<f64>) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite()) || !x0.is_finite() {
            return Err(Error::InvalidSpectrum(format!(
                "need finite x0 and dx > 0, got x0 = {x0}, dx = {dx}"
            )));
        }
        if y.len() < 3 {
            return Err(Error::TooFewSamples { len: y.len() });
        }
        if let Some(i) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSpectrum(format!("amplitude {i} is not finite")));
        }
        Ok(Self { x0, dx, y })
    }

    /// Builds a spectrum from explicit positions, checking that the spacing
    /// is uniform to within `rel_tol` of the mean spacing.
    pub fn from_points(xs: &[f64], ys: &[f64], rel_tol: f64) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidSpectrum(format!(
                "{} positions but {} amplitudes",
                xs.len(),
                ys.len()
            )));
        }
        if xs.len() < 3 {
            return Err(Error::TooFewSamples { len: xs.len() });
        }
        let n = xs.len();
        let dx = (xs[n - 1] - xs[0]) / (n - 1) as f64;
        if !(dx > 0.0) {
            return Err(Error::InvalidSpectrum("positions must be strictly increasing".into()));
        }
        for (i, w) in xs.windows(2).enumerate() {
            let step = w[1] - w[0];
            if step <= 0.0 {
                return Err(Error::InvalidSpectrum(format!(
                    "positions must be strictly increasing (row {})",
                    i + 1
                )));
            }
            if ((step - dx) / dx).abs() > rel_tol {
                return Err(Error::InvalidSpectrum(format!(
                    "non-uniform grid: spacing {step} at row {} deviates from mean spacing {dx}",
                    i + 1
                )));
            }
        }
        Self::new(xs[0], dx, ys.to_vec())
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn samples(&self) -> Samples<'_> {
        Samples {
            x0: self.x0,
            dx: self.dx,
            y: &self.y,
        }
    }

    /// Returns a copy with white Gaussian noise of standard deviation
    /// `noise.sigma_n` added to every amplitude. No clipping is applied.
    pub fn add_noise(&self, noise: &NoiseConfig) -> Spectrum {
        let mut out = self.clone();
        if noise.sigma_n == 0.0 {
            return out;
        }
        let normal = Normal::new(0.0, noise.sigma_n).expect("sigma_n validated >= 0");
        let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
        for v in out.y.iter_mut() {
            *v += normal.sample(&mut rng);
        }
        out
    }

    /// Same amplitudes, every position moved by `offset`.
    pub fn shifted(&self, offset: f64) -> Spectrum {
        Spectrum {
            x0: self.x0 + offset,
            ..self.clone()
        }
    }

    pub fn scaled(&self, factor: f64) -> Spectrum {
        Spectrum {
            y: self.y.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }

    /// Mirror image about `axis`: sample `i` moves to `2 * axis - x_i`.
    pub fn reflected(&self, axis: f64) -> Spectrum {
        let last = self.x(self.len() - 1);
        Spectrum {
            x0: 2.0 * axis - last,
            dx: self.dx,
            y: self.y.iter().rev().copied().collect(),
        }
    }
}

/// Borrowed view of a uniformly spaced run of samples. Both a whole
/// [`Spectrum`] and a selected window expose one.
#[derive(Debug, Clone, Copy)]
pub struct Samples<'a> {
    pub x0: f64,
    pub dx: f64,
    pub y: &'a [f64],
}

impl<'a> Samples<'a> {
    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn first_x(&self) -> f64 {
        self.x0
    }

    pub fn last_x(&self) -> f64 {
        self.x(self.y.len().saturating_sub(1))
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + 'a {
        let (x0, dx) = (self.x0, self.dx);
        self.y
            .iter()
            .enumerate()
            .map(move |(i, &y)| (x0 + i as f64 * dx, y))
    }
}

/// `20 log10(amplitude / sigma_n)`.
pub fn snr_db(amplitude: f64, sigma_n: f64) -> Result<f64> {
    if !(sigma_n > 0.0) {
        return Err(Error::UndefinedSnr(sigma_n));
    }
    if !(amplitude > 0.0) {
        return Err(Error::InvalidModel(format!("amplitude must be > 0, got {amplitude}")));
    }
    Ok(20.0 * (amplitude / sigma_n).log10())
}

/// Noise level giving `db` decibels of SNR for a peak of height `amplitude`.
pub fn sigma_n_for_snr(amplitude: f64, db: f64) -> f64 {
    amplitude * 10f64.powf(-db / 20.0)
}
