//! Peak-position estimators: the centroid baseline and two iterative
//! mirroring-and-interpolating methods.
//!
//! Both iterative methods reflect every window sample about the current
//! estimate `x_p` and read the spectrum at the reflected position by linear
//! interpolation.
//!
//! * Type I takes the centroid of the original samples together with the
//!   reflected, interpolated ones. A reflection falling outside the window
//!   keeps its own amplitude.
//! * Type II picks the `x_p` that minimises
//!   `S(x_p) = sum_i (y_i^I - y_i)^2`, where `y_i^I` is the interpolated
//!   amplitude at `2 x_p - x_i`. With the bracketing segment `j(i)` frozen at
//!   the previous estimate, `S` is quadratic in `x_p` and its stationary point
//!   is
//!
//!   ```text
//!   x_p = [ sum a_i^2 (x_i + x_j) + sum a_i (y_i - y_j) ] / (2 sum a_i^2)
//!   ```
//!
//!   with `a_i = (y_{j+1} - y_j) / dx`. Samples whose reflection leaves the
//!   window are dropped from both sums.
//!
//! Type I starts at the window maximum, type II at the window centroid.
//!
//! The factor 2 in the denominator follows from differentiating `S`; it is
//! cross-checked against a brute-force grid minimisation of
//! [`residual_s_frozen`] in the tests and in `mimpeak selfcheck`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::select::{argmax_position, Window};
use crate::signal::{Samples, GRID_SLACK};

/// Denominators smaller than this in magnitude are treated as zero.
pub const DENOMINATOR_GUARD: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    /// Straight line between the two bracketing samples. Higher-order
    /// schemes would slot in here as further variants.
    #[default]
    Linear,
}

/// Stopping rule shared by both iterative estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationConfig {
    /// Iteration stops once `|x_p^(k) - x_p^(k-1)| < tol`.
    pub tol: f64,
    pub max_iters: usize,
    pub interpolation: Interpolation,
}

impl Default for IterationConfig {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iters: 100,
            interpolation: Interpolation::Linear,
        }
    }
}

impl IterationConfig {
    pub fn new(tol: f64, max_iters: usize) -> Result<Self> {
        let cfg = Self {
            tol,
            max_iters,
            interpolation: Interpolation::Linear,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidIteration(format!("tol must be > 0, got {}", self.tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidIteration("max_iters must be >= 1".into()));
        }
        Ok(())
    }
}

/// Result of one estimator run.
#[derive(Debug, Clone, PartialEq)]
pub struct PeakEstimate {
    pub x_p: f64,
    /// Number of update steps taken (0 for the centroid).
    pub iterations: usize,
    pub converged: bool,
    /// The iteration ended at `max_iters` bouncing between two values; `x_p`
    /// is then the mean of the last two iterates.
    pub oscillating: bool,
    /// Starting point `x_p^(0)`: the window maximum for type I, the window
    /// centroid for type II.
    pub initial: f64,
    /// `x_p^(1), x_p^(2), ...`; never longer than `max_iters`.
    pub history: Vec<f64>,
}

/// One window sample reflected about the current estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorPoint {
    /// Index of the originating sample within the window.
    pub origin: usize,
    pub x_mirror: f64,
    /// Equal to the originating sample's amplitude.
    pub y_mirror: f64,
    /// Lower index of the bracketing segment, `None` when out of range.
    pub interval: Option<usize>,
    pub y_interp: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Centroid,
    Mim1,
    Mim2,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Centroid, Method::Mim1, Method::Mim2];

    pub fn name(self) -> &'static str {
        match self {
            Method::Centroid => "centroid",
            Method::Mim1 => "mim1",
            Method::Mim2 => "mim2",
        }
    }

    pub fn estimate(self, window: &Window, cfg: &IterationConfig) -> Result<PeakEstimate> {
        match self {
            Method::Centroid => {
                let x_p = centroid(window)?;
                Ok(PeakEstimate {
                    x_p,
                    iterations: 0,
                    converged: true,
                    oscillating: false,
                    initial: x_p,
                    history: Vec::new(),
                })
            }
            Method::Mim1 => mim1(window, cfg),
            Method::Mim2 => mim2(window, cfg),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "centroid" => Ok(Method::Centroid),
            "mim1" => Ok(Method::Mim1),
            "mim2" => Ok(Method::Mim2),
            other => Err(format!("unknown estimator '{other}' (expected centroid, mim1 or mim2)")),
        }
    }
}

/// Amplitude-weighted mean position of `points`.
pub fn weighted_centroid<I>(points: I) -> Result<f64>
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let (num, den) = points
        .into_iter()
        .fold((0.0, 0.0), |(n, d), (x, y)| (n + x * y, d + y));
    if den.abs() < DENOMINATOR_GUARD {
        return Err(Error::DegenerateWindow(den));
    }
    Ok(num / den)
}

/// Centroid baseline, `sum x_i y_i / sum y_i` over the window.
pub fn centroid(window: &Window) -> Result<f64> {
    weighted_centroid(window.points())
}

/// Reflection of `x` about `axis`.
#[inline]
pub fn mirror(x: f64, axis: f64) -> f64 {
    2.0 * axis - x
}

/// Lower index `j` of the segment `[x_j, x_{j+1}]` holding `x`, or `None`
/// when `x` lies outside the sampled range. A position exactly on a sample
/// resolves to the segment starting there (the last sample resolves to the
/// final segment).
pub fn locate_interval(samples: Samples<'_>, x: f64) -> Option<usize> {
    let n = samples.len();
    if n < 2 || !x.is_finite() {
        return None;
    }
    let t = (x - samples.x0) / samples.dx;
    let last = (n - 1) as f64;
    if t < -GRID_SLACK || t > last + GRID_SLACK {
        return None;
    }
    Some((t.floor().max(0.0) as usize).min(n - 2))
}

/// Value at `x` of the straight line through samples `j` and `j + 1`, with
/// no range check.
#[inline]
fn segment_value(samples: Samples<'_>, j: usize, x: f64) -> f64 {
    let yj = samples.y[j];
    let slope = (samples.y[j + 1] - yj) / samples.dx;
    slope * (x - samples.x(j)) + yj
}

/// Linear interpolation between samples `j` and `j + 1` at `x`, which must lie
/// in `[x_j, x_{j+1}]`.
pub fn lerp(samples: Samples<'_>, j: usize, x: f64) -> Result<f64> {
    if j + 1 >= samples.len() {
        return Err(Error::InternalLogic(format!(
            "segment {j} does not exist in {} samples",
            samples.len()
        )));
    }
    let slack = GRID_SLACK * samples.dx;
    if !(x >= samples.x(j) - slack && x <= samples.x(j + 1) + slack) {
        return Err(Error::InternalLogic(format!(
            "{x} is outside segment [{}, {}]",
            samples.x(j),
            samples.x(j + 1)
        )));
    }
    Ok(segment_value(samples, j, x))
}

/// Reflects every window sample about `axis` and interpolates the window at
/// each reflection that stays in range.
pub fn mirror_points(window: &Window, axis: f64) -> Result<Vec<MirrorPoint>> {
    let samples = window.samples();
    samples
        .iter()
        .enumerate()
        .map(|(origin, (x, y))| {
            let x_mirror = mirror(x, axis);
            let interval = locate_interval(samples, x_mirror);
            let y_interp = interval.map(|j| lerp(samples, j, x_mirror)).transpose()?;
            Ok(MirrorPoint {
                origin,
                x_mirror,
                y_mirror: y,
                interval,
                y_interp,
            })
        })
        .collect()
}

/// One type I update: centroid of the window together with its reflections
/// about `x_prev`.
pub fn mim1_step(window: &Window, x_prev: f64) -> Result<f64> {
    let mirrored = mirror_points(window, x_prev)?;
    let reflected = mirrored
        .iter()
        .map(|m| (m.x_mirror, m.y_interp.unwrap_or(m.y_mirror)));
    weighted_centroid(window.points().chain(reflected))
}

/// Denominator variant of the type II closed form. Only
/// [`DenominatorForm::FactorTwo`] is the stationary point of the residual;
/// the other exists so the self-check can show the oracle rejects it.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenominatorForm {
    FactorTwo,
    Unscaled,
}

/// One type II update: the minimiser of the residual with bracketing segments
/// located at `x_prev`.
pub fn mim2_step(window: &Window, x_prev: f64) -> Result<f64> {
    mim2_step_with_form(window, x_prev, DenominatorForm::FactorTwo)
}

#[doc(hidden)]
pub fn mim2_step_with_form(window: &Window, x_prev: f64, form: DenominatorForm) -> Result<f64> {
    let samples = window.samples();
    let mut num = 0.0;
    let mut den = 0.0;
    let mut used = 0usize;
    for (x, y) in samples.iter() {
        let Some(j) = locate_interval(samples, mirror(x, x_prev)) else {
            continue;
        };
        let yj = samples.y[j];
        let a = (samples.y[j + 1] - yj) / samples.dx;
        num += a * a * (x + samples.x(j)) + a * (y - yj);
        den += a * a;
        used += 1;
    }
    if used == 0 {
        return Err(Error::NoOverlap);
    }
    if den < DENOMINATOR_GUARD {
        return Err(Error::FlatSpectrum);
    }
    Ok(match form {
        DenominatorForm::FactorTwo => num / (2.0 * den),
        DenominatorForm::Unscaled => num / den,
    })
}

/// Sum of squared interpolation/mirror mismatches and the number of samples
/// that contributed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub s: f64,
    pub count: usize,
}

/// `S(x_p)`: squared mismatch between interpolated and mirrored amplitudes
/// over the samples whose reflection about `x_p` stays in the window.
pub fn residual_s(window: &Window, x_p: f64) -> Result<Residual> {
    let mut s = 0.0;
    let mut count = 0;
    for m in mirror_points(window, x_p)? {
        if let Some(yi) = m.y_interp {
            s += (yi - m.y_mirror).powi(2);
            count += 1;
        }
    }
    Ok(Residual { s, count })
}

/// `S(x_p)` with each sample's bracketing segment fixed by reflecting about
/// `anchor` instead of `x_p`. The segment line is extended when `2 x_p - x_i`
/// leaves it. This is the exact quadratic the type II step minimises.
pub fn residual_s_frozen(window: &Window, x_p: f64, anchor: f64) -> Residual {
    let samples = window.samples();
    let mut s = 0.0;
    let mut count = 0;
    for (x, y) in samples.iter() {
        if let Some(j) = locate_interval(samples, mirror(x, anchor)) {
            s += (segment_value(samples, j, mirror(x, x_p)) - y).powi(2);
            count += 1;
        }
    }
    Residual { s, count }
}

fn iterate<F>(window: &Window, cfg: &IterationConfig, initial: f64, step: F) -> Result<PeakEstimate>
where
    F: Fn(&Window, f64) -> Result<f64>,
{
    cfg.validate()?;
    if !initial.is_finite() {
        return Err(Error::InternalLogic(format!("non-finite starting point {initial}")));
    }
    let mut history = Vec::with_capacity(cfg.max_iters.min(16));
    let mut prev = initial;
    for _ in 0..cfg.max_iters {
        let next = step(window, prev)?;
        if !next.is_finite() {
            return Err(Error::InternalLogic(format!("non-finite iterate after {prev}")));
        }
        history.push(next);
        if (next - prev).abs() < cfg.tol {
            return Ok(PeakEstimate {
                x_p: next,
                iterations: history.len(),
                converged: true,
                oscillating: false,
                initial,
                history,
            });
        }
        prev = next;
    }

    // Out of iterations: detect a two-cycle x^(k) ~ x^(k-2).
    let k = history.len();
    let at = |i: usize| if i == 0 { initial } else { history[i - 1] };
    let (mut x_p, mut oscillating) = (history[k - 1], false);
    if k >= 2 {
        let (a, b, c) = (at(k), at(k - 1), at(k - 2));
        if (a - c).abs() < cfg.tol && (a - b).abs() >= cfg.tol {
            x_p = 0.5 * (a + b);
            oscillating = true;
        }
    }
    Ok(PeakEstimate {
        x_p,
        iterations: k,
        converged: false,
        oscillating,
        initial,
        history,
    })
}

/// Type I mirroring-and-interpolating estimator, started at the window's
/// maximum.
pub fn mim1(window: &Window, cfg: &IterationConfig) -> Result<PeakEstimate> {
    mim1_from(window, cfg, argmax_position(window.samples()).position)
}

pub fn mim1_from(window: &Window, cfg: &IterationConfig, initial: f64) -> Result<PeakEstimate> {
    match cfg.interpolation {
        Interpolation::Linear => iterate(window, cfg, initial, mim1_step),
    }
}

/// Type II (least-squares) mirroring-and-interpolating estimator, started at
/// the window centroid.
///
/// At low SNR the frozen-segment least-squares map can have several fixed
/// points; starting on the grid-quantised maximum lands on the wrong one
/// noticeably more often than starting at the centroid.
pub fn mim2(window: &Window, cfg: &IterationConfig) -> Result<PeakEstimate> {
    mim2_from(window, cfg, centroid(window)?)
}

pub fn mim2_from(window: &Window, cfg: &IterationConfig, initial: f64) -> Result<PeakEstimate> {
    match cfg.interpolation {
        Interpolation::Linear => iterate(window, cfg, initial, mim2_step),
    }
}
