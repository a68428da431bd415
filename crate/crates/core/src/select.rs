//! Sample selection around the observed maximum.
//!
//! Starting at the largest sample, the window grows left and right while the
//! amplitude stays at or above the threshold. The first sub-threshold sample
//! on each side ends the walk.

use crate::error::{Error, Result};
use crate::signal::{Samples, Spectrum};

/// Location of the maximum amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArgMax {
    /// Lowest index of the run of tied maxima.
    pub index: usize,
    /// Position of the maximum; the midpoint of the tied run.
    pub position: f64,
}

/// Index and position of the largest amplitude in `samples`. A run of equal
/// consecutive maxima resolves to the midpoint of the run.
pub fn argmax_position(samples: Samples<'_>) -> ArgMax {
    let y = samples.y;
    let mut best = 0;
    for (i, &v) in y.iter().enumerate().skip(1) {
        if v > y[best] {
            best = i;
        }
    }
    let mut end = best;
    while end + 1 < y.len() && y[end + 1] == y[best] {
        end += 1;
    }
    ArgMax {
        index: best,
        position: samples.x0 + 0.5 * (best + end) as f64 * samples.dx,
    }
}

/// Contiguous above-threshold slice of a spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    source: Spectrum,
    lo: usize,
    hi: usize,
    threshold: f64,
}

// A window always holds at least three samples, so it is never empty.
#[allow(clippy::len_without_is_empty)]
impl Window {
    /// Wraps an explicit index range. Every sample in `[lo, hi]` must reach
    /// `threshold` and the range must hold at least three samples.
    pub fn new(source: Spectrum, lo: usize, hi: usize, threshold: f64) -> Result<Self> {
        if hi >= source.len() || lo > hi {
            return Err(Error::InternalLogic(format!(
                "window [{lo}, {hi}] does not fit a spectrum of {} samples",
                source.len()
            )));
        }
        if hi - lo + 1 < 3 {
            return Err(Error::TooFewSamples { len: hi - lo + 1 });
        }
        if let Some(i) = (lo..=hi).find(|&i| source.y()[i] < threshold) {
            return Err(Error::InternalLogic(format!(
                "sample {i} lies below the threshold {threshold}"
            )));
        }
        Ok(Self {
            source,
            lo,
            hi,
            threshold,
        })
    }

    /// The whole spectrum as one window, thresholded at its smallest sample.
    pub fn whole(source: Spectrum) -> Self {
        let threshold = source.y().iter().copied().fold(f64::INFINITY, f64::min);
        let hi = source.len() - 1;
        Self {
            source,
            lo: 0,
            hi,
            threshold,
        }
    }

    pub fn source(&self) -> &Spectrum {
        &self.source
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    /// The selected samples as a standalone uniform run.
    pub fn samples(&self) -> Samples<'_> {
        Samples {
            x0: self.source.x(self.lo),
            dx: self.source.dx(),
            y: &self.source.y()[self.lo..=self.hi],
        }
    }

    /// `(x_i, y_i)` for every selected sample.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.samples().iter()
    }
}

/// Selects the contiguous run around the maximum whose amplitudes are all
/// `>= threshold`.
pub fn select_window(spectrum: &Spectrum, threshold: f64) -> Result<Window> {
    let y = spectrum.y();
    let peak = argmax_position(spectrum.samples()).index;
    if y[peak] < threshold || threshold.is_nan() {
        return Err(Error::EmptyWindow {
            peak: y[peak],
            threshold,
        });
    }
    let mut lo = peak;
    while lo > 0 && y[lo - 1] >= threshold {
        lo -= 1;
    }
    let mut hi = peak;
    while hi + 1 < y.len() && y[hi + 1] >= threshold {
        hi += 1;
    }
    if hi - lo + 1 < 3 {
        return Err(Error::TooFewSamples { len: hi - lo + 1 });
    }
    Ok(Window {
        source: spectrum.clone(),
        lo,
        hi,
        threshold,
    })
}
