//! Peak-position estimation for symmetric single-peak sampled signals.
//!
//! The crate offers three estimators that only assume the underlying profile
//! is symmetric about its peak:
//!
//! * [`estimators::centroid`], the amplitude-weighted mean position;
//! * [`estimators::mim1`], which reflects the selected samples about the
//!   current estimate, interpolates the spectrum at the reflections, and takes
//!   the centroid of the enlarged point set;
//! * [`estimators::mim2`], which chooses the estimate minimising the squared
//!   mismatch between reflected and interpolated amplitudes.
//!
//! [`signal`] generates test spectra with additive white Gaussian noise,
//! [`select`] picks the above-threshold window around the maximum, and
//! [`bench`] runs deterministic Monte Carlo precision studies.
//!
//! ```
//! use mimpeak::{estimators, select, signal::SignalModel, IterationConfig};
//!
//! let model = SignalModel::gaussian(1.0, 5.0, 0.2).unwrap();
//! let spectrum = model.sample(0.0, 10.0, 10.0).unwrap();
//! let window = select::select_window(&spectrum, 0.0125).unwrap();
//! let est = estimators::mim2(&window, &IterationConfig::default()).unwrap();
//! assert!((est.x_p - 5.0).abs() < 1e-9);
//! ```

pub mod bench;
pub mod error;
pub mod estimators;
pub mod select;
pub mod signal;

pub use error::{Error, Result};
pub use estimators::{IterationConfig, Method, PeakEstimate};
pub use select::Window;
pub use signal::{NoiseConfig, SignalModel, Spectrum};
