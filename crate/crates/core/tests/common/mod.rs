use mimpeak::select::{select_window, Window};
use mimpeak::{NoiseConfig, SignalModel, Spectrum};
use proptest::prelude::*;

/// Parameters of one randomised noisy Gaussian instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub mu: f64,
    pub sigma: f64,
    pub rate: f64,
    pub sigma_n: f64,
    pub multiplier: f64,
    pub seed: u64,
}

impl Instance {
    pub fn spectrum(&self) -> Spectrum {
        SignalModel::gaussian(1.0, self.mu, self.sigma)
            .unwrap()
            .sample(0.0, 10.0, self.rate)
            .unwrap()
            .add_noise(&NoiseConfig::new(self.sigma_n, self.seed).unwrap())
    }

    pub fn threshold(&self) -> f64 {
        self.multiplier * self.sigma_n
    }

    pub fn window(&self) -> Option<Window> {
        select_window(&self.spectrum(), self.threshold()).ok()
    }
}

pub fn instance() -> impl Strategy<Value = Instance> {
    (4.5..5.5f64, 0.1..0.4f64, 3u32..=10, 0.005..0.1f64, 0.3..2.5f64, any::<u64>()).prop_map(
        |(mu, sigma, rate, sigma_n, multiplier, seed)| Instance {
            mu,
            sigma,
            rate: f64::from(rate),
            sigma_n,
            multiplier,
            seed,
        },
    )
}
