//! Built-in verification run by `mimpeak selfcheck`.
//!
//! The type II update is a closed-form minimiser. The oracle check rebuilds
//! that minimiser by brute force: with each sample's bracketing segment
//! frozen, the residual is an exact quadratic in the peak position, so a
//! coarse grid followed by a fine grid around the best coarse point finds
//! its argmin to well below `1e-5 dx`.

use std::fmt::Write as _;

use mimpeak::bench::{run_cell_all, ExperimentSpec};
use mimpeak::estimators::{mim2_step_with_form, residual_s_frozen, DenominatorForm};
use mimpeak::select::{argmax_position, select_window};
use mimpeak::{IterationConfig, Method, NoiseConfig, SignalModel, Window};

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> Vec<&'static str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        out
    }
}

/// Runs every check, using `form` for the closed-form step under test.
pub fn run(form: DenominatorForm) -> Report {
    Report {
        checks: vec![oracle_check(form), fixed_point_check(), determinism_check()],
    }
}

/// Minimiser of the frozen residual over `anchor +- 2 dx`.
pub fn grid_argmin(window: &Window, anchor: f64) -> f64 {
    let dx = window.source().dx();
    let scan = |centre: f64, half: f64, steps: i64| {
        let h = half / steps as f64;
        (-steps..=steps)
            .map(|k| centre + k as f64 * h)
            .map(|x| (residual_s_frozen(window, x, anchor).s, x))
            .fold((f64::INFINITY, centre), |best, cand| if cand.0 < best.0 { cand } else { best })
            .1
    };
    let coarse = scan(anchor, 2.0 * dx, 2000);
    scan(coarse, 2e-3 * dx, 2000)
}

fn oracle_windows() -> Vec<Window> {
    let mut out = Vec::new();
    for (k, &(mu, sigma_n)) in [(5.0, 0.0), (5.03, 0.01), (4.96, 0.02), (5.011, 0.05), (4.987, 0.005), (5.042, 0.03)]
        .iter()
        .enumerate()
    {
        let clean = SignalModel::gaussian(1.0, mu, 0.2)
            .and_then(|m| m.sample(0.0, 10.0, 10.0))
            .expect("valid oracle model");
        let noisy = clean.add_noise(&NoiseConfig { sigma_n, seed: 1000 + k as u64 });
        if let Ok(w) = select_window(&noisy, 0.0125_f64.max(0.5 * sigma_n)) {
            out.push(w);
        }
    }
    out
}

fn oracle_check(form: DenominatorForm) -> Check {
    let name = "mim2 stationary point";
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for w in oracle_windows() {
        let dx = w.source().dx();
        let anchor = argmax_position(w.samples()).position + 0.3 * dx;
        let Ok(closed) = mim2_step_with_form(&w, anchor, form) else {
            continue;
        };
        worst = worst.max((closed - grid_argmin(&w, anchor)).abs() / dx);
        cases += 1;
    }
    let passed = cases > 0 && worst <= 1e-5;
    let variant = match form {
        DenominatorForm::FactorTwo => "denominator 2 sum(a^2)",
        DenominatorForm::Unscaled => "denominator sum(a^2)",
    };
    let detail = if passed {
        format!("stationary point matches grid argmin ({variant}; {cases} cases, worst {worst:.1e} dx)")
    } else {
        format!("closed form with {variant} misses grid argmin by {worst:.3e} dx ({cases} cases)")
    };
    Check { name, passed, detail }
}

fn fixed_point_check() -> Check {
    let name = "noise-free fixed point";
    let result = SignalModel::gaussian(1.0, 5.0, 0.2)
        .and_then(|m| m.sample(0.0, 10.0, 10.0))
        .and_then(|s| select_window(&s, 0.0125));
    let w = match result {
        Ok(w) => w,
        Err(e) => {
            return Check {
                name,
                passed: false,
                detail: e.to_string(),
            }
        }
    };
    let mut failures = Vec::new();
    for m in Method::ALL {
        match m.estimate(&w, &IterationConfig::default()) {
            Ok(e) if (e.x_p - 5.0).abs() <= 1e-9 && e.converged => {}
            Ok(e) => failures.push(format!("{m} -> {} (converged {})", e.x_p, e.converged)),
            Err(e) => failures.push(format!("{m}: {e}")),
        }
    }
    Check {
        name,
        passed: failures.is_empty(),
        detail: if failures.is_empty() {
            "centroid, mim1 and mim2 return 5 within 1e-9".into()
        } else {
            failures.join("; ")
        },
    }
}

fn determinism_check() -> Check {
    let name = "seeded determinism";
    let spec = ExperimentSpec {
        trials: 50,
        ..ExperimentSpec::snr_sweep()
    };
    let a = run_cell_all(&spec, 10.0, 0.05, 0.5);
    let b = run_cell_all(&spec, 10.0, 0.05, 0.5);
    let passed = matches!((&a, &b), (Ok(x), Ok(y)) if x == y);
    Check {
        name,
        passed,
        detail: if passed {
            "repeated cell gives identical statistics".into()
        } else {
            format!("runs differ: {a:?} vs {b:?}")
        },
    }
}
