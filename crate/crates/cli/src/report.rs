//! Results tables.

use std::path::Path;

use mimpeak::bench::{SweepTable, TrialStats};
use mimpeak::signal::snr_db;

use crate::config::{manifest_path, RunManifest};
use crate::error::{CliError, Result};

/// Column order of every results file.
pub const COLUMNS: [&str; 11] = [
    "estimator",
    "rate",
    "sigma_n",
    "snr_db",
    "threshold_multiplier",
    "trials",
    "n_ok",
    "bias",
    "std",
    "mean_iterations",
    "oscillation_rate",
];

fn record(row: &TrialStats, amplitude: f64) -> [String; 11] {
    // A noise-free cell has no finite SNR.
    let snr = snr_db(amplitude, row.sigma_n).unwrap_or(f64::INFINITY);
    [
        row.estimator.name().to_string(),
        row.rate.to_string(),
        row.sigma_n.to_string(),
        snr.to_string(),
        row.multiplier.to_string(),
        row.trials.to_string(),
        row.n_ok.to_string(),
        row.bias.to_string(),
        row.std.to_string(),
        row.mean_iterations.to_string(),
        row.oscillation_rate.to_string(),
    ]
}

pub fn to_csv(table: &SweepTable, amplitude: f64) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COLUMNS).expect("in-memory write");
    for row in &table.rows {
        w.write_record(record(row, amplitude)).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::Write {
        path: path.to_owned(),
        msg: e.to_string(),
    })
}

/// Writes the CSV at `manifest.output` and the manifest beside it.
pub fn write_results(table: &SweepTable, manifest: &RunManifest) -> Result<()> {
    let csv = to_csv(table, manifest.spec.model.amplitude());
    write_file(&manifest.output, &csv)?;
    write_file(&manifest_path(&manifest.output), manifest.to_text().as_bytes())
}

/// Fixed-width summary for the terminal.
pub fn summary(table: &SweepTable) -> String {
    let mut out = format!(
        "{:<9} {:>5} {:>8} {:>6} {:>6} {:>11} {:>11} {:>7} {:>6}\n",
        "method", "rate", "sigma_n", "mult", "n_ok", "bias", "std", "iters", "osc"
    );
    for r in &table.rows {
        out.push_str(&format!(
            "{:<9} {:>5} {:>8} {:>6.2} {:>6} {:>11.3e} {:>11.3e} {:>7.2} {:>6.3}\n",
            r.estimator.name(),
            r.rate,
            r.sigma_n,
            r.multiplier,
            r.n_ok,
            r.bias,
            r.std,
            r.mean_iterations,
            r.oscillation_rate
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use mimpeak::Method;

    fn row(sigma_n: f64) -> TrialStats {
        TrialStats {
            estimator: Method::Mim1,
            rate: 10.0,
            sigma_n,
            multiplier: 0.5,
            trials: 4,
            n_ok: 3,
            n_failed: 1,
            mean: 5.001,
            bias: 0.001,
            std: 0.02,
            mean_iterations: 3.5,
            median_iterations: 3.0,
            oscillation_rate: 0.0,
        }
    }

    #[test]
    fn csv_layout() {
        let table = SweepTable {
            rows: vec![row(0.1), row(0.0)],
        };
        let text = String::from_utf8(to_csv(&table, 1.0)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], COLUMNS.join(","));
        assert_eq!(lines[1], "mim1,10,0.1,20,0.5,4,3,0.001,0.02,3.5,0");
        assert!(lines[2].contains(",inf,"));
    }
}
