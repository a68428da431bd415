//! Spectrum files: UTF-8 CSV with an `x,y` header, one sample per row,
//! strictly increasing and uniformly spaced positions.

use std::path::Path;

use mimpeak::Spectrum;

use crate::error::{CliError, Result};

/// Largest accepted relative deviation of any spacing from the mean spacing.
pub const GRID_REL_TOL: f64 = 1e-6;

pub fn read_spectrum(path: &Path) -> Result<Spectrum> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_owned(),
        source,
    })?;
    parse_spectrum(&text).map_err(|msg| CliError::Parse {
        path: path.to_owned(),
        msg,
    })
}

pub fn parse_spectrum(text: &str) -> Result<Spectrum, String> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| e.to_string())?.clone();
    if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "y" {
        return Err(format!("expected header 'x,y', found '{}'", headers.iter().collect::<Vec<_>>().join(",")));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| e.to_string())?;
        let field = |k: usize| -> Result<f64, String> {
            record[k]
                .parse::<f64>()
                .map_err(|_| format!("row {}: '{}' is not a number", row + 1, &record[k]))
        };
        xs.push(field(0)?);
        ys.push(field(1)?);
    }
    Spectrum::from_points(&xs, &ys, GRID_REL_TOL).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_uniform_file() {
        let s = parse_spectrum("x,y\n0,0.1\n0.5,1\n1.0,0.2\n").unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.dx(), 0.5);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_spectrum("a,b\n0,1\n1,2\n2,3\n").unwrap_err().contains("header"));
        assert!(parse_spectrum("x,y\n0,1\n1,2\n").unwrap_err().contains("at least 3"));
        assert!(parse_spectrum("x,y\n0,1\n1,2\n2.5,3\n").unwrap_err().contains("non-uniform"));
        assert!(parse_spectrum("x,y\n0,1\n1,oops\n2,3\n").unwrap_err().contains("not a number"));
        assert!(parse_spectrum("x,y\n0,1\n1\n2,3\n").is_err());
    }

    #[test]
    fn tolerates_rounding_in_positions() {
        let s = parse_spectrum("x,y\n0,0\n0.1000000001,1\n0.2,0\n").unwrap();
        assert_eq!(s.len(), 3);
    }
}
