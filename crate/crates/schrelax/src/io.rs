//! Wavefunction data files and JSON output.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use schrelax_core::{Mesh, SolutionGrid};

/// Floor for the normalisation divisor, so an all-zero grid writes zeros.
pub const NORMALIZATION_FLOOR: f64 = 1e-300;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error("cannot encode JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] schrelax_core::Error),
}

/// Decimal places for the `x` column: enough for six significant digits
/// at the first interior point `1/(M − 1)`, and never fewer than six.
pub fn x_decimals(points: usize) -> usize {
    let mut decimals = 6;
    let mut x = 1.0 / (points.max(2) - 1) as f64;
    while x < 0.1 {
        x *= 10.0;
        decimals += 1;
    }
    decimals
}

/// `y₁` divided by `max(max|y₁|, 1e−300)`.
pub fn normalized_wavefunction(grid: &SolutionGrid) -> Vec<f64> {
    let w = grid.wavefunction();
    let scale = w.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(NORMALIZATION_FLOOR);
    w.iter().map(|v| v / scale).collect()
}

/// One `x value` line per mesh point.
pub fn format_wavefunction(grid: &SolutionGrid, mesh: &Mesh) -> Result<String, IoError> {
    grid.check_mesh(mesh)?;
    Ok(format_curve(mesh, &normalized_wavefunction(grid)))
}

pub fn format_curve(mesh: &Mesh, values: &[f64]) -> String {
    let pairs: Vec<[f64; 2]> = mesh.points().iter().zip(values).map(|(&x, &v)| [x, v]).collect();
    format_pairs(&pairs)
}

/// `x value` lines for pairs on a uniform mesh of `points.len()` points.
pub fn format_pairs(points: &[[f64; 2]]) -> String {
    let decimals = x_decimals(points.len());
    let mut out = String::with_capacity(points.len() * 24);
    for [x, v] in points {
        writeln!(out, "{x:.decimals$} {v:.8}").unwrap();
    }
    out
}

pub fn write_wavefunction(grid: &SolutionGrid, mesh: &Mesh, path: &Path) -> Result<(), IoError> {
    write_text(path, &format_wavefunction(grid, mesh)?)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::Write { path: path.to_path_buf(), source })
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, IoError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<(), IoError> {
    write_text(path, &to_json(value)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_keep_six_significant_digits() {
        assert_eq!(x_decimals(3), 6);
        assert_eq!(x_decimals(11), 6);
        assert_eq!(x_decimals(12), 7);
        assert_eq!(x_decimals(101), 7);
        assert_eq!(x_decimals(1001), 8);
    }

    #[test]
    fn zero_grid_writes_zero_column() {
        let mesh = Mesh::new(3).unwrap();
        let text = format_wavefunction(&SolutionGrid::zeros(3), &mesh).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines, ["0.000000 0.00000000", "0.500000 0.00000000", "1.000000 0.00000000"]);
        assert!(text.ends_with('\n'));
    }

    #[test]
    fn values_are_max_abs_normalized() {
        let g = SolutionGrid::from_rows(&[0.0, -4.0, 2.0, 0.0], &[0.0; 4], &[1.0; 4]).unwrap();
        assert_eq!(normalized_wavefunction(&g), vec![0.0, -1.0, 0.5, 0.0]);
    }

    #[test]
    fn mismatched_mesh_is_rejected() {
        let mesh = Mesh::new(5).unwrap();
        assert!(format_wavefunction(&SolutionGrid::zeros(4), &mesh).is_err());
    }
}
