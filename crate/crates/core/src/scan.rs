//! Eigenvalue-guess scans scored by wavefunction smoothness, and comparison
//! of relaxed wavefunctions with closed-form curves.

use alloc::vec::Vec;
use libm::sqrt;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Mesh, ProblemSpec, RelaxConfig, SolutionGrid};
use crate::problems::{initial_guess, SchrodingerProblem};
use crate::relax::relax;

/// One relaxed guess of a scan.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ScanEntry {
    #[cfg_attr(feature = "serde", serde(rename = "E_guess"))]
    pub e_guess: f64,
    pub converged: bool,
    /// NaN when the block system could not be built or solved.
    #[cfg_attr(feature = "serde", serde(rename = "relaxed_E"))]
    pub relaxed_e: f64,
    pub roughness: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ScanReport {
    /// Ordered by `e_guess` ascending.
    pub entries: Vec<ScanEntry>,
    pub selected: usize,
    pub selected_guess: f64,
    pub selected_relaxed: f64,
}

impl ScanReport {
    pub fn selected_entry(&self) -> &ScanEntry {
        &self.entries[self.selected]
    }

    /// Distance between neighbouring guesses.
    pub fn step(&self) -> f64 {
        match self.entries.as_slice() {
            [first, second, ..] => second.e_guess - first.e_guess,
            _ => 0.0,
        }
    }

    /// `min / median` roughness over converged entries; small values mean
    /// the minimum stands out from the rest of the sweep.
    pub fn minimum_contrast(&self) -> Option<f64> {
        let mut values: Vec<f64> =
            self.entries.iter().filter(|e| e.converged && e.roughness.is_finite()).map(|e| e.roughness).collect();
        if values.is_empty() {
            return None;
        }
        values.sort_by(f64::total_cmp);
        let mid = values.len() / 2;
        let median = if values.len().is_multiple_of(2) { 0.5 * (values[mid - 1] + values[mid]) } else { values[mid] };
        if median > 0.0 {
            Some(values[0] / median)
        } else {
            None
        }
    }
}

/// Sum of squared second differences of `y₁` after dividing by `max|y₁|`.
/// An all-zero wavefunction scores 0.
pub fn roughness(grid: &SolutionGrid, mesh: &Mesh) -> Result<f64> {
    grid.check_mesh(mesh)?;
    Ok(roughness_of(&grid.wavefunction()))
}

fn roughness_of(y: &[f64]) -> f64 {
    let scale = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    y.windows(3)
        .map(|w| {
            let d = (w[2] - 2.0 * w[1] + w[0]) / scale;
            d * d
        })
        .sum()
}

/// Index of the smoothest converged entry, ties going to the smaller
/// `|e_guess|`. Entries with non-finite roughness are skipped.
pub fn select(entries: &[ScanEntry]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, e) in entries.iter().enumerate() {
        if !e.converged || !e.roughness.is_finite() {
            continue;
        }
        best = match best {
            None => Some(i),
            Some(b) => {
                let cur = &entries[b];
                let better = e.roughness < cur.roughness
                    || (e.roughness == cur.roughness && e.e_guess.abs() < cur.e_guess.abs());
                Some(if better { i } else { b })
            }
        };
    }
    best
}

/// Relaxes `steps` evenly spaced guesses on `[e_min, e_max]` and selects the
/// smoothest converged result.
///
/// Guesses are in the same units the solve command takes (see
/// [`ProblemSpec::starting_eigenvalue`]). With `config = None` each guess
/// gets [`RelaxConfig::for_problem`].
pub fn scan(
    spec: &ProblemSpec,
    mesh: &Mesh,
    config: Option<&RelaxConfig>,
    e_min: f64,
    e_max: f64,
    steps: usize,
) -> Result<ScanReport> {
    if !(e_min < e_max) || !e_min.is_finite() || !e_max.is_finite() {
        return Err(Error::InvalidConfig(alloc::format!(
            "scan range must satisfy E_min < E_max, got [{e_min}, {e_max}]"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidConfig(alloc::format!("scan needs at least 2 steps, got {steps}")));
    }
    if let Some(cfg) = config {
        cfg.validate()?;
    }
    let problem = SchrodingerProblem::new(*spec);
    let span = e_max - e_min;
    let mut entries = Vec::with_capacity(steps);
    for i in 0..steps {
        let e_guess = if i == steps - 1 { e_max } else { e_min + span * i as f64 / (steps - 1) as f64 };
        let start = initial_guess(spec, mesh, e_guess)?;
        let cfg = config.copied().unwrap_or_else(|| RelaxConfig::for_problem(spec, e_guess));
        let entry = match relax(&problem, mesh, &start, &cfg) {
            Ok(out) => ScanEntry {
                e_guess,
                converged: out.converged,
                relaxed_e: spec.guess_for_eigenvalue(out.grid.eigenvalue()),
                roughness: roughness_of(&out.grid.wavefunction()),
            },
            Err(Error::SingularBlock { .. }) | Err(Error::InvalidSpec(_)) => {
                ScanEntry { e_guess, converged: false, relaxed_e: f64::NAN, roughness: f64::NAN }
            }
            Err(e) => return Err(e),
        };
        entries.push(entry);
    }
    match select(&entries) {
        Some(selected) => Ok(ScanReport {
            selected,
            selected_guess: entries[selected].e_guess,
            selected_relaxed: entries[selected].relaxed_e,
            entries,
        }),
        None => Err(Error::EmptySelection { entries }),
    }
}

/// RMS difference between `relaxed` `y₁` and `exact` after each is divided
/// by its largest-magnitude element (sign included, so a flipped curve
/// still compares equal).
pub fn compare_wavefunction(relaxed: &SolutionGrid, exact: &[f64]) -> Result<f64> {
    if relaxed.len() != exact.len() {
        return Err(Error::Shape { expected: exact.len(), found: relaxed.len() });
    }
    let a = normalized(&relaxed.wavefunction()).ok_or(Error::ComparisonUndefined)?;
    let b = normalized(exact).ok_or(Error::ComparisonUndefined)?;
    let sum: f64 = a.iter().zip(&b).map(|(p, q)| (p - q) * (p - q)).sum();
    Ok(sqrt(sum / a.len() as f64))
}

fn normalized(y: &[f64]) -> Option<Vec<f64>> {
    let peak = y.iter().copied().fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
    if peak == 0.0 || !peak.is_finite() {
        return None;
    }
    Some(y.iter().map(|v| v / peak).collect())
}
