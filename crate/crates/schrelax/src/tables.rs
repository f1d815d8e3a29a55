//! Reproduction of the published eigenvalue tables.

use std::fmt::{self, Write as _};

use serde::Serialize;

use schrelax_core::grid::DEFAULT_MESH_POINTS;
use schrelax_core::oracles::{hydrogen_energy, linear_energy};
use schrelax_core::problems::{initial_guess, SchrodingerProblem};
use schrelax_core::scan::{scan, ScanEntry};
use schrelax_core::{relax, Error, Mesh, PotentialKind, ProblemSpec, RelaxConfig};

/// `(kind, n, l, initial, numerical, exact)` as published.
pub const COMPARISON_ROWS: [(PotentialKind, u32, u32, f64, f64, f64); 5] = [
    (PotentialKind::Coulomb, 1, 0, -13.598270, -13.621142, -13.598289),
    (PotentialKind::Coulomb, 2, 0, -3.399750, -3.400535, -3.399572),
    (PotentialKind::Coulomb, 2, 1, -1.510056, -1.510060, -1.510921),
    (PotentialKind::Linear, 1, 0, 5.9719, 6.146734, 5.972379),
    (PotentialKind::Linear, 2, 0, 10.4410, 10.418742, 10.442114),
];

/// Published `n = 1` linear-potential eigenvalues for `l = 0..=5`.
pub const LINEAR_SPECTRUM: [f64; 6] = [5.9719, 8.5850, 10.8514, 12.9020, 14.9790, 16.5845];

/// Half-width and spacing of the scan placed around each published value.
pub const SPECTRUM_SCAN_HALF_WIDTH: f64 = 1.0;
pub const SPECTRUM_SCAN_STEP: f64 = 0.025;

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub potential: PotentialKind,
    pub n: u32,
    pub l: u32,
    /// Value passed as the guess; Coulomb guesses are scaled by `(n + l)²`
    /// so that the grid starts at `initial`.
    #[serde(rename = "E_guess")]
    pub guess: f64,
    pub initial: f64,
    pub published_relaxed: f64,
    pub published_exact: f64,
    pub exact: f64,
    pub converged: bool,
    pub iterations: usize,
    #[serde(rename = "relaxed_E")]
    pub relaxed: f64,
}

impl ComparisonRow {
    /// `|relaxed − published_relaxed| / |published_relaxed|`.
    pub fn deviation(&self) -> f64 {
        ((self.relaxed - self.published_relaxed) / self.published_relaxed).abs()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumRow {
    pub l: u32,
    pub published: f64,
    pub converged: bool,
    pub selected_guess: f64,
    pub selected_relaxed: f64,
    pub entries: Vec<ScanEntry>,
}

impl SpectrumRow {
    pub fn deviation(&self) -> f64 {
        ((self.selected_guess - self.published) / self.published).abs()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TablesReport {
    pub mesh_points: usize,
    pub comparison: Vec<ComparisonRow>,
    pub linear_spectrum: Vec<SpectrumRow>,
}

pub fn reference_spec(kind: PotentialKind, n: u32, l: u32) -> Result<ProblemSpec, Error> {
    match kind {
        PotentialKind::Coulomb => ProblemSpec::hydrogen(n, l),
        PotentialKind::Linear => ProblemSpec::linear_reference(n, l),
    }
}

/// Closed-form energy for the state, where one exists.
pub fn exact_energy(spec: &ProblemSpec) -> Option<f64> {
    match spec.kind() {
        PotentialKind::Coulomb => hydrogen_energy(spec.n(), spec.l(), spec).ok(),
        PotentialKind::Linear if spec.l() == 0 => linear_energy(spec.n() as usize, spec.coupling(), spec.mu()).ok(),
        PotentialKind::Linear => None,
    }
}

pub fn comparison_row(
    kind: PotentialKind,
    n: u32,
    l: u32,
    initial: f64,
    published_relaxed: f64,
    published_exact: f64,
    mesh: &Mesh,
) -> Result<ComparisonRow, Error> {
    let spec = reference_spec(kind, n, l)?;
    let guess = spec.guess_for_eigenvalue(initial);
    let start = initial_guess(&spec, mesh, guess)?;
    let config = RelaxConfig::for_problem(&spec, guess);
    let (converged, iterations, relaxed) = match relax(&SchrodingerProblem::new(spec), mesh, &start, &config) {
        Ok(out) => (out.converged, out.iterations, out.grid.eigenvalue()),
        Err(Error::SingularBlock { .. }) => (false, 0, f64::NAN),
        Err(e) => return Err(e),
    };
    Ok(ComparisonRow {
        potential: kind,
        n,
        l,
        guess,
        initial,
        published_relaxed,
        published_exact,
        exact: exact_energy(&spec).unwrap_or(f64::NAN),
        converged,
        iterations,
        relaxed,
    })
}

pub fn spectrum_row(l: u32, published: f64, mesh: &Mesh) -> Result<SpectrumRow, Error> {
    let spec = ProblemSpec::linear_reference(1, l)?;
    let steps = (2.0 * SPECTRUM_SCAN_HALF_WIDTH / SPECTRUM_SCAN_STEP).round() as usize + 1;
    match scan(&spec, mesh, None, published - SPECTRUM_SCAN_HALF_WIDTH, published + SPECTRUM_SCAN_HALF_WIDTH, steps) {
        Ok(report) => Ok(SpectrumRow {
            l,
            published,
            converged: true,
            selected_guess: report.selected_guess,
            selected_relaxed: report.selected_relaxed,
            entries: report.entries,
        }),
        Err(Error::EmptySelection { entries }) => Ok(SpectrumRow {
            l,
            published,
            converged: false,
            selected_guess: f64::NAN,
            selected_relaxed: f64::NAN,
            entries,
        }),
        Err(e) => Err(e),
    }
}

/// Runs every row at the default mesh size. Rows that fail to converge are
/// kept and flagged.
pub fn reproduce_tables() -> Result<TablesReport, Error> {
    reproduce_tables_on(&Mesh::new(DEFAULT_MESH_POINTS)?)
}

pub fn reproduce_tables_on(mesh: &Mesh) -> Result<TablesReport, Error> {
    let comparison = COMPARISON_ROWS
        .iter()
        .map(|&(kind, n, l, initial, relaxed, exact)| comparison_row(kind, n, l, initial, relaxed, exact, mesh))
        .collect::<Result<Vec<_>, _>>()?;
    let linear_spectrum = LINEAR_SPECTRUM
        .iter()
        .enumerate()
        .map(|(l, &published)| spectrum_row(l as u32, published, mesh))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TablesReport { mesh_points: mesh.len(), comparison, linear_spectrum })
}

impl fmt::Display for TablesReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        writeln!(out, "Initial, relaxed and exact eigenvalues (M = {})", self.mesh_points)?;
        writeln!(
            out,
            "{:<8} {:>2} {:>2} {:>12} {:>14} {:>14} {:>12} {:>12} {:>9}",
            "", "n", "l", "initial", "relaxed", "published relaxed", "exact", "published exact", "dev"
        )?;
        for r in &self.comparison {
            let name = match r.potential {
                PotentialKind::Coulomb => "coulomb",
                PotentialKind::Linear => "linear",
            };
            write!(
                out,
                "{:<8} {:>2} {:>2} {:>12.6} {:>14.6} {:>14.6} {:>12.6} {:>12.6} {:>8.3}%",
                name,
                r.n,
                r.l,
                r.initial,
                r.relaxed,
                r.published_relaxed,
                r.exact,
                r.published_exact,
                100.0 * r.deviation()
            )?;
            if !r.converged {
                write!(out, "  FAILED")?;
            }
            writeln!(out)?;
        }
        writeln!(out)?;
        writeln!(out, "Linear potential, n = 1 spectrum, scan +-{SPECTRUM_SCAN_HALF_WIDTH} step {SPECTRUM_SCAN_STEP}")?;
        writeln!(out, "{:>2} {:>10} {:>10} {:>12} {:>9}", "l", "published", "selected", "relaxed", "dev")?;
        for r in &self.linear_spectrum {
            write!(
                out,
                "{:>2} {:>10.4} {:>10.4} {:>12.6} {:>8.3}%",
                r.l,
                r.published,
                r.selected_guess,
                r.selected_relaxed,
                100.0 * r.deviation()
            )?;
            if !r.converged {
                write!(out, "  FAILED")?;
            }
            writeln!(out)?;
        }
        f.write_str(&out)
    }
}
