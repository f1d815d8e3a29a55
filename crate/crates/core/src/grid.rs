//! Mesh, solution grid and parameter types shared by every module, plus the
//! compactifying coordinate maps.
//!
//! Mesh points are numbered `k = 1..=M` in documentation and error messages;
//! the storage behind [`Mesh`] and [`SolutionGrid`] is 0-based.

use alloc::format;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::NUM_EQUATIONS;

/// Reduced mass of the hydrogen atom in eV.
pub const HYDROGEN_MU_EV: f64 = 0.5107208e6;

/// `e²` in natural units (the fine-structure constant).
pub const HYDROGEN_E2: f64 = 7.297353e-3;

/// Reduced mass used with the linear potential, GeV.
pub const LINEAR_MU_GEV: f64 = 0.75;

/// Slope of the linear potential, GeV².
pub const LINEAR_LAMBDA_GEV2: f64 = 5.0;

/// Mesh size used by the reference drivers.
pub const DEFAULT_MESH_POINTS: usize = 101;

/// `z = x / (1 − x)`: maps the compact variable back to `[0, ∞)`.
pub fn map_x_to_z(x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain { what: "map_x_to_z", value: x });
    }
    Ok(x / (1.0 - x))
}

/// `x = z / (1 + z)`: inverse of [`map_x_to_z`].
pub fn map_z_to_x(z: f64) -> Result<f64> {
    if !(z >= 0.0) || z.is_infinite() {
        return Err(Error::Domain { what: "map_z_to_x", value: z });
    }
    Ok(z / (1.0 + z))
}

/// Uniform mesh on `[0, 1]` with `M` points and `M − 1` intervals.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Mesh {
    step: f64,
    points: Vec<f64>,
}

impl Mesh {
    /// Builds `x_k = (k − 1)/(M − 1)`. Each point is computed independently
    /// (no running sum) so `x_1 = 0` and `x_M = 1` exactly.
    pub fn new(points: usize) -> Result<Self> {
        if points < 3 {
            return Err(Error::InvalidMesh(format!("need at least 3 points, got {points}")));
        }
        let intervals = (points - 1) as f64;
        let xs = (0..points).map(|k| k as f64 / intervals).collect();
        Ok(Self { step: 1.0 / intervals, points: xs })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Step size `h = 1/(M − 1)`.
    pub fn step(&self) -> f64 {
        self.step
    }

    /// Mesh coordinate at 0-based position `idx`.
    pub fn x(&self, idx: usize) -> f64 {
        self.points[idx]
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }
}

impl Default for Mesh {
    fn default() -> Self {
        Self::new(DEFAULT_MESH_POINTS).expect("default mesh size is valid")
    }
}

/// The `3 × M` unknowns: wavefunction, its derivative, and the eigenvalue
/// at every mesh point.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SolutionGrid {
    points: Vec<[f64; NUM_EQUATIONS]>,
}

impl SolutionGrid {
    pub fn new(points: Vec<[f64; NUM_EQUATIONS]>) -> Result<Self> {
        if let Some((k, _)) = points.iter().enumerate().find(|(_, p)| p.iter().any(|v| !v.is_finite())) {
            return Err(Error::InvalidSpec(format!("non-finite grid entry at mesh point k={}", k + 1)));
        }
        Ok(Self { points })
    }

    /// Grid built from three rows of equal length.
    pub fn from_rows(wave: &[f64], derivative: &[f64], eigenvalue: &[f64]) -> Result<Self> {
        if wave.len() != derivative.len() || wave.len() != eigenvalue.len() {
            return Err(Error::Shape { expected: wave.len(), found: derivative.len().min(eigenvalue.len()) });
        }
        let points = wave.iter().zip(derivative).zip(eigenvalue).map(|((&a, &b), &c)| [a, b, c]).collect();
        Self::new(points)
    }

    pub fn zeros(points: usize) -> Self {
        Self { points: alloc::vec![[0.0; NUM_EQUATIONS]; points] }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `(y₁, y₂, y₃)` at 0-based position `idx`.
    pub fn point(&self, idx: usize) -> [f64; NUM_EQUATIONS] {
        self.points[idx]
    }

    pub fn points(&self) -> &[[f64; NUM_EQUATIONS]] {
        &self.points
    }

    pub(crate) fn points_mut(&mut self) -> &mut [[f64; NUM_EQUATIONS]] {
        &mut self.points
    }

    /// Row `j` (0-based: 0 = wavefunction, 1 = derivative, 2 = eigenvalue).
    pub fn row(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(move |p| p[j])
    }

    pub fn wavefunction(&self) -> Vec<f64> {
        self.row(0).collect()
    }

    /// The eigenvalue unknown at the first mesh point.
    pub fn eigenvalue(&self) -> f64 {
        self.points[0][2]
    }

    pub fn check_mesh(&self, mesh: &Mesh) -> Result<()> {
        if self.len() != mesh.len() {
            return Err(Error::Shape { expected: mesh.len(), found: self.len() });
        }
        Ok(())
    }
}

/// Iteration controls for [`crate::relax::relax`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct RelaxConfig {
    pub itmax: usize,
    pub conv: f64,
    pub slowc: f64,
    pub scalv: [f64; NUM_EQUATIONS],
}

impl RelaxConfig {
    pub fn new(itmax: usize, conv: f64, slowc: f64, scalv: [f64; NUM_EQUATIONS]) -> Result<Self> {
        let cfg = Self { itmax, conv, slowc, scalv };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.itmax < 1 {
            return Err(Error::InvalidConfig(format!("itmax must be >= 1, got {}", self.itmax)));
        }
        if !(self.conv > 0.0) || !(self.slowc > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "conv and slowc must be positive, got conv={} slowc={}",
                self.conv, self.slowc
            )));
        }
        if self.scalv.iter().any(|s| !(*s > 0.0) || !s.is_finite()) {
            return Err(Error::InvalidConfig(format!("scalv entries must be positive, got {:?}", self.scalv)));
        }
        Ok(())
    }

    /// Reference-driver defaults: `itmax = 100`, `slowc = 1`, `conv = 1e−5`
    /// (Coulomb) or `1e−6` (linear), `scalv = (1, 1, |E₀|)` where `E₀` is the
    /// starting eigenvalue actually placed on the grid.
    pub fn for_problem(spec: &ProblemSpec, guess: f64) -> Self {
        let conv = match spec.kind() {
            PotentialKind::Coulomb => 1.0e-5,
            PotentialKind::Linear => 1.0e-6,
        };
        let start = spec.starting_eigenvalue(guess).abs();
        // scalv must stay positive for a zero guess
        let energy_scale = if start > 0.0 && start.is_finite() { start } else { 1.0 };
        Self { itmax: 100, conv, slowc: 1.0, scalv: [1.0, 1.0, energy_scale] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum PotentialKind {
    Coulomb,
    Linear,
}

/// Physical parameters of one problem.
///
/// Units follow the two reference problems: eV for Coulomb (length in eV⁻¹),
/// GeV for the linear potential. `coupling` is `e²` (or any `λ_C`) for
/// Coulomb and the slope `λ_L` for the linear potential.
///
/// Quantum numbers: for Coulomb `n` counts such that the principal quantum
/// number is `n + l`, so `E ∝ 1/(n + l)²`. For the linear potential `n` is
/// the radial excitation (`n = 1` is the lowest state for each `l`).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ProblemSpec {
    kind: PotentialKind,
    mu: f64,
    coupling: f64,
    a0: Option<f64>,
    l: u32,
    n: u32,
}

impl ProblemSpec {
    /// Coulomb problem with `a₀ = 1/(μ·coupling)`.
    pub fn coulomb(mu: f64, coupling: f64, n: u32, l: u32) -> Result<Self> {
        Self::check_common(mu, coupling, n)?;
        let a0 = 1.0 / (mu * coupling);
        Ok(Self { kind: PotentialKind::Coulomb, mu, coupling, a0: Some(a0), l, n })
    }

    /// Coulomb problem with an explicit length scale, which must equal
    /// `1/(μ·coupling)` to 1e−12 relative.
    pub fn coulomb_with_length(mu: f64, coupling: f64, a0: f64, n: u32, l: u32) -> Result<Self> {
        let spec = Self::coulomb(mu, coupling, n, l)?;
        let expected = spec.a0.unwrap_or(f64::NAN);
        if !((a0 - expected).abs() <= 1e-12 * expected.abs()) {
            return Err(Error::InvalidSpec(format!("a0={a0} inconsistent with 1/(mu*coupling)={expected}")));
        }
        Ok(Self { a0: Some(a0), ..spec })
    }

    pub fn linear(mu: f64, lambda: f64, n: u32, l: u32) -> Result<Self> {
        Self::check_common(mu, lambda, n)?;
        Ok(Self { kind: PotentialKind::Linear, mu, coupling: lambda, a0: None, l, n })
    }

    /// Hydrogen with `μ = 0.5107208e6 eV` and `e² = 7.297353e−3`.
    pub fn hydrogen(n: u32, l: u32) -> Result<Self> {
        Self::coulomb(HYDROGEN_MU_EV, HYDROGEN_E2, n, l)
    }

    /// Linear potential with `λ_L = 5 GeV²` and `μ = 0.75 GeV`.
    pub fn linear_reference(n: u32, l: u32) -> Result<Self> {
        Self::linear(LINEAR_MU_GEV, LINEAR_LAMBDA_GEV2, n, l)
    }

    fn check_common(mu: f64, coupling: f64, n: u32) -> Result<()> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::InvalidSpec(format!("mu must be positive, got {mu}")));
        }
        if !(coupling > 0.0) || !coupling.is_finite() {
            return Err(Error::InvalidSpec(format!("coupling must be positive, got {coupling}")));
        }
        if n < 1 {
            return Err(Error::InvalidSpec("n must be >= 1".into()));
        }
        Ok(())
    }

    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// Bohr radius `a₀`; `None` for the linear potential.
    pub fn a0(&self) -> Option<f64> {
        self.a0
    }

    /// `a₀` for Coulomb, `1` for linear (the linear equation carries no
    /// length rescaling).
    pub fn length_scale(&self) -> f64 {
        self.a0.unwrap_or(1.0)
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Returns a copy with different quantum numbers.
    pub fn with_quantum_numbers(&self, n: u32, l: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidSpec("n must be >= 1".into()));
        }
        Ok(Self { n, l, ..*self })
    }

    /// Eigenvalue placed on the grid for an entered guess. Coulomb guesses
    /// are ground-state energies scaled by `1/(n + l)²`; linear guesses are
    /// used as-is.
    pub fn starting_eigenvalue(&self, guess: f64) -> f64 {
        match self.kind {
            PotentialKind::Coulomb => {
                let p = f64::from(self.n + self.l);
                guess / (p * p)
            }
            PotentialKind::Linear => guess,
        }
    }

    /// Inverse of [`Self::starting_eigenvalue`].
    pub fn guess_for_eigenvalue(&self, energy: f64) -> f64 {
        match self.kind {
            PotentialKind::Coulomb => {
                let p = f64::from(self.n + self.l);
                energy * p * p
            }
            PotentialKind::Linear => energy,
        }
    }
}
