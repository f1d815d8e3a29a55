//! Difference blocks for the compactified radial equation.
//!
//! With `y₁ = y`, `y₂ = y′`, `y₃ = E` and `q = 1 − x`, both potentials share
//!
//! ```text
//! y₁′ = y₂
//! y₂′ = −(2/q)·y₂ − B(x, y₃)·y₁ / q⁴
//! y₃′ = 0
//! ```
//!
//! with the bracket
//!
//! ```text
//! Coulomb: B = 2μa₀²·(y₃ + ((1 − x)/x)·e²/a₀) − ((1 − x)/x)²·l(l+1)
//! linear:  B = 2μ·(y₃ − (x/(1 − x))·λ)         − ((1 − x)/x)²·l(l+1)
//! ```
//!
//! Interior blocks evaluate everything at the interval midpoint, so `x = 0`
//! and `x = 1` are never substituted into `B`. Boundary conditions are
//! `y(0) = 0` on the left and `y(1) = y′(1) = 0` on the right.

use libm::{cos, sin};

use crate::error::{Error, Result};
use crate::grid::{Mesh, PotentialKind, ProblemSpec, SolutionGrid};
use crate::relax::{BlockProblem, DifferenceBlock};
use crate::NUM_EQUATIONS as N;

const PI: f64 = core::f64::consts::PI;

/// Midpoint averages over the interval between mesh points `k − 1` and `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MidpointState {
    pub x: f64,
    pub y1: f64,
    pub y2: f64,
    pub y3: f64,
}

impl MidpointState {
    /// `k` is the 1-based interior block index, `2..=M`.
    pub fn new(k: usize, mesh: &Mesh, grid: &SolutionGrid) -> Result<Self> {
        if k < 2 || k > mesh.len() {
            return Err(Error::BlockIndex { k, mesh_points: mesh.len() });
        }
        let (lo, hi) = (grid.point(k - 2), grid.point(k - 1));
        Ok(Self {
            x: 0.5 * (mesh.x(k - 2) + mesh.x(k - 1)),
            y1: 0.5 * (lo[0] + hi[0]),
            y2: 0.5 * (lo[1] + hi[1]),
            y3: 0.5 * (lo[2] + hi[2]),
        })
    }
}

/// The bracket `B(x̄, ȳ₃)` multiplying `y₁/(1 − x)⁴`.
pub fn bracket(spec: &ProblemSpec, x: f64, y3: f64) -> f64 {
    let ratio = (1.0 - x) / x;
    let centrifugal = ratio * ratio * f64::from(spec.l() * (spec.l() + 1));
    match spec.kind() {
        PotentialKind::Coulomb => {
            let a0 = spec.length_scale();
            2.0 * spec.mu() * a0 * a0 * (y3 + ratio * spec.coupling() / a0) - centrifugal
        }
        PotentialKind::Linear => 2.0 * spec.mu() * (y3 - x / (1.0 - x) * spec.coupling()) - centrifugal,
    }
}

/// Block for the Coulomb potential.
pub fn coulomb_block(k: usize, mesh: &Mesh, grid: &SolutionGrid, spec: &ProblemSpec) -> Result<DifferenceBlock> {
    if spec.kind() != PotentialKind::Coulomb {
        return Err(Error::InvalidSpec("coulomb_block needs a Coulomb spec".into()));
    }
    schrodinger_block(k, mesh, grid, spec)
}

/// Block for the linear potential: the Coulomb term becomes
/// `−(x/(1 − x))·λ` and every `a₀` factor is dropped.
pub fn linear_block(k: usize, mesh: &Mesh, grid: &SolutionGrid, spec: &ProblemSpec) -> Result<DifferenceBlock> {
    if spec.kind() != PotentialKind::Linear {
        return Err(Error::InvalidSpec("linear_block needs a linear-potential spec".into()));
    }
    schrodinger_block(k, mesh, grid, spec)
}

/// Block for whichever potential `spec` selects.
pub fn schrodinger_block(k: usize, mesh: &Mesh, grid: &SolutionGrid, spec: &ProblemSpec) -> Result<DifferenceBlock> {
    grid.check_mesh(mesh)?;
    let points = mesh.len();
    let mut block = DifferenceBlock::zeros();

    if k == 1 {
        block.set_row(2, [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, grid.point(0)[0]]);
        return Ok(block);
    }
    if k == points + 1 {
        let last = grid.point(points - 1);
        block.set_row(0, [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, last[0]]);
        block.set_row(1, [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, last[1]]);
        return Ok(block);
    }

    let mid = MidpointState::new(k, mesh, grid)?;
    let (prev, cur) = (grid.point(k - 2), grid.point(k - 1));
    let h = mesh.step();
    let q = 1.0 - mid.x;
    let q4 = q * q * q * q;
    let b = bracket(spec, mid.x, mid.y3);
    let a0 = spec.length_scale();

    // E₁ = y₁,k − y₁,k−1 − h·ȳ₂
    block.set_row(0, [-1.0, -0.5 * h, 0.0, 1.0, -0.5 * h, 0.0, cur[0] - prev[0] - h * mid.y2]);

    // E₂ = y₂,k − y₂,k−1 + (2h/q)·ȳ₂ + (h/q⁴)·B·ȳ₁
    let dy1 = h * b / (2.0 * q4);
    let dy3 = h * spec.mu() * a0 * a0 * mid.y1 / q4;
    let e2 = cur[1] - prev[1] + 2.0 * h / q * mid.y2 + h / q4 * b * mid.y1;
    block.set_row(1, [dy1, -1.0 + h / q, dy3, dy1, 1.0 + h / q, dy3, e2]);

    // E₃ = y₃,k − y₃,k−1
    block.set_row(2, [0.0, 0.0, -1.0, 0.0, 0.0, 1.0, cur[2] - prev[2]]);

    Ok(block)
}

/// A [`ProblemSpec`] as a block callback for [`crate::relax::relax`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchrodingerProblem {
    pub spec: ProblemSpec,
}

impl SchrodingerProblem {
    pub fn new(spec: ProblemSpec) -> Self {
        Self { spec }
    }
}

impl BlockProblem for SchrodingerProblem {
    fn block(&self, k: usize, mesh: &Mesh, grid: &SolutionGrid) -> Result<DifferenceBlock> {
        if k == 0 || k > mesh.len() + 1 {
            return Err(Error::BlockIndex { k, mesh_points: mesh.len() });
        }
        schrodinger_block(k, mesh, grid, &self.spec)
    }
}

/// `sin²` starting profile with its derivative and a constant eigenvalue
/// row.
///
/// The node count is `n − l` for Coulomb and `n` for the linear potential.
/// Coulomb guesses are ground-state energies and are scaled by `1/(n + l)²`;
/// linear guesses are placed on the grid unchanged. The last point is forced
/// to `y₁ = y₂ = 0`.
pub fn initial_guess(spec: &ProblemSpec, mesh: &Mesh, guess: f64) -> Result<SolutionGrid> {
    if !guess.is_finite() {
        return Err(Error::Domain { what: "initial_guess", value: guess });
    }
    let nodes = match spec.kind() {
        PotentialKind::Coulomb => {
            if spec.n() <= spec.l() {
                return Err(Error::QuantumNumbers { n: spec.n(), l: spec.l() });
            }
            spec.n() - spec.l()
        }
        PotentialKind::Linear => spec.n(),
    };
    let freq = f64::from(nodes) * PI;
    let energy = spec.starting_eigenvalue(guess);
    let last = mesh.len() - 1;

    let points = mesh
        .points()
        .iter()
        .enumerate()
        .map(|(idx, &x)| {
            if idx == last {
                return [0.0, 0.0, energy];
            }
            let (s, c) = (sin(freq * x), cos(freq * x));
            [s * s, 2.0 * freq * c * s, energy]
        })
        .collect::<alloc::vec::Vec<[f64; N]>>();
    SolutionGrid::new(points)
}
