//! Relaxation-method solver for the radial Schrödinger equation.
//!
//! The radial equation on `r ∈ [0, ∞)` is compactified onto `x ∈ [0, 1]`
//! through `r = x / (1 − x)` and written as three coupled first-order
//! equations in `(y, y′, E)`. The eigenvalue `E` is carried as a third
//! unknown with zero derivative, so the boundary-value problem can be
//! relaxed by block-tridiagonal Newton iteration on a uniform mesh.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, JSON output and
//! the command line live in the `schrelax` companion crate.
//!
//! Layout:
//!
//! * [`grid`]: mesh, solution grid, iteration controls, physical parameters
//!   and the coordinate maps.
//! * [`relax`]: the generic block elimination and damped Newton driver.
//! * [`problems`]: difference blocks for the Coulomb and linear potentials
//!   plus the `sin²` starting profile.
//! * [`airy`] and [`oracles`]: closed-form energies and wavefunctions.
//! * [`scan`]: roughness metric, eigenvalue-guess scans and wavefunction
//!   comparison.

#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod airy;
pub mod error;
pub mod grid;
pub mod oracles;
pub mod problems;
pub mod relax;
pub mod scan;

pub use crate::error::{Error, Result};
pub use crate::grid::{map_x_to_z, map_z_to_x, Mesh, PotentialKind, ProblemSpec, RelaxConfig, SolutionGrid};
pub use crate::relax::{relax, solve_block_system, BlockProblem, DifferenceBlock, RelaxOutcome};

/// Number of coupled first-order equations: `y`, `y′` and `E`.
pub const NUM_EQUATIONS: usize = 3;

/// Boundary conditions imposed at `x = 0`.
pub const NUM_LEFT_BC: usize = 1;

/// Boundary conditions imposed at `x = 1`.
pub const NUM_RIGHT_BC: usize = NUM_EQUATIONS - NUM_LEFT_BC;
