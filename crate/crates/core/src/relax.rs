//! Block-tridiagonal Newton relaxation for `N` coupled first-order ODEs on a
//! mesh, with `n₁` conditions at the left boundary and `n₂ = N − n₁` at the
//! right.
//!
//! Each mesh interval contributes a [`DifferenceBlock`]: the Jacobian of its
//! error functions with respect to the unknowns at both ends, plus the error
//! values themselves. The linearised system
//!
//! ```text
//! Σₙ S[i][n] Δy[n][k−1] + Σₙ S[i][N+n] Δy[n][k] = −E[i][k]
//! ```
//!
//! is solved block by block: Gauss–Jordan diagonalisation of the square part
//! of each block, reduction of the coupling columns into the next block, then
//! back-substitution from the right boundary. No global matrix is formed.
//!
//! Block indices handed to [`BlockProblem::block`] are 1-based:
//! `k = 1` is the left boundary, `k = 2..=M` couple mesh points `k − 1` and
//! `k`, and `k = M + 1` is the right boundary.

use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Mesh, RelaxConfig, SolutionGrid};
use crate::{NUM_EQUATIONS as N, NUM_LEFT_BC as NB, NUM_RIGHT_BC as NBF};

/// Columns of a block: `N` for the left point, `N` for the right point, one
/// for the error value.
pub const BLOCK_COLUMNS: usize = 2 * N + 1;

/// Index of the error column.
pub const ERROR_COLUMN: usize = 2 * N;

// Columns of the reduced coefficient store: NBF coupling coefficients plus
// the right-hand side.
const STORE_COLUMNS: usize = NBF + 1;
const RHS: usize = NBF;

/// One interval's Jacobian and error values.
///
/// Row `i` holds `∂E_i/∂y_{n,k−1}` in columns `0..N`, `∂E_i/∂y_{n,k}` in
/// columns `N..2N`, and `E_i` itself in column `2N`. At the left boundary
/// only the last `n₁` rows are read; at the right boundary only the first
/// `n₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct DifferenceBlock {
    rows: [[f64; BLOCK_COLUMNS]; N],
}

impl DifferenceBlock {
    pub const fn zeros() -> Self {
        Self { rows: [[0.0; BLOCK_COLUMNS]; N] }
    }

    pub const fn from_rows(rows: [[f64; BLOCK_COLUMNS]; N]) -> Self {
        Self { rows }
    }

    pub fn rows(&self) -> &[[f64; BLOCK_COLUMNS]; N] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[f64; BLOCK_COLUMNS] {
        &self.rows[i]
    }

    /// `∂E_i/∂(unknown col)`, with `col < 2N`.
    pub fn jacobian(&self, i: usize, col: usize) -> f64 {
        debug_assert!(col < ERROR_COLUMN);
        self.rows[i][col]
    }

    pub fn set_jacobian(&mut self, i: usize, col: usize, value: f64) {
        debug_assert!(col < ERROR_COLUMN);
        self.rows[i][col] = value;
    }

    pub fn error(&self, i: usize) -> f64 {
        self.rows[i][ERROR_COLUMN]
    }

    pub fn set_error(&mut self, i: usize, value: f64) {
        self.rows[i][ERROR_COLUMN] = value;
    }

    /// Sets a whole row: six Jacobian entries followed by the error.
    pub fn set_row(&mut self, i: usize, row: [f64; BLOCK_COLUMNS]) {
        self.rows[i] = row;
    }

    pub fn is_finite(&self) -> bool {
        self.rows.iter().flatten().all(|v| v.is_finite())
    }
}

impl Default for DifferenceBlock {
    fn default() -> Self {
        Self::zeros()
    }
}

/// Supplies difference blocks to the engine.
///
/// `k` is 1-based (see the module docs). The engine asks for every `k` in
/// `1..=M+1` exactly once per iteration, in increasing order.
pub trait BlockProblem {
    fn block(&self, k: usize, mesh: &Mesh, grid: &SolutionGrid) -> Result<DifferenceBlock>;
}

impl<F> BlockProblem for F
where
    F: Fn(usize, &Mesh, &SolutionGrid) -> Result<DifferenceBlock>,
{
    fn block(&self, k: usize, mesh: &Mesh, grid: &SolutionGrid) -> Result<DifferenceBlock> {
        self(k, mesh, grid)
    }
}

/// Result of [`relax`]. Non-convergence is reported here, not as an error.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct RelaxOutcome {
    pub grid: SolutionGrid,
    pub iterations: usize,
    pub final_err: f64,
    pub converged: bool,
}

/// Requests blocks `1..=M+1` from `problem` for the current grid.
pub fn assemble_blocks<P: BlockProblem + ?Sized>(
    problem: &P,
    mesh: &Mesh,
    grid: &SolutionGrid,
) -> Result<Vec<DifferenceBlock>> {
    grid.check_mesh(mesh)?;
    (1..=mesh.len() + 1).map(|k| problem.block(k, mesh, grid)).collect()
}

/// Solves the linearised system for the corrections `Δy` (one `[Δy₁, Δy₂,
/// Δy₃]` per mesh point), given the `M + 1` blocks of a mesh with `M`
/// points.
pub fn solve_block_system(blocks: &[DifferenceBlock]) -> Result<Vec<[f64; N]>> {
    if blocks.len() < 3 {
        return Err(Error::InvalidMesh(alloc::format!("need at least 3 blocks (2 mesh points), got {}", blocks.len())));
    }
    let points = blocks.len() - 1;
    let mut elim = Elimination::new(points);
    for (idx, block) in blocks.iter().enumerate() {
        elim.push(idx, block)?;
    }
    Ok(elim.back_substitute())
}

/// Damped Newton relaxation of `initial` until the mean scaled correction
/// drops below `config.conv` or `config.itmax` iterations pass.
///
/// Each iteration computes
/// `err = Σ_j Σ_k |Δy_{j,k}| / scalv_j / (N·M)` and applies
/// `y ← y + (slowc / max(slowc, err))·Δy`. If every error function is
/// already exactly zero, the correction is zero and the system is not
/// factorised (it may be singular there, e.g. for a zero wavefunction).
pub fn relax<P: BlockProblem + ?Sized>(
    problem: &P,
    mesh: &Mesh,
    initial: &SolutionGrid,
    config: &RelaxConfig,
) -> Result<RelaxOutcome> {
    config.validate()?;
    initial.check_mesh(mesh)?;

    let mut grid = initial.clone();
    let points = mesh.len();
    let mut err = f64::INFINITY;

    for iteration in 1..=config.itmax {
        let blocks = assemble_blocks(problem, mesh, &grid)?;
        if let Some(k) = blocks.iter().position(|b| !b.is_finite()) {
            return Err(Error::InvalidSpec(alloc::format!("problem produced a non-finite block at k={}", k + 1)));
        }
        let homogeneous = blocks.iter().all(|b| (0..N).all(|i| b.error(i) == 0.0));
        let corrections = if homogeneous { alloc::vec![[0.0; N]; points] } else { solve_block_system(&blocks)? };

        let mut sums = [0.0; N];
        for point in &corrections {
            for (sum, value) in sums.iter_mut().zip(point) {
                *sum += value.abs();
            }
        }
        err = sums.iter().zip(&config.scalv).map(|(s, scale)| s / scale).sum::<f64>() / (N * points) as f64;

        if !err.is_finite() {
            return Ok(RelaxOutcome { grid, iterations: iteration, final_err: err, converged: false });
        }

        let factor = config.slowc / config.slowc.max(err);
        for (point, delta) in grid.points_mut().iter_mut().zip(&corrections) {
            for (value, d) in point.iter_mut().zip(delta) {
                *value += factor * d;
            }
        }
        if grid.points().iter().flatten().any(|v| !v.is_finite()) {
            return Ok(RelaxOutcome { grid, iterations: iteration, final_err: f64::INFINITY, converged: false });
        }

        if err < config.conv {
            return Ok(RelaxOutcome { grid, iterations: iteration, final_err: err, converged: true });
        }
    }

    Ok(RelaxOutcome { grid, iterations: config.itmax, final_err: err, converged: false })
}

type Store = [[f64; STORE_COLUMNS]; N];

/// Reduced coefficients for each block, filled left to right.
struct Elimination {
    points: usize,
    store: Vec<Store>,
}

// Column layout of a block (0-based):
//   0..NB            unknowns at k−1 already fixed by the previous block
//   NB..N            remaining unknowns at k−1
//   N..N+NB          unknowns at k pivoted inside this block
//   N+NB..2N         unknowns at k coupled to the next block
//   2N               error
const FIXED_PREV: core::ops::RangeInclusive<usize> = 0..=NB - 1;
const FREE_PREV_START: usize = NB;
const FREE_PREV_END: usize = N - 1;
const LEFT_PIVOT_START: usize = N;
const LEFT_PIVOT_END: usize = N + NB - 1;
const COUPLED_START: usize = N + NB;
const COUPLED_END: usize = 2 * N - 1;

impl Elimination {
    fn new(points: usize) -> Self {
        Self { points, store: alloc::vec![[[0.0; STORE_COLUMNS]; N]; points + 1] }
    }

    /// Feeds the block at 0-based position `idx` (1-based `k = idx + 1`).
    fn push(&mut self, idx: usize, block: &DifferenceBlock) -> Result<()> {
        let mut s = *block.rows();
        if idx == 0 {
            // left boundary: last NB rows, pivot on y_{·,1} columns
            self.pivot(&mut s, NBF, N - 1, LEFT_PIVOT_START, 0, idx)
        } else if idx < self.points {
            self.reduce(&mut s, 0, N - 1, FIXED_PREV, FREE_PREV_START, FREE_PREV_END, idx - 1);
            self.pivot(&mut s, 0, N - 1, FREE_PREV_START, 0, idx)
        } else {
            // right boundary: first NBF rows
            self.reduce(&mut s, 0, NBF - 1, LEFT_PIVOT_START..=LEFT_PIVOT_END, COUPLED_START, COUPLED_END, idx - 1);
            self.pivot(&mut s, 0, NBF - 1, COUPLED_START, RHS, idx)
        }
    }

    /// Subtracts the already-reduced rows of block `prev` from rows
    /// `row_lo..=row_hi` of `s`, eliminating the columns in `eliminate` and
    /// updating columns `keep_lo..=keep_hi` plus the error column.
    #[allow(clippy::too_many_arguments)]
    fn reduce(
        &self,
        s: &mut [[f64; BLOCK_COLUMNS]; N],
        row_lo: usize,
        row_hi: usize,
        eliminate: core::ops::RangeInclusive<usize>,
        keep_lo: usize,
        keep_hi: usize,
        prev: usize,
    ) {
        let reduced = &self.store[prev];
        for (offset, j) in eliminate.enumerate() {
            let from = &reduced[NBF + offset];
            for l in keep_lo..=keep_hi {
                let vx = from[l - keep_lo];
                for row in s.iter_mut().take(row_hi + 1).skip(row_lo) {
                    row[l] -= row[j] * vx;
                }
            }
            let vx = from[RHS];
            for row in s.iter_mut().take(row_hi + 1).skip(row_lo) {
                row[ERROR_COLUMN] -= row[j] * vx;
            }
        }
    }

    /// Gauss–Jordan on rows `row_lo..=row_hi` over the square column window
    /// starting at `col_lo`, with implicit row scaling. The columns after the
    /// window are written to the store at `store_col..`.
    fn pivot(
        &mut self,
        s: &mut [[f64; BLOCK_COLUMNS]; N],
        row_lo: usize,
        row_hi: usize,
        col_lo: usize,
        store_col: usize,
        idx: usize,
    ) -> Result<()> {
        let col_hi = col_lo + row_hi - row_lo;
        let singular = Error::SingularBlock { k: idx + 1 };

        let mut scale = [0.0; N];
        let mut pivot_col: [Option<usize>; N] = [None; N];
        for i in row_lo..=row_hi {
            let big = s[i][col_lo..=col_hi].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            if big == 0.0 {
                return Err(singular);
            }
            scale[i] = 1.0 / big;
        }

        for _ in row_lo..=row_hi {
            let mut best = 0.0;
            let mut choice = None;
            for i in row_lo..=row_hi {
                if pivot_col[i].is_some() {
                    continue;
                }
                let mut big = 0.0;
                let mut col = col_lo;
                for j in col_lo..=col_hi {
                    if s[i][j].abs() > big {
                        big = s[i][j].abs();
                        col = j;
                    }
                }
                if big * scale[i] > best {
                    best = big * scale[i];
                    choice = Some((i, col));
                }
            }
            let (prow, pcol) = choice.ok_or(singular.clone())?;
            if s[prow][pcol] == 0.0 {
                return Err(singular);
            }
            pivot_col[prow] = Some(pcol);

            let inv = 1.0 / s[prow][pcol];
            for v in &mut s[prow][col_lo..] {
                *v *= inv;
            }
            s[prow][pcol] = 1.0;

            let pivot_row = s[prow];
            for i in row_lo..=row_hi {
                if pivot_col[i] == Some(pcol) {
                    continue;
                }
                let factor = s[i][pcol];
                if factor != 0.0 {
                    for j in col_lo..BLOCK_COLUMNS {
                        s[i][j] -= factor * pivot_row[j];
                    }
                    s[i][pcol] = 0.0;
                }
            }
        }

        let tail = col_hi + 1;
        let store = &mut self.store[idx];
        for i in row_lo..=row_hi {
            let pcol = pivot_col[i].ok_or(singular.clone())?;
            let out = pcol - col_lo + row_lo;
            for j in tail..BLOCK_COLUMNS {
                store[out][j - tail + store_col] = s[i][j];
            }
        }
        Ok(())
    }

    /// Back-substitution from the right boundary. Returns `Δy` (the negated
    /// solution of `S·c = E`).
    fn back_substitute(mut self) -> Vec<[f64; N]> {
        let last = self.points - 1;
        let mut first_row = 0;
        for k in (0..=last).rev() {
            if k == 0 {
                first_row = NBF;
            }
            let (head, tail) = self.store.split_at_mut(k + 1);
            let next = &tail[0];
            let current = &mut head[k];
            for j in 0..NBF {
                let xx = next[j][RHS];
                for row in current.iter_mut().skip(first_row) {
                    row[RHS] -= row[j] * xx;
                }
            }
        }

        (0..self.points)
            .map(|k| {
                let mut delta = [0.0; N];
                for i in 0..NB {
                    delta[i] = -self.store[k][i + NBF][RHS];
                }
                for i in 0..NBF {
                    delta[i + NB] = -self.store[k + 1][i][RHS];
                }
                delta
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::cell::RefCell;
    use std::vec;

    /// Each unknown appears in exactly one equation with coefficient 1.
    fn identity_blocks(points: usize, errors: &[[f64; N]]) -> Vec<DifferenceBlock> {
        let mut blocks = Vec::new();
        let mut left = DifferenceBlock::zeros();
        left.set_jacobian(2, 3, 1.0);
        left.set_error(2, errors[0][0]);
        blocks.push(left);
        for k in 1..points {
            let mut b = DifferenceBlock::zeros();
            // rows pivot on (y2,k−1), (y3,k−1), (y1,k)
            b.set_jacobian(0, 1, 1.0);
            b.set_error(0, errors[k - 1][1]);
            b.set_jacobian(1, 2, 1.0);
            b.set_error(1, errors[k - 1][2]);
            b.set_jacobian(2, 3, 1.0);
            b.set_error(2, errors[k][0]);
            blocks.push(b);
        }
        let mut right = DifferenceBlock::zeros();
        right.set_jacobian(0, 4, 1.0);
        right.set_error(0, errors[points - 1][1]);
        right.set_jacobian(1, 5, 1.0);
        right.set_error(1, errors[points - 1][2]);
        blocks.push(right);
        blocks
    }

    #[test]
    fn identity_system_gives_negated_errors() {
        for points in [2, 3, 7] {
            let errors: Vec<[f64; N]> =
                (0..points).map(|k| [k as f64 + 0.5, -(k as f64) * 2.0 - 1.0, 3.0 + k as f64]).collect();
            let delta = solve_block_system(&identity_blocks(points, &errors)).unwrap();
            for (d, e) in delta.iter().zip(&errors) {
                for j in 0..N {
                    assert_eq!(d[j], -e[j]);
                }
            }
        }
    }

    #[test]
    fn zero_row_is_singular_with_its_index() {
        let errors = vec![[1.0; N]; 4];
        let mut blocks = identity_blocks(4, &errors);
        blocks[2] = DifferenceBlock::zeros();
        assert_eq!(solve_block_system(&blocks), Err(Error::SingularBlock { k: 3 }));
    }

    #[test]
    fn too_few_blocks_rejected() {
        assert!(solve_block_system(&[DifferenceBlock::zeros(); 2]).is_err());
    }

    #[test]
    fn pivot_ties_go_to_lowest_row() {
        // two rows, both with equal scaled magnitude: the lowest row is taken
        // first, and the result is still the exact solution
        let mut elim = Elimination::new(2);
        let mut s = [[0.0; BLOCK_COLUMNS]; N];
        s[0][4] = 2.0;
        s[0][5] = 2.0;
        s[0][6] = 4.0;
        s[1][4] = 1.0;
        s[1][5] = -1.0;
        s[1][6] = 0.0;
        elim.pivot(&mut s, 0, 1, 4, RHS, 2).unwrap();
        // x + y = 2, x − y = 0 → x = y = 1
        assert_eq!(elim.store[2][0][RHS], 1.0);
        assert_eq!(elim.store[2][1][RHS], 1.0);
    }

    #[test]
    fn relax_zero_errors_is_a_fixed_point() {
        let mesh = Mesh::new(5).unwrap();
        let grid = SolutionGrid::zeros(5);
        let problem = |_k: usize, _m: &Mesh, _g: &SolutionGrid| Ok(DifferenceBlock::zeros());
        let cfg = RelaxConfig::new(10, 1e-6, 1.0, [1.0; 3]).unwrap();
        let out = relax(&problem, &mesh, &grid, &cfg).unwrap();
        assert!(out.converged);
        assert_eq!(out.iterations, 1);
        assert_eq!(out.final_err, 0.0);
        assert_eq!(out.grid, grid);
    }

    #[test]
    fn relax_requests_each_block_once_in_order() {
        let mesh = Mesh::new(6).unwrap();
        let grid = SolutionGrid::new(vec![[1.0, 2.0, 3.0]; 6]).unwrap();
        let seen = RefCell::new(Vec::new());
        // identity Jacobian, errors equal to the current values: Newton lands
        // on zero for y1, y2 and y3 in one step
        let problem = |k: usize, m: &Mesh, g: &SolutionGrid| {
            seen.borrow_mut().push(k);
            let points = m.len();
            let e: Vec<[f64; N]> = g.points().to_vec();
            Ok(identity_blocks(points, &e)[k - 1])
        };
        let cfg = RelaxConfig::new(3, 1e-12, 1.0, [1.0; 3]).unwrap();
        let out = relax(&problem, &mesh, &grid, &cfg).unwrap();
        let order = seen.borrow();
        let per_iter: Vec<usize> = (1..=7).collect();
        assert_eq!(order.len(), per_iter.len() * out.iterations);
        for chunk in order.chunks(7) {
            assert_eq!(chunk, per_iter.as_slice());
        }
        assert!(out.converged);
        assert!(out.grid.points().iter().flatten().all(|v| *v == 0.0));
    }

    #[test]
    fn damping_limits_the_step() {
        let mesh = Mesh::new(4).unwrap();
        let grid = SolutionGrid::new(vec![[10.0, 10.0, 10.0]; 4]).unwrap();
        let problem = |k: usize, m: &Mesh, g: &SolutionGrid| Ok(identity_blocks(m.len(), g.points())[k - 1]);
        // err = 10 > slowc = 0.5: factor 0.05, so y → 9.5 after one step
        let cfg = RelaxConfig::new(1, 1e-12, 0.5, [1.0; 3]).unwrap();
        let out = relax(&problem, &mesh, &grid, &cfg).unwrap();
        assert!(!out.converged);
        assert_eq!(out.final_err, 10.0);
        for v in out.grid.points().iter().flatten() {
            assert!((v - 9.5).abs() < 1e-12);
        }
    }

    #[test]
    fn shape_mismatch_rejected() {
        let mesh = Mesh::new(4).unwrap();
        let grid = SolutionGrid::zeros(5);
        let problem = |_k: usize, _m: &Mesh, _g: &SolutionGrid| Ok(DifferenceBlock::zeros());
        let cfg = RelaxConfig::new(1, 1e-5, 1.0, [1.0; 3]).unwrap();
        assert!(matches!(relax(&problem, &mesh, &grid, &cfg), Err(Error::Shape { .. })));
    }
}
