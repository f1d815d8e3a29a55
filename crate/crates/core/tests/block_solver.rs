//! The structured elimination against a dense LU solve of the same Newton
//! system, and the difference-block Jacobian against central differences.

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use schrelax_core::problems::{schrodinger_block, SchrodingerProblem};
use schrelax_core::relax::assemble_blocks;
use schrelax_core::{solve_block_system, DifferenceBlock, Mesh, ProblemSpec, SolutionGrid};

const N: usize = 3;

fn spec_for(linear: bool) -> ProblemSpec {
    if linear {
        ProblemSpec::linear_reference(1, 1).unwrap()
    } else {
        ProblemSpec::hydrogen(2, 1).unwrap()
    }
}

/// Smooth random grid: low-order trigonometric profiles with random
/// amplitudes and phases, and a non-constant eigenvalue row.
fn smooth_grid(mesh: &Mesh, c: &[f64; 7], energy: f64) -> SolutionGrid {
    let pts = mesh
        .points()
        .iter()
        .map(|&x| {
            let y1 = c[0] * (3.0 * x + c[1]).sin() + c[2] * x * x;
            let y2 = c[3] * (2.0 * x + c[4]).cos() + c[2];
            let y3 = energy * (1.0 + 0.1 * c[5] * (x + c[6]).sin());
            [y1, y2, y3]
        })
        .collect();
    SolutionGrid::new(pts).unwrap()
}

fn dense_system(blocks: &[DifferenceBlock]) -> (DMatrix<f64>, DVector<f64>) {
    let m = blocks.len() - 1;
    let mut a = DMatrix::zeros(N * m, N * m);
    let mut b = DVector::zeros(N * m);
    let mut row = 0;
    let mut put = |block: &DifferenceBlock, i: usize, prev: Option<usize>, cur: usize| {
        for n in 0..N {
            if let Some(p) = prev {
                a[(row, N * p + n)] = block.jacobian(i, n);
            }
            a[(row, N * cur + n)] = block.jacobian(i, N + n);
        }
        b[row] = -block.error(i);
        row += 1;
    };
    put(&blocks[0], 2, None, 0);
    for k in 2..=m {
        for i in 0..N {
            put(&blocks[k - 1], i, Some(k - 2), k - 1);
        }
    }
    for i in 0..2 {
        put(&blocks[m], i, None, m - 1);
    }
    (a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn structured_solve_matches_dense_lu(
        m in 4usize..=12,
        linear in any::<bool>(),
        c in prop::array::uniform7(-1.5f64..1.5),
        e_scale in 0.2f64..2.0,
    ) {
        let spec = spec_for(linear);
        let energy = if linear { 6.0 * e_scale } else { -3.4 * e_scale };
        let mesh = Mesh::new(m).unwrap();
        let grid = smooth_grid(&mesh, &c, energy);
        let blocks = assemble_blocks(&SchrodingerProblem::new(spec), &mesh, &grid).unwrap();

        let fast = solve_block_system(&blocks).unwrap();
        let (a, b) = dense_system(&blocks);
        let dense = a.lu().solve(&b).expect("dense system singular");

        for j in 0..N {
            let scale = (0..m).map(|k| dense[N * k + j].abs()).fold(0.0, f64::max);
            for k in 0..m {
                let (x, y) = (fast[k][j], dense[N * k + j]);
                let tol = 1e-10 * y.abs().max(scale).max(f64::MIN_POSITIVE);
                prop_assert!((x - y).abs() <= tol, "m={} j={} k={}: {} vs {}", m, j, k, x, y);
            }
        }
    }
}

fn check_jacobian(linear: bool, c: &[f64; 7], e_scale: f64, m: usize) -> Result<(), TestCaseError> {
    let spec = spec_for(linear);
    let energy = if linear { 6.0 * e_scale } else { -3.4 * e_scale };
    let mesh = Mesh::new(m).unwrap();
    let grid = smooth_grid(&mesh, c, energy);
    for k in 2..=m {
        let block = schrodinger_block(k, &mesh, &grid, &spec).unwrap();
        for col in 0..2 * N {
            let (point, var) = (if col < N { k - 2 } else { k - 1 }, col % N);
            let y = grid.point(point)[var];
            // every E is affine in any single unknown, so the central
            // difference has no truncation error and a wide step only
            // reduces cancellation
            let step = 1e-3 * y.abs().max(1.0);
            let eval = |delta: f64| {
                let mut pts = grid.points().to_vec();
                pts[point][var] += delta;
                let g = SolutionGrid::new(pts).unwrap();
                schrodinger_block(k, &mesh, &g, &spec).unwrap()
            };
            let (plus, minus) = (eval(step), eval(-step));
            for i in 0..N {
                let fd = (plus.error(i) - minus.error(i)) / (2.0 * step);
                let an = block.jacobian(i, col);
                // floating-point floor of the difference quotient itself
                let roundoff = 16.0 * f64::EPSILON * plus.error(i).abs().max(minus.error(i).abs()) / step;
                let scale = block.row(i)[..2 * N].iter().fold(0.0f64, |s, v| s.max(v.abs()));
                prop_assert!(
                    (fd - an).abs() <= 1e-6 * an.abs().max(1e-9 * scale) + roundoff,
                    "k={} i={} col={}: analytic {} fd {}",
                    k,
                    i,
                    col,
                    an,
                    fd
                );
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn coulomb_jacobian_matches_central_differences(
        c in prop::array::uniform7(-1.5f64..1.5),
        e_scale in 0.2f64..2.0,
        m in 5usize..40,
    ) {
        check_jacobian(false, &c, e_scale, m)?;
    }

    #[test]
    fn linear_jacobian_matches_central_differences(
        c in prop::array::uniform7(-1.5f64..1.5),
        e_scale in 0.2f64..2.0,
        m in 5usize..40,
    ) {
        check_jacobian(true, &c, e_scale, m)?;
    }
}
