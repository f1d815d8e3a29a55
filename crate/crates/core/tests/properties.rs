use proptest::prelude::*;
use schrelax_core::airy::airy_ai;
use schrelax_core::oracles::hydrogen_energy;
use schrelax_core::problems::{initial_guess, SchrodingerProblem};
use schrelax_core::relax::assemble_blocks;
use schrelax_core::scan::{roughness, scan};
use schrelax_core::{
    map_x_to_z, map_z_to_x, relax, solve_block_system, Mesh, PotentialKind, ProblemSpec, RelaxConfig, SolutionGrid,
};

proptest! {
    #[test]
    fn mesh_is_uniform_and_closed(m in 3usize..=10001) {
        let mesh = Mesh::new(m).unwrap();
        prop_assert_eq!(mesh.len(), m);
        prop_assert_eq!(mesh.x(0), 0.0);
        prop_assert_eq!(mesh.x(m - 1), 1.0);
        let h = mesh.step();
        prop_assert!((h * (m - 1) as f64 - 1.0).abs() < 1e-15);
        for w in mesh.points().windows(2) {
            prop_assert!(((w[1] - w[0]) - h).abs() <= 1e-12 * h.max(1e-3));
        }
    }

    #[test]
    fn coordinate_maps_round_trip(x in 0.0f64..0.999) {
        let z = map_x_to_z(x).unwrap();
        let back = map_z_to_x(z).unwrap();
        prop_assert!((back - x).abs() <= 1e-12);
    }

    #[test]
    fn roughness_ignores_amplitude(scale in prop_oneof![-1e6f64..-1e-6, 1e-6f64..1e6], seed in 0.0f64..6.0) {
        let mesh = Mesh::new(51).unwrap();
        let w: Vec<f64> = mesh.points().iter().map(|&x| (7.0 * x + seed).sin() * x).collect();
        let z = vec![0.0; w.len()];
        let g1 = SolutionGrid::from_rows(&w, &z, &z).unwrap();
        let ws: Vec<f64> = w.iter().map(|v| v * scale).collect();
        let g2 = SolutionGrid::from_rows(&ws, &z, &z).unwrap();
        let (a, b) = (roughness(&g1, &mesh).unwrap(), roughness(&g2, &mesh).unwrap());
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300));
    }
}

#[test]
fn zero_wavefunction_is_a_fixed_point() {
    for spec in [ProblemSpec::hydrogen(1, 0).unwrap(), ProblemSpec::linear_reference(1, 0).unwrap()] {
        let mesh = Mesh::default();
        let guess = match spec.kind() {
            PotentialKind::Coulomb => -13.6,
            PotentialKind::Linear => 6.0,
        };
        let pts = vec![[0.0, 0.0, spec.starting_eigenvalue(guess)]; mesh.len()];
        let start = SolutionGrid::new(pts).unwrap();
        let cfg = RelaxConfig::for_problem(&spec, guess);
        let out = relax(&SchrodingerProblem::new(spec), &mesh, &start, &cfg).unwrap();
        assert!(out.converged);
        assert_eq!(out.iterations, 1);
        assert_eq!(out.final_err, 0.0);
        assert_eq!(out.grid, start);
    }
}

#[test]
fn degenerate_hydrogen_levels() {
    let spec = ProblemSpec::hydrogen(1, 0).unwrap();
    assert_eq!(hydrogen_energy(2, 1, &spec).unwrap(), hydrogen_energy(3, 0, &spec).unwrap());
}

// The error functions are homogeneous of degree one in (y₁, y₂), so the
// exact Newton step from any grid whose boundary rows vanish removes the
// wavefunction and leaves the eigenvalue row alone.
#[test]
fn newton_step_collapses_wavefunction() {
    for (spec, guess) in [
        (ProblemSpec::hydrogen(1, 0).unwrap(), -13.598270),
        (ProblemSpec::hydrogen(2, 0).unwrap(), -13.599),
        (ProblemSpec::linear_reference(1, 0).unwrap(), 5.9719),
        (ProblemSpec::linear_reference(2, 0).unwrap(), 10.4410),
    ] {
        let mesh = Mesh::default();
        let grid = initial_guess(&spec, &mesh, guess).unwrap();
        let blocks = assemble_blocks(&SchrodingerProblem::new(spec), &mesh, &grid).unwrap();
        let delta = solve_block_system(&blocks).unwrap();
        let peak = grid.wavefunction().iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let energy = grid.eigenvalue();
        for (d, p) in delta.iter().zip(grid.points()) {
            assert!((d[0] + p[0]).abs() <= 1e-6 * peak, "{d:?} vs {p:?}");
            assert!(d[2].abs() <= 1e-6 * energy.abs(), "{d:?}");
        }
    }
}

/// RK4 integration of `Ai″ = x·Ai` from the values at the origin, sampled
/// every `0.1` out to `target`.
fn integrate_airy(target: f64) -> Vec<(f64, f64)> {
    let (ai0, aip0) = (0.355_028_053_887_817_2, -0.258_819_403_792_806_8);
    let steps_per_sample = 2000;
    let h = 0.1_f64.copysign(target) / steps_per_sample as f64;
    let f = |x: f64, y: [f64; 2]| [y[1], x * y[0]];
    let (mut x, mut y) = (0.0, [ai0, aip0]);
    let mut out = vec![(0.0, ai0)];
    let samples = (target.abs() / 0.1).round() as usize;
    for s in 1..=samples {
        for _ in 0..steps_per_sample {
            let k1 = f(x, y);
            let k2 = f(x + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
            let k3 = f(x + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
            let k4 = f(x + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
            for j in 0..2 {
                y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            }
            x += h;
        }
        out.push((0.1_f64.copysign(target) * s as f64, y[0]));
    }
    out
}

#[test]
fn airy_matches_direct_integration() {
    for (x, expected) in integrate_airy(-10.0).into_iter().chain(integrate_airy(2.0)) {
        let got = airy_ai(x).unwrap();
        assert!((got - expected).abs() < 1e-10, "x={x}: {got} vs {expected}");
    }
}

#[test]
fn airy_second_differences_satisfy_equation() {
    let f = |t: f64| airy_ai(t).unwrap();
    let h = 0.005;
    for i in 0..=1000 {
        let x = -8.0 + i as f64 * 0.01;
        let second =
            (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h);
        let residual = second - x * f(x);
        assert!(residual.abs() < 1e-8, "x={x}: {residual}");
    }
}

#[test]
fn airy_decays_beyond_two() {
    let values: Vec<f64> = (0..=180).map(|i| airy_ai(2.0 + 0.1 * i as f64).unwrap()).collect();
    assert!(values.iter().all(|v| *v > 0.0));
    assert!(values.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn scan_is_deterministic() {
    let spec = ProblemSpec::linear_reference(1, 0).unwrap();
    let mesh = Mesh::new(41).unwrap();
    let a = scan(&spec, &mesh, None, 5.0, 7.0, 9).unwrap();
    let b = scan(&spec, &mesh, None, 5.0, 7.0, 9).unwrap();
    assert_eq!(format!("{a:?}"), format!("{b:?}"));
}
