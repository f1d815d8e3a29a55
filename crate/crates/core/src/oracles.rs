//! Closed-form energies and wavefunctions used as ground truth.

use libm::{cbrt, exp};

use crate::airy::{airy_ai, airy_zero, AIRY_RANGE};
use crate::error::{Error, Result};
use alloc::vec::Vec;

use crate::grid::{map_x_to_z, Mesh, PotentialKind, ProblemSpec};

/// `E = −e²/(2a₀(n + l)²) = −μe⁴/(2(n + l)²)`, using the Coulomb `spec`'s
/// mass and coupling (its own `n`, `l` are ignored).
pub fn hydrogen_energy(n: u32, l: u32, spec: &ProblemSpec) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidSpec("n must be >= 1".into()));
    }
    if spec.kind() != PotentialKind::Coulomb {
        return Err(Error::InvalidSpec("hydrogen_energy needs a Coulomb spec".into()));
    }
    let p = f64::from(n + l);
    Ok(-spec.coupling() / (2.0 * spec.length_scale() * p * p))
}

/// Unnormalised radial function `y(z)` (`z = r/a₀`) for the three lowest
/// states: `z·e^{−z}`, `z(1 − z/2)·e^{−z/2}` and `z²·e^{−z/2}`.
pub fn hydrogen_radial(n: u32, l: u32, z: f64) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::Domain { what: "hydrogen_radial", value: z });
    }
    match (n, l) {
        (1, 0) => Ok(z * exp(-z)),
        (2, 0) => Ok(z * (1.0 - 0.5 * z) * exp(-0.5 * z)),
        (2, 1) => Ok(z * z * exp(-0.5 * z)),
        _ => Err(Error::Unsupported { n, l }),
    }
}

/// `(λ²/2μ)^{1/3}`, the energy unit of the linear potential.
pub fn linear_energy_unit(lambda: f64, mu: f64) -> f64 {
    cbrt(lambda * lambda / (2.0 * mu))
}

/// S-state energy `E_n = −xₙ·(λ²/2μ)^{1/3}` for the linear potential.
pub fn linear_energy(n: usize, lambda: f64, mu: f64) -> Result<f64> {
    if !(lambda > 0.0) || !(mu > 0.0) {
        return Err(Error::InvalidSpec(alloc::format!("lambda and mu must be positive, got lambda={lambda} mu={mu}")));
    }
    Ok(-airy_zero(n)? * linear_energy_unit(lambda, mu))
}

/// Unnormalised S-state `y(r) = Ai((2μλ)^{1/3}·r + xₙ)`. Arguments past
/// the Airy range return 0 (`Ai(20) ≈ 1.7e−27`).
pub fn linear_radial(n: usize, lambda: f64, mu: f64, r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::Domain { what: "linear_radial", value: r });
    }
    let arg = cbrt(2.0 * mu * lambda) * r + airy_zero(n)?;
    if arg > AIRY_RANGE {
        return Ok(0.0);
    }
    airy_ai(arg)
}

/// The closed-form wavefunction for `spec` sampled on `mesh`, with the
/// compact variable mapped through `x/(1 − x)` (to `z` for Coulomb, to `r`
/// in GeV⁻¹ for the linear potential). The point `x = 1` takes the limit 0.
///
/// Coulomb states use the `hydrogen_radial` labels; the linear potential
/// has closed forms only for `l = 0`.
pub fn sample_oracle(spec: &ProblemSpec, mesh: &Mesh) -> Result<Vec<f64>> {
    if spec.kind() == PotentialKind::Linear && spec.l() != 0 {
        return Err(Error::Unsupported { n: spec.n(), l: spec.l() });
    }
    mesh.points()
        .iter()
        .map(|&x| {
            if x >= 1.0 {
                return Ok(0.0);
            }
            let t = map_x_to_z(x)?;
            match spec.kind() {
                PotentialKind::Coulomb => hydrogen_radial(spec.n(), spec.l(), t),
                PotentialKind::Linear => linear_radial(spec.n() as usize, spec.coupling(), spec.mu(), t),
            }
        })
        .collect()
}
