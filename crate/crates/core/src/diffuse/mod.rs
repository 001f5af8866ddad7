//! The diffuse interface energy
//!
//!   E_ε(u) = (3ε/8)∫|∇u|² + (3/(8ε))∫(u²−1)² + σ∫(u−1)² ρ dx,
//!
//! its variational gradient, truncation, and a mass-conserving gradient
//! flow. With these coefficients the optimal one-dimensional transition is
//! z(t) = −tanh(t/ε) at unit cost per interface length, so the first two
//! terms converge to the perimeter of the phase boundary as ε → 0.
//!
//! The gradient term is discretized with compact forward differences, whose
//! variational derivative is the standard five-point Laplacian; a centered
//! stencil would decouple the two sublattices and admit spurious
//! checkerboard ground states.

pub mod flow;
pub mod spectral;

pub use flow::{minimize, FlowResult, FlowSchedule, Stepping};

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::torus::grid::{compensated_sum, GridSpec, ScalarField};

/// Coefficient of ε∫|∇u|².
pub const GRAD_COEF: f64 = 3.0 / 8.0;
/// Coefficient of (1/ε)∫(u²−1)².
pub const WELL_COEF: f64 = 3.0 / 8.0;

/// Parameters of the diffuse energy on a fixed grid.
#[derive(Clone, Debug)]
pub struct DiffuseConfig {
    pub epsilon: f64,
    pub sigma: f64,
    pub mass: f64,
    /// Penalization density: a mollified particle measure, or a gridded ρ
    /// for the direct sharp-measure variant.
    pub penal_density: ScalarField,
    pub grid: GridSpec,
}

impl DiffuseConfig {
    pub fn new(
        epsilon: f64,
        sigma: f64,
        mass: f64,
        penal_density: ScalarField,
        grid: GridSpec,
    ) -> Result<Self> {
        if grid.dimension != 2 {
            return Err(CoreError::Unsupported(
                "the diffuse energy is two-dimensional".into(),
            ));
        }
        if penal_density.spec != grid {
            return Err(CoreError::GridMismatch);
        }
        if epsilon < 2.0 * grid.spacing() {
            return Err(CoreError::Resolution(format!(
                "epsilon {epsilon} is below two grid spacings ({})",
                2.0 * grid.spacing()
            )));
        }
        if sigma < 0.0 {
            return Err(CoreError::InvalidArgument("sigma must be >= 0".into()));
        }
        if !(mass > -1.0 && mass < 1.0) {
            return Err(CoreError::InvalidArgument(format!(
                "mass must lie in (-1, 1), got {mass}"
            )));
        }
        if penal_density.min_value() < 0.0 {
            return Err(CoreError::InvalidArgument(
                "penalization density must be nonnegative".into(),
            ));
        }
        if (penal_density.integral() - 1.0).abs() > 1e-3 {
            return Err(CoreError::InvalidArgument(format!(
                "penalization density mass {} is not 1 within 1e-3",
                penal_density.integral()
            )));
        }
        Ok(Self {
            epsilon,
            sigma,
            mass,
            penal_density,
            grid,
        })
    }
}

/// The three energy terms plus bookkeeping.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub gradient_term: f64,
    pub well_term: f64,
    pub penal_term: f64,
    pub total: f64,
    pub mass: f64,
}

impl EnergyBreakdown {
    fn new(gradient_term: f64, well_term: f64, penal_term: f64, mass: f64) -> Self {
        Self {
            gradient_term,
            well_term,
            penal_term,
            total: gradient_term + well_term + penal_term,
            mass,
        }
    }
}

/// Evaluate the diffuse energy of a field.
pub fn diffuse_energy(u: &ScalarField, cfg: &DiffuseConfig) -> Result<EnergyBreakdown> {
    if u.spec != cfg.grid {
        return Err(CoreError::GridMismatch);
    }
    let res = cfg.grid.resolution;
    let h = cfg.grid.spacing();
    let v = u.values();
    let rho = cfg.penal_density.values();

    // forward-difference Dirichlet energy; h^2 · (du/h)^2 = du^2 in 2-d
    let grad = compensated_sum((0..res * res).map(|idx| {
        let (i, j) = (idx / res, idx % res);
        let here = v[idx];
        let dx = v[((i + 1) % res) * res + j] - here;
        let dy = v[i * res + (j + 1) % res] - here;
        dx * dx + dy * dy
    }));
    let gradient_term = GRAD_COEF * cfg.epsilon * grad;

    let well = compensated_sum(v.iter().map(|&x| {
        let w = x * x - 1.0;
        w * w
    }));
    let well_term = WELL_COEF / cfg.epsilon * well * h * h;

    let penal = compensated_sum(
        v.iter()
            .zip(rho)
            .map(|(&x, &p)| (x - 1.0) * (x - 1.0) * p),
    );
    let penal_term = cfg.sigma * penal * h * h;

    Ok(EnergyBreakdown::new(
        gradient_term,
        well_term,
        penal_term,
        u.integral(),
    ))
}

/// Variational gradient g = −(3ε/4)Δu + (3/(2ε))u(u²−1) + 2σρ(u−1); the
/// exact derivative of the discrete energy, so directional finite
/// differences of `diffuse_energy` reproduce ∫gφ.
pub fn variational_gradient(u: &ScalarField, cfg: &DiffuseConfig) -> Result<ScalarField> {
    if u.spec != cfg.grid {
        return Err(CoreError::GridMismatch);
    }
    let res = cfg.grid.resolution;
    let h = cfg.grid.spacing();
    let v = u.values();
    let rho = cfg.penal_density.values();
    let lap_coef = 2.0 * GRAD_COEF * cfg.epsilon; // 3ε/4
    let well_coef = 4.0 * WELL_COEF / cfg.epsilon; // 3/(2ε)

    let mut g = vec![0.0; res * res];
    for i in 0..res {
        let ip = (i + 1) % res;
        let im = (i + res - 1) % res;
        for j in 0..res {
            let jp = (j + 1) % res;
            let jm = (j + res - 1) % res;
            let idx = i * res + j;
            let x = v[idx];
            let lap =
                (v[ip * res + j] + v[im * res + j] + v[i * res + jp] + v[i * res + jm] - 4.0 * x)
                    / (h * h);
            g[idx] = -lap_coef * lap
                + well_coef * x * (x * x - 1.0)
                + 2.0 * cfg.sigma * rho[idx] * (x - 1.0);
        }
    }
    ScalarField::from_values(cfg.grid, g)
}

/// Clamp to the physical range [−1, 1]; never increases any energy term.
pub fn truncate(u: &ScalarField) -> ScalarField {
    u.map(|v| v.clamp(-1.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::point::TorusPoint;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg_with_uniform_density(epsilon: f64, sigma: f64, res: usize) -> DiffuseConfig {
        let g = GridSpec::new(2, res).unwrap();
        DiffuseConfig::new(epsilon, sigma, 0.0, ScalarField::constant(g, 1.0), g).unwrap()
    }

    #[test]
    fn preferred_phase_costs_nothing() {
        let cfg = cfg_with_uniform_density(0.1, 2.0, 32);
        let u = ScalarField::constant(cfg.grid, 1.0);
        let e = diffuse_energy(&u, &cfg).unwrap();
        assert_eq!(e.gradient_term, 0.0);
        assert_eq!(e.well_term, 0.0);
        assert_eq!(e.penal_term, 0.0);
        assert_eq!(e.total, 0.0);
    }

    #[test]
    fn rejected_phase_pays_four_sigma() {
        let sigma = 1.7;
        let cfg = cfg_with_uniform_density(0.1, sigma, 32);
        let u = ScalarField::constant(cfg.grid, -1.0);
        let e = diffuse_energy(&u, &cfg).unwrap();
        assert_abs_diff_eq!(e.total, 4.0 * sigma, epsilon = 1e-12);
        assert_abs_diff_eq!(e.penal_term, 4.0 * sigma, epsilon = 1e-12);
    }

    #[test]
    fn lamellar_profile_energy_sits_near_its_perimeter() {
        // tanh profile across the stripe boundary: two unit-length interfaces
        let eps = 0.02;
        let cfg = cfg_with_uniform_density(eps, 0.0, 512);
        let u = ScalarField::sample(cfg.grid, |p| {
            let t = p.get(0).abs() - 0.25; // signed distance to the stripe
            -(t / eps).tanh()
        });
        let e = diffuse_energy(&u, &cfg).unwrap();
        // 1-d profile-integral oracle for the cost per unit interface length
        let per_len = {
            let n = 40_000;
            let t_max = 30.0 * eps;
            let dt = 2.0 * t_max / n as f64;
            let mut acc = 0.0;
            for k in 0..n {
                let t: f64 = -t_max + (k as f64 + 0.5) * dt;
                let z = -(t / eps).tanh();
                let dz = -(1.0 - z * z) / eps;
                acc += (GRAD_COEF * eps * dz * dz
                    + WELL_COEF / eps * (z * z - 1.0) * (z * z - 1.0))
                    * dt;
            }
            acc
        };
        assert_abs_diff_eq!(per_len, 1.0, epsilon = 1e-6);
        assert!(e.total > 1.9 && e.total < 2.2, "total = {}", e.total);
    }

    #[test]
    fn uniform_states_are_stationary() {
        let cfg = cfg_with_uniform_density(0.1, 0.0, 32);
        for value in [1.0, 0.0] {
            let u = ScalarField::constant(cfg.grid, value);
            let g = variational_gradient(&u, &cfg).unwrap();
            assert!(g.values().iter().all(|&x| x.abs() < 1e-14));
        }
    }

    /// Smooth random field from a handful of seeded Fourier modes; rough
    /// white-noise fields would make the forward-difference quadrature error
    /// of the check itself dominate at t = 1e−6.
    fn smooth_random(grid: GridSpec, seed: u64, amplitude: f64, zero_mean: bool) -> ScalarField {
        use std::f64::consts::PI;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let modes: Vec<(f64, f64, f64, f64)> = (0..8)
            .map(|_| {
                (
                    rng.gen_range(-3i32..=3) as f64,
                    rng.gen_range(-3i32..=3) as f64,
                    rng.gen_range(0.0..2.0 * PI),
                    rng.gen_range(-1.0..1.0),
                )
            })
            .collect();
        let f = ScalarField::sample(grid, |p| {
            amplitude
                * modes
                    .iter()
                    .map(|&(k1, k2, ph, a)| {
                        a * (2.0 * PI * (k1 * p.get(0) + k2 * p.get(1)) + ph).sin()
                    })
                    .sum::<f64>()
                / 3.0
        });
        if zero_mean {
            let m = f.mean();
            f.map(|v| v - m)
        } else {
            f
        }
    }

    #[test]
    fn gradient_matches_directional_finite_differences() {
        let cfg = {
            let g = GridSpec::new(2, 64).unwrap();
            let rho = crate::measures::DensitySpec::uniform_disk(TorusPoint::new2(0.0, 0.0), 0.45)
                .unwrap()
                .to_field(g);
            DiffuseConfig::new(0.08, 1.3, 0.0, rho, g).unwrap()
        };
        let u = smooth_random(cfg.grid, 5, 0.8, false);
        let g = variational_gradient(&u, &cfg).unwrap();
        let e0 = diffuse_energy(&u, &cfg).unwrap().total;
        let h2 = cfg.grid.spacing() * cfg.grid.spacing();
        let t = 1e-6;
        for trial in 0..10 {
            let phi = smooth_random(cfg.grid, 100 + trial, 1.0, true);
            let pert = ScalarField::from_values(
                cfg.grid,
                u.values()
                    .iter()
                    .zip(phi.values())
                    .map(|(a, b)| a + t * b)
                    .collect(),
            )
            .unwrap();
            let e1 = diffuse_energy(&pert, &cfg).unwrap().total;
            let fd = (e1 - e0) / t;
            let inner: f64 =
                g.values().iter().zip(phi.values()).map(|(a, b)| a * b).sum::<f64>() * h2;
            assert!(
                (fd - inner).abs() / inner.abs().max(1e-12) < 1e-4,
                "trial {trial}: fd {fd}, inner {inner}"
            );
        }
    }

    #[test]
    fn truncation_never_increases_any_term() {
        let cfg = cfg_with_uniform_density(0.08, 0.9, 32);
        for seed in 0..100 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = ScalarField::from_values(
                cfg.grid,
                (0..cfg.grid.cell_count())
                    .map(|_| rng.gen_range(-2.0..2.0))
                    .collect(),
            )
            .unwrap();
            let before = diffuse_energy(&u, &cfg).unwrap();
            let after = diffuse_energy(&truncate(&u), &cfg).unwrap();
            assert!(after.gradient_term <= before.gradient_term + 1e-12);
            assert!(after.well_term <= before.well_term + 1e-12);
            assert!(after.penal_term <= before.penal_term + 1e-12);
        }
    }

    #[test]
    fn truncate_is_identity_inside_the_range() {
        let g = GridSpec::new(2, 16).unwrap();
        let u = ScalarField::sample(g, |p| 0.9 * (7.0 * p.get(0)).sin());
        assert_eq!(truncate(&u), u);
        let over = ScalarField::constant(g, 1.5);
        let t = truncate(&over);
        assert!(t.values().iter().all(|&v| v == 1.0));
    }
}
