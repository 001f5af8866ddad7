//! Recovery fields for the sharp-interface limit: the optimal 1-D profile,
//! its truncated-and-bridged version g_ε, the field v_ε = g_ε(d_Γ) + η_ε
//! with the additive constant solved exactly from the mass constraint, and
//! the numerical certificate that the diffuse energies of the v_ε approach
//! the sharp energy from level to level.
//!
//! The profile here is z(t) = −tanh(t), the minimizer of the 1-D transition
//! cost for the energy coefficients in [`crate::diffuse`]; its cost per unit
//! interface length is exactly one.

use serde::{Deserialize, Serialize};

use crate::diffuse::{GRAD_COEF, WELL_COEF};
use crate::error::{CoreError, Result};
use crate::measures::{place_particles, DensitySpec, RateSchedule};
use crate::pattern::Pattern;
use crate::sharp::sharp_energy;
use crate::torus::grid::{compensated_sum, GridSpec, ScalarField};

/// The optimal transition profile z(t) = −tanh(t): odd, strictly
/// decreasing, solving dz/dt = z² − 1 with z(0) = 0 and asymptotes ∓1.
pub fn optimal_profile(t: f64) -> f64 {
    -t.tanh()
}

/// Right-hand side of the profile equation.
pub fn profile_ode_rhs(z: f64) -> f64 {
    z * z - 1.0
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0 / 16.0) {
        return Err(CoreError::InvalidArgument(format!(
            "epsilon must lie in (0, 1/16) so the 2√ε collar fits, got {epsilon}"
        )));
    }
    Ok(())
}

/// The five-branch transition g_ε: ∓1 outside the 2√ε collar, the optimal
/// profile z(t/ε) on |t| ≤ √ε, and linear bridges in between; continuous
/// everywhere.
pub fn g_profile(t: f64, epsilon: f64) -> f64 {
    let s = epsilon.sqrt();
    if t > 2.0 * s {
        -1.0
    } else if t >= s {
        let z_edge = optimal_profile(1.0 / s);
        (-1.0 - z_edge) / s * (t - 2.0 * s) - 1.0
    } else if t >= -s {
        optimal_profile(t / epsilon)
    } else if t >= -2.0 * s {
        let z_edge = optimal_profile(-1.0 / s);
        (z_edge - 1.0) / s * (t + 2.0 * s) + 1.0
    } else {
        1.0
    }
}

/// dg_ε/dt, piecewise.
pub fn g_profile_slope(t: f64, epsilon: f64) -> f64 {
    let s = epsilon.sqrt();
    if t.abs() > 2.0 * s {
        0.0
    } else if t > s {
        (-1.0 - optimal_profile(1.0 / s)) / s
    } else if t >= -s {
        let z = optimal_profile(t / epsilon);
        profile_ode_rhs(z) / epsilon
    } else {
        (optimal_profile(-1.0 / s) - 1.0) / s
    }
}

/// A recovery field together with its mass-matching constant.
#[derive(Clone, Debug)]
pub struct RecoveryField {
    pub field: ScalarField,
    pub eta: f64,
    /// |η| measured in units of ε (the collar-asymmetry constant).
    pub eta_over_epsilon: f64,
}

/// Build v_ε = g_ε(d_Γ) + η_ε on the grid with the mass constraint solved
/// exactly (the mass is linear in the additive constant).
pub fn build_recovery(
    pattern: &Pattern,
    epsilon: f64,
    mass: f64,
    grid: GridSpec,
) -> Result<RecoveryField> {
    check_epsilon(epsilon)?;
    if epsilon < 2.0 * grid.spacing() {
        return Err(CoreError::Resolution(format!(
            "epsilon {epsilon} is not resolvable at spacing {}",
            grid.spacing()
        )));
    }
    let target_area = 0.5 * (1.0 + mass);
    if (pattern.area() - target_area).abs() > 1e-6 {
        return Err(CoreError::InvalidArgument(format!(
            "pattern area {} does not match (1+m)/2 = {target_area}",
            pattern.area()
        )));
    }
    let raw = ScalarField::sample(grid, |p| {
        g_profile(pattern.signed_distance(p).expect("signed distance"), epsilon)
    });
    let eta = mass - raw.integral();
    Ok(RecoveryField {
        field: raw.map(|v| v + eta),
        eta,
        eta_over_epsilon: eta.abs() / epsilon,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateLevel {
    pub epsilon: f64,
    pub diffuse_total: f64,
    pub sharp_total: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LimsupCertificate {
    pub pattern: serde_json::Value,
    pub sigma: f64,
    pub levels: Vec<CertificateLevel>,
    pub pass: bool,
}

/// Evaluate the diffuse energy of the recovery field at one ε. The gradient
/// and well terms use the analytic composition (|∇v| = |g′(d)| almost
/// everywhere), which measures the continuum energy to quadrature accuracy;
/// the penalization term integrates every particle bump exactly against the
/// analytic field.
fn recovery_energy(
    pattern: &Pattern,
    rho: &DensitySpec,
    sigma: f64,
    mass: f64,
    epsilon: f64,
    grid: GridSpec,
    seed: u64,
) -> Result<f64> {
    check_epsilon(epsilon)?;
    let h = grid.spacing();
    let mut g_sum = 0.0;
    let mut slope_terms = Vec::with_capacity(grid.cell_count());
    let mut g_values = Vec::with_capacity(grid.cell_count());
    for i in 0..grid.resolution {
        for j in 0..grid.resolution {
            let p = grid.cell_center2(i, j);
            let d = pattern.signed_distance(&p)?;
            let g = g_profile(d, epsilon);
            let gp = g_profile_slope(d, epsilon);
            g_sum += g;
            slope_terms.push(gp * gp);
            g_values.push(g);
        }
    }
    let eta = mass - g_sum * h * h;
    let grad_term = GRAD_COEF * epsilon * compensated_sum(slope_terms.iter().cloned()) * h * h;
    let well_term = WELL_COEF / epsilon
        * compensated_sum(g_values.iter().map(|&g| {
            let v = g + eta;
            let w = v * v - 1.0;
            w * w
        }))
        * h
        * h;

    let penal_term = if sigma > 0.0 {
        let entry = RateSchedule::default_entry(epsilon)?;
        let ps = place_particles(rho, &entry, seed)?;
        let unit = crate::measures::MollifierSpec::unit();
        let r = ps.radius;
        let radial = 8;
        let angular = 16;
        let mut acc = 0.0;
        for c in &ps.centers {
            for q in 0..radial {
                let s = (q as f64 + 0.5) / radial as f64;
                let w = unit.value(s) * s * (1.0 / radial as f64)
                    * (2.0 * std::f64::consts::PI / angular as f64);
                for a in 0..angular {
                    let th = 2.0 * std::f64::consts::PI * (a as f64 + 0.5) / angular as f64;
                    let p = c.offset(&[r * s * th.cos(), r * s * th.sin()]);
                    let v = g_profile(pattern.signed_distance(&p)?, epsilon) + eta;
                    acc += w * (v - 1.0) * (v - 1.0);
                }
            }
        }
        sigma * acc / ps.count() as f64
    } else {
        0.0
    };

    Ok(grad_term + well_term + penal_term)
}

/// Run the upper-bound certificate across a decreasing ε ladder: the gap
/// |E_ε(v_ε) − E_sharp| must shrink level to level and end below 5 % of the
/// sharp value.
pub fn limsup_certificate(
    pattern: &Pattern,
    rho: &DensitySpec,
    sigma: f64,
    mass: f64,
    eps_list: &[f64],
    grid: GridSpec,
    seed: u64,
) -> Result<LimsupCertificate> {
    if eps_list.len() < 3 {
        return Err(CoreError::InvalidArgument(
            "the certificate needs at least three epsilon levels".into(),
        ));
    }
    for w in eps_list.windows(2) {
        if w[1] >= w[0] {
            return Err(CoreError::InvalidArgument(
                "epsilon levels must be strictly decreasing".into(),
            ));
        }
    }
    let target_area = 0.5 * (1.0 + mass);
    if (pattern.area() - target_area).abs() > 1e-6 {
        return Err(CoreError::InvalidArgument(format!(
            "pattern area {} does not match (1+m)/2 = {target_area}",
            pattern.area()
        )));
    }

    let sharp = sharp_energy(pattern, rho, sigma).total;
    let mut levels = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        let diffuse_total = recovery_energy(pattern, rho, sigma, mass, eps, grid, seed)?;
        levels.push(CertificateLevel {
            epsilon: eps,
            diffuse_total,
            sharp_total: sharp,
            gap: (diffuse_total - sharp).abs(),
        });
    }
    let decreasing = levels
        .windows(2)
        .all(|w| w[1].gap <= w[0].gap * (1.0 + 1e-9));
    let final_ok = levels.last().unwrap().gap < 0.05 * sharp;
    Ok(LimsupCertificate {
        pattern: serde_json::to_value(pattern).unwrap_or(serde_json::Value::Null),
        sigma,
        levels,
        pass: decreasing && final_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Axis;
    use crate::torus::point::TorusPoint;
    use approx::assert_abs_diff_eq;

    #[test]
    fn profile_is_odd_and_anchored_at_zero() {
        assert_eq!(optimal_profile(0.0), 0.0);
        for k in 0..50 {
            let t = -3.0 + 6.0 * k as f64 / 50.0;
            assert_abs_diff_eq!(
                optimal_profile(t) + optimal_profile(-t),
                0.0,
                epsilon = 1e-15
            );
        }
        assert!(optimal_profile(30.0) + 1.0 < 1e-12);
    }

    #[test]
    fn profile_satisfies_its_equation_to_machine_precision() {
        for k in 0..1000 {
            let t = -5.0 + 10.0 * k as f64 / 1000.0;
            let z = optimal_profile(t);
            // analytic derivative of -tanh is -(sech)^2 = z^2 - 1
            let dz = -(1.0 - z * z);
            assert!((dz - profile_ode_rhs(z)).abs() < 1e-10);
        }
    }

    #[test]
    fn runge_kutta_integration_reproduces_the_closed_form() {
        // independent 4th-order integration of dz/dt = z^2 - 1 from z(0) = 0
        let mut z: f64 = 0.0;
        let dt = 1e-4;
        let steps = 20_000; // up to t = 2
        for _ in 0..steps {
            let k1 = profile_ode_rhs(z);
            let k2 = profile_ode_rhs(z + 0.5 * dt * k1);
            let k3 = profile_ode_rhs(z + 0.5 * dt * k2);
            let k4 = profile_ode_rhs(z + dt * k3);
            z += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        assert!((z - optimal_profile(2.0)).abs() < 1e-8, "rk4 {z}");
    }

    #[test]
    fn g_profile_hits_its_plateaus_and_center() {
        let eps = 0.01;
        assert_eq!(g_profile(0.0, eps), 0.0);
        let s = eps.sqrt();
        assert_eq!(g_profile(3.0 * s, eps), -1.0);
        assert_eq!(g_profile(-3.0 * s, eps), 1.0);
    }

    #[test]
    fn g_profile_is_continuous_at_the_branch_points() {
        for eps in [0.04f64, 0.01, 0.003] {
            let s = eps.sqrt();
            for t0 in [2.0 * s, s, -s, -2.0 * s] {
                let below = g_profile(t0 - 1e-12, eps);
                let above = g_profile(t0 + 1e-12, eps);
                assert!(
                    (below - above).abs() < 1e-9,
                    "eps {eps}: jump at {t0}: {below} vs {above}"
                );
            }
            // both branches at t = √ε evaluate to z(1/√ε)
            let z_edge = optimal_profile(1.0 / s);
            assert_abs_diff_eq!(g_profile(s, eps), z_edge, epsilon = 1e-12);
        }
    }

    #[test]
    fn g_profile_is_nonincreasing() {
        let eps = 0.02;
        let mut last = f64::INFINITY;
        for k in 0..10_000 {
            let t = -0.5 + k as f64 / 10_000.0;
            let g = g_profile(t, eps);
            assert!(g <= last + 1e-12);
            last = g;
        }
    }

    #[test]
    fn symmetric_stripe_needs_no_mass_correction() {
        let g = GridSpec::new(2, 256).unwrap();
        let pat = Pattern::lamellar(Axis::First, 0.0, 0.25).unwrap();
        let rec = build_recovery(&pat, 0.02, 0.0, g).unwrap();
        assert!(rec.eta.abs() < 1e-12, "eta = {}", rec.eta);
        assert!(rec.field.integral().abs() < 1e-12);
    }

    #[test]
    fn disk_recovery_mass_is_exact_and_eta_stays_order_epsilon() {
        let g = GridSpec::new(2, 512).unwrap();
        let r = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        let pat = Pattern::disk(TorusPoint::new2(0.0, 0.0), r).unwrap();
        for eps in [0.04, 0.02, 0.01] {
            let rec = build_recovery(&pat, eps, 0.0, g).unwrap();
            assert!(rec.field.integral().abs() < 1e-12);
            assert!(
                rec.eta.abs() < 5.0 * eps,
                "eps {eps}: eta {} too large",
                rec.eta
            );
        }
    }

    #[test]
    fn recovery_converges_to_the_indicator_in_l1() {
        let g = GridSpec::new(2, 512).unwrap();
        let r = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
        let pat = Pattern::disk(TorusPoint::new2(0.0, 0.0), r).unwrap();
        let indicator = pat.indicator_field(g);
        let mut last = f64::INFINITY;
        for eps in [0.04, 0.02, 0.01] {
            let rec = build_recovery(&pat, eps, 0.0, g).unwrap();
            let l1: f64 = rec
                .field
                .values()
                .iter()
                .zip(indicator.values())
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>()
                * g.spacing()
                * g.spacing();
            assert!(l1 < 6.0 * eps.sqrt(), "eps {eps}: l1 {l1}");
            assert!(l1 < last);
            last = l1;
        }
    }
}
