//! The mollified empirical density: mean of rescaled bumps
//! x ↦ (1/(N rⁿ)) Σᵢ V(|x − xᵢ|/r) sampled at cell centers. Supports are
//! pairwise disjoint by construction, so per-particle deposits never race.

use crate::error::{CoreError, Result};
use crate::measures::mollifier::MollifierSpec;
use crate::measures::placement::ParticleSet;
use crate::torus::grid::{GridSpec, ScalarField};
use crate::torus::point::wrap_delta;

/// Sample the mollified empirical density of a particle set on a grid.
/// `profile` must be the unit-support reference profile (or already match
/// the particle radius).
pub fn mollified_density(
    ps: &ParticleSet,
    profile: &MollifierSpec,
    grid: &GridSpec,
) -> Result<ScalarField> {
    if grid.dimension != 2 {
        return Err(CoreError::Unsupported(
            "mollified densities are two-dimensional".into(),
        ));
    }
    let r = ps.radius;
    let unit = if (profile.support_radius - 1.0).abs() < 1e-12 {
        *profile
    } else if (profile.support_radius - r).abs() < 1e-12 {
        MollifierSpec::unit()
    } else {
        return Err(CoreError::InvalidArgument(format!(
            "profile support {} matches neither 1 nor the particle radius {r}",
            profile.support_radius
        )));
    };

    let h = grid.spacing();
    if r < 4.0 * h {
        return Err(CoreError::Resolution(format!(
            "particle radius {r} needs at least 4 cells, spacing is {h}"
        )));
    }

    let res = grid.resolution;
    let n = ps.count() as f64;
    let scale = 1.0 / (n * r * r);
    let reach = (r / h).ceil() as isize + 1;
    let mut values = vec![0.0; res * res];

    for c in &ps.centers {
        let ic = (((c.get(0) + 0.5) / h).floor() as isize).rem_euclid(res as isize);
        let jc = (((c.get(1) + 0.5) / h).floor() as isize).rem_euclid(res as isize);
        for di in -reach..=reach {
            let i = (ic + di).rem_euclid(res as isize) as usize;
            let x = grid.center_coord(i);
            let dx = wrap_delta(x, c.get(0));
            for dj in -reach..=reach {
                let j = (jc + dj).rem_euclid(res as isize) as usize;
                let y = grid.center_coord(j);
                let dy = wrap_delta(y, c.get(1));
                let d = (dx * dx + dy * dy).sqrt();
                if d < r {
                    values[i * res + j] += scale * unit.value(d / r);
                }
            }
        }
    }

    ScalarField::from_values(*grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{DensitySpec, RateEntry};
    use crate::measures::placement::place_particles;
    use crate::torus::point::{wrap_distance, TorusPoint};

    fn single_particle(radius: f64) -> ParticleSet {
        ParticleSet {
            level: 0,
            radius,
            centers: vec![TorusPoint::new2(0.0, 0.0)],
            per_cube_counts: vec![1],
            seed: 0,
        }
    }

    #[test]
    fn single_bump_has_unit_grid_mass() {
        let ps = single_particle(0.05);
        let g = GridSpec::new(2, 512).unwrap();
        let f = mollified_density(&ps, &MollifierSpec::unit(), &g).unwrap();
        assert!((f.integral() - 1.0).abs() < 1e-3, "mass = {}", f.integral());
    }

    #[test]
    fn vanishes_off_the_particle_supports() {
        let ps = single_particle(0.05);
        let g = GridSpec::new(2, 256).unwrap();
        let f = mollifier_field(&ps, &g);
        for i in 0..g.resolution {
            for j in 0..g.resolution {
                let p = g.cell_center2(i, j);
                if wrap_distance(&p, &ps.centers[0]).unwrap() > ps.radius {
                    assert_eq!(f.get2(i, j), 0.0);
                }
            }
        }
    }

    fn mollifier_field(ps: &ParticleSet, g: &GridSpec) -> ScalarField {
        mollified_density(ps, &MollifierSpec::unit(), g).unwrap()
    }

    #[test]
    fn two_disjoint_particles_superpose_without_interacting() {
        // centers aligned to the same sub-cell offset so the sampled peaks
        // of the two translates coincide exactly
        let r = 0.05;
        let two = ParticleSet {
            level: 0,
            radius: r,
            centers: vec![TorusPoint::new2(-0.25, 0.0), TorusPoint::new2(0.25, 0.125)],
            per_cube_counts: vec![2],
            seed: 0,
        };
        let g = GridSpec::new(2, 512).unwrap();
        let f = mollifier_field(&two, &g);
        // max equals half the single-particle peak (1/N with N = 2)
        let single = ParticleSet {
            level: 0,
            radius: r,
            centers: vec![TorusPoint::new2(0.25, 0.125)],
            per_cube_counts: vec![1],
            seed: 0,
        };
        let single = mollifier_field(&single, &g);
        let max2 = f.values().iter().cloned().fold(0.0f64, f64::max);
        let max1 = single.values().iter().cloned().fold(0.0f64, f64::max);
        assert!((max2 - 0.5 * max1).abs() / max1 < 1e-12);
        assert!((f.integral() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn under_resolved_radius_is_rejected() {
        let ps = single_particle(0.01);
        let g = GridSpec::new(2, 128).unwrap();
        assert!(matches!(
            mollified_density(&ps, &MollifierSpec::unit(), &g),
            Err(CoreError::Resolution(_))
        ));
    }

    #[test]
    fn placed_measure_is_a_probability_measure_on_the_grid() {
        let rho = DensitySpec::uniform();
        let e = RateEntry {
            epsilon: 0.1,
            level: 2,
            count: 64,
            radius: 0.01,
        };
        let ps = place_particles(&rho, &e, 9).unwrap();
        let g = GridSpec::new(2, 1024).unwrap();
        let f = mollifier_field(&ps, &g);
        assert!((f.integral() - 1.0).abs() < 1e-3);
        assert!(f.min_value() >= 0.0);
    }
}
