//! Weak-* convergence diagnostics for the mollified empirical measure:
//! per-set gaps μ_ε(Ω) − μ(Ω) on closed test sets, and a bounded-Lipschitz
//! distance estimate obtained by maximizing ∫ f d(μ_ε − μ) over a fixed
//! dictionary of 1-Lipschitz periodic functions (normalized trigonometric
//! waves plus a few cone "hat" functions). The dictionary value is a lower
//! bound on the true metric and is reported as an estimate.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geom::{arc_length_inside_disk, disk_disk_overlap, disk_slab_area, gl_integrate};
use crate::measures::dyadic::DyadicPartition;
use crate::measures::mollifier::MollifierSpec;
use crate::measures::placement::ParticleSet;
use crate::measures::{DensityKind, DensitySpec};
use crate::pattern::Axis;
use crate::torus::grid::GridSpec;
use crate::torus::point::{wrap_delta, wrap_distance, TorusPoint};

/// Closed test sets for the Portmanteau-style gap report.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestSet {
    Torus,
    Ball { center: TorusPoint, radius: f64 },
    Stripe { axis: Axis, center: f64, half_width: f64 },
    CubeUnion { level: u32, indices: Vec<usize> },
}

impl TestSet {
    pub fn contains(&self, p: &TorusPoint) -> bool {
        match self {
            TestSet::Torus => true,
            TestSet::Ball { center, radius } => {
                wrap_distance(p, center).expect("2-d") <= *radius
            }
            TestSet::Stripe {
                axis,
                center,
                half_width,
            } => wrap_delta(p.get(axis.index()), *center).abs() <= *half_width,
            TestSet::CubeUnion { level, indices } => {
                let part = DyadicPartition::new(*level, 2);
                indices.contains(&part.cube_containing(p))
            }
        }
    }

    pub fn label(&self) -> String {
        match self {
            TestSet::Torus => "torus".into(),
            TestSet::Ball { center, radius } => format!(
                "ball(({:.3},{:.3}),{:.3})",
                center.get(0),
                center.get(1),
                radius
            ),
            TestSet::Stripe {
                axis,
                center,
                half_width,
            } => format!("stripe(axis{},{:.3},{:.3})", axis.index() + 1, center, half_width),
            TestSet::CubeUnion { level, indices } => {
                format!("cubes(level{},{} cubes)", level, indices.len())
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SetGap {
    pub set: String,
    pub mu_eps: f64,
    pub mu: f64,
    pub gap: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeakStarReport {
    pub per_set: Vec<SetGap>,
    pub bl_estimate: f64,
}

/// μ(Ω) for a closed test set, analytic where the density allows it.
pub fn density_mass_on(rho: &DensitySpec, set: &TestSet) -> f64 {
    match set {
        TestSet::Torus => 1.0,
        TestSet::Ball { center, radius } => match (&rho.kind, rho.clamp) {
            (DensityKind::Uniform, None) => std::f64::consts::PI * radius * radius,
            (DensityKind::UniformDisk { center: c, radius: r }, clamp) => {
                let d = wrap_distance(center, c).expect("2-d");
                let lens = disk_disk_overlap(d, *radius, *r);
                match clamp {
                    None => lens / (std::f64::consts::PI * r * r),
                    Some((lo, hi)) => {
                        let area = std::f64::consts::PI * r * r;
                        let v_in = (1.0 / area).clamp(lo, hi);
                        let v_out = 0.0f64.clamp(lo, hi);
                        let z = area * v_in + (1.0 - area) * v_out;
                        (v_in * lens + v_out * (std::f64::consts::PI * radius * radius - lens)) / z
                    }
                }
            }
            _ => grid_mass_on(rho, set),
        },
        TestSet::Stripe {
            axis,
            center,
            half_width,
        } => match (&rho.kind, rho.clamp) {
            (DensityKind::Uniform, None) => 2.0 * half_width,
            (DensityKind::UniformDisk { center: c, radius: r }, clamp) => {
                let off = wrap_delta(*center, c.get(axis.index()));
                let mut overlap = 0.0;
                for shift in [-1.0, 0.0, 1.0] {
                    let a = (off - half_width + shift).max(-*r);
                    let b = (off + half_width + shift).min(*r);
                    overlap += disk_slab_area(a, b, *r);
                }
                match clamp {
                    None => overlap / (std::f64::consts::PI * r * r),
                    Some((lo, hi)) => {
                        let area = std::f64::consts::PI * r * r;
                        let v_in = (1.0 / area).clamp(lo, hi);
                        let v_out = 0.0f64.clamp(lo, hi);
                        let z = area * v_in + (1.0 - area) * v_out;
                        (v_in * overlap + v_out * (2.0 * half_width - overlap)) / z
                    }
                }
            }
            _ => grid_mass_on(rho, set),
        },
        TestSet::CubeUnion { level, indices } => {
            let part = DyadicPartition::new(*level, 2);
            indices.iter().map(|&i| rho.cube_mass(&part, i)).sum()
        }
    }
}

fn grid_mass_on(rho: &DensitySpec, set: &TestSet) -> f64 {
    let g = GridSpec::new(2, 1024).expect("fixed grid");
    let h = g.spacing();
    let mut mass = 0.0;
    for i in 0..g.resolution {
        for j in 0..g.resolution {
            let p = g.cell_center2(i, j);
            if set.contains(&p) {
                mass += rho.eval(&p);
            }
        }
    }
    mass * h * h
}

/// μ_ε(Ω): exact per-particle integration of the bump against the set,
/// with a polar quadrature for particles straddling the boundary.
pub fn particle_mass_on(ps: &ParticleSet, profile: &MollifierSpec, set: &TestSet) -> f64 {
    let unit = if (profile.support_radius - 1.0).abs() < 1e-12 {
        *profile
    } else {
        MollifierSpec::unit()
    };
    let n = ps.count() as f64;
    let r = ps.radius;
    let mut total = 0.0;
    for c in &ps.centers {
        total += bump_fraction_on(c, r, &unit, set);
    }
    total / n
}

fn bump_fraction_on(center: &TorusPoint, r: f64, unit: &MollifierSpec, set: &TestSet) -> f64 {
    // cheap full/empty classification for smooth sets
    match set {
        TestSet::Torus => return 1.0,
        TestSet::Ball { center: c, radius } => {
            let d = wrap_distance(center, c).expect("2-d");
            if d <= radius - r {
                return 1.0;
            }
            if d >= radius + r {
                return 0.0;
            }
        }
        TestSet::Stripe {
            axis,
            center: sc,
            half_width,
        } => {
            let t = wrap_delta(center.get(axis.index()), *sc).abs();
            if t <= half_width - r {
                return 1.0;
            }
            if t >= half_width + r {
                return 0.0;
            }
        }
        TestSet::CubeUnion { .. } => {}
    }
    // polar quadrature of ∫_{B(0,1)} V(|z|) χ_Ω(center + r z) dz
    let radial = 8;
    let angular = 16;
    let mut acc = 0.0;
    for q in 0..radial {
        let s = (q as f64 + 0.5) / radial as f64;
        let w = unit.value(s) * s * (1.0 / radial as f64) * (2.0 * std::f64::consts::PI / angular as f64);
        for a in 0..angular {
            let th = 2.0 * std::f64::consts::PI * (a as f64 + 0.5) / angular as f64;
            let p = center.offset(&[r * s * th.cos(), r * s * th.sin()]);
            if set.contains(&p) {
                acc += w;
            }
        }
    }
    acc
}

/// The 1-Lipschitz dictionary: {sin, cos}(2πk·x)/(2π|k|) for 0 < |k|∞ ≤ 4
/// (one representative per ±k pair) plus hat functions of 8 fixed balls.
fn hat_centers() -> [(TorusPoint, f64); 8] {
    let r = 0.15;
    [
        (TorusPoint::new2(0.0, 0.0), r),
        (TorusPoint::new2(0.3, 0.0), r),
        (TorusPoint::new2(0.0, 0.3), r),
        (TorusPoint::new2(0.3, 0.3), r),
        (TorusPoint::new2(-0.2, 0.1), r),
        (TorusPoint::new2(0.1, -0.2), r),
        (TorusPoint::new2(-0.25, -0.25), r),
        (TorusPoint::new2(0.45, -0.15), r),
    ]
}

fn wave_vectors() -> Vec<(i32, i32)> {
    let mut ks = Vec::new();
    for k1 in -4i32..=4 {
        for k2 in -4i32..=4 {
            if (k1, k2) == (0, 0) {
                continue;
            }
            // one representative per ±k pair
            if k1 > 0 || (k1 == 0 && k2 > 0) {
                ks.push((k1, k2));
            }
        }
    }
    ks
}

/// ∫_B(c_disk, r) trig(2πk·x) dx via the rotated chord integral.
fn disk_wave_integrals(k: (i32, i32), c: &TorusPoint, r: f64) -> (f64, f64) {
    let kn = ((k.0 * k.0 + k.1 * k.1) as f64).sqrt();
    let chord_cos = gl_integrate(-r, r, 64, |t| {
        (2.0 * std::f64::consts::PI * kn * t).cos() * 2.0 * (r * r - t * t).sqrt()
    });
    let phase = 2.0 * std::f64::consts::PI * (k.0 as f64 * c.get(0) + k.1 as f64 * c.get(1));
    (phase.sin() * chord_cos, phase.cos() * chord_cos)
}

fn density_wave_integrals(rho: &DensitySpec, k: (i32, i32)) -> (f64, f64) {
    match (&rho.kind, rho.clamp) {
        (DensityKind::Uniform, None) => (0.0, 0.0),
        (DensityKind::UniformDisk { center, radius }, clamp) => {
            let (s, c) = disk_wave_integrals(k, center, *radius);
            match clamp {
                None => {
                    let area = std::f64::consts::PI * radius * radius;
                    (s / area, c / area)
                }
                Some((lo, hi)) => {
                    let area = std::f64::consts::PI * radius * radius;
                    let v_in = (1.0 / area).clamp(lo, hi);
                    let v_out = 0.0f64.clamp(lo, hi);
                    let z = area * v_in + (1.0 - area) * v_out;
                    // whole-torus wave integral vanishes, so only the jump counts
                    (((v_in - v_out) * s) / z, ((v_in - v_out) * c) / z)
                }
            }
        }
        _ => {
            // generic cell-sum fallback
            let g = GridSpec::new(2, 512).expect("fixed grid");
            let h = g.spacing();
            let mut s = 0.0;
            let mut c = 0.0;
            for i in 0..g.resolution {
                for j in 0..g.resolution {
                    let p = g.cell_center2(i, j);
                    let phase = 2.0
                        * std::f64::consts::PI
                        * (k.0 as f64 * p.get(0) + k.1 as f64 * p.get(1));
                    let w = rho.eval(&p) * h * h;
                    s += phase.sin() * w;
                    c += phase.cos() * w;
                }
            }
            (s, c)
        }
    }
}

fn density_hat_integral(rho: &DensitySpec, hat_center: &TorusPoint, hat_r: f64) -> f64 {
    match (&rho.kind, rho.clamp) {
        (DensityKind::Uniform, None) => std::f64::consts::PI * hat_r.powi(3) / 3.0,
        (DensityKind::UniformDisk { center, radius }, clamp) => {
            let d = wrap_distance(hat_center, center).expect("2-d");
            let inside = gl_integrate(0.0, hat_r, 32, |s| {
                (hat_r - s) * arc_length_inside_disk(d, s, *radius)
            });
            match clamp {
                None => inside / (std::f64::consts::PI * radius * radius),
                Some((lo, hi)) => {
                    let area = std::f64::consts::PI * radius * radius;
                    let v_in = (1.0 / area).clamp(lo, hi);
                    let v_out = 0.0f64.clamp(lo, hi);
                    let z = area * v_in + (1.0 - area) * v_out;
                    let whole = std::f64::consts::PI * hat_r.powi(3) / 3.0;
                    (v_out * whole + (v_in - v_out) * inside) / z
                }
            }
        }
        _ => {
            let g = GridSpec::new(2, 512).expect("fixed grid");
            let h = g.spacing();
            let mut acc = 0.0;
            for i in 0..g.resolution {
                for j in 0..g.resolution {
                    let p = g.cell_center2(i, j);
                    let s = wrap_distance(&p, hat_center).expect("2-d");
                    if s < hat_r {
                        acc += (hat_r - s) * rho.eval(&p);
                    }
                }
            }
            acc * h * h
        }
    }
}

/// Bounded-Lipschitz distance estimate over the fixed dictionary.
pub fn bl_distance_estimate(ps: &ParticleSet, rho: &DensitySpec) -> f64 {
    let n = ps.count() as f64;
    let mut best: f64 = 0.0;
    for k in wave_vectors() {
        let kn = ((k.0 * k.0 + k.1 * k.1) as f64).sqrt();
        let norm = 1.0 / (2.0 * std::f64::consts::PI * kn);
        let mut s_eps = 0.0;
        let mut c_eps = 0.0;
        for p in &ps.centers {
            let phase =
                2.0 * std::f64::consts::PI * (k.0 as f64 * p.get(0) + k.1 as f64 * p.get(1));
            s_eps += phase.sin();
            c_eps += phase.cos();
        }
        s_eps /= n;
        c_eps /= n;
        let (s_mu, c_mu) = density_wave_integrals(rho, k);
        best = best.max(((s_eps - s_mu) * norm).abs());
        best = best.max(((c_eps - c_mu) * norm).abs());
    }
    for (c, r) in hat_centers() {
        let mut eps_side = 0.0;
        for p in &ps.centers {
            let d = wrap_distance(p, &c).expect("2-d");
            eps_side += (r - d).max(0.0);
        }
        eps_side /= n;
        let mu_side = density_hat_integral(rho, &c, r);
        best = best.max((eps_side - mu_side).abs());
    }
    best
}

/// Full weak-* report for a particle set against its target density.
pub fn weak_star_gap(
    ps: &ParticleSet,
    profile: &MollifierSpec,
    rho: &DensitySpec,
    tests: &[TestSet],
) -> Result<WeakStarReport> {
    let per_set = tests
        .iter()
        .map(|set| {
            let mu_eps = particle_mass_on(ps, profile, set);
            let mu = density_mass_on(rho, set);
            SetGap {
                set: set.label(),
                mu_eps,
                mu,
                gap: mu_eps - mu,
            }
        })
        .collect();
    Ok(WeakStarReport {
        per_set,
        bl_estimate: bl_distance_estimate(ps, rho),
    })
}

/// Default closed-set battery used by the placement diagnostics.
pub fn default_test_sets() -> Vec<TestSet> {
    vec![
        TestSet::Torus,
        TestSet::Ball {
            center: TorusPoint::new2(0.0, 0.0),
            radius: 0.2,
        },
        TestSet::Ball {
            center: TorusPoint::new2(0.25, 0.25),
            radius: 0.15,
        },
        TestSet::Ball {
            center: TorusPoint::new2(-0.3, 0.1),
            radius: 0.1,
        },
        TestSet::Stripe {
            axis: Axis::First,
            center: 0.0,
            half_width: 0.2,
        },
        TestSet::Stripe {
            axis: Axis::Second,
            center: 0.25,
            half_width: 0.125,
        },
        TestSet::CubeUnion {
            level: 2,
            indices: vec![0, 1, 4, 5],
        },
        TestSet::CubeUnion {
            level: 1,
            indices: vec![3],
        },
    ]
}
