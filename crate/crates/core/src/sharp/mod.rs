//! The sharp-interface energy Per(A) + 4σ∫_{A^c} ρ dx on the pattern menu:
//! closed-form overlaps against a uniform-disk density where geometry
//! allows, grid quadrature otherwise, plus the crossover, threshold and
//! feasibility analysis of the lamellar-versus-disk competition.

mod builders;

pub use builders::{band_aid_with_cap, build_band_aid, build_concave_convex_strip, BandAidBuild};

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::geom::{disk_disk_overlap, disk_slab_area};
use crate::measures::{DensityKind, DensitySpec};
use crate::pattern::{Axis, Pattern};
use crate::torus::grid::GridSpec;
use crate::torus::point::{wrap_delta, wrap_distance, TorusPoint};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SharpEnergyReport {
    pub perimeter: f64,
    /// 4σ ∫_{A^c} ρ dx ∈ [0, 4σ].
    pub penal: f64,
    pub total: f64,
    pub area: f64,
    /// |A ∩ supp ρ| when ρ is a uniform disk.
    pub overlap: Option<f64>,
}

pub fn pattern_area(p: &Pattern) -> f64 {
    p.area()
}

pub fn pattern_perimeter(p: &Pattern) -> f64 {
    p.perimeter()
}

/// |A ∩ B(center, r)| for a parametric pattern, closed-form where cheap and
/// by 1024² indicator quadrature otherwise.
pub fn overlap_with_disk(pattern: &Pattern, center: &TorusPoint, r: f64) -> f64 {
    match pattern {
        Pattern::Lamellar(l) => {
            let off = wrap_delta(l.center, center.get(l.axis.index()));
            let mut overlap = 0.0;
            for shift in [-1.0, 0.0, 1.0] {
                let a = (off - l.half_width + shift).max(-r);
                let b = (off + l.half_width + shift).min(r);
                overlap += disk_slab_area(a, b, r);
            }
            overlap
        }
        Pattern::Disk(d) => {
            let dist = wrap_distance(&d.center, center).expect("2-d");
            disk_disk_overlap(dist, d.radius, r)
        }
        Pattern::BandAid(b) => {
            // closed form for the canonical configuration: core line through
            // the disk center with both caps on ∂B(0, r)
            let rho = b.cap_radius;
            let on_axis = wrap_delta(b.perp_center, center.get(b.axis.other_index())).abs() < 1e-9;
            let xc = (r * r - rho * rho).max(0.0).sqrt();
            let caps = b.cap_centers();
            let caps_on_boundary = caps.iter().all(|c| {
                (wrap_distance(c, center).expect("2-d") - xc).abs() < 1e-9
            });
            if on_axis && caps_on_boundary && xc > rho {
                // stripe ∩ B minus the rectangular gap plus the two half disks
                2.0 * r * r * (rho / r).asin() - 2.0 * rho * xc
                    + std::f64::consts::PI * rho * rho
            } else {
                quadrature_overlap(pattern, center, r)
            }
        }
        _ => quadrature_overlap(pattern, center, r),
    }
}

fn quadrature_overlap(pattern: &Pattern, center: &TorusPoint, r: f64) -> f64 {
    let g = GridSpec::new(2, 1024).expect("fixed grid");
    let h = g.spacing();
    let mut count = 0usize;
    for i in 0..g.resolution {
        for j in 0..g.resolution {
            let p = g.cell_center2(i, j);
            if pattern.contains(&p) && wrap_distance(&p, center).expect("2-d") < r {
                count += 1;
            }
        }
    }
    count as f64 * h * h
}

/// Generic ∫_A ρ by cell quadrature.
fn density_mass_on_pattern(pattern: &Pattern, rho: &DensitySpec) -> f64 {
    let g = GridSpec::new(2, 1024).expect("fixed grid");
    let h = g.spacing();
    let mut mass = 0.0;
    for i in 0..g.resolution {
        for j in 0..g.resolution {
            let p = g.cell_center2(i, j);
            if pattern.contains(&p) {
                mass += rho.eval(&p);
            }
        }
    }
    mass * h * h
}

/// Evaluate the sharp energy of a pattern against a density at strength σ.
pub fn sharp_energy(pattern: &Pattern, rho: &DensitySpec, sigma: f64) -> SharpEnergyReport {
    let perimeter = pattern.perimeter();
    let area = pattern.area();
    let (mass_on_a, overlap) = match (&rho.kind, rho.clamp) {
        (DensityKind::Uniform, None) => (area, None),
        (DensityKind::UniformDisk { center, radius }, clamp) => {
            let ov = overlap_with_disk(pattern, center, *radius);
            let disk_area = std::f64::consts::PI * radius * radius;
            let mass = match clamp {
                None => ov / disk_area,
                Some((lo, hi)) => {
                    let v_in = (1.0 / disk_area).clamp(lo, hi);
                    let v_out = 0.0f64.clamp(lo, hi);
                    let z = disk_area * v_in + (1.0 - disk_area) * v_out;
                    (v_in * ov + v_out * (area - ov)) / z
                }
            };
            (mass, Some(ov))
        }
        _ => (density_mass_on_pattern(pattern, rho), None),
    };
    let penal = 4.0 * sigma * (1.0 - mass_on_a).clamp(0.0, 1.0);
    SharpEnergyReport {
        perimeter,
        penal,
        total: perimeter + penal,
        area,
        overlap,
    }
}

/// The balanced disk radius R = √((1+m)/(2π)).
pub fn balanced_disk_radius(mass: f64) -> f64 {
    ((1.0 + mass) / (2.0 * std::f64::consts::PI)).sqrt()
}

/// Crossover strength σ* at which the disk inside B(0, r) overtakes the
/// best lamellar translate. Both totals are affine in σ; the intercept gap
/// is 2πR − 2 and the slope gap 4(overlap-fraction difference), so the
/// crossing is unique.
pub fn sigma_crossover(mass: f64, r: f64) -> Result<f64> {
    let upper = 1.0 - 2.0 / std::f64::consts::PI;
    if !(0.0..upper).contains(&mass) {
        return Err(CoreError::InvalidArgument(format!(
            "mass must lie in [0, 1 - 2/pi), got {mass}"
        )));
    }
    let big_r = balanced_disk_radius(mass);
    if !(r > big_r && r < 0.5) {
        return Err(CoreError::InvalidArgument(format!(
            "density radius {r} must exceed the disk radius {big_r} and stay below 1/2"
        )));
    }
    let w = 0.25 * (1.0 + mass);
    let disk_area = std::f64::consts::PI * r * r;
    let a_lam = disk_slab_area(-w, w, r) / disk_area;
    let a_disk = big_r * big_r / (r * r);
    let slope_gap = 4.0 * (a_disk - a_lam);
    if slope_gap <= 0.0 {
        return Err(CoreError::InvalidArgument(
            "the lamellar slope does not dominate in this parameter range".into(),
        ));
    }
    Ok((2.0 * std::f64::consts::PI * big_r - 2.0) / slope_gap)
}

/// σ₀ = max{σ₁, (r²/R²)(πR − 1)}: above this strength the disk beats every
/// competitor in the menu.
pub fn sigma0_bound(mass: f64, r: f64, sigma1: f64) -> f64 {
    let big_r = balanced_disk_radius(mass);
    sigma1.max(r * r / (big_r * big_r) * (std::f64::consts::PI * big_r - 1.0))
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct StripFeasibility {
    pub feasible: bool,
    /// Existence threshold πr/(2(1−2r)); strips require σ below it.
    pub sigma_bound: f64,
    /// Admissible outside-radius window (r1_max is None when unbounded).
    pub r1_min: f64,
    pub r1_max: Option<f64>,
}

/// Feasibility of concave/convex strips at strength σ: the curvature
/// relation 2σ/(πr²) = 1/R₁ + 1/R₂ must admit R₁ > 1/2 − r and R₂ > r.
pub fn strip_feasibility(sigma: f64, r: f64) -> Result<StripFeasibility> {
    if !(r > 0.0 && r < 0.5) {
        return Err(CoreError::InvalidArgument(format!(
            "density radius must lie in (0, 1/2), got {r}"
        )));
    }
    let sigma_bound = std::f64::consts::PI * r / (2.0 * (1.0 - 2.0 * r));
    if sigma <= 0.0 {
        return Ok(StripFeasibility {
            feasible: false,
            sigma_bound,
            r1_min: 0.5 - r,
            r1_max: None,
        });
    }
    let s = 2.0 * sigma / (std::f64::consts::PI * r * r);
    let r1_min = (0.5 - r).max(1.0 / s);
    let r1_max = if s > 1.0 / r {
        Some(1.0 / (s - 1.0 / r))
    } else {
        None
    };
    let window_open = r1_max.map_or(true, |mx| mx > r1_min);
    Ok(StripFeasibility {
        feasible: sigma < sigma_bound && window_open,
        sigma_bound,
        r1_min,
        r1_max,
    })
}

/// Invert the curvature relation: R₂ = 1/(2σ/(πr²) − 1/R₁).
pub fn strip_r2_from_r1(sigma: f64, r: f64, r1: f64) -> Result<f64> {
    if sigma <= 0.0 || r1 <= 0.0 {
        return Err(CoreError::InvalidArgument(
            "the radii relation needs sigma > 0 and r1 > 0".into(),
        ));
    }
    let s = 2.0 * sigma / (std::f64::consts::PI * r * r);
    let inv = s - 1.0 / r1;
    if inv <= 0.0 {
        return Err(CoreError::InvalidArgument(format!(
            "no positive inside radius exists for r1 = {r1} at sigma = {sigma}"
        )));
    }
    Ok(1.0 / inv)
}

/// The overlap-maximizing lamellar translate: centered on the density disk.
pub fn best_lamellar(mass: f64, rho_center: &TorusPoint) -> Result<Pattern> {
    Pattern::lamellar(Axis::First, rho_center.get(0), 0.25 * (1.0 + mass))
}

/// The balanced disk placed at the density center.
pub fn centered_disk(mass: f64, rho_center: &TorusPoint) -> Result<Pattern> {
    Pattern::disk(*rho_center, balanced_disk_radius(mass))
}
