//! Constructors for the stationary candidate families: band aids with caps
//! pinned to the density-jump circle, and concave/convex strips from the
//! curvature radii.

use crate::error::{CoreError, Result};
use crate::pattern::{Axis, BandAid, Pattern, StripGeometry};

/// A band aid centered on the density disk: straight lines outside B(0, r),
/// both semicircular caps centered on ∂-adjacent chord points so the
/// line-to-cap junctions lie exactly on ∂B(0, r).
pub fn band_aid_with_cap(r: f64, cap_radius: f64) -> Result<Pattern> {
    if !(r > 0.0 && r < 0.5) {
        return Err(CoreError::InvalidArgument(format!(
            "density radius must lie in (0, 1/2), got {r}"
        )));
    }
    if !(cap_radius > 0.0 && cap_radius < r) {
        return Err(CoreError::InfeasibleGeometry(format!(
            "cap of radius {cap_radius} does not fit in a disk of radius {r}"
        )));
    }
    let xc = (r * r - cap_radius * cap_radius).sqrt();
    if xc <= cap_radius {
        return Err(CoreError::InfeasibleGeometry(format!(
            "caps of radius {cap_radius} collide inside the disk of radius {r}"
        )));
    }
    // body runs through the seam; caps sit at ±xc on the axis line
    let band = BandAid::new(Axis::First, 0.5, 0.5 - xc, 0.0, cap_radius)?;
    Ok(Pattern::BandAid(band))
}

/// Result of the band-aid builder: the stationary cap radius πr²/(2σ) and
/// the area-feasible one generally differ; the returned pattern satisfies
/// the mass constraint and the gap is reported for the criticality audit.
#[derive(Clone, Debug)]
pub struct BandAidBuild {
    pub pattern: Pattern,
    /// Cap radius that makes the family stationary at strength σ.
    pub critical_cap_radius: f64,
    /// Cap radius that satisfies the mass constraint with caps on ∂B(0, r).
    pub cap_radius: f64,
    /// |critical − area-feasible| cap radius.
    pub criticality_gap: f64,
}

/// Area of the wrapped stadium with caps on ∂B(0, r) as a function of the
/// cap radius: 2ρ·(1 − 2√(r²−ρ²)) + πρ².
fn on_disk_area(rho: f64, r: f64) -> f64 {
    let xc = (r * r - rho * rho).sqrt();
    2.0 * rho * (1.0 - 2.0 * xc) + std::f64::consts::PI * rho * rho
}

/// Build the band aid at mass m and strength σ: the cap radius solves the
/// area constraint by a 1-D root find (the area is strictly increasing in
/// the cap radius); the stationary radius is reported alongside.
pub fn build_band_aid(mass: f64, r: f64, sigma: f64) -> Result<BandAidBuild> {
    if sigma <= 0.0 {
        return Err(CoreError::InvalidArgument(
            "the band-aid family needs sigma > 0".into(),
        ));
    }
    if !(mass > -1.0 && mass < 1.0) {
        return Err(CoreError::InvalidArgument(format!(
            "mass must lie in (-1, 1), got {mass}"
        )));
    }
    let critical = std::f64::consts::PI * r * r / (2.0 * sigma);
    let target = 0.5 * (1.0 + mass);

    let (mut lo, mut hi) = (1e-9, r - 1e-9);
    if on_disk_area(hi, r) < target {
        return Err(CoreError::InfeasibleGeometry(format!(
            "no cap radius below {r} reaches area {target}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if on_disk_area(mid, r) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    let rho = 0.5 * (lo + hi);
    let pattern = band_aid_with_cap(r, rho)?;
    Ok(BandAidBuild {
        pattern,
        critical_cap_radius: critical,
        cap_radius: rho,
        criticality_gap: (critical - rho).abs(),
    })
}

/// Concave/convex strip from the two radii, tangency solved against
/// ∂B(0, r) and the area matched by the vertical boundary shift.
pub fn build_concave_convex_strip(r1: f64, r2: f64, r: f64, mass: f64) -> Result<Pattern> {
    Ok(Pattern::ConcaveConvexStrip(StripGeometry::solve(
        r1, r2, r, mass,
    )?))
}
