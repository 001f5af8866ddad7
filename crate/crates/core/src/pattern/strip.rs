//! Concave/convex strips: a wrapping stripe whose upper and lower boundaries
//! alternate, per period, one arc of radius R₂ bulging outward inside the
//! penalization disk B(0, r) (signed curvature +1/R₂) and one arc of radius
//! R₁ curving the other way outside it (signed curvature −1/R₁).
//!
//! Under the symmetric ansatz (convex arc centered on the vertical axis,
//! concave arc centered on the seam) the C¹ tangency system with junctions
//! on ∂B(0, r) linearizes: the common unit normal at the junction has
//! horizontal component nx = 1/(2(R₁+R₂)), the junction abscissa is
//! px = R₂·nx, and both arc spans equal asin(nx). The area constraint is
//! met afterwards by moving the two boundaries apart vertically, which
//! shifts the junctions off ∂B(0, r) by the recorded offset.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::torus::contour::InterfaceChain;
use crate::torus::point::{wrap_coord, wrap_delta, TorusPoint};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct StripGeometry {
    /// Concave (outside) arc radius.
    pub r1: f64,
    /// Convex (inside) arc radius.
    pub r2: f64,
    /// Radius of the penalization disk the tangency was solved against.
    pub disk_radius: f64,
    /// Upper-right junction before the area shift.
    pub junction: (f64, f64),
    /// Common unit normal at that junction.
    pub normal: (f64, f64),
    /// y of the convex arc center (on the vertical axis), before the shift.
    pub convex_center_y: f64,
    /// y of the concave arc centers (on the seam), before the shift.
    pub concave_center_y: f64,
    /// Half of the area correction: upper boundary moves by +half_shift,
    /// lower by −half_shift.
    pub half_shift: f64,
    /// Distance of the shifted junctions from ∂B(0, r).
    pub junction_offset: f64,
    /// Area after the shift (matches the requested mass fraction).
    pub area: f64,
}

impl StripGeometry {
    /// Solve the tangency geometry for given radii and match `|A| = (1+m)/2`.
    pub fn solve(r1: f64, r2: f64, disk_radius: f64, mass: f64) -> Result<Self> {
        let r = disk_radius;
        if !(r > 0.0 && r < 0.5) {
            return Err(CoreError::InvalidArgument(format!(
                "disk radius must lie in (0, 1/2), got {r}"
            )));
        }
        if !(mass > -1.0 && mass < 1.0) {
            return Err(CoreError::InvalidArgument(format!(
                "mass must lie in (-1, 1), got {mass}"
            )));
        }
        if !(r1 > 0.5 - r) {
            return Err(CoreError::InvalidArgument(format!(
                "outside radius {r1} must exceed 1/2 - r = {}",
                0.5 - r
            )));
        }
        if !(r2 > r) {
            return Err(CoreError::InvalidArgument(format!(
                "inside radius {r2} must exceed the disk radius {r}"
            )));
        }

        let nx = 1.0 / (2.0 * (r1 + r2));
        let px = r2 * nx;
        if px >= r {
            return Err(CoreError::InfeasibleGeometry(format!(
                "junction abscissa {px} falls outside the disk of radius {r}"
            )));
        }
        let py = (r * r - px * px).sqrt();
        let ny = (1.0 - nx * nx).sqrt();
        let c2 = py - r2 * ny;
        let c1 = py + r1 * ny;
        let theta = nx.asin();

        // tangency residual (closed form makes this exact; keep the check)
        let slope_convex = -px / (r2 * ny);
        let q = 0.5 - px;
        let slope_concave = -q / (r1 * ny);
        if (slope_convex.atan() - slope_concave.atan()).abs() > 1e-8 {
            return Err(CoreError::InfeasibleGeometry(
                "junction tangent angles do not match".into(),
            ));
        }

        // arcs must respect the density regions before the shift
        for k in 0..=64 {
            let x = -px + 2.0 * px * k as f64 / 64.0;
            let y = c2 + (r2 * r2 - x * x).sqrt();
            if (x * x + y * y).sqrt() > r + 1e-7 {
                return Err(CoreError::InfeasibleGeometry(format!(
                    "convex arc leaves the disk at x = {x}"
                )));
            }
            let u = -q + 2.0 * q * k as f64 / 64.0;
            let yc = c1 - (r1 * r1 - u * u).sqrt();
            let xc = 0.5 + u;
            if (xc * xc + yc * yc).sqrt() < r - 1e-7 {
                return Err(CoreError::InfeasibleGeometry(format!(
                    "concave arc enters the disk at x = {xc}"
                )));
            }
        }

        let conv_part = 2.0 * px * c2 + px * r2 * ny + r2 * r2 * theta;
        let conc_part = 2.0 * q * c1 - q * r1 * ny - r1 * r1 * theta;
        let area0 = 2.0 * (conv_part + conc_part);
        let target = 0.5 * (1.0 + mass);
        let delta = target - area0;
        let half_shift = 0.5 * delta;

        let min_up = py.min(c1 - r1);
        if 2.0 * min_up + delta <= 1e-9 {
            return Err(CoreError::InfeasibleGeometry(format!(
                "area shift {delta:.4} collapses the stripe (pre-shift gap {:.4})",
                2.0 * min_up
            )));
        }
        let max_up = py.max(c2 + r2) + half_shift;
        if max_up >= 0.5 {
            return Err(CoreError::InfeasibleGeometry(
                "stripe does not fit inside the fundamental domain".into(),
            ));
        }

        Ok(Self {
            r1,
            r2,
            disk_radius: r,
            junction: (px, py),
            normal: (nx, ny),
            convex_center_y: c2,
            concave_center_y: c1,
            half_shift,
            junction_offset: half_shift.abs(),
            area: target,
        })
    }

    fn theta(&self) -> f64 {
        self.normal.0.asin()
    }

    /// Upper boundary height before the vertical shift.
    fn upper_pre(&self, x: f64) -> f64 {
        let px = self.junction.0;
        if x.abs() <= px {
            self.convex_center_y + (self.r2 * self.r2 - x * x).max(0.0).sqrt()
        } else {
            let u = wrap_delta(x, 0.5);
            self.concave_center_y - (self.r1 * self.r1 - u * u).max(0.0).sqrt()
        }
    }

    pub fn contains(&self, p: &TorusPoint) -> bool {
        let x = wrap_coord(p.get(0));
        let y = wrap_coord(p.get(1));
        y.abs() < self.upper_pre(x) + self.half_shift
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn perimeter(&self) -> f64 {
        4.0 * (self.r1 + self.r2) * self.theta()
    }

    pub fn junctions(&self) -> Vec<TorusPoint> {
        let (px, py) = self.junction;
        let y = py + self.half_shift;
        vec![
            TorusPoint::new2(px, y),
            TorusPoint::new2(-px, y),
            TorusPoint::new2(px, -y),
            TorusPoint::new2(-px, -y),
        ]
    }

    fn arcs(&self) -> [((f64, f64), f64, (f64, f64), f64); 4] {
        let hs = self.half_shift;
        let th = self.theta();
        [
            ((0.0, self.convex_center_y + hs), self.r2, (0.0, 1.0), th),
            ((0.5, self.concave_center_y + hs), self.r1, (0.0, -1.0), th),
            ((0.0, -self.convex_center_y - hs), self.r2, (0.0, -1.0), th),
            ((0.5, -self.concave_center_y - hs), self.r1, (0.0, 1.0), th),
        ]
    }

    pub fn signed_distance(&self, p: &TorusPoint) -> f64 {
        let mut best = f64::INFINITY;
        for dx in [-1.0, 0.0, 1.0] {
            for dy in [-1.0, 0.0, 1.0] {
                let q = (p.get(0) + dx, p.get(1) + dy);
                for (c, r, dir, half) in self.arcs() {
                    best = best.min(arc_distance(q, c, r, dir, half));
                }
            }
        }
        if self.contains(p) {
            -best
        } else {
            best
        }
    }

    /// Upper and lower boundary chains (wrapping the first axis), oriented
    /// with the stripe on the left.
    pub fn boundary_chains(&self, n: usize) -> Vec<InterfaceChain> {
        let th = self.theta();
        let hs = self.half_shift;
        let len_conc = 2.0 * self.r1 * th;
        let len_conv = 2.0 * self.r2 * th;
        let total = len_conc + len_conv;
        let per_boundary = (n / 2).max(32);
        let n_conv = ((per_boundary as f64 * len_conv / total).round() as usize).max(8);
        let n_conc = (per_boundary - n_conv.min(per_boundary)).max(8);
        // split the concave budget between the two half-arcs at the seam
        let n_half = (n_conc / 2).max(4);

        let c1 = self.concave_center_y;
        let c2 = self.convex_center_y;
        let (r1, r2) = (self.r1, self.r2);

        let mut upper: Vec<TorusPoint> = Vec::new();
        // seam half-arc, psi from 0 down to -theta
        for k in 0..n_half {
            let psi = -th * k as f64 / n_half as f64;
            upper.push(TorusPoint::new2(
                0.5 + r1 * psi.sin(),
                c1 - r1 * psi.cos() + hs,
            ));
        }
        // convex arc, phi from +theta down to -theta
        for k in 0..n_conv {
            let phi = th - 2.0 * th * k as f64 / n_conv as f64;
            upper.push(TorusPoint::new2(r2 * phi.sin(), c2 + r2 * phi.cos() + hs));
        }
        // seam half-arc on the other side, psi from +theta down to 0 (exclusive)
        for k in 0..n_half {
            let psi = th - th * k as f64 / n_half as f64;
            upper.push(TorusPoint::new2(
                -0.5 + r1 * psi.sin(),
                c1 - r1 * psi.cos() + hs,
            ));
        }

        let lower: Vec<TorusPoint> = upper
            .iter()
            .rev()
            .map(|p| TorusPoint::new2(p.get(0), -p.get(1)))
            .collect();

        vec![
            InterfaceChain {
                vertices: upper,
                wrap_class: (1, 0),
            },
            InterfaceChain {
                vertices: lower,
                wrap_class: (1, 0),
            },
        ]
    }
}

/// Distance from a planar point to a circular arc given by center, radius,
/// the unit direction toward the arc midpoint, and the half angle.
fn arc_distance(q: (f64, f64), c: (f64, f64), r: f64, dir: (f64, f64), half: f64) -> f64 {
    let v = (q.0 - c.0, q.1 - c.1);
    let dot = v.0 * dir.0 + v.1 * dir.1;
    let cross = dir.0 * v.1 - dir.1 * v.0;
    let ang = cross.atan2(dot);
    if ang.abs() <= half {
        return ((v.0 * v.0 + v.1 * v.1).sqrt() - r).abs();
    }
    let mut best = f64::INFINITY;
    for s in [-half, half] {
        let (cs, sn) = (s.cos(), s.sin());
        let e = (
            c.0 + r * (dir.0 * cs - dir.1 * sn),
            c.1 + r * (dir.0 * sn + dir.1 * cs),
        );
        best = best.min(((q.0 - e.0).powi(2) + (q.1 - e.1).powi(2)).sqrt());
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::contour::chain_length;
    use approx::assert_abs_diff_eq;

    #[test]
    fn solved_strip_matches_area_and_tangency() {
        let s = StripGeometry::solve(0.2, 0.5, 0.45, 0.0).unwrap();
        assert_abs_diff_eq!(s.area(), 0.5, epsilon = 1e-12);
        // junction sits on the disk boundary before the shift
        let (px, py) = s.junction;
        assert_abs_diff_eq!((px * px + py * py).sqrt(), 0.45, epsilon = 1e-12);
        // perimeter agrees with sampled chain length
        let chains = s.boundary_chains(8192);
        let len: f64 = chains.iter().map(chain_length).sum();
        assert!((len - s.perimeter()).abs() / s.perimeter() < 1e-3);
        for c in &chains {
            assert_eq!(c.wrap_class, (1, 0));
        }
    }

    #[test]
    fn area_matches_a_grid_count() {
        let s = StripGeometry::solve(0.18, 0.55, 0.45, 0.0).unwrap();
        let n = 600;
        let h = 1.0 / n as f64;
        let mut count = 0usize;
        for i in 0..n {
            for j in 0..n {
                let p = TorusPoint::new2(-0.5 + (i as f64 + 0.5) * h, -0.5 + (j as f64 + 0.5) * h);
                if s.contains(&p) {
                    count += 1;
                }
            }
        }
        let grid_area = count as f64 * h * h;
        assert!(
            (grid_area - s.area()).abs() < 5e-3,
            "grid {grid_area}, closed form {}",
            s.area()
        );
    }

    #[test]
    fn huge_radii_degenerate_to_a_flat_stripe() {
        let s = StripGeometry::solve(1e6, 1e6, 0.45, 0.0).unwrap();
        let chains = s.boundary_chains(512);
        for c in &chains {
            let y0 = c.vertices[0].get(1).abs();
            for v in &c.vertices {
                assert!((v.get(1).abs() - y0).abs() < 1e-6);
            }
            assert_abs_diff_eq!(y0, 0.25, epsilon = 1e-6);
        }
    }

    #[test]
    fn membership_agrees_with_signed_distance() {
        let s = StripGeometry::solve(0.2, 0.5, 0.45, 0.1).unwrap();
        for k in 0..400 {
            let p = TorusPoint::new2(
                -0.5 + (k as f64 * 0.377) % 1.0,
                -0.5 + (k as f64 * 0.719) % 1.0,
            );
            let sd = s.signed_distance(&p);
            if sd.abs() > 1e-9 {
                assert_eq!(s.contains(&p), sd < 0.0, "at {:?} sd = {sd}", p.coords());
            }
        }
    }

    #[test]
    fn rejects_radii_outside_the_admissible_window() {
        assert!(StripGeometry::solve(0.04, 0.5, 0.45, 0.0).is_err()); // r1 too small
        assert!(StripGeometry::solve(0.2, 0.3, 0.45, 0.0).is_err()); // r2 <= r
    }
}
