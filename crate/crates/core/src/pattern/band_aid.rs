//! Stadium-shaped patterns: two parallel wrapping line segments capped by
//! semicircles. The body is the tube of radius `cap_radius` around a
//! segment of the axis line through `body_center`; the caps bulge outward
//! from the body ends, so the whole set lifts to a compact stadium in ℝ²
//! and is contractible on the torus.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::pattern::Axis;
use crate::torus::contour::InterfaceChain;
use crate::torus::point::{wrap_delta, TorusPoint};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct BandAid {
    /// Direction of the straight lines.
    pub axis: Axis,
    /// Axis coordinate of the body midpoint.
    pub body_center: f64,
    /// Half the length of the straight part.
    pub body_half_len: f64,
    /// Perpendicular coordinate of the core line.
    pub perp_center: f64,
    /// Cap radius; also half the separation of the two lines (C¹ tangency).
    pub cap_radius: f64,
}

impl BandAid {
    pub fn new(
        axis: Axis,
        body_center: f64,
        body_half_len: f64,
        perp_center: f64,
        cap_radius: f64,
    ) -> Result<Self> {
        if !(cap_radius > 0.0 && cap_radius < 0.5) {
            return Err(CoreError::InvalidArgument(format!(
                "cap radius must lie in (0, 1/2), got {cap_radius}"
            )));
        }
        if body_half_len < 0.0 || body_half_len + cap_radius >= 0.5 {
            return Err(CoreError::InfeasibleGeometry(format!(
                "stadium of half length {body_half_len} and cap radius {cap_radius} \
                 does not embed in the torus"
            )));
        }
        Ok(Self {
            axis,
            body_center,
            body_half_len,
            perp_center,
            cap_radius,
        })
    }

    /// Local frame: t along the axis relative to the body center, s
    /// perpendicular relative to the core line.
    fn frame(&self, p: &TorusPoint) -> (f64, f64) {
        let t = wrap_delta(p.get(self.axis.index()), self.body_center);
        let s = wrap_delta(p.get(self.axis.other_index()), self.perp_center);
        (t, s)
    }

    fn frame_to_point(&self, t: f64, s: f64) -> TorusPoint {
        let a = self.body_center + t;
        let b = self.perp_center + s;
        match self.axis {
            Axis::First => TorusPoint::new2(a, b),
            Axis::Second => TorusPoint::new2(b, a),
        }
    }

    /// Distance to the core segment in the fundamental frame.
    fn core_distance(&self, p: &TorusPoint) -> f64 {
        let (t, s) = self.frame(p);
        if t.abs() <= self.body_half_len {
            s.abs()
        } else {
            let dt = t.abs() - self.body_half_len;
            (dt * dt + s * s).sqrt()
        }
    }

    pub fn contains(&self, p: &TorusPoint) -> bool {
        self.core_distance(p) < self.cap_radius
    }

    pub fn signed_distance(&self, p: &TorusPoint) -> f64 {
        self.core_distance(p) - self.cap_radius
    }

    pub fn area(&self) -> f64 {
        4.0 * self.cap_radius * self.body_half_len
            + std::f64::consts::PI * self.cap_radius * self.cap_radius
    }

    pub fn perimeter(&self) -> f64 {
        4.0 * self.body_half_len + 2.0 * std::f64::consts::PI * self.cap_radius
    }

    /// Perpendicular offsets of the two straight lines.
    pub fn line_offsets(&self) -> [f64; 2] {
        [
            self.perp_center - self.cap_radius,
            self.perp_center + self.cap_radius,
        ]
    }

    pub fn cap_centers(&self) -> [TorusPoint; 2] {
        [
            self.frame_to_point(-self.body_half_len, 0.0),
            self.frame_to_point(self.body_half_len, 0.0),
        ]
    }

    /// Line-to-cap meeting points.
    pub fn junctions(&self) -> Vec<TorusPoint> {
        let l = self.body_half_len;
        let rho = self.cap_radius;
        vec![
            self.frame_to_point(-l, -rho),
            self.frame_to_point(l, -rho),
            self.frame_to_point(l, rho),
            self.frame_to_point(-l, rho),
        ]
    }

    /// Single closed boundary chain, counterclockwise in the local frame.
    pub fn boundary_chain(&self, n: usize) -> InterfaceChain {
        let l = self.body_half_len;
        let rho = self.cap_radius;
        let line_len = 2.0 * l;
        let cap_len = std::f64::consts::PI * rho;
        let total = 2.0 * line_len + 2.0 * cap_len;
        let n_line = ((n as f64 * line_len / total).round() as usize).max(2);
        let n_cap = ((n as f64 * cap_len / total).round() as usize).max(4);

        let mut vertices = Vec::with_capacity(2 * n_line + 2 * n_cap);
        // bottom line, traveling +t
        for k in 0..n_line {
            let t = -l + line_len * k as f64 / n_line as f64;
            vertices.push(self.frame_to_point(t, -rho));
        }
        // right cap, angle from -π/2 to π/2
        for k in 0..n_cap {
            let a = -std::f64::consts::FRAC_PI_2
                + std::f64::consts::PI * k as f64 / n_cap as f64;
            vertices.push(self.frame_to_point(l + rho * a.cos(), rho * a.sin()));
        }
        // top line, traveling -t
        for k in 0..n_line {
            let t = l - line_len * k as f64 / n_line as f64;
            vertices.push(self.frame_to_point(t, rho));
        }
        // left cap, angle from π/2 to 3π/2
        for k in 0..n_cap {
            let a = std::f64::consts::FRAC_PI_2
                + std::f64::consts::PI * k as f64 / n_cap as f64;
            vertices.push(self.frame_to_point(-l + rho * a.cos(), rho * a.sin()));
        }
        InterfaceChain {
            vertices,
            wrap_class: (0, 0),
        }
    }
}
