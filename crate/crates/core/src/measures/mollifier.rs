//! The radial particle weight V: C¹, nonincreasing, compactly supported in
//! B(0, r), unit mass in two dimensions. The concrete profile is the
//! quartic bump V(s) = (3/(π r²))·(1 − s²/r²)² on [0, r], whose radial
//! integral ∫₀ʳ (1 − s²/r²)² s ds = r²/6 makes the normalization exact.

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MollifierSpec {
    pub support_radius: f64,
}

impl MollifierSpec {
    /// Reference profile on the unit ball, for rescaling as r⁻ⁿ V(|x|/r).
    pub fn unit() -> Self {
        Self {
            support_radius: 1.0,
        }
    }

    /// V(s); zero at and beyond the support radius.
    pub fn value(&self, s: f64) -> f64 {
        let r = self.support_radius;
        if s >= r {
            return 0.0;
        }
        let t = 1.0 - (s * s) / (r * r);
        3.0 / (std::f64::consts::PI * r * r) * t * t
    }

    /// dV/ds; vanishes at both ends, nonpositive in between.
    pub fn derivative(&self, s: f64) -> f64 {
        let r = self.support_radius;
        if s >= r {
            return 0.0;
        }
        -12.0 * s * (1.0 - (s * s) / (r * r)) / (std::f64::consts::PI * r.powi(4))
    }

    /// Peak value V(0) = 3/(π r²).
    pub fn peak(&self) -> f64 {
        3.0 / (std::f64::consts::PI * self.support_radius * self.support_radius)
    }

    /// Analytic mass of the planar bump (equals one by construction).
    pub fn analytic_mass(&self) -> f64 {
        let r = self.support_radius;
        self.peak() * 2.0 * std::f64::consts::PI * (r * r / 6.0)
    }
}

/// Admissible mollifier supported in B(0, r) with 0 < r < 1/2.
pub fn default_mollifier(r: f64) -> Result<MollifierSpec> {
    if !(r > 0.0 && r < 0.5) {
        return Err(CoreError::InvalidArgument(format!(
            "mollifier radius must lie in (0, 1/2), got {r}"
        )));
    }
    Ok(MollifierSpec { support_radius: r })
}
