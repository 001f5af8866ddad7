//! Target densities ρ on the torus, admissible mollifiers, dyadic particle
//! placement, mollified empirical densities, and weak-* convergence
//! diagnostics.

pub mod dyadic;
pub mod mollifier;
pub mod placement;
pub mod density_field;
pub mod weak_star;

pub use dyadic::DyadicPartition;
pub use mollifier::{default_mollifier, MollifierSpec};
pub use placement::{place_particles, ParticleSet};
pub use density_field::mollified_density;
pub use weak_star::{weak_star_gap, SetGap, TestSet, WeakStarReport};

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::geom;
use crate::torus::grid::{GridSpec, ScalarField};
use crate::torus::point::{wrap_distance, TorusPoint};

/// Probability density on 𝕋², analytic or gridded.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityKind {
    Uniform,
    UniformDisk { center: TorusPoint, radius: f64 },
    PiecewiseCells { level: u32, weights: Vec<f64> },
    Gridded { field: ScalarField },
}

/// A probability density with optional positivity clamping: when a clamp
/// (1/C, C) is present the density is clamped pointwise and renormalized to
/// unit mass.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensitySpec {
    pub kind: DensityKind,
    #[serde(default)]
    pub clamp: Option<(f64, f64)>,
}

impl DensitySpec {
    pub fn uniform() -> Self {
        Self {
            kind: DensityKind::Uniform,
            clamp: None,
        }
    }

    pub fn uniform_disk(center: TorusPoint, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < 0.5) {
            return Err(CoreError::InvalidArgument(format!(
                "density disk radius must lie in (0, 1/2), got {radius}"
            )));
        }
        Ok(Self {
            kind: DensityKind::UniformDisk { center, radius },
            clamp: None,
        })
    }

    pub fn piecewise_cells(level: u32, weights: Vec<f64>) -> Result<Self> {
        let part = DyadicPartition::new(level, 2);
        if weights.len() != part.cube_count() {
            return Err(CoreError::InvalidArgument(format!(
                "expected {} weights for level {level}, got {}",
                part.cube_count(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| *w < 0.0) || weights.iter().all(|w| *w == 0.0) {
            return Err(CoreError::InvalidArgument(
                "cell weights must be nonnegative and not all zero".into(),
            ));
        }
        Ok(Self {
            kind: DensityKind::PiecewiseCells { level, weights },
            clamp: None,
        })
    }

    /// Gridded density; values are rescaled so the midpoint integral is 1.
    pub fn gridded(field: ScalarField) -> Result<Self> {
        if field.min_value() < 0.0 {
            return Err(CoreError::InvalidArgument(
                "gridded densities must be nonnegative".into(),
            ));
        }
        let mass = field.integral();
        if mass <= 0.0 {
            return Err(CoreError::InvalidArgument(
                "gridded density has zero mass".into(),
            ));
        }
        Ok(Self {
            kind: DensityKind::Gridded {
                field: field.map(|v| v / mass),
            },
            clamp: None,
        })
    }

    pub fn with_clamp(mut self, lo: f64, hi: f64) -> Result<Self> {
        if !(lo > 0.0 && lo < hi) {
            return Err(CoreError::InvalidArgument(format!(
                "clamp bounds must satisfy 0 < lo < hi, got ({lo}, {hi})"
            )));
        }
        self.clamp = Some((lo, hi));
        Ok(self)
    }

    /// Density before clamping, normalized to unit mass.
    fn raw_eval(&self, p: &TorusPoint) -> f64 {
        match &self.kind {
            DensityKind::Uniform => 1.0,
            DensityKind::UniformDisk { center, radius } => {
                if wrap_distance(p, center).expect("2-d") < *radius {
                    1.0 / (std::f64::consts::PI * radius * radius)
                } else {
                    0.0
                }
            }
            DensityKind::PiecewiseCells { level, weights } => {
                let part = DyadicPartition::new(*level, 2);
                let z: f64 = weights.iter().sum::<f64>() * part.side() * part.side();
                weights[part.cube_containing(p)] / z
            }
            DensityKind::Gridded { field } => {
                let g = &field.spec;
                let h = g.spacing();
                let i = (((p.get(0) + 0.5) / h).floor() as isize).rem_euclid(g.resolution as isize);
                let j = (((p.get(1) + 0.5) / h).floor() as isize).rem_euclid(g.resolution as isize);
                field.get2(i as usize, j as usize)
            }
        }
    }

    /// Normalization constant of the clamped density.
    fn clamp_mass(&self) -> f64 {
        let Some((lo, hi)) = self.clamp else {
            return 1.0;
        };
        match &self.kind {
            DensityKind::Uniform => 1.0f64.clamp(lo, hi),
            DensityKind::UniformDisk { radius, .. } => {
                let area = std::f64::consts::PI * radius * radius;
                let v_in = (1.0 / area).clamp(lo, hi);
                let v_out = 0.0f64.clamp(lo, hi);
                area * v_in + (1.0 - area) * v_out
            }
            DensityKind::PiecewiseCells { level, weights } => {
                let part = DyadicPartition::new(*level, 2);
                let cell = part.side() * part.side();
                let z: f64 = weights.iter().sum::<f64>() * cell;
                weights.iter().map(|w| (w / z).clamp(lo, hi) * cell).sum()
            }
            DensityKind::Gridded { field } => field.map(|v| v.clamp(lo, hi)).integral(),
        }
    }

    /// Pointwise density value (clamped and renormalized when applicable).
    pub fn eval(&self, p: &TorusPoint) -> f64 {
        match self.clamp {
            None => self.raw_eval(p),
            Some((lo, hi)) => self.raw_eval(p).clamp(lo, hi) / self.clamp_mass(),
        }
    }

    pub fn support_contains(&self, p: &TorusPoint) -> bool {
        self.eval(p) > 0.0
    }

    /// Mass of an axis-aligned rectangle with sides below one period.
    /// Analytic for the analytic kinds, cell-count quadrature for grids.
    pub fn mass_on_rect(&self, x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
        let rect_area = (x1 - x0) * (y1 - y0);
        let raw = match &self.kind {
            DensityKind::Uniform => rect_area,
            DensityKind::UniformDisk { center, radius } => {
                let mut overlap = 0.0;
                for dx in [-1.0, 0.0, 1.0] {
                    for dy in [-1.0, 0.0, 1.0] {
                        overlap += geom::disk_rect_area(
                            x0,
                            x1,
                            y0,
                            y1,
                            center.get(0) + dx,
                            center.get(1) + dy,
                            *radius,
                        );
                    }
                }
                overlap / (std::f64::consts::PI * radius * radius)
            }
            DensityKind::PiecewiseCells { level, weights } => {
                let part = DyadicPartition::new(*level, 2);
                let z: f64 = weights.iter().sum::<f64>() * part.side() * part.side();
                let mut mass = 0.0;
                for idx in 0..part.cube_count() {
                    let (cx0, cx1, cy0, cy1) = part.cube_bounds2(idx);
                    for dx in [-1.0, 0.0, 1.0] {
                        for dy in [-1.0, 0.0, 1.0] {
                            let ox0 = (x0 + dx).max(cx0);
                            let ox1 = (x1 + dx).min(cx1);
                            let oy0 = (y0 + dy).max(cy0);
                            let oy1 = (y1 + dy).min(cy1);
                            if ox1 > ox0 && oy1 > oy0 {
                                mass += (ox1 - ox0) * (oy1 - oy0) * weights[idx] / z;
                            }
                        }
                    }
                }
                mass
            }
            DensityKind::Gridded { field } => {
                let g = &field.spec;
                let h = g.spacing();
                let mut mass = 0.0;
                for i in 0..g.resolution {
                    for j in 0..g.resolution {
                        let cx = g.center_coord(i);
                        let cy = g.center_coord(j);
                        let inx = (cx - x0).rem_euclid(1.0) < (x1 - x0).rem_euclid(1.0).max(x1 - x0);
                        let iny = (cy - y0).rem_euclid(1.0) < (y1 - y0);
                        if inx && iny {
                            mass += field.get2(i, j) * h * h;
                        }
                    }
                }
                mass
            }
        };
        match self.clamp {
            None => raw,
            Some((lo, hi)) => {
                // piecewise-constant kinds: clamped mass from the overlap split
                match &self.kind {
                    DensityKind::Uniform => rect_area, // clamp(1)/clamp(1) = 1
                    DensityKind::UniformDisk { radius, .. } => {
                        let area = std::f64::consts::PI * radius * radius;
                        let v_in = (1.0 / area).clamp(lo, hi);
                        let v_out = 0.0f64.clamp(lo, hi);
                        let overlap = raw * area; // rect ∩ disk area
                        (v_in * overlap + v_out * (rect_area - overlap)) / self.clamp_mass()
                    }
                    _ => {
                        // fall back to a fine cell sum of the clamped density
                        let n = 512;
                        let h = 1.0 / n as f64;
                        let mut mass = 0.0;
                        for i in 0..n {
                            let cx = x0 + ((i as f64 + 0.5) * h) * (x1 - x0);
                            for j in 0..n {
                                let cy = y0 + ((j as f64 + 0.5) * h) * (y1 - y0);
                                mass += self.eval(&TorusPoint::new2(cx, cy));
                            }
                        }
                        mass * (x1 - x0) * (y1 - y0) / (n * n) as f64
                    }
                }
            }
        }
    }

    /// Mass of a dyadic cube.
    pub fn cube_mass(&self, part: &DyadicPartition, index: usize) -> f64 {
        let (x0, x1, y0, y1) = part.cube_bounds2(index);
        self.mass_on_rect(x0, x1, y0, y1)
    }

    /// Sample onto a grid and renormalize so the midpoint integral is
    /// exactly one (indicator-like densities would otherwise carry a
    /// one-cell boundary error).
    pub fn to_field(&self, grid: GridSpec) -> ScalarField {
        let f = ScalarField::sample(grid, |p| self.eval(p));
        let mass = f.integral();
        f.map(|v| v / mass)
    }
}

/// Particle-count / radius schedule for a decreasing ladder of interface
/// widths ε. The defaults are k(ε) = min(⌊log₂(1/ε)⌋, 6), N(ε) = ⌊ε⁻²⌋ and
/// r(ε) = 0.05·N⁻¹ᐟ² in two dimensions, which keep N·r² ≪ 1 and
/// r ≪ N⁻¹ᐟ² ≪ 2⁻ᵏ at every level.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RateEntry {
    pub epsilon: f64,
    pub level: u32,
    pub count: usize,
    pub radius: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RateSchedule {
    pub entries: Vec<RateEntry>,
}

impl RateEntry {
    pub fn validate(&self) -> Result<()> {
        let n = self.count as f64;
        let d = 0.5f64.powi(self.level as i32);
        if !(self.radius > 0.0 && n >= 1.0) {
            return Err(CoreError::InvalidArgument(
                "schedule entries need a positive radius and count".into(),
            ));
        }
        if n * self.radius * self.radius >= 0.1 {
            return Err(CoreError::InvalidArgument(format!(
                "N r^2 = {} must stay below 0.1",
                n * self.radius * self.radius
            )));
        }
        if !(self.radius < 0.1 / n.sqrt()) {
            return Err(CoreError::InvalidArgument(
                "radius must stay below 0.1 N^{-1/2}".into(),
            ));
        }
        if !(1.0 / n.sqrt() < d) {
            return Err(CoreError::InvalidArgument(
                "N^{-1/2} must stay below the cube side 2^{-k}".into(),
            ));
        }
        Ok(())
    }
}

impl RateSchedule {
    pub fn default_for(epsilons: &[f64]) -> Result<Self> {
        if epsilons.is_empty() {
            return Err(CoreError::InvalidArgument("empty epsilon ladder".into()));
        }
        for w in epsilons.windows(2) {
            if w[1] >= w[0] {
                return Err(CoreError::InvalidArgument(
                    "epsilon ladder must be strictly decreasing".into(),
                ));
            }
        }
        let entries = epsilons
            .iter()
            .map(|&eps| Self::default_entry(eps))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { entries })
    }

    pub fn default_entry(epsilon: f64) -> Result<RateEntry> {
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(CoreError::InvalidArgument(format!(
                "epsilon must lie in (0, 1/2), got {epsilon}"
            )));
        }
        // forgive last-bit rounding so e.g. 1/0.1² floors to 100, not 99
        let level = (((1.0 / epsilon).log2() + 1e-12).floor() as u32).min(6);
        let count = ((1.0 / (epsilon * epsilon)) * (1.0 + 1e-12)).floor() as usize;
        let radius = 0.05 / (count as f64).sqrt();
        let entry = RateEntry {
            epsilon,
            level,
            count,
            radius,
        };
        entry.validate()?;
        Ok(entry)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn uniform_disk_density_integrates_to_one() {
        let rho = DensitySpec::uniform_disk(TorusPoint::new2(0.0, 0.0), 0.45).unwrap();
        assert_abs_diff_eq!(rho.mass_on_rect(-0.5, 0.5, -0.5, 0.5), 1.0, epsilon = 1e-12);
        let g = GridSpec::new(2, 512).unwrap();
        assert_abs_diff_eq!(rho.to_field(g).integral(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn clamped_disk_density_keeps_unit_mass_and_positivity() {
        let rho = DensitySpec::uniform_disk(TorusPoint::new2(0.0, 0.0), 0.45)
            .unwrap()
            .with_clamp(0.05, 10.0)
            .unwrap();
        assert_abs_diff_eq!(rho.mass_on_rect(-0.5, 0.5, -0.5, 0.5), 1.0, epsilon = 1e-12);
        assert!(rho.eval(&TorusPoint::new2(0.49, 0.49)) > 0.0);
    }

    #[test]
    fn cube_masses_agree_with_grid_quadrature() {
        let rho = DensitySpec::uniform_disk(TorusPoint::new2(0.1, -0.05), 0.3).unwrap();
        let part = DyadicPartition::new(2, 2);
        let g = GridSpec::new(2, 1024).unwrap();
        let field = rho.to_field(g);
        for idx in [0usize, 5, 10, 15] {
            let (x0, x1, y0, y1) = part.cube_bounds2(idx);
            let mut grid_mass = 0.0;
            for i in 0..g.resolution {
                let cx = g.center_coord(i);
                if cx < x0 || cx >= x1 {
                    continue;
                }
                for j in 0..g.resolution {
                    let cy = g.center_coord(j);
                    if cy >= y0 && cy < y1 {
                        grid_mass += field.get2(i, j);
                    }
                }
            }
            grid_mass *= g.spacing() * g.spacing();
            let exact = rho.cube_mass(&part, idx);
            assert!(
                (grid_mass - exact).abs() < 2e-3,
                "cube {idx}: exact {exact}, grid {grid_mass}"
            );
        }
    }

    #[test]
    fn default_schedule_meets_the_separation_constraints() {
        let sched = RateSchedule::default_for(&[0.1, 0.05, 0.025]).unwrap();
        assert_eq!(sched.entries.len(), 3);
        let e0 = sched.entries[0];
        assert_eq!((e0.level, e0.count), (3, 100));
        assert_abs_diff_eq!(e0.radius, 0.005, epsilon = 1e-15);
        for e in &sched.entries {
            e.validate().unwrap();
        }
        assert!(RateSchedule::default_for(&[0.05, 0.1]).is_err());
    }
}
