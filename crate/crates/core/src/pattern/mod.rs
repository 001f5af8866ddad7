//! Sharp-interface candidate sets A ⊂ 𝕋² and their geometry: membership,
//! signed distance, area, boundary length, analytic boundary chains, and
//! indicator sampling.
//!
//! Boundary chains are oriented with A on the left of the travel direction,
//! so a convex A is traversed counterclockwise and the signed curvature of a
//! disk is +1/R.

mod band_aid;
mod strip;

pub use band_aid::BandAid;
pub use strip::StripGeometry;

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::torus::contour::{chain_length, extract_interface, InterfaceChain};
use crate::torus::grid::{GridSpec, ScalarField};
use crate::torus::point::{wrap_delta, wrap_distance, TorusPoint};
use crate::torus::sweep::signed_distance_field;

/// Coordinate axis of the torus, 1-based to match the pattern parameter
/// conventions used in run configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    #[serde(rename = "1", alias = "x1")]
    First,
    #[serde(rename = "2", alias = "x2")]
    Second,
}

impl Axis {
    pub fn index(&self) -> usize {
        match self {
            Axis::First => 0,
            Axis::Second => 1,
        }
    }

    pub fn other_index(&self) -> usize {
        1 - self.index()
    }
}

/// A straight stripe banded in one coordinate and wrapping the other.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Lamellar {
    pub axis: Axis,
    pub center: f64,
    pub half_width: f64,
}

impl Lamellar {
    pub fn new(axis: Axis, center: f64, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width < 0.5) {
            return Err(CoreError::InvalidArgument(format!(
                "lamellar half width must lie in (0, 1/2), got {half_width}"
            )));
        }
        Ok(Self {
            axis,
            center,
            half_width,
        })
    }
}

/// A round disk of radius < 1/2.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Disk {
    pub center: TorusPoint,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: TorusPoint, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < 0.5) {
            return Err(CoreError::InvalidArgument(format!(
                "disk radius must lie in (0, 1/2), got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }
}

/// A gridded ±1 indicator with a lazily swept signed-distance companion.
#[derive(Debug, Serialize, Deserialize)]
pub struct GridPattern {
    pub indicator: ScalarField,
    #[serde(skip)]
    dist: OnceLock<ScalarField>,
}

impl GridPattern {
    pub fn new(indicator: ScalarField) -> Self {
        Self {
            indicator,
            dist: OnceLock::new(),
        }
    }

    pub fn distance_field(&self) -> Result<&ScalarField> {
        if let Some(d) = self.dist.get() {
            return Ok(d);
        }
        let d = signed_distance_field(&self.indicator, 0.0)?;
        Ok(self.dist.get_or_init(|| d))
    }
}

/// The candidate-set menu.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Pattern {
    Lamellar(Lamellar),
    Disk(Disk),
    BandAid(BandAid),
    ConcaveConvexStrip(StripGeometry),
    GridIndicator { field: Arc<GridPattern> },
}

impl Pattern {
    pub fn lamellar(axis: Axis, center: f64, half_width: f64) -> Result<Self> {
        Ok(Pattern::Lamellar(Lamellar::new(axis, center, half_width)?))
    }

    pub fn disk(center: TorusPoint, radius: f64) -> Result<Self> {
        Ok(Pattern::Disk(Disk::new(center, radius)?))
    }

    pub fn grid(indicator: ScalarField) -> Self {
        Pattern::GridIndicator {
            field: Arc::new(GridPattern::new(indicator)),
        }
    }

    /// Set membership (open sets; boundary points count as outside).
    pub fn contains(&self, p: &TorusPoint) -> bool {
        match self {
            Pattern::Lamellar(l) => wrap_delta(p.get(l.axis.index()), l.center).abs() < l.half_width,
            Pattern::Disk(d) => {
                wrap_distance(p, &d.center).expect("2-d points") < d.radius
            }
            Pattern::BandAid(b) => b.contains(p),
            Pattern::ConcaveConvexStrip(s) => s.contains(p),
            Pattern::GridIndicator { field } => {
                let g = &field.indicator.spec;
                let h = g.spacing();
                let i = (((p.get(0) + 0.5) / h).floor() as isize).rem_euclid(g.resolution as isize);
                let j = (((p.get(1) + 0.5) / h).floor() as isize).rem_euclid(g.resolution as isize);
                field.indicator.get2(i as usize, j as usize) > 0.0
            }
        }
    }

    /// Signed distance to ∂A, negative inside A. Analytic for parametric
    /// kinds; interpolated from the swept field for grid indicators.
    pub fn signed_distance(&self, p: &TorusPoint) -> Result<f64> {
        match self {
            Pattern::Lamellar(l) => {
                let t = wrap_delta(p.get(l.axis.index()), l.center);
                let d = wrap_delta(t, l.half_width)
                    .abs()
                    .min(wrap_delta(t, -l.half_width).abs());
                Ok(if t.abs() < l.half_width { -d } else { d })
            }
            Pattern::Disk(d) => Ok(wrap_distance(p, &d.center)? - d.radius),
            Pattern::BandAid(b) => Ok(b.signed_distance(p)),
            Pattern::ConcaveConvexStrip(s) => Ok(s.signed_distance(p)),
            Pattern::GridIndicator { field } => Ok(field.distance_field()?.interp2(p)),
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Pattern::Lamellar(l) => 2.0 * l.half_width,
            Pattern::Disk(d) => std::f64::consts::PI * d.radius * d.radius,
            Pattern::BandAid(b) => b.area(),
            Pattern::ConcaveConvexStrip(s) => s.area(),
            Pattern::GridIndicator { field } => {
                let h = field.indicator.spec.spacing();
                let count = field.indicator.values().iter().filter(|&&v| v > 0.0).count();
                count as f64 * h * h
            }
        }
    }

    pub fn perimeter(&self) -> f64 {
        match self {
            Pattern::Lamellar(_) => 2.0,
            Pattern::Disk(d) => 2.0 * std::f64::consts::PI * d.radius,
            Pattern::BandAid(b) => b.perimeter(),
            Pattern::ConcaveConvexStrip(s) => s.perimeter(),
            Pattern::GridIndicator { field } => extract_interface(&field.indicator, 0.0)
                .map(|chains| chains.iter().map(chain_length).sum())
                .unwrap_or(0.0),
        }
    }

    /// Sample the ±1 indicator of the set on a grid.
    pub fn indicator_field(&self, grid: GridSpec) -> ScalarField {
        ScalarField::sample(grid, |p| if self.contains(p) { 1.0 } else { -1.0 })
    }

    /// Analytic boundary chains with A on the left; `n` controls the vertex
    /// budget. Grid indicators fall back to marching squares.
    pub fn boundary_chains(&self, n: usize) -> Result<Vec<InterfaceChain>> {
        match self {
            Pattern::Lamellar(l) => {
                let per_line = (n / 2).max(8);
                let mut chains = Vec::new();
                for (offset, dir) in [(l.half_width, 1.0), (-l.half_width, -1.0)] {
                    let banded = l.center + offset;
                    let vertices: Vec<TorusPoint> = (0..per_line)
                        .map(|k| {
                            let t = dir * (-0.5 + k as f64 / per_line as f64);
                            match l.axis {
                                Axis::First => TorusPoint::new2(banded, t),
                                Axis::Second => TorusPoint::new2(t, banded),
                            }
                        })
                        .collect();
                    let wrap = match l.axis {
                        Axis::First => (0, 1),
                        Axis::Second => (1, 0),
                    };
                    chains.push(InterfaceChain {
                        vertices,
                        wrap_class: wrap,
                    });
                }
                Ok(chains)
            }
            Pattern::Disk(d) => {
                let m = n.max(16);
                let vertices = (0..m)
                    .map(|k| {
                        let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                        TorusPoint::new2(
                            d.center.get(0) + d.radius * t.cos(),
                            d.center.get(1) + d.radius * t.sin(),
                        )
                    })
                    .collect();
                Ok(vec![InterfaceChain {
                    vertices,
                    wrap_class: (0, 0),
                }])
            }
            Pattern::BandAid(b) => Ok(vec![b.boundary_chain(n.max(64))]),
            Pattern::ConcaveConvexStrip(s) => Ok(s.boundary_chains(n.max(64))),
            Pattern::GridIndicator { field } => extract_interface(&field.indicator, 0.0),
        }
    }

    /// Points where boundary arcs of different curvature meet (empty for
    /// lamellae, disks and grid indicators).
    pub fn junctions(&self) -> Vec<TorusPoint> {
        match self {
            Pattern::BandAid(b) => b.junctions(),
            Pattern::ConcaveConvexStrip(s) => s.junctions(),
            _ => Vec::new(),
        }
    }
}
