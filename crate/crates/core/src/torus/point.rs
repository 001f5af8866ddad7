//! Points on the flat torus 𝕋ⁿ = [−1/2, 1/2)ⁿ with periodic identification.
//!
//! Coordinates are reduced canonically on construction, so two points that
//! differ by an integer shift compare equal. Distances use the minimum image
//! convention per axis.

use serde::de::{SeqAccess, Visitor};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CoreError, Result};

/// Reduce a coordinate to the fundamental interval [−1/2, 1/2).
pub fn wrap_coord(x: f64) -> f64 {
    let y = x - x.round();
    if y >= 0.5 {
        y - 1.0
    } else if y < -0.5 {
        y + 1.0
    } else {
        y
    }
}

/// Wrapped difference a − b, reduced to [−1/2, 1/2).
pub fn wrap_delta(a: f64, b: f64) -> f64 {
    wrap_coord(a - b)
}

/// A point of 𝕋ⁿ for n ∈ {2, 3}; coordinates always live in [−1/2, 1/2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TorusPoint {
    coords: [f64; 3],
    dim: u8,
}

impl TorusPoint {
    pub fn new(coords: &[f64]) -> Result<Self> {
        if coords.len() != 2 && coords.len() != 3 {
            return Err(CoreError::InvalidArgument(format!(
                "torus points must have dimension 2 or 3, got {}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(CoreError::InvalidArgument(
                "torus point coordinates must be finite".into(),
            ));
        }
        let mut c = [0.0; 3];
        for (slot, x) in c.iter_mut().zip(coords) {
            *slot = wrap_coord(*x);
        }
        Ok(Self {
            coords: c,
            dim: coords.len() as u8,
        })
    }

    pub fn new2(x0: f64, x1: f64) -> Self {
        Self {
            coords: [wrap_coord(x0), wrap_coord(x1), 0.0],
            dim: 2,
        }
    }

    pub fn new3(x0: f64, x1: f64, x2: f64) -> Self {
        Self {
            coords: [wrap_coord(x0), wrap_coord(x1), wrap_coord(x2)],
            dim: 3,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim as usize]
    }

    pub fn get(&self, axis: usize) -> f64 {
        self.coords[axis]
    }

    /// Translate by a vector (result is reduced again).
    pub fn offset(&self, delta: &[f64]) -> Self {
        let mut c = [0.0; 3];
        for i in 0..self.dim as usize {
            c[i] = wrap_coord(self.coords[i] + delta[i]);
        }
        Self {
            coords: c,
            dim: self.dim,
        }
    }
}

/// Geodesic distance on the flat torus: min over integer shifts of the
/// Euclidean distance. Bounded by √n / 2.
pub fn wrap_distance(p: &TorusPoint, q: &TorusPoint) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(CoreError::DimensionMismatch {
            expected: p.dim(),
            got: q.dim(),
        });
    }
    let mut s = 0.0;
    for i in 0..p.dim() {
        let d = wrap_delta(p.get(i), q.get(i));
        s += d * d;
    }
    Ok(s.sqrt())
}

impl Serialize for TorusPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.dim()))?;
        for c in self.coords() {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for TorusPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct PointVisitor;
        impl<'de> Visitor<'de> for PointVisitor {
            type Value = TorusPoint;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a sequence of 2 or 3 coordinates")
            }
            fn visit_seq<A: SeqAccess<'de>>(
                self,
                mut seq: A,
            ) -> std::result::Result<TorusPoint, A::Error> {
                let mut coords = Vec::with_capacity(3);
                while let Some(x) = seq.next_element::<f64>()? {
                    coords.push(x);
                }
                TorusPoint::new(&coords).map_err(serde::de::Error::custom)
            }
        }
        deserializer.deserialize_seq(PointVisitor)
    }
}
