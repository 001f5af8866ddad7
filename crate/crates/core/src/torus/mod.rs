//! Periodic geometry on the flat torus [−1/2, 1/2)ⁿ: points and the
//! minimum-image metric, gridded scalar fields with midpoint quadrature,
//! level-set extraction, eikonal signed distances, and field serialization.
//!
//! All operations here are pure; fields are immutable once built and safe
//! to share across threads for read-only use.

pub mod contour;
pub mod field_io;
pub mod grid;
pub mod point;
pub mod sweep;

pub use contour::{chain_length, extract_interface, InterfaceChain};
pub use field_io::{read_field, write_field, write_pgm};
pub use grid::{field_integral, GridSpec, ScalarField};
pub use point::{wrap_coord, wrap_delta, wrap_distance, TorusPoint};
pub use sweep::signed_distance_field;
