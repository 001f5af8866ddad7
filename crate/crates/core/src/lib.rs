//! Periodic-torus toolkit for a sharp-interface variational model with a
//! density penalization: gridded scalar fields on 𝕋², nanoparticle measures
//! and their mollified empirical densities, a mass-conserving phase-field
//! flow, recovery profiles with an upper-bound certificate, closed-form
//! pattern energetics, and interface criticality audits.
//!
//! Everything is deterministic for a fixed seed and runs single-threaded;
//! all public operations are pure functions over immutable inputs.

pub mod criticality;
pub mod diffuse;
pub mod error;
pub mod geom;
pub mod measures;
pub mod pattern;
pub mod recovery;
pub mod sharp;
pub mod torus;

pub use error::{CoreError, Result};

pub use torus::{
    chain_length, extract_interface, field_integral, read_field, signed_distance_field,
    wrap_distance, write_field, write_pgm, GridSpec, InterfaceChain, ScalarField, TorusPoint,
};

pub use pattern::{Axis, BandAid, Pattern, StripGeometry};

pub use measures::{
    default_mollifier, mollified_density, place_particles, weak_star_gap, DensityKind,
    DensitySpec, DyadicPartition, MollifierSpec, ParticleSet, RateEntry, RateSchedule, SetGap,
    TestSet, WeakStarReport,
};

pub use diffuse::{
    diffuse_energy, minimize, truncate, variational_gradient, DiffuseConfig, EnergyBreakdown,
    FlowResult, FlowSchedule, Stepping,
};

pub use recovery::{
    build_recovery, g_profile, limsup_certificate, optimal_profile, CertificateLevel,
    LimsupCertificate, RecoveryField,
};

pub use sharp::{
    balanced_disk_radius, band_aid_with_cap, best_lamellar, build_band_aid,
    build_concave_convex_strip, centered_disk, pattern_area, pattern_perimeter, sharp_energy,
    sigma0_bound, sigma_crossover, strip_feasibility, strip_r2_from_r1, BandAidBuild,
    SharpEnergyReport, StripFeasibility,
};

pub use criticality::{
    curvature_profile, first_variation_residual, second_variation_disk, CurvatureProfile,
    JumpConvention, ResidualReport,
};
