//! Dyadic particle placement: each level-k cube Qᵢ receives ⌊N·μ(Qᵢ)⌋
//! centers on a jittered sub-lattice shrunk away from the cube boundary,
//! which guarantees pairwise center separation > 2r and keeps every ball
//! B(xᵢ, r) inside its cube. The effective particle number is Σᵢ Nᵢ (the
//! floor deficit is absorbed into the 1/N normalization of the measure).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::measures::dyadic::DyadicPartition;
use crate::measures::{DensitySpec, RateEntry};
use crate::torus::point::TorusPoint;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ParticleSet {
    pub level: u32,
    pub radius: f64,
    pub centers: Vec<TorusPoint>,
    #[serde(rename = "counts")]
    pub per_cube_counts: Vec<u32>,
    pub seed: u64,
}

impl ParticleSet {
    pub fn count(&self) -> usize {
        self.centers.len()
    }

    /// Smallest pairwise periodic center distance (∞ for fewer than two).
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.centers.len() {
            for j in (i + 1)..self.centers.len() {
                let d = crate::torus::point::wrap_distance(&self.centers[i], &self.centers[j])
                    .expect("2-d centers");
                best = best.min(d);
            }
        }
        best
    }
}

/// Place particles for one schedule entry. Deterministic for a fixed seed.
pub fn place_particles(rho: &DensitySpec, entry: &RateEntry, seed: u64) -> Result<ParticleSet> {
    entry.validate()?;
    let part = DyadicPartition::new(entry.level, 2);
    let r = entry.radius;
    let margin = 1.05 * r;
    let side = part.side();
    if side <= 2.0 * margin {
        return Err(CoreError::Packing {
            cube: 0,
            detail: format!("cube side {side} cannot hold a margin of {margin}"),
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers = Vec::new();
    let mut counts = Vec::with_capacity(part.cube_count());

    for idx in 0..part.cube_count() {
        let mu = rho.cube_mass(&part, idx).max(0.0);
        let want = (entry.count as f64 * mu).floor() as usize;
        counts.push(want as u32);
        if want == 0 {
            continue;
        }
        let (x0, _, y0, _) = part.cube_bounds2(idx);
        let usable = side - 2.0 * margin;

        // grow the sub-lattice until enough sites land in the support
        let mut cells = (want as f64).sqrt().ceil() as usize;
        let sites = loop {
            let delta = usable / cells as f64;
            if 0.8 * delta <= 2.0 * r {
                return Err(CoreError::Packing {
                    cube: idx,
                    detail: format!(
                        "lattice spacing {delta:.3e} cannot separate balls of radius {r:.3e}"
                    ),
                });
            }
            let mut found = Vec::new();
            'scan: for a in 0..cells {
                for b in 0..cells {
                    let sx = x0 + margin + (a as f64 + 0.5) * delta;
                    let sy = y0 + margin + (b as f64 + 0.5) * delta;
                    if rho.support_contains(&TorusPoint::new2(sx, sy)) {
                        found.push((sx, sy, delta));
                        if found.len() == want {
                            break 'scan;
                        }
                    }
                }
            }
            if found.len() >= want {
                break found;
            }
            cells += 1;
        };

        for &(sx, sy, delta) in sites.iter().take(want) {
            let amp = 0.1 * delta;
            let jx = rng.gen_range(-amp..amp);
            let jy = rng.gen_range(-amp..amp);
            // clamp back into the margin box so balls stay inside the cube
            let px = (sx + jx).clamp(x0 + margin, x0 + side - margin);
            let py = (sy + jy).clamp(y0 + margin, y0 + side - margin);
            let p = TorusPoint::new2(px, py);
            if rho.support_contains(&p) {
                centers.push(p);
            } else {
                centers.push(TorusPoint::new2(sx, sy));
            }
        }
    }

    if centers.is_empty() {
        return Err(CoreError::InvalidArgument(
            "allocation produced no particles; increase N or coarsen the partition".into(),
        ));
    }

    Ok(ParticleSet {
        level: entry.level,
        radius: r,
        centers,
        per_cube_counts: counts,
        seed,
    })
}
