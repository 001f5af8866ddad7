//! Closed-form planar geometry shared by the measure and pattern modules:
//! circular segments, disk/rectangle and disk/disk overlap areas, and small
//! quadrature helpers. Everything here is Euclidean; periodic callers sum
//! over the relevant lattice images.

/// Area of {x ≤ t} ∩ B(0, r).
pub fn disk_halfplane_area(t: f64, r: f64) -> f64 {
    if t <= -r {
        return 0.0;
    }
    if t >= r {
        return std::f64::consts::PI * r * r;
    }
    t * (r * r - t * t).sqrt() + r * r * (t / r).asin() + 0.5 * std::f64::consts::PI * r * r
}

/// Antiderivative of √(r² − x²).
fn half_chord_integral(x: f64, r: f64) -> f64 {
    let x = x.clamp(-r, r);
    0.5 * (x * (r * r - x * x).sqrt() + r * r * (x / r).asin())
}

/// Area of the quadrant {x ≤ a, y ≤ b} ∩ B(0, r).
pub fn disk_corner_area(a: f64, b: f64, r: f64) -> f64 {
    if a <= -r || b <= -r {
        return 0.0;
    }
    if b >= r {
        return disk_halfplane_area(a, r);
    }
    if a >= r {
        return disk_halfplane_area(b, r);
    }
    let s = (r * r - b * b).sqrt();
    // chord integral with the y-extent capped at b
    let full = |u: f64, v: f64| -> f64 {
        if v <= u {
            return 0.0;
        }
        2.0 * (half_chord_integral(v, r) - half_chord_integral(u, r))
    };
    let partial = |u: f64, v: f64| -> f64 {
        if v <= u {
            return 0.0;
        }
        (half_chord_integral(v, r) - half_chord_integral(u, r)) + b * (v - u)
    };
    if b >= 0.0 {
        full(-r, a.min(-s)) + partial((-s).max(-r), a.min(s)) + full(s, a)
    } else {
        partial(-s, a.min(s))
    }
}

/// Area of an axis-aligned rectangle intersected with B(center, r).
pub fn disk_rect_area(x0: f64, x1: f64, y0: f64, y1: f64, cx: f64, cy: f64, r: f64) -> f64 {
    let w = |a: f64, b: f64| disk_corner_area(a - cx, b - cy, r);
    (w(x1, y1) - w(x0, y1) - w(x1, y0) + w(x0, y0)).max(0.0)
}

/// Lens area of two disks with center distance d.
pub fn disk_disk_overlap(d: f64, ra: f64, rb: f64) -> f64 {
    if d >= ra + rb {
        return 0.0;
    }
    let rmin = ra.min(rb);
    if d <= (ra - rb).abs() {
        return std::f64::consts::PI * rmin * rmin;
    }
    let alpha = ((d * d + ra * ra - rb * rb) / (2.0 * d * ra)).clamp(-1.0, 1.0).acos();
    let beta = ((d * d + rb * rb - ra * ra) / (2.0 * d * rb)).clamp(-1.0, 1.0).acos();
    let k = (-d + ra + rb) * (d + ra - rb) * (d - ra + rb) * (d + ra + rb);
    ra * ra * alpha + rb * rb * beta - 0.5 * k.max(0.0).sqrt()
}

/// Overlap of the slab {a ≤ x ≤ b} with B(0, r).
pub fn disk_slab_area(a: f64, b: f64, r: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    disk_halfplane_area(b, r) - disk_halfplane_area(a, r)
}

/// Euclidean distance from a point to a segment.
pub fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let ab = (b.0 - a.0, b.1 - a.1);
    let ap = (p.0 - a.0, p.1 - a.1);
    let len2 = ab.0 * ab.0 + ab.1 * ab.1;
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((ap.0 * ab.0 + ap.1 * ab.1) / len2).clamp(0.0, 1.0)
    };
    let q = (a.0 + t * ab.0, a.1 + t * ab.1);
    ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt()
}

/// Length of the arc of the circle ∂B(c, s) lying inside B(0, r),
/// where d = |c|.
pub fn arc_length_inside_disk(d: f64, s: f64, r: f64) -> f64 {
    if d + s <= r {
        return 2.0 * std::f64::consts::PI * s;
    }
    if d >= r + s || s >= d + r {
        // fully outside, or the circle encloses the disk
        if s >= d + r {
            return 0.0;
        }
        return 0.0;
    }
    let cos_t = (d * d + s * s - r * r) / (2.0 * d * s);
    2.0 * s * cos_t.clamp(-1.0, 1.0).acos()
}

/// Gauss–Legendre nodes and weights on [−1, 1], by Newton iteration on the
/// Legendre recurrence. n up to a few hundred is fine.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (mut p0, mut p1) = (1.0f64, x);
        for k in 2..=n {
            let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = p2;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// ∫ₐᵇ f dx by fixed-order Gauss–Legendre.
pub fn gl_integrate<F: Fn(f64) -> f64>(a: f64, b: f64, n: usize, f: F) -> f64 {
    let (xs, ws) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    xs.iter()
        .zip(&ws)
        .map(|(&x, &w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn grid_corner_oracle(a: f64, b: f64, r: f64) -> f64 {
        let n = 2000;
        let h = 2.0 * r / n as f64;
        let mut area = 0.0;
        for i in 0..n {
            let x = -r + (i as f64 + 0.5) * h;
            for j in 0..n {
                let y = -r + (j as f64 + 0.5) * h;
                if x <= a && y <= b && x * x + y * y <= r * r {
                    area += h * h;
                }
            }
        }
        area
    }

    #[test]
    fn corner_area_matches_grid_oracle() {
        let r = 0.45;
        for &(a, b) in &[
            (0.0, 0.0),
            (0.2, -0.1),
            (-0.3, 0.4),
            (0.44, 0.44),
            (-0.1, -0.3),
            (0.5, 0.1),
        ] {
            let exact = disk_corner_area(a, b, r);
            let oracle = grid_corner_oracle(a, b, r);
            assert!(
                (exact - oracle).abs() < 2e-3,
                "a={a} b={b}: exact {exact}, oracle {oracle}"
            );
        }
    }

    #[test]
    fn corner_area_limits() {
        let r = 0.3;
        assert_abs_diff_eq!(disk_corner_area(r, r, r), PI * r * r, epsilon = 1e-12);
        assert_eq!(disk_corner_area(-r, 0.0, r), 0.0);
        assert_abs_diff_eq!(disk_corner_area(0.0, r, r), 0.5 * PI * r * r, epsilon = 1e-12);
        assert_abs_diff_eq!(
            disk_corner_area(0.0, 0.0, r),
            0.25 * PI * r * r,
            epsilon = 1e-12
        );
    }

    #[test]
    fn lens_area_special_cases() {
        assert_abs_diff_eq!(disk_disk_overlap(0.0, 0.2, 0.45), PI * 0.04, epsilon = 1e-14);
        assert_eq!(disk_disk_overlap(1.0, 0.2, 0.45), 0.0);
        // symmetric half overlap sanity: centers at distance r, equal radii
        let r = 0.3;
        let lens = disk_disk_overlap(r, r, r);
        let exact = 2.0 * r * r * ((PI / 3.0) - (PI / 3.0).sin() * 0.5 * 2.0 / 2.0f64.sqrt().powi(0));
        // direct formula: 2 r² (π/3 − √3/4·...) ; use the standard value
        let expected = 2.0 * r * r * (PI / 3.0) - 0.5 * (3.0f64).sqrt() / 2.0 * r * r * 2.0;
        let _ = (exact, expected);
        let by_parts = 2.0 * (r * r * (PI / 3.0) - 0.25 * 3.0f64.sqrt() * r * r);
        assert_abs_diff_eq!(lens, by_parts, epsilon = 1e-12);
    }

    #[test]
    fn slab_recovers_the_published_stripe_overlap() {
        // half-width 0.25 stripe through a disk of radius 0.45
        let got = disk_slab_area(-0.25, 0.25, 0.45);
        let w: f64 = 0.25;
        let r: f64 = 0.45;
        let closed = 2.0 * (r * r * (w / r).asin() + w * (r * r - w * w).sqrt());
        assert_abs_diff_eq!(got, closed, epsilon = 1e-12);
        assert_abs_diff_eq!(got, 0.425639, epsilon = 1e-5);
    }

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let v = gl_integrate(-1.0, 2.0, 16, |x| 3.0 * x * x - x + 1.0);
        let exact = (2.0f64.powi(3) + 1.0) - (2.0f64.powi(2) - 1.0) / 2.0 + 3.0;
        assert_abs_diff_eq!(v, exact, epsilon = 1e-12);
    }
}
