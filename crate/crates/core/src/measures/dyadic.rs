//! Nested dyadic partitions of the torus: 2ⁿᵏ disjoint cubes of side 2⁻ᵏ at
//! level k, each level-k cube the union of 2ⁿ level-(k+1) cubes.

use crate::torus::point::TorusPoint;

#[derive(Clone, Copy, Debug)]
pub struct DyadicPartition {
    pub level: u32,
    pub dimension: usize,
}

impl DyadicPartition {
    pub fn new(level: u32, dimension: usize) -> Self {
        assert!(dimension == 2 || dimension == 3);
        assert!(level <= 12, "dyadic level {level} is unreasonably deep");
        Self { level, dimension }
    }

    pub fn side(&self) -> f64 {
        0.5f64.powi(self.level as i32)
    }

    pub fn cubes_per_axis(&self) -> usize {
        1usize << self.level
    }

    pub fn cube_count(&self) -> usize {
        self.cubes_per_axis().pow(self.dimension as u32)
    }

    /// Lower corner of cube `index` (row-major over axes).
    pub fn cube_corner(&self, index: usize) -> Vec<f64> {
        let m = self.cubes_per_axis();
        let mut corner = vec![0.0; self.dimension];
        let mut rest = index;
        for a in (0..self.dimension).rev() {
            corner[a] = -0.5 + (rest % m) as f64 * self.side();
            rest /= m;
        }
        corner
    }

    /// Bounds (x0, x1, y0, y1) of a two-dimensional cube.
    pub fn cube_bounds2(&self, index: usize) -> (f64, f64, f64, f64) {
        let c = self.cube_corner(index);
        let s = self.side();
        (c[0], c[0] + s, c[1], c[1] + s)
    }

    pub fn cube_containing(&self, p: &TorusPoint) -> usize {
        let m = self.cubes_per_axis();
        let mut index = 0;
        for a in 0..self.dimension {
            let i = (((p.get(a) + 0.5) / self.side()).floor() as isize)
                .rem_euclid(m as isize) as usize;
            index = index * m + i;
        }
        index
    }

    /// Indices of the level-(k+1) children of a cube.
    pub fn children(&self, index: usize) -> Vec<usize> {
        let fine = DyadicPartition::new(self.level + 1, self.dimension);
        let m = self.cubes_per_axis();
        let fm = fine.cubes_per_axis();
        let mut axes = vec![0usize; self.dimension];
        let mut rest = index;
        for a in (0..self.dimension).rev() {
            axes[a] = rest % m;
            rest /= m;
        }
        let mut out = Vec::new();
        let combos = 1usize << self.dimension;
        for c in 0..combos {
            let mut idx = 0;
            for (a, &ax) in axes.iter().enumerate() {
                let bit = (c >> a) & 1;
                idx = idx * fm + (2 * ax + bit);
            }
            out.push(idx);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn coarse_levels_have_the_expected_counts() {
        assert_eq!(DyadicPartition::new(0, 2).cube_count(), 1);
        assert_eq!(DyadicPartition::new(1, 2).cube_count(), 4);
        assert_abs_diff_eq!(DyadicPartition::new(1, 2).side(), 0.5, epsilon = 0.0);
        let p3 = DyadicPartition::new(3, 2);
        assert_eq!(p3.cube_count(), 64);
        let total: f64 = (0..64).map(|_| p3.side() * p3.side()).sum();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn cubes_tile_without_overlap() {
        let p = DyadicPartition::new(2, 2);
        for k in 0..200 {
            let q = TorusPoint::new2(-0.5 + (k as f64 * 0.317) % 1.0, -0.5 + (k as f64 * 0.71) % 1.0);
            let idx = p.cube_containing(&q);
            let (x0, x1, y0, y1) = p.cube_bounds2(idx);
            assert!(q.get(0) >= x0 - 1e-12 && q.get(0) < x1 + 1e-12);
            assert!(q.get(1) >= y0 - 1e-12 && q.get(1) < y1 + 1e-12);
        }
    }

    #[test]
    fn children_refine_their_parent() {
        let p = DyadicPartition::new(2, 2);
        let fine = DyadicPartition::new(3, 2);
        for idx in 0..p.cube_count() {
            let (x0, x1, y0, y1) = p.cube_bounds2(idx);
            let kids = p.children(idx);
            assert_eq!(kids.len(), 4);
            let mut area = 0.0;
            for k in kids {
                let (cx0, cx1, cy0, cy1) = fine.cube_bounds2(k);
                assert!(cx0 >= x0 - 1e-15 && cx1 <= x1 + 1e-15);
                assert!(cy0 >= y0 - 1e-15 && cy1 <= y1 + 1e-15);
                area += (cx1 - cx0) * (cy1 - cy0);
            }
            assert_abs_diff_eq!(area, (x1 - x0) * (y1 - y0), epsilon = 1e-15);
        }
    }
}
