//! Level-set extraction on the periodic grid.
//!
//! Marching squares over the dual cells spanned by four neighboring cell
//! centers, with linear interpolation along cut edges and stitching across
//! the periodic boundary. Every chain closes on the torus; its homology
//! class is recovered from the accumulated displacement. Chains are oriented
//! with the super-level set {f > level} on the left; the reported wrap class
//! is canonicalized so its first nonzero component is positive.
//!
//! Ambiguous saddle cells are split according to the sign of the cell-center
//! average, which is deterministic and resolution-consistent.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::torus::grid::ScalarField;
use crate::torus::point::{wrap_delta, wrap_distance, TorusPoint};

/// One closed (possibly torus-wrapping) polyline of the extracted level set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InterfaceChain {
    pub vertices: Vec<TorusPoint>,
    /// Winding numbers around each axis; (0, 0) iff the chain is contractible.
    pub wrap_class: (i32, i32),
}

impl InterfaceChain {
    pub fn is_contractible(&self) -> bool {
        self.wrap_class == (0, 0)
    }
}

/// Total length of the chain including the closing segment, with every
/// segment measured by the periodic metric.
pub fn chain_length(chain: &InterfaceChain) -> f64 {
    let n = chain.vertices.len();
    if n < 2 {
        return 0.0;
    }
    let mut len = 0.0;
    for k in 0..n {
        let a = &chain.vertices[k];
        let b = &chain.vertices[(k + 1) % n];
        len += wrap_distance(a, b).expect("chain vertices share a dimension");
    }
    len
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum EdgeKind {
    H, // along axis 0, between samples (i, j) and (i+1, j)
    V, // along axis 1, between samples (i, j) and (i, j+1)
}

type EdgeId = (EdgeKind, usize, usize);

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum LocalEdge {
    Bottom, // H(i, j)
    Right,  // V(i+1, j)
    Top,    // H(i, j+1)
    Left,   // V(i, j)
}

fn global_edge(cell: (usize, usize), e: LocalEdge, res: usize) -> EdgeId {
    let (i, j) = cell;
    match e {
        LocalEdge::Bottom => (EdgeKind::H, i, j),
        LocalEdge::Top => (EdgeKind::H, i, (j + 1) % res),
        LocalEdge::Left => (EdgeKind::V, i, j),
        LocalEdge::Right => (EdgeKind::V, (i + 1) % res, j),
    }
}

/// Neighbor cell across a local edge, and the local edge it is seen as there.
fn neighbor(cell: (usize, usize), e: LocalEdge, res: usize) -> ((usize, usize), LocalEdge) {
    let (i, j) = cell;
    match e {
        LocalEdge::Bottom => ((i, (j + res - 1) % res), LocalEdge::Top),
        LocalEdge::Top => ((i, (j + 1) % res), LocalEdge::Bottom),
        LocalEdge::Left => (((i + res - 1) % res, j), LocalEdge::Right),
        LocalEdge::Right => (((i + 1) % res, j), LocalEdge::Left),
    }
}

/// Directed segments (entry → exit) for every marching-squares case with the
/// inside region on the left. Saddles (cases 5 and 10) are handled separately.
fn case_segments(case: u8) -> &'static [(LocalEdge, LocalEdge)] {
    use LocalEdge::*;
    match case {
        1 => &[(Bottom, Left)],
        2 => &[(Right, Bottom)],
        3 => &[(Right, Left)],
        4 => &[(Top, Right)],
        6 => &[(Top, Bottom)],
        7 => &[(Top, Left)],
        8 => &[(Left, Top)],
        9 => &[(Bottom, Top)],
        11 => &[(Right, Top)],
        12 => &[(Left, Right)],
        13 => &[(Bottom, Right)],
        14 => &[(Left, Bottom)],
        _ => &[],
    }
}

/// Marching-squares contour extraction with periodic stitching.
pub fn extract_interface(f: &ScalarField, level: f64) -> Result<Vec<InterfaceChain>> {
    if f.spec.dimension != 2 {
        return Err(CoreError::Unsupported(
            "interface extraction is two-dimensional only".into(),
        ));
    }
    if !(f.min_value() < level && level < f.max_value()) {
        return Err(CoreError::NoInterface);
    }

    let res = f.spec.resolution;
    let h = f.spec.spacing();
    let inside = |v: f64| v > level;

    // Crossing point on a cut edge, by linear interpolation.
    let mut crossings: HashMap<EdgeId, (f64, f64)> = HashMap::new();
    let mut crossing = |edge: EdgeId, f: &ScalarField| -> (f64, f64) {
        if let Some(&p) = crossings.get(&edge) {
            return p;
        }
        let (kind, i, j) = edge;
        let v0 = f.get2(i, j);
        let (i1, j1) = match kind {
            EdgeKind::H => ((i + 1) % res, j),
            EdgeKind::V => (i, (j + 1) % res),
        };
        let v1 = f.get2(i1, j1);
        let theta = ((level - v0) / (v1 - v0)).clamp(0.0, 1.0);
        let x0 = f.spec.center_coord(i);
        let x1 = f.spec.center_coord(j);
        let p = match kind {
            EdgeKind::H => (x0 + theta * h, x1),
            EdgeKind::V => (x0, x1 + theta * h),
        };
        crossings.insert(edge, p);
        p
    };

    // cell + entry edge -> exit edge
    let mut segments: HashMap<((usize, usize), LocalEdge), LocalEdge> = HashMap::new();
    for i in 0..res {
        for j in 0..res {
            let va = f.get2(i, j);
            let vb = f.get2((i + 1) % res, j);
            let vc = f.get2((i + 1) % res, (j + 1) % res);
            let vd = f.get2(i, (j + 1) % res);
            let mut case = 0u8;
            if inside(va) {
                case |= 1;
            }
            if inside(vb) {
                case |= 2;
            }
            if inside(vc) {
                case |= 4;
            }
            if inside(vd) {
                case |= 8;
            }
            use LocalEdge::*;
            let segs: &[(LocalEdge, LocalEdge)] = match case {
                5 => {
                    if inside((va + vb + vc + vd) / 4.0) {
                        &[(Bottom, Right), (Top, Left)]
                    } else {
                        &[(Bottom, Left), (Top, Right)]
                    }
                }
                10 => {
                    if inside((va + vb + vc + vd) / 4.0) {
                        &[(Left, Bottom), (Right, Top)]
                    } else {
                        &[(Right, Bottom), (Left, Top)]
                    }
                }
                c => case_segments(c),
            };
            for &(entry, exit) in segs {
                segments.insert(((i, j), entry), exit);
            }
        }
    }

    let mut visited: HashMap<((usize, usize), LocalEdge), bool> = HashMap::new();
    let mut chains = Vec::new();
    let starts: Vec<((usize, usize), LocalEdge)> = segments.keys().cloned().collect();

    for start in starts {
        if visited.contains_key(&start) {
            continue;
        }
        let mut vertices: Vec<TorusPoint> = Vec::new();
        let mut disp = (0.0f64, 0.0f64);
        let mut prev: Option<(f64, f64)> = None;
        let mut cur = start;
        loop {
            visited.insert(cur, true);
            let (cell, entry) = cur;
            let exit = segments[&cur];
            let p_in = crossing(global_edge(cell, entry, res), f);
            let p_out = crossing(global_edge(cell, exit, res), f);
            if vertices.is_empty() {
                vertices.push(TorusPoint::new2(p_in.0, p_in.1));
                prev = Some(p_in);
            }
            let pr = prev.unwrap();
            disp.0 += wrap_delta(p_out.0, pr.0);
            disp.1 += wrap_delta(p_out.1, pr.1);
            prev = Some(p_out);
            let (ncell, nentry) = neighbor(cell, exit, res);
            cur = (ncell, nentry);
            if cur == start {
                break;
            }
            vertices.push(TorusPoint::new2(p_out.0, p_out.1));
        }
        // Displacement now runs from the first vertex all the way around; it
        // must close up to an integer lattice vector.
        let w0 = disp.0.round();
        let w1 = disp.1.round();
        debug_assert!((disp.0 - w0).abs() < 1e-6 && (disp.1 - w1).abs() < 1e-6);
        let mut wrap = (w0 as i32, w1 as i32);
        if wrap.0 < 0 || (wrap.0 == 0 && wrap.1 < 0) {
            wrap = (-wrap.0, -wrap.1);
        }
        chains.push(InterfaceChain {
            vertices,
            wrap_class: wrap,
        });
    }

    Ok(chains)
}
