use super::field::{CellSet, PhaseField};
use super::grid::{Grid, Point};
use super::interface::{Facet, PolyhedralInterface};
use crate::error::{ensure_range, Result};

/// Splits facets into those meeting the grid box and those outside it.
pub fn facets_in_box<'a>(interface: &'a PolyhedralInterface, grid: &Grid) -> (Vec<&'a Facet>, Vec<usize>) {
    let mut kept = Vec::new();
    let mut ignored = Vec::new();
    for (i, f) in interface.facets().iter().enumerate() {
        if f.meets_box(grid) {
            kept.push(f);
        } else {
            ignored.push(i);
        }
    }
    (kept, ignored)
}

/// Phase of `p` relative to the nearest facet: `true` for β.
///
/// Ties between equidistant facets go to the one whose hyperplane is
/// farthest from `p`; points exactly on a hyperplane are β iff the first
/// nonzero normal component is positive, so flipping the orientation
/// swaps the phases exactly.
pub(crate) fn beta_side(facets: &[&Facet], p: &Point) -> bool {
    let mut best: Option<(f64, f64, &Facet)> = None;
    for f in facets {
        let d = f.distance(p);
        let s = f.signed_distance(p);
        let better = match best {
            None => true,
            Some((bd, bs, _)) => {
                let tol = 1e-12 * (1.0 + bd);
                d < bd - tol || ((d - bd).abs() <= tol && s.abs() > bs.abs())
            }
        };
        if better {
            best = Some((d, s, f));
        }
    }
    match best {
        None => false,
        Some((_, s, f)) => {
            if s < 0.0 {
                true
            } else if s > 0.0 {
                false
            } else {
                f.normal().iter().find(|c| **c != 0.0).map_or(false, |c| *c > 0.0)
            }
        }
    }
}

/// Two-valued field: β on the negative side of the nearest facet, α elsewhere.
pub fn rasterize_interface(interface: &PolyhedralInterface, grid: &Grid, alpha: f64, beta: f64) -> Result<PhaseField> {
    let (kept, ignored) = facets_in_box(interface, grid);
    for i in ignored {
        log::warn!("facet {i} lies outside the grid box and is ignored");
    }
    PhaseField::from_fn(grid.clone(), alpha, beta, |p| if beta_side(&kept, p) { beta } else { alpha })
}

/// Erosion of a cell set.
#[derive(Debug, Clone, PartialEq)]
pub struct Shrunk {
    pub set: CellSet,
    pub empty: bool,
}

/// Keeps the cells whose centers are farther than `margin` from the
/// complement of `z` (cells outside `z` and everything outside the box).
pub fn shrink_set(z: &CellSet, margin: f64) -> Result<Shrunk> {
    ensure_range("margin", margin, margin >= 0.0 && margin.is_finite(), "margin >= 0")?;
    let grid = z.grid();
    let dim = grid.dim();
    let h = grid.h();
    let cells = grid.cells();
    let mut reach = [0usize; 3];
    for a in 0..dim {
        reach[a] = ((margin / h[a]).ceil() as usize + 1).min(cells[a]);
    }
    let members = z.members();
    let mut out = vec![false; grid.len()];
    for idx in 0..grid.len() {
        if !members[idx] {
            continue;
        }
        let center = grid.center(idx);
        if grid.distance_to_boundary(&center) <= margin {
            continue;
        }
        let m = grid.multi_index(idx);
        let mut lo = [0usize; 3];
        let mut hi = [0usize; 3];
        for a in 0..dim {
            lo[a] = m[a].saturating_sub(reach[a]);
            hi[a] = (m[a] + reach[a]).min(cells[a] - 1);
        }
        let mut keep = true;
        let mut q = lo;
        'scan: loop {
            let j = grid.linear_index(&q[..dim]);
            if !members[j] {
                let mut d2 = 0.0;
                for a in 0..dim {
                    let off = (q[a] as f64 - m[a] as f64).abs() * h[a];
                    let gap = (off - 0.5 * h[a]).max(0.0);
                    d2 += gap * gap;
                }
                if d2.sqrt() <= margin {
                    keep = false;
                    break 'scan;
                }
            }
            let mut a = dim;
            loop {
                if a == 0 {
                    break 'scan;
                }
                a -= 1;
                if q[a] < hi[a] {
                    q[a] += 1;
                    break;
                }
                q[a] = lo[a];
            }
        }
        out[idx] = keep;
    }
    let empty = !out.iter().any(|m| *m);
    Ok(Shrunk {
        set: CellSet::new(grid.clone(), out)?,
        empty,
    })
}

/// Near-well sets `{u < α + δ}` and `{u > β − δ}`.
pub fn phase_sets(u: &PhaseField, delta: f64) -> Result<(CellSet, CellSet)> {
    let (alpha, beta) = (u.alpha(), u.beta());
    ensure_range(
        "delta",
        delta,
        delta > 0.0 && delta < (beta - alpha) / 2.0,
        "0 < delta < (beta - alpha) / 2",
    )?;
    let a = u.values().iter().map(|v| *v < alpha + delta).collect();
    let b = u.values().iter().map(|v| *v > beta - delta).collect();
    Ok((CellSet::new(u.grid().clone(), a)?, CellSet::new(u.grid().clone(), b)?))
}
