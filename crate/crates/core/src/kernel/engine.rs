//! Tiled evaluation of per-cell sums `Σ_y f(x, y)·vol/|y−x|^{N+1}`.
//!
//! Cells are grouped into rows along the last axis. For a target row and a
//! source row the kernel only depends on the column offset, so one row of a
//! precomputed offset table serves every target in the row. Each target's
//! row partials are reduced in a fixed order, which makes results
//! independent of tiling and thread count.

use rayon::prelude::*;

use super::plan::KernelPlan;
use crate::error::Result;
use crate::geometry::Grid;

/// `vol/|r|^{N+1}` over absolute cell offsets, zero at the origin.
pub(crate) struct OffsetTable {
    n: usize,
    row_dims: [usize; 2],
    fwd: Vec<f64>,
    rev: Vec<f64>,
}

impl OffsetTable {
    pub(crate) fn new(grid: &Grid) -> Self {
        let dim = grid.dim();
        let h = grid.h();
        let cells = grid.cells();
        let n = grid.row_len();
        let mut row_dims = [1usize; 2];
        for a in 0..dim - 1 {
            row_dims[a] = cells[a];
        }
        let rows = row_dims[0] * row_dims[1];
        let vol = grid.cell_volume();
        let p = (dim + 1) as f64;
        let mut fwd = vec![0.0; rows * n];
        for r in 0..rows {
            let (i0, i1) = (r / row_dims[1], r % row_dims[1]);
            let mut base = 0.0;
            if dim >= 2 {
                let d0 = i0 as f64 * h[0];
                base += d0 * d0;
            }
            if dim == 3 {
                let d1 = i1 as f64 * h[1];
                base += d1 * d1;
            }
            let hl = h[dim - 1];
            for k in 0..n {
                let dk = k as f64 * hl;
                let r2 = base + dk * dk;
                fwd[r * n + k] = if r2 > 0.0 { vol / r2.powf(p / 2.0) } else { 0.0 };
            }
        }
        let mut rev = vec![0.0; rows * n];
        for r in 0..rows {
            for i in 0..n {
                rev[r * n + i] = fwd[r * n + n - 1 - i];
            }
        }
        Self { n, row_dims, fwd, rev }
    }

    #[inline]
    fn row_offset_index(&self, a: [usize; 2], b: [usize; 2]) -> usize {
        a[0].abs_diff(b[0]) * self.row_dims[1] + a[1].abs_diff(b[1])
    }
}

/// Per-target inner sum over one source row.
///
/// `kf[k]` is the kernel at column offset `k`; `kr` is `kf` reversed so
/// that columns left of `jx` can be traversed forward.
pub(crate) trait RowKernel: Sync {
    fn row_sum(&self, target: usize, source_row_start: usize, jx: usize, kf: &[f64], kr: &[f64]) -> f64;
}

/// Evaluates `out[x] = Σ_rows kernel.row_sum(...)` for every target cell.
pub(crate) fn run<K: RowKernel>(
    grid: &Grid,
    plan: &KernelPlan,
    targets: &[bool],
    sources: &[bool],
    kernel: &K,
) -> Result<Vec<f64>> {
    let table = OffsetTable::new(grid);
    let n = table.n;
    let rows = grid.rows();
    let row_index = |r: usize| -> [usize; 2] {
        match grid.dim() {
            1 => [0, 0],
            2 => [r, 0],
            _ => [r / grid.cells()[1], r % grid.cells()[1]],
        }
    };
    let active_sources: Vec<usize> = (0..rows)
        .filter(|r| sources[r * n..(r + 1) * n].iter().any(|m| *m))
        .collect();
    let tile_rows = (plan.tile / n).max(1);
    let summation = plan.summation;
    let mut out = vec![0.0; grid.len()];
    plan.install(|| {
        out.par_chunks_mut(tile_rows * n).enumerate().for_each(|(ti, chunk)| {
            let mut partial = vec![0.0; n * active_sources.len()];
            let ns = active_sources.len();
            for (local_row, row_out) in chunk.chunks_mut(n).enumerate() {
                let rx = ti * tile_rows + local_row;
                let tmask = &targets[rx * n..(rx + 1) * n];
                if !tmask.iter().any(|m| *m) {
                    continue;
                }
                let ix = row_index(rx);
                for (si, &ry) in active_sources.iter().enumerate() {
                    let t = table.row_offset_index(ix, row_index(ry)) * n;
                    let kf = &table.fwd[t..t + n];
                    let kr = &table.rev[t..t + n];
                    for jx in 0..n {
                        if tmask[jx] {
                            partial[jx * ns + si] = kernel.row_sum(rx * n + jx, ry * n, jx, kf, kr);
                        }
                    }
                }
                for jx in 0..n {
                    if tmask[jx] {
                        row_out[jx] = summation.sum(&partial[jx * ns..(jx + 1) * ns]);
                    }
                }
            }
        });
    })?;
    Ok(out)
}

/// `Σ m_y (u_y − u_x)² K`.
pub(crate) struct SquaredDifference<'a> {
    pub u: &'a [f64],
    pub m: &'a [f64],
}

impl RowKernel for SquaredDifference<'_> {
    #[inline]
    fn row_sum(&self, target: usize, start: usize, jx: usize, kf: &[f64], kr: &[f64]) -> f64 {
        let n = kf.len();
        let ux = self.u[target];
        let u = &self.u[start..start + n];
        let m = &self.m[start..start + n];
        let (ur, mr, kfr) = (&u[jx + 1..], &m[jx + 1..], &kf[1..n - jx]);
        let right = lanes4!(ur.len(), |i| {
            let d = ur[i] - ux;
            mr[i] * d * d * kfr[i]
        });
        let (ul, ml, krl) = (&u[..jx], &m[..jx], &kr[n - 1 - jx..n - 1]);
        let left = lanes4!(ul.len(), |i| {
            let d = ul[i] - ux;
            ml[i] * d * d * krl[i]
        });
        let d0 = u[jx] - ux;
        m[jx] * d0 * d0 * kf[0] + right + left
    }
}

/// `Σ m_y K`.
pub(crate) struct Weight<'a> {
    pub m: &'a [f64],
}

impl RowKernel for Weight<'_> {
    #[inline]
    fn row_sum(&self, _target: usize, start: usize, jx: usize, kf: &[f64], kr: &[f64]) -> f64 {
        let n = kf.len();
        let m = &self.m[start..start + n];
        let (mr, kfr) = (&m[jx + 1..], &kf[1..n - jx]);
        let right = lanes4!(mr.len(), |i| mr[i] * kfr[i]);
        let (ml, krl) = (&m[..jx], &kr[n - 1 - jx..n - 1]);
        let left = lanes4!(ml.len(), |i| ml[i] * krl[i]);
        m[jx] * kf[0] + right + left
    }
}

/// `Σ m_y (u_x − u_y)(c_x + q_y) K`.
pub(crate) struct WeightedDifference<'a> {
    pub u: &'a [f64],
    pub m: &'a [f64],
    pub c: &'a [f64],
    pub q: &'a [f64],
}

impl RowKernel for WeightedDifference<'_> {
    #[inline]
    fn row_sum(&self, target: usize, start: usize, jx: usize, kf: &[f64], kr: &[f64]) -> f64 {
        let n = kf.len();
        let ux = self.u[target];
        let cx = self.c[target];
        let u = &self.u[start..start + n];
        let m = &self.m[start..start + n];
        let q = &self.q[start..start + n];
        let (ur, mr, qr, kfr) = (&u[jx + 1..], &m[jx + 1..], &q[jx + 1..], &kf[1..n - jx]);
        let right = lanes4!(ur.len(), |i| mr[i] * (ux - ur[i]) * (cx + qr[i]) * kfr[i]);
        let (ul, ml, ql, krl) = (&u[..jx], &m[..jx], &q[..jx], &kr[n - 1 - jx..n - 1]);
        let left = lanes4!(ul.len(), |i| ml[i] * (ux - ul[i]) * (cx + ql[i]) * krl[i]);
        m[jx] * (ux - u[jx]) * (cx + q[jx]) * kf[0] + right + left
    }
}
