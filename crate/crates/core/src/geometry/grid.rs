use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in up to three dimensions; unused trailing components are zero.
pub type Point = [f64; 3];

/// Axis-aligned box discretized into a uniform cell lattice.
///
/// Cells are stored with axis 0 slowest and the last axis contiguous.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    origin: Point,
    extent: Point,
    cells: [usize; 3],
    h: Point,
}

impl Grid {
    pub fn new(origin: &[f64], extent: &[f64], cells: &[usize]) -> Result<Self> {
        let dim = origin.len();
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        if extent.len() != dim || cells.len() != dim {
            return Err(Error::InvalidGrid(format!(
                "origin, extent and cells must all have length {dim}"
            )));
        }
        let mut g = Grid {
            dim,
            origin: [0.0; 3],
            extent: [0.0; 3],
            cells: [1; 3],
            h: [0.0; 3],
        };
        for a in 0..dim {
            if !(extent[a] > 0.0 && extent[a].is_finite()) {
                return Err(Error::InvalidGrid(format!("extent[{a}] = {} must be positive", extent[a])));
            }
            if !origin[a].is_finite() {
                return Err(Error::InvalidGrid(format!("origin[{a}] is not finite")));
            }
            if cells[a] < 2 {
                return Err(Error::InvalidGrid(format!("cells[{a}] = {} must be at least 2", cells[a])));
            }
            g.origin[a] = origin[a];
            g.extent[a] = extent[a];
            g.cells[a] = cells[a];
            g.h[a] = extent[a] / cells[a] as f64;
        }
        Ok(g)
    }

    /// The box `[-1/2, 1/2]^dim` with `n` cells per axis.
    pub fn centered_unit(dim: usize, n: usize) -> Result<Self> {
        Self::new(&vec![-0.5; dim], &vec![1.0; dim], &vec![n; dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin[..self.dim]
    }

    pub fn extent(&self) -> &[f64] {
        &self.extent[..self.dim]
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells[..self.dim]
    }

    pub fn h(&self) -> &[f64] {
        &self.h[..self.dim]
    }

    pub fn len(&self) -> usize {
        self.cells().iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn cell_volume(&self) -> f64 {
        self.h().iter().product()
    }

    pub fn upper(&self) -> Point {
        let mut p = [0.0; 3];
        for a in 0..self.dim {
            p[a] = self.origin[a] + self.extent[a];
        }
        p
    }

    /// Cells along the contiguous (last) axis.
    pub fn row_len(&self) -> usize {
        self.cells[self.dim - 1]
    }

    pub fn rows(&self) -> usize {
        self.len() / self.row_len()
    }

    pub fn multi_index(&self, mut idx: usize) -> [usize; 3] {
        let mut m = [0usize; 3];
        for a in (0..self.dim).rev() {
            m[a] = idx % self.cells[a];
            idx /= self.cells[a];
        }
        m
    }

    pub fn linear_index(&self, m: &[usize]) -> usize {
        let mut idx = 0;
        for a in 0..self.dim {
            idx = idx * self.cells[a] + m[a];
        }
        idx
    }

    pub fn center_of(&self, m: &[usize]) -> Point {
        let mut p = [0.0; 3];
        for a in 0..self.dim {
            p[a] = self.origin[a] + (m[a] as f64 + 0.5) * self.h[a];
        }
        p
    }

    pub fn center(&self, idx: usize) -> Point {
        self.center_of(&self.multi_index(idx))
    }

    pub fn centers(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.len()).map(move |i| self.center(i))
    }

    /// Whether `p` lies in the closed box.
    pub fn contains(&self, p: &Point) -> bool {
        (0..self.dim).all(|a| p[a] >= self.origin[a] && p[a] <= self.origin[a] + self.extent[a])
    }

    /// Distance from `p` to the boundary of the box (zero outside).
    pub fn distance_to_boundary(&self, p: &Point) -> f64 {
        let mut d = f64::INFINITY;
        for a in 0..self.dim {
            let lo = p[a] - self.origin[a];
            let hi = self.origin[a] + self.extent[a] - p[a];
            d = d.min(lo).min(hi);
        }
        d.max(0.0)
    }

    pub fn diameter(&self) -> f64 {
        self.extent().iter().map(|e| e * e).sum::<f64>().sqrt()
    }

    /// Compact description used in reports.
    pub fn meta(&self) -> GridMeta {
        GridMeta {
            dim: self.dim,
            origin: self.origin().to_vec(),
            extent: self.extent().to_vec(),
            cells: self.cells().to_vec(),
        }
    }
}

/// Serializable grid description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub dim: usize,
    pub origin: Vec<f64>,
    pub extent: Vec<f64>,
    pub cells: Vec<usize>,
}

impl GridMeta {
    pub fn build(&self) -> Result<Grid> {
        if self.origin.len() != self.dim {
            return Err(Error::InvalidGrid(format!(
                "dim = {} but origin has {} components",
                self.dim,
                self.origin.len()
            )));
        }
        Grid::new(&self.origin, &self.extent, &self.cells)
    }

    /// Identifier such as `128x128`.
    pub fn id(&self) -> String {
        self.cells.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("x")
    }
}

pub(crate) fn dot(a: &Point, b: &Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn sub(a: &Point, b: &Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn add_scaled(a: &Point, b: &Point, s: f64) -> Point {
    [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]]
}

pub(crate) fn cross(a: &Point, b: &Point) -> Point {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm(a: &Point) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn to_point(v: &[f64]) -> Point {
    let mut p = [0.0; 3];
    for (dst, src) in p.iter_mut().zip(v) {
        *dst = *src;
    }
    p
}
