use serde::{Deserialize, Serialize};

use super::grid::{add_scaled, cross, dot, norm, sub, to_point, Grid, Point};
use super::polygon::{self, P2};
use crate::error::{Error, Result};

const PLANE_TOL: f64 = 1e-9;

/// Bounded piece of a hyperplane `normal·x = offset`.
///
/// In one dimension a facet is a point, in two a segment and in three a
/// convex polygon. The normal points into the α phase.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    dim: usize,
    normal: Point,
    offset: f64,
    vertices: Vec<Point>,
    density: Option<f64>,
    area: f64,
    anchor: Point,
    e1: Point,
    e2: Point,
    local: Vec<P2>,
}

/// Serializable facet description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetSpec {
    pub normal: Vec<f64>,
    pub offset: f64,
    #[serde(default)]
    pub vertices: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
}

impl Facet {
    /// Validates and normalizes a facet; `index` is used in error messages.
    pub fn new(
        dim: usize,
        index: usize,
        normal: &[f64],
        offset: f64,
        vertices: &[Vec<f64>],
        density: Option<f64>,
    ) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        let invalid = |reason: String| Error::InvalidFacet { index, reason };
        if normal.len() != dim {
            return Err(invalid(format!("normal must have {dim} components")));
        }
        let raw = to_point(normal);
        let len = norm(&raw);
        if !(len > 0.0 && len.is_finite()) || !offset.is_finite() {
            return Err(invalid("normal must be nonzero and finite".into()));
        }
        let nu = [raw[0] / len, raw[1] / len, raw[2] / len];
        let offset = offset / len;
        if let Some(g) = density {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(invalid(format!("density {g} must be nonnegative")));
            }
        }
        let mut verts = Vec::with_capacity(vertices.len());
        for v in vertices {
            if v.len() != dim {
                return Err(invalid(format!("vertices must have {dim} components")));
            }
            let p = to_point(v);
            let scale = 1.0 + offset.abs() + norm(&p);
            if (dot(&nu, &p) - offset).abs() > PLANE_TOL * scale {
                return Err(invalid(format!("vertex {v:?} is off the facet hyperplane")));
            }
            verts.push(p);
        }
        let mut facet = Facet {
            dim,
            normal: nu,
            offset,
            vertices: verts,
            density,
            area: 0.0,
            anchor: [0.0; 3],
            e1: [0.0; 3],
            e2: [0.0; 3],
            local: Vec::new(),
        };
        match dim {
            1 => {
                if facet.vertices.len() > 1 {
                    return Err(invalid("a point facet takes at most one vertex".into()));
                }
                facet.anchor = [offset * nu[0], 0.0, 0.0];
                facet.vertices = vec![facet.anchor];
                facet.area = 1.0;
            }
            2 => {
                if facet.vertices.len() != 2 {
                    return Err(invalid("a segment facet needs exactly two vertices".into()));
                }
                facet.anchor = facet.vertices[0];
                facet.e1 = [-nu[1], nu[0], 0.0];
                let t1 = dot(&facet.e1, &sub(&facet.vertices[1], &facet.anchor));
                let (lo, hi) = if t1 >= 0.0 { (0.0, t1) } else { (t1, 0.0) };
                facet.local = vec![[lo, 0.0], [hi, 0.0]];
                facet.area = hi - lo;
            }
            _ => {
                if facet.vertices.len() < 3 {
                    return Err(Error::DegenerateFacet {
                        index,
                        reason: "fewer than three vertices".into(),
                    });
                }
                facet.anchor = facet.vertices[0];
                let edge = facet
                    .vertices
                    .iter()
                    .map(|v| sub(v, &facet.anchor))
                    .find(|d| norm(d) > 0.0)
                    .ok_or_else(|| Error::DegenerateFacet {
                        index,
                        reason: "all vertices coincide".into(),
                    })?;
                let el = norm(&edge);
                facet.e1 = [edge[0] / el, edge[1] / el, edge[2] / el];
                facet.e2 = cross(&nu, &facet.e1);
                let local: Vec<P2> = facet.vertices.iter().map(|v| facet.to_local(v)).collect();
                let local = polygon::make_ccw(local);
                let scale = local.iter().map(|p| p[0].abs().max(p[1].abs())).fold(0.0, f64::max);
                if !polygon::is_convex(&local, 1e-12 * scale * scale) {
                    return Err(invalid("polygon facets must be convex".into()));
                }
                facet.area = polygon::area(&local);
                facet.local = local;
            }
        }
        if !(facet.area > 0.0) {
            return Err(Error::DegenerateFacet {
                index,
                reason: "zero area".into(),
            });
        }
        Ok(facet)
    }

    pub fn from_spec(dim: usize, index: usize, spec: &FacetSpec) -> Result<Self> {
        Self::new(dim, index, &spec.normal, spec.offset, &spec.vertices, spec.density)
    }

    pub fn to_spec(&self) -> FacetSpec {
        FacetSpec {
            normal: self.normal[..self.dim].to_vec(),
            offset: self.offset,
            vertices: if self.dim == 1 {
                Vec::new()
            } else {
                self.vertices.iter().map(|v| v[..self.dim].to_vec()).collect()
            },
            density: self.density,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn normal(&self) -> &Point {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn density(&self) -> Option<f64> {
        self.density
    }

    /// H^{N-1} measure; a point facet has area 1.
    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn with_density(mut self, density: Option<f64>) -> Self {
        self.density = density;
        self
    }

    /// Same facet with the opposite orientation.
    pub fn flipped(&self) -> Self {
        let mut f = self.clone();
        f.normal = [-self.normal[0], -self.normal[1], -self.normal[2]];
        f.offset = -self.offset;
        f.e1 = [-self.e1[0], -self.e1[1], -self.e1[2]];
        if self.dim == 2 {
            f.local = self.local.iter().rev().map(|p| [-p[0], 0.0]).collect();
        } else if self.dim == 3 {
            f.local = polygon::make_ccw(self.local.iter().map(|p| [-p[0], p[1]]).collect());
        }
        f
    }

    /// `normal·p - offset`; positive on the α side.
    pub fn signed_distance(&self, p: &Point) -> f64 {
        dot(&self.normal, p) - self.offset
    }

    /// In-plane coordinates of the orthogonal projection of `p`.
    pub fn to_local(&self, p: &Point) -> P2 {
        let d = sub(p, &self.anchor);
        [dot(&self.e1, &d), dot(&self.e2, &d)]
    }

    pub fn from_local(&self, q: P2) -> Point {
        add_scaled(&add_scaled(&self.anchor, &self.e1, q[0]), &self.e2, q[1])
    }

    /// Local polygon (a two-point interval along the first axis for segments).
    pub fn local_polygon(&self) -> &[P2] {
        &self.local
    }

    /// Euclidean distance from `p` to the facet.
    pub fn distance(&self, p: &Point) -> f64 {
        let s = self.signed_distance(p);
        let lateral = match self.dim {
            1 => 0.0,
            2 => {
                let t = self.to_local(p)[0];
                let (lo, hi) = (self.local[0][0], self.local[1][0]);
                if t < lo {
                    lo - t
                } else if t > hi {
                    t - hi
                } else {
                    0.0
                }
            }
            _ => polygon::distance(&self.local, self.to_local(p)),
        };
        (s * s + lateral * lateral).sqrt()
    }

    /// Whether the orthogonal projection of `p` onto the hyperplane lies in the facet.
    pub fn covers(&self, p: &Point, tol: f64) -> bool {
        match self.dim {
            1 => true,
            2 => {
                let t = self.to_local(p)[0];
                t >= self.local[0][0] - tol && t <= self.local[1][0] + tol
            }
            _ => polygon::contains(&self.local, self.to_local(p), tol),
        }
    }

    pub fn bounding_box(&self) -> (Point, Point) {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for v in &self.vertices {
            for a in 0..3 {
                lo[a] = lo[a].min(v[a]);
                hi[a] = hi[a].max(v[a]);
            }
        }
        (lo, hi)
    }

    /// Whether the facet's bounding box meets the closed grid box.
    pub fn meets_box(&self, grid: &Grid) -> bool {
        let (lo, hi) = self.bounding_box();
        let upper = grid.upper();
        (0..self.dim).all(|a| hi[a] >= grid.origin()[a] && lo[a] <= upper[a])
    }

    pub fn centroid(&self) -> Point {
        match self.dim {
            1 => self.anchor,
            2 => self.from_local([(self.local[0][0] + self.local[1][0]) / 2.0, 0.0]),
            _ => self.from_local(polygon::centroid(&self.local)),
        }
    }

    /// Whether both facets lie in the same hyperplane (either orientation).
    pub fn coplanar(&self, other: &Facet, tol: f64) -> bool {
        let c = dot(&self.normal, &other.normal);
        (c.abs() - 1.0).abs() <= tol && (self.offset - c.signum() * other.offset).abs() <= tol
    }

    /// H^{N-1} measure of the overlap of two coplanar facets.
    pub fn overlap_area(&self, other: &Facet, tol: f64) -> f64 {
        if !self.coplanar(other, tol) {
            return 0.0;
        }
        match self.dim {
            1 => 1.0,
            2 => {
                let a = self.to_local(&other.vertices[0])[0];
                let b = self.to_local(&other.vertices[1])[0];
                let (lo, hi) = (a.min(b), a.max(b));
                (hi.min(self.local[1][0]) - lo.max(self.local[0][0])).max(0.0)
            }
            _ => {
                let other_local: Vec<P2> = other.vertices.iter().map(|v| self.to_local(v)).collect();
                let other_local = polygon::make_ccw(other_local);
                polygon::area(&polygon::intersect_convex(&self.local, &other_local))
            }
        }
    }
}

/// Oriented list of facets representing the jump set S_u.
///
/// The β phase lies on the negative side of every facet normal.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralInterface {
    dim: usize,
    facets: Vec<Facet>,
}

impl PolyhedralInterface {
    pub fn new(dim: usize, facets: Vec<Facet>) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        for (i, f) in facets.iter().enumerate() {
            if f.dim() != dim {
                return Err(Error::InvalidFacet {
                    index: i,
                    reason: format!("facet dimension {} differs from {dim}", f.dim()),
                });
            }
        }
        for i in 0..facets.len() {
            for j in 0..i {
                if facets[i].overlap_area(&facets[j], 1e-12) > 1e-12 {
                    return Err(Error::InvalidFacet {
                        index: i,
                        reason: format!("overlaps facet {j}"),
                    });
                }
            }
        }
        Ok(Self { dim, facets })
    }

    pub fn from_specs(dim: usize, specs: &[FacetSpec]) -> Result<Self> {
        let facets = specs
            .iter()
            .enumerate()
            .map(|(i, s)| Facet::from_spec(dim, i, s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dim, facets)
    }

    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            facets: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn area(&self) -> f64 {
        self.facets.iter().map(Facet::area).sum()
    }

    /// Swaps the roles of the two phases.
    pub fn flipped(&self) -> Self {
        Self {
            dim: self.dim,
            facets: self.facets.iter().map(Facet::flipped).collect(),
        }
    }

    pub fn to_specs(&self) -> Vec<FacetSpec> {
        self.facets.iter().map(Facet::to_spec).collect()
    }

    /// Index and distance of the closest facet to `p`.
    pub fn nearest(&self, p: &Point) -> Option<(usize, f64)> {
        self.facets
            .iter()
            .enumerate()
            .map(|(i, f)| (i, f.distance(p)))
            .fold(None, |best, (i, d)| match best {
                Some((_, bd)) if bd <= d => best,
                _ => Some((i, d)),
            })
    }
}

/// Point mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: Vec<f64>,
    pub mass: f64,
}

/// Atoms plus piecewise constant densities on facets.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    atoms: Vec<(Point, f64)>,
    surface: PolyhedralInterface,
}

impl DiscreteMeasure {
    /// Validates atoms against the domain and the interface `s_u`.
    ///
    /// Atoms must be inside `grid` and farther than two cell widths from
    /// every facet of `s_u`; every surface facet must carry a density.
    pub fn new(grid: &Grid, atoms: &[Atom], surface: PolyhedralInterface, s_u: &PolyhedralInterface) -> Result<Self> {
        let dim = grid.dim();
        if surface.dim() != dim || s_u.dim() != dim {
            return Err(Error::InvalidMeasure("dimension mismatch".into()));
        }
        let hmax = grid.h().iter().cloned().fold(0.0, f64::max);
        let mut out = Vec::with_capacity(atoms.len());
        for (i, atom) in atoms.iter().enumerate() {
            if atom.x.len() != dim {
                return Err(Error::InvalidMeasure(format!("atom {i} must have {dim} coordinates")));
            }
            if !(atom.mass > 0.0 && atom.mass.is_finite()) {
                return Err(Error::InvalidMeasure(format!("atom {i} mass {} must be positive", atom.mass)));
            }
            let p = to_point(&atom.x);
            if !grid.contains(&p) || grid.distance_to_boundary(&p) <= 0.0 {
                return Err(Error::InvalidMeasure(format!("atom {i} lies outside the domain")));
            }
            for (j, f) in s_u.facets().iter().enumerate() {
                if f.distance(&p) <= 2.0 * hmax {
                    return Err(Error::AtomOnInterface { index: i, facet: j });
                }
            }
            out.push((p, atom.mass));
        }
        for (i, f) in surface.facets().iter().enumerate() {
            if f.density().is_none() {
                return Err(Error::InvalidMeasure(format!("surface facet {i} has no density")));
            }
        }
        Ok(Self { atoms: out, surface })
    }

    /// Measure carried by the densities of the interface facets themselves.
    pub fn on_interface(grid: &Grid, s_u: &PolyhedralInterface, atoms: &[Atom]) -> Result<Self> {
        let facets = s_u
            .facets()
            .iter()
            .filter(|f| f.density().is_some())
            .cloned()
            .collect();
        let surface = PolyhedralInterface::new(s_u.dim(), facets)?;
        Self::new(grid, atoms, surface, s_u)
    }

    pub fn atoms(&self) -> &[(Point, f64)] {
        &self.atoms
    }

    pub fn surface(&self) -> &PolyhedralInterface {
        &self.surface
    }

    /// Total mass, in closed form.
    pub fn total_mass(&self) -> f64 {
        let atoms: f64 = self.atoms.iter().map(|a| a.1).sum();
        let surface: f64 = self
            .surface
            .facets()
            .iter()
            .map(|f| f.density().unwrap_or(0.0) * f.area())
            .sum();
        atoms + surface
    }
}
