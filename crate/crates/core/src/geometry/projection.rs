use serde::Serialize;

use super::grid::{add_scaled, dot, Point};
use super::interface::{Facet, PolyhedralInterface};
use super::polygon::{self, P2};
use crate::error::{Error, Result};

/// Direction in which a target piece is first hit from the source facet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum HitSide {
    /// Target lies in the source hyperplane.
    Coincident,
    /// Reached along `+ν`.
    Positive,
    /// Reached along `−ν`.
    Negative,
}

/// Part of one target facet reached by first-hit rays.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Patch {
    pub facet: usize,
    pub side: HitSide,
    /// Polytope pieces in world coordinates (points, segments or polygons).
    pub pieces: Vec<Vec<Vec<f64>>>,
    pub area: f64,
}

const PARALLEL_TOL: f64 = 1e-12;

struct Candidate {
    index: usize,
    coplanar: bool,
    cos: f64,
    footprint: Vec<P2>,
    s: [f64; 3],
}

impl Candidate {
    fn hit(&self, p: P2) -> f64 {
        self.s[0] + self.s[1] * p[0] + self.s[2] * p[1]
    }
}

fn source_point(src: &Facet, p: P2) -> Point {
    match src.dim() {
        1 => *src.vertices().first().expect("point facet"),
        _ => src.from_local(p),
    }
}

fn source_region(src: &Facet) -> Vec<P2> {
    match src.dim() {
        1 => vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
        2 => {
            let (lo, hi) = (src.local_polygon()[0][0], src.local_polygon()[1][0]);
            vec![[lo, 0.0], [hi, 0.0], [hi, 1.0], [lo, 1.0]]
        }
        _ => src.local_polygon().to_vec(),
    }
}

fn candidate(src: &Facet, index: usize, f: &Facet) -> Option<Candidate> {
    let nu = src.normal();
    let cos = dot(f.normal(), nu);
    if cos.abs() < PARALLEL_TOL {
        return None;
    }
    let hit = |p: P2| (f.offset() - dot(f.normal(), &source_point(src, p))) / cos;
    let s0 = hit([0.0, 0.0]);
    let s = [s0, hit([1.0, 0.0]) - s0, hit([0.0, 1.0]) - s0];
    let footprint = match src.dim() {
        1 => vec![[-1.0, -1.0], [2.0, -1.0], [2.0, 2.0], [-1.0, 2.0]],
        2 => {
            let a = src.to_local(&f.vertices()[0])[0];
            let b = src.to_local(&f.vertices()[1])[0];
            let (lo, hi) = (a.min(b), a.max(b));
            vec![[lo, -1.0], [hi, -1.0], [hi, 2.0], [lo, 2.0]]
        }
        _ => polygon::make_ccw(f.vertices().iter().map(|v| src.to_local(v)).collect()),
    };
    let coplanar = f.coplanar(src, 1e-12);
    Some(Candidate {
        index,
        coplanar,
        cos,
        footprint,
        s: if coplanar { [0.0; 3] } else { s },
    })
}

/// Splits the source region into pieces labeled by the first target hit
/// along `sign·ν`.
fn first_hits(region: Vec<P2>, cands: &[Candidate], sign: f64) -> Vec<(Vec<P2>, usize)> {
    let mut pieces: Vec<(Vec<P2>, Option<usize>)> = vec![(region, None)];
    for (ci, c) in cands.iter().enumerate() {
        let mut next = Vec::with_capacity(pieces.len() * 2);
        for (poly, owner) in pieces {
            for outside in polygon::subtract_convex(&poly, &c.footprint) {
                next.push((outside, owner));
            }
            let inside = polygon::intersect_convex(&poly, &c.footprint);
            if polygon::area(&inside) <= 0.0 {
                continue;
            }
            // reachable part: sign·s >= 0
            let (a, b) = ([sign * c.s[1], sign * c.s[2]], sign * c.s[0]);
            let reach = polygon::clip_half_plane(&inside, a, b);
            let unreach = polygon::clip_half_plane(&inside, [-a[0], -a[1]], -b);
            if polygon::area(&unreach) > 0.0 {
                next.push((unreach, owner));
            }
            if polygon::area(&reach) <= 0.0 {
                continue;
            }
            match owner {
                None => next.push((reach, Some(ci))),
                Some(g) => {
                    // candidate wins where sign·(s_g − s_c) > 0
                    let o = &cands[g];
                    let d = [
                        sign * (o.s[0] - c.s[0]),
                        sign * (o.s[1] - c.s[1]),
                        sign * (o.s[2] - c.s[2]),
                    ];
                    let wins = polygon::clip_half_plane(&reach, [d[1], d[2]], d[0]);
                    let loses = polygon::clip_half_plane(&reach, [-d[1], -d[2]], -d[0]);
                    if polygon::area(&wins) > 0.0 {
                        next.push((wins, Some(ci)));
                    }
                    if polygon::area(&loses) > 0.0 {
                        next.push((loses, Some(g)));
                    }
                }
            }
        }
        pieces = next;
    }
    pieces
        .into_iter()
        .filter_map(|(p, o)| o.map(|ci| (p, ci)))
        .filter(|(p, _)| polygon::area(p) > 0.0)
        .collect()
}

/// Projection of the source facet onto the target along its normal with
/// first-hit semantics in both directions.
pub fn project_to_interface(source: &Facet, target: &PolyhedralInterface) -> Result<Vec<Patch>> {
    if target.is_empty() {
        return Err(Error::Config("projection target has no facets".into()));
    }
    if source.dim() != target.dim() {
        return Err(Error::UnsupportedDimension(source.dim()));
    }
    let cands: Vec<Candidate> = target
        .facets()
        .iter()
        .enumerate()
        .filter_map(|(i, f)| candidate(source, i, f))
        .collect();
    let nu = *source.normal();
    let mut patches: Vec<Patch> = Vec::new();
    for sign in [1.0, -1.0] {
        for (poly, ci) in first_hits(source_region(source), &cands, sign) {
            let c = &cands[ci];
            if c.coplanar && sign < 0.0 {
                continue;
            }
            let side = if c.coplanar {
                HitSide::Coincident
            } else if sign > 0.0 {
                HitSide::Positive
            } else {
                HitSide::Negative
            };
            let world = |p: P2| {
                let x = add_scaled(&source_point(source, p), &nu, c.hit(p));
                x[..source.dim()].to_vec()
            };
            let piece: Vec<Vec<f64>> = match source.dim() {
                1 => vec![world([0.5, 0.5])],
                2 => {
                    let lo = poly.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
                    let hi = poly.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
                    vec![world([lo, 0.0]), world([hi, 0.0])]
                }
                _ => poly.iter().map(|p| world(*p)).collect(),
            };
            let area = polygon::area(&poly) / c.cos.abs();
            match patches.iter_mut().find(|p| p.facet == c.index && p.side == side) {
                Some(p) => {
                    p.area += area;
                    p.pieces.push(piece);
                }
                None => patches.push(Patch {
                    facet: c.index,
                    side,
                    pieces: vec![piece],
                    area,
                }),
            }
        }
    }
    patches.sort_by(|a, b| (a.facet, a.side).cmp(&(b.facet, b.side)));
    Ok(patches)
}
