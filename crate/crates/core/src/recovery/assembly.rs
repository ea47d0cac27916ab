use serde::{Deserialize, Serialize};

use super::slab::{affine_transition, ensure_resolvable};
use super::surfactant::{surfactant_atom, surfactant_on_interface};
use crate::error::{ensure_range, Error, Result};
use crate::gamma_limit::k_constant;
use crate::geometry::{beta_side, phase_sets, shrink_set, CellSet, DiscreteMeasure, Facet, Grid, PhaseField, Point, PolyhedralInterface, SurfactantField};
use crate::kernel::{eval_g, KernelPlan};

const TOL: f64 = 1e-9;

/// Axis-aligned box of the user-supplied zone decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Zone {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    /// Outer radius of the atom density; defaults to `min(1/2, 0.9·d)`
    /// with `d` the distance from the atom to the zone boundary.
    #[serde(default)]
    pub atom_radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
struct ZoneFacet {
    axis: usize,
    /// Plane position along `axis`.
    level: f64,
    /// Whether β lies below the plane.
    beta_below: bool,
    density: f64,
}

#[derive(Debug, Clone, PartialEq)]
struct ZonePlan {
    lo: Point,
    hi: Point,
    facet: Option<ZoneFacet>,
    atom: Option<(Point, f64, f64)>,
    /// Phase value when the zone has no facet.
    constant: f64,
}

/// Input of the glued multi-zone construction (N = 2).
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryConfig {
    pub ladder: Vec<f64>,
    pub grid: Grid,
    pub alpha: f64,
    pub beta: f64,
    pub interface: PolyhedralInterface,
    pub measure: DiscreteMeasure,
    pub zones: Vec<Zone>,
    /// Zone margin is `margin_factor·ε/|ln ε|`.
    pub margin_factor: f64,
    plans: Vec<ZonePlan>,
}

/// Fields produced at one `ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryPair {
    pub eps: f64,
    pub u: PhaseField,
    pub rho: SurfactantField,
    /// Shrunken zones `Z_ε`.
    pub zones: Vec<CellSet>,
    pub width: f64,
    pub margin: f64,
}

fn zone_err(zone: usize, condition: impl Into<String>) -> Error {
    Error::ZoneCondition {
        zone,
        condition: condition.into(),
    }
}

/// Parameter interval of the segment `a + t(b − a)` inside the open box.
fn clip_segment(a: &Point, b: &Point, lo: &Point, hi: &Point) -> Option<(f64, f64)> {
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for k in 0..2 {
        let d = b[k] - a[k];
        if d.abs() < 1e-15 {
            if a[k] <= lo[k] + TOL || a[k] >= hi[k] - TOL {
                return None;
            }
            continue;
        }
        let (mut s0, mut s1) = ((lo[k] - a[k]) / d, (hi[k] - a[k]) / d);
        if s0 > s1 {
            std::mem::swap(&mut s0, &mut s1);
        }
        t0 = t0.max(s0);
        t1 = t1.min(s1);
    }
    (t1 > t0).then_some((t0, t1))
}

fn axis_of(f: &Facet) -> Option<usize> {
    let n = f.normal();
    (0..2).find(|&a| (n[a].abs() - 1.0).abs() < 1e-12)
}

impl RecoveryConfig {
    /// Validates the ladder and the zone conditions.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        ladder: Vec<f64>,
        grid: Grid,
        alpha: f64,
        beta: f64,
        interface: PolyhedralInterface,
        measure: DiscreteMeasure,
        zones: Vec<Zone>,
        margin_factor: f64,
    ) -> Result<Self> {
        if grid.dim() != 2 || interface.dim() != 2 {
            return Err(Error::UnsupportedDimension(grid.dim()));
        }
        if !(alpha < beta) {
            return Err(Error::Config("need alpha < beta".into()));
        }
        let top = (-1.0f64).exp();
        for (i, e) in ladder.iter().enumerate() {
            ensure_range("eps", *e, *e > 0.0 && *e < top, "0 < eps < 1/e")?;
            if i > 0 && !(*e < ladder[i - 1]) {
                return Err(Error::Config("eps ladder must be strictly decreasing".into()));
            }
        }
        ensure_range("margin_factor", margin_factor, margin_factor > 0.0 && margin_factor < 1.0, "0 < margin_factor < 1")?;
        let plans = plan_zones(&grid, alpha, beta, &interface, &measure, &zones)?;
        Ok(Self {
            ladder,
            grid,
            alpha,
            beta,
            interface,
            measure,
            zones,
            margin_factor,
            plans,
        })
    }

    pub fn k(&self) -> f64 {
        k_constant(self.alpha, self.beta, 2).expect("validated wells")
    }
}

fn plan_zones(
    grid: &Grid,
    alpha: f64,
    beta: f64,
    interface: &PolyhedralInterface,
    measure: &DiscreteMeasure,
    zones: &[Zone],
) -> Result<Vec<ZonePlan>> {
    if zones.is_empty() {
        return Err(Error::Config("at least one zone is required".into()));
    }
    let (g_lo, g_hi) = (grid.origin(), grid.upper());
    let mut boxes = Vec::with_capacity(zones.len());
    let mut area = 0.0;
    for (z, zone) in zones.iter().enumerate() {
        if zone.lo.len() != 2 || zone.hi.len() != 2 {
            return Err(zone_err(z, "zone corners need 2 coordinates"));
        }
        let lo = [zone.lo[0], zone.lo[1], 0.0];
        let hi = [zone.hi[0], zone.hi[1], 0.0];
        for a in 0..2 {
            if !(lo[a] < hi[a]) {
                return Err(zone_err(z, "zone box is empty"));
            }
            if lo[a] < g_lo[a] - TOL || hi[a] > g_hi[a] + TOL {
                return Err(zone_err(z, "zone box leaves the domain"));
            }
        }
        for (other, (olo, ohi)) in boxes.iter().enumerate() {
            let olo: &Point = olo;
            let ohi: &Point = ohi;
            let overlap = (0..2).all(|a| lo[a].max(olo[a]) < hi[a].min(ohi[a]) - TOL);
            if overlap {
                return Err(zone_err(z, format!("zone overlaps zone {other}")));
            }
        }
        area += (hi[0] - lo[0]) * (hi[1] - lo[1]);
        boxes.push((lo, hi));
    }
    let domain = grid.extent()[0] * grid.extent()[1];
    if (area - domain).abs() > 1e-9 * domain {
        return Err(Error::ZoneCondition {
            zone: 0,
            condition: format!("zones cover area {area} of a domain with area {domain}"),
        });
    }
    let surface = measure.surface().facets();
    for (s, sf) in surface.iter().enumerate() {
        if !interface.facets().iter().any(|f| f.overlap_area(sf, TOL) > 0.0) {
            return Err(Error::InvalidMeasure(format!(
                "surface facet {s} carries mass off the interface; the construction supports only atoms there"
            )));
        }
    }
    let all: Vec<&Facet> = interface.facets().iter().collect();
    let mut plans = Vec::with_capacity(zones.len());
    for (z, (lo, hi)) in boxes.into_iter().enumerate() {
        let mut facet = None;
        for (fi, f) in interface.facets().iter().enumerate() {
            let v = f.vertices();
            let Some((t0, t1)) = clip_segment(&v[0], &v[1], &lo, &hi) else {
                continue;
            };
            if facet.is_some() {
                return Err(zone_err(z, "more than one interface facet meets the zone"));
            }
            let axis = axis_of(f).ok_or_else(|| zone_err(z, format!("facet {fi} is not axis-aligned")))?;
            let t = 1 - axis;
            let level = v[0][axis];
            let (flo, fhi) = (v[0][t].min(v[1][t]), v[0][t].max(v[1][t]));
            if flo > lo[t] + TOL || fhi < hi[t] - TOL || (t1 - t0) <= 0.0 {
                return Err(zone_err(z, format!("facet {fi} does not cross the zone")));
            }
            if level <= lo[axis] + TOL || level >= hi[axis] - TOL {
                return Err(zone_err(z, format!("facet {fi} lies on the zone boundary")));
            }
            // Density carried by the piece of the facet inside the zone.
            let piece = Facet::new(
                2,
                fi,
                &f.normal()[..2],
                f.offset(),
                &[
                    {
                        let mut p = vec![0.0; 2];
                        p[axis] = level;
                        p[t] = lo[t];
                        p
                    },
                    {
                        let mut p = vec![0.0; 2];
                        p[axis] = level;
                        p[t] = hi[t];
                        p
                    },
                ],
                None,
            )?;
            let mut density = 0.0;
            let mut covered = 0.0;
            let mut pieces = 0;
            for sf in surface {
                let o = piece.overlap_area(sf, TOL);
                if o > 0.0 {
                    density = sf.density().unwrap_or(0.0);
                    covered += o;
                    pieces += 1;
                }
            }
            if pieces > 1 || (pieces == 1 && (covered - piece.area()).abs() > TOL * (1.0 + piece.area())) {
                return Err(zone_err(z, format!("surfactant density is not constant on facet {fi} inside the zone")));
            }
            let beta_below = f.normal()[axis] > 0.0;
            facet = Some(ZoneFacet {
                axis,
                level,
                beta_below,
                density,
            });
        }
        let mut atom = None;
        for (ai, (p, mass)) in measure.atoms().iter().enumerate() {
            if !(0..2).all(|a| p[a] > lo[a] && p[a] < hi[a]) {
                continue;
            }
            if atom.is_some() {
                return Err(zone_err(z, "more than one atom in the zone"));
            }
            let to_edge = (0..2).map(|a| (p[a] - lo[a]).min(hi[a] - p[a])).fold(f64::INFINITY, f64::min);
            let r = zones[z].atom_radius.unwrap_or((0.9 * to_edge).min(0.5));
            if !(r > 0.0 && r < to_edge) {
                return Err(zone_err(z, format!("atom {ai} radius {r} does not fit inside the zone")));
            }
            if let Some(f) = &facet {
                if (p[f.axis] - f.level).abs() <= r {
                    return Err(zone_err(z, format!("atom {ai} density meets the interface")));
                }
            }
            atom = Some((*p, *mass, r));
        }
        let center = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0, 0.0];
        let constant = if beta_side(&all, &center) { beta } else { alpha };
        plans.push(ZonePlan {
            lo,
            hi,
            facet,
            atom,
            constant,
        });
    }
    Ok(plans)
}

impl ZonePlan {
    fn profile(&self, p: &Point, width: f64, alpha: f64, beta: f64) -> f64 {
        match &self.facet {
            None => self.constant,
            Some(f) => {
                let s = p[f.axis] - f.level;
                let s = if f.beta_below { s } else { -s };
                affine_transition(s, width, alpha, beta)
            }
        }
    }

    /// Tensor-product hat weight of the shrunken box, supported within
    /// `2·margin` of it.
    fn weight(&self, p: &Point, margin: f64) -> f64 {
        let mut w = 1.0;
        for a in 0..2 {
            let d = ((self.lo[a] + margin) - p[a]).max(p[a] - (self.hi[a] - margin)).max(0.0);
            w *= (1.0 - d / (2.0 * margin)).max(0.0);
        }
        w
    }
}

/// Builds `(u_ε, ρ_ε)`: per-zone slab or constant profiles on the
/// shrunken zones, interpolated across the gaps between them, with
/// interface surfactant `(g/k)·I` and normalized atom densities.
pub fn build_recovery_pair(config: &RecoveryConfig, eps: f64, plan: &KernelPlan) -> Result<RecoveryPair> {
    let grid = &config.grid;
    let (alpha, beta) = (config.alpha, config.beta);
    let mut width = None;
    for zp in &config.plans {
        if let Some(f) = &zp.facet {
            width = Some(ensure_resolvable(eps, grid.h()[f.axis])?);
        }
    }
    let log = eps.ln().abs();
    let width = width.unwrap_or(eps / log);
    let margin = config.margin_factor * eps / log;
    for (z, zp) in config.plans.iter().enumerate() {
        if let Some(f) = &zp.facet {
            let room = (f.level - zp.lo[f.axis]).min(zp.hi[f.axis] - f.level);
            if room <= width / 2.0 + margin {
                return Err(zone_err(z, "transition layer leaves the shrunken zone"));
            }
        }
    }
    let u = PhaseField::from_fn(grid.clone(), alpha, beta, |p| {
        let (mut num, mut den, mut hits, mut last) = (0.0, 0.0, 0, 0.0);
        for zp in &config.plans {
            let w = zp.weight(p, margin);
            if w > 0.0 {
                last = zp.profile(p, width, alpha, beta);
                num += w * last;
                den += w;
                hits += 1;
            }
        }
        if hits == 1 {
            last
        } else {
            num / den
        }
    })?;
    let k = config.k();
    let mut rho = SurfactantField::zero(grid.clone());
    let mut zones = Vec::with_capacity(config.plans.len());
    for zp in &config.plans {
        let cells = CellSet::from_predicate(grid.clone(), |p| (0..2).all(|a| p[a] > zp.lo[a] && p[a] < zp.hi[a]));
        let z_eps = shrink_set(&cells, margin)?.set;
        if let Some(f) = &zp.facet {
            if f.density > 0.0 {
                rho = rho.plus(&surfactant_on_interface(&u, &z_eps, f.density, k, plan)?)?;
            }
        }
        if let Some((p, mass, r)) = &zp.atom {
            rho = rho.plus(&surfactant_atom(grid, &p[..2], *mass, eps, *r)?)?;
        }
        zones.push(z_eps);
    }
    Ok(RecoveryPair {
        eps,
        u,
        rho,
        zones,
        width,
        margin,
    })
}

/// `(1/|ln ε|)·G(Z_i ∩ {u < α + δ}, Z_j ∩ {u > β − δ}, Ω)`.
pub fn cross_zone_interaction(pair: &RecoveryPair, i: usize, j: usize, delta: f64, plan: &KernelPlan) -> Result<f64> {
    let n = pair.zones.len();
    if i >= n || j >= n {
        return Err(Error::Config(format!("zone index out of range (have {n})")));
    }
    let (a, b) = phase_sets(&pair.u, delta)?;
    let a = a.intersection(&pair.zones[i])?;
    let b = b.intersection(&pair.zones[j])?;
    let all = CellSet::full(pair.u.grid().clone());
    Ok(eval_g(&a, &b, &all, plan)? / pair.eps.ln().abs())
}
