//! The sharp-interface limit functional `F(u, μ)` in closed form.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{DiscreteMeasure, PolyhedralInterface};

const COPLANAR_TOL: f64 = 1e-9;

/// `ω_{N−1}`, the volume of the unit ball in `R^{N−1}` (`ω_0 = 1`).
pub fn omega(n: usize) -> Result<f64> {
    match n {
        1 => Ok(1.0),
        2 => Ok(2.0),
        3 => Ok(PI),
        _ => Err(Error::UnsupportedDimension(n)),
    }
}

/// `H^{N−1}(S^{N−1})`: 2, 2π, 4π for N = 1, 2, 3.
pub fn sphere_area(n: usize) -> Result<f64> {
    match n {
        1 => Ok(2.0),
        2 => Ok(2.0 * PI),
        3 => Ok(4.0 * PI),
        _ => Err(Error::UnsupportedDimension(n)),
    }
}

/// `k = 2(β − α)² ω_{N−1}`.
pub fn k_constant(alpha: f64, beta: f64, n: usize) -> Result<f64> {
    if !(alpha < beta) {
        return Err(Error::Config(format!("need alpha < beta, got {alpha} and {beta}")));
    }
    let d = beta - alpha;
    Ok(2.0 * d * d * omega(n)?)
}

/// Piece of an interface facet carrying constant density `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityPiece {
    pub area: f64,
    pub density: f64,
}

/// Split of a measure against `H^{N−1}⌞S_u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    /// Per interface facet, the pieces with constant density (uncovered
    /// parts appear with density 0).
    pub absolutely_continuous: Vec<Vec<DensityPiece>>,
    pub atom_mass: f64,
    pub off_interface_mass: f64,
    pub singular_mass: f64,
}

/// Radon–Nikodym split of atoms plus facet densities with respect to the
/// surface measure on `interface`.
pub fn decompose(measure: &DiscreteMeasure, interface: &PolyhedralInterface) -> Result<Decomposition> {
    if measure.surface().dim() != interface.dim() {
        return Err(Error::InvalidMeasure("dimension mismatch".into()));
    }
    for (i, (p, _)) in measure.atoms().iter().enumerate() {
        for (j, f) in interface.facets().iter().enumerate() {
            if f.distance(p) <= COPLANAR_TOL {
                return Err(Error::AtomOnInterface { index: i, facet: j });
            }
        }
    }
    let surface = measure.surface().facets();
    let mut covered = vec![0.0; surface.len()];
    let mut ac = Vec::with_capacity(interface.facets().len());
    for f in interface.facets() {
        let mut pieces = Vec::new();
        let mut used = 0.0;
        for (s, sf) in surface.iter().enumerate() {
            let a = f.overlap_area(sf, COPLANAR_TOL);
            if a > 0.0 {
                pieces.push(DensityPiece {
                    area: a,
                    density: sf.density().unwrap_or(0.0),
                });
                covered[s] += a;
                used += a;
            }
        }
        let rest = f.area() - used;
        if rest > COPLANAR_TOL * f.area() {
            pieces.push(DensityPiece { area: rest, density: 0.0 });
        }
        ac.push(pieces);
    }
    let atom_mass: f64 = measure.atoms().iter().map(|a| a.1).sum();
    let off_interface_mass: f64 = surface
        .iter()
        .zip(&covered)
        .map(|(sf, c)| sf.density().unwrap_or(0.0) * (sf.area() - c).max(0.0))
        .sum();
    Ok(Decomposition {
        absolutely_continuous: ac,
        atom_mass,
        off_interface_mass,
        singular_mass: atom_mass + off_interface_mass,
    })
}

/// Contribution of one interface facet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FacetRow {
    pub facet: usize,
    pub area: f64,
    pub pieces: Vec<DensityPiece>,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitBreakdown {
    pub interface_term: f64,
    pub singular_term: f64,
    pub total: f64,
    pub k: f64,
    pub facets: Vec<FacetRow>,
}

/// `∫_{S_u} k + |k − dμ_a/dH^{N−1}| dH^{N−1} + |μ_s|(Ω)`.
pub fn eval_limit(interface: &PolyhedralInterface, measure: &DiscreteMeasure, alpha: f64, beta: f64) -> Result<LimitBreakdown> {
    let k = k_constant(alpha, beta, interface.dim())?;
    let dec = decompose(measure, interface)?;
    let facets: Vec<FacetRow> = dec
        .absolutely_continuous
        .into_iter()
        .enumerate()
        .map(|(i, pieces)| {
            let energy = pieces.iter().map(|p| p.area * (k + (k - p.density).abs())).sum();
            FacetRow {
                facet: i,
                area: interface.facets()[i].area(),
                pieces,
                energy,
            }
        })
        .collect();
    let interface_term: f64 = facets.iter().map(|f| f.energy).sum();
    Ok(LimitBreakdown {
        interface_term,
        singular_term: dec.singular_mass,
        total: interface_term + dec.singular_mass,
        k,
        facets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Atom, Facet, Grid};

    fn flat(density: Option<f64>) -> PolyhedralInterface {
        let f = Facet::new(2, 0, &[0.0, 1.0], 0.0, &[vec![-0.5, 0.0], vec![0.5, 0.0]], density).unwrap();
        PolyhedralInterface::new(2, vec![f]).unwrap()
    }

    #[test]
    fn constants() {
        assert_eq!(omega(1).unwrap(), 1.0);
        assert_eq!(omega(2).unwrap(), 2.0);
        assert_eq!(omega(3).unwrap(), PI);
        assert!(omega(4).is_err());
        assert_eq!(k_constant(0.0, 1.0, 2).unwrap(), 4.0);
        assert_eq!(k_constant(0.0, 1.0, 3).unwrap(), 2.0 * PI);
        assert!(k_constant(1.0, 1.0, 2).is_err());
    }

    #[test]
    fn flat_interface_values() {
        let grid = Grid::centered_unit(2, 32).unwrap();
        let s_u = flat(None);
        let none = DiscreteMeasure::new(&grid, &[], PolyhedralInterface::empty(2), &s_u).unwrap();
        assert_eq!(eval_limit(&s_u, &none, 0.0, 1.0).unwrap().total, 8.0);
        let g4 = DiscreteMeasure::new(&grid, &[], flat(Some(4.0)), &s_u).unwrap();
        assert_eq!(eval_limit(&s_u, &g4, 0.0, 1.0).unwrap().total, 4.0);
        let atom = Atom { x: vec![0.2, 0.3], mass: 0.5 };
        let g8 = DiscreteMeasure::new(&grid, &[atom], flat(Some(8.0)), &s_u).unwrap();
        let b = eval_limit(&s_u, &g8, 0.0, 1.0).unwrap();
        assert_eq!(b.total, 8.5);
        assert_eq!(b.singular_term, 0.5);
    }

    #[test]
    fn off_interface_density_is_singular() {
        let grid = Grid::centered_unit(2, 32).unwrap();
        let s_u = flat(None);
        let other = Facet::new(2, 0, &[0.0, 1.0], 0.25, &[vec![-0.25, 0.25], vec![0.25, 0.25]], Some(2.0)).unwrap();
        let m = DiscreteMeasure::new(&grid, &[], PolyhedralInterface::new(2, vec![other]).unwrap(), &s_u).unwrap();
        let d = decompose(&m, &s_u).unwrap();
        assert!((d.singular_mass - 1.0).abs() < 1e-15);
        assert_eq!(d.absolutely_continuous[0], vec![DensityPiece { area: 1.0, density: 0.0 }]);
    }
}
