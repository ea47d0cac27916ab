use crate::error::{ensure_range, Error, Result};
use crate::gamma_limit::sphere_area;
use crate::geometry::{CellField, CellSet, Grid, PhaseField, Point, SurfactantField};
use crate::kernel::{eval_i_field, KernelPlan};

/// `(γ/k)·I` from an interaction field already restricted to `Z_ε`.
pub fn surfactant_from_field(i: &CellField, gamma: f64, k: f64) -> Result<SurfactantField> {
    ensure_range("gamma", gamma, gamma >= 0.0 && gamma.is_finite(), "gamma >= 0")?;
    ensure_range("k", k, k > 0.0, "k > 0")?;
    if gamma == 0.0 {
        return Ok(SurfactantField::zero(i.grid.clone()));
    }
    let scale = gamma / k;
    SurfactantField::new(i.grid.clone(), i.values.iter().map(|v| scale * v).collect())
}

/// `ρ(x) = (γ/k) ∫_{Z_ε} (u(y) − u(x))²/|y − x|^{N+1} dy` on `Z_ε`, zero
/// elsewhere. With `γ = k` this is the interaction field itself.
pub fn surfactant_on_interface(
    u: &PhaseField,
    z_eps: &CellSet,
    gamma: f64,
    k: f64,
    plan: &KernelPlan,
) -> Result<SurfactantField> {
    ensure_range("gamma", gamma, gamma >= 0.0 && gamma.is_finite(), "gamma >= 0")?;
    ensure_range("k", k, k > 0.0, "k > 0")?;
    if gamma == 0.0 {
        return Ok(SurfactantField::zero(u.grid().clone()));
    }
    let i = eval_i_field(u, z_eps, plan)?;
    surfactant_from_field(&i, gamma, k)
}

/// `∫_{ε<|x−x₁|<r} ζ/(σ|x−x₁|^N) dx = ζ ln(r/ε)`.
pub fn atom_mass_exact(zeta: f64, eps: f64, r: f64) -> f64 {
    zeta * (r / eps).ln()
}

struct AtomQuadrature {
    dim: usize,
    center: Point,
    coeff: f64,
    eps: f64,
    r: f64,
    /// Boxes straddling the outer sphere stop splitting below this size.
    outer_floor: f64,
}

impl AtomQuadrature {
    fn density(&self, p: &Point) -> f64 {
        let d = self.dist(p);
        if d > self.eps && d < self.r {
            self.coeff / d.powi(self.dim as i32)
        } else {
            0.0
        }
    }

    fn dist(&self, p: &Point) -> f64 {
        (0..self.dim).map(|a| (p[a] - self.center[a]).powi(2)).sum::<f64>().sqrt()
    }

    /// Nearest and farthest distance from the atom to the box.
    fn range(&self, lo: &Point, hi: &Point) -> (f64, f64) {
        let (mut near, mut far) = (0.0, 0.0);
        for a in 0..self.dim {
            let c = self.center[a];
            let n = (lo[a] - c).max(c - hi[a]).max(0.0);
            let f = (c - lo[a]).abs().max((hi[a] - c).abs());
            near += n * n;
            far += f * f;
        }
        (near.sqrt(), far.sqrt())
    }

    /// Integral over a box by adaptive splitting around both spheres.
    fn integrate(&self, lo: Point, hi: Point) -> f64 {
        let (near, far) = self.range(&lo, &hi);
        if far <= self.eps || near >= self.r {
            return 0.0;
        }
        let diam = (0..self.dim).map(|a| (hi[a] - lo[a]).powi(2)).sum::<f64>().sqrt();
        let vol: f64 = (0..self.dim).map(|a| hi[a] - lo[a]).product();
        let mut mid = [0.0; 3];
        for a in 0..self.dim {
            mid[a] = 0.5 * (lo[a] + hi[a]);
        }
        let smooth = near >= self.eps && far <= self.r && near > 4.0 * diam;
        let inner_done = diam < self.eps / 8.0;
        let outer_only = near > self.eps && far > self.r;
        if smooth || inner_done || (outer_only && diam < self.outer_floor) {
            return self.density(&mid) * vol;
        }
        let mut total = 0.0;
        for corner in 0..(1usize << self.dim) {
            let (mut l, mut h) = (lo, hi);
            for a in 0..self.dim {
                if corner >> a & 1 == 0 {
                    h[a] = mid[a];
                } else {
                    l[a] = mid[a];
                }
            }
            total += self.integrate(l, h);
        }
        total
    }
}

/// Cell averages of `ζ/(σ_{N−1}|x − x₁|^N)` on the annulus `ε < |x − x₁| < r`,
/// with `σ_{N−1}` the area of the unit sphere, so the mass is `ζ ln(r/ε)`.
pub fn surfactant_atom(grid: &Grid, x1: &[f64], zeta: f64, eps: f64, r: f64) -> Result<SurfactantField> {
    let dim = grid.dim();
    if x1.len() != dim {
        return Err(Error::InvalidMeasure(format!("atom needs {dim} coordinates")));
    }
    ensure_range("zeta", zeta, zeta >= 0.0 && zeta.is_finite(), "zeta >= 0")?;
    ensure_range("eps", eps, eps > 0.0 && eps < r, "0 < eps < r")?;
    let mut center = [0.0; 3];
    center[..dim].copy_from_slice(x1);
    if !grid.contains(&center) || grid.distance_to_boundary(&center) < r * (1.0 - 1e-12) {
        return Err(Error::Config(format!("ball of radius {r} around the atom must lie inside the domain")));
    }
    if zeta == 0.0 {
        return Ok(SurfactantField::zero(grid.clone()));
    }
    let hmin = grid.h().iter().cloned().fold(f64::INFINITY, f64::min);
    let q = AtomQuadrature {
        dim,
        center,
        coeff: zeta / sphere_area(dim)?,
        eps,
        r,
        outer_floor: hmin / 8.0,
    };
    let h = grid.h();
    let vol = grid.cell_volume();
    let values = grid
        .centers()
        .map(|c| {
            let (mut lo, mut hi) = (c, c);
            for a in 0..dim {
                lo[a] -= 0.5 * h[a];
                hi[a] += 0.5 * h[a];
            }
            q.integrate(lo, hi) / vol
        })
        .collect();
    SurfactantField::new(grid.clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atom_mass_matches_radial_integral() {
        let grid = Grid::centered_unit(2, 256).unwrap();
        for eps in [1e-2, 1e-3, 1e-5] {
            let rho = surfactant_atom(&grid, &[0.01, -0.02], 0.5, eps, 0.25).unwrap();
            let exact = atom_mass_exact(0.5, eps, 0.25);
            assert!((rho.mass() / exact - 1.0).abs() < 0.02, "eps {eps}: {} vs {exact}", rho.mass());
        }
    }

    #[test]
    fn atom_mass_in_3d() {
        let grid = Grid::centered_unit(3, 32).unwrap();
        let rho = surfactant_atom(&grid, &[0.0, 0.0, 0.0], 1.0, 1e-3, 0.3).unwrap();
        assert!((rho.mass() / atom_mass_exact(1.0, 1e-3, 0.3) - 1.0).abs() < 0.03);
    }

    #[test]
    fn atom_guards() {
        let grid = Grid::centered_unit(2, 32).unwrap();
        assert!(surfactant_atom(&grid, &[0.0, 0.0], 1.0, 0.3, 0.25).is_err());
        assert!(surfactant_atom(&grid, &[0.4, 0.0], 1.0, 1e-3, 0.25).is_err());
        assert_eq!(surfactant_atom(&grid, &[0.0, 0.0], 0.0, 1e-3, 0.25).unwrap().mass(), 0.0);
    }

    #[test]
    fn disjoint_atoms_add() {
        let grid = Grid::centered_unit(2, 64).unwrap();
        let a = surfactant_atom(&grid, &[-0.25, 0.0], 0.3, 1e-3, 0.2).unwrap();
        let b = surfactant_atom(&grid, &[0.25, 0.0], 0.7, 1e-3, 0.2).unwrap();
        let both = a.plus(&b).unwrap();
        assert!((both.mass() - a.mass() - b.mass()).abs() < 1e-12 * both.mass());
    }
}
