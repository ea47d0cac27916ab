//! The singular kernel `|y−x|^{−(N+1)}`: set interactions, interaction
//! fields, the planar reduction and interaction bound checks.

mod bounds;
mod engine;
mod plan;
mod quad;
mod quasi1d;

pub use bounds::{
    calibrate_lower_bound, check_bound_cylinder_complement, check_bound_cylinder_cone,
    check_lower_bound_special_cylinder, lateral_kernel, slab_pair_interaction, BoundKind, BoundReport,
    CylinderBound, Hypotheses, LowerBoundConstants, SpecialCylinder,
};
pub use plan::{KernelPlan, SelfPairPolicy};
pub use quad::{gauss_legendre, integrate_graded};
pub use quasi1d::{quasi1d_interaction, quasi1d_nonlocal, Profile1d};

use crate::error::{ensure_range, Error, Result};
use crate::gamma_limit::omega;
use crate::geometry::{CellField, CellSet, Grid, PhaseField};
use crate::reduce::pairwise_sum;

/// `G(A, B, S) = ∫_{A∩S}∫_{B∩S} |y−x|^{−(N+1)}` by the midpoint rule.
pub fn eval_g(a: &CellSet, b: &CellSet, s: &CellSet, plan: &KernelPlan) -> Result<f64> {
    let grid = a.grid();
    if b.grid() != grid || s.grid() != grid {
        return Err(Error::GridMismatch("interaction sets"));
    }
    let shared = a.intersection(b)?.count();
    if shared > 0 {
        return Err(Error::NotDisjoint(shared));
    }
    let a_s = a.intersection(s)?;
    let b_s = b.intersection(s)?;
    if a_s.is_empty() || b_s.is_empty() {
        return Ok(0.0);
    }
    let m = b_s.mask();
    let per_cell = engine::run(grid, plan, a_s.members(), b_s.members(), &engine::Weight { m: &m })?;
    Ok(grid.cell_volume() * pairwise_sum(&per_cell))
}

/// `I(x) = Σ_{y∈A, y≠x} (u(y)−u(x))²·vol/|y−x|^{N+1}` for `x ∈ A`, zero elsewhere.
pub fn eval_i_field(u: &PhaseField, a: &CellSet, plan: &KernelPlan) -> Result<CellField> {
    let grid = u.grid();
    if a.grid() != grid {
        return Err(Error::GridMismatch("phase field and cell set"));
    }
    let m = a.mask();
    let values = engine::run(
        grid,
        plan,
        a.members(),
        a.members(),
        &engine::SquaredDifference { u: u.values(), m: &m },
    )?;
    Ok(CellField {
        grid: grid.clone(),
        values,
    })
}

/// `Σ_{y∈A} (u_x − u_y)(c_x + q_y)·vol/|y−x|^{N+1}` for `x ∈ A`.
pub(crate) fn weighted_difference_field(
    grid: &Grid,
    u: &[f64],
    a: &CellSet,
    c: &[f64],
    q: &[f64],
    plan: &KernelPlan,
) -> Result<Vec<f64>> {
    let m = a.mask();
    engine::run(
        grid,
        plan,
        a.members(),
        a.members(),
        &engine::WeightedDifference { u, m: &m, c, q },
    )
}

/// `∫_{R^{N−1}} (|z'|² + t²)^{−(N+1)/2} dz' = ω_{N−1}/t²`.
pub fn reduced_kernel(n: usize, t: f64) -> Result<f64> {
    ensure_range("t", t, t > 0.0 && t.is_finite(), "t > 0")?;
    Ok(omega(n)? / (t * t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_kernel_values() {
        assert_eq!(reduced_kernel(2, 1.0).unwrap(), 2.0);
        assert_eq!(reduced_kernel(3, 1.0).unwrap(), std::f64::consts::PI);
        assert_eq!(reduced_kernel(2, 2.0).unwrap(), 0.5);
        assert!(reduced_kernel(2, 0.0).is_err());
        assert!(reduced_kernel(4, 1.0).is_err());
    }

    #[test]
    fn g_rejects_overlap_and_is_symmetric() {
        let grid = Grid::centered_unit(2, 16).unwrap();
        let a = CellSet::from_predicate(grid.clone(), |p| p[1] > 0.1);
        let b = CellSet::from_predicate(grid.clone(), |p| p[1] < -0.1);
        let s = CellSet::full(grid.clone());
        let plan = KernelPlan::default();
        let ab = eval_g(&a, &b, &s, &plan).unwrap();
        let ba = eval_g(&b, &a, &s, &plan).unwrap();
        assert!(ab > 0.0);
        assert!((ab - ba).abs() <= 1e-13 * ab);
        let c = CellSet::from_predicate(grid, |p| p[1] > 0.0);
        assert!(matches!(eval_g(&a, &c, &s, &plan), Err(Error::NotDisjoint(_))));
    }

    #[test]
    fn i_field_of_constant_is_zero() {
        let grid = Grid::centered_unit(2, 12).unwrap();
        let u = PhaseField::constant(grid.clone(), 0.3, 0.0, 1.0).unwrap();
        let i = eval_i_field(&u, &CellSet::full(grid), &KernelPlan::default()).unwrap();
        assert!(i.values.iter().all(|v| *v == 0.0));
    }
}
