use crate::error::{ensure_range, Error, Result};
use crate::geometry::{Grid, PhaseField};

/// Width `ε/|ln ε|` of the affine transition.
pub fn transition_width(eps: f64) -> Result<f64> {
    ensure_range("eps", eps, eps > 0.0 && eps < 1.0, "0 < eps < 1")?;
    Ok(eps / eps.ln().abs())
}

/// Smallest `ε` whose transition width is at least `width`, by bisection
/// on `(0, 1/e)` where `ε/|ln ε|` is increasing.
pub fn min_resolvable_eps(width: f64) -> f64 {
    let f = |e: f64| e / e.ln().abs();
    let top = (-1.0f64).exp();
    if width >= f(top) {
        return top;
    }
    let (mut lo, mut hi) = (f64::MIN_POSITIVE, top);
    for _ in 0..200 {
        let mid = if hi / lo > 4.0 { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if f(mid) >= width {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Rejects `eps` unless the transition spans at least two cells of width `h`.
pub fn ensure_resolvable(eps: f64, h: f64) -> Result<f64> {
    let w = transition_width(eps)?;
    if w < 2.0 * h {
        return Err(Error::Unresolvable {
            eps,
            min_eps: min_resolvable_eps(2.0 * h),
        });
    }
    Ok(w)
}

/// Affine profile across the plane `s = 0`: `β` for `s ≤ −w/2`, `α` for
/// `s ≥ w/2`, linear in between.
pub fn affine_transition(s: f64, width: f64, alpha: f64, beta: f64) -> f64 {
    let t = (s / width).clamp(-0.5, 0.5);
    0.5 * (alpha + beta) + (alpha - beta) * t
}

/// `β` below the plane `x_axis = offset`, `α` above, affine across a layer
/// of width `ε/|ln ε|`, sampled at cell centers.
pub fn slab_profile_at(grid: &Grid, eps: f64, alpha: f64, beta: f64, axis: usize, offset: f64) -> Result<PhaseField> {
    if axis >= grid.dim() {
        return Err(Error::Config(format!("axis {axis} out of range for dimension {}", grid.dim())));
    }
    let w = ensure_resolvable(eps, grid.h()[axis])?;
    PhaseField::from_fn(grid.clone(), alpha, beta, |p| affine_transition(p[axis] - offset, w, alpha, beta))
}

/// Slab profile across `x_N = 0`.
pub fn slab_profile(grid: &Grid, eps: f64, alpha: f64, beta: f64) -> Result<PhaseField> {
    slab_profile_at(grid, eps, alpha, beta, grid.dim() - 1, 0.0)
}

/// `∫|u_ε − u|` between the slab profile and its sharp limit over a cross
/// section of area `cross_area`: `(β − α)·w/4·cross_area`.
pub fn slab_l1_to_sharp(eps: f64, alpha: f64, beta: f64, cross_area: f64) -> Result<f64> {
    Ok((beta - alpha) * transition_width(eps)? / 4.0 * cross_area)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rasterize_interface;
    use crate::geometry::{Facet, PolyhedralInterface};

    #[test]
    fn guard_reports_threshold() {
        let grid = Grid::centered_unit(2, 64).unwrap();
        match slab_profile(&grid, 1e-3, 0.0, 1.0) {
            Err(Error::Unresolvable { min_eps, .. }) => {
                let w = transition_width(min_eps).unwrap();
                assert!((w / (2.0 / 64.0) - 1.0).abs() < 1e-9);
                assert!(slab_profile(&grid, min_eps * 1.0001, 0.0, 1.0).is_ok());
            }
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn profile_shape() {
        let grid = Grid::centered_unit(2, 64).unwrap();
        let u = slab_profile(&grid, 0.2, 0.0, 1.0).unwrap();
        assert_eq!(affine_transition(0.0, 0.1, 0.0, 1.0), 0.5);
        let v = u.values();
        let mn = v.iter().cloned().fold(f64::INFINITY, f64::min);
        let mx = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert_eq!((mn, mx), (0.0, 1.0));
        for row in v.chunks(64) {
            assert!(row.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn l1_distance_to_sharp_limit() {
        let grid = Grid::centered_unit(2, 512).unwrap();
        let eps = 0.1;
        let u = slab_profile(&grid, eps, 0.0, 1.0).unwrap();
        let f = Facet::new(2, 0, &[0.0, 1.0], 0.0, &[vec![-0.5, 0.0], vec![0.5, 0.0]], None).unwrap();
        let sharp = rasterize_interface(&PolyhedralInterface::new(2, vec![f]).unwrap(), &grid, 0.0, 1.0).unwrap();
        let d = u.l1_distance(&sharp).unwrap();
        let exact = slab_l1_to_sharp(eps, 0.0, 1.0, 1.0).unwrap();
        assert!((d - exact).abs() < 2.0 / 512.0 * exact.max(1.0 / 512.0) + 1e-4);
    }
}
