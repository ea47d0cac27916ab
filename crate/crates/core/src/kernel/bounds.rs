//! Numerical checks of the interaction estimates for cylinders, pyramids
//! and thin slabs.

use serde::{Deserialize, Serialize};

use super::plan::KernelPlan;
use super::quad::integrate_graded;
use super::eval_g;
use crate::error::{ensure_range, Error, Result};
use crate::gamma_limit::omega;
use crate::geometry::{CellSet, Grid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    CylinderComplement,
    CylinderCone,
    SpecialCylinder,
}

/// Geometry parameters echoed in a report.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub dim: usize,
    pub r_side: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub log_eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<f64>,
}

/// Measured interaction against a bound shape.
///
/// For the upper bounds `ratio = measured / (R^{N−1}(1 − ln(l/2)))`; for
/// the special cylinder `ratio = measured / (R^{N−1}|ln ε|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub measured: f64,
    pub normalizer: f64,
    pub ratio: f64,
    /// Bound value with the fitted constants, when supplied.
    pub bound: Option<f64>,
    /// Whether the bound holds; `None` when no constants were supplied or
    /// the hypotheses fail.
    pub holds: Option<bool>,
    pub hypotheses: Option<Hypotheses>,
    pub params: BoundParams,
}

/// Cylinder `Q'_R × (d/2, l/2)` against the region below it, on a grid
/// with `resolution` cells per unit length. The lateral complement is
/// truncated at `lateral_pad` beyond the cylinder (default `2·max(R, l)`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CylinderBound {
    pub dim: usize,
    pub r_side: f64,
    pub d: f64,
    pub l: f64,
    pub resolution: f64,
    #[serde(default)]
    pub lateral_pad: Option<f64>,
    /// Fitted constant `Ĉ`; when present the report asserts the bound.
    #[serde(default)]
    pub fitted_c: Option<f64>,
}

impl CylinderBound {
    pub fn new(dim: usize, r_side: f64, d: f64, l: f64, resolution: f64) -> Self {
        Self {
            dim,
            r_side,
            d,
            l,
            resolution,
            lateral_pad: None,
            fitted_c: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(2..=3).contains(&self.dim) {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        ensure_range("R", self.r_side, self.r_side > 0.0, "R > 0")?;
        ensure_range("l", self.l, self.l > 0.0 && self.l <= 8.0 / 3.0, "0 < l <= 8/3")?;
        ensure_range("d", self.d, self.d >= 0.0 && self.d <= self.l, "0 <= d <= l")?;
        ensure_range("resolution", self.resolution, self.resolution > 0.0, "resolution > 0")?;
        Ok(())
    }

    pub fn pad(&self) -> f64 {
        self.lateral_pad.unwrap_or(2.0 * self.r_side.max(self.l))
    }

    fn grid(&self) -> Result<Grid> {
        let width = self.r_side + 2.0 * self.pad();
        let pad = self.pad();
        let lat = aligned_count(width, self.resolution, &[pad, pad + self.r_side]);
        let nor = aligned_count(self.l, self.resolution, &[(self.l - self.d) / 2.0, (self.l + self.d) / 2.0]);
        let mut origin = vec![-width / 2.0; self.dim];
        let mut extent = vec![width; self.dim];
        let mut cells = vec![lat; self.dim];
        origin[self.dim - 1] = -self.l / 2.0;
        extent[self.dim - 1] = self.l;
        cells[self.dim - 1] = nor;
        Grid::new(&origin, &extent, &cells)
    }

    pub fn normalizer(&self) -> f64 {
        self.r_side.powi(self.dim as i32 - 1) * (1.0 - (self.l / 2.0).ln())
    }

    fn params(&self) -> BoundParams {
        BoundParams {
            dim: self.dim,
            r_side: self.r_side,
            d: Some(self.d),
            l: Some(self.l),
            resolution: Some(self.resolution),
            ..Default::default()
        }
    }

    /// Rasterized cylinder `Q'_R × (d/2, l/2)` and the chosen lower region.
    pub fn sets(&self, cone: bool) -> Result<(CellSet, CellSet)> {
        self.validate()?;
        let grid = self.grid()?;
        let n = self.dim;
        let half = self.r_side / 2.0;
        let (d2, l2) = (self.d / 2.0, self.l / 2.0);
        let lateral = move |p: &[f64; 3]| (0..n - 1).map(|a| p[a].abs()).fold(0.0, f64::max);
        let a = CellSet::from_predicate(grid.clone(), |p| lateral(p) < half && p[n - 1] > d2);
        let b = CellSet::from_predicate(grid, |p| {
            let z = p[n - 1];
            if z >= -d2 {
                return false;
            }
            if cone {
                let in_pyramid = z > -l2 && z <= 0.0 && lateral(p) < half * (1.0 + z / l2);
                !in_pyramid
            } else {
                lateral(p) > half
            }
        });
        Ok((a, b))
    }

    fn report(&self, kind: BoundKind, plan: &KernelPlan) -> Result<BoundReport> {
        let (a, b) = self.sets(kind == BoundKind::CylinderCone)?;
        let s = CellSet::full(a.grid().clone());
        let measured = eval_g(&a, &b, &s, plan)?;
        let normalizer = self.normalizer();
        let bound = self.fitted_c.map(|c| c * normalizer);
        Ok(BoundReport {
            kind,
            measured,
            normalizer,
            ratio: measured / normalizer,
            bound,
            holds: bound.map(|v| measured <= v),
            hypotheses: None,
            params: self.params(),
        })
    }
}

/// Smallest cell count of at least `len·resolution` (and at most four times
/// that) that puts every mark, measured from the low end, on a cell face;
/// the rounded count when none does.
fn aligned_count(len: f64, resolution: f64, marks: &[f64]) -> usize {
    let base = ((len * resolution).round() as usize).max(2);
    (base..=4 * base)
        .find(|&n| {
            marks.iter().all(|m| {
                let k = m * n as f64 / len;
                (k - k.round()).abs() < 1e-9
            })
        })
        .unwrap_or(base)
}

/// Cylinder against the lateral complement of `Q'_R` in the lower slab.
pub fn check_bound_cylinder_complement(cfg: &CylinderBound, plan: &KernelPlan) -> Result<BoundReport> {
    cfg.report(BoundKind::CylinderComplement, plan)
}

/// Cylinder against the complement of the pyramid over `Q'_R` with apex
/// at depth `l/2`, within the lower slab.
pub fn check_bound_cylinder_cone(cfg: &CylinderBound, plan: &KernelPlan) -> Result<BoundReport> {
    cfg.report(BoundKind::CylinderCone, plan)
}

/// `K_R(t) = ∫_{Q'_R}∫_{Q'_R} (|x'−y'|² + t²)^{−(N+1)/2} dx' dy'`.
pub fn lateral_kernel(dim: usize, r_side: f64, t: f64) -> Result<f64> {
    ensure_range("t", t, t > 0.0, "t > 0")?;
    let r = r_side;
    match dim {
        1 => Ok(1.0 / (t * t)),
        2 => {
            let s = (r * r + t * t).sqrt();
            Ok(2.0 * r * r / (t * t * (s + t)))
        }
        3 => {
            let inner = |w1: f64| {
                let c2 = w1 * w1 + t * t;
                let c = c2.sqrt();
                if r / c < 0.1 {
                    integrate_graded(|w2| (r - w2) / ((c2 + w2 * w2) * (c2 + w2 * w2)), 0.0, r, -c, 4.0)
                } else {
                    r * (r / (2.0 * c2 * (c2 + r * r)) + (r / c).atan() / (2.0 * c2 * c))
                        - (1.0 / (2.0 * c2) - 1.0 / (2.0 * (c2 + r * r)))
                }
            };
            Ok(4.0 * integrate_graded(|w1| (r - w1) * inner(w1), 0.0, r, -t, 1.5))
        }
        _ => Err(Error::UnsupportedDimension(dim)),
    }
}

/// `G(Q'_R × a, Q'_R × b)` for normal intervals `b` below `a` with a
/// positive gap, by graded quadrature of the lateral kernel against the
/// overlap length of the two intervals.
pub fn slab_pair_interaction(dim: usize, r_side: f64, a: (f64, f64), b: (f64, f64)) -> Result<f64> {
    if !(a.0 < a.1 && b.0 < b.1) {
        return Err(Error::Config("slab intervals must be nonempty".into()));
    }
    let gap = a.0 - b.1;
    ensure_range("gap", gap, gap > 0.0, "lower slab strictly below upper slab")?;
    let overlap = |z: f64| (a.1.min(b.1 + z) - a.0.max(b.0 + z)).max(0.0);
    let lo = gap;
    let hi = a.1 - b.0;
    let mut cuts = vec![lo, a.1 - b.1, a.0 - b.0, hi];
    cuts.retain(|z| *z >= lo && *z <= hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    if !(1..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    let kernel = |z: f64| lateral_kernel(dim, r_side, z).unwrap_or(0.0) * overlap(z);
    Ok(cuts.windows(2).map(|w| integrate_graded(kernel, w[0], w[1], 0.0, 1.3)).sum())
}

/// Dimensional constants of the thin-slab lower bound, fitted by calibration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundConstants {
    pub xi: f64,
    pub c_dim: f64,
}

/// Thin-slab configuration inside `Q'_R × (−H/2, H/2)`: `A` above
/// `a_lo`, `B` below `b_hi`, with the gap `b_hi < x_N < a_lo` empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialCylinder {
    pub dim: usize,
    pub r_side: f64,
    pub height: f64,
    pub r: f64,
    pub lambda: f64,
    pub c: f64,
    pub eps: f64,
    pub a_lo: f64,
    pub b_hi: f64,
}

/// Numerical check of the hypotheses of the thin-slab lower bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypotheses {
    pub fraction_a: f64,
    pub fraction_b: f64,
    pub fraction_required: f64,
    pub residual: f64,
    pub residual_limit: f64,
    pub r_over_log: f64,
    pub holds: bool,
}

impl SpecialCylinder {
    /// Slabs separated by a gap of `theta·c·ε·(1 − 3λ − 6/|ln ε|)/R^{N−1}`
    /// centered at zero, so the residual is `theta` times its limit.
    pub fn centered(dim: usize, r_side: f64, height: f64, r: f64, lambda: f64, c: f64, eps: f64, theta: f64) -> Self {
        let log = eps.ln().abs();
        let factor = (1.0 - 3.0 * lambda - 6.0 / log).max(0.0);
        let mut gap = theta * c * eps * factor / r_side.powi(dim as i32 - 1);
        if !(gap > 0.0) {
            gap = theta * c * eps / r_side.powi(dim as i32 - 1);
        }
        Self {
            dim,
            r_side,
            height,
            r,
            lambda,
            c,
            eps,
            a_lo: gap / 2.0,
            b_hi: -gap / 2.0,
        }
    }

    /// Mirror image exchanging the roles of `A` and `B`.
    pub fn swapped(&self) -> Self {
        Self {
            a_lo: -self.b_hi,
            b_hi: -self.a_lo,
            ..self.clone()
        }
    }

    fn log(&self) -> f64 {
        self.eps.ln().abs()
    }

    fn lateral_area(&self) -> f64 {
        self.r_side.powi(self.dim as i32 - 1)
    }

    fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        ensure_range("eps", self.eps, self.eps > 0.0 && self.eps < 1.0, "0 < eps < 1")?;
        ensure_range("lambda", self.lambda, self.lambda > 0.0, "lambda > 0")?;
        ensure_range("c", self.c, self.c > 0.0, "c > 0")?;
        ensure_range("r", self.r, self.r > 0.0, "r > 0")?;
        let h2 = self.height / 2.0;
        if !(-h2 < self.b_hi && self.b_hi < self.a_lo && self.a_lo < h2) {
            return Err(Error::Config("need -H/2 < b_hi < a_lo < H/2".into()));
        }
        Ok(())
    }

    pub fn hypotheses(&self) -> Hypotheses {
        let h2 = self.height / 2.0;
        let log = self.log();
        let fraction_b = ((self.b_hi + h2).min(self.r) / self.r).min(1.0);
        let fraction_a = ((h2 - self.a_lo).min(self.r) / self.r).min(1.0);
        let required = 1.0 - self.lambda * self.lambda;
        let residual = self.lateral_area() * (self.a_lo - self.b_hi);
        let residual_limit = self.c * self.eps * (1.0 - 3.0 * self.lambda - 6.0 / log);
        let r_over_log = self.r / log;
        let holds = fraction_a > required && fraction_b > required && residual < residual_limit && r_over_log < 8.0 / 3.0;
        Hypotheses {
            fraction_a,
            fraction_b,
            fraction_required: required,
            residual,
            residual_limit,
            r_over_log,
            holds,
        }
    }

    /// Leading term of the bound (without the `C(N)` correction).
    pub fn leading_term(&self, xi: f64) -> Result<f64> {
        let log = self.log();
        let w = omega(self.dim)?;
        let f1 = 1.0 - 3.0 * self.lambda - 6.0 / log;
        let f2 = 1.0 - 2.0 * xi * (2.0 * self.lambda + self.c / log) - 2.0 / log;
        let bracket = (self.r / (8.0 * log)).ln() - (self.eps * log / 2.0).ln();
        Ok(self.lateral_area() * w * f1 * f2 * bracket)
    }

    /// Multiplier of `C(N)` in the bound.
    pub fn correction_factor(&self) -> f64 {
        self.lateral_area() * (1.0 - (self.r / (2.0 * self.log())).ln())
    }

    pub fn bound(&self, k: &LowerBoundConstants) -> Result<f64> {
        Ok(self.leading_term(k.xi)? - k.c_dim * self.correction_factor())
    }

    pub fn measured(&self) -> Result<f64> {
        self.validate()?;
        let h2 = self.height / 2.0;
        slab_pair_interaction(self.dim, self.r_side, (self.a_lo, h2), (-h2, self.b_hi))
    }
}

/// Measured `G(A, B, Q)` against the thin-slab lower bound.
///
/// The bound is asserted only when constants are supplied and the
/// hypotheses hold.
pub fn check_lower_bound_special_cylinder(cfg: &SpecialCylinder, constants: Option<&LowerBoundConstants>) -> Result<BoundReport> {
    let measured = cfg.measured()?;
    let hyp = cfg.hypotheses();
    let normalizer = cfg.lateral_area() * cfg.log();
    let bound = match constants {
        Some(k) => Some(cfg.bound(k)?),
        None => None,
    };
    let holds = match bound {
        Some(b) if hyp.holds => Some(measured >= b),
        _ => None,
    };
    Ok(BoundReport {
        kind: BoundKind::SpecialCylinder,
        measured,
        normalizer,
        ratio: measured / normalizer,
        bound,
        holds,
        hypotheses: Some(hyp),
        params: BoundParams {
            dim: cfg.dim,
            r_side: cfg.r_side,
            l: Some(cfg.height),
            r: Some(cfg.r),
            log_eps: Some(cfg.log()),
            lambda: Some(cfg.lambda),
            eps: Some(cfg.eps),
            c: Some(cfg.c),
            ..Default::default()
        },
    })
}

/// Smallest `C(N) ≥ 0` for which the bound with the given `ξ` holds on
/// every hypothesis-passing configuration of the calibration set.
pub fn calibrate_lower_bound(configs: &[SpecialCylinder], xi: f64) -> Result<LowerBoundConstants> {
    let mut c_dim = 0.0f64;
    let mut used = 0;
    for cfg in configs {
        if !cfg.hypotheses().holds {
            continue;
        }
        let needed = (cfg.leading_term(xi)? - cfg.measured()?) / cfg.correction_factor();
        c_dim = c_dim.max(needed);
        used += 1;
    }
    if used == 0 {
        return Err(Error::Config("no calibration configuration satisfies the hypotheses".into()));
    }
    Ok(LowerBoundConstants { xi, c_dim })
}
