//! The three-term functional `F_ε`, its nonlocal part `NL_ε`, the energy
//! density `g_ε` and the mixed-interaction comparison.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_range, Error, Result};
use crate::geometry::{CellField, CellSet, Grid, GridMeta, PhaseField, SurfactantField};
use crate::kernel::{eval_i_field, KernelPlan};
use crate::potential::{potential_term, DoubleWell};
use crate::reduce::pairwise_sum;

/// Terms of `F_ε(u, ρ, A)`; `total` is their left-to-right sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub potential: f64,
    pub nonlocal: f64,
    pub surfactant: f64,
    pub total: f64,
    pub eps: f64,
    pub log_eps: f64,
    /// False for `NL_ε`, where the surfactant term is omitted.
    pub with_surfactant: bool,
    pub grid: GridMeta,
    pub plan: KernelPlan,
}

impl EnergyBreakdown {
    fn assemble(potential: f64, nonlocal: f64, surfactant: Option<f64>, eps: f64, grid: &Grid, plan: &KernelPlan) -> Self {
        let s = surfactant.unwrap_or(0.0);
        Self {
            potential,
            nonlocal,
            surfactant: s,
            total: potential + nonlocal + s,
            eps,
            log_eps: eps.ln().abs(),
            with_surfactant: surfactant.is_some(),
            grid: grid.meta(),
            plan: *plan,
        }
    }
}

pub(crate) fn check_eps(eps: f64) -> Result<f64> {
    ensure_range("eps", eps, eps > 0.0 && eps < 1.0, "0 < eps < 1")?;
    Ok(eps.ln().abs())
}

fn check_grids(u: &PhaseField, a: &CellSet, rho: Option<&SurfactantField>) -> Result<()> {
    if u.grid() != a.grid() {
        return Err(Error::GridMismatch("phase field and cell set"));
    }
    if let Some(r) = rho {
        if r.grid() != u.grid() {
            return Err(Error::GridMismatch("phase field and surfactant field"));
        }
    }
    Ok(())
}

/// `(1/|ln ε|) Σ_{x∈A} |I(x) − ρ(x)|·vol`.
fn surfactant_term(i: &[f64], rho: &[f64], a: &CellSet, vol: f64, log: f64) -> f64 {
    let cells: Vec<f64> = i
        .iter()
        .zip(rho)
        .zip(a.members())
        .map(|((iv, r), m)| if *m { (iv - r).abs() } else { 0.0 })
        .collect();
    pairwise_sum(&cells) * vol / log
}

/// `F_ε` from a precomputed interaction field `I` on `A` (no kernel pass).
pub fn eval_f_eps_with_field(
    u: &PhaseField,
    rho: &SurfactantField,
    a: &CellSet,
    eps: f64,
    w: &DoubleWell,
    i: &CellField,
    plan: &KernelPlan,
) -> Result<EnergyBreakdown> {
    let log = check_eps(eps)?;
    check_grids(u, a, Some(rho))?;
    if &i.grid != u.grid() {
        return Err(Error::GridMismatch("phase field and interaction field"));
    }
    let vol = u.grid().cell_volume();
    let potential = potential_term(w, u, a, eps)?;
    let nonlocal = pairwise_sum(&i.values) * vol / log;
    let surfactant = surfactant_term(&i.values, rho.values(), a, vol, log);
    Ok(EnergyBreakdown::assemble(potential, nonlocal, Some(surfactant), eps, u.grid(), plan))
}

/// `F_ε(u, ρ, A)` with one interaction pass shared by terms 2 and 3.
pub fn eval_f_eps(
    u: &PhaseField,
    rho: &SurfactantField,
    a: &CellSet,
    eps: f64,
    w: &DoubleWell,
    plan: &KernelPlan,
) -> Result<EnergyBreakdown> {
    check_eps(eps)?;
    check_grids(u, a, Some(rho))?;
    let i = eval_i_field(u, a, plan)?;
    eval_f_eps_with_field(u, rho, a, eps, w, &i, plan)
}

/// `F_ε(u, |ln ε|·ρ̂, A)`: the surfactant enters in the normalization whose
/// weak* limit is the measure `μ`.
pub fn eval_f_eps_rescaled(
    u: &PhaseField,
    rho_hat: &SurfactantField,
    a: &CellSet,
    eps: f64,
    w: &DoubleWell,
    plan: &KernelPlan,
) -> Result<EnergyBreakdown> {
    let log = check_eps(eps)?;
    let raw = SurfactantField::new(rho_hat.grid().clone(), rho_hat.values().iter().map(|v| v * log).collect())?;
    eval_f_eps(u, &raw, a, eps, w, plan)
}

/// `NL_ε(u, A)`: potential plus nonlocal term.
pub fn eval_nl_eps(u: &PhaseField, a: &CellSet, eps: f64, w: &DoubleWell, plan: &KernelPlan) -> Result<EnergyBreakdown> {
    let log = check_eps(eps)?;
    check_grids(u, a, None)?;
    let i = eval_i_field(u, a, plan)?;
    let potential = potential_term(w, u, a, eps)?;
    let nonlocal = pairwise_sum(&i.values) * u.grid().cell_volume() / log;
    Ok(EnergyBreakdown::assemble(potential, nonlocal, None, eps, u.grid(), plan))
}

/// Per-cell energy density `g_ε` on the whole grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityField {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl DensityField {
    /// `Σ g·vol` in the pairwise order.
    pub fn integral(&self) -> f64 {
        pairwise_sum(&self.values) * self.grid.cell_volume()
    }

    /// Share of the integral carried by cells whose centers satisfy `pred`.
    pub fn fraction_where(&self, pred: impl Fn(&crate::geometry::Point) -> bool) -> f64 {
        let inside: Vec<f64> = self
            .grid
            .centers()
            .zip(&self.values)
            .map(|(p, v)| if pred(&p) { *v } else { 0.0 })
            .collect();
        pairwise_sum(&inside) / pairwise_sum(&self.values)
    }
}

/// `g_ε = W(u)/ε + I/|ln ε| + |I − ρ|/|ln ε|` per cell, with `A = Ω`.
pub fn eval_density_field(
    u: &PhaseField,
    rho: &SurfactantField,
    eps: f64,
    w: &DoubleWell,
    plan: &KernelPlan,
) -> Result<DensityField> {
    let log = check_eps(eps)?;
    let all = CellSet::full(u.grid().clone());
    check_grids(u, &all, Some(rho))?;
    let i = eval_i_field(u, &all, plan)?;
    let values = u
        .values()
        .iter()
        .zip(&i.values)
        .zip(rho.values())
        .map(|((uv, iv), r)| w.eval(*uv) / eps + iv / log + (iv - r).abs() / log)
        .collect();
    Ok(DensityField {
        grid: u.grid().clone(),
        values,
    })
}

/// Graph-adapted transition over an affine `h(x') = h0 + slope·x'` below
/// the cube `Q'_R × (0, l)`, compared with the vertical transition that
/// reaches the far well at `min h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedInteractionConfig {
    pub dim: usize,
    pub r_side: f64,
    pub l: f64,
    pub h0: f64,
    pub slope: Vec<f64>,
    pub eps: f64,
    /// Cells per unit length.
    pub resolution: f64,
    /// Exchange the roles of the wells.
    #[serde(default)]
    pub swap: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedInteractionReport {
    /// `F_ε(u, D, 0)` on the region above the graph.
    pub lhs: f64,
    /// `F_ε(û, Q'_R × (min h, l), 0)`.
    pub rhs_vertical: f64,
    /// `(1/ε)∫_D W(u)`.
    pub rhs_potential: f64,
    pub rhs: f64,
    pub nonlocal_lhs: f64,
    pub nonlocal_rhs: f64,
    pub min_h: f64,
    pub max_h: f64,
    pub holds: bool,
}

/// Relative slack for the comparison.
pub const MIXED_SLACK: f64 = 0.02;

impl MixedInteractionConfig {
    fn h(&self, p: &crate::geometry::Point) -> f64 {
        self.h0 + self.slope.iter().enumerate().map(|(a, s)| s * p[a]).sum::<f64>()
    }

    /// Extremes of `h` over the closed base.
    pub fn h_range(&self) -> (f64, f64) {
        let spread: f64 = self.slope.iter().map(|s| s.abs()).sum::<f64>() * self.r_side / 2.0;
        (self.h0 - spread, self.h0 + spread)
    }

    fn validate(&self) -> Result<()> {
        if !(2..=3).contains(&self.dim) {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        if self.slope.len() != self.dim - 1 {
            return Err(Error::Config(format!("slope needs {} components", self.dim - 1)));
        }
        ensure_range("R", self.r_side, self.r_side > 0.0, "R > 0")?;
        ensure_range("l", self.l, self.l > 0.0, "l > 0")?;
        ensure_range("resolution", self.resolution, self.resolution > 0.0, "resolution > 0")?;
        let (_, hi) = self.h_range();
        ensure_range("max h", hi, hi < 0.0, "h < 0 on the closed base")?;
        check_eps(self.eps)?;
        Ok(())
    }
}

/// Evaluates both sides of `F_ε(u, D, 0) ≤ F_ε(û, cylinder, 0) + (1/ε)∫_D W(u)`.
pub fn check_mixed_interaction(cfg: &MixedInteractionConfig, w: &DoubleWell, plan: &KernelPlan) -> Result<MixedInteractionReport> {
    cfg.validate()?;
    let (min_h, max_h) = cfg.h_range();
    let n = cfg.dim;
    let depth = cfg.l - min_h;
    let lat = ((cfg.r_side * cfg.resolution).round() as usize).max(2);
    let nor = ((depth * cfg.resolution).round() as usize).max(2);
    let mut origin = vec![-cfg.r_side / 2.0; n];
    let mut extent = vec![cfg.r_side; n];
    let mut cells = vec![lat; n];
    origin[n - 1] = min_h;
    extent[n - 1] = depth;
    cells[n - 1] = nor;
    let grid = Grid::new(&origin, &extent, &cells)?;

    let (top, bottom) = if cfg.swap { (w.beta(), w.alpha()) } else { (w.alpha(), w.beta()) };
    let jump = bottom - top;
    let u = PhaseField::from_fn(grid.clone(), w.alpha(), w.beta(), |p| {
        let z = p[n - 1];
        if z >= 0.0 {
            top
        } else {
            top + jump * (z / cfg.h(p)).min(1.0)
        }
    })?;
    let u_hat = PhaseField::from_fn(grid.clone(), w.alpha(), w.beta(), |p| {
        let z = p[n - 1];
        if z >= 0.0 {
            top
        } else {
            top + jump * (z / min_h)
        }
    })?;
    let d = CellSet::from_predicate(grid.clone(), |p| p[n - 1] > cfg.h(p));
    let cyl = CellSet::full(grid.clone());
    let zero = SurfactantField::zero(grid);

    let left = eval_f_eps(&u, &zero, &d, cfg.eps, w, plan)?;
    let right = eval_f_eps(&u_hat, &zero, &cyl, cfg.eps, w, plan)?;
    let rhs_potential = potential_term(w, &u, &d, cfg.eps)?;
    let rhs = right.total + rhs_potential;
    Ok(MixedInteractionReport {
        lhs: left.total,
        rhs_vertical: right.total,
        rhs_potential,
        rhs,
        nonlocal_lhs: left.nonlocal,
        nonlocal_rhs: right.nonlocal,
        min_h,
        max_h,
        holds: left.total <= rhs * (1.0 + MIXED_SLACK),
    })
}
