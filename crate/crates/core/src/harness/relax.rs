use serde::{Deserialize, Serialize};

use crate::energy::{check_eps, eval_f_eps_with_field};
use crate::error::{ensure_range, Error, Result};
use crate::geometry::{CellField, CellSet, PhaseField, SurfactantField};
use crate::kernel::{eval_i_field, weighted_difference_field, KernelPlan};
use crate::potential::DoubleWell;

/// Maximum number of step halvings before giving up.
pub const MAX_HALVINGS: usize = 20;
const GROWTH: f64 = 1.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Completed,
    StepCollapse,
}

/// Trajectory of the projected subgradient descent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelaxSummary {
    /// Energy before the first step and after every accepted step.
    pub energies: Vec<f64>,
    /// Two-valuedness defect at the same points.
    pub defects: Vec<f64>,
    pub step_sizes: Vec<f64>,
    pub accepted: usize,
    pub halvings: usize,
    pub stop: StopReason,
    #[serde(skip)]
    pub u: Option<PhaseField>,
    #[serde(skip)]
    pub rho: Option<SurfactantField>,
}

impl RelaxSummary {
    /// Relative energy decrease of the last accepted step.
    pub fn last_relative_decrease(&self) -> Option<f64> {
        let n = self.energies.len();
        (n >= 2).then(|| (self.energies[n - 2] - self.energies[n - 1]) / self.energies[n - 2].abs().max(f64::MIN_POSITIVE))
    }
}

/// `u_ε = (α + β)/2` plus a fixed smooth perturbation of relative size
/// `amplitude`, which moves the start off the symmetric critical point.
pub fn perturbed_uniform(grid: &crate::geometry::Grid, alpha: f64, beta: f64, amplitude: f64) -> Result<PhaseField> {
    let mid = 0.5 * (alpha + beta);
    let amp = amplitude * (beta - alpha);
    PhaseField::from_fn(grid.clone(), alpha, beta, |p| {
        let s = (7.1 * p[0] + 3.3 * p[1] + 1.3 * p[2]).sin() * (5.3 * p[1] - 2.9 * p[0] + 0.7).cos();
        mid + amp * s
    })
}

struct State {
    u: PhaseField,
    rho: SurfactantField,
    i: CellField,
    energy: f64,
}

fn evaluate(u: PhaseField, rho: SurfactantField, all: &CellSet, eps: f64, w: &DoubleWell, plan: &KernelPlan) -> Result<State> {
    let i = eval_i_field(&u, all, plan)?;
    let energy = eval_f_eps_with_field(&u, &rho, all, eps, w, &i, plan)?.total;
    Ok(State { u, rho, i, energy })
}

/// Projected subgradient descent on the discretized `F_ε(u, ρ)`.
///
/// The `L²` subgradient is `W'(u)/ε + (1/|ln ε|)Σ_y (u_x − u_y)(4 + 2s_x + 2s_y)K`
/// in `u` and `−s/|ln ε|` in `ρ`, with `s = sign(I − ρ)` (zero at zero);
/// `ρ` is projected back onto `ρ ≥ 0`. A step is accepted when the energy
/// does not increase; otherwise it is halved.
pub fn relax(
    u0: &PhaseField,
    rho0: &SurfactantField,
    eps: f64,
    w: &DoubleWell,
    steps: usize,
    step: f64,
    plan: &KernelPlan,
) -> Result<RelaxSummary> {
    ensure_range("step", step, step > 0.0 && step.is_finite(), "step > 0")?;
    let log = check_eps(eps)?;
    if u0.grid() != rho0.grid() {
        return Err(Error::GridMismatch("phase field and surfactant field"));
    }
    let grid = u0.grid().clone();
    let all = CellSet::full(grid.clone());
    let mut state = evaluate(u0.clone(), rho0.clone(), &all, eps, w, plan)?;
    let mut summary = RelaxSummary {
        energies: vec![state.energy],
        defects: vec![state.u.two_valuedness_defect()],
        step_sizes: Vec::new(),
        accepted: 0,
        halvings: 0,
        stop: StopReason::Completed,
        u: None,
        rho: None,
    };
    let mut tau = step;
    for _ in 0..steps {
        let sign: Vec<f64> = state
            .i
            .values
            .iter()
            .zip(state.rho.values())
            .map(|(i, r)| {
                let d = i - r;
                if d > 0.0 {
                    1.0
                } else if d < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            })
            .collect();
        let c: Vec<f64> = sign.iter().map(|s| 4.0 + 2.0 * s).collect();
        let q: Vec<f64> = sign.iter().map(|s| 2.0 * s).collect();
        let wd = weighted_difference_field(&grid, state.u.values(), &all, &c, &q, plan)?;
        let grad_u: Vec<f64> = state
            .u
            .values()
            .iter()
            .zip(&wd)
            .map(|(u, d)| w.derivative(*u) / eps + d / log)
            .collect();
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            let u: Vec<f64> = state.u.values().iter().zip(&grad_u).map(|(u, g)| u - tau * g).collect();
            let rho: Vec<f64> = state.rho.values().iter().zip(&sign).map(|(r, s)| (r + tau * s / log).max(0.0)).collect();
            let u = PhaseField::new(grid.clone(), u, u0.alpha(), u0.beta())?;
            let rho = SurfactantField::new(grid.clone(), rho)?;
            let cand = evaluate(u, rho, &all, eps, w, plan)?;
            if cand.energy <= state.energy {
                accepted = Some(cand);
                break;
            }
            tau *= 0.5;
            summary.halvings += 1;
        }
        match accepted {
            Some(next) => {
                state = next;
                summary.accepted += 1;
                summary.step_sizes.push(tau);
                summary.energies.push(state.energy);
                summary.defects.push(state.u.two_valuedness_defect());
                tau *= GROWTH;
            }
            None => {
                summary.stop = StopReason::StepCollapse;
                break;
            }
        }
    }
    summary.u = Some(state.u);
    summary.rho = Some(state.rho);
    Ok(summary)
}
