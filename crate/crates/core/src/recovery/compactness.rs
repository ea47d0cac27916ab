use serde::{Deserialize, Serialize};

use crate::energy::eval_f_eps;
use crate::error::{Error, Result};
use crate::geometry::{CellSet, PhaseField, SurfactantField};
use crate::kernel::KernelPlan;
use crate::potential::DoubleWell;

/// Ladder diagnostics: L¹ steps, two-valuedness defects, normalized
/// surfactant masses and energies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompactnessReport {
    pub eps: Vec<f64>,
    /// `‖u_{i+1} − u_i‖_{L¹}` down the ladder.
    pub l1_steps: Vec<f64>,
    /// `∫ dist(u_ε, {α, β})`.
    pub defects: Vec<f64>,
    pub mass_over_log: Vec<f64>,
    pub energies: Vec<f64>,
    pub l1_decreasing: bool,
    pub defect_decreasing: bool,
    /// Energies grow down the ladder and at least double: the sequence
    /// shows no sign of a uniform energy bound.
    pub non_equibounded: bool,
}

fn nonincreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12) + 1e-300)
}

pub fn compactness_diagnostic(
    eps: &[f64],
    u: &[PhaseField],
    rho: &[SurfactantField],
    w: &DoubleWell,
    plan: &KernelPlan,
) -> Result<CompactnessReport> {
    if u.len() != eps.len() || rho.len() != eps.len() || eps.is_empty() {
        return Err(Error::Config("ladders must be nonempty and aligned".into()));
    }
    let mut l1_steps = Vec::new();
    for pair in u.windows(2) {
        l1_steps.push(pair[1].l1_distance(&pair[0])?);
    }
    let defects: Vec<f64> = u.iter().map(|f| f.two_valuedness_defect()).collect();
    let mut mass_over_log = Vec::new();
    let mut energies = Vec::new();
    for ((e, uf), rf) in eps.iter().zip(u).zip(rho) {
        mass_over_log.push(rf.mass() / e.ln().abs());
        let all = CellSet::full(uf.grid().clone());
        energies.push(eval_f_eps(uf, rf, &all, *e, w, plan)?.total);
    }
    for (i, v) in energies.iter().chain(&mass_over_log).enumerate() {
        if !v.is_finite() {
            return Err(Error::Config(format!("ladder entry {} has a non-finite energy or mass", i % eps.len())));
        }
    }
    let growing = energies.windows(2).all(|w| w[1] >= w[0]);
    let non_equibounded = energies.len() >= 2 && growing && energies[energies.len() - 1] > 0.0 && energies[energies.len() - 1] >= 2.0 * energies[0];
    Ok(CompactnessReport {
        eps: eps.to_vec(),
        l1_decreasing: nonincreasing(&l1_steps),
        defect_decreasing: nonincreasing(&defects),
        l1_steps,
        defects,
        mass_over_log,
        energies,
        non_equibounded,
    })
}
