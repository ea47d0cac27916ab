use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::fit::{fit_log_model, FitResult};
use super::reduced::slab_terms;
use crate::energy::{eval_f_eps, EnergyBreakdown};
use crate::error::{Error, Result};
use crate::gamma_limit::{decompose, k_constant};
use crate::geometry::{rasterize_interface, CellSet, GridMeta};
use crate::kernel::KernelPlan;
use crate::recovery::{atom_mass_exact, build_recovery_pair, RecoveryPair};
use crate::scene::{EvaluatorKind, Scene};

/// One ladder point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub eps: f64,
    pub energy: EnergyBreakdown,
    /// `(1/|ln ε|)∫ρ_ε`.
    pub mass_over_log: f64,
    /// `∫|u_ε − u|` against the sharp limit.
    pub l1_defect: f64,
    /// Wall time in seconds; kept out of the emitted files.
    #[serde(skip)]
    pub wall_time: f64,
    pub grid_id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub records: Vec<SweepRecord>,
    /// Fits keyed by tracked quantity; empty with fewer than 3 points.
    pub fits: BTreeMap<String, FitResult>,
}

/// Quantities fitted by a sweep, in output order.
pub const TRACKED: [&str; 5] = ["term1", "term2", "term3", "total", "mass_over_ln"];

impl SweepRecord {
    pub fn quantity(&self, name: &str) -> f64 {
        match name {
            "term1" => self.energy.potential,
            "term2" => self.energy.nonlocal,
            "term3" => self.energy.surfactant,
            "total" => self.energy.total,
            "mass_over_ln" => self.mass_over_log,
            "l1_defect" => self.l1_defect,
            _ => f64::NAN,
        }
    }
}

/// Fits `a + b/|ln ε|` to every tracked quantity.
pub fn fit_records(records: &[SweepRecord]) -> BTreeMap<String, FitResult> {
    let mut fits = BTreeMap::new();
    if records.len() < 3 {
        return fits;
    }
    let eps: Vec<f64> = records.iter().map(|r| r.eps).collect();
    for name in TRACKED {
        let y: Vec<f64> = records.iter().map(|r| r.quantity(name)).collect();
        if let Ok(f) = fit_log_model(&eps, &y) {
            fits.insert(name.to_string(), f);
        }
    }
    fits
}

/// Recovery pair on the scene grid at one `ε`.
pub fn grid_record(scene: &Scene, eps: f64, plan: &KernelPlan) -> Result<SweepRecord> {
    recovery_record(scene, eps, plan).map(|(rec, _)| rec)
}

/// [`grid_record`] that also returns the evaluated pair.
pub fn recovery_record(scene: &Scene, eps: f64, plan: &KernelPlan) -> Result<(SweepRecord, RecoveryPair)> {
    let start = Instant::now();
    let cfg = scene.recovery_config(&[eps])?;
    let w = scene.well()?;
    let pair = build_recovery_pair(&cfg, eps, plan)?;
    let all = CellSet::full(cfg.grid.clone());
    let energy = eval_f_eps(&pair.u, &pair.rho, &all, eps, &w, plan)?;
    let sharp = rasterize_interface(&cfg.interface, &cfg.grid, scene.alpha, scene.beta)?;
    let rec = SweepRecord {
        eps,
        mass_over_log: pair.rho.mass() / eps.ln().abs(),
        l1_defect: pair.u.l1_distance(&sharp)?,
        energy,
        wall_time: start.elapsed().as_secs_f64(),
        grid_id: cfg.grid.meta().id(),
    };
    Ok((rec, pair))
}

/// Planar interfaces through the planar reduction (per unit area times
/// facet area) plus atoms through their exact radial mass.
pub fn reduced_record(scene: &Scene, eps: f64, plan: &KernelPlan) -> Result<SweepRecord> {
    let start = Instant::now();
    let grid = scene.build_grid()?;
    let interface = scene.interface()?;
    let measure = scene.measure(&grid, &interface)?;
    let w = scene.well()?;
    let dim = scene.dim();
    let log = eps.ln().abs();
    let k = k_constant(scene.alpha, scene.beta, dim)?;
    let dec = decompose(&measure, &interface)?;
    let (mut potential, mut nonlocal, mut surfactant, mut mass, mut l1) = (0.0, 0.0, 0.0, 0.0, 0.0);
    if !interface.is_empty() {
        let slab = slab_terms(eps, &w, dim, &scene.reduced)?;
        for pieces in &dec.absolutely_continuous {
            for p in pieces {
                let ratio = p.density / k;
                potential += p.area * slab.potential;
                nonlocal += p.area * slab.interaction / log;
                surfactant += p.area * (1.0 - ratio).abs() * slab.interaction / log;
                mass += p.area * ratio * slab.interaction / log;
                l1 += p.area * slab.l1_defect;
            }
        }
    }
    if dec.off_interface_mass > 0.0 {
        return Err(Error::Config("the reduced evaluator supports surface mass only on the interface".into()));
    }
    for (i, (p, zeta)) in measure.atoms().iter().enumerate() {
        let r = scene.atom_radius.unwrap_or_else(|| grid.distance_to_boundary(p).min(0.5) * 0.9);
        if !(eps < r) {
            return Err(Error::Config(format!("atom {i}: eps must be below the radius {r}")));
        }
        let m = atom_mass_exact(*zeta, eps, r) / log;
        surfactant += m;
        mass += m;
    }
    let energy = EnergyBreakdown {
        potential,
        nonlocal,
        surfactant,
        total: potential + nonlocal + surfactant,
        eps,
        log_eps: log,
        with_surfactant: true,
        grid: GridMeta {
            dim,
            origin: scene.grid.origin.clone(),
            extent: scene.grid.extent.clone(),
            cells: scene.grid.cells.clone(),
        },
        plan: *plan,
    };
    Ok(SweepRecord {
        eps,
        energy,
        mass_over_log: mass,
        l1_defect: l1,
        wall_time: start.elapsed().as_secs_f64(),
        grid_id: format!("reduced-{}", scene.reduced.core_cells),
    })
}

/// Evaluates every ladder point in ladder order and fits the results.
pub fn run_sweep(scene: &Scene, ladder: &[f64], plan: &KernelPlan) -> Result<SweepOutput> {
    if ladder.is_empty() {
        return Err(Error::Config("empty eps ladder".into()));
    }
    let mut records = Vec::with_capacity(ladder.len());
    for &eps in ladder {
        let rec = match scene.evaluator {
            EvaluatorKind::Grid => grid_record(scene, eps, plan)?,
            EvaluatorKind::Reduced => reduced_record(scene, eps, plan)?,
        };
        log::info!("eps = {eps:e}: total = {}", rec.energy.total);
        records.push(rec);
    }
    let fits = fit_records(&records);
    Ok(SweepOutput { records, fits })
}
