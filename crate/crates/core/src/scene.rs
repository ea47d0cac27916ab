//! JSON scene files shared by the CLI subcommands.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::energy::MixedInteractionConfig;
use crate::error::{Error, Result};
use crate::geometry::{Atom, DiscreteMeasure, FacetSpec, Grid, PolyhedralInterface};
use crate::harness::ReducedMesh;
use crate::kernel::{CylinderBound, KernelPlan, SpecialCylinder};
use crate::potential::{DoubleWell, WellForm};
use crate::recovery::{RecoveryConfig, Zone};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub origin: Vec<f64>,
    pub extent: Vec<f64>,
    pub cells: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WellSpec {
    pub form: WellForm,
    pub scale: f64,
}

impl Default for WellSpec {
    fn default() -> Self {
        Self {
            form: WellForm::Quartic,
            scale: 1.0,
        }
    }
}

/// Phase field used by the `energy` subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FieldSpec {
    /// Recovery pair at `eps`.
    #[default]
    Recovery,
    /// Rasterized interface with zero surfactant.
    Sharp,
    /// Constant phase with constant surfactant.
    Constant { value: f64, rho: f64 },
}

/// How sweeps evaluate each ladder point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvaluatorKind {
    #[default]
    Grid,
    Reduced,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RelaxSpec {
    pub steps: usize,
    pub step: f64,
    /// Start from the recovery pair instead of the perturbed uniform state.
    pub from_recovery: bool,
}

impl Default for RelaxSpec {
    fn default() -> Self {
        Self {
            steps: 100,
            step: 1e-3,
            from_recovery: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct BoundsSpec {
    pub cylinders: Vec<CylinderBound>,
    pub cones: Vec<CylinderBound>,
    pub special: Vec<SpecialCylinder>,
    /// Special cylinders used only to fit `C(N)`.
    pub calibration: Vec<SpecialCylinder>,
    pub xi: Option<f64>,
    pub mixed: Vec<MixedInteractionConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub grid: GridSpec,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default = "one")]
    pub beta: f64,
    #[serde(default)]
    pub well: WellSpec,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub ladder: Vec<f64>,
    #[serde(default)]
    pub interface: Vec<FacetSpec>,
    /// Facet densities of the measure; when absent the densities on the
    /// interface facets are used.
    #[serde(default)]
    pub surface: Option<Vec<FacetSpec>>,
    #[serde(default)]
    pub atoms: Vec<Atom>,
    /// Outer radius of every atom density, unless a zone overrides it.
    #[serde(default)]
    pub atom_radius: Option<f64>,
    /// Zone boxes; defaults to one zone covering the domain.
    #[serde(default)]
    pub zones: Option<Vec<Zone>>,
    #[serde(default = "half")]
    pub margin_factor: f64,
    #[serde(default)]
    pub field: FieldSpec,
    #[serde(default)]
    pub evaluator: EvaluatorKind,
    #[serde(default)]
    pub reduced: ReducedMesh,
    #[serde(default)]
    pub relax: RelaxSpec,
    #[serde(default)]
    pub bounds: BoundsSpec,
    #[serde(default)]
    pub plan: KernelPlan,
}

fn one() -> f64 {
    1.0
}

fn half() -> f64 {
    0.5
}

impl Scene {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("scene: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn dim(&self) -> usize {
        self.grid.cells.len()
    }

    pub fn build_grid(&self) -> Result<Grid> {
        Grid::new(&self.grid.origin, &self.grid.extent, &self.grid.cells)
    }

    pub fn well(&self) -> Result<DoubleWell> {
        DoubleWell::new(self.alpha, self.beta, self.well.form, self.well.scale)
    }

    pub fn interface(&self) -> Result<PolyhedralInterface> {
        PolyhedralInterface::from_specs(self.dim(), &self.interface)
    }

    pub fn measure(&self, grid: &Grid, interface: &PolyhedralInterface) -> Result<DiscreteMeasure> {
        match &self.surface {
            Some(specs) => {
                let surface = PolyhedralInterface::from_specs(self.dim(), specs)?;
                DiscreteMeasure::new(grid, &self.atoms, surface, interface)
            }
            None => DiscreteMeasure::on_interface(grid, interface, &self.atoms),
        }
    }

    pub fn zones(&self) -> Vec<Zone> {
        let mut zones = self.zones.clone().unwrap_or_else(|| {
            let lo = self.grid.origin.clone();
            let hi = lo.iter().zip(&self.grid.extent).map(|(o, e)| o + e).collect();
            vec![Zone {
                lo,
                hi,
                atom_radius: None,
            }]
        });
        for z in &mut zones {
            if z.atom_radius.is_none() {
                z.atom_radius = self.atom_radius;
            }
        }
        zones
    }

    pub fn recovery_config(&self, ladder: &[f64]) -> Result<RecoveryConfig> {
        let grid = self.build_grid()?;
        let interface = self.interface()?;
        let measure = self.measure(&grid, &interface)?;
        RecoveryConfig::new(
            ladder.to_vec(),
            grid,
            self.alpha,
            self.beta,
            interface,
            measure,
            self.zones(),
            self.margin_factor,
        )
    }

    /// Ladder from the scene, or the single `eps` when no ladder is given.
    pub fn effective_ladder(&self) -> Vec<f64> {
        if !self.ladder.is_empty() {
            self.ladder.clone()
        } else {
            self.eps.into_iter().collect()
        }
    }

    pub fn eps(&self) -> Result<f64> {
        self.eps
            .or_else(|| self.ladder.last().copied())
            .ok_or_else(|| Error::Config("scene needs eps or a ladder".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_scene_parses_with_defaults() {
        let s = Scene::from_json(
            r#"{"grid": {"origin": [-0.5, -0.5], "extent": [1, 1], "cells": [16, 16]},
                "eps": 0.1,
                "interface": [{"normal": [0, 1], "offset": 0, "vertices": [[-0.5, 0], [0.5, 0]], "density": 4}]}"#,
        )
        .unwrap();
        assert_eq!(s.beta, 1.0);
        assert_eq!(s.zones().len(), 1);
        let cfg = s.recovery_config(&[0.1]).unwrap();
        assert_eq!(cfg.k(), 4.0);
        assert_eq!(s.field, FieldSpec::Recovery);
        assert!(Scene::from_json(r#"{"grid": 3}"#).is_err());
    }
}
