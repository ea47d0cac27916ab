use super::grid::{Grid, Point};
use crate::error::{Error, Result};

/// Cell-valued order parameter with its two wells.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseField {
    grid: Grid,
    values: Vec<f64>,
    alpha: f64,
    beta: f64,
}

impl PhaseField {
    pub fn new(grid: Grid, values: Vec<f64>, alpha: f64, beta: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidField(format!(
                "{} values for {} cells",
                values.len(),
                grid.len()
            )));
        }
        if !(alpha < beta) {
            return Err(Error::InvalidField(format!("wells must satisfy alpha < beta, got {alpha} and {beta}")));
        }
        Ok(Self {
            grid,
            values,
            alpha,
            beta,
        })
    }

    pub fn constant(grid: Grid, value: f64, alpha: f64, beta: f64) -> Result<Self> {
        let n = grid.len();
        Self::new(grid, vec![value; n], alpha, beta)
    }

    pub fn from_fn(grid: Grid, alpha: f64, beta: f64, f: impl Fn(&Point) -> f64) -> Result<Self> {
        let values = grid.centers().map(|p| f(&p)).collect();
        Self::new(grid, values, alpha, beta)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// The field `α + β − u`.
    pub fn swapped(&self) -> Self {
        let s = self.alpha + self.beta;
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|u| s - u).collect(),
            alpha: self.alpha,
            beta: self.beta,
        }
    }

    /// ∫ dist(u, {α, β}) over the domain.
    pub fn two_valuedness_defect(&self) -> f64 {
        let vol = self.grid.cell_volume();
        self.values
            .iter()
            .map(|u| (u - self.alpha).abs().min((u - self.beta).abs()) * vol)
            .sum()
    }

    /// L¹ distance to another field on the same grid.
    pub fn l1_distance(&self, other: &PhaseField) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("phase fields"));
        }
        let vol = self.grid.cell_volume();
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs() * vol)
            .sum())
    }
}

/// Nonnegative cell-valued surfactant density.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfactantField {
    grid: Grid,
    values: Vec<f64>,
}

impl SurfactantField {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidField(format!(
                "{} values for {} cells",
                values.len(),
                grid.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0)) {
            return Err(Error::InvalidField(format!("surfactant density {v} is negative")));
        }
        Ok(Self { grid, values })
    }

    pub fn zero(grid: Grid) -> Self {
        let n = grid.len();
        Self {
            grid,
            values: vec![0.0; n],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Σ ρ · cellvolume.
    pub fn mass(&self) -> f64 {
        let vol = self.grid.cell_volume();
        self.values.iter().map(|v| v * vol).sum()
    }

    /// Pointwise sum of two densities on the same grid.
    pub fn plus(&self, other: &SurfactantField) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("surfactant fields"));
        }
        Ok(Self {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }
}

/// Boolean cell membership.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSet {
    grid: Grid,
    members: Vec<bool>,
}

impl CellSet {
    pub fn new(grid: Grid, members: Vec<bool>) -> Result<Self> {
        if members.len() != grid.len() {
            return Err(Error::InvalidField(format!(
                "{} memberships for {} cells",
                members.len(),
                grid.len()
            )));
        }
        Ok(Self { grid, members })
    }

    pub fn full(grid: Grid) -> Self {
        let n = grid.len();
        Self {
            grid,
            members: vec![true; n],
        }
    }

    pub fn empty(grid: Grid) -> Self {
        let n = grid.len();
        Self {
            grid,
            members: vec![false; n],
        }
    }

    /// Cells whose centers satisfy `pred`.
    pub fn from_predicate(grid: Grid, pred: impl Fn(&Point) -> bool) -> Self {
        let members = grid.centers().map(|p| pred(&p)).collect();
        Self { grid, members }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn members(&self) -> &[bool] {
        &self.members
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.members[idx]
    }

    pub fn count(&self) -> usize {
        self.members.iter().filter(|m| **m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|m| *m)
    }

    pub fn volume(&self) -> f64 {
        self.count() as f64 * self.grid.cell_volume()
    }

    fn zip_with(&self, other: &CellSet, f: impl Fn(bool, bool) -> bool) -> Result<CellSet> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch("cell sets"));
        }
        Ok(CellSet {
            grid: self.grid.clone(),
            members: self.members.iter().zip(&other.members).map(|(a, b)| f(*a, *b)).collect(),
        })
    }

    pub fn union(&self, other: &CellSet) -> Result<CellSet> {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &CellSet) -> Result<CellSet> {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &CellSet) -> Result<CellSet> {
        self.zip_with(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> CellSet {
        CellSet {
            grid: self.grid.clone(),
            members: self.members.iter().map(|m| !m).collect(),
        }
    }

    pub fn is_subset_of(&self, other: &CellSet) -> bool {
        self.grid == other.grid && self.members.iter().zip(&other.members).all(|(a, b)| !*a || *b)
    }

    /// Membership as 0/1 weights.
    pub fn mask(&self) -> Vec<f64> {
        self.members.iter().map(|m| if *m { 1.0 } else { 0.0 }).collect()
    }
}

/// Per-cell scalar values on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CellField {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl CellField {
    /// Σ value · cellvolume.
    pub fn integral(&self) -> f64 {
        let vol = self.grid.cell_volume();
        self.values.iter().map(|v| v * vol).sum()
    }
}
