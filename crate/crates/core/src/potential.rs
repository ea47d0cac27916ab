//! Double-well potentials and the potential term of the energy.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_range, Error, Result};
use crate::geometry::{CellSet, PhaseField};
use crate::reduce::pairwise_sum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WellForm {
    /// `scale·(u−α)²(u−β)²`
    Quartic,
    /// `scale·min((u−α)², (u−β)²)`
    TruncatedQuadratic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DoubleWell {
    alpha: f64,
    beta: f64,
    form: WellForm,
    scale: f64,
}

impl DoubleWell {
    pub fn new(alpha: f64, beta: f64, form: WellForm, scale: f64) -> Result<Self> {
        if !(alpha < beta) || !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::Config(format!("wells must satisfy alpha < beta, got {alpha} and {beta}")));
        }
        ensure_range("scale", scale, scale > 0.0 && scale.is_finite(), "scale > 0")?;
        Ok(Self {
            alpha,
            beta,
            form,
            scale,
        })
    }

    pub fn quartic(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, beta, WellForm::Quartic, 1.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn form(&self) -> WellForm {
        self.form
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    #[inline]
    pub fn eval(&self, u: f64) -> f64 {
        let a = u - self.alpha;
        let b = u - self.beta;
        match self.form {
            WellForm::Quartic => self.scale * a * a * b * b,
            WellForm::TruncatedQuadratic => self.scale * (a * a).min(b * b),
        }
    }

    /// Derivative; at the kink of the truncated form the average of the
    /// one-sided derivatives (zero) is returned.
    #[inline]
    pub fn derivative(&self, u: f64) -> f64 {
        let a = u - self.alpha;
        let b = u - self.beta;
        match self.form {
            WellForm::Quartic => 2.0 * self.scale * a * b * (a + b),
            WellForm::TruncatedQuadratic => {
                let (qa, qb) = (a * a, b * b);
                if qa < qb {
                    2.0 * self.scale * a
                } else if qb < qa {
                    2.0 * self.scale * b
                } else {
                    0.0
                }
            }
        }
    }
}

pub fn eval_w(w: &DoubleWell, u: f64) -> f64 {
    w.eval(u)
}

/// `(1/ε) Σ_{x∈A} W(u(x))·cellvolume`.
pub fn potential_term(w: &DoubleWell, u: &PhaseField, a: &CellSet, eps: f64) -> Result<f64> {
    ensure_range("eps", eps, eps > 0.0 && eps.is_finite(), "eps > 0")?;
    if u.grid() != a.grid() {
        return Err(Error::GridMismatch("phase field and cell set"));
    }
    let vol = u.grid().cell_volume();
    let cells: Vec<f64> = u
        .values()
        .iter()
        .zip(a.members())
        .map(|(v, m)| if *m { w.eval(*v) * vol } else { 0.0 })
        .collect();
    Ok(pairwise_sum(&cells) / eps)
}
