use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative RMS residual above which a fit is flagged.
pub const UNRELIABLE_RESIDUAL: f64 = 1e-2;

/// Least-squares fit of a ladder quantity in the variable `1/|ln ε|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: String,
    pub a: f64,
    pub b: f64,
    /// RMS of the residuals.
    pub residual: f64,
    /// `residual` over the RMS of the data.
    pub relative_residual: f64,
    pub points: usize,
    /// Extrapolated `ε → 0` value, equal to `a`.
    pub limit: f64,
    pub fit_unreliable: bool,
}

/// Fits `y ≈ a·f(L) + b·g(L)` with `L = |ln ε|`.
fn fit_two(model: &str, eps: &[f64], y: &[f64], f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64) -> Result<FitResult> {
    if eps.len() != y.len() {
        return Err(Error::Config("fit needs one value per ladder entry".into()));
    }
    if eps.len() < 3 {
        return Err(Error::Config(format!("fit needs at least 3 ladder points, got {}", eps.len())));
    }
    let rows: Vec<(f64, f64)> = eps
        .iter()
        .map(|e| {
            let l = e.ln().abs();
            (f(l), g(l))
        })
        .collect();
    let (mut s11, mut s12, mut s22, mut t1, mut t2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for ((p, q), v) in rows.iter().zip(y) {
        s11 += p * p;
        s12 += p * q;
        s22 += q * q;
        t1 += p * v;
        t2 += q * v;
    }
    let det = s11 * s22 - s12 * s12;
    if !(det.abs() > 1e-300) {
        return Err(Error::Config("fit is degenerate (repeated ladder points)".into()));
    }
    let a = (t1 * s22 - t2 * s12) / det;
    let b = (s11 * t2 - s12 * t1) / det;
    let n = y.len() as f64;
    let ss: f64 = rows.iter().zip(y).map(|((p, q), v)| (v - a * p - b * q).powi(2)).sum();
    let residual = (ss / n).sqrt();
    let scale = (y.iter().map(|v| v * v).sum::<f64>() / n).sqrt();
    let relative_residual = if scale > 0.0 { residual / scale } else { 0.0 };
    Ok(FitResult {
        model: model.to_string(),
        a,
        b,
        residual,
        relative_residual,
        points: y.len(),
        limit: a,
        fit_unreliable: relative_residual > UNRELIABLE_RESIDUAL,
    })
}

/// `y ≈ a + b/|ln ε|`.
pub fn fit_log_model(eps: &[f64], y: &[f64]) -> Result<FitResult> {
    fit_two("a + b/|ln eps|", eps, y, |_| 1.0, |l| 1.0 / l)
}

/// `y ≈ a(1 + ln|ln ε|/|ln ε|) + b/|ln ε|`, which also absorbs the
/// `ln|ln ε|/|ln ε|` correction of an affine transition of width `ε/|ln ε|`.
pub fn fit_loglog_model(eps: &[f64], y: &[f64]) -> Result<FitResult> {
    fit_two("a(1 + ln|ln eps|/|ln eps|) + b/|ln eps|", eps, y, |l| 1.0 + l.ln() / l, |l| 1.0 / l)
}
