//! Planar profiles: the nonlocal energy per unit interface area of a field
//! depending on the normal coordinate only, with the in-plane integral done
//! in closed form (kernel `ω_{N−1}/|s−t|²`).

use rayon::prelude::*;

use crate::error::{ensure_range, Error, Result};
use crate::gamma_limit::omega;
use crate::geometry::PhaseField;
use crate::reduce::pairwise_sum;

/// Piecewise constant profile on a (possibly graded) partition of an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile1d {
    edges: Vec<f64>,
    values: Vec<f64>,
}

impl Profile1d {
    pub fn new(edges: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if edges.len() < 3 || values.len() + 1 != edges.len() {
            return Err(Error::InvalidField(format!(
                "{} edges need {} values, got {}",
                edges.len(),
                edges.len().saturating_sub(1),
                values.len()
            )));
        }
        if edges.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidField("profile edges must be strictly increasing".into()));
        }
        Ok(Self { edges, values })
    }

    /// Profile of a one-dimensional phase field.
    pub fn from_phase_field(u: &PhaseField) -> Result<Self> {
        let g = u.grid();
        if g.dim() != 1 {
            return Err(Error::UnsupportedDimension(g.dim()));
        }
        let n = g.cells()[0];
        let edges = (0..=n).map(|i| g.origin()[0] + i as f64 * g.h()[0]).collect();
        Self::new(edges, u.values().to_vec())
    }

    /// Samples `f` at midpoints of a mesh on `[lo, hi]` that is uniform
    /// with `core_cells` cells on `[core_lo, core_hi]` and grows
    /// geometrically by `growth` towards both ends.
    pub fn graded(
        lo: f64,
        hi: f64,
        core_lo: f64,
        core_hi: f64,
        core_cells: usize,
        growth: f64,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        if !(lo <= core_lo && core_lo < core_hi && core_hi <= hi) || core_cells == 0 {
            return Err(Error::Config("graded mesh needs lo <= core_lo < core_hi <= hi".into()));
        }
        ensure_range("growth", growth, growth >= 1.0, "growth >= 1")?;
        let h0 = (core_hi - core_lo) / core_cells as f64;
        let mut right = Vec::new();
        let (mut x, mut h) = (core_hi, h0);
        while x < hi {
            h *= growth;
            x = (x + h).min(hi);
            if hi - x < 0.5 * h {
                x = hi;
            }
            right.push(x);
        }
        let mut left = Vec::new();
        let (mut x, mut h) = (core_lo, h0);
        while x > lo {
            h *= growth;
            x = (x - h).max(lo);
            if x - lo < 0.5 * h {
                x = lo;
            }
            left.push(x);
        }
        let mut edges: Vec<f64> = left.into_iter().rev().collect();
        edges.extend((0..=core_cells).map(|i| {
            if i == core_cells {
                core_hi
            } else {
                core_lo + i as f64 * h0
            }
        }));
        edges.extend(right);
        let values = edges.windows(2).map(|w| f(0.5 * (w[0] + w[1]))).collect();
        Self::new(edges, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn midpoints(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn widths(&self) -> Vec<f64> {
        self.edges.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn length(&self) -> f64 {
        self.edges[self.edges.len() - 1] - self.edges[0]
    }

    /// Same mesh with values mapped through `f`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            edges: self.edges.clone(),
            values: self.values.iter().map(|v| f(*v)).collect(),
        }
    }

    /// Cells whose midpoints lie in the centered window of length `window`.
    fn window_mask(&self, window: f64) -> Result<Vec<bool>> {
        let len = self.length();
        ensure_range("window", window, window > 0.0 && window <= len * (1.0 + 1e-12), "0 < window <= profile length")?;
        let c = 0.5 * (self.edges[0] + self.edges[self.edges.len() - 1]);
        Ok(self.midpoints().iter().map(|s| (s - c).abs() <= 0.5 * window).collect())
    }
}

/// Per-cell `I(s_i) = ω_{N−1} Σ_{j≠i} (φ_j − φ_i)² h_j / (s_j − s_i)²` over the window.
pub fn quasi1d_interaction(profile: &Profile1d, n: usize, window: f64) -> Result<Vec<f64>> {
    let w = omega(n)?;
    let mask = profile.window_mask(window)?;
    let s = profile.midpoints();
    let h: Vec<f64> = profile.widths().iter().zip(&mask).map(|(h, m)| if *m { *h } else { 0.0 }).collect();
    let phi = profile.values();
    let out = (0..profile.len())
        .into_par_iter()
        .map(|i| {
            if !mask[i] {
                return 0.0;
            }
            let (si, pi) = (s[i], phi[i]);
            let term = |j: usize| {
                let d = phi[j] - pi;
                let r = s[j] - si;
                d * d * h[j] / (r * r)
            };
            let left = lanes4!(i, |j| term(j));
            let right = lanes4!(s.len() - i - 1, |k| term(i + 1 + k));
            w * (left + right)
        })
        .collect();
    Ok(out)
}

/// Nonlocal double integral per unit interface area, `Σ_i h_i I(s_i)`.
pub fn quasi1d_nonlocal(profile: &Profile1d, n: usize, window: f64) -> Result<f64> {
    let i = quasi1d_interaction(profile, n, window)?;
    let h = profile.widths();
    let cells: Vec<f64> = i.iter().zip(&h).map(|(a, b)| a * b).collect();
    Ok(pairwise_sum(&cells))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(w: f64) -> impl Fn(f64) -> f64 {
        move |s: f64| (0.5 - s / w).clamp(0.0, 1.0)
    }

    #[test]
    fn constant_profile_is_zero() {
        let p = Profile1d::graded(-0.5, 0.5, -0.01, 0.01, 50, 1.05, |_| 0.7).unwrap();
        assert_eq!(quasi1d_nonlocal(&p, 2, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn graded_mesh_tiles_interval() {
        let p = Profile1d::graded(-0.5, 0.5, -1e-3, 1e-3, 100, 1.01, |s| s).unwrap();
        assert_eq!(p.edges()[0], -0.5);
        assert_eq!(*p.edges().last().unwrap(), 0.5);
        let total: f64 = p.widths().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        let ratios = p.widths().windows(2).map(|w| w[1] / w[0]).fold(0.0, f64::max);
        assert!(ratios < 1.6);
    }

    #[test]
    fn swapping_phases_preserves_value() {
        let p = Profile1d::graded(-0.5, 0.5, -0.005, 0.005, 200, 1.02, ramp(0.01)).unwrap();
        let q = p.map(|v| 1.0 - v);
        let a = quasi1d_nonlocal(&p, 2, 1.0).unwrap();
        let b = quasi1d_nonlocal(&q, 2, 1.0).unwrap();
        assert!((a - b).abs() <= 1e-13 * a);
    }

    #[test]
    fn sharp_step_has_closed_form() {
        // For a unit jump at 0 on (-1/2, 1/2) the exact double integral
        // restricted to |s - t| > δ diverges like 2 ln(1/δ); check the
        // discrete value against the closed form for cells of width h.
        let n = 400;
        let edges: Vec<f64> = (0..=n).map(|i| -0.5 + i as f64 / n as f64).collect();
        let values = edges.windows(2).map(|w| if w[0] < 0.0 { 1.0 } else { 0.0 }).collect();
        let p = Profile1d::new(edges, values).unwrap();
        let v = quasi1d_nonlocal(&p, 1, 1.0).unwrap();
        let h = 1.0 / n as f64;
        let mut exact = 0.0;
        for i in 0..n / 2 {
            for j in 0..n / 2 {
                let r = (i + j + 1) as f64 * h;
                exact += 2.0 * h * h / (r * r);
            }
        }
        assert!((v - exact).abs() < 1e-12 * exact);
    }
}
