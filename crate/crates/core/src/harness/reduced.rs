//! Semi-analytic evaluation of planar interfaces and atoms: the normal
//! profile is handled by the planar reduction and atoms by their exact
//! radial mass.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::kernel::{quasi1d_interaction, Profile1d};
use crate::potential::DoubleWell;
use crate::recovery::{affine_transition, transition_width};
use crate::reduce::pairwise_sum;

/// Graded normal mesh on `(−1/2, 1/2)`: `core_cells` uniform cells across
/// the transition layer, growing by `growth` outside it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReducedMesh {
    pub core_cells: usize,
    pub growth: f64,
}

impl Default for ReducedMesh {
    fn default() -> Self {
        Self {
            core_cells: 2000,
            growth: 1.0015,
        }
    }
}

/// Per unit interface area of the slab profile at one `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlabTerms {
    /// `(1/ε)∫W(φ)`.
    pub potential: f64,
    /// `∫∫(φ(t) − φ(s))² ω_{N−1}/|t − s|²`, before division by `|ln ε|`.
    pub interaction: f64,
    /// `∫|φ − sharp limit|`.
    pub l1_defect: f64,
    pub nodes: usize,
}

pub fn slab_terms(eps: f64, w: &DoubleWell, dim: usize, mesh: &ReducedMesh) -> Result<SlabTerms> {
    let width = transition_width(eps)?;
    let (alpha, beta) = (w.alpha(), w.beta());
    let profile = Profile1d::graded(-0.5, 0.5, -width / 2.0, width / 2.0, mesh.core_cells, mesh.growth, |s| {
        affine_transition(s, width, alpha, beta)
    })?;
    let h = profile.widths();
    let i = quasi1d_interaction(&profile, dim, profile.length())?;
    let interaction = pairwise_sum(&i.iter().zip(&h).map(|(a, b)| a * b).collect::<Vec<_>>());
    let pot: Vec<f64> = profile.values().iter().zip(&h).map(|(v, hh)| w.eval(*v) * hh).collect();
    let l1: Vec<f64> = profile
        .midpoints()
        .iter()
        .zip(profile.values())
        .zip(&h)
        .map(|((s, v), hh)| {
            let sharp = if *s < 0.0 { beta } else { alpha };
            (v - sharp).abs() * hh
        })
        .collect();
    Ok(SlabTerms {
        potential: pairwise_sum(&pot) / eps,
        interaction,
        l1_defect: pairwise_sum(&l1),
        nodes: profile.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1_defect_is_quarter_width() {
        let w = DoubleWell::quartic(0.0, 1.0).unwrap();
        let mesh = ReducedMesh {
            core_cells: 200,
            growth: 1.02,
        };
        let t = slab_terms(1e-2, &w, 2, &mesh).unwrap();
        let width = transition_width(1e-2).unwrap();
        assert!((t.l1_defect / (width / 4.0) - 1.0).abs() < 1e-3);
        assert!(t.interaction > 0.0 && t.potential > 0.0);
    }
}
