//! Deterministic floating-point reductions.

use serde::{Deserialize, Serialize};

const LEAF: usize = 16;

/// Pairwise (tree) summation with a fixed split rule.
pub fn pairwise_sum(x: &[f64]) -> f64 {
    if x.len() <= LEAF {
        let mut s = 0.0;
        for v in x {
            s += v;
        }
        return s;
    }
    let mid = x.len() / 2;
    pairwise_sum(&x[..mid]) + pairwise_sum(&x[mid..])
}

/// Neumaier-compensated summation in index order.
pub fn compensated_sum(x: &[f64]) -> f64 {
    let mut s = 0.0f64;
    let mut c = 0.0f64;
    for &v in x {
        let t = s + v;
        if s.abs() >= v.abs() {
            c += (s - t) + v;
        } else {
            c += (v - t) + s;
        }
        s = t;
    }
    s + c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Summation {
    #[default]
    PairwiseTree,
    Compensated,
}

impl Summation {
    pub fn sum(self, x: &[f64]) -> f64 {
        match self {
            Summation::PairwiseTree => pairwise_sum(x),
            Summation::Compensated => compensated_sum(x),
        }
    }
}
