//! Nonlocal phase-field energy with surfactant: discrete functionals,
//! recovery constructions, the sharp-interface limit and a sweep harness.

/// Four-lane accumulation of `body` over `0..len` with a fixed combine order.
macro_rules! lanes4 {
    ($len:expr, |$i:ident| $body:expr) => {{
        let len = $len;
        let mut acc = [0.0f64; 4];
        let full = len - len % 4;
        let mut base = 0;
        while base < full {
            for l in 0..4 {
                let $i = base + l;
                acc[l] += $body;
            }
            base += 4;
        }
        let mut tail = 0.0;
        for $i in full..len {
            tail += $body;
        }
        ((acc[0] + acc[1]) + (acc[2] + acc[3])) + tail
    }};
}

pub mod energy;
pub mod error;
pub mod gamma_limit;
pub mod geometry;
pub mod harness;
pub mod kernel;
pub mod potential;
pub mod recovery;
pub mod reduce;
pub mod scene;

pub use error::{Error, Result};
