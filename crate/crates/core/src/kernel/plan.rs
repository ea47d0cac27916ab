use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reduce::Summation;

/// Treatment of the singular same-cell pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SelfPairPolicy {
    #[default]
    ExcludeSameCell,
}

/// Execution parameters for the pairwise kernel sums.
///
/// Results depend only on the summation mode, never on `tile` or `threads`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct KernelPlan {
    /// Target cells per parallel task (rounded to whole grid rows).
    pub tile: usize,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    pub summation: Summation,
    pub self_pair: SelfPairPolicy,
}

impl Default for KernelPlan {
    fn default() -> Self {
        Self {
            tile: 4096,
            threads: None,
            summation: Summation::PairwiseTree,
            self_pair: SelfPairPolicy::ExcludeSameCell,
        }
    }
}

impl KernelPlan {
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    pub fn with_tile(mut self, tile: usize) -> Self {
        self.tile = tile;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.tile == 0 {
            return Err(Error::Config("tile size must be at least 1".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("thread count must be at least 1".into()));
        }
        Ok(())
    }

    pub(crate) fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> Result<R> {
        self.validate()?;
        match self.threads {
            None => Ok(f()),
            Some(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;
                Ok(pool.install(f))
            }
        }
    }
}
