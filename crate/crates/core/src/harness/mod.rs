//! Ladder sweeps, logarithmic extrapolation, relaxation and result files.

mod fit;
mod output;
mod reduced;
mod relax;
mod sweep;

pub use fit::{fit_log_model, fit_loglog_model, FitResult, UNRELIABLE_RESIDUAL};
pub use output::{emit_results, write_field_dump, EmittedFiles, CSV_COLUMNS, DETERMINISM_NOTE, DUMP_MAGIC, DUMP_VERSION};
pub use reduced::{slab_terms, ReducedMesh, SlabTerms};
pub use relax::{perturbed_uniform, relax, RelaxSummary, StopReason, MAX_HALVINGS};
pub use sweep::{fit_records, grid_record, recovery_record, reduced_record, run_sweep, SweepOutput, SweepRecord, TRACKED};
