//! Grids, cell fields, polyhedral interfaces, discrete measures and set operations.

mod field;
mod grid;
mod interface;
mod ops;
pub mod polygon;
mod projection;

pub use field::{CellField, CellSet, PhaseField, SurfactantField};
pub use grid::{Grid, GridMeta, Point};
pub use interface::{Atom, DiscreteMeasure, Facet, FacetSpec, PolyhedralInterface};
pub use ops::{facets_in_box, phase_sets, rasterize_interface, shrink_set, Shrunk};
pub(crate) use ops::beta_side;
pub use projection::{project_to_interface, HitSide, Patch};
