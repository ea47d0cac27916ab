//! Explicit recovery sequences: slab profiles, adsorbed and atomic
//! surfactant densities, and the glued multi-zone construction.

mod assembly;
mod compactness;
mod slab;
mod surfactant;

pub use assembly::{build_recovery_pair, cross_zone_interaction, RecoveryConfig, RecoveryPair, Zone};
pub use compactness::{compactness_diagnostic, CompactnessReport};
pub use slab::{
    affine_transition, ensure_resolvable, min_resolvable_eps, slab_l1_to_sharp, slab_profile, slab_profile_at,
    transition_width,
};
pub use surfactant::{atom_mass_exact, surfactant_atom, surfactant_from_field, surfactant_on_interface};
