//! Exhaustive checkers used as oracles: distances, confinement, soundness, homology.

pub mod confinement;
pub mod distance;
pub mod homology;

pub use confinement::{confinement_check, confinement_profile, soundness_check, ConfinementReport, MonotoneFn, SoundnessReport};
pub use distance::{css_distance_exhaustive, distance_exhaustive, Distance};
pub use homology::{homology_dims, single_shot_distance};
