//! Permutation pattern matching: decompositions, pattern graphs, exact
//! matchers and the 3-SAT reduction into Av(321) and its twirled form.

pub mod cli;
pub mod decomp;
pub mod error;
pub mod matcher;
pub mod perm;
pub mod pgraph;
pub mod reduction;
pub mod twirl;

pub use decomp::{
    embed_in_spiral, embed_in_track, k_spiral, k_track, spiral_decompose, stair_decompose,
    validate_spiral, validate_stair, Decomposition, DecompositionKind, SpiralDecomposition,
    StairDecomposition,
};
pub use error::{Error, Result};
pub use perm::{is_occurrence, Occurrence, Permutation};
pub use twirl::{twirl, untwirl};
