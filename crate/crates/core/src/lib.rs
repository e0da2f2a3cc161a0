//! Synchronizing automata with long shortest reset words: transformation
//! algebra, subset-automaton analysis, parametric families, exhaustive
//! enumeration and small-`n` verification of one-symbol Černý extensions.

pub mod automaton;
pub mod bounds;
mod catalog;
pub mod error;
pub mod extension;
pub mod families;
pub mod powerset;
pub mod search;

pub use automaton::{Dfa, Transformation, Word, MAX_STATES};
pub use error::{Error, Result};
pub use powerset::{
    extension_bound, is_synchronizing_by_pairs, reducible_pair_count, shortest_sync, step_set,
    ExtensionBound, StateSet, SyncResult,
};
