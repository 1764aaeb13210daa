//! Phoneme-to-viseme map toolkit.
//!
//! - [`inventory`]: phonemes and their vowel/consonant class
//! - [`map`] and [`catalog`]: viseme maps, the built-in published maps, pairing,
//!   transcript conversion and confusion factors
//! - [`confusion`]: confusion matrices and the symmetrized confusion graph
//! - [`derive`] and [`clique`]: tightly and loosely confused maps from a matrix
//! - [`eval`]: alignment, correctness and fold statistics

pub mod bitset;
pub mod catalog;
pub mod clique;
pub mod confusion;
pub mod derive;
pub mod error;
pub mod eval;
pub mod inventory;
pub mod map;
pub mod transcript;

pub use catalog::{builtin_maps, Catalog};
pub use confusion::{load_confusion, to_graph, true_positive_only, ConfusionGraph, ConfusionMatrix};
pub use derive::{derive, derive_loose, derive_tight, ClassMode, DerivationConfig, MergeAggregation, Stage};
pub use error::{Error, Result};
pub use eval::{aggregate, align, correctness, score, sweep, AlignmentResult, CorrectnessSummary, SweepRow};
pub use inventory::{classify, load_inventory, Phoneme, PhonemeClass, PhonemeInventory};
pub use map::{
    apply_map, combine, confusion_factor, parse_map, serialize_map, ConfusionFactorReport, Coverage, Viseme,
    VisemeMap, GARBAGE_LABEL,
};
pub use transcript::{Transcript, TranscriptSet};
