//! Textometric analysis of chronologically ordered, multi-part parallel corpora.
//!
//! A corpus is ingested as a positional stream of items (the trame) tiled by
//! named parts. Every analysis reads the immutable [`Base`] or its
//! [`FrequencyIndex`]:
//!
//! * [`lexstats`]: per-part lexicometric summaries, vocabulary growth and
//!   the form × part contingency table;
//! * [`specificity`]: hypergeometric over/under-use indices;
//! * [`correspondence`]: correspondence analysis of a contingency table;
//! * [`chronology`]: neighbour-constrained clustering, temporal barycenter
//!   and Von Neumann profiling;
//! * [`mt_metrics`]: BLEU, unknown-token profiles and token edit distance;
//! * [`segments`]: repeated segments, aligned views and revision diffs.
//!
//! The numeric routines are generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below fix the scalar to `f64`.

pub mod chronology;
pub mod corpus;
pub mod correspondence;
pub mod error;
pub mod format;
pub mod lexstats;
pub mod linalg;
pub mod mt_metrics;
mod scalar;
pub mod segments;
pub mod selection;
pub mod specificity;

pub use corpus::{
    build_base, tokenize, Base, FrequencyIndex, Item, ItemKind, Manifest, ManifestEntry, Part, PartSource, PartStats,
    Sentence, TokenPolicy,
};
pub use error::{Error, ErrorCategory, Result};
pub use scalar::{ln_factorial, ln_gamma, Scalar};
pub use selection::PartRange;

pub type CaResult64 = correspondence::CaResult<f64>;
pub type Dendrogram64 = chronology::Dendrogram<f64>;
pub type ChronoRow64 = chronology::ChronoRow<f64>;
pub type SpecificityScore64 = specificity::SpecificityScore<f64>;
pub type Matrix64 = linalg::Matrix<f64>;
