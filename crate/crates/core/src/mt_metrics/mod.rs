//! Translation-quality metrics across epochs: BLEU, unknown-token profiles
//! and token-level edit distance.

mod bleu;
mod levenshtein;
mod unk;

pub use bleu::{
    bleu_corpus, bleu_progression, bleu_sentence, bleu_tokenize, BleuReport, EpochBleu, Smoothing, MAX_ORDER,
};
pub use levenshtein::{edit_script, levenshtein, EditOp, Hunk};
pub use unk::{best_epoch_by_unk, unk_profile, UnkProfile, DEFAULT_UNK};
