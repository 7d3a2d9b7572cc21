use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Base;
use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 4;

/// Treatment of zero n-gram matches in sentence-level BLEU.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Smoothing {
    None,
    /// A zero precision `0/total` becomes `1/(total + 1)`.
    Add1,
    /// The k-th zero precision becomes `1/(2^k · total)`.
    #[default]
    Exp,
}

impl std::str::FromStr for Smoothing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Smoothing::None),
            "add1" => Ok(Smoothing::Add1),
            "exp" => Ok(Smoothing::Exp),
            other => Err(Error::InvalidArgument(format!("unknown smoothing `{other}`"))),
        }
    }
}

impl std::fmt::Display for Smoothing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Smoothing::None => "none",
            Smoothing::Add1 => "add1",
            Smoothing::Exp => "exp",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuReport {
    /// 0 to 100.
    pub score: f64,
    /// Precision per order actually used, after smoothing.
    pub precisions: Vec<f64>,
    /// Clipped n-gram matches per order.
    pub matches: [u64; MAX_ORDER],
    /// Hypothesis n-gram counts per order.
    pub totals: [u64; MAX_ORDER],
    pub brevity_penalty: f64,
    pub hyp_length: u64,
    pub ref_length: u64,
    /// Orders with at least one hypothesis n-gram.
    pub effective_order: usize,
    pub smoothing: Smoothing,
}

fn is_punct(c: char) -> bool {
    c.is_ascii_punctuation()
        || matches!(
            c,
            '\u{ab}'
                | '\u{bb}'
                | '\u{2013}'
                | '\u{2014}'
                | '\u{2026}'
                | '\u{201c}'
                | '\u{201d}'
                | '\u{2018}'
                | '\u{2019}'
                | '\u{a1}'
                | '\u{bf}'
        )
}

fn joins_word(c: char) -> bool {
    matches!(c, '-' | '\'' | '\u{2019}')
}

/// Tokenizer used for BLEU: whitespace split, then punctuation marks become
/// tokens of their own. Hyphens and apostrophes between two alphanumeric
/// characters stay inside the word. Case is preserved.
pub fn bleu_tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for chunk in text.split_whitespace() {
        let chars: Vec<char> = chunk.chars().collect();
        let mut word = String::new();
        for (i, &c) in chars.iter().enumerate() {
            let internal = joins_word(c)
                && i > 0
                && i + 1 < chars.len()
                && chars[i - 1].is_alphanumeric()
                && chars[i + 1].is_alphanumeric();
            if is_punct(c) && !internal {
                if !word.is_empty() {
                    tokens.push(std::mem::take(&mut word));
                }
                tokens.push(c.to_string());
            } else {
                word.push(c);
            }
        }
        if !word.is_empty() {
            tokens.push(word);
        }
    }
    tokens
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Stats {
    matches: [u64; MAX_ORDER],
    totals: [u64; MAX_ORDER],
    hyp_len: u64,
    ref_len: u64,
}

impl Stats {
    fn of(hyp: &[String], reference: &[String]) -> Stats {
        let mut s = Stats {
            hyp_len: hyp.len() as u64,
            ref_len: reference.len() as u64,
            ..Stats::default()
        };
        for n in 1..=MAX_ORDER {
            if hyp.len() < n {
                break;
            }
            let mut ref_counts: HashMap<&[String], u64> = HashMap::new();
            if reference.len() >= n {
                for g in reference.windows(n) {
                    *ref_counts.entry(g).or_default() += 1;
                }
            }
            let mut hyp_counts: HashMap<&[String], u64> = HashMap::new();
            for g in hyp.windows(n) {
                *hyp_counts.entry(g).or_default() += 1;
            }
            s.totals[n - 1] = (hyp.len() - n + 1) as u64;
            s.matches[n - 1] = hyp_counts
                .iter()
                .map(|(g, &c)| c.min(ref_counts.get(g).copied().unwrap_or(0)))
                .sum();
        }
        s
    }

    fn add(&mut self, other: &Stats) {
        for n in 0..MAX_ORDER {
            self.matches[n] += other.matches[n];
            self.totals[n] += other.totals[n];
        }
        self.hyp_len += other.hyp_len;
        self.ref_len += other.ref_len;
    }

    fn report(&self, smoothing: Smoothing) -> BleuReport {
        let effective_order = self.totals.iter().take_while(|&&t| t > 0).count();
        let mut precisions = Vec::with_capacity(effective_order);
        let mut halving = 1.0f64;
        for n in 0..effective_order {
            let (m, t) = (self.matches[n] as f64, self.totals[n] as f64);
            let p = if self.matches[n] > 0 {
                m / t
            } else {
                match smoothing {
                    Smoothing::None => 0.0,
                    Smoothing::Add1 => 1.0 / (t + 1.0),
                    Smoothing::Exp => {
                        halving *= 2.0;
                        1.0 / (halving * t)
                    }
                }
            };
            precisions.push(p);
        }
        let (c, r) = (self.hyp_length_f(), self.ref_len as f64);
        let brevity_penalty = if c >= r { 1.0 } else { (1.0 - r / c).exp() };
        let score = if precisions.contains(&0.0) {
            0.0
        } else {
            let log_mean = precisions.iter().map(|p| p.ln()).sum::<f64>() / effective_order as f64;
            (100.0 * brevity_penalty * log_mean.exp()).min(100.0)
        };
        BleuReport {
            score,
            precisions,
            matches: self.matches,
            totals: self.totals,
            brevity_penalty,
            hyp_length: self.hyp_len,
            ref_length: self.ref_len,
            effective_order,
            smoothing,
        }
    }

    fn hyp_length_f(&self) -> f64 {
        self.hyp_len as f64
    }
}

/// Corpus BLEU: clipped n-gram counts aggregated over all sentence pairs,
/// no smoothing. Orders for which the hypotheses hold no n-gram at all are
/// left out of the geometric mean.
pub fn bleu_corpus<H: AsRef<str>, R: AsRef<str>>(hyps: &[H], refs: &[R]) -> Result<BleuReport> {
    if hyps.len() != refs.len() {
        return Err(Error::LengthMismatch {
            left: hyps.len(),
            right: refs.len(),
        });
    }
    let mut total = Stats::default();
    for (h, r) in hyps.iter().zip(refs) {
        total.add(&Stats::of(&bleu_tokenize(h.as_ref()), &bleu_tokenize(r.as_ref())));
    }
    if total.hyp_len == 0 {
        return Err(Error::EmptyCorpus);
    }
    Ok(total.report(Smoothing::None))
}

/// Sentence BLEU with the given smoothing of zero precisions.
pub fn bleu_sentence(hyp: &str, reference: &str, smoothing: Smoothing) -> Result<BleuReport> {
    let (h, r) = (bleu_tokenize(hyp), bleu_tokenize(reference));
    if h.is_empty() || r.is_empty() {
        return Err(Error::EmptySentence);
    }
    Ok(Stats::of(&h, &r).report(smoothing))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochBleu {
    pub epoch: String,
    pub rank: usize,
    pub mean_bleu: f64,
}

/// Mean sentence BLEU of each epoch part against the reference part.
/// Pairs where either side is empty score 0.
pub fn bleu_progression(
    base: &Base,
    epochs: &[usize],
    reference: usize,
    smoothing: Smoothing,
) -> Result<Vec<EpochBleu>> {
    base.require_aligned(reference)?;
    let refs: Vec<String> = base
        .part(reference)
        .sentences
        .iter()
        .map(|s| base.sentence_text(s))
        .collect();
    epochs
        .iter()
        .map(|&e| {
            base.require_aligned(e)?;
            let part = base.part(e);
            if part.sentences.len() != refs.len() {
                return Err(Error::Alignment {
                    part: part.name.clone(),
                    reference: base.part(reference).name.clone(),
                    expected: refs.len(),
                    found: part.sentences.len(),
                });
            }
            let scores: Vec<f64> = part
                .sentences
                .par_iter()
                .zip(refs.par_iter())
                .map(|(s, r)| match bleu_sentence(&base.sentence_text(s), r, smoothing) {
                    Ok(rep) => rep.score,
                    Err(_) => 0.0,
                })
                .collect();
            let mean = if scores.is_empty() {
                0.0
            } else {
                scores.iter().sum::<f64>() / scores.len() as f64
            };
            Ok(EpochBleu {
                epoch: part.name.clone(),
                rank: part.rank,
                mean_bleu: mean,
            })
        })
        .collect()
}
