use serde::{Deserialize, Serialize};

use crate::corpus::Base;
use crate::error::{Error, Result};

pub const DEFAULT_UNK: &str = "<unk>";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnkProfile {
    pub part_name: String,
    pub rank: usize,
    /// Unknown-token count per sentence.
    pub counts: Vec<u64>,
    pub total_unk: u64,
    pub sentences_without_unk: u64,
}

/// Counts form-occurrences equal to `unk_token` in each sentence of a part.
pub fn unk_profile(base: &Base, part: usize, unk_token: &str) -> Result<UnkProfile> {
    let p = base
        .parts()
        .get(part)
        .ok_or_else(|| Error::UnknownPart(format!("#{part}")))?;
    let unk = base.index.form_id(unk_token);
    let counts: Vec<u64> = p
        .sentences
        .iter()
        .map(|s| match unk {
            Some(id) => base.sentence_forms(s).filter(|i| i.form == Some(id)).count() as u64,
            None => 0,
        })
        .collect();
    Ok(UnkProfile {
        part_name: p.name.clone(),
        rank: p.rank,
        total_unk: counts.iter().sum(),
        sentences_without_unk: counts.iter().filter(|&&c| c == 0).count() as u64,
        counts,
    })
}

/// Rank of the profile with the most unknown-free sentences; the earliest
/// wins ties.
pub fn best_epoch_by_unk(profiles: &[UnkProfile]) -> Option<usize> {
    profiles
        .iter()
        .fold(None::<&UnkProfile>, |best, p| match best {
            Some(b) if b.sentences_without_unk >= p.sentences_without_unk => Some(b),
            _ => Some(p),
        })
        .map(|p| p.rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_base, PartSource, TokenPolicy};

    #[test]
    fn per_sentence_counts() {
        let base = build_base(
            &[
                PartSource::new("e1", "<unk> a\nb c\n<unk> <unk>\n", true),
                PartSource::new("e2", "a\nb\nc\n", true),
            ],
            &TokenPolicy::default(),
        )
        .unwrap();
        let p = unk_profile(&base, 0, DEFAULT_UNK).unwrap();
        assert_eq!(p.counts, vec![1, 0, 2]);
        assert_eq!((p.total_unk, p.sentences_without_unk), (3, 1));
        let q = unk_profile(&base, 1, DEFAULT_UNK).unwrap();
        assert_eq!((q.total_unk, q.sentences_without_unk), (0, 3));
        assert_eq!(unk_profile(&base, 0, "UNK").unwrap().total_unk, 0);
        assert!(matches!(unk_profile(&base, 5, DEFAULT_UNK), Err(Error::UnknownPart(_))));
    }

    fn profile(rank: usize, zeros: u64) -> UnkProfile {
        UnkProfile {
            part_name: rank.to_string(),
            rank,
            counts: vec![],
            total_unk: 0,
            sentences_without_unk: zeros,
        }
    }

    #[test]
    fn best_epoch_tie_goes_to_earliest() {
        let ps: Vec<_> = [3, 5, 5, 4]
            .iter()
            .enumerate()
            .map(|(i, &z)| profile(i + 1, z))
            .collect();
        assert_eq!(best_epoch_by_unk(&ps), Some(2));
        assert_eq!(best_epoch_by_unk(&ps[..1]), Some(1));
        assert_eq!(best_epoch_by_unk(&[]), None);
    }
}
