//! Lexicometric summaries, vocabulary growth and contingency tables.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::corpus::{Base, FormId, FrequencyIndex};
use crate::error::{Error, Result};

/// One row of the per-part lexicometric table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartSummary {
    pub part_name: String,
    pub debut: usize,
    pub fin: usize,
    pub distinct_forms: u64,
    pub occurrences: u64,
    pub fq_max: u64,
    /// Most frequent form; `None` for a part without form-occurrences.
    pub forme_max: Option<String>,
}

/// Summarizes every part in rank order. `forme_max` ties go to the form
/// that occurs first in the part.
pub fn summarize(index: &FrequencyIndex) -> Vec<PartSummary> {
    index
        .parts()
        .iter()
        .enumerate()
        .map(|(p, stats)| {
            let mut best: Option<(u64, usize, FormId)> = None;
            for (id, entry) in index.forms().iter().enumerate() {
                let c = entry.counts[p];
                if c == 0 {
                    continue;
                }
                let first = entry.first[p];
                let better = match best {
                    None => true,
                    Some((bc, bf, _)) => c > bc || (c == bc && first < bf),
                };
                if better {
                    best = Some((c, first, id as FormId));
                }
            }
            PartSummary {
                part_name: stats.name.clone(),
                debut: stats.debut,
                fin: stats.fin,
                distinct_forms: stats.distinct,
                occurrences: stats.occurrences,
                fq_max: best.map_or(0, |b| b.0),
                forme_max: best.map(|b| index.surface(b.2).to_string()),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthCurve {
    pub part_name: String,
    /// `(occurrences so far, distinct forms so far)`.
    pub points: Vec<(u64, u64)>,
}

/// Exact cumulative vocabulary growth of one part, sampled every `step`
/// form-occurrences plus the final point.
pub fn vocab_growth(base: &Base, part: usize, step: u64) -> Result<GrowthCurve> {
    if step == 0 {
        return Err(Error::InvalidArgument("growth step must be >= 1".into()));
    }
    if part >= base.parts().len() {
        return Err(Error::UnknownPart(format!("#{part}")));
    }
    let mut seen: HashSet<FormId> = HashSet::new();
    let mut points = Vec::new();
    let mut n = 0u64;
    for item in base.part_items(part) {
        let Some(form) = item.form else { continue };
        n += 1;
        seen.insert(form);
        if n.is_multiple_of(step) {
            points.push((n, seen.len() as u64));
        }
    }
    if points.last().map(|p| p.0) != Some(n) {
        points.push((n, seen.len() as u64));
    }
    Ok(GrowthCurve {
        part_name: base.part(part).name.clone(),
        points,
    })
}

/// Forms × parts occurrence counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub rows: Vec<String>,
    pub columns: Vec<String>,
    /// Row-major, `rows.len() × columns.len()`.
    pub counts: Vec<Vec<u64>>,
}

impl ContingencyTable {
    pub fn grand_total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn column_totals(&self) -> Vec<u64> {
        let mut totals = vec![0; self.columns.len()];
        for row in &self.counts {
            for (t, c) in totals.iter_mut().zip(row) {
                *t += c;
            }
        }
        totals
    }

    pub fn row_totals(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }
}

/// Builds the contingency table over `parts` (indices, at least two),
/// keeping forms whose frequency within those parts is at least `min_freq`.
/// Rows follow first appearance on the trame.
pub fn contingency(index: &FrequencyIndex, parts: &[usize], min_freq: u64) -> Result<ContingencyTable> {
    if min_freq == 0 {
        return Err(Error::InvalidArgument("min_freq must be >= 1".into()));
    }
    if parts.len() < 2 {
        return Err(Error::EmptyRange(format!(
            "contingency needs at least 2 parts, got {}",
            parts.len()
        )));
    }
    let mut sorted = parts.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != parts.len() || sorted.last().is_some_and(|&p| p >= index.n_parts()) {
        return Err(Error::InvalidArgument("invalid part selection".into()));
    }
    let mut rows = Vec::new();
    let mut counts = Vec::new();
    for entry in index.forms() {
        let row: Vec<u64> = sorted.iter().map(|&p| entry.counts[p]).collect();
        if row.iter().sum::<u64>() >= min_freq {
            rows.push(entry.surface.clone());
            counts.push(row);
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptyTable);
    }
    Ok(ContingencyTable {
        rows,
        columns: sorted.iter().map(|&p| index.parts()[p].name.clone()).collect(),
        counts,
    })
}
