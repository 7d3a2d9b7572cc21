//! Repeated segments, differential aligned views and revision diffs.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corpus::{Base, FormId};
use crate::error::{Error, Result};
use crate::mt_metrics::{edit_script, Hunk};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Occurrence {
    pub part: String,
    /// 1-based sentence id within the part.
    pub sentence: usize,
    /// Offset among the sentence's form-occurrences.
    pub start: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepeatedSegment {
    pub tokens: Vec<String>,
    pub frequency: u64,
    pub occurrences: Vec<Occurrence>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentOptions {
    pub min_len: usize,
    pub max_len: usize,
    pub min_freq: u64,
    /// Drop segments contained in an equally frequent longer segment.
    pub maximal_only: bool,
}

impl Default for SegmentOptions {
    fn default() -> Self {
        SegmentOptions {
            min_len: 2,
            max_len: 10,
            min_freq: 2,
            maximal_only: false,
        }
    }
}

/// `(sentence or row index, start offset)`
type Slot = (usize, usize);

struct ScopeSentence {
    part: usize,
    sentence: usize,
    forms: Vec<FormId>,
}

fn scope_sentences(base: &Base, scope: &[usize]) -> Vec<ScopeSentence> {
    scope
        .iter()
        .flat_map(|&p| {
            base.part(p).sentences.iter().map(move |s| ScopeSentence {
                part: p,
                sentence: s.id,
                forms: base.sentence_forms(s).filter_map(|i| i.form).collect(),
            })
        })
        .collect()
}

/// Form n-grams of length `min_len..=max_len` occurring at least `min_freq`
/// times within sentences of the scope parts.
///
/// Lengths are scanned upward and the scan stops at the first length
/// without any repeat, since every repeat of length `n + 1` contains one of
/// length `n`. Output is sorted by frequency, then length (both
/// descending), then first occurrence.
pub fn repeated_segments(base: &Base, scope: &[usize], opts: SegmentOptions) -> Result<Vec<RepeatedSegment>> {
    if scope.is_empty() {
        return Err(Error::EmptyScope);
    }
    if opts.min_len < 2 || opts.min_freq < 2 || opts.max_len < opts.min_len {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= min_len <= max_len and min_freq >= 2 (got {}, {}, {})",
            opts.min_len, opts.max_len, opts.min_freq
        )));
    }
    if let Some(&p) = scope.iter().find(|&&p| p >= base.parts().len()) {
        return Err(Error::UnknownPart(format!("#{p}")));
    }
    let sentences = scope_sentences(base, scope);

    // per length: segment -> occurrences (sentence slot, start)
    let mut levels: Vec<HashMap<&[FormId], Vec<Slot>>> = Vec::new();
    for n in opts.min_len..=opts.max_len {
        let mut grams: HashMap<&[FormId], Vec<Slot>> = HashMap::new();
        for (slot, s) in sentences.iter().enumerate() {
            if s.forms.len() < n {
                continue;
            }
            for (start, g) in s.forms.windows(n).enumerate() {
                grams.entry(g).or_default().push((slot, start));
            }
        }
        grams.retain(|_, occ| occ.len() as u64 >= opts.min_freq);
        if grams.is_empty() {
            break;
        }
        levels.push(grams);
    }

    let mut suppressed: Vec<HashSet<&[FormId]>> = vec![HashSet::new(); levels.len()];
    if opts.maximal_only {
        for l in 1..levels.len() {
            for (g, occ) in &levels[l] {
                for sub in [&g[..g.len() - 1], &g[1..]] {
                    if levels[l - 1].get(sub).is_some_and(|o| o.len() == occ.len()) {
                        suppressed[l - 1].insert(sub);
                    }
                }
            }
        }
    }

    let mut out: Vec<(Vec<(usize, usize)>, RepeatedSegment)> = Vec::new();
    for (l, grams) in levels.iter().enumerate() {
        for (g, occ) in grams {
            if suppressed[l].contains(g) {
                continue;
            }
            out.push((
                occ.clone(),
                RepeatedSegment {
                    tokens: g.iter().map(|&f| base.index.surface(f).to_string()).collect(),
                    frequency: occ.len() as u64,
                    occurrences: occ
                        .iter()
                        .map(|&(slot, start)| Occurrence {
                            part: base.part(sentences[slot].part).name.clone(),
                            sentence: sentences[slot].sentence,
                            start,
                        })
                        .collect(),
                },
            ));
        }
    }
    out.sort_by(|(oa, a), (ob, b)| {
        b.frequency
            .cmp(&a.frequency)
            .then(b.tokens.len().cmp(&a.tokens.len()))
            .then(oa[0].cmp(&ob[0]))
    });
    Ok(out.into_iter().map(|(_, s)| s).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    /// Half-open token range.
    pub start: usize,
    pub end: usize,
    pub segment: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViewRow {
    pub part: String,
    pub tokens: Vec<String>,
    pub spans: Vec<Span>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharedSegment {
    pub id: usize,
    pub tokens: Vec<String>,
    /// Displayed parts containing the segment.
    pub parts: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlignedView {
    pub sentence_id: usize,
    pub rows: Vec<ViewRow>,
    pub segments: Vec<SharedSegment>,
}

/// Side-by-side view of one aligned sentence across parts, marking the
/// segments shared by at least two displayed parts.
///
/// A marked segment is a token sequence present in two or more rows that
/// cannot be extended by one token on either side without losing one of
/// those rows. The `reference` part, when given, is displayed last.
pub fn aligned_view(base: &Base, sentence_id: usize, parts: &[usize], reference: Option<usize>) -> Result<AlignedView> {
    let mut order: Vec<usize> = parts.iter().copied().filter(|&p| Some(p) != reference).collect();
    order.extend(reference);
    if order.is_empty() {
        return Err(Error::EmptyScope);
    }
    let mut rows_ids: Vec<Vec<FormId>> = Vec::with_capacity(order.len());
    for &p in &order {
        if p >= base.parts().len() {
            return Err(Error::UnknownPart(format!("#{p}")));
        }
        base.require_aligned(p)?;
        let s = base.sentence(p, sentence_id)?;
        rows_ids.push(base.sentence_forms(s).filter_map(|i| i.form).collect());
    }

    // every contiguous token sequence -> (rows containing it, occurrences)
    let mut seen: HashMap<&[FormId], (Vec<usize>, Vec<Slot>)> = HashMap::new();
    for (r, ids) in rows_ids.iter().enumerate() {
        for start in 0..ids.len() {
            for end in start + 1..=ids.len() {
                let entry = seen.entry(&ids[start..end]).or_default();
                if entry.0.last() != Some(&r) {
                    entry.0.push(r);
                }
                entry.1.push((r, start));
            }
        }
    }
    let support = |seq: &[FormId]| seen.get(seq).map(|e| e.0.as_slice()).unwrap_or(&[]);

    let mut closed: Vec<(&[FormId], &Vec<usize>, &Vec<Slot>)> = Vec::new();
    for (&seq, (rows, occ)) in &seen {
        if rows.len() < 2 {
            continue;
        }
        let len = seq.len();
        let extendable = occ.iter().any(|&(r, start)| {
            let ids = &rows_ids[r];
            (start > 0 && support(&ids[start - 1..start + len]) == rows.as_slice())
                || (start + len < ids.len() && support(&ids[start..start + len + 1]) == rows.as_slice())
        });
        if !extendable {
            closed.push((seq, rows, occ));
        }
    }
    closed.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then(a.2[0].cmp(&b.2[0])));

    let mut rows: Vec<ViewRow> = order
        .iter()
        .zip(&rows_ids)
        .map(|(&p, ids)| ViewRow {
            part: base.part(p).name.clone(),
            tokens: ids.iter().map(|&f| base.index.surface(f).to_string()).collect(),
            spans: Vec::new(),
        })
        .collect();
    let mut segments = Vec::with_capacity(closed.len());
    for (k, (seq, support_rows, occ)) in closed.iter().enumerate() {
        let id = k + 1;
        for &(r, start) in occ.iter() {
            rows[r].spans.push(Span {
                start,
                end: start + seq.len(),
                segment: id,
            });
        }
        segments.push(SharedSegment {
            id,
            tokens: seq.iter().map(|&f| base.index.surface(f).to_string()).collect(),
            parts: support_rows.iter().map(|&r| rows[r].part.clone()).collect(),
        });
    }
    for row in &mut rows {
        row.spans.sort_by(|a, b| {
            a.start
                .cmp(&b.start)
                .then(b.end.cmp(&a.end))
                .then(a.segment.cmp(&b.segment))
        });
    }
    Ok(AlignedView {
        sentence_id,
        rows,
        segments,
    })
}

impl AlignedView {
    /// Plain-text rendering: each row's tokens followed by one underline
    /// per marked span.
    pub fn render_text(&self) -> String {
        let width = self.rows.iter().map(|r| r.part.chars().count()).max().unwrap_or(0) + 2;
        let mut out = String::new();
        let _ = writeln!(out, "sentence {}", self.sentence_id);
        for row in &self.rows {
            let mut cols = Vec::with_capacity(row.tokens.len() + 1);
            let mut line = String::new();
            for (i, tok) in row.tokens.iter().enumerate() {
                if i > 0 {
                    line.push(' ');
                }
                cols.push(line.chars().count());
                line.push_str(tok);
            }
            cols.push(line.chars().count() + 1);
            let _ = writeln!(out, "{:<width$}{}", row.part, line);
            for span in &row.spans {
                let from = cols[span.start];
                let to = cols[span.end] - 1;
                let _ = writeln!(
                    out,
                    "{:<width$}{}{} [{}]",
                    "",
                    " ".repeat(from),
                    "~".repeat(to - from),
                    span.segment
                );
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RevisionChange {
    pub a: (usize, usize),
    pub b: (usize, usize),
    pub from: Vec<String>,
    pub to: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Revision {
    pub sentence_id: usize,
    pub distance: usize,
    pub changes: Vec<RevisionChange>,
}

/// Token edit distance of every aligned sentence pair between two parts;
/// unchanged sentences are omitted.
pub fn revision_diff(base: &Base, part_a: usize, part_b: usize) -> Result<Vec<Revision>> {
    base.require_aligned(part_a)?;
    base.require_aligned(part_b)?;
    let (pa, pb) = (base.part(part_a), base.part(part_b));
    if pa.sentences.len() != pb.sentences.len() {
        return Err(Error::Alignment {
            part: pb.name.clone(),
            reference: pa.name.clone(),
            expected: pa.sentences.len(),
            found: pb.sentences.len(),
        });
    }
    let mut out = Vec::new();
    for (sa, sb) in pa.sentences.iter().zip(&pb.sentences) {
        let a: Vec<&str> = base.sentence_forms(sa).map(|i| i.surface.as_str()).collect();
        let b: Vec<&str> = base.sentence_forms(sb).map(|i| i.surface.as_str()).collect();
        let ops = edit_script(&a, &b);
        let hunks = Hunk::from_script(&ops);
        if hunks.is_empty() {
            continue;
        }
        let distance = ops.iter().filter(|o| **o != crate::mt_metrics::EditOp::Match).count();
        out.push(Revision {
            sentence_id: sa.id,
            distance,
            changes: hunks
                .into_iter()
                .map(|h| RevisionChange {
                    from: a[h.a.0..h.a.1].iter().map(|s| s.to_string()).collect(),
                    to: b[h.b.0..h.b.1].iter().map(|s| s.to_string()).collect(),
                    a: h.a,
                    b: h.b,
                })
                .collect(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_base, PartSource, TokenPolicy};

    fn base(parts: &[(&str, &str)]) -> Base {
        let sources: Vec<_> = parts.iter().map(|(n, t)| PartSource::new(*n, *t, true)).collect();
        build_base(&sources, &TokenPolicy::default()).unwrap()
    }

    fn toks(s: &RepeatedSegment) -> String {
        s.tokens.join(" ")
    }

    #[test]
    fn repeats_within_sentences() {
        let b = base(&[("A", "a b c\na b d")]);
        let segs = repeated_segments(&b, &[0], SegmentOptions::default()).unwrap();
        assert_eq!(segs.len(), 1);
        assert_eq!(toks(&segs[0]), "a b");
        assert_eq!(segs[0].frequency, 2);
        assert_eq!(
            segs[0].occurrences[1],
            Occurrence {
                part: "A".into(),
                sentence: 2,
                start: 0
            }
        );
    }

    #[test]
    fn no_repeats_and_boundaries() {
        let b = base(&[("A", "a b c d")]);
        assert!(repeated_segments(&b, &[0], SegmentOptions::default())
            .unwrap()
            .is_empty());
        // "b a" would only exist across the line break
        let b = base(&[("A", "a b\na b")]);
        let segs = repeated_segments(&b, &[0], SegmentOptions::default()).unwrap();
        assert_eq!(segs.len(), 1);
        assert!(matches!(
            repeated_segments(&b, &[], SegmentOptions::default()),
            Err(Error::EmptyScope)
        ));
    }

    #[test]
    fn maximal_only_suppresses_contained() {
        let b = base(&[("A", "a b c\na b c")]);
        let all = repeated_segments(&b, &[0], SegmentOptions::default()).unwrap();
        assert_eq!(all.iter().map(toks).collect::<Vec<_>>(), vec!["a b c", "a b", "b c"]);
        let opts = SegmentOptions {
            maximal_only: true,
            ..SegmentOptions::default()
        };
        let max = repeated_segments(&b, &[0], opts).unwrap();
        assert_eq!(max.iter().map(toks).collect::<Vec<_>>(), vec!["a b c"]);
    }

    #[test]
    fn unknown_islands_surface() {
        let b = base(&[("02", "consist of UNK the UNK relations\nof UNK the UNK policy")]);
        let segs = repeated_segments(
            &b,
            &[0],
            SegmentOptions {
                maximal_only: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(toks(&segs[0]), "of UNK the UNK");
    }

    #[test]
    fn view_marks_closed_shared_segments() {
        let b = base(&[
            ("01", "the cold war"),
            ("02", "the <unk> war"),
            ("Target", "the cold war"),
        ]);
        let v = aligned_view(&b, 1, &[2, 0, 1], Some(2)).unwrap();
        assert_eq!(
            v.rows.iter().map(|r| r.part.as_str()).collect::<Vec<_>>(),
            vec!["01", "02", "Target"]
        );
        let segs: Vec<(String, Vec<String>)> = v
            .segments
            .iter()
            .map(|s| (s.tokens.join(" "), s.parts.clone()))
            .collect();
        assert_eq!(
            segs,
            vec![
                ("the cold war".to_string(), vec!["01".to_string(), "Target".to_string()]),
                ("the".to_string(), vec!["01".into(), "02".into(), "Target".into()]),
                ("war".to_string(), vec!["01".into(), "02".into(), "Target".into()]),
            ]
        );
        assert_eq!(
            v.rows[0].spans,
            vec![
                Span {
                    start: 0,
                    end: 3,
                    segment: 1
                },
                Span {
                    start: 0,
                    end: 1,
                    segment: 2
                },
                Span {
                    start: 2,
                    end: 3,
                    segment: 3
                }
            ]
        );
        assert_eq!(v.rows[1].spans.len(), 2);
        let text = v.render_text();
        assert!(
            text.contains("01      the cold war\n        ~~~~~~~~~~~~ [1]\n"),
            "{text}"
        );
    }

    #[test]
    fn view_identical_sentences() {
        let b = base(&[("a", "x y z"), ("b", "x y z")]);
        let v = aligned_view(&b, 1, &[0, 1], None).unwrap();
        assert_eq!(v.segments.len(), 1);
        assert_eq!(
            v.rows[0].spans,
            vec![Span {
                start: 0,
                end: 3,
                segment: 1
            }]
        );
        assert_eq!(
            v.rows[1].spans,
            vec![Span {
                start: 0,
                end: 3,
                segment: 1
            }]
        );
    }

    #[test]
    fn view_errors() {
        let b = build_base(
            &[PartSource::new("a", "x", true), PartSource::new("b", "x", false)],
            &TokenPolicy::default(),
        )
        .unwrap();
        assert!(matches!(aligned_view(&b, 1, &[0, 1], None), Err(Error::NotAligned(_))));
        assert!(matches!(
            aligned_view(&b, 2, &[0], None),
            Err(Error::SentenceOutOfRange { .. })
        ));
    }

    #[test]
    fn revisions() {
        let b = base(&[
            ("05", "It is not directly directed at parliaments\nsame line"),
            ("08", "It is not directly vis-à-vis parliaments\nsame line"),
        ]);
        let d = revision_diff(&b, 0, 1).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].sentence_id, d[0].distance), (1, 2));
        assert_eq!(d[0].changes[0].from, vec!["directed", "at"]);
        assert_eq!(d[0].changes[0].to, vec!["vis-à-vis"]);
        assert!(revision_diff(&b, 0, 0).unwrap().is_empty());
    }
}
