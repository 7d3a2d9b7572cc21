use serde::{Deserialize, Serialize};

/// Unit-cost edit distance between two token sequences.
pub fn levenshtein<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, x) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(x != y);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EditOp {
    Match,
    Substitute,
    Delete,
    Insert,
}

/// A maximal run of consecutive edits, as half-open token ranges of both
/// sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hunk {
    pub a: (usize, usize),
    pub b: (usize, usize),
}

/// One optimal alignment of `a` onto `b`, walked left to right preferring
/// match, then substitution, deletion and insertion.
pub fn edit_script<T: PartialEq>(a: &[T], b: &[T]) -> Vec<EditOp> {
    let (n, m) = (a.len(), b.len());
    let w = m + 1;
    // suffix distances: d[i*w + j] = distance(a[i..], b[j..])
    let mut d = vec![0usize; (n + 1) * w];
    for i in (0..=n).rev() {
        for j in (0..=m).rev() {
            d[i * w + j] = if i == n {
                m - j
            } else if j == m {
                n - i
            } else {
                let sub = d[(i + 1) * w + j + 1] + usize::from(a[i] != b[j]);
                sub.min(d[(i + 1) * w + j] + 1).min(d[i * w + j + 1] + 1)
            };
        }
    }
    let mut ops = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (0, 0);
    while i < n || j < m {
        let here = d[i * w + j];
        if i < n && j < m && a[i] == b[j] && here == d[(i + 1) * w + j + 1] {
            ops.push(EditOp::Match);
            i += 1;
            j += 1;
        } else if i < n && j < m && here == d[(i + 1) * w + j + 1] + 1 {
            ops.push(EditOp::Substitute);
            i += 1;
            j += 1;
        } else if i < n && here == d[(i + 1) * w + j] + 1 {
            ops.push(EditOp::Delete);
            i += 1;
        } else {
            ops.push(EditOp::Insert);
            j += 1;
        }
    }
    ops
}

impl Hunk {
    /// Groups an edit script into hunks.
    pub fn from_script(ops: &[EditOp]) -> Vec<Hunk> {
        let mut hunks = Vec::new();
        let (mut i, mut j) = (0, 0);
        let mut open: Option<(usize, usize)> = None;
        for op in ops {
            if *op == EditOp::Match {
                if let Some((si, sj)) = open.take() {
                    hunks.push(Hunk { a: (si, i), b: (sj, j) });
                }
            } else if open.is_none() {
                open = Some((i, j));
            }
            match op {
                EditOp::Match | EditOp::Substitute => {
                    i += 1;
                    j += 1;
                }
                EditOp::Delete => i += 1,
                EditOp::Insert => j += 1,
            }
        }
        if let Some((si, sj)) = open {
            hunks.push(Hunk { a: (si, i), b: (sj, j) });
        }
        hunks
    }
}
