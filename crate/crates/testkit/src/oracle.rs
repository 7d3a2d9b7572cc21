use std::collections::{BTreeMap, HashMap};

use crate::corpus::RandomCorpus;

// ---------------------------------------------------------------- counting

/// Per-form counts per part, forms in first-appearance order.
pub fn form_counts(c: &RandomCorpus) -> Vec<(String, Vec<u64>)> {
    let n = c.names.len();
    let mut order: Vec<String> = Vec::new();
    let mut counts: HashMap<String, Vec<u64>> = HashMap::new();
    for p in 0..n {
        for tok in c.part_tokens(p) {
            let e = counts.entry(tok.to_string()).or_insert_with(|| {
                order.push(tok.to_string());
                vec![0; n]
            });
            e[p] += 1;
        }
    }
    order
        .into_iter()
        .map(|f| {
            let v = counts[&f].clone();
            (f, v)
        })
        .collect()
}

/// `(distinct forms, occurrences, fq_max, forme_max)` per part; ties on
/// fq_max go to the form seen first in the part.
pub fn summary(c: &RandomCorpus) -> Vec<(u64, u64, u64, Option<String>)> {
    (0..c.names.len())
        .map(|p| {
            let toks = c.part_tokens(p);
            let mut counts: Vec<(String, u64)> = Vec::new();
            for t in &toks {
                match counts.iter_mut().find(|(f, _)| f == t) {
                    Some(e) => e.1 += 1,
                    None => counts.push((t.to_string(), 1)),
                }
            }
            let mut best: Option<(String, u64)> = None;
            for (f, n) in &counts {
                if best.as_ref().is_none_or(|b| *n > b.1) {
                    best = Some((f.clone(), *n));
                }
            }
            (
                counts.len() as u64,
                toks.len() as u64,
                best.as_ref().map_or(0, |b| b.1),
                best.map(|b| b.0),
            )
        })
        .collect()
}

pub fn growth(tokens: &[&str], step: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for n in 1..=tokens.len() {
        if (n as u64).is_multiple_of(step) || n == tokens.len() {
            let mut seen: Vec<&str> = tokens[..n].to_vec();
            seen.sort_unstable();
            seen.dedup();
            out.push((n as u64, seen.len() as u64));
        }
    }
    if out.is_empty() {
        out.push((0, 0));
    }
    out
}

/// Rows `(form, counts over parts)` with frequency over `parts` at least
/// `min_freq`.
pub fn contingency(c: &RandomCorpus, parts: &[usize], min_freq: u64) -> Vec<(String, Vec<u64>)> {
    form_counts(c)
        .into_iter()
        .map(|(f, v)| (f, parts.iter().map(|&p| v[p]).collect::<Vec<u64>>()))
        .filter(|(_, v)| v.iter().sum::<u64>() >= min_freq)
        .collect()
}

pub fn unk_counts(c: &RandomCorpus, part: usize, unk: &str) -> Vec<u64> {
    c.sentences[part]
        .iter()
        .map(|s| s.iter().filter(|t| *t == unk).count() as u64)
        .collect()
}

/// Occurrences of `seq` inside sentences of the scope parts.
pub fn count_sequence(c: &RandomCorpus, scope: &[usize], seq: &[String]) -> u64 {
    let mut n = 0;
    for &p in scope {
        for s in &c.sentences[p] {
            if s.len() >= seq.len() {
                n += s.windows(seq.len()).filter(|w| *w == seq).count() as u64;
            }
        }
    }
    n
}

/// Every within-sentence n-gram of length `min_len..=max_len` with
/// frequency at least `min_freq`, by brute-force enumeration.
pub fn all_repeats(
    c: &RandomCorpus,
    scope: &[usize],
    min_len: usize,
    max_len: usize,
    min_freq: u64,
) -> BTreeMap<Vec<String>, u64> {
    let mut all: BTreeMap<Vec<String>, u64> = BTreeMap::new();
    for &p in scope {
        for s in &c.sentences[p] {
            for start in 0..s.len() {
                for len in min_len..=max_len {
                    if start + len <= s.len() {
                        *all.entry(s[start..start + len].to_vec()).or_default() += 1;
                    }
                }
            }
        }
    }
    all.retain(|_, n| *n >= min_freq);
    all
}

// ---------------------------------------------------------- hypergeometric

/// Pascal's triangle in exact integers, `c[n][k] = C(n, k)`.
pub fn binomials(max_n: usize) -> Vec<Vec<u128>> {
    let mut c = vec![vec![0u128; max_n + 1]; max_n + 1];
    for n in 0..=max_n {
        c[n][0] = 1;
        for k in 1..=n {
            c[n][k] = c[n - 1][k - 1] + if k < n { c[n - 1][k] } else { 0 };
        }
    }
    c
}

/// Exact tails `(P(X >= f), P(X <= f))` as `(numerator, numerator,
/// denominator)` for `X ~ Hypergeometric(T, F, t)`.
pub fn hypergeometric_tails(c: &[Vec<u128>], total: usize, part: usize, form: usize, f: usize) -> (u128, u128, u128) {
    let den = c[total][part];
    let lo = (part + form).saturating_sub(total);
    let hi = form.min(part);
    let term = |k: usize| c[form][k] * c[total - form][part - k];
    let upper = (f..=hi).map(term).sum();
    let lower = (lo..=f).map(term).sum();
    (upper, lower, den)
}

/// Signed specificity index from exact tails: over-use above the mode,
/// under-use below; at the mode, the smaller tail with the sign of
/// `f − F·t/T` (ties to the smaller tail's side).
pub fn exact_specificity(c: &[Vec<u128>], total: usize, part: usize, form: usize, f: usize) -> f64 {
    let (upper, lower, den) = hypergeometric_tails(c, total, part, form, f);
    let neg_log10 = |num: u128| (den as f64).log10() - (num as f64).log10();
    let mode = (part + 1) * (form + 1) / (total + 2);
    if f > mode {
        return neg_log10(upper).max(0.0);
    }
    if f < mode {
        return -neg_log10(lower).max(0.0);
    }
    let magnitude = neg_log10(upper.min(lower)).max(0.0);
    let (lhs, rhs) = (f * total, form * part);
    let positive = if lhs != rhs { lhs > rhs } else { upper <= lower };
    if positive {
        magnitude
    } else {
        -magnitude
    }
}

// ---------------------------------------------------------------- algebra

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Returns
/// eigenvalues descending and eigenvectors as columns.
pub fn jacobi_eigen(a: &[Vec<f64>], tol: f64) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut a: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _ in 0..200 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off < tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].partial_cmp(&a[i][i]).unwrap());
    let vals = order.iter().map(|&i| a[i][i]).collect();
    let vecs = (0..n).map(|r| order.iter().map(|&i| v[r][i]).collect()).collect();
    (vals, vecs)
}

pub struct CaOracle {
    pub total_inertia: f64,
    pub inertias: Vec<f64>,
    /// `rows × dims`
    pub rows: Vec<Vec<f64>>,
    /// `cols × dims`
    pub cols: Vec<Vec<f64>>,
}

/// Correspondence analysis through the eigendecomposition of `SᵀS`, keeping
/// eigenvalues above `min_eigen`.
pub fn ca_oracle(counts: &[Vec<u64>], min_eigen: f64) -> CaOracle {
    let (m, n) = (counts.len(), counts[0].len());
    let total: f64 = counts.iter().flatten().map(|&x| x as f64).sum();
    let r: Vec<f64> = counts
        .iter()
        .map(|row| row.iter().sum::<u64>() as f64 / total)
        .collect();
    let c: Vec<f64> = (0..n)
        .map(|j| counts.iter().map(|row| row[j]).sum::<u64>() as f64 / total)
        .collect();
    let s: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            (0..n)
                .map(|j| (counts[i][j] as f64 / total - r[i] * c[j]) / (r[i] * c[j]).sqrt())
                .collect()
        })
        .collect();
    let total_inertia = s.iter().flatten().map(|x| x * x).sum();
    let sts: Vec<Vec<f64>> = (0..n)
        .map(|a| (0..n).map(|b| (0..m).map(|i| s[i][a] * s[i][b]).sum()).collect())
        .collect();
    let (vals, vecs) = jacobi_eigen(&sts, 1e-12);
    let dims = vals.iter().take(m.min(n) - 1).take_while(|&&l| l > min_eigen).count();
    let cols = (0..n)
        .map(|j| (0..dims).map(|k| vals[k].sqrt() * vecs[j][k] / c[j].sqrt()).collect())
        .collect();
    let rows = (0..m)
        .map(|i| {
            (0..dims)
                .map(|k| (0..n).map(|j| s[i][j] * vecs[j][k]).sum::<f64>() / r[i].sqrt())
                .collect()
        })
        .collect();
    CaOracle {
        total_inertia,
        inertias: vals[..dims].to_vec(),
        rows,
        cols,
    }
}

// ------------------------------------------------------------- clustering

pub fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let cov: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let vy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    cov / (vx * vy).sqrt()
}

/// One merge of the oracle: leaf span covered and height.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleMerge {
    pub span: (usize, usize),
    pub height: f64,
}

fn centroid(vectors: &[Vec<f64>], span: (usize, usize)) -> Vec<f64> {
    let k = (span.1 - span.0 + 1) as f64;
    (0..vectors[0].len())
        .map(|d| vectors[span.0..=span.1].iter().map(|v| v[d]).sum::<f64>() / k)
        .collect()
}

fn oracle_distance(a: &[f64], b: &[f64]) -> f64 {
    let constant = |v: &[f64]| v.iter().all(|&x| x == v[0]);
    if a.len() >= 2 && !constant(a) && !constant(b) {
        1.0 - pearson(a, b)
    } else {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
    }
}

/// Enumerates every sequence of adjacent merges and returns the one whose
/// `(height, left position)` sequence is lexicographically smallest.
pub fn vnc_exhaustive(vectors: &[Vec<f64>]) -> Vec<OracleMerge> {
    fn walk(
        vectors: &[Vec<f64>],
        clusters: Vec<(usize, usize)>,
        path: Vec<(f64, usize, OracleMerge)>,
        best: &mut Option<Vec<(f64, usize, OracleMerge)>>,
    ) {
        if clusters.len() == 1 {
            let better = match best {
                None => true,
                Some(b) => {
                    let key = |p: &Vec<(f64, usize, OracleMerge)>| -> Vec<(f64, usize)> {
                        p.iter().map(|(h, i, _)| (*h, *i)).collect()
                    };
                    key(&path).partial_cmp(&key(b)) == Some(std::cmp::Ordering::Less)
                }
            };
            if better {
                *best = Some(path);
            }
            return;
        }
        for i in 0..clusters.len() - 1 {
            let (a, b) = (clusters[i], clusters[i + 1]);
            let h = oracle_distance(&centroid(vectors, a), &centroid(vectors, b));
            let mut next = clusters.clone();
            next[i] = (a.0, b.1);
            next.remove(i + 1);
            let mut p = path.clone();
            p.push((
                h,
                a.0,
                OracleMerge {
                    span: (a.0, b.1),
                    height: h,
                },
            ));
            walk(vectors, next, p, best);
        }
    }
    let mut best = None;
    walk(
        vectors,
        (0..vectors.len()).map(|i| (i, i)).collect(),
        Vec::new(),
        &mut best,
    );
    best.unwrap().into_iter().map(|(_, _, m)| m).collect()
}

// ------------------------------------------------------------ edit distance

/// Plain recursive edit distance with memoization.
pub fn edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    fn go<T: PartialEq>(a: &[T], b: &[T], i: usize, j: usize, memo: &mut HashMap<(usize, usize), usize>) -> usize {
        if i == a.len() {
            return b.len() - j;
        }
        if j == b.len() {
            return a.len() - i;
        }
        if let Some(&d) = memo.get(&(i, j)) {
            return d;
        }
        let d = if a[i] == b[j] {
            go(a, b, i + 1, j + 1, memo)
        } else {
            1 + go(a, b, i + 1, j + 1, memo)
                .min(go(a, b, i + 1, j, memo))
                .min(go(a, b, i, j + 1, memo))
        };
        memo.insert((i, j), d);
        d
    }
    go(a, b, 0, 0, &mut HashMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        let c = binomials(60);
        assert_eq!(c[20][10], 184_756);
        assert_eq!(c[60][30], 118_264_581_564_861_424);
    }

    #[test]
    fn exact_extremes() {
        let c = binomials(20);
        let v = exact_specificity(&c, 20, 10, 10, 10);
        assert!((v - 184_756f64.log10()).abs() < 1e-12);
        assert!((exact_specificity(&c, 20, 10, 10, 0) + v).abs() < 1e-12);
    }

    #[test]
    fn jacobi_diagonalizes() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let (vals, vecs) = jacobi_eigen(&a, 1e-14);
        assert!((vals[0] - 3.0).abs() < 1e-12 && (vals[1] - 1.0).abs() < 1e-12);
        assert!((vecs[0][0].abs() - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn edit_distance_classic() {
        let a: Vec<char> = "kitten".chars().collect();
        let b: Vec<char> = "sitting".chars().collect();
        assert_eq!(edit_distance(&a, &b), 3);
    }
}
