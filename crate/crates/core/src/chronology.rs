//! Chronological profiling of parts: neighbour-constrained clustering and
//! the temporal barycenter / Von Neumann ratio of form frequencies.

use std::cmp::Ordering;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::FrequencyIndex;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn sum<S: Scalar>(xs: impl IntoIterator<Item = S>) -> S {
    xs.into_iter().fold(S::zero(), |a, b| a + b)
}

fn mean<S: Scalar>(xs: &[S]) -> S {
    sum(xs.iter().copied()) / S::from_usize(xs.len()).unwrap()
}

fn is_constant<S: Scalar>(xs: &[S]) -> bool {
    xs.windows(2).all(|w| w[0] == w[1])
}

/// Product-moment correlation, clamped to `[-1, 1]`.
pub fn pearson<S: Scalar>(x: &[S], y: &[S]) -> Result<S> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::InvalidArgument("correlation needs at least 2 values".into()));
    }
    if is_constant(x) {
        return Err(Error::ConstantVector("left".into()));
    }
    if is_constant(y) {
        return Err(Error::ConstantVector("right".into()));
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (S::zero(), S::zero(), S::zero());
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy = sxy + dx * dy;
        sxx = sxx + dx * dx;
        syy = syy + dy * dy;
    }
    if sxx == S::zero() || syy == S::zero() {
        return Err(Error::ConstantVector("zero variance".into()));
    }
    let r = sxy / (sxx * syy).sqrt();
    Ok(r.max(-S::one()).min(S::one()))
}

/// Dissimilarity derived from the correlation of two cluster centroids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VncDistance {
    /// `1 − r`, in `[0, 2]`.
    #[default]
    OneMinusR,
    /// `(1 − r)/2`, in `[0, 1]`.
    HalfOneMinusR,
}

/// How a merge height was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MergeMetric {
    Pearson,
    /// Fallback when a centroid is constant and the correlation undefined.
    Euclidean,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Merge<S> {
    /// Cluster ids: leaves are `0..n`, merge `i` creates cluster `n + i`.
    pub left: usize,
    pub right: usize,
    pub height: S,
    /// First and last leaf covered, inclusive.
    pub span: (usize, usize),
    pub metric: MergeMetric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram<S> {
    pub leaves: Vec<String>,
    pub merges: Vec<Merge<S>>,
}

impl<S: Scalar> Dendrogram<S> {
    /// Indented rendering, root first.
    pub fn render_text(&self, precision: usize) -> String {
        let mut out = String::new();
        let n = self.leaves.len();
        if self.merges.is_empty() {
            for leaf in &self.leaves {
                let _ = writeln!(out, "{leaf}");
            }
            return out;
        }
        self.render_node(n + self.merges.len() - 1, 0, precision, &mut out);
        out
    }

    fn render_node(&self, id: usize, depth: usize, precision: usize, out: &mut String) {
        let n = self.leaves.len();
        let pad = "  ".repeat(depth);
        if id < n {
            let _ = writeln!(out, "{pad}{}", self.leaves[id]);
            return;
        }
        let m = &self.merges[id - n];
        let metric = match m.metric {
            MergeMetric::Pearson => "",
            MergeMetric::Euclidean => " euclidean",
        };
        let _ = writeln!(
            out,
            "{pad}+ {}..{} h={}{metric}",
            self.leaves[m.span.0],
            self.leaves[m.span.1],
            crate::format::sig(m.height.to_f64().unwrap_or(f64::NAN), precision)
        );
        self.render_node(m.left, depth + 1, precision, out);
        self.render_node(m.right, depth + 1, precision, out);
    }
}

fn centroid_distance<S: Scalar>(a: &[S], b: &[S], distance: VncDistance) -> Result<(S, MergeMetric)> {
    if a.len() >= 2 && !is_constant(a) && !is_constant(b) {
        let r = pearson(a, b)?;
        let d = S::one() - r;
        let d = match distance {
            VncDistance::OneMinusR => d,
            VncDistance::HalfOneMinusR => d / S::lit(2.0),
        };
        return Ok((d, MergeMetric::Pearson));
    }
    let e = sum(a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y))).sqrt();
    Ok((e, MergeMetric::Euclidean))
}

/// Variability-based neighbour clustering: agglomerative clustering where
/// only chronologically adjacent clusters may merge.
///
/// Clusters are represented by the mean vector of their members; the
/// closest adjacent pair merges first, ties going to the earlier pair.
pub fn vnc_cluster<S: Scalar>(vectors: &[Vec<S>], labels: &[String], distance: VncDistance) -> Result<Dendrogram<S>> {
    let n = vectors.len();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("VNC needs at least 2 parts, got {n}")));
    }
    if labels.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: labels.len(),
        });
    }
    let dim = vectors[0].len();
    if let Some(v) = vectors.iter().find(|v| v.len() != dim) {
        return Err(Error::LengthMismatch {
            left: dim,
            right: v.len(),
        });
    }

    struct Cluster<S> {
        id: usize,
        span: (usize, usize),
        sum: Vec<S>,
    }
    impl<S: Scalar> Cluster<S> {
        fn centroid(&self) -> Vec<S> {
            let k = S::from_usize(self.span.1 - self.span.0 + 1).unwrap();
            self.sum.iter().map(|&x| x / k).collect()
        }
    }

    let mut clusters: Vec<Cluster<S>> = vectors
        .iter()
        .enumerate()
        .map(|(i, v)| Cluster {
            id: i,
            span: (i, i),
            sum: v.clone(),
        })
        .collect();
    let mut merges = Vec::with_capacity(n - 1);

    while clusters.len() > 1 {
        let centroids: Vec<Vec<S>> = clusters.iter().map(Cluster::centroid).collect();
        let mut best: Option<(usize, S, MergeMetric)> = None;
        for i in 0..clusters.len() - 1 {
            let (d, metric) = centroid_distance(&centroids[i], &centroids[i + 1], distance)?;
            if best.as_ref().is_none_or(|b| d < b.1) {
                best = Some((i, d, metric));
            }
        }
        let (i, height, metric) = best.expect("at least one adjacent pair");
        if metric == MergeMetric::Euclidean {
            log::info!(
                "VNC: constant centroid between {} and {}, using Euclidean distance",
                labels[clusters[i].span.0],
                labels[clusters[i + 1].span.1]
            );
        }
        let right = clusters.remove(i + 1);
        let left = &mut clusters[i];
        merges.push(Merge {
            left: left.id,
            right: right.id,
            height,
            span: (left.span.0, right.span.1),
            metric,
        });
        left.id = n + merges.len() - 1;
        left.span.1 = right.span.1;
        for (a, b) in left.sum.iter_mut().zip(&right.sum) {
            *a = *a + *b;
        }
    }
    Ok(Dendrogram {
        leaves: labels.to_vec(),
        merges,
    })
}

/// Temporal barycenter: frequency-weighted mean of the 1-based ordinal
/// positions within the selected range.
pub fn barycentre_temporel<S: Scalar>(fq: &[u64]) -> Result<S> {
    let total: u64 = fq.iter().sum();
    if total == 0 {
        return Err(Error::ZeroFrequency);
    }
    let weighted = sum(fq
        .iter()
        .enumerate()
        .map(|(k, &f)| S::from_usize(k + 1).unwrap() * S::from_count(f)));
    Ok(weighted / S::from_count(total))
}

/// Von Neumann ratio `Σ (x_{k+1} − x_k)² / (2 Σ (x_k − x̄)²)`; `None` when
/// the vector is constant.
pub fn von_neumann<S: Scalar>(fq: &[S]) -> Result<Option<S>> {
    if fq.len() < 2 {
        return Err(Error::InvalidArgument(
            "Von Neumann ratio needs at least 2 values".into(),
        ));
    }
    let m = mean(fq);
    let dev = sum(fq.iter().map(|&x| (x - m) * (x - m)));
    if dev == S::zero() || is_constant(fq) {
        return Ok(None);
    }
    let diff = sum(fq.windows(2).map(|w| (w[1] - w[0]) * (w[1] - w[0])));
    Ok(Some(diff / (S::lit(2.0) * dev)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChronoRow<S> {
    pub form: String,
    /// Frequency over the selected parts.
    pub fq_total: u64,
    pub bt: S,
    pub vn: Option<S>,
    /// Per selected part, in rank order.
    pub fq: Vec<u64>,
}

/// Barycenter / Von Neumann table over consecutive parts for every form
/// with selected-range frequency above `fq_max`, sorted by BT then VN
/// (undefined VN last), then first appearance.
pub fn chrono_report<S: Scalar>(index: &FrequencyIndex, parts: &[usize], fq_max: u64) -> Result<Vec<ChronoRow<S>>> {
    if parts.len() < 2 {
        return Err(Error::EmptyRange(format!("need at least 2 parts, got {}", parts.len())));
    }
    if parts.windows(2).any(|w| w[1] != w[0] + 1) || parts[parts.len() - 1] >= index.n_parts() {
        return Err(Error::EmptyRange("parts must be consecutive".into()));
    }
    let mut rows: Vec<(usize, ChronoRow<S>)> = index
        .forms()
        .par_iter()
        .enumerate()
        .filter_map(|(id, entry)| {
            let fq: Vec<u64> = parts.iter().map(|&p| entry.counts[p]).collect();
            let total: u64 = fq.iter().sum();
            if total <= fq_max || total == 0 {
                return None;
            }
            let bt = barycentre_temporel::<S>(&fq).ok()?;
            let real: Vec<S> = fq.iter().map(|&f| S::from_count(f)).collect();
            let vn = von_neumann(&real).ok()?;
            Some((
                id,
                ChronoRow {
                    form: entry.surface.clone(),
                    fq_total: total,
                    bt,
                    vn,
                    fq,
                },
            ))
        })
        .collect();
    rows.sort_by(|(ia, a), (ib, b)| {
        a.bt.partial_cmp(&b.bt)
            .unwrap_or(Ordering::Equal)
            .then_with(|| match (a.vn, b.vn) {
                (Some(x), Some(y)) => x.partial_cmp(&y).unwrap_or(Ordering::Equal),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => Ordering::Equal,
            })
            .then(ia.cmp(ib))
    });
    Ok(rows.into_iter().map(|(_, r)| r).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_base, PartSource, TokenPolicy};

    fn labels(n: usize) -> Vec<String> {
        (1..=n).map(|i| i.to_string()).collect()
    }

    #[test]
    fn pearson_examples() {
        let r: f64 = pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!((r - 1.0).abs() < 1e-15);
        let r: f64 = pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap();
        assert!((r + 1.0).abs() < 1e-15);
        let r: f64 = pearson(&[4.0, 0.0, 2.0], &[2.0, 0.0, 1.0]).unwrap();
        assert!((r - 1.0).abs() < 1e-15);
        assert!(matches!(
            pearson(&[1.0, 1.0], &[1.0, 2.0]),
            Err(Error::ConstantVector(_))
        ));
        assert!(matches!(
            pearson(&[1.0, 2.0], &[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn vnc_four_parts() {
        let v = vec![
            vec![4.0, 0.0, 2.0],
            vec![2.0, 0.0, 1.0],
            vec![0.0, 3.0, 0.0],
            vec![0.0, 6.0, 1.0],
        ];
        let d: Dendrogram<f64> = vnc_cluster(&v, &labels(4), VncDistance::OneMinusR).unwrap();
        assert_eq!(d.merges.len(), 3);
        assert_eq!((d.merges[0].left, d.merges[0].right), (0, 1));
        assert!(d.merges[0].height.abs() < 1e-12);
        assert_eq!((d.merges[1].left, d.merges[1].right), (2, 3));
        let expected = 1.0 - 11.0 / 124f64.sqrt();
        assert!((d.merges[1].height - expected).abs() < 1e-12);
        assert!((d.merges[1].height - 0.012).abs() < 5e-4);
        assert_eq!((d.merges[2].left, d.merges[2].right), (4, 5));
        assert_eq!(d.merges[2].span, (0, 3));

        let half: Dendrogram<f64> = vnc_cluster(&v, &labels(4), VncDistance::HalfOneMinusR).unwrap();
        assert!((half.merges[1].height - expected / 2.0).abs() < 1e-12);
    }

    #[test]
    fn vnc_identical_pair_and_fallback() {
        let d: Dendrogram<f64> =
            vnc_cluster(&[vec![1.0, 3.0], vec![1.0, 3.0]], &labels(2), VncDistance::OneMinusR).unwrap();
        assert_eq!(d.merges.len(), 1);
        assert!(d.merges[0].height.abs() < 1e-12);

        let zero: Dendrogram<f64> = vnc_cluster(
            &[vec![0.0, 0.0], vec![0.0, 0.0], vec![3.0, 4.0]],
            &labels(3),
            VncDistance::OneMinusR,
        )
        .unwrap();
        assert_eq!(zero.merges[0].metric, MergeMetric::Euclidean);
        assert_eq!(zero.merges[0].height, 0.0);
        assert_eq!(zero.merges[1].height, 5.0);
        assert!(vnc_cluster::<f64>(&[vec![1.0]], &labels(1), VncDistance::OneMinusR).is_err());
        assert!(vnc_cluster::<f64>(&[vec![1.0], vec![1.0, 2.0]], &labels(2), VncDistance::OneMinusR).is_err());
    }

    #[test]
    fn dendrogram_text() {
        let d: Dendrogram<f64> =
            vnc_cluster(&[vec![1.0, 3.0], vec![1.0, 3.0]], &labels(2), VncDistance::OneMinusR).unwrap();
        assert_eq!(d.render_text(6), "+ 1..2 h=0\n  1\n  2\n");
    }

    #[test]
    fn barycentre_and_von_neumann_reference_rows() {
        for fq in [[0u64, 0, 0, 2, 2, 2, 2, 2, 2], [0, 0, 0, 1, 1, 1, 1, 1, 1]] {
            let bt: f64 = barycentre_temporel(&fq).unwrap();
            assert!((bt - 6.5).abs() < 1e-12);
            let real: Vec<f64> = fq.iter().map(|&x| x as f64).collect();
            let vn = von_neumann(&real).unwrap().unwrap();
            assert!((vn - 0.25).abs() < 1e-12);
        }
        let bt: f64 = barycentre_temporel(&[3, 3, 3, 3, 3]).unwrap();
        assert_eq!(bt, 3.0);
        assert!(matches!(barycentre_temporel::<f64>(&[0, 0]), Err(Error::ZeroFrequency)));
        let vn = von_neumann(&[1.0f64, 0.0, 1.0, 0.0, 1.0, 0.0]).unwrap().unwrap();
        assert!((vn - 5.0 / 3.0).abs() < 1e-12);
        assert_eq!(von_neumann(&[2.0f64, 2.0, 2.0]).unwrap(), None);
        assert!(von_neumann(&[2.0f64]).is_err());
    }

    #[test]
    fn chrono_report_small_base() {
        let base = build_base(
            &[
                PartSource::new("1", "a b", false),
                PartSource::new("2", "a a c", false),
                PartSource::new("3", "b c c", false),
            ],
            &TokenPolicy::default(),
        )
        .unwrap();
        let rows: Vec<ChronoRow<f64>> = chrono_report(&base.index, &[0, 1, 2], 0).unwrap();
        let forms: Vec<&str> = rows.iter().map(|r| r.form.as_str()).collect();
        // BT: a = 5/3, b = 2, c = 8/3
        assert_eq!(forms, vec!["a", "b", "c"]);
        assert_eq!(rows[0].fq, vec![1, 2, 0]);
        assert!((rows[0].bt - 5.0 / 3.0).abs() < 1e-12);
        assert!(chrono_report::<f64>(&base.index, &[0, 1, 2], 99).unwrap().is_empty());
        assert!(matches!(
            chrono_report::<f64>(&base.index, &[1], 0),
            Err(Error::EmptyRange(_))
        ));
        assert!(matches!(
            chrono_report::<f64>(&base.index, &[0, 2], 0),
            Err(Error::EmptyRange(_))
        ));
    }
}
