//! Hypergeometric lexical specificity.
//!
//! For a form with `F` occurrences in a corpus of `T`, observed `f` times in
//! a part of `t` occurrences, the count is compared with
//! `X ~ Hypergeometric(T, F, t)`. Over-use scores `-log10 P(X >= f)`,
//! under-use scores `log10 P(X <= f)`. At the mode, the sign follows the
//! comparison with the expectation `F·t/T` and the magnitude comes from the
//! smaller of the two tails.

use serde::{Deserialize, Serialize};

use crate::corpus::{FormId, FrequencyIndex};
use crate::error::{Error, Result};
use crate::scalar::{ln_factorial, Scalar};

/// Terms smaller than this fraction of the running tail sum stop the
/// accumulation.
const TAIL_CUTOFF: f64 = 1e-18;

/// Parameters of one specificity computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Hypergeometric {
    total: u64,
    form: u64,
    part: u64,
}

impl Hypergeometric {
    fn lo(&self) -> u64 {
        (self.part + self.form).saturating_sub(self.total)
    }

    fn hi(&self) -> u64 {
        self.form.min(self.part)
    }

    fn mode(&self) -> u64 {
        let m = (self.part as u128 + 1) * (self.form as u128 + 1) / (self.total as u128 + 2);
        (m as u64).clamp(self.lo(), self.hi())
    }

    fn ln_choose<S: Scalar>(n: u64, k: u64) -> S {
        ln_factorial::<S>(n) - ln_factorial::<S>(k) - ln_factorial::<S>(n - k)
    }

    fn ln_pmf<S: Scalar>(&self, k: u64) -> S {
        Self::ln_choose::<S>(self.form, k) + Self::ln_choose::<S>(self.total - self.form, self.part - k)
            - Self::ln_choose::<S>(self.total, self.part)
    }

    /// `ln P(X >= k)`, summed outward from `k` by term ratios.
    fn ln_upper<S: Scalar>(&self, k: u64) -> S {
        let (t_all, f_all, t) = (self.total, self.form, self.part);
        let cutoff = S::lit(TAIL_CUTOFF);
        let mut term = S::one();
        let mut sum = S::one();
        let mut j = k;
        while j < self.hi() {
            let num = S::from_count(f_all - j) * S::from_count(t - j);
            let den = S::from_count(j + 1) * S::from_count(t_all + j + 1 - f_all - t);
            term = term * num / den;
            sum = sum + term;
            j += 1;
            if term < cutoff * sum {
                break;
            }
        }
        self.ln_pmf::<S>(k) + sum.ln()
    }

    /// `ln P(X <= k)`, summed outward from `k` by term ratios.
    fn ln_lower<S: Scalar>(&self, k: u64) -> S {
        let (t_all, f_all, t) = (self.total, self.form, self.part);
        let cutoff = S::lit(TAIL_CUTOFF);
        let mut term = S::one();
        let mut sum = S::one();
        let mut j = k;
        while j > self.lo() {
            let num = S::from_count(j) * S::from_count(t_all + j - f_all - t);
            let den = S::from_count(f_all - j + 1) * S::from_count(t - j + 1);
            term = term * num / den;
            sum = sum + term;
            j -= 1;
            if term < cutoff * sum {
                break;
            }
        }
        self.ln_pmf::<S>(k) + sum.ln()
    }
}

fn to_index<S: Scalar>(ln_p: S, positive: bool) -> S {
    // -log10 P, never negative even when rounding pushes P above 1
    let magnitude = (-ln_p / S::lit(std::f64::consts::LN_10)).max(S::zero());
    if positive {
        magnitude
    } else if magnitude == S::zero() {
        S::zero()
    } else {
        -magnitude
    }
}

/// Signed specificity index of a sub-frequency `sub_freq` of a form with
/// `form_freq` occurrences, in a part of `part_total` occurrences out of
/// `corpus_total`.
pub fn specificity_index<S: Scalar>(corpus_total: u64, part_total: u64, form_freq: u64, sub_freq: u64) -> Result<S> {
    if part_total > corpus_total || form_freq > corpus_total {
        return Err(Error::Domain(format!(
            "need t <= T and F <= T (T={corpus_total}, t={part_total}, F={form_freq})"
        )));
    }
    let dist = Hypergeometric {
        total: corpus_total,
        form: form_freq,
        part: part_total,
    };
    if sub_freq > dist.hi() || sub_freq < dist.lo() {
        return Err(Error::Domain(format!(
            "f={sub_freq} outside hypergeometric support [{}, {}]",
            dist.lo(),
            dist.hi()
        )));
    }
    let mode = dist.mode();
    let f = sub_freq;
    if f > mode {
        return Ok(to_index(dist.ln_upper::<S>(f), true));
    }
    if f < mode {
        return Ok(to_index(dist.ln_lower::<S>(f), false));
    }
    let upper = dist.ln_upper::<S>(f);
    let lower = dist.ln_lower::<S>(f);
    let smaller = upper.min(lower);
    // compare f with F·t/T exactly in integers
    let lhs = f as u128 * corpus_total as u128;
    let rhs = form_freq as u128 * part_total as u128;
    let positive = match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => upper <= lower,
    };
    Ok(to_index(smaller, positive))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecificityScore<S> {
    pub form: String,
    pub part: String,
    /// Occurrences over the selected parts (`T`).
    pub corpus_total: u64,
    /// Occurrences in the part (`t`).
    pub part_total: u64,
    /// Form frequency over the selected parts (`FQ`).
    pub form_freq: u64,
    /// Form frequency in the part (`fq`).
    pub sub_freq: u64,
    pub index: S,
}

/// Specificities of one part relative to the selected parts.
///
/// Forms with selected-parts frequency below `min_freq` are skipped; the
/// rest are kept when `|index| >= threshold`, sorted by index descending
/// (ties by first appearance).
pub fn part_specificities<S: Scalar>(
    index: &FrequencyIndex,
    parts: &[usize],
    part: usize,
    threshold: S,
    min_freq: u64,
) -> Result<Vec<SpecificityScore<S>>> {
    if threshold < S::zero() {
        return Err(Error::InvalidArgument("threshold must be >= 0".into()));
    }
    if !parts.contains(&part) {
        return Err(Error::UnknownPart(
            index
                .parts()
                .get(part)
                .map_or_else(|| format!("#{part}"), |p| p.name.clone()),
        ));
    }
    let corpus_total: u64 = parts.iter().map(|&p| index.parts()[p].occurrences).sum();
    let part_total = index.parts()[part].occurrences;
    let part_name = &index.parts()[part].name;

    let mut scored: Vec<(FormId, SpecificityScore<S>)> = Vec::new();
    for id in 0..index.n_forms() as FormId {
        let form_freq = index.total_in(id, parts);
        if form_freq == 0 || form_freq < min_freq {
            continue;
        }
        let sub_freq = index.count(id, part);
        let value = specificity_index::<S>(corpus_total, part_total, form_freq, sub_freq)?;
        if value.abs() >= threshold {
            scored.push((
                id,
                SpecificityScore {
                    form: index.surface(id).to_string(),
                    part: part_name.clone(),
                    corpus_total,
                    part_total,
                    form_freq,
                    sub_freq,
                    index: value,
                },
            ));
        }
    }
    scored.sort_by(|a, b| {
        b.1.index
            .partial_cmp(&a.1.index)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.0.cmp(&b.0))
    });
    Ok(scored.into_iter().map(|(_, s)| s).collect())
}
