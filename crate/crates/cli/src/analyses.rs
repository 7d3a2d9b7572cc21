use epochscope_core::chronology::{chrono_report, vnc_cluster};
use epochscope_core::correspondence::ca_fit;
use epochscope_core::lexstats::{contingency, summarize, vocab_growth};
use epochscope_core::mt_metrics::{bleu_progression, unk_profile};
use epochscope_core::segments::{aligned_view, repeated_segments, revision_diff, SegmentOptions};
use epochscope_core::specificity::part_specificities;
use epochscope_core::{Error, Result};
use serde_json::{json, Value};

use crate::args::{Family, Format};
use crate::config::RunConfig;
use crate::load::Corpus;
use crate::output::{Artifact, Renderer, Table};

/// Correspondence analysis reads at most this many epochs by default.
const CA_DEFAULT_EPOCHS: usize = 13;

pub fn run(family: Family, cfg: &RunConfig, out: &Renderer, corpus: &Corpus) -> Result<Vec<Artifact>> {
    match family {
        Family::Summary => summary(cfg, out, corpus),
        Family::Growth => growth(cfg, out, corpus),
        Family::Specif => specif(cfg, out, corpus),
        Family::Ca => ca(cfg, out, corpus),
        Family::Vnc => vnc(cfg, out, corpus),
        Family::Chrono => chrono(cfg, out, corpus),
        Family::Segments => segments(cfg, out, corpus),
        Family::View => view(cfg, out, corpus),
        Family::Bleu => bleu(cfg, out, corpus),
        Family::Unk => unk(cfg, out, corpus),
        Family::Diff => diff(cfg, out, corpus),
    }
}

fn summary(cfg: &RunConfig, out: &Renderer, corpus: &Corpus) -> Result<Vec<Artifact>> {
    let scope = cfg.scope(|| Ok(cfg.all_parts()))?;
    let rows = summarize(&corpus.index);
    let mut t = Table::new(["part", "début", "fin", "fq", "Fq", "FqMax", "FormeMax"]);
    for &p in &scope {
        let s = &rows[p];
        t.push(vec![
            s.part_name.clone(),
            s.debut.to_string(),
            s.fin.to_string(),
            s.distinct_forms.to_string(),
            s.occurrences.to_string(),
            s.fq_max.to_string(),
            s.forme_max.clone().unwrap_or_default(),
        ]);
    }
    Ok(vec![out.table("summary", Format::Tsv, &t)])
}

fn growth(cfg: &RunConfig, out: &Renderer, corpus: &Corpus) -> Result<Vec<Artifact>> {
    let scope = cfg.scope(|| Ok(cfg.all_parts()))?;
    let mut t = Table::new(["part", "x", "y"]);
    for &p in &scope {
        let g = vocab_growth(corpus.base(), p, cfg.step)?;
        for (x, y) in g.points {
            t.push(vec![g.part_name.clone(), x.to_string(), y.to_string()]);
        }
    }
    Ok(vec![out.table("growth", Format::Csv, &t)])
}

fn specif(cfg: &RunConfig, out: &Renderer, corpus: &Corpus) -> Result<Vec<Artifact>> {
    let scope = cfg.scope(|| Ok(cfg.all_parts()))?;
    let mut t = Table::new(["part", "form", "index", "FQ", "fq"]);
    for &p in &scope {
        for s in part_specificities::<f64>(&corpus.index, &scope, p, cfg.threshold, cfg.specif_min_freq)? {
            t.push(vec![
                s.part,
                s.form,
                out.num(s.index),
                s.form_freq.to_string(),
                s.sub_freq.to_string(),
            ]);
        }
    }
    Ok(vec![out.table("specif", Format::Tsv, &t)])
}

fn ca(cfg: &RunConfig, out: &Renderer, corpus: &Corpus) -> Result<Vec<Artifact>> {
    let scope = cfg.scope(|| {
        let mut e = cfg.epoch_indices()?;
        e.truncate(CA_DEFAULT_EPOCHS);
        Ok(e)
    })?;
    let table = contingency(&corpus.index, &scope, cfg.ca_min_freq)?;
    let res = ca_fit::<f64>(&table)?;
    let coords = |m: &epochscope_core::Matrix64, i: usize| -> Vec<f64> { m.row(i).to_vec() };
    let data = json!({
        "dims": res.dims(),
        "total_inertia": res.total_inertia,
        "singular_values": res.singular_values,
        "principal_inertias": res.principal_inertias,
        "inertia_pct": res.inertia_pct,
        "columns": res.column_labels.iter().enumerate().map(|(j, l)| json!({
            "label": l,
            "mass": res.column_masses[j],
            "coords": coords(&res.column_coords, j),
        })).collect::<Vec<Value>>(),
        "rows": res.row_labels.iter().enumerate().map(|(i, l)| json!({
            "label": l,
            "mass": res.row_masses[i],
            "coords": coords(&res.row_coords, i),
        })).collect::<Vec<Value>>(),
    });
    let mut plot = Table::new(["name", "rank", "dim1", "dim2", "polyline"]);
    for (j, &p) in scope.iter().enumerate() {
        let dim = |k: usize| {
            if k < res.dims() {
                out.num(res.column_coords[(j, k)])
            } else {
                "NA".to_string()
            }
        };
        plot.push(vec![
            cfg.parts[p].clone(),
            corpus.index.parts()[p].rank.to_string(),
            dim(0),
            dim(1),
            // parts are joined in rank order, one polyline through all of them
            "1".to_string(),
        ]);
    }
    Ok(vec![out.json("ca", data), out.table("ca_plot", Format::Csv, &plot)])
}

fn vnc(cfg: &RunConfig, out: &Renderer, corpus: &Corpus) -> Result<Vec<Artifact>> {
    let scope = cfg.scope(|| cfg.epoch_indices())?;
    let base = corpus.base();
    let mut vectors = Vec::with_capacity(scope.len());
    for &p in &scope {
        base.require_aligned(p)?;
        let prof = unk_profile(base, p, &cfg.unk_token)?;
        vectors.push(prof.counts.iter().map(|&c| c as f64).collect::<Vec<f64>>());
    }
    if let Some(v) = vectors.iter().find(|v| v.len() != vectors[0].len()) {
        return Err(Error::LengthMismatch {
            left: vectors[0].len(),
            right: v.len(),
        });
    }
    let labels: Vec<String> = scope.iter().map(|&p| cfg.parts[p].clone()).collect();
    let d = vnc_cluster(&vectors, &labels, cfg.vnc_distance.into())?;
    Ok(vec![
        out.text("vnc", &d.render_text(cfg.precision)),
        out.json("vnc", serde_json::to_value(&d)?),
    ])
}

fn chrono(cfg: &RunConfig, out: &Renderer, corpus: &Corpus) -> Result<Vec<Artifact>> {
    let scope = cfg.scope(|| cfg.epoch_indices())?;
    let rows = chrono_report::<f64>(&corpus.index, &scope, cfg.fq_max)?;
    let mut columns: Vec<String> = ["Item", "FQ", "BT", "VN"].map(String::from).to_vec();
    columns.extend(scope.iter().map(|&p| format!("{}/fq", cfg.parts[p])));
    let mut t = Table::new(columns);
    for r in rows {
        let mut row = vec![
            r.form,
            r.fq_total.to_string(),
            out.num(r.bt),
            r.vn.map_or_else(|| "NA".to_string(), |v| out.num(v)),
        ];
        row.extend(r.fq.iter().map(u64::to_string));
        t.push(row);
    }
    Ok(vec![out.table("chrono", Format::Tsv, &t)])
}

fn segments(cfg: &RunConfig, out: &Renderer, corpus: &Corpus) -> Result<Vec<Artifact>> {
    let scope = cfg.scope(|| Ok(cfg.all_parts()))?;
    let opts = SegmentOptions {
        min_len: cfg.seg_min_len,
        max_len: cfg.seg_max_len,
        min_freq: cfg.seg_min_freq,
        maximal_only: cfg.maximal_only,
    };
    let mut t = Table::new(["segment", "freq", "n_occurrences"]);
    for s in repeated_segments(corpus.base(), &scope, opts)? {
        t.push(vec![
            s.tokens.join(" "),
            s.frequency.to_string(),
            s.occurrences.len().to_string(),
        ]);
    }
    Ok(vec![out.table("segments", Format::Tsv, &t)])
}

fn view(cfg: &RunConfig, out: &Renderer, corpus: &Corpus) -> Result<Vec<Artifact>> {
    let base = corpus.base();
    let scope = cfg.scope(|| Ok(base.partition.aligned.clone()))?;
    let reference = cfg.reference_index().ok().filter(|r| scope.contains(r));
    let v = aligned_view(base, cfg.sentence, &scope, reference)?;
    Ok(vec![
        out.text("view", &v.render_text()),
        out.json("view", serde_json::to_value(&v)?),
    ])
}

fn bleu(cfg: &RunConfig, out: &Renderer, corpus: &Corpus) -> Result<Vec<Artifact>> {
    let scope = cfg.scope(|| cfg.epoch_indices())?;
    let rows = bleu_progression(corpus.base(), &scope, cfg.reference_index()?, cfg.smoothing)?;
    let mut t = Table::new(["epoch", "mean_bleu"]);
    for r in rows {
        t.push(vec![r.epoch, out.num(r.mean_bleu)]);
    }
    Ok(vec![out.table("bleu", Format::Csv, &t)])
}

fn unk(cfg: &RunConfig, out: &Renderer, corpus: &Corpus) -> Result<Vec<Artifact>> {
    let scope = cfg.scope(|| cfg.epoch_indices())?;
    let mut t = Table::new(["epoch", "total_unk", "zero_unk_sentences"]);
    for &p in &scope {
        let prof = unk_profile(corpus.base(), p, &cfg.unk_token)?;
        t.push(vec![
            prof.part_name,
            prof.total_unk.to_string(),
            prof.sentences_without_unk.to_string(),
        ]);
    }
    Ok(vec![out.table("unk", Format::Tsv, &t)])
}

fn diff(cfg: &RunConfig, out: &Renderer, corpus: &Corpus) -> Result<Vec<Artifact>> {
    let scope = cfg.scope(|| cfg.epoch_indices())?;
    if scope.len() < 2 {
        return Err(Error::EmptyRange(format!(
            "diff needs at least 2 parts, got {}",
            scope.len()
        )));
    }
    let mut t = Table::new([
        "from", "to", "sentence", "distance", "a_start", "a_end", "b_start", "b_end", "removed", "added",
    ]);
    for w in scope.windows(2) {
        let (a, b) = (&cfg.parts[w[0]], &cfg.parts[w[1]]);
        for rev in revision_diff(corpus.base(), w[0], w[1])? {
            for c in rev.changes {
                t.push(vec![
                    a.clone(),
                    b.clone(),
                    rev.sentence_id.to_string(),
                    rev.distance.to_string(),
                    c.a.0.to_string(),
                    c.a.1.to_string(),
                    c.b.0.to_string(),
                    c.b.1.to_string(),
                    c.from.join(" "),
                    c.to.join(" "),
                ]);
            }
        }
    }
    Ok(vec![out.table("diff", Format::Tsv, &t)])
}
