//! Acceptance gate: one PASS/FAIL line per criterion, run with
//! `cargo test -p epochscope-cli --test acceptance -- --nocapture`.
//!
//! Set `UPDATE_GOLDEN=1` to rewrite the report golden files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use epochscope_core::chronology::{barycentre_temporel, vnc_cluster, von_neumann, VncDistance};
use epochscope_core::correspondence::ca_fit;
use epochscope_core::lexstats::{contingency, summarize, vocab_growth, ContingencyTable};
use epochscope_core::mt_metrics::{bleu_corpus, bleu_sentence, unk_profile, Smoothing};
use epochscope_core::segments::{repeated_segments, SegmentOptions};
use epochscope_core::specificity::specificity_index;
use epochscope_core::{build_base, Base, PartSource, TokenPolicy};
use epochscope_testkit::corpus::{random_corpus, random_table, random_vectors, RandomCorpus};
use epochscope_testkit::oracle;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn base_of(c: &RandomCorpus) -> Base {
    let sources: Vec<PartSource> = c
        .names
        .iter()
        .zip(&c.texts)
        .map(|(n, t)| PartSource::new(n.clone(), t.clone(), true))
        .collect();
    build_base(&sources, &TokenPolicy::default()).unwrap()
}

fn barycentre_and_von_neumann() -> Outcome {
    let start = Instant::now();
    let rows = [
        ("vis", [0u64, 0, 0, 2, 2, 2, 2, 2, 2]),
        ("Nordic", [0, 0, 0, 1, 1, 1, 1, 1, 1]),
    ];
    let mut got = Vec::new();
    for (form, fq) in rows {
        let bt: f64 = barycentre_temporel(&fq).map_err(|e| e.to_string())?;
        let xs: Vec<f64> = fq.iter().map(|&x| x as f64).collect();
        let vn = von_neumann(&xs).map_err(|e| e.to_string())?.ok_or("VN undefined")?;
        got.push((form, bt, vn));
    }
    let elapsed = start.elapsed();
    for (form, bt, vn) in &got {
        check((bt - 6.5).abs() <= 1e-9 && (vn - 0.25).abs() <= 1e-9, || {
            format!("{form}: BT={bt} VN={vn}")
        })?;
    }
    check(elapsed < Duration::from_millis(1), || format!("took {elapsed:?}"))?;
    Ok(format!("vis and Nordic give (6.5, 0.25) in {elapsed:?}"))
}

fn specificity_sweep() -> Outcome {
    let start = Instant::now();
    let c = oracle::binomials(60);
    let mut n = 0u64;
    let mut worst = 0.0f64;
    for total in 1..=60usize {
        for part in 0..=total {
            for form in 0..=total {
                let lo = (part + form).saturating_sub(total);
                for f in lo..=form.min(part) {
                    let got: f64 = specificity_index(total as u64, part as u64, form as u64, f as u64)
                        .map_err(|e| e.to_string())?;
                    let want = oracle::exact_specificity(&c, total, part, form, f);
                    let err = (got - want).abs();
                    worst = worst.max(err);
                    check(err <= 1e-6, || {
                        format!("T={total} t={part} F={form} f={f}: {got} vs {want}")
                    })?;
                    n += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(30), || format!("sweep took {elapsed:?}"))?;
    Ok(format!("{n} tuples, max |error| {worst:.2e}, {elapsed:?}"))
}

fn table(counts: Vec<Vec<u64>>) -> ContingencyTable {
    ContingencyTable {
        rows: (0..counts.len()).map(|i| format!("r{i}")).collect(),
        columns: (0..counts[0].len()).map(|j| format!("c{j}")).collect(),
        counts,
    }
}

fn same_up_to_sign(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol) || a.iter().zip(b).all(|(x, y)| (x + y).abs() <= tol)
}

fn correspondence() -> Outcome {
    let mut compared = 0;
    let mut skipped = 0;
    for seed in 0..200u64 {
        let counts = random_table(seed, 50, 13);
        let t = table(counts.clone());
        let res = ca_fit::<f64>(&t).map_err(|e| format!("seed {seed}: {e}"))?;
        let n = t.grand_total() as f64;
        let (rows, cols) = (t.row_totals(), t.column_totals());
        let mut chi2 = 0.0;
        for (i, row) in counts.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                let e = rows[i] as f64 * cols[j] as f64 / n;
                chi2 += (x as f64 - e).powi(2) / e;
            }
        }
        let sum: f64 = res.principal_inertias.iter().sum();
        check((sum - chi2 / n).abs() <= 1e-10, || {
            format!("seed {seed}: Σλ={sum} χ²/N={}", chi2 / n)
        })?;
        let o = oracle::ca_oracle(&counts, 1e-12);
        for k in 0..res.dims().min(o.inertias.len()) {
            check((res.principal_inertias[k] - o.inertias[k]).abs() <= 1e-10, || {
                format!("seed {seed} λ{k}: {} vs {}", res.principal_inertias[k], o.inertias[k])
            })?;
            // axes of (nearly) repeated eigenvalues are not unique
            let gap = o
                .inertias
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != k)
                .map(|(_, &x)| (x - o.inertias[k]).abs())
                .fold(o.inertias[k], f64::min);
            if gap < 1e-6 {
                skipped += 1;
                continue;
            }
            let col: Vec<f64> = (0..cols.len()).map(|j| res.column_coords[(j, k)]).collect();
            let ocol: Vec<f64> = o.cols.iter().map(|r| r[k]).collect();
            let row: Vec<f64> = (0..rows.len()).map(|i| res.row_coords[(i, k)]).collect();
            let orow: Vec<f64> = o.rows.iter().map(|r| r[k]).collect();
            check(
                same_up_to_sign(&col, &ocol, 1e-8) && same_up_to_sign(&row, &orow, 1e-8),
                || format!("seed {seed}: coordinates differ on dimension {k}"),
            )?;
            compared += 1;
        }
    }
    let diag = ca_fit::<f64>(&table(vec![vec![5, 0], vec![0, 5]])).map_err(|e| e.to_string())?;
    check(
        diag.principal_inertias == vec![1.0] && diag.inertia_pct == vec![100.0],
        || {
            format!(
                "2x2 diagonal: λ={:?} pct={:?}",
                diag.principal_inertias, diag.inertia_pct
            )
        },
    )?;
    Ok(format!(
        "200 tables, {compared} dimensions matched, {skipped} near-degenerate skipped; diagonal 2x2 exact"
    ))
}

fn clustering() -> Outcome {
    for seed in 0..1000u64 {
        let n = 2 + (seed % 19) as usize;
        let dim = 3 + (seed % 8) as usize;
        let vectors = random_vectors(seed, n, dim);
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let d = vnc_cluster(&vectors, &labels, VncDistance::OneMinusR).map_err(|e| e.to_string())?;
        let mut spans: Vec<(usize, usize)> = (0..n).map(|i| (i, i)).collect();
        check(d.merges.len() == n - 1, || {
            format!("seed {seed}: {} merges", d.merges.len())
        })?;
        for m in &d.merges {
            let (l, r) = (spans[m.left], spans[m.right]);
            check(l.1 + 1 == r.0, || {
                format!("seed {seed}: non-adjacent merge {l:?} {r:?}")
            })?;
            spans.push((l.0, r.1));
        }
    }
    let mut exhaustive = 0;
    for seed in 0..1000u64 {
        let n = 3 + (seed % 2) as usize;
        let vectors = random_vectors(10_000 + seed, n, 3 + (seed % 5) as usize);
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let d = vnc_cluster(&vectors, &labels, VncDistance::OneMinusR).map_err(|e| e.to_string())?;
        let want = oracle::vnc_exhaustive(&vectors);
        for (m, w) in d.merges.iter().zip(&want) {
            check(m.span == w.span && (m.height - w.height).abs() <= 1e-9, || {
                format!("seed {seed}: {:?}@{} vs {:?}@{}", m.span, m.height, w.span, w.height)
            })?;
        }
        exhaustive += 1;
    }
    Ok(format!(
        "adjacency on 1000 instances; {exhaustive} 3/4-part instances equal exhaustive search"
    ))
}

fn bleu_goldens() -> Outcome {
    let ident = bleu_corpus(&["the cat is on the mat"], &["the cat is on the mat"]).map_err(|e| e.to_string())?;
    check(format!("{:.3}", ident.score) == "100.000", || {
        format!("identity {}", ident.score)
    })?;
    let reference = "the cat is on the mat";
    let a = bleu_corpus(&["the cat is on the mat tonight"], &[reference]).map_err(|e| e.to_string())?;
    check((a.score - 80.91).abs() <= 0.01, || {
        format!("80.91 example gives {}", a.score)
    })?;
    let b = bleu_corpus(&["the cat is on the"], &[reference]).map_err(|e| e.to_string())?;
    check((b.score - 81.87).abs() <= 0.01, || {
        format!("81.87 example gives {}", b.score)
    })?;
    let c = bleu_sentence("the the the the the the the", reference, Smoothing::None).map_err(|e| e.to_string())?;
    check(
        c.matches[0] == 2 && c.totals[0] == 7 && c.precisions[0] == 2.0 / 7.0,
        || format!("p1 = {}/{}", c.matches[0], c.totals[0]),
    )?;
    check(c.score == 0.0, || format!("clipping example scores {}", c.score))?;
    Ok(format!("100.000, {:.2}, {:.2}, p1=2/7 with score 0", a.score, b.score))
}

fn counting() -> Outcome {
    let mut segments = 0;
    for seed in 0..100u64 {
        let c = random_corpus(seed, 13, 2000);
        let base = base_of(&c);
        for (s, (distinct, occ, fq_max, forme_max)) in summarize(&base.index).iter().zip(oracle::summary(&c)) {
            check(
                (s.distinct_forms, s.occurrences, s.fq_max, &s.forme_max) == (distinct, occ, fq_max, &forme_max),
                || format!("seed {seed}: summary of {}", s.part_name),
            )?;
        }
        let parts: Vec<usize> = (0..c.names.len()).collect();
        let t = contingency(&base.index, &parts, 2).map_err(|e| e.to_string())?;
        let want = oracle::contingency(&c, &parts, 2);
        check(
            t.rows == want.iter().map(|(f, _)| f.clone()).collect::<Vec<_>>()
                && t.counts == want.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>(),
            || format!("seed {seed}: contingency"),
        )?;
        for p in 0..c.names.len() {
            let prof = unk_profile(&base, p, "<unk>").map_err(|e| e.to_string())?;
            check(prof.counts == oracle::unk_counts(&c, p, "<unk>"), || {
                format!("seed {seed}: unk in {p}")
            })?;
        }
        let segs = repeated_segments(&base, &parts, SegmentOptions::default()).map_err(|e| e.to_string())?;
        let all = oracle::all_repeats(&c, &parts, 2, 10, 2);
        check(segs.len() == all.len(), || {
            format!("seed {seed}: {} segments vs {}", segs.len(), all.len())
        })?;
        for s in &segs {
            check(all.get(&s.tokens) == Some(&s.frequency), || {
                format!("seed {seed}: {:?}", s.tokens)
            })?;
            check(s.occurrences.len() as u64 == s.frequency, || {
                format!("seed {seed}: positions")
            })?;
        }
        segments += segs.len();
    }
    Ok(format!(
        "100 corpora; summaries, tables, unk profiles and {segments} segments match recounts"
    ))
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/report")
}

fn run_report(out: &Path) -> Result<Duration, String> {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/mini-epochs/manifest.tsv");
    let start = Instant::now();
    let o = Command::new(env!("CARGO_BIN_EXE_epochscope"))
        .args(["report", "--manifest"])
        .arg(&manifest)
        .arg("--out")
        .arg(out)
        .env_remove("EPOCHSCOPE_CACHE_DIR")
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    check(o.status.success(), || String::from_utf8_lossy(&o.stderr).into_owned())?;
    Ok(elapsed)
}

fn listing(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn end_to_end() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let t1 = run_report(&a)?;
    let t2 = run_report(&b)?;
    check(t1 < Duration::from_secs(10), || format!("report took {t1:?}"))?;
    let (la, lb) = (listing(&a), listing(&b));
    check(la == lb, || "two runs differ".to_string())?;
    let index: serde_json::Value =
        serde_json::from_slice(&la.iter().find(|(n, _)| n == "index.json").ok_or("no index")?.1)
            .map_err(|e| e.to_string())?;
    let families = index["artifacts"].as_array().map_or(0, Vec::len);
    check(families == 11, || format!("{families} artifact families"))?;
    let golden = golden_dir();
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        let _ = fs::remove_dir_all(&golden);
        fs::create_dir_all(&golden).map_err(|e| e.to_string())?;
        for (name, bytes) in &la {
            fs::write(golden.join(name), bytes).map_err(|e| e.to_string())?;
        }
    }
    let lg = listing(&golden);
    let names = |l: &[(String, Vec<u8>)]| l.iter().map(|(n, _)| n.clone()).collect::<Vec<_>>();
    check(names(&la) == names(&lg), || {
        format!("files {:?} vs golden {:?}", names(&la), names(&lg))
    })?;
    for ((name, got), (_, want)) in la.iter().zip(&lg) {
        check(got == want, || format!("{name} differs from golden"))?;
    }
    Ok(format!(
        "{} files in 11 families, byte-identical twice and to goldens, {t1:?} / {t2:?}",
        la.len()
    ))
}

fn growth() -> Outcome {
    let mut curves = 0;
    for seed in 0..100u64 {
        let c = random_corpus(seed, 13, 2000);
        let base = base_of(&c);
        for p in 0..c.names.len() {
            for step in [1, 10, 100] {
                let g = vocab_growth(&base, p, step).map_err(|e| e.to_string())?;
                check(g.points.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1), || {
                    format!("seed {seed} part {p}: not monotone")
                })?;
                let s = &base.index.parts()[p];
                check(*g.points.last().unwrap() == (s.occurrences, s.distinct), || {
                    format!("seed {seed} part {p}: final point {:?}", g.points.last())
                })?;
                curves += 1;
            }
        }
    }
    Ok(format!("{curves} curves monotone with final point (Fq, distinct)"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("1 barycentre / Von Neumann reference rows", barycentre_and_von_neumann),
        ("2 specificity exact-tail sweep", specificity_sweep),
        ("3 correspondence analysis", correspondence),
        ("4 neighbour clustering", clustering),
        ("5 BLEU golden values", bleu_goldens),
        ("6 counting oracles", counting),
        ("7 end-to-end report", end_to_end),
        ("8 vocabulary growth", growth),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                println!("FAIL criterion {name}: {detail}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
