use std::fs;
use std::path::{Path, PathBuf};

use epochscope_core::mt_metrics::Smoothing;
use epochscope_core::{Error, Manifest, PartRange, PartSource, Result, TokenPolicy};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::args::{Distance, Family, Format, Opts};

/// Fully resolved settings of one invocation. Everything that can change
/// an artifact is here; output location and cache use are not.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub families: Vec<Family>,
    pub manifest_digest: String,
    pub policy: TokenPolicy,
    pub parts: Vec<String>,
    pub source: String,
    pub reference: String,
    pub epochs: Vec<String>,
    pub unk_token: String,
    pub part_range: Option<PartRange>,
    pub ca_min_freq: u64,
    pub specif_min_freq: u64,
    pub threshold: f64,
    pub fq_max: u64,
    pub step: u64,
    pub smoothing: Smoothing,
    pub vnc_distance: Distance,
    pub seg_min_len: usize,
    pub seg_max_len: usize,
    pub seg_min_freq: u64,
    pub maximal_only: bool,
    pub sentence: usize,
    pub precision: usize,
    pub format: Option<Format>,
}

pub struct Resolved {
    pub config: RunConfig,
    pub hash: String,
    pub sources: Vec<PartSource>,
    pub manifest_path: PathBuf,
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn read_policy(path: &Path) -> Result<TokenPolicy> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

/// Digest of the manifest entries and every document's bytes; independent
/// of where the corpus lives on disk.
fn corpus_digest(manifest: &Manifest, sources: &[PartSource]) -> String {
    let mut h = Sha256::new();
    for (e, s) in manifest.entries.iter().zip(sources) {
        h.update(format!("{}\t{}\t{}\n", e.rank, e.name, e.aligned).as_bytes());
        h.update(Sha256::digest(s.text.as_bytes()));
    }
    hex(&h.finalize())
}

pub fn resolve(families: Vec<Family>, opts: &Opts) -> Result<Resolved> {
    if opts.precision == 0 || opts.precision > 17 {
        return Err(Error::InvalidArgument("--precision must be within 1..=17".into()));
    }
    if !opts.threshold.is_finite() || opts.threshold < 0.0 {
        return Err(Error::InvalidArgument(
            "--threshold must be a nonnegative number".into(),
        ));
    }
    let manifest = Manifest::read(&opts.manifest)?;
    let policy = match &opts.policy {
        Some(p) => read_policy(p)?,
        None => TokenPolicy::default(),
    };
    let sources = manifest.load_sources()?;
    let parts: Vec<String> = manifest.entries.iter().map(|e| e.name.clone()).collect();
    let epochs = manifest
        .entries
        .iter()
        .filter(|e| e.aligned && e.name != opts.source && e.name != opts.reference)
        .map(|e| e.name.clone())
        .collect();
    let config = RunConfig {
        families,
        manifest_digest: corpus_digest(&manifest, &sources),
        policy,
        parts,
        source: opts.source.clone(),
        reference: opts.reference.clone(),
        epochs,
        unk_token: opts.unk_token.clone(),
        part_range: opts.parts.clone(),
        ca_min_freq: opts.min_freq.unwrap_or(10),
        specif_min_freq: opts.min_freq.unwrap_or(1),
        threshold: opts.threshold,
        fq_max: opts.fq_max,
        step: opts.step,
        smoothing: opts.smoothing,
        vnc_distance: opts.distance,
        seg_min_len: opts.seg_min_len,
        seg_max_len: opts.seg_max_len,
        seg_min_freq: opts.seg_min_freq,
        maximal_only: opts.maximal_only,
        sentence: opts.sentence,
        precision: opts.precision,
        format: opts.format,
    };
    let hash = hex(&Sha256::digest(serde_json::to_vec(&config)?));
    Ok(Resolved {
        config,
        hash,
        sources,
        manifest_path: opts.manifest.clone(),
    })
}

impl RunConfig {
    fn index_of(&self, name: &str) -> Result<usize> {
        self.parts
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| Error::UnknownPart(name.to_string()))
    }

    pub fn epoch_indices(&self) -> Result<Vec<usize>> {
        self.epochs.iter().map(|e| self.index_of(e)).collect()
    }

    pub fn reference_index(&self) -> Result<usize> {
        self.index_of(&self.reference)
    }

    /// The `--parts` selection, or `default` when absent.
    pub fn scope(&self, default: impl FnOnce() -> Result<Vec<usize>>) -> Result<Vec<usize>> {
        match &self.part_range {
            Some(r) => r.resolve(&self.parts),
            None => default(),
        }
    }

    pub fn all_parts(&self) -> Vec<usize> {
        (0..self.parts.len()).collect()
    }
}
