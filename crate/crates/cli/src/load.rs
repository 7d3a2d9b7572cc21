use std::fs;
use std::path::{Path, PathBuf};

use epochscope_core::{build_base, Base, Error, FrequencyIndex, Result, TokenPolicy};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{hex, Resolved};

const CACHE_VERSION: u32 = 1;

/// What the analyses read: always the index, and the full base unless
/// every requested family works from counts alone and the cache had them.
pub struct Corpus {
    pub index: FrequencyIndex,
    pub base: Option<Base>,
}

impl Corpus {
    pub fn base(&self) -> &Base {
        self.base.as_ref().expect("base built for families that need it")
    }
}

#[derive(Serialize, Deserialize)]
struct CacheDoc {
    version: u32,
    key: String,
    policy: TokenPolicy,
    #[serde(flatten)]
    index: FrequencyIndex,
}

fn cache_dir(manifest: &Path) -> PathBuf {
    match std::env::var_os("EPOCHSCOPE_CACHE_DIR") {
        Some(dir) => PathBuf::from(dir),
        None => manifest
            .parent()
            .unwrap_or_else(|| Path::new("."))
            .join(".epochscope-cache"),
    }
}

fn cache_key(r: &Resolved) -> Result<String> {
    let mut h = Sha256::new();
    h.update(r.config.manifest_digest.as_bytes());
    h.update(serde_json::to_vec(&r.config.policy)?);
    Ok(hex(&h.finalize()))
}

fn read_cache(path: &Path, key: &str) -> Option<FrequencyIndex> {
    let text = fs::read_to_string(path).ok()?;
    let doc: CacheDoc = match serde_json::from_str(&text) {
        Ok(d) => d,
        Err(e) => {
            log::warn!("ignoring unreadable cache {}: {e}", path.display());
            return None;
        }
    };
    if doc.version != CACHE_VERSION || doc.key != key {
        return None;
    }
    let mut index = doc.index;
    index.rebuild_lookup().ok()?;
    Some(index)
}

fn write_cache(path: &Path, key: &str, base: &Base) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let doc = CacheDoc {
        version: CACHE_VERSION,
        key: key.to_string(),
        policy: base.policy.clone(),
        index: base.index.clone(),
    };
    fs::write(path, serde_json::to_vec(&doc)?).map_err(io)
}

pub fn load(r: &Resolved, use_cache: bool) -> Result<Corpus> {
    let counts_only = r.config.families.iter().all(|f| f.counts_only());
    let cache = if use_cache {
        let key = cache_key(r)?;
        Some((cache_dir(&r.manifest_path).join(format!("{key}.json")), key))
    } else {
        None
    };
    if let (true, Some((path, key))) = (counts_only, &cache) {
        if let Some(index) = read_cache(path, key) {
            log::info!("index loaded from cache {}", path.display());
            return Ok(Corpus { index, base: None });
        }
    }
    let base = build_base(&r.sources, &r.config.policy)?;
    if let Some((path, key)) = &cache {
        write_cache(path, key, &base)?;
    }
    Ok(Corpus {
        index: base.index.clone(),
        base: Some(base),
    })
}
