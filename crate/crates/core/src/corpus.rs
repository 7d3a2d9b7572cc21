//! Positional corpus base: tokenization, the trame of items, the partition
//! into parts and the frequency index every analysis reads.

use std::collections::{HashMap, HashSet};
use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type FormId = u32;

/// Token boundary rules.
///
/// Whitespace always delimits; each whitespace run becomes one delimiter
/// item. Every character of `delimiters` is its own delimiter item. A form
/// is cut right after any character of `apostrophes`, which stays attached
/// to the left piece (`l'Europe` gives `l'` and `Europe`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenPolicy {
    pub delimiters: String,
    pub apostrophes: String,
}

impl Default for TokenPolicy {
    fn default() -> Self {
        TokenPolicy {
            delimiters: ".,;:!?()\"\u{ab}\u{bb}\u{2014}".to_string(),
            apostrophes: "'\u{2019}".to_string(),
        }
    }
}

impl TokenPolicy {
    fn is_delimiter(&self, c: char) -> bool {
        self.delimiters.contains(c)
    }

    fn is_apostrophe(&self, c: char) -> bool {
        self.apostrophes.contains(c) && !self.is_delimiter(c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ItemKind {
    Form,
    Delimiter,
}

/// One position of the trame.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    /// 1-based position on the trame.
    pub position: usize,
    pub surface: String,
    pub kind: ItemKind,
    #[serde(skip)]
    pub form: Option<FormId>,
}

impl Item {
    pub fn is_form(&self) -> bool {
        self.kind == ItemKind::Form
    }
}

/// Splits `text` into form and delimiter items numbered from position 1.
///
/// Concatenating the surfaces gives back `text` exactly.
pub fn tokenize(text: &str, policy: &TokenPolicy) -> Vec<Item> {
    split(text, policy)
        .into_iter()
        .enumerate()
        .map(|(i, (span, kind))| Item {
            position: i + 1,
            surface: text[span].to_string(),
            kind,
            form: None,
        })
        .collect()
}

fn split(text: &str, policy: &TokenPolicy) -> Vec<(Range<usize>, ItemKind)> {
    #[derive(PartialEq)]
    enum State {
        Idle,
        Form(usize),
        Space(usize),
    }
    let mut out = Vec::new();
    let mut state = State::Idle;
    let close = |state: &mut State, at: usize, out: &mut Vec<(Range<usize>, ItemKind)>| {
        match *state {
            State::Form(start) => out.push((start..at, ItemKind::Form)),
            State::Space(start) => out.push((start..at, ItemKind::Delimiter)),
            State::Idle => {}
        }
        *state = State::Idle;
    };
    for (at, c) in text.char_indices() {
        let next = at + c.len_utf8();
        if c.is_whitespace() {
            if !matches!(state, State::Space(_)) {
                close(&mut state, at, &mut out);
                state = State::Space(at);
            }
        } else if policy.is_delimiter(c) {
            close(&mut state, at, &mut out);
            out.push((at..next, ItemKind::Delimiter));
        } else {
            if !matches!(state, State::Form(_)) {
                close(&mut state, at, &mut out);
                state = State::Form(at);
            }
            if policy.is_apostrophe(c) {
                close(&mut state, next, &mut out);
            }
        }
    }
    close(&mut state, text.len(), &mut out);
    out
}

/// A sentence of a part, as a half-open range of trame item indices
/// (0-based, so item `start` sits at position `start + 1`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sentence {
    /// 1-based ordinal within its part.
    pub id: usize,
    pub start: usize,
    pub end: usize,
}

impl Sentence {
    pub fn items(&self) -> Range<usize> {
        self.start..self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Part {
    pub name: String,
    pub rank: usize,
    pub debut: usize,
    pub fin: usize,
    pub aligned: bool,
    pub sentences: Vec<Sentence>,
}

/// Per-part totals carried by the frequency index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartStats {
    pub name: String,
    pub rank: usize,
    pub debut: usize,
    pub fin: usize,
    /// Form-occurrence total (`Fq`).
    pub occurrences: u64,
    /// Distinct forms present in the part.
    pub distinct: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormEntry {
    pub surface: String,
    /// Occurrences per part, in rank order.
    pub counts: Vec<u64>,
    /// First trame position of the form in each part, 0 when absent.
    pub first: Vec<usize>,
}

/// Form × part occurrence counts. Forms are numbered in order of first
/// appearance on the trame.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyIndex {
    parts: Vec<PartStats>,
    forms: Vec<FormEntry>,
    #[serde(skip)]
    lookup: HashMap<String, FormId>,
}

impl FrequencyIndex {
    pub fn from_parts(parts: Vec<PartStats>, forms: Vec<FormEntry>) -> Result<Self> {
        let mut index = FrequencyIndex {
            parts,
            forms,
            lookup: HashMap::new(),
        };
        index.rebuild_lookup()?;
        Ok(index)
    }

    /// Restores the surface lookup after deserialization and checks shape.
    pub fn rebuild_lookup(&mut self) -> Result<()> {
        self.lookup.clear();
        let n = self.parts.len();
        for (id, entry) in self.forms.iter().enumerate() {
            if entry.counts.len() != n || entry.first.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: entry.counts.len(),
                });
            }
            if self.lookup.insert(entry.surface.clone(), id as FormId).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "duplicate form `{}` in index",
                    entry.surface
                )));
            }
        }
        Ok(())
    }

    pub fn parts(&self) -> &[PartStats] {
        &self.parts
    }

    pub fn n_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn n_forms(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[FormEntry] {
        &self.forms
    }

    pub fn surface(&self, form: FormId) -> &str {
        &self.forms[form as usize].surface
    }

    pub fn form_id(&self, surface: &str) -> Option<FormId> {
        self.lookup.get(surface).copied()
    }

    pub fn count(&self, form: FormId, part: usize) -> u64 {
        self.forms[form as usize].counts[part]
    }

    /// Corpus frequency `FQ` of a form over all parts.
    pub fn total(&self, form: FormId) -> u64 {
        self.forms[form as usize].counts.iter().sum()
    }

    /// Frequency of a form summed over the given parts.
    pub fn total_in(&self, form: FormId, parts: &[usize]) -> u64 {
        let counts = &self.forms[form as usize].counts;
        parts.iter().map(|&p| counts[p]).sum()
    }

    pub fn part_index(&self, name: &str) -> Result<usize> {
        self.parts
            .iter()
            .position(|p| p.name == name)
            .ok_or_else(|| Error::UnknownPart(name.to_string()))
    }

    pub fn part_names(&self) -> Vec<&str> {
        self.parts.iter().map(|p| p.name.as_str()).collect()
    }
}

/// A document to ingest as one part.
#[derive(Debug, Clone)]
pub struct PartSource {
    pub name: String,
    pub text: String,
    pub aligned: bool,
}

impl PartSource {
    pub fn new(name: impl Into<String>, text: impl Into<String>, aligned: bool) -> Self {
        PartSource {
            name: name.into(),
            text: text.into(),
            aligned,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trame {
    pub items: Vec<Item>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub parts: Vec<Part>,
    /// Indices of the sentence-aligned parts.
    pub aligned: Vec<usize>,
}

/// The immutable textometric base.
#[derive(Debug, Clone)]
pub struct Base {
    pub policy: TokenPolicy,
    pub trame: Trame,
    pub partition: Partition,
    pub index: FrequencyIndex,
}

struct TokenizedDoc {
    tokens: Vec<(Range<usize>, ItemKind)>,
    // token index ranges, one per line
    lines: Vec<Range<usize>>,
}

fn tokenize_document(text: &str, policy: &TokenPolicy) -> TokenizedDoc {
    let mut tokens = Vec::new();
    let mut lines = Vec::new();
    let mut offset = 0;
    for chunk in text.split_inclusive('\n') {
        let content = chunk.strip_suffix('\n').unwrap_or(chunk);
        let first = tokens.len();
        tokens.extend(
            split(content, policy)
                .into_iter()
                .map(|(r, k)| (r.start + offset..r.end + offset, k)),
        );
        lines.push(first..tokens.len());
        if content.len() < chunk.len() {
            let nl = offset + content.len();
            tokens.push((nl..nl + 1, ItemKind::Delimiter));
        }
        offset += chunk.len();
    }
    TokenizedDoc { tokens, lines }
}

/// Builds the trame, partition and frequency index from ordered documents.
///
/// Each document holds one sentence per line; parts receive ranks in input
/// order. Parts flagged `aligned` must agree on their line count.
pub fn build_base(sources: &[PartSource], policy: &TokenPolicy) -> Result<Base> {
    let mut seen = HashSet::new();
    for src in sources {
        if !seen.insert(src.name.as_str()) {
            return Err(Error::DuplicatePart(src.name.clone()));
        }
        if src.text.is_empty() {
            return Err(Error::EmptyPart(src.name.clone()));
        }
    }
    if sources.is_empty() {
        return Err(Error::EmptyCorpus);
    }

    let docs: Vec<TokenizedDoc> = sources.par_iter().map(|s| tokenize_document(&s.text, policy)).collect();

    let mut reference: Option<(usize, usize)> = None;
    for (i, (src, doc)) in sources.iter().zip(&docs).enumerate() {
        if !src.aligned {
            continue;
        }
        match reference {
            None => reference = Some((i, doc.lines.len())),
            Some((r, expected)) if expected != doc.lines.len() => {
                return Err(Error::Alignment {
                    part: src.name.clone(),
                    reference: sources[r].name.clone(),
                    expected,
                    found: doc.lines.len(),
                })
            }
            Some(_) => {}
        }
    }

    let n_parts = sources.len();
    let mut items = Vec::with_capacity(docs.iter().map(|d| d.tokens.len()).sum());
    let mut parts = Vec::with_capacity(n_parts);
    let mut stats = Vec::with_capacity(n_parts);
    let mut forms: Vec<FormEntry> = Vec::new();
    let mut lookup: HashMap<String, FormId> = HashMap::new();

    for (p, (src, doc)) in sources.iter().zip(docs).enumerate() {
        let base_index = items.len();
        let mut occurrences = 0u64;
        let mut distinct = 0u64;
        for (span, kind) in doc.tokens {
            let surface = &src.text[span];
            let position = items.len() + 1;
            let form = if kind == ItemKind::Form {
                let id = match lookup.get(surface) {
                    Some(&id) => id,
                    None => {
                        let id = forms.len() as FormId;
                        forms.push(FormEntry {
                            surface: surface.to_string(),
                            counts: vec![0; n_parts],
                            first: vec![0; n_parts],
                        });
                        lookup.insert(surface.to_string(), id);
                        id
                    }
                };
                let entry = &mut forms[id as usize];
                if entry.counts[p] == 0 {
                    entry.first[p] = position;
                    distinct += 1;
                }
                entry.counts[p] += 1;
                occurrences += 1;
                Some(id)
            } else {
                None
            };
            items.push(Item {
                position,
                surface: surface.to_string(),
                kind,
                form,
            });
        }
        let sentences = doc
            .lines
            .iter()
            .enumerate()
            .map(|(i, r)| Sentence {
                id: i + 1,
                start: base_index + r.start,
                end: base_index + r.end,
            })
            .collect();
        let debut = base_index + 1;
        let fin = items.len();
        parts.push(Part {
            name: src.name.clone(),
            rank: p + 1,
            debut,
            fin,
            aligned: src.aligned,
            sentences,
        });
        stats.push(PartStats {
            name: src.name.clone(),
            rank: p + 1,
            debut,
            fin,
            occurrences,
            distinct,
        });
    }

    let aligned = parts
        .iter()
        .enumerate()
        .filter(|(_, p)| p.aligned)
        .map(|(i, _)| i)
        .collect();
    Ok(Base {
        policy: policy.clone(),
        trame: Trame { items },
        partition: Partition { parts, aligned },
        index: FrequencyIndex {
            parts: stats,
            forms,
            lookup,
        },
    })
}

impl Base {
    pub fn parts(&self) -> &[Part] {
        &self.partition.parts
    }

    pub fn part(&self, index: usize) -> &Part {
        &self.partition.parts[index]
    }

    pub fn part_index(&self, name: &str) -> Result<usize> {
        self.index.part_index(name)
    }

    /// Items of the part at `index`, in trame order.
    pub fn part_items(&self, index: usize) -> &[Item] {
        let p = self.part(index);
        &self.trame.items[p.debut - 1..p.fin]
    }

    pub fn sentence(&self, part: usize, id: usize) -> Result<&Sentence> {
        let sentences = &self.part(part).sentences;
        if id == 0 || id > sentences.len() {
            return Err(Error::SentenceOutOfRange {
                sentence: id,
                count: sentences.len(),
            });
        }
        Ok(&sentences[id - 1])
    }

    /// Form-occurrence items of a sentence.
    pub fn sentence_forms<'a>(&'a self, sentence: &Sentence) -> impl Iterator<Item = &'a Item> {
        self.trame.items[sentence.items()].iter().filter(|i| i.is_form())
    }

    /// Raw text of a sentence, without its line terminator.
    pub fn sentence_text(&self, sentence: &Sentence) -> String {
        self.trame.items[sentence.items()]
            .iter()
            .map(|i| i.surface.as_str())
            .collect()
    }

    /// Joins every item surface in position order.
    pub fn text(&self) -> String {
        self.trame.items.iter().map(|i| i.surface.as_str()).collect()
    }

    pub fn require_aligned(&self, part: usize) -> Result<()> {
        if self.part(part).aligned {
            Ok(())
        } else {
            Err(Error::NotAligned(self.part(part).name.clone()))
        }
    }
}

/// One manifest line: `rank<TAB>part_name<TAB>path<TAB>aligned:{yes,no}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub rank: usize,
    pub name: String,
    pub path: PathBuf,
    pub aligned: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let dir = path.parent().unwrap_or_else(|| Path::new(""));
        Self::parse(&text, dir)
    }

    /// Parses manifest text; relative document paths resolve against `dir`.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str, dir: &Path) -> Result<Self> {
        let mut entries: Vec<ManifestEntry> = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line_no = n + 1;
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Manifest { line: line_no, message };
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(err(format!("expected 4 tab-separated fields, found {}", fields.len())));
            }
            let rank: usize = fields[0]
                .trim()
                .parse()
                .map_err(|_| err(format!("invalid rank `{}`", fields[0])))?;
            if let Some(prev) = entries.last() {
                if rank <= prev.rank {
                    return Err(err(format!("rank {rank} not ascending")));
                }
            }
            let name = fields[1].trim();
            if name.is_empty() {
                return Err(err("empty part name".to_string()));
            }
            let aligned = match fields[3].trim() {
                "aligned:yes" | "yes" => true,
                "aligned:no" | "no" => false,
                other => return Err(err(format!("invalid aligned flag `{other}`"))),
            };
            let path = Path::new(fields[2].trim());
            entries.push(ManifestEntry {
                rank,
                name: name.to_string(),
                path: if path.is_absolute() {
                    path.to_path_buf()
                } else {
                    dir.join(path)
                },
                aligned,
            });
        }
        if entries.is_empty() {
            return Err(Error::Manifest {
                line: 0,
                message: "no parts".to_string(),
            });
        }
        Ok(Manifest { entries })
    }

    pub fn load_sources(&self) -> Result<Vec<PartSource>> {
        self.entries
            .iter()
            .map(|e| {
                let text = fs::read_to_string(&e.path).map_err(|err| Error::io(&e.path, err))?;
                Ok(PartSource::new(e.name.clone(), text, e.aligned))
            })
            .collect()
    }
}
