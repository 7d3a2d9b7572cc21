use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use epochscope_core::chronology::VncDistance;
use epochscope_core::mt_metrics::Smoothing;
use epochscope_core::PartRange;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "epochscope",
    version,
    about = "Textometric analysis of epoch-ordered parallel corpora"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-part lexicometric summary
    Summary(Opts),
    /// Vocabulary growth curves
    Growth(Opts),
    /// Hypergeometric specificities of each part
    Specif(Opts),
    /// Correspondence analysis of the form x part table
    Ca(Opts),
    /// Neighbour-constrained clustering of parts on unknown-token profiles
    Vnc(Opts),
    /// Temporal barycenter and Von Neumann table
    Chrono(Opts),
    /// Repeated segments
    Segments(Opts),
    /// Aligned view of one sentence across parts
    View(Opts),
    /// Mean sentence BLEU of each epoch against the reference
    Bleu(Opts),
    /// Unknown-token counts per epoch
    Unk(Opts),
    /// Token-level revisions between consecutive parts
    Diff(Opts),
    /// Run every analysis and write an index of the artifacts
    Report(Opts),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Summary,
    Growth,
    Specif,
    Ca,
    Vnc,
    Chrono,
    Segments,
    View,
    Bleu,
    Unk,
    Diff,
}

impl Family {
    pub const ALL: [Family; 11] = [
        Family::Summary,
        Family::Growth,
        Family::Specif,
        Family::Ca,
        Family::Vnc,
        Family::Chrono,
        Family::Segments,
        Family::View,
        Family::Bleu,
        Family::Unk,
        Family::Diff,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Summary => "summary",
            Family::Growth => "growth",
            Family::Specif => "specif",
            Family::Ca => "ca",
            Family::Vnc => "vnc",
            Family::Chrono => "chrono",
            Family::Segments => "segments",
            Family::View => "view",
            Family::Bleu => "bleu",
            Family::Unk => "unk",
            Family::Diff => "diff",
        }
    }

    /// Families computable from the frequency index alone.
    pub fn counts_only(self) -> bool {
        matches!(self, Family::Summary | Family::Specif | Family::Ca | Family::Chrono)
    }
}

impl Command {
    /// Families to run (every family for `report`) and the options.
    pub fn split(self) -> (Vec<Family>, bool, Opts) {
        use Command::*;
        let (family, opts) = match self {
            Report(o) => return (Family::ALL.to_vec(), true, o),
            Summary(o) => (Family::Summary, o),
            Growth(o) => (Family::Growth, o),
            Specif(o) => (Family::Specif, o),
            Ca(o) => (Family::Ca, o),
            Vnc(o) => (Family::Vnc, o),
            Chrono(o) => (Family::Chrono, o),
            Segments(o) => (Family::Segments, o),
            View(o) => (Family::View, o),
            Bleu(o) => (Family::Bleu, o),
            Unk(o) => (Family::Unk, o),
            Diff(o) => (Family::Diff, o),
        };
        (vec![family], false, opts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Tsv,
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Tsv => "tsv",
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distance {
    OneMinusR,
    HalfOneMinusR,
}

impl From<Distance> for VncDistance {
    fn from(d: Distance) -> Self {
        match d {
            Distance::OneMinusR => VncDistance::OneMinusR,
            Distance::HalfOneMinusR => VncDistance::HalfOneMinusR,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Opts {
    /// Corpus manifest: rank, part name, path, aligned flag per line
    #[arg(long)]
    pub manifest: PathBuf,
    /// Part range `a..b` or `all` (default depends on the analysis)
    #[arg(long)]
    pub parts: Option<PartRange>,
    /// Minimum form frequency (default 10 for ca, 1 for specif)
    #[arg(long)]
    pub min_freq: Option<u64>,
    /// Minimum absolute specificity index reported
    #[arg(long, default_value_t = 10.0)]
    pub threshold: f64,
    #[arg(long, default_value = "<unk>")]
    pub unk_token: String,
    /// Output format for tabular artifacts
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write artifacts to this directory instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Significant digits of printed numbers
    #[arg(long, default_value_t = 6)]
    pub precision: usize,
    /// chrono keeps forms whose frequency exceeds this value
    #[arg(long, default_value_t = 5)]
    pub fq_max: u64,
    /// Growth curve sampling step, in occurrences
    #[arg(long, default_value_t = 100)]
    pub step: u64,
    /// Sentence BLEU smoothing: none, add1 or exp
    #[arg(long, default_value = "exp")]
    pub smoothing: Smoothing,
    #[arg(long, value_enum, default_value_t = Distance::OneMinusR)]
    pub distance: Distance,
    /// Reference part for bleu and view
    #[arg(long, default_value = "Target")]
    pub reference: String,
    /// Source-language part, excluded from the epochs
    #[arg(long, default_value = "Source")]
    pub source: String,
    /// 1-based sentence shown by `view`
    #[arg(long, default_value_t = 1)]
    pub sentence: usize,
    #[arg(long, default_value_t = 2)]
    pub seg_min_len: usize,
    #[arg(long, default_value_t = 10)]
    pub seg_max_len: usize,
    #[arg(long, default_value_t = 2)]
    pub seg_min_freq: u64,
    /// Keep only segments not contained in an equally frequent longer one
    #[arg(long)]
    pub maximal_only: bool,
    /// Tokenization policy as JSON: {"delimiters": "...", "apostrophes": "..."}
    #[arg(long)]
    pub policy: Option<PathBuf>,
    /// Reuse or store the frequency index cache
    #[arg(long)]
    pub cache: bool,
}
