use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const VOCAB: &[&str] = &[
    "the",
    "of",
    "<unk>",
    "war",
    "cold",
    "that",
    "a",
    "The",
    "Nordic",
    "population",
    "is",
    "on",
    "cat",
    "mat",
    "de",
    "la",
    "l'",
    "x",
    "y",
    "z",
    "northern",
    "Europe",
    "policy",
    "UNK",
];

/// A generated corpus: parts of sentences of whitespace-free tokens.
///
/// `texts[p]` is the document for part `p`: sentences joined by `\n`,
/// tokens by single spaces, some sentences ending in ` .`. The `.` is a
/// delimiter, never a token.
#[derive(Debug, Clone)]
pub struct RandomCorpus {
    pub names: Vec<String>,
    pub sentences: Vec<Vec<Vec<String>>>,
    pub texts: Vec<String>,
}

impl RandomCorpus {
    pub fn part_tokens(&self, part: usize) -> Vec<&str> {
        self.sentences[part].iter().flatten().map(String::as_str).collect()
    }

    pub fn total_tokens(&self) -> usize {
        self.sentences.iter().flatten().map(Vec::len).sum()
    }
}

/// Aligned corpus with 2 to `max_parts` parts and at most `max_tokens`
/// tokens overall. Token frequencies are skewed so repeats are common.
pub fn random_corpus(seed: u64, max_parts: usize, max_tokens: usize) -> RandomCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_parts = rng.gen_range(2..=max_parts.max(2));
    let n_sentences = rng.gen_range(1..=8usize);
    let per_sentence = (max_tokens / (n_parts * n_sentences)).clamp(1, 20);
    let vocab_size = rng.gen_range(3..=VOCAB.len());

    let mut names = Vec::new();
    let mut sentences = Vec::new();
    let mut texts = Vec::new();
    for p in 0..n_parts {
        names.push(format!("{:02}", p + 1));
        let mut part = Vec::new();
        let mut lines = Vec::new();
        for _ in 0..n_sentences {
            let len = rng.gen_range(1..=per_sentence);
            let sent: Vec<String> = (0..len)
                .map(|_| {
                    // squaring a uniform draw favours the head of the vocabulary
                    let u: f64 = rng.gen();
                    VOCAB[((u * u) * vocab_size as f64) as usize].to_string()
                })
                .collect();
            let mut line = sent.join(" ");
            if rng.gen_bool(0.3) {
                line.push_str(" .");
            }
            lines.push(line);
            part.push(sent);
        }
        let mut text = lines.join("\n");
        if rng.gen_bool(0.5) {
            text.push('\n');
        }
        sentences.push(part);
        texts.push(text);
    }
    RandomCorpus {
        names,
        sentences,
        texts,
    }
}

/// Uniform integer table with every row and column nonzero.
pub fn random_table(seed: u64, max_rows: usize, max_cols: usize) -> Vec<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = rng.gen_range(2..=max_rows);
    let cols = rng.gen_range(2..=max_cols);
    let hi = rng.gen_range(1..=50u64);
    let mut t: Vec<Vec<u64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(0..=hi)).collect())
        .collect();
    for i in 0..rows {
        if t[i].iter().all(|&x| x == 0) {
            let j = rng.gen_range(0..cols);
            t[i][j] = 1;
        }
    }
    for j in 0..cols {
        if t.iter().all(|r| r[j] == 0) {
            let i = rng.gen_range(0..rows);
            t[i][j] = 1;
        }
    }
    t
}

/// Real vectors for clustering: `parts` vectors of length `dim`.
pub fn random_vectors(seed: u64, parts: usize, dim: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..parts)
        .map(|_| (0..dim).map(|_| rng.gen_range(0.0..10.0)).collect())
        .collect()
}
