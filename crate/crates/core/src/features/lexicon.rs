//! Word-level affect lexicons in the NRC tab-separated layouts.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use super::text::Stemmer;
use crate::error::{Error, Result};

/// Emotion and sentiment flags, in lexicon column order.
pub const EMOTIONS: [&str; 10] = [
    "anger",
    "anticipation",
    "disgust",
    "fear",
    "joy",
    "sadness",
    "surprise",
    "trust",
    "negative",
    "positive",
];

/// Emotions scored by the intensity lexicon.
pub const INTENSITY_EMOTIONS: [&str; 4] = ["anger", "fear", "sadness", "joy"];

/// A word-keyed resource that can be queried by exact form.
pub trait Lexicon {
    type Entry;

    fn get(&self, word: &str) -> Option<Self::Entry>;
}

/// Exact match, then stem, then each synonym in order (exact, then stemmed).
pub fn lookup_with_fallback<L: Lexicon>(
    word: &str,
    lexicon: &L,
    stemmer: &impl Stemmer,
    synonyms: &SynonymTable,
) -> Option<L::Entry> {
    let exact_or_stem = |w: &str| lexicon.get(w).or_else(|| stemmer.stem(w).and_then(|s| lexicon.get(&s)));
    exact_or_stem(word).or_else(|| synonyms.synonyms(word).iter().find_map(|syn| exact_or_stem(syn)))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Iterates non-empty lines split on tabs, with 1-based line numbers.
fn tsv_rows(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l.split('\t').map(str::trim).collect()))
}

fn unit_interval(raw: &str) -> Option<f64> {
    raw.parse::<f64>().ok().filter(|v| (0.0..=1.0).contains(v))
}

/// Binary word-emotion association flags.
#[derive(Debug, Clone, Default)]
pub struct EmotionLexicon {
    entries: HashMap<String, [f64; 10]>,
}

impl EmotionLexicon {
    /// Builds from `(word, emotion, flag)` triples.
    pub fn from_entries<'a>(entries: impl IntoIterator<Item = (&'a str, &'a str, bool)>) -> Result<Self> {
        let mut lex = Self::default();
        for (word, emotion, flag) in entries {
            lex.insert(word, emotion, flag).map_err(Error::InvalidArgument)?;
        }
        Ok(lex)
    }

    fn insert(&mut self, word: &str, emotion: &str, flag: bool) -> std::result::Result<(), String> {
        let slot = EMOTIONS
            .iter()
            .position(|e| *e == emotion)
            .ok_or_else(|| format!("unknown emotion `{emotion}`"))?;
        let row = self.entries.entry(word.to_lowercase()).or_insert([0.0; 10]);
        row[slot] = if flag { 1.0 } else { 0.0 };
        Ok(())
    }

    /// `word<TAB>emotion<TAB>0|1` per line.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut lex = Self::default();
        for (line, cols) in tsv_rows(&read(path)?) {
            let [word, emotion, flag] = cols[..] else {
                return Err(parse_err(path, line, "expected word, emotion, flag"));
            };
            let flag = match flag {
                "0" => false,
                "1" => true,
                other => return Err(parse_err(path, line, format!("flag must be 0 or 1, got `{other}`"))),
            };
            lex.insert(word, emotion, flag).map_err(|m| parse_err(path, line, m))?;
        }
        Ok(lex)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Lexicon for EmotionLexicon {
    type Entry = [f64; 10];

    fn get(&self, word: &str) -> Option<[f64; 10]> {
        self.entries.get(word).copied()
    }
}

/// Real-valued intensity for anger, fear, sadness and joy.
#[derive(Debug, Clone, Default)]
pub struct IntensityLexicon {
    entries: HashMap<String, [f64; 4]>,
}

impl IntensityLexicon {
    pub fn from_entries<'a>(entries: impl IntoIterator<Item = (&'a str, &'a str, f64)>) -> Result<Self> {
        let mut lex = Self::default();
        for (word, emotion, score) in entries {
            lex.insert(word, emotion, score).map_err(Error::InvalidArgument)?;
        }
        Ok(lex)
    }

    fn insert(&mut self, word: &str, emotion: &str, score: f64) -> std::result::Result<(), String> {
        let slot = INTENSITY_EMOTIONS
            .iter()
            .position(|e| *e == emotion)
            .ok_or_else(|| format!("unknown intensity emotion `{emotion}`"))?;
        if !(0.0..=1.0).contains(&score) {
            return Err(format!("score {score} outside [0, 1]"));
        }
        self.entries.entry(word.to_lowercase()).or_insert([0.0; 4])[slot] = score;
        Ok(())
    }

    /// `word<TAB>emotion<TAB>score` per line. The released file orders the
    /// columns `word<TAB>score<TAB>emotion` and has a header; both load.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut lex = Self::default();
        for (line, cols) in tsv_rows(&read(path)?) {
            let [word, a, b] = cols[..] else {
                return Err(parse_err(path, line, "expected word, emotion, score"));
            };
            let (emotion, score) = match (a.parse::<f64>(), b.parse::<f64>()) {
                (_, Ok(score)) => (a, score),
                (Ok(score), _) => (b, score),
                _ if line == 1 => continue,
                _ => return Err(parse_err(path, line, "no numeric score column")),
            };
            lex.insert(word, emotion, score).map_err(|m| parse_err(path, line, m))?;
        }
        Ok(lex)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Lexicon for IntensityLexicon {
    type Entry = [f64; 4];

    fn get(&self, word: &str) -> Option<[f64; 4]> {
        self.entries.get(word).copied()
    }
}

/// Valence, arousal and dominance scores in `[0, 1]`.
#[derive(Debug, Clone, Default)]
pub struct VadLexicon {
    entries: HashMap<String, [f64; 3]>,
}

impl VadLexicon {
    pub fn from_entries<'a>(entries: impl IntoIterator<Item = (&'a str, [f64; 3])>) -> Result<Self> {
        let mut lex = Self::default();
        for (word, vad) in entries {
            if vad.iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(Error::InvalidArgument(format!("VAD for `{word}` outside [0, 1]")));
            }
            lex.entries.insert(word.to_lowercase(), vad);
        }
        Ok(lex)
    }

    /// `word<TAB>valence<TAB>arousal<TAB>dominance` per line; a header line
    /// is skipped.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut lex = Self::default();
        for (line, cols) in tsv_rows(&read(path)?) {
            let [word, v, a, d] = cols[..] else {
                return Err(parse_err(path, line, "expected word, valence, arousal, dominance"));
            };
            let parsed = [v, a, d].map(unit_interval);
            match parsed {
                [Some(v), Some(a), Some(d)] => {
                    lex.entries.insert(word.to_lowercase(), [v, a, d]);
                }
                _ if line == 1 && v.parse::<f64>().is_err() => continue,
                _ => return Err(parse_err(path, line, "VAD values must be numbers in [0, 1]")),
            }
        }
        Ok(lex)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Lexicon for VadLexicon {
    type Entry = [f64; 3];

    fn get(&self, word: &str) -> Option<[f64; 3]> {
        self.entries.get(word).copied()
    }
}

/// Ordered synonym lists. A word is never listed as its own synonym.
#[derive(Debug, Clone, Default)]
pub struct SynonymTable {
    entries: HashMap<String, Vec<String>>,
}

impl SynonymTable {
    pub fn from_entries<'a, S>(entries: impl IntoIterator<Item = (&'a str, S)>) -> Self
    where
        S: IntoIterator<Item = &'a str>,
    {
        let mut table = Self::default();
        for (word, syns) in entries {
            table.insert(word, syns);
        }
        table
    }

    fn insert<'a>(&mut self, word: &str, syns: impl IntoIterator<Item = &'a str>) {
        let word = word.to_lowercase();
        let syns: Vec<String> = syns
            .into_iter()
            .map(|s| s.trim().to_lowercase())
            .filter(|s| !s.is_empty() && *s != word)
            .collect();
        if !syns.is_empty() {
            self.entries.entry(word).or_default().extend(syns);
        }
    }

    /// `word<TAB>syn1,syn2,...` per line.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut table = Self::default();
        for (line, cols) in tsv_rows(&read(path)?) {
            let [word, syns] = cols[..] else {
                return Err(parse_err(path, line, "expected word, comma-separated synonyms"));
            };
            table.insert(word, syns.split(','));
        }
        Ok(table)
    }

    pub fn synonyms(&self, word: &str) -> &[String] {
        self.entries.get(word).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
