/// Lowercases, splits on whitespace and trims non-alphanumeric characters
/// from both ends of every token. Empty tokens are dropped.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace()
        .map(|raw| raw.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase())
        .filter(|t| !t.is_empty())
        .collect()
}

/// Maps a word to a reduced form used for out-of-vocabulary lookups.
pub trait Stemmer {
    /// Returns `None` when no rule applies.
    fn stem(&self, word: &str) -> Option<String>;
}

/// Single-pass suffix stripper. Suffixes are tried longest first and a
/// rule only fires if at least [`SuffixStemmer::MIN_STEM`] characters remain.
#[derive(Debug, Clone, Copy, Default)]
pub struct SuffixStemmer;

impl SuffixStemmer {
    pub const MIN_STEM: usize = 3;
    const SUFFIXES: [&'static str; 7] = ["ness", "ing", "ful", "es", "ed", "ly", "s"];
}

impl Stemmer for SuffixStemmer {
    fn stem(&self, word: &str) -> Option<String> {
        Self::SUFFIXES.iter().find_map(|suffix| {
            let stem = word.strip_suffix(suffix)?;
            (stem.chars().count() >= Self::MIN_STEM).then(|| stem.to_string())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenize_examples() {
        assert_eq!(tokenize("Grand Opening!"), ["grand", "opening"]);
        assert!(tokenize("").is_empty());
        assert_eq!(tokenize("B2B  sales"), ["b2b", "sales"]);
        assert_eq!(tokenize("\"Hello,\" -- world..."), ["hello", "world"]);
        assert_eq!(tokenize("don't"), ["don't"]);
    }

    #[test]
    fn stemmer_rules() {
        let s = SuffixStemmer;
        assert_eq!(s.stem("joyful").as_deref(), Some("joy"));
        assert_eq!(s.stem("happiness").as_deref(), Some("happi"));
        assert_eq!(s.stem("dancing").as_deref(), Some("danc"));
        assert_eq!(s.stem("boxes").as_deref(), Some("box"));
        assert_eq!(s.stem("cats").as_deref(), Some("cat"));
        // too short to strip
        assert_eq!(s.stem("yes"), None);
        assert_eq!(s.stem("sing"), None);
        assert_eq!(s.stem("joy"), None);
    }
}
