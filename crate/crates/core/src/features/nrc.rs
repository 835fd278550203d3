use std::path::Path;

use super::lexicon::{
    lookup_with_fallback, EmotionLexicon, IntensityLexicon, SynonymTable, VadLexicon, EMOTIONS, INTENSITY_EMOTIONS,
};
use super::text::{tokenize, SuffixStemmer};
use super::{FeatureVector, Featurizer};
use crate::error::{Error, Result};

/// Per-word layout: 10 emotion flags, 4 intensities, 3 VAD scores.
pub const WORD_DIM: usize = 17;
/// Mean-pooled block followed by max-pooled block.
pub const NRC_DIM: usize = 2 * WORD_DIM;

const VAD_OFFSET: usize = 14;
const VAD_NEUTRAL: f64 = 0.5;

#[derive(Debug, Clone, Default)]
pub struct NrcLexicons {
    pub emotion: EmotionLexicon,
    pub intensity: IntensityLexicon,
    pub vad: VadLexicon,
    pub synonyms: SynonymTable,
}

impl NrcLexicons {
    /// Loads `emotion.tsv`, `intensity.tsv`, `vad.tsv` and, if present,
    /// `synonyms.tsv` from `dir`. Missing lexicon files load as empty.
    pub fn load_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        if !dir.is_dir() {
            return Err(Error::io(
                dir,
                std::io::Error::new(std::io::ErrorKind::NotFound, "lexicon directory not found"),
            ));
        }
        let opt = |name: &str| {
            let p = dir.join(name);
            p.exists().then_some(p)
        };
        Ok(Self {
            emotion: opt("emotion.tsv")
                .map(EmotionLexicon::load)
                .transpose()?
                .unwrap_or_default(),
            intensity: opt("intensity.tsv")
                .map(IntensityLexicon::load)
                .transpose()?
                .unwrap_or_default(),
            vad: opt("vad.tsv").map(VadLexicon::load).transpose()?.unwrap_or_default(),
            synonyms: opt("synonyms.tsv")
                .map(SynonymTable::load)
                .transpose()?
                .unwrap_or_default(),
        })
    }
}

/// Affect-lexicon featurizer with mean and max pooling over tokens.
#[derive(Debug, Clone)]
pub struct NrcFeaturizer {
    lexicons: NrcLexicons,
    stemmer: SuffixStemmer,
}

impl NrcFeaturizer {
    pub const NAME: &'static str = "nrc";

    pub fn new(lexicons: NrcLexicons) -> Result<Self> {
        if lexicons.emotion.is_empty() && lexicons.intensity.is_empty() && lexicons.vad.is_empty() {
            return Err(Error::InvalidArgument("lexicons not loaded".into()));
        }
        Ok(Self {
            lexicons,
            stemmer: SuffixStemmer,
        })
    }

    pub fn word_vector(&self, token: &str) -> [f64; WORD_DIM] {
        let NrcLexicons {
            emotion,
            intensity,
            vad,
            synonyms,
        } = &self.lexicons;
        let mut out = [0.0; WORD_DIM];
        if let Some(flags) = lookup_with_fallback(token, emotion, &self.stemmer, synonyms) {
            out[..10].copy_from_slice(&flags);
        }
        if let Some(scores) = lookup_with_fallback(token, intensity, &self.stemmer, synonyms) {
            out[10..VAD_OFFSET].copy_from_slice(&scores);
        }
        let vad = lookup_with_fallback(token, vad, &self.stemmer, synonyms).unwrap_or([VAD_NEUTRAL; 3]);
        out[VAD_OFFSET..].copy_from_slice(&vad);
        out
    }

    pub fn features(&self, tokens: &[String]) -> Vec<f64> {
        let mut out = vec![0.0; NRC_DIM];
        if tokens.is_empty() {
            out[VAD_OFFSET..WORD_DIM].fill(VAD_NEUTRAL);
            return out;
        }
        let (mean, max) = out.split_at_mut(WORD_DIM);
        max.fill(f64::NEG_INFINITY);
        for token in tokens {
            let word = self.word_vector(token);
            for i in 0..WORD_DIM {
                mean[i] += word[i];
                max[i] = max[i].max(word[i]);
            }
        }
        let n = tokens.len() as f64;
        mean.iter_mut().for_each(|m| *m /= n);
        out
    }
}

impl Featurizer for NrcFeaturizer {
    fn name(&self) -> &str {
        Self::NAME
    }

    fn dim(&self) -> usize {
        NRC_DIM
    }

    fn featurize(&self, _instance_id: &str, text: &str) -> Result<FeatureVector> {
        FeatureVector::new(Self::NAME, self.features(&tokenize(text)))
    }

    fn dim_labels(&self) -> Vec<String> {
        let word: Vec<String> = EMOTIONS
            .iter()
            .map(|e| e.to_string())
            .chain(INTENSITY_EMOTIONS.iter().map(|e| format!("{e}_intensity")))
            .chain(["valence", "arousal", "dominance"].map(String::from))
            .collect();
        ["mean", "max"]
            .iter()
            .flat_map(|pool| word.iter().map(move |w| format!("{pool}_{w}")))
            .collect()
    }
}
