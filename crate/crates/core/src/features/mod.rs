//! Text featurizers producing fixed-length vectors for the predictor.

mod external;
mod lexicon;
mod nrc;
mod text;
mod wordvec;

pub use external::ExternalFeaturizer;
pub use lexicon::{
    lookup_with_fallback, EmotionLexicon, IntensityLexicon, Lexicon, SynonymTable, VadLexicon, EMOTIONS,
    INTENSITY_EMOTIONS,
};
pub use nrc::{NrcFeaturizer, NrcLexicons, NRC_DIM, WORD_DIM};
pub use text::{tokenize, Stemmer, SuffixStemmer};
pub use wordvec::{load_embeddings, EmbeddingTable, LoadedEmbeddings, RejectedLine, WordVecFeaturizer};

use crate::error::{Error, Result};

/// Output of a featurizer. Length matches the featurizer's dimension and
/// every value is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub featurizer_name: String,
    pub values: Vec<f64>,
}

impl FeatureVector {
    pub fn new(featurizer_name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite feature value {v}")));
        }
        Ok(Self {
            featurizer_name: featurizer_name.into(),
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Turns an instance into a feature vector.
///
/// `instance_id` is only consulted by featurizers backed by precomputed
/// vectors; text-based featurizers ignore it.
pub trait Featurizer: Send + Sync {
    fn name(&self) -> &str;

    fn dim(&self) -> usize;

    fn featurize(&self, instance_id: &str, text: &str) -> Result<FeatureVector>;

    /// Column names for reports; `d0`, `d1`, ... unless overridden.
    fn dim_labels(&self) -> Vec<String> {
        (0..self.dim()).map(|i| format!("d{i}")).collect()
    }
}

impl<F: Featurizer + ?Sized> Featurizer for Box<F> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn featurize(&self, instance_id: &str, text: &str) -> Result<FeatureVector> {
        (**self).featurize(instance_id, text)
    }

    fn dim_labels(&self) -> Vec<String> {
        (**self).dim_labels()
    }
}

impl<F: Featurizer + ?Sized> Featurizer for std::sync::Arc<F> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn featurize(&self, instance_id: &str, text: &str) -> Result<FeatureVector> {
        (**self).featurize(instance_id, text)
    }

    fn dim_labels(&self) -> Vec<String> {
        (**self).dim_labels()
    }
}
