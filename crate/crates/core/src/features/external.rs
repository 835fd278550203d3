use std::collections::HashMap;
use std::path::Path;

use serde::Deserialize;

use super::{FeatureVector, Featurizer};
use crate::error::{Error, Result};

/// Sentence vectors computed elsewhere (e.g. by an emoji or transformer
/// encoder), keyed by instance id.
#[derive(Debug, Clone)]
pub struct ExternalFeaturizer {
    dim: usize,
    vectors: HashMap<String, Vec<f64>>,
}

#[derive(Deserialize)]
struct Row {
    id: String,
    vec: Vec<f64>,
}

impl ExternalFeaturizer {
    pub const NAME: &'static str = "external";

    pub fn from_vectors(vectors: HashMap<String, Vec<f64>>) -> Result<Self> {
        let dim = vectors
            .values()
            .next()
            .map(Vec::len)
            .ok_or(Error::Empty("external vector table"))?;
        for (id, v) in &vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument(format!("non-finite value in vector `{id}`")));
            }
        }
        Ok(Self { dim, vectors })
    }

    /// Reads `{"id": "...", "vec": [...]}` JSON lines.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut vectors = HashMap::new();
        let mut dim = None;
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                message,
            };
            let row: Row = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
            if row.vec.iter().any(|x| !x.is_finite()) {
                return Err(err(format!("non-finite value in vector `{}`", row.id)));
            }
            if *dim.get_or_insert(row.vec.len()) != row.vec.len() {
                return Err(err(format!(
                    "vector `{}` has {} values, expected {}",
                    row.id,
                    row.vec.len(),
                    dim.unwrap()
                )));
            }
            vectors.insert(row.id, row.vec);
        }
        Self::from_vectors(vectors)
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

impl Featurizer for ExternalFeaturizer {
    fn name(&self) -> &str {
        Self::NAME
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn featurize(&self, instance_id: &str, _text: &str) -> Result<FeatureVector> {
        let v = self
            .vectors
            .get(instance_id)
            .ok_or_else(|| Error::UnknownId(instance_id.to_string()))?;
        FeatureVector::new(Self::NAME, v.clone())
    }
}
