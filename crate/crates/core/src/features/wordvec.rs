use std::collections::HashMap;
use std::path::Path;

use super::lexicon::Lexicon;
use super::text::tokenize;
use super::{FeatureVector, Featurizer};
use crate::error::{Error, Result};

/// Pretrained word vectors, all of the same dimension.
#[derive(Debug, Clone)]
pub struct EmbeddingTable {
    dim: usize,
    entries: HashMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            entries: HashMap::new(),
        }
    }

    pub fn insert(&mut self, token: impl Into<String>, vector: Vec<f64>) -> Result<()> {
        if vector.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: vector.len(),
            });
        }
        self.entries.insert(token.into(), vector);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn vector(&self, token: &str) -> Option<&[f64]> {
        self.entries.get(token).map(Vec::as_slice)
    }

    /// Mean of in-vocabulary token vectors; zero when none are known.
    pub fn mean_pool(&self, tokens: &[String]) -> Vec<f64> {
        let mut sum = vec![0.0; self.dim];
        let mut hits = 0usize;
        for v in tokens.iter().filter_map(|t| self.vector(t)) {
            sum.iter_mut().zip(v).for_each(|(s, x)| *s += x);
            hits += 1;
        }
        if hits > 0 {
            sum.iter_mut().for_each(|s| *s /= hits as f64);
        }
        sum
    }
}

impl Lexicon for EmbeddingTable {
    type Entry = Vec<f64>;

    fn get(&self, word: &str) -> Option<Vec<f64>> {
        self.vector(word).map(<[f64]>::to_vec)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RejectedLine {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct LoadedEmbeddings {
    pub table: EmbeddingTable,
    pub rejected: Vec<RejectedLine>,
}

/// Reads the plain-text vector format: `token v1 v2 ... vD` per line. An
/// optional `count dim` header line is skipped.
///
/// The dimension comes from `expected_dim` or else the first vector line.
/// Lines of a different arity or with non-finite values are rejected and
/// reported; it is an error if `expected_dim` disagrees with the first
/// vector line or if no line is usable.
pub fn load_embeddings(path: impl AsRef<Path>, expected_dim: Option<usize>) -> Result<LoadedEmbeddings> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut table: Option<EmbeddingTable> = None;
    let mut rejected = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let mut parts = line.split_whitespace();
        let Some(token) = parts.next() else { continue };
        let fields: Vec<&str> = parts.collect();
        if line_no == 1 && fields.len() == 1 && token.parse::<usize>().is_ok() && fields[0].parse::<usize>().is_ok() {
            continue;
        }
        let values: std::result::Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        let values = match values {
            Ok(v) if v.iter().all(|x| x.is_finite()) => v,
            _ => {
                rejected.push(RejectedLine {
                    line: line_no,
                    message: "values must be finite numbers".into(),
                });
                continue;
            }
        };
        let table = match &mut table {
            Some(t) => t,
            None => {
                if let Some(expected) = expected_dim {
                    if expected != values.len() {
                        return Err(Error::DimensionMismatch {
                            expected,
                            actual: values.len(),
                        });
                    }
                }
                table.insert(EmbeddingTable::new(values.len()))
            }
        };
        if values.len() != table.dim {
            rejected.push(RejectedLine {
                line: line_no,
                message: format!("expected {} values, found {}", table.dim, values.len()),
            });
            continue;
        }
        table.entries.insert(token.to_string(), values);
    }

    let table = table.filter(|t| t.dim > 0).ok_or_else(|| Error::Parse {
        path: path.to_path_buf(),
        line: 0,
        message: "no usable vectors".into(),
    })?;
    Ok(LoadedEmbeddings { table, rejected })
}

/// Mean-pooled word vectors.
#[derive(Debug, Clone)]
pub struct WordVecFeaturizer {
    table: EmbeddingTable,
}

impl WordVecFeaturizer {
    pub const NAME: &'static str = "wordvec";

    pub fn new(table: EmbeddingTable) -> Self {
        Self { table }
    }

    pub fn table(&self) -> &EmbeddingTable {
        &self.table
    }
}

impl Featurizer for WordVecFeaturizer {
    fn name(&self) -> &str {
        Self::NAME
    }

    fn dim(&self) -> usize {
        self.table.dim
    }

    fn featurize(&self, _instance_id: &str, text: &str) -> Result<FeatureVector> {
        FeatureVector::new(Self::NAME, self.table.mean_pool(&tokenize(text)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn tmp(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    fn table() -> EmbeddingTable {
        let mut t = EmbeddingTable::new(3);
        t.insert("up", vec![1.0, 2.0, -3.0]).unwrap();
        t.insert("down", vec![-1.0, -2.0, 3.0]).unwrap();
        t.insert("side", vec![0.5, 0.0, 0.0]).unwrap();
        t
    }

    fn toks(words: &[&str]) -> Vec<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn pooling_examples() {
        let t = table();
        assert_eq!(t.mean_pool(&toks(&["up"])), [1.0, 2.0, -3.0]);
        assert_eq!(t.mean_pool(&toks(&["up", "down"])), [0.0, 0.0, 0.0]);
        assert_eq!(t.mean_pool(&toks(&["nope", "never"])), [0.0, 0.0, 0.0]);
        assert_eq!(t.mean_pool(&[]), [0.0, 0.0, 0.0]);
        // OOV tokens do not dilute the mean
        assert_eq!(t.mean_pool(&toks(&["side", "nope"])), [0.5, 0.0, 0.0]);
    }

    #[test]
    fn loads_text_vectors() {
        let f = tmp("a 1 2 3 4 5\nb 0 0 0 0 0\nc -1 -1 -1 -1 -1\n");
        let loaded = load_embeddings(f.path(), None).unwrap();
        assert_eq!(loaded.table.dim(), 5);
        assert_eq!(loaded.table.len(), 3);
        assert!(loaded.rejected.is_empty());
    }

    #[test]
    fn rejects_wrong_arity_line() {
        let f = tmp("a 1 2 3 4 5\nbad 1 2 3 4\nc 1 1 1 1 1\n");
        let loaded = load_embeddings(f.path(), Some(5)).unwrap();
        assert_eq!(loaded.table.len(), 2);
        assert_eq!(loaded.rejected.len(), 1);
        assert_eq!(loaded.rejected[0].line, 2);
    }

    #[test]
    fn skips_header_and_rejects_non_finite() {
        let f = tmp("2 3\na 1 2 3\nb nan 1 1\n");
        let loaded = load_embeddings(f.path(), None).unwrap();
        assert_eq!(loaded.table.dim(), 3);
        assert_eq!(
            loaded.rejected,
            vec![RejectedLine {
                line: 3,
                message: "values must be finite numbers".into()
            }]
        );
    }

    #[test]
    fn expected_dim_mismatch() {
        let line = format!("a {}\n", vec!["0.1"; 100].join(" "));
        let f = tmp(&line);
        assert!(matches!(
            load_embeddings(f.path(), Some(50)),
            Err(Error::DimensionMismatch {
                expected: 50,
                actual: 100
            })
        ));
        assert!(load_embeddings(tmp("").path(), None).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn mean_norm_bounded(
                vecs in prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 4), 1..6),
                picks in prop::collection::vec(0usize..6, 0..10),
            ) {
                let mut t = EmbeddingTable::new(4);
                for (i, v) in vecs.iter().enumerate() {
                    t.insert(format!("w{i}"), v.clone()).unwrap();
                }
                let tokens: Vec<String> = picks.iter().map(|p| format!("w{p}")).collect();
                let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
                let pooled = t.mean_pool(&tokens);
                let max_norm = vecs.iter().map(|v| norm(v)).fold(0.0, f64::max);
                prop_assert!(norm(&pooled) <= max_norm + 1e-9);
            }
        }
    }
}
