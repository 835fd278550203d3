//! Serving-side recommendation: a loaded model, its featurizer and the
//! catalog, producing tie-aware top-k responses.

use serde::{Deserialize, Serialize};

use crate::catalog::{FontCatalog, FontId};
use crate::error::{Error, Result};
use crate::eval::topk_with_ties;
use crate::features::Featurizer;
use crate::model::{predict, MlpModel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedFont {
    pub font_id: FontId,
    pub name: String,
    pub css: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecommendResponse {
    pub distribution: Vec<f64>,
    /// Tie-expanded top-k, by score descending then font id ascending.
    pub top: Vec<RankedFont>,
    pub k: usize,
    pub model_id: String,
}

/// Immutable bundle shared by all requests.
pub struct Recommender {
    model: MlpModel,
    catalog: FontCatalog,
    featurizer: Box<dyn Featurizer>,
    model_id: String,
}

impl Recommender {
    pub fn new(model: MlpModel, catalog: FontCatalog, featurizer: Box<dyn Featurizer>) -> Result<Self> {
        if model.out_dim() != catalog.len() {
            return Err(Error::DimensionMismatch {
                expected: catalog.len(),
                actual: model.out_dim(),
            });
        }
        if model.featurizer_name() != featurizer.name() {
            return Err(Error::FeaturizerMismatch {
                expected: model.featurizer_name().to_string(),
                actual: featurizer.name().to_string(),
            });
        }
        if model.in_dim() != featurizer.dim() {
            return Err(Error::DimensionMismatch {
                expected: model.in_dim(),
                actual: featurizer.dim(),
            });
        }
        let model_id = model.fingerprint();
        Ok(Self {
            model,
            catalog,
            featurizer,
            model_id,
        })
    }

    pub fn model_id(&self) -> &str {
        &self.model_id
    }

    pub fn catalog(&self) -> &FontCatalog {
        &self.catalog
    }

    pub fn font_count(&self) -> usize {
        self.catalog.len()
    }

    pub fn recommend(&self, text: &str, k: usize) -> Result<RecommendResponse> {
        if text.trim().is_empty() {
            return Err(Error::Empty("text"));
        }
        let dist = predict(&self.model, self.featurizer.as_ref(), text)?;
        let chosen = topk_with_ties(dist.probs(), k)?;
        let mut top: Vec<RankedFont> = chosen
            .into_iter()
            .map(|id| {
                let font = self.catalog.get(id).expect("model output matches catalog");
                RankedFont {
                    font_id: id,
                    name: font.name.clone(),
                    css: font.css.clone(),
                    score: dist.get(id),
                }
            })
            .collect();
        top.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.font_id.cmp(&b.font_id)));
        Ok(RecommendResponse {
            distribution: dist.into_vec(),
            top,
            k,
            model_id: self.model_id.clone(),
        })
    }
}
