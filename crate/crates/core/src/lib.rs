//! Font recommendation from short text via label distribution learning.
//!
//! Crowd annotators rank their top three fonts for each text. Those
//! rankings become a probability distribution over the font catalog, and a
//! small two-layer network learns to predict that distribution from text
//! features (affect lexicons, pretrained word vectors, or externally
//! computed sentence vectors) by minimizing KL divergence with Adam.
//!
//! Evaluation is tie-aware: the top-k fonts of both the truth and the
//! prediction are expanded to include every font tied at the k-th value.
//!
//! Module map:
//!
//! - [`corpus`]: load, filter, aggregate and split annotated data
//! - [`features`]: tokenization, lexicons and featurizers
//! - [`model`]: the predictor, its loss, gradients, optimizer and training
//! - [`eval`]: font recall, weighted F1, baselines and significance
//! - [`augment`]: back-translation oversampling and undersampling
//! - [`analysis`]: font/feature correlations and corpus statistics
//! - [`recommend`]: serving-side top-k responses

pub mod analysis;
pub mod augment;
pub mod catalog;
pub mod corpus;
pub mod distribution;
pub mod error;
pub mod eval;
pub mod features;
pub mod model;
pub mod recommend;

pub use catalog::{Font, FontCatalog, FontId};
pub use corpus::{AnnotatorRanking, LabeledInstance, RawInstance, SplitCorpus};
pub use distribution::LabelDistribution;
pub use error::{Error, Result};
pub use eval::EvalReport;
pub use features::{FeatureVector, Featurizer};
pub use model::{MlpModel, TrainConfig};
pub use recommend::{RecommendResponse, Recommender};
