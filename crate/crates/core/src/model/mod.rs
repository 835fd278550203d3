//! Two-layer softmax predictor trained with KL divergence and Adam.

mod adam;
mod checkpoint;
mod gradcheck;
mod loss;
mod mlp;
mod train;

pub use adam::{AdamConfig, AdamState};
pub use checkpoint::{Checkpoint, CHECKPOINT_VERSION};
pub use gradcheck::{max_gradient_error, numeric_gradient, relative_error};
pub use loss::{kl_div, PROB_FLOOR};
pub use mlp::{softmax, Gradients, MlpModel};
pub use train::{train, train_dataset, Dataset, EpochLog, SeedRun, TrainConfig, TrainOutcome};

use crate::corpus::LabeledInstance;
use crate::distribution::LabelDistribution;
use crate::error::{Error, Result};
use crate::eval::Predictor;
use crate::features::Featurizer;

/// Featurizes one instance and runs the model on it.
pub fn predict_instance(
    model: &MlpModel,
    featurizer: &dyn Featurizer,
    instance_id: &str,
    text: &str,
) -> Result<LabelDistribution> {
    if featurizer.name() != model.featurizer_name() {
        return Err(Error::FeaturizerMismatch {
            expected: model.featurizer_name().to_string(),
            actual: featurizer.name().to_string(),
        });
    }
    model.forward(&featurizer.featurize(instance_id, text)?)
}

/// Predicted distribution for free text. Featurizers keyed by instance id
/// look the text itself up as the id.
pub fn predict(model: &MlpModel, featurizer: &dyn Featurizer, text: &str) -> Result<LabelDistribution> {
    predict_instance(model, featurizer, text, text)
}

/// A model bound to its featurizer.
pub struct ModelPredictor<'a> {
    pub model: &'a MlpModel,
    pub featurizer: &'a dyn Featurizer,
}

impl Predictor for ModelPredictor<'_> {
    fn predict_instance(&self, instance: &LabeledInstance) -> Result<LabelDistribution> {
        predict_instance(self.model, self.featurizer, &instance.instance_id, &instance.text)
    }
}
