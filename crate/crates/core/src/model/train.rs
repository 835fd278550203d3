use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::adam::{AdamConfig, AdamState};
use super::loss::kl_div;
use super::mlp::{Gradients, MlpModel};
use crate::corpus::{LabeledInstance, SplitCorpus};
use crate::distribution::LabelDistribution;
use crate::error::{Error, Result};
use crate::eval::f1_weighted_topk;
use crate::features::Featurizer;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub lr: f64,
    pub epochs: usize,
    pub batch_size: usize,
    /// One independently initialized run per seed.
    pub seeds: Vec<u64>,
    pub hidden_dim: usize,
    /// Reshuffle the training set every epoch.
    pub shuffle: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            lr: 1e-3,
            epochs: 100,
            batch_size: 16,
            seeds: vec![0, 1, 2, 3],
            hidden_dim: 64,
            shuffle: true,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return Err(Error::InvalidArgument(format!("lr must be positive, got {}", self.lr)));
        }
        if self.epochs == 0 || self.batch_size == 0 || self.hidden_dim == 0 {
            return Err(Error::InvalidArgument(
                "epochs, batch_size and hidden_dim must be at least 1".into(),
            ));
        }
        if self.seeds.is_empty() {
            return Err(Error::InvalidArgument("at least one seed is required".into()));
        }
        Ok(())
    }
}

/// Precomputed features paired with targets.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub features: Vec<Vec<f64>>,
    pub targets: Vec<LabelDistribution>,
}

impl Dataset {
    pub fn featurize(instances: &[LabeledInstance], featurizer: &dyn Featurizer) -> Result<Self> {
        let mut features = Vec::with_capacity(instances.len());
        for instance in instances {
            let fv = featurizer.featurize(&instance.instance_id, &instance.text)?;
            if fv.len() != featurizer.dim() {
                return Err(Error::DimensionMismatch {
                    expected: featurizer.dim(),
                    actual: fv.len(),
                });
            }
            features.push(fv.values);
        }
        Ok(Self {
            features,
            targets: instances.iter().map(|i| i.target.clone()).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    /// Mean KL divergence of `model` over the dataset.
    pub fn mean_loss(&self, model: &MlpModel) -> Result<f64> {
        let mut total = 0.0;
        for (x, t) in self.features.iter().zip(&self.targets) {
            total += kl_div(t, &model.forward_values(x)?)?;
        }
        Ok(total / self.len() as f64)
    }

    /// Weighted F1 at k = 1, as a percentage.
    pub fn f1_top1(&self, model: &MlpModel) -> Result<f64> {
        let preds = self
            .features
            .iter()
            .map(|x| model.forward_values(x))
            .collect::<Result<Vec<_>>>()?;
        f1_weighted_topk(&self.targets, &preds, 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochLog {
    pub epoch: usize,
    /// Mean KL over the training set after the epoch's updates.
    pub train_loss: f64,
    pub dev_f1_top1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedRun {
    pub seed: u64,
    /// Snapshot from the selected epoch.
    pub model: MlpModel,
    pub best_epoch: usize,
    pub best_dev_f1_top1: Option<f64>,
    pub log: Vec<EpochLog>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutcome {
    pub runs: Vec<SeedRun>,
    /// Index into `runs` of the run with the best dev F@1.
    pub best_run: usize,
}

impl TrainOutcome {
    pub fn best(&self) -> &SeedRun {
        &self.runs[self.best_run]
    }
}

/// Featurizes the split and trains one model per seed.
pub fn train(split: &SplitCorpus, featurizer: &dyn Featurizer, config: &TrainConfig) -> Result<TrainOutcome> {
    if split.train.is_empty() {
        return Err(Error::Empty("training set"));
    }
    let train_set = Dataset::featurize(&split.train, featurizer)?;
    let dev_set = Dataset::featurize(&split.dev, featurizer)?;
    train_dataset(&train_set, &dev_set, featurizer.name(), featurizer.dim(), config)
}

/// Trains on precomputed features.
///
/// Each seed runs `epochs` passes of mini-batch Adam on the mean KL loss.
/// After every epoch the dev F@1 is measured and the parameters with the
/// best score are kept, earlier epochs winning ties. Without a dev set the
/// final epoch is kept.
pub fn train_dataset(
    train: &Dataset,
    dev: &Dataset,
    featurizer_name: &str,
    in_dim: usize,
    config: &TrainConfig,
) -> Result<TrainOutcome> {
    config.validate()?;
    if train.is_empty() {
        return Err(Error::Empty("training set"));
    }
    if let Some(x) = train.features.iter().chain(&dev.features).find(|x| x.len() != in_dim) {
        return Err(Error::DimensionMismatch {
            expected: in_dim,
            actual: x.len(),
        });
    }
    let out_dim = train.targets[0].len();

    let mut runs = Vec::with_capacity(config.seeds.len());
    for &seed in &config.seeds {
        runs.push(train_seed(train, dev, featurizer_name, in_dim, out_dim, seed, config)?);
    }
    let mut best_run = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.best_dev_f1_top1 > runs[best_run].best_dev_f1_top1 {
            best_run = i;
        }
    }
    Ok(TrainOutcome { runs, best_run })
}

fn train_seed(
    train: &Dataset,
    dev: &Dataset,
    featurizer_name: &str,
    in_dim: usize,
    out_dim: usize,
    seed: u64,
    config: &TrainConfig,
) -> Result<SeedRun> {
    let mut model = MlpModel::init(in_dim, config.hidden_dim, out_dim, seed)?.with_featurizer(featurizer_name);
    let mut adam = AdamState::new(
        model.params().len(),
        AdamConfig {
            lr: config.lr,
            ..AdamConfig::default()
        },
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut grads = Gradients::zeros_like(&model);

    let mut log = Vec::with_capacity(config.epochs);
    let mut best: Option<(usize, Option<f64>, MlpModel)> = None;
    for epoch in 1..=config.epochs {
        if config.shuffle {
            order.shuffle(&mut rng);
        }
        for batch in order.chunks(config.batch_size) {
            grads.clear();
            let scale = 1.0 / batch.len() as f64;
            for &i in batch {
                model.accumulate_gradients(&train.features[i], &train.targets[i], scale, &mut grads)?;
            }
            adam.step(model.params_mut(), grads.values())?;
        }

        let train_loss = train.mean_loss(&model)?;
        let dev_f1 = if dev.is_empty() {
            None
        } else {
            Some(dev.f1_top1(&model)?)
        };
        log.push(EpochLog {
            epoch,
            train_loss,
            dev_f1_top1: dev_f1,
        });
        let improved = match &best {
            None => true,
            Some((_, best_f1, _)) => match dev_f1 {
                Some(f) => best_f1.is_none_or(|b| f > b),
                None => true,
            },
        };
        if improved {
            best = Some((epoch, dev_f1, model.clone()));
        }
    }
    let (best_epoch, best_dev_f1_top1, model) = best.expect("epochs >= 1");
    Ok(SeedRun {
        seed,
        model,
        best_epoch,
        best_dev_f1_top1,
        log,
    })
}
