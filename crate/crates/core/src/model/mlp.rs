use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distribution::LabelDistribution;
use crate::error::{Error, Result};
use crate::features::FeatureVector;

/// Two dense layers with a ReLU between them and a softmax on top.
///
/// All parameters live in one flat buffer laid out as
/// `[W1 (hidden×in, row-major) | b1 | W2 (out×hidden, row-major) | b2]`
/// so the optimizer can treat them as a single vector.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    in_dim: usize,
    hidden_dim: usize,
    out_dim: usize,
    params: Vec<f64>,
    featurizer_name: String,
}

/// Gradient buffer with the same layout as [`MlpModel`] parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    layout: Layout,
    values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Layout {
    in_dim: usize,
    hidden_dim: usize,
    out_dim: usize,
}

impl Layout {
    fn w1(&self) -> std::ops::Range<usize> {
        0..self.hidden_dim * self.in_dim
    }

    fn b1(&self) -> std::ops::Range<usize> {
        let start = self.w1().end;
        start..start + self.hidden_dim
    }

    fn w2(&self) -> std::ops::Range<usize> {
        let start = self.b1().end;
        start..start + self.out_dim * self.hidden_dim
    }

    fn b2(&self) -> std::ops::Range<usize> {
        let start = self.w2().end;
        start..start + self.out_dim
    }

    fn len(&self) -> usize {
        self.b2().end
    }
}

/// Intermediate values of one forward pass.
pub(crate) struct Activations {
    hidden: Vec<f64>,
    pub(crate) probs: Vec<f64>,
}

/// Numerically stable softmax.
pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|z| (z - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

impl MlpModel {
    /// Glorot-uniform weights, zero biases. Deterministic per seed.
    pub fn init(in_dim: usize, hidden_dim: usize, out_dim: usize, seed: u64) -> Result<Self> {
        let mut model = Self::zeros(in_dim, hidden_dim, out_dim)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let layout = model.layout();
        let bound1 = (6.0 / (in_dim + hidden_dim) as f64).sqrt();
        for w in &mut model.params[layout.w1()] {
            *w = rng.random_range(-bound1..=bound1);
        }
        let bound2 = (6.0 / (hidden_dim + out_dim) as f64).sqrt();
        for w in &mut model.params[layout.w2()] {
            *w = rng.random_range(-bound2..=bound2);
        }
        Ok(model)
    }

    /// All-zero parameters; predicts the uniform distribution.
    pub fn zeros(in_dim: usize, hidden_dim: usize, out_dim: usize) -> Result<Self> {
        if in_dim == 0 || hidden_dim == 0 || out_dim == 0 {
            return Err(Error::InvalidArgument(format!(
                "model dims must be positive, got ({in_dim}, {hidden_dim}, {out_dim})"
            )));
        }
        let layout = Layout {
            in_dim,
            hidden_dim,
            out_dim,
        };
        Ok(Self {
            in_dim,
            hidden_dim,
            out_dim,
            params: vec![0.0; layout.len()],
            featurizer_name: String::new(),
        })
    }

    pub(crate) fn from_parts(
        in_dim: usize,
        hidden_dim: usize,
        out_dim: usize,
        params: Vec<f64>,
        featurizer_name: String,
    ) -> Result<Self> {
        let mut model = Self::zeros(in_dim, hidden_dim, out_dim)?;
        if params.len() != model.params.len() {
            return Err(Error::DimensionMismatch {
                expected: model.params.len(),
                actual: params.len(),
            });
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidArgument("non-finite parameter".into()));
        }
        model.params = params;
        model.featurizer_name = featurizer_name;
        Ok(model)
    }

    pub fn with_featurizer(mut self, name: impl Into<String>) -> Self {
        self.featurizer_name = name.into();
        self
    }

    fn layout(&self) -> Layout {
        Layout {
            in_dim: self.in_dim,
            hidden_dim: self.hidden_dim,
            out_dim: self.out_dim,
        }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn hidden_dim(&self) -> usize {
        self.hidden_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn featurizer_name(&self) -> &str {
        &self.featurizer_name
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn w1(&self) -> &[f64] {
        &self.params[self.layout().w1()]
    }

    pub fn b1(&self) -> &[f64] {
        &self.params[self.layout().b1()]
    }

    pub fn w2(&self) -> &[f64] {
        &self.params[self.layout().w2()]
    }

    pub fn b2(&self) -> &[f64] {
        &self.params[self.layout().b2()]
    }

    pub(crate) fn activations(&self, x: &[f64]) -> Result<Activations> {
        if x.len() != self.in_dim {
            return Err(Error::DimensionMismatch {
                expected: self.in_dim,
                actual: x.len(),
            });
        }
        let (w1, b1, w2, b2) = (self.w1(), self.b1(), self.w2(), self.b2());
        let hidden: Vec<f64> = (0..self.hidden_dim)
            .map(|j| {
                let row = &w1[j * self.in_dim..(j + 1) * self.in_dim];
                let pre = b1[j] + row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>();
                pre.max(0.0)
            })
            .collect();
        let logits: Vec<f64> = (0..self.out_dim)
            .map(|k| {
                let row = &w2[k * self.hidden_dim..(k + 1) * self.hidden_dim];
                b2[k] + row.iter().zip(&hidden).map(|(w, h)| w * h).sum::<f64>()
            })
            .collect();
        Ok(Activations {
            hidden,
            probs: softmax(&logits),
        })
    }

    /// Predicted distribution for raw feature values.
    pub fn forward_values(&self, x: &[f64]) -> Result<LabelDistribution> {
        LabelDistribution::new(self.activations(x)?.probs)
    }

    pub fn forward(&self, x: &FeatureVector) -> Result<LabelDistribution> {
        self.forward_values(&x.values)
    }

    /// Gradient of `kl_div(target, forward(x))` with respect to every
    /// parameter.
    pub fn backward(&self, x: &[f64], target: &LabelDistribution) -> Result<Gradients> {
        let mut grads = Gradients::zeros_like(self);
        self.accumulate_gradients(x, target, 1.0, &mut grads)?;
        Ok(grads)
    }

    /// Adds `scale` times the gradient for one example into `grads`.
    pub fn accumulate_gradients(
        &self,
        x: &[f64],
        target: &LabelDistribution,
        scale: f64,
        grads: &mut Gradients,
    ) -> Result<()> {
        if target.len() != self.out_dim {
            return Err(Error::DimensionMismatch {
                expected: self.out_dim,
                actual: target.len(),
            });
        }
        if grads.layout != self.layout() {
            return Err(Error::InvalidArgument("gradient buffer shape mismatch".into()));
        }
        let acts = self.activations(x)?;
        let layout = self.layout();
        let (h_dim, in_dim) = (self.hidden_dim, self.in_dim);

        // d(KL)/d(logits) = p - t, since the target sums to one.
        let dz: Vec<f64> = acts
            .probs
            .iter()
            .zip(target.probs())
            .map(|(p, t)| scale * (p - t))
            .collect();

        let w2 = self.w2();
        let mut dh = vec![0.0; h_dim];
        {
            let g = &mut grads.values[layout.w2()];
            for (k, &d) in dz.iter().enumerate() {
                let row = &w2[k * h_dim..(k + 1) * h_dim];
                for j in 0..h_dim {
                    g[k * h_dim + j] += d * acts.hidden[j];
                    dh[j] += d * row[j];
                }
            }
        }
        for (g, d) in grads.values[layout.b2()].iter_mut().zip(&dz) {
            *g += d;
        }

        // ReLU mask: the hidden unit is active iff its output is positive.
        for (d, h) in dh.iter_mut().zip(&acts.hidden) {
            if *h <= 0.0 {
                *d = 0.0;
            }
        }
        {
            let g = &mut grads.values[layout.w1()];
            for (j, &d) in dh.iter().enumerate() {
                if d == 0.0 {
                    continue;
                }
                for (i, xi) in x.iter().enumerate() {
                    g[j * in_dim + i] += d * xi;
                }
            }
        }
        for (g, d) in grads.values[layout.b1()].iter_mut().zip(&dh) {
            *g += d;
        }
        Ok(())
    }
}

impl Gradients {
    pub fn zeros_like(model: &MlpModel) -> Self {
        let layout = model.layout();
        Self {
            layout,
            values: vec![0.0; layout.len()],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn w1(&self) -> &[f64] {
        &self.values[self.layout.w1()]
    }

    pub fn b1(&self) -> &[f64] {
        &self.values[self.layout.b1()]
    }

    pub fn w2(&self) -> &[f64] {
        &self.values[self.layout.w2()]
    }

    pub fn b2(&self) -> &[f64] {
        &self.values[self.layout.b2()]
    }

    pub fn clear(&mut self) {
        self.values.fill(0.0);
    }
}
