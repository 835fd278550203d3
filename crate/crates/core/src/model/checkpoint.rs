use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::mlp::MlpModel;
use crate::error::{Error, Result};

pub const CHECKPOINT_VERSION: u32 = 1;

/// On-disk model: versioned JSON with row-major nested matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub version: u32,
    pub featurizer: String,
    /// `[in_dim, hidden_dim, out_dim]`.
    pub dims: [usize; 3],
    #[serde(rename = "W1")]
    pub w1: Vec<Vec<f64>>,
    pub b1: Vec<f64>,
    #[serde(rename = "W2")]
    pub w2: Vec<Vec<f64>>,
    pub b2: Vec<f64>,
}

fn rows(flat: &[f64], cols: usize) -> Vec<Vec<f64>> {
    flat.chunks(cols).map(<[f64]>::to_vec).collect()
}

impl From<&MlpModel> for Checkpoint {
    fn from(model: &MlpModel) -> Self {
        Self {
            version: CHECKPOINT_VERSION,
            featurizer: model.featurizer_name().to_string(),
            dims: [model.in_dim(), model.hidden_dim(), model.out_dim()],
            w1: rows(model.w1(), model.in_dim()),
            b1: model.b1().to_vec(),
            w2: rows(model.w2(), model.hidden_dim()),
            b2: model.b2().to_vec(),
        }
    }
}

impl TryFrom<Checkpoint> for MlpModel {
    type Error = Error;

    fn try_from(ckpt: Checkpoint) -> Result<Self> {
        if ckpt.version != CHECKPOINT_VERSION {
            return Err(Error::UnsupportedVersion(ckpt.version));
        }
        let [in_dim, hidden_dim, out_dim] = ckpt.dims;
        let check_matrix = |name: &str, m: &[Vec<f64>], r: usize, c: usize| {
            if m.len() != r || m.iter().any(|row| row.len() != c) {
                return Err(Error::InvalidCheckpoint(format!("{name} must be {r}x{c}")));
            }
            Ok(())
        };
        check_matrix("W1", &ckpt.w1, hidden_dim, in_dim)?;
        check_matrix("W2", &ckpt.w2, out_dim, hidden_dim)?;
        if ckpt.b1.len() != hidden_dim || ckpt.b2.len() != out_dim {
            return Err(Error::InvalidCheckpoint("bias length does not match dims".into()));
        }
        let params: Vec<f64> = ckpt
            .w1
            .into_iter()
            .flatten()
            .chain(ckpt.b1)
            .chain(ckpt.w2.into_iter().flatten())
            .chain(ckpt.b2)
            .collect();
        MlpModel::from_parts(in_dim, hidden_dim, out_dim, params, ckpt.featurizer)
            .map_err(|e| Error::InvalidCheckpoint(e.to_string()))
    }
}

impl MlpModel {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&Checkpoint::from(self)).expect("checkpoint serializes")
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let ckpt: Checkpoint = serde_json::from_str(json)?;
        ckpt.try_into()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let json = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&json)
    }

    /// Short content hash of the checkpoint, stable across save/load.
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.to_json().as_bytes());
        digest[..6].iter().map(|b| format!("{b:02x}")).collect()
    }
}
