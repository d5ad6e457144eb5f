//! Self-describing JSON checkpoints.
//!
//! Floats are written in shortest round-trip form and parsed exactly, so
//! save, load, save reproduces the same bytes.

use std::borrow::Cow;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::params::{Params, TENSOR_NAMES};
use super::vocab::Vocab;
use super::{Model, TrainConfig};
use crate::error::{Error, Result};
use crate::preprocess::Pipeline;

pub const CHECKPOINT_FORMAT: &str = "gutcheck-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Tensor<'a> {
    name: Cow<'a, str>,
    shape: Vec<usize>,
    data: Cow<'a, [f64]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VocabFile<'a> {
    buckets: usize,
    tokens: Cow<'a, [String]>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CheckpointFile<'a> {
    format: Cow<'a, str>,
    version: u32,
    config: TrainConfig,
    pipeline: Pipeline,
    vocab: VocabFile<'a>,
    tensors: Vec<Tensor<'a>>,
}

/// Only `format` and `version` are read first, so a future layout still
/// produces a clear version error instead of a field mismatch.
#[derive(Deserialize)]
struct Header {
    format: String,
    version: u32,
}

impl Model {
    pub fn to_json(&self) -> Result<Vec<u8>> {
        let shapes = self.params.shapes();
        let file = CheckpointFile {
            format: Cow::Borrowed(CHECKPOINT_FORMAT),
            version: CHECKPOINT_VERSION,
            config: self.config.clone(),
            pipeline: self.pipeline.clone(),
            vocab: VocabFile {
                buckets: self.vocab.buckets(),
                tokens: Cow::Borrowed(self.vocab.tokens()),
            },
            tensors: TENSOR_NAMES
                .iter()
                .zip(shapes)
                .zip(self.params.slices())
                .map(|((name, shape), data)| Tensor {
                    name: Cow::Borrowed(name),
                    shape,
                    data: Cow::Borrowed(data),
                })
                .collect(),
        };
        let mut out = serde_json::to_vec(&file)?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn from_json(bytes: &[u8]) -> Result<Model> {
        let header: Header = serde_json::from_slice(bytes)?;
        if header.format != CHECKPOINT_FORMAT {
            return Err(Error::Checkpoint(format!(
                "not a checkpoint (format {:?})",
                header.format
            )));
        }
        if header.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!(
                "unsupported version {} (expected {CHECKPOINT_VERSION})",
                header.version
            )));
        }
        let file: CheckpointFile = serde_json::from_slice(bytes)?;
        let config = file.config;
        config.validate()?;
        let vocab = Vocab::from_tokens(file.vocab.tokens.into_owned(), file.vocab.buckets);
        let dims = super::Dims {
            rows: vocab.rows(),
            embed: config.embed_dim,
            hidden: config.hidden_dim,
            attn: config.attn_dim,
            emo: config.emo_dim,
        };
        let mut params = Params::zeros(dims);
        if file.tensors.len() != TENSOR_NAMES.len() {
            return Err(Error::Checkpoint(format!(
                "expected {} tensors, found {}",
                TENSOR_NAMES.len(),
                file.tensors.len()
            )));
        }
        let shapes = params.shapes();
        for (((tensor, name), shape), slot) in file
            .tensors
            .iter()
            .zip(TENSOR_NAMES)
            .zip(shapes)
            .zip(params.slices_mut())
        {
            if tensor.name != name {
                return Err(Error::Checkpoint(format!(
                    "expected tensor {name:?}, found {:?}",
                    tensor.name
                )));
            }
            if tensor.shape != shape || tensor.data.len() != slot.len() {
                return Err(Error::Checkpoint(format!(
                    "tensor {name}: shape {:?} with {} values, expected {shape:?}",
                    tensor.shape,
                    tensor.data.len()
                )));
            }
            slot.copy_from_slice(&tensor.data);
        }
        if !params.is_finite() {
            return Err(Error::Checkpoint("non-finite parameter values".into()));
        }
        Ok(Model {
            config,
            pipeline: file.pipeline,
            vocab,
            params,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Model> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&bytes)
    }
}
