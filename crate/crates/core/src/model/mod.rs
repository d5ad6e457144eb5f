//! The claim/evidence classifier with snippet and emotion attention.
//!
//! Texts are encoded as mean-pooled embedding bags. Each present snippet
//! is fused with the claim as `tanh(W_pair [c; s; c*s] + b_pair)`, and an
//! additive attention layer pools the fused vectors. A second, independent
//! attention layer pools the projected per-snippet emotion vectors. The
//! classifier sees `[evidence pool; emotion pool; claim]`.
//!
//! Forward and backward passes are written out by hand in `f64`; see
//! [`grad_check`] for the finite-difference harness that validates them.

mod checkpoint;
mod gradcheck;
mod network;
mod params;
mod train;
mod vocab;

use std::fmt;
use std::str::FromStr;

use ndarray::ArrayView1;
use serde::{Deserialize, Serialize};

use crate::corpus::{ClaimRecord, VeracityLabel};
use crate::emolex::{featurize_record, AffectLexicon, EmotionMode};
use crate::error::{Error, Result};
use crate::eval::f1_macro;
use crate::preprocess::{run_pipeline_tokens, Pipeline, Resources};

pub use checkpoint::{CHECKPOINT_FORMAT, CHECKPOINT_VERSION};
pub use gradcheck::{grad_check, grad_check_with, GradCheckReport, TensorCheck};
pub use network::{
    attention_pool, backward, encode_text, forward, pair_combine, softmax, Attention, Example,
    Forward,
};
pub use params::{Dims, Params, TENSOR_NAMES};
pub use train::{train, EpochRecord, History, Trained};
pub use vocab::{fnv1a, Vocab};

/// Which inputs the classifier may look at.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputMode {
    /// Snippets are replaced by a single zero vector; no emotion branch.
    ClaimOnly,
    /// The claim vector is zero.
    EvidenceOnly,
    #[default]
    ClaimAndEvidence,
}

impl InputMode {
    pub fn as_str(self) -> &'static str {
        match self {
            InputMode::ClaimOnly => "claim-only",
            InputMode::EvidenceOnly => "evidence-only",
            InputMode::ClaimAndEvidence => "claim-and-evidence",
        }
    }
}

impl FromStr for InputMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "claim-only" | "claim" => Ok(InputMode::ClaimOnly),
            "evidence-only" | "evidence" => Ok(InputMode::EvidenceOnly),
            "claim-and-evidence" | "both" => Ok(InputMode::ClaimAndEvidence),
            other => Err(Error::InvalidArgument(format!(
                "unknown input mode {other:?}"
            ))),
        }
    }
}

impl fmt::Display for InputMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Hyperparameters and switches for one training run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    pub mode: InputMode,
    pub emotion_mode: EmotionMode,
    pub embed_dim: usize,
    /// Hash buckets for tokens missing from the training vocabulary.
    pub oov_buckets: usize,
    pub hidden_dim: usize,
    pub attn_dim: usize,
    pub emo_dim: usize,
    pub l2: f64,
    /// Divide each emotion vector by its snippet's token count.
    pub normalize_emotions: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 1e-3,
            epochs: 30,
            batch_size: 16,
            seed: 0,
            mode: InputMode::ClaimAndEvidence,
            emotion_mode: EmotionMode::None,
            embed_dim: 64,
            oov_buckets: 1024,
            hidden_dim: 64,
            attn_dim: 32,
            emo_dim: 16,
            l2: 1e-5,
            normalize_emotions: false,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidArgument(msg.to_string()));
        if !(self.learning_rate.is_finite() && self.learning_rate >= 0.0) {
            return bad("learning_rate must be a finite, non-negative number");
        }
        if !(self.l2.is_finite() && self.l2 >= 0.0) {
            return bad("l2 must be a finite, non-negative number");
        }
        if self.epochs == 0 || self.batch_size == 0 {
            return bad("epochs and batch_size must be positive");
        }
        if self.embed_dim < 8 {
            return bad("embed_dim must be at least 8");
        }
        if self.hidden_dim == 0 || self.attn_dim == 0 || self.emo_dim == 0 {
            return bad("hidden_dim, attn_dim and emo_dim must be positive");
        }
        Ok(())
    }
}

/// Resources needed to turn a raw record into model input.
#[derive(Clone, Copy, Debug)]
pub struct TextContext<'a> {
    pub resources: &'a Resources,
    /// Required unless the emotion mode is `None`.
    pub lexicon: Option<&'a AffectLexicon>,
}

impl<'a> TextContext<'a> {
    pub fn new(resources: &'a Resources, lexicon: Option<&'a AffectLexicon>) -> Self {
        TextContext { resources, lexicon }
    }
}

/// Lowercase token streams of a record after preprocessing.
#[derive(Clone, Debug)]
pub(crate) struct PreparedText {
    pub claim: Vec<String>,
    pub snippets: Vec<Vec<String>>,
    pub mask: Vec<bool>,
}

pub(crate) fn prepare_text(
    record: &ClaimRecord,
    pipeline: &Pipeline,
    resources: &Resources,
) -> Result<PreparedText> {
    let lower = |text: &str| -> Result<Vec<String>> {
        Ok(run_pipeline_tokens(text, pipeline, resources)?
            .into_iter()
            .map(|t| t.lower)
            .collect())
    };
    Ok(PreparedText {
        claim: lower(&record.claim_text)?,
        snippets: record
            .snippets
            .iter()
            .map(|s| lower(&s.text))
            .collect::<Result<_>>()?,
        mask: record.snippets.iter().map(|s| !s.is_missing()).collect(),
    })
}

pub(crate) fn build_example(
    record: &ClaimRecord,
    text: &PreparedText,
    vocab: &Vocab,
    pipeline: &Pipeline,
    config: &TrainConfig,
    ctx: TextContext<'_>,
) -> Result<Example> {
    let emotions = match (config.emotion_mode, ctx.lexicon) {
        (EmotionMode::None, _) => vec![Default::default(); text.snippets.len()],
        (mode, Some(lex)) => featurize_record(
            record,
            lex,
            mode,
            pipeline,
            ctx.resources,
            config.normalize_emotions,
        )?
        .into_iter()
        .take(text.snippets.len())
        .map(|v| v.0)
        .collect(),
        (_, None) => {
            return Err(Error::MissingResource {
                step: "emotion attention",
                resource: "affect lexicon",
            })
        }
    };
    Ok(Example {
        claim: vocab.rows_for(&text.claim),
        snippets: text.snippets.iter().map(|s| vocab.rows_for(s)).collect(),
        mask: text.mask.clone(),
        emotions,
        label: record.label.class_index(),
    })
}

/// `-ln probs[label]`.
pub fn loss(probs: ArrayView1<f64>, label: VeracityLabel) -> f64 {
    -probs[label.class_index()].ln()
}

/// Highest-probability class; ties go to the lower class index.
pub fn argmax_label(probs: ArrayView1<f64>) -> VeracityLabel {
    let mut best = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > probs[best] {
            best = i;
        }
    }
    VeracityLabel::from_index(best).expect("three-class output")
}

/// A trained classifier together with everything needed to reuse it.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub config: TrainConfig,
    pub pipeline: Pipeline,
    pub vocab: Vocab,
    pub params: Params,
}

impl Model {
    pub fn example(&self, record: &ClaimRecord, ctx: TextContext<'_>) -> Result<Example> {
        let text = prepare_text(record, &self.pipeline, ctx.resources)?;
        build_example(
            record,
            &text,
            &self.vocab,
            &self.pipeline,
            &self.config,
            ctx,
        )
    }

    pub fn forward(&self, record: &ClaimRecord, ctx: TextContext<'_>) -> Result<Forward> {
        let ex = self.example(record, ctx)?;
        forward(
            &self.params,
            &ex,
            self.config.mode,
            self.config.emotion_mode,
        )
    }

    pub fn predict(&self, record: &ClaimRecord, ctx: TextContext<'_>) -> Result<VeracityLabel> {
        Ok(argmax_label(self.forward(record, ctx)?.probs.view()))
    }

    pub fn predict_all(
        &self,
        records: &[ClaimRecord],
        ctx: TextContext<'_>,
    ) -> Result<Vec<VeracityLabel>> {
        records.iter().map(|r| self.predict(r, ctx)).collect()
    }

    /// Macro-F1 over `records`.
    pub fn score(&self, records: &[ClaimRecord], ctx: TextContext<'_>) -> Result<f64> {
        let preds = self.predict_all(records, ctx)?;
        let golds: Vec<VeracityLabel> = records.iter().map(|r| r.label).collect();
        f1_macro(&preds, &golds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use ndarray::array;

    #[test]
    fn loss_values() {
        assert_abs_diff_eq!(
            loss(
                array![1. / 3., 1. / 3., 1. / 3.].view(),
                VeracityLabel::Mixture
            ),
            3f64.ln(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            loss(array![0.7, 0.2, 0.1].view(), VeracityLabel::False),
            0.356_674_943_938_732_4,
            epsilon = 1e-12
        );
        assert!(loss(array![0.0001, 0.5, 0.4999].view(), VeracityLabel::False) > 9.0);
    }

    #[test]
    fn argmax_with_ties() {
        assert_eq!(
            argmax_label(array![0.2, 0.5, 0.3].view()),
            VeracityLabel::Mixture
        );
        assert_eq!(
            argmax_label(array![0.4, 0.4, 0.2].view()),
            VeracityLabel::False
        );
        assert_eq!(
            argmax_label(array![0.3, 0.35, 0.35].view()),
            VeracityLabel::Mixture
        );
    }

    #[test]
    fn config_validation() {
        assert!(TrainConfig::default().validate().is_ok());
        let zero_lr = TrainConfig {
            learning_rate: 0.0,
            ..TrainConfig::default()
        };
        assert!(zero_lr.validate().is_ok());
        for bad in [
            TrainConfig {
                learning_rate: f64::NAN,
                ..TrainConfig::default()
            },
            TrainConfig {
                epochs: 0,
                ..TrainConfig::default()
            },
            TrainConfig {
                embed_dim: 4,
                ..TrainConfig::default()
            },
        ] {
            assert!(bad.validate().is_err());
        }
    }

    #[test]
    fn mode_names_round_trip() {
        for mode in [
            InputMode::ClaimOnly,
            InputMode::EvidenceOnly,
            InputMode::ClaimAndEvidence,
        ] {
            assert_eq!(mode.as_str().parse::<InputMode>().unwrap(), mode);
        }
    }
}
