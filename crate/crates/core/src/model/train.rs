use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::network::{backward, forward, Example};
use super::params::{Dims, Params};
use super::vocab::Vocab;
use super::{argmax_label, build_example, prepare_text, Model, TextContext, TrainConfig};
use crate::corpus::{DatasetSplit, VeracityLabel};
use crate::emolex::AffectLexicon;
use crate::error::{Error, Result};
use crate::eval::f1_macro;
use crate::preprocess::{Pipeline, Resources};

const BETA1: f64 = 0.9;
const BETA2: f64 = 0.999;
const EPSILON: f64 = 1e-8;

struct Adam {
    m: Params,
    v: Params,
    t: i32,
}

impl Adam {
    fn new(dims: Dims) -> Self {
        Adam {
            m: Params::zeros(dims),
            v: Params::zeros(dims),
            t: 0,
        }
    }

    fn step(&mut self, params: &mut Params, grads: &Params, lr: f64) {
        self.t += 1;
        let c1 = 1.0 - BETA1.powi(self.t);
        let c2 = 1.0 - BETA2.powi(self.t);
        let tensors = params
            .slices_mut()
            .into_iter()
            .zip(grads.slices())
            .zip(self.m.slices_mut())
            .zip(self.v.slices_mut());
        for (((p, g), m), v) in tensors {
            for i in 0..p.len() {
                m[i] = BETA1 * m[i] + (1.0 - BETA1) * g[i];
                v[i] = BETA2 * v[i] + (1.0 - BETA2) * g[i] * g[i];
                p[i] -= lr * (m[i] / c1) / ((v[i] / c2).sqrt() + EPSILON);
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    /// Mean cross-entropy over the training split plus the l2 penalty,
    /// measured after the epoch's updates.
    pub train_loss: f64,
    pub dev_f1: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct History {
    pub epochs: Vec<EpochRecord>,
    /// Epoch whose parameters were kept: best dev macro-F1, earliest on ties.
    pub best_epoch: usize,
}

#[derive(Clone, Debug)]
pub struct Trained {
    pub model: Model,
    pub history: History,
}

fn examples(
    split: &[crate::corpus::ClaimRecord],
    texts: &[super::PreparedText],
    vocab: &Vocab,
    pipeline: &Pipeline,
    config: &TrainConfig,
    ctx: TextContext<'_>,
) -> Result<Vec<Example>> {
    split
        .iter()
        .zip(texts)
        .map(|(r, t)| build_example(r, t, vocab, pipeline, config, ctx))
        .collect()
}

fn mean_loss(params: &Params, data: &[Example], config: &TrainConfig) -> Result<f64> {
    let mut total = 0.0;
    for ex in data {
        total += forward(params, ex, config.mode, config.emotion_mode)?.loss(ex.label);
    }
    Ok(total / data.len() as f64 + config.l2 * params.squared_norm())
}

fn dev_f1(params: &Params, data: &[Example], config: &TrainConfig) -> Result<f64> {
    let mut preds = Vec::with_capacity(data.len());
    let mut golds = Vec::with_capacity(data.len());
    for ex in data {
        let fwd = forward(params, ex, config.mode, config.emotion_mode)?;
        preds.push(argmax_label(fwd.probs.view()));
        golds.push(VeracityLabel::from_index(ex.label).expect("valid class index"));
    }
    f1_macro(&preds, &golds)
}

/// Fit a model on `dataset.train`, selecting the epoch with the best
/// macro-F1 on `dataset.dev`.
///
/// Mini-batch Adam on mean cross-entropy plus `l2 * |params|^2`. All
/// randomness (initialization, then one shuffle per epoch) comes from a
/// single ChaCha stream seeded with `config.seed`, and training is single
/// threaded, so histories and parameters are bit-reproducible.
pub fn train(
    dataset: &DatasetSplit,
    lexicon: Option<&AffectLexicon>,
    pipeline: &Pipeline,
    resources: &Resources,
    config: &TrainConfig,
) -> Result<Trained> {
    config.validate()?;
    if dataset.train.is_empty() || dataset.dev.is_empty() {
        return Err(Error::InvalidArgument(
            "training needs non-empty train and dev splits".into(),
        ));
    }
    let ctx = TextContext::new(resources, lexicon);
    let prep = |records: &[crate::corpus::ClaimRecord]| -> Result<Vec<_>> {
        records
            .iter()
            .map(|r| prepare_text(r, pipeline, resources))
            .collect()
    };
    let train_text = prep(&dataset.train)?;
    let dev_text = prep(&dataset.dev)?;
    let vocab = Vocab::build(
        train_text.iter().flat_map(|t| {
            t.claim
                .iter()
                .chain(t.snippets.iter().flatten())
                .map(String::as_str)
        }),
        config.oov_buckets,
    );
    let train_set = examples(&dataset.train, &train_text, &vocab, pipeline, config, ctx)?;
    let dev_set = examples(&dataset.dev, &dev_text, &vocab, pipeline, config, ctx)?;

    let dims = Dims {
        rows: vocab.rows(),
        embed: config.embed_dim,
        hidden: config.hidden_dim,
        attn: config.attn_dim,
        emo: config.emo_dim,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut params = Params::init(dims, &mut rng);
    let mut grads = Params::zeros(dims);
    let mut adam = Adam::new(dims);
    let mut order: Vec<usize> = (0..train_set.len()).collect();
    let mut history = History::default();
    let mut best: Option<(f64, Params)> = None;

    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        for (b, batch) in order.chunks(config.batch_size).enumerate() {
            grads.fill_zero();
            let scale = 1.0 / batch.len() as f64;
            let mut batch_loss = 0.0;
            for &i in batch {
                let ex = &train_set[i];
                let fwd = forward(&params, ex, config.mode, config.emotion_mode)?;
                batch_loss += scale * fwd.loss(ex.label);
                backward(&params, ex, &fwd, config.mode, scale, &mut grads);
            }
            if config.l2 > 0.0 {
                batch_loss += config.l2 * params.squared_norm();
                grads.add_scaled(&params, 2.0 * config.l2);
            }
            if !batch_loss.is_finite() {
                return Err(Error::NonFiniteLoss {
                    epoch,
                    batch: b + 1,
                    learning_rate: config.learning_rate,
                });
            }
            adam.step(&mut params, &grads, config.learning_rate);
        }
        let train_loss = mean_loss(&params, &train_set, config)?;
        if !train_loss.is_finite() {
            return Err(Error::NonFiniteLoss {
                epoch,
                batch: order.len().div_ceil(config.batch_size),
                learning_rate: config.learning_rate,
            });
        }
        let f1 = dev_f1(&params, &dev_set, config)?;
        log::debug!("epoch {epoch}: train loss {train_loss:.6}, dev macro-F1 {f1:.4}");
        history.epochs.push(EpochRecord {
            epoch,
            train_loss,
            dev_f1: f1,
        });
        if best.as_ref().map_or(true, |(score, _)| f1 > *score) {
            best = Some((f1, params.clone()));
            history.best_epoch = epoch;
        }
    }

    let (_, params) = best.expect("at least one epoch");
    Ok(Trained {
        model: Model {
            config: config.clone(),
            pipeline: pipeline.clone(),
            vocab,
            params,
        },
        history,
    })
}
