//! Forward and backward passes for a single example.

use ndarray::{s, Array1, Array2, ArrayView1, ArrayView2, Axis};

use super::params::Params;
use super::InputMode;
use crate::emolex::{Emotion, EmotionMode};
use crate::error::{Error, Result};

/// A record reduced to embedding rows and raw emotion vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Example {
    pub claim: Vec<usize>,
    /// One entry per snippet slot in rank order.
    pub snippets: Vec<Vec<usize>>,
    /// `false` for missing snippets; they never receive attention.
    pub mask: Vec<bool>,
    /// Aligned with `snippets`.
    pub emotions: Vec<[f64; Emotion::COUNT]>,
    pub label: usize,
}

/// Mean of the embedding rows; zero for no rows.
pub fn encode_text(rows: &[usize], embeddings: ArrayView2<f64>) -> Array1<f64> {
    let mut out = Array1::zeros(embeddings.ncols());
    if rows.is_empty() {
        return out;
    }
    for &r in rows {
        out += &embeddings.row(r);
    }
    out / rows.len() as f64
}

fn pair_input(claim: ArrayView1<f64>, snippet: ArrayView1<f64>) -> Array1<f64> {
    let d = claim.len();
    let mut x = Array1::zeros(3 * d);
    x.slice_mut(s![..d]).assign(&claim);
    x.slice_mut(s![d..2 * d]).assign(&snippet);
    x.slice_mut(s![2 * d..]).assign(&(&claim * &snippet));
    x
}

/// `tanh(W_pair [c; s; c*s] + b_pair)`.
pub fn pair_combine(
    claim: ArrayView1<f64>,
    snippet: ArrayView1<f64>,
    params: &Params,
) -> Array1<f64> {
    (params.w_pair.dot(&pair_input(claim, snippet)) + &params.b_pair).mapv(f64::tanh)
}

/// Output of [`attention_pool`].
#[derive(Clone, Debug)]
pub struct Attention {
    /// Zero at masked positions; sums to one over the rest.
    pub weights: Array1<f64>,
    pub pooled: Array1<f64>,
    z: Array2<f64>,
}

/// Additive attention: `score_i = u . tanh(W item_i)`, softmax over
/// unmasked items, weighted sum of items.
pub fn attention_pool(
    items: ArrayView2<f64>,
    mask: &[bool],
    w: ArrayView2<f64>,
    u: ArrayView1<f64>,
) -> Result<Attention> {
    if mask.len() != items.nrows() {
        return Err(Error::InvalidArgument(format!(
            "{} mask bits for {} items",
            mask.len(),
            items.nrows()
        )));
    }
    if !mask.iter().any(|&m| m) {
        return Err(Error::AllMasked);
    }
    let z = items.dot(&w.t()).mapv(f64::tanh);
    let scores = z.dot(&u);
    let max = scores
        .iter()
        .zip(mask)
        .filter(|(_, &m)| m)
        .map(|(s, _)| *s)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut weights: Array1<f64> = scores
        .iter()
        .zip(mask)
        .map(|(s, &m)| if m { (s - max).exp() } else { 0.0 })
        .collect();
    let total = weights.sum();
    weights /= total;
    let pooled = weights.dot(&items);
    Ok(Attention { weights, pooled, z })
}

struct AttentionGrads {
    items: Array2<f64>,
    w: Array2<f64>,
    u: Array1<f64>,
}

fn attention_backward(
    items: ArrayView2<f64>,
    w: ArrayView2<f64>,
    u: ArrayView1<f64>,
    att: &Attention,
    d_pooled: ArrayView1<f64>,
) -> AttentionGrads {
    let alpha = &att.weights;
    let d_alpha = items.dot(&d_pooled);
    let mean = alpha.dot(&d_alpha);
    let d_score = alpha * &(d_alpha - mean);
    let d_u = att.z.t().dot(&d_score);
    let d_z = d_score
        .view()
        .insert_axis(Axis(1))
        .dot(&u.insert_axis(Axis(0)));
    let d_a = d_z * &att.z.mapv(|z| 1.0 - z * z);
    let d_w = d_a.t().dot(&items);
    let d_items = alpha
        .view()
        .insert_axis(Axis(1))
        .dot(&d_pooled.insert_axis(Axis(0)))
        + d_a.dot(&w);
    AttentionGrads {
        items: d_items,
        w: d_w,
        u: d_u,
    }
}

pub fn softmax(logits: ArrayView1<f64>) -> Array1<f64> {
    let max = logits.fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let e = logits.mapv(|l| (l - max).exp());
    let total = e.sum();
    e / total
}

fn log_sum_exp(logits: ArrayView1<f64>) -> f64 {
    let max = logits.fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    max + logits.mapv(|l| (l - max).exp()).sum().ln()
}

/// Everything the backward pass needs, plus the outputs worth reporting.
#[derive(Clone, Debug)]
pub struct Forward {
    pub probs: Array1<f64>,
    pub logits: Array1<f64>,
    /// Attention over the snippets that took part (ClaimOnly: one item).
    pub snippet_attention: Attention,
    pub emotion_attention: Option<Attention>,
    /// Slot of each attention item in `Example::snippets`.
    pub items: Vec<usize>,
    claim: Array1<f64>,
    snippets: Array2<f64>,
    inputs: Array2<f64>,
    hidden: Array2<f64>,
    emotions: Array2<f64>,
    projected: Array2<f64>,
    features: Array1<f64>,
}

impl Forward {
    /// Cross-entropy against `label`, from the logits.
    pub fn loss(&self, label: usize) -> f64 {
        log_sum_exp(self.logits.view()) - self.logits[label]
    }
}

fn emotion_branch(mode: InputMode, emotion: EmotionMode) -> bool {
    emotion != EmotionMode::None && mode != InputMode::ClaimOnly
}

pub fn forward(
    params: &Params,
    ex: &Example,
    mode: InputMode,
    emotion: EmotionMode,
) -> Result<Forward> {
    let dims = params.dims();
    let emb = params.embeddings.view();
    let claim = match mode {
        InputMode::EvidenceOnly => Array1::zeros(dims.embed),
        _ => encode_text(&ex.claim, emb),
    };

    let items: Vec<usize> = match mode {
        InputMode::ClaimOnly => vec![0],
        _ => (0..ex.snippets.len()).filter(|&i| ex.mask[i]).collect(),
    };
    if items.is_empty() {
        return Err(Error::AllMasked);
    }
    let k = items.len();
    let mut snippets = Array2::zeros((k, dims.embed));
    if mode != InputMode::ClaimOnly {
        for (row, &i) in items.iter().enumerate() {
            snippets
                .row_mut(row)
                .assign(&encode_text(&ex.snippets[i], emb));
        }
    }
    let mut inputs = Array2::zeros((k, 3 * dims.embed));
    for row in 0..k {
        inputs
            .row_mut(row)
            .assign(&pair_input(claim.view(), snippets.row(row)));
    }
    let hidden = (inputs.dot(&params.w_pair.t()) + &params.b_pair).mapv(f64::tanh);
    let all = vec![true; k];
    let snippet_attention =
        attention_pool(hidden.view(), &all, params.w_s.view(), params.u_s.view())?;

    let mut emotions = Array2::zeros((k, Emotion::COUNT));
    let mut projected = Array2::zeros((k, dims.emo));
    let mut emotion_attention = None;
    let mut emotion_pool = Array1::zeros(dims.emo);
    if emotion_branch(mode, emotion) {
        for (row, &i) in items.iter().enumerate() {
            let e = ex.emotions.get(i).copied().unwrap_or_default();
            emotions.row_mut(row).assign(&ArrayView1::from(&e));
        }
        projected = emotions.dot(&params.w_p.t());
        let att = attention_pool(projected.view(), &all, params.w_e.view(), params.u_e.view())?;
        emotion_pool = att.pooled.clone();
        emotion_attention = Some(att);
    }

    let mut features = Array1::zeros(dims.features());
    features
        .slice_mut(s![..dims.hidden])
        .assign(&snippet_attention.pooled);
    features
        .slice_mut(s![dims.hidden..dims.hidden + dims.emo])
        .assign(&emotion_pool);
    features
        .slice_mut(s![dims.hidden + dims.emo..])
        .assign(&claim);
    let logits = params.w_c.dot(&features) + &params.b_c;
    let probs = softmax(logits.view());
    Ok(Forward {
        probs,
        logits,
        snippet_attention,
        emotion_attention,
        items,
        claim,
        snippets,
        inputs,
        hidden,
        emotions,
        projected,
        features,
    })
}

fn outer(a: ArrayView1<f64>, b: ArrayView1<f64>) -> Array2<f64> {
    a.insert_axis(Axis(1)).dot(&b.insert_axis(Axis(0)))
}

fn scatter_mean(grads: &mut Array2<f64>, rows: &[usize], d: ArrayView1<f64>) {
    if rows.is_empty() {
        return;
    }
    let share = &d / rows.len() as f64;
    for &r in rows {
        let mut row = grads.row_mut(r);
        row += &share;
    }
}

/// Accumulate `scale * d loss / d params` into `grads`.
pub fn backward(
    params: &Params,
    ex: &Example,
    fwd: &Forward,
    mode: InputMode,
    scale: f64,
    grads: &mut Params,
) {
    let dims = params.dims();
    let (h, e) = (dims.hidden, dims.emo);

    let mut d_logits = fwd.probs.clone();
    d_logits[ex.label] -= 1.0;
    d_logits *= scale;
    grads.w_c += &outer(d_logits.view(), fwd.features.view());
    grads.b_c += &d_logits;
    let d_features = params.w_c.t().dot(&d_logits);
    let d_pool = d_features.slice(s![..h]);
    let d_emotion_pool = d_features.slice(s![h..h + e]);
    let mut d_claim = d_features.slice(s![h + e..]).to_owned();

    if let Some(att) = &fwd.emotion_attention {
        let g = attention_backward(
            fwd.projected.view(),
            params.w_e.view(),
            params.u_e.view(),
            att,
            d_emotion_pool,
        );
        grads.w_e += &g.w;
        grads.u_e += &g.u;
        grads.w_p += &g.items.t().dot(&fwd.emotions);
    }

    let g = attention_backward(
        fwd.hidden.view(),
        params.w_s.view(),
        params.u_s.view(),
        &fwd.snippet_attention,
        d_pool,
    );
    let d_pre = g.items * &fwd.hidden.mapv(|x| 1.0 - x * x);
    grads.w_s += &g.w;
    grads.u_s += &g.u;
    grads.w_pair += &d_pre.t().dot(&fwd.inputs);
    grads.b_pair += &d_pre.sum_axis(Axis(0));
    let d_inputs = d_pre.dot(&params.w_pair);

    let d = dims.embed;
    for (row, &slot) in fwd.items.iter().enumerate() {
        let dx = d_inputs.row(row);
        let d_product = dx.slice(s![2 * d..]);
        let snippet = fwd.snippets.row(row);
        d_claim += &dx.slice(s![..d]);
        d_claim += &(&d_product * &snippet);
        if mode != InputMode::ClaimOnly {
            let d_snippet = &dx.slice(s![d..2 * d]) + &(&d_product * &fwd.claim);
            scatter_mean(&mut grads.embeddings, &ex.snippets[slot], d_snippet.view());
        }
    }
    if mode != InputMode::EvidenceOnly {
        scatter_mean(&mut grads.embeddings, &ex.claim, d_claim.view());
    }
}
