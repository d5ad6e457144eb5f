use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::network::{backward, forward, Example};
use super::params::{Params, TENSOR_NAMES};
use super::InputMode;
use crate::emolex::EmotionMode;
use crate::error::Result;

const STEP: f64 = 1e-5;
/// Coordinates compared per tensor; smaller tensors are checked in full.
const SAMPLES_PER_TENSOR: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct TensorCheck {
    pub name: &'static str,
    pub len: usize,
    pub checked: usize,
    pub max_rel_error: f64,
}

impl TensorCheck {
    /// Empty tensors have nothing to compare.
    pub fn skipped(&self) -> bool {
        self.checked == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradCheckReport {
    pub tensors: Vec<TensorCheck>,
    pub max_rel_error: f64,
}

impl GradCheckReport {
    pub fn skipped(&self) -> Vec<&'static str> {
        self.tensors
            .iter()
            .filter(|t| t.skipped())
            .map(|t| t.name)
            .collect()
    }
}

/// `|a - n| / max(|a| + |n|, 1e-6)`.
fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / (analytic.abs() + numeric.abs()).max(1e-6)
}

fn objective(
    params: &Params,
    ex: &Example,
    mode: InputMode,
    emotion: EmotionMode,
    l2: f64,
) -> Result<f64> {
    Ok(forward(params, ex, mode, emotion)?.loss(ex.label) + l2 * params.squared_norm())
}

/// Compare the analytic gradient of one example's loss against central
/// differences with step 1e-5.
pub fn grad_check(
    params: &Params,
    ex: &Example,
    mode: InputMode,
    emotion: EmotionMode,
    l2: f64,
) -> Result<GradCheckReport> {
    grad_check_with(params, ex, mode, emotion, l2, |_| {})
}

/// As [`grad_check`], letting `tamper` edit the analytic gradient first.
/// Used to prove the harness notices a broken backward pass.
pub fn grad_check_with(
    params: &Params,
    ex: &Example,
    mode: InputMode,
    emotion: EmotionMode,
    l2: f64,
    tamper: impl FnOnce(&mut Params),
) -> Result<GradCheckReport> {
    let fwd = forward(params, ex, mode, emotion)?;
    let mut grads = Params::zeros(params.dims());
    backward(params, ex, &fwd, mode, 1.0, &mut grads);
    grads.add_scaled(params, 2.0 * l2);
    tamper(&mut grads);

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut probe = params.clone();
    let mut tensors = Vec::with_capacity(TENSOR_NAMES.len());
    for (t, name) in TENSOR_NAMES.iter().enumerate() {
        let len = params.slices()[t].len();
        let coords: Vec<usize> = if len <= SAMPLES_PER_TENSOR {
            (0..len).collect()
        } else {
            rand::seq::index::sample(&mut rng, len, SAMPLES_PER_TENSOR).into_vec()
        };
        let mut worst: f64 = 0.0;
        for &i in &coords {
            let original = params.slices()[t][i];
            probe.slices_mut()[t][i] = original + STEP;
            let plus = objective(&probe, ex, mode, emotion, l2)?;
            probe.slices_mut()[t][i] = original - STEP;
            let minus = objective(&probe, ex, mode, emotion, l2)?;
            probe.slices_mut()[t][i] = original;
            let numeric = (plus - minus) / (2.0 * STEP);
            worst = worst.max(relative_error(grads.slices()[t][i], numeric));
        }
        tensors.push(TensorCheck {
            name,
            len,
            checked: coords.len(),
            max_rel_error: worst,
        });
    }
    let max_rel_error = tensors.iter().map(|t| t.max_rel_error).fold(0.0, f64::max);
    Ok(GradCheckReport {
        tensors,
        max_rel_error,
    })
}
