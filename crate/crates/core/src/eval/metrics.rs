use crate::corpus::VeracityLabel;
use crate::error::{Error, Result};

const K: usize = VeracityLabel::COUNT;

/// Rows are gold classes, columns predicted classes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub counts: [[u64; K]; K],
}

impl ConfusionMatrix {
    pub fn new(preds: &[VeracityLabel], golds: &[VeracityLabel]) -> Result<Self> {
        if preds.len() != golds.len() {
            return Err(Error::InvalidArgument(format!(
                "{} predictions for {} gold labels",
                preds.len(),
                golds.len()
            )));
        }
        if preds.is_empty() {
            return Err(Error::InvalidArgument("no predictions to score".into()));
        }
        let mut m = ConfusionMatrix::default();
        for (p, g) in preds.iter().zip(golds) {
            m.counts[g.class_index()][p.class_index()] += 1;
        }
        Ok(m)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn precision(&self, class: usize) -> f64 {
        let predicted: u64 = (0..K).map(|g| self.counts[g][class]).sum();
        ratio(self.counts[class][class], predicted)
    }

    pub fn recall(&self, class: usize) -> f64 {
        let gold: u64 = self.counts[class].iter().sum();
        ratio(self.counts[class][class], gold)
    }

    /// `2PR / (P + R)`, zero when both are zero.
    pub fn f1(&self, class: usize) -> f64 {
        f1_from(self.precision(class), self.recall(class))
    }

    /// Unweighted mean of the per-class F1 scores. A class that never
    /// occurs in gold or predictions scores 0.
    pub fn macro_f1(&self) -> f64 {
        (0..K).map(|c| self.f1(c)).sum::<f64>() / K as f64
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub(crate) fn f1_from(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Macro-averaged F1 over the three veracity classes.
pub fn f1_macro(preds: &[VeracityLabel], golds: &[VeracityLabel]) -> Result<f64> {
    Ok(ConfusionMatrix::new(preds, golds)?.macro_f1())
}

/// `S_CE - S_E`: how much the claim adds on top of the evidence.
pub fn delta(score_ce: f64, score_e: f64) -> f64 {
    score_ce - score_e
}
