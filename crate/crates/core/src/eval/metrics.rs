use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::corpus::Label;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
}

impl Confusion {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn metrics(&self) -> Metrics {
        let ratio = |num: usize, den: usize| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        Metrics {
            precision: ratio(self.tp, self.tp + self.fp),
            recall: ratio(self.tp, self.tp + self.fn_),
            accuracy: ratio(self.tp + self.tn, self.total()),
        }
    }
}

/// Idiom is the positive class. Empty denominators give 0.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
    pub accuracy: f64,
}

impl Metrics {
    pub fn mean(all: &[Metrics]) -> Metrics {
        let n = all.len() as f64;
        let sum = |f: fn(&Metrics) -> f64| all.iter().map(f).sum::<f64>() / n;
        Metrics {
            precision: sum(|m| m.precision),
            recall: sum(|m| m.recall),
            accuracy: sum(|m| m.accuracy),
        }
    }
}

pub fn confusion(predicted: &[Label], gold: &[Label]) -> Result<Confusion, EvalError> {
    if predicted.len() != gold.len() || gold.is_empty() {
        return Err(EvalError::LengthMismatch {
            predicted: predicted.len(),
            gold: gold.len(),
        });
    }
    let mut c = Confusion::default();
    for (&p, &g) in predicted.iter().zip(gold) {
        match (p == Label::Idiom, g == Label::Idiom) {
            (true, true) => c.tp += 1,
            (true, false) => c.fp += 1,
            (false, true) => c.fn_ += 1,
            (false, false) => c.tn += 1,
        }
    }
    Ok(c)
}

pub fn compute_metrics(predicted: &[Label], gold: &[Label]) -> Result<Metrics, EvalError> {
    confusion(predicted, gold).map(|c| c.metrics())
}
