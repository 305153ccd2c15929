//! Two-class classifiers over document columns: Fisher discriminant
//! projection followed by a nearest-neighbour vote, and a Gaussian-kernel
//! SVM baseline.

mod fda;
mod knn;
mod scatter;
mod svm;

pub use fda::{fisher_criterion, fit_fda, knn_auto, FdaModel};
pub use knn::knn_classify;
pub use scatter::{scatter_matrices, ScatterSet};
pub use svm::{fit_svm, fit_svm_observed, svm_classify, SvmConfig, SvmModel};

use thiserror::Error;

use crate::corpus::Label;

#[derive(Debug, Error, PartialEq)]
pub enum ClassifyError {
    #[error("{samples} samples but {labels} labels")]
    LengthMismatch { samples: usize, labels: usize },
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("training labels must be idiom or literal")]
    UnknownLabel,
    #[error("class {0} has no samples")]
    DegenerateClass(Label),
    #[error("feature dimension is zero")]
    NoFeatures,
    #[error("class means coincide; no discriminant direction")]
    ZeroDirection,
}

/// `+1` for idioms, `-1` for literals.
pub(crate) fn sign(label: Label) -> f64 {
    match label {
        Label::Idiom => 1.0,
        _ => -1.0,
    }
}

pub(crate) fn check_labels(n: usize, labels: &[Label]) -> Result<(), ClassifyError> {
    if n != labels.len() {
        return Err(ClassifyError::LengthMismatch {
            samples: n,
            labels: labels.len(),
        });
    }
    if labels.iter().any(|l| !l.is_annotated()) {
        return Err(ClassifyError::UnknownLabel);
    }
    Ok(())
}
