use nalgebra::{DMatrix, DVector};

use super::{check_labels, ClassifyError};
use crate::corpus::Label;

/// Within-class, between-class and mixture scatter, all normalized by
/// sample counts so that `s_m = s_w + s_b` holds exactly:
///
/// ```text
/// S_w = Σ_j p_j (1/l_j) Σ_{x in j} (x - m_j)(x - m_j)ᵗ
/// S_b = Σ_j p_j (m_j - m_0)(m_j - m_0)ᵗ
/// S_m = (1/n) Σ_x (x - m_0)(x - m_0)ᵗ
/// ```
///
/// with `p_j = l_j / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterSet {
    pub s_w: DMatrix<f64>,
    pub s_b: DMatrix<f64>,
    pub s_m: DMatrix<f64>,
    /// Classes in `Label` order, matching `class_means`, `priors` and `class_sizes`.
    pub classes: Vec<Label>,
    pub class_means: Vec<DVector<f64>>,
    pub mixture_mean: DVector<f64>,
    pub priors: Vec<f64>,
    pub class_sizes: Vec<usize>,
}

pub(crate) fn class_mean(x: &DMatrix<f64>, labels: &[Label], class: Label) -> (DVector<f64>, usize) {
    let mut mean = DVector::zeros(x.nrows());
    let mut count = 0;
    for (col, &l) in x.column_iter().zip(labels) {
        if l == class {
            mean += col;
            count += 1;
        }
    }
    if count > 0 {
        mean /= count as f64;
    }
    (mean, count)
}

/// `x` holds one sample per column.
pub fn scatter_matrices(x: &DMatrix<f64>, labels: &[Label]) -> Result<ScatterSet, ClassifyError> {
    let n = x.ncols();
    check_labels(n, labels)?;
    if n < 2 {
        return Err(ClassifyError::TooFewSamples { needed: 2, got: n });
    }
    for class in [Label::Idiom, Label::Literal] {
        if !labels.contains(&class) {
            return Err(ClassifyError::DegenerateClass(class));
        }
    }
    let q = x.nrows();
    let nf = n as f64;
    let mixture_mean = x.column_sum() / nf;

    let mut s_w = DMatrix::zeros(q, q);
    let mut s_b = DMatrix::zeros(q, q);
    let mut classes = Vec::new();
    let mut class_means = Vec::new();
    let mut priors = Vec::new();
    let mut class_sizes = Vec::new();
    for class in [Label::Idiom, Label::Literal] {
        let (mean, l) = class_mean(x, labels, class);
        let p = l as f64 / nf;
        for (col, _) in x.column_iter().zip(labels).filter(|(_, &lab)| lab == class) {
            let d = col - &mean;
            s_w.ger(p / l as f64, &d, &d, 1.0);
        }
        let d = &mean - &mixture_mean;
        s_b.ger(p, &d, &d, 1.0);
        classes.push(class);
        class_means.push(mean);
        priors.push(p);
        class_sizes.push(l);
    }

    let mut s_m = DMatrix::zeros(q, q);
    for col in x.column_iter() {
        let d = col - &mixture_mean;
        s_m.ger(1.0 / nf, &d, &d, 1.0);
    }
    Ok(ScatterSet {
        s_w,
        s_b,
        s_m,
        classes,
        class_means,
        mixture_mean,
        priors,
        class_sizes,
    })
}
