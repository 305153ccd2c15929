//! C-SVM with a Gaussian kernel, trained by sequential minimal
//! optimization with maximal-violating-pair working-set selection.

use nalgebra::{DMatrix, DVector, DVectorView};

use super::{check_labels, sign, ClassifyError};
use crate::corpus::Label;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmConfig {
    pub c: f64,
    /// Kernel width; `None` means `1 / q`.
    pub gamma: Option<f64>,
    pub tolerance: f64,
    /// Iteration cap; `None` means `10 · n²`.
    pub max_iterations: Option<usize>,
}

impl Default for SvmConfig {
    fn default() -> Self {
        SvmConfig {
            c: 1.0,
            gamma: None,
            tolerance: 1e-3,
            max_iterations: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    /// Support vectors, one per column.
    pub support_vectors: DMatrix<f64>,
    /// Dual coefficients `α_i ∈ [0, C]` of the support vectors.
    pub alphas: Vec<f64>,
    pub support_labels: Vec<Label>,
    pub bias: f64,
    pub gamma: f64,
    pub c: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn rbf(gamma: f64, a: DVectorView<'_, f64>, b: DVectorView<'_, f64>) -> f64 {
    (-gamma * (a - b).norm_squared()).exp()
}

impl SvmModel {
    /// `Σ α_i y_i K(x_i, x) + b`
    pub fn decision(&self, x: DVectorView<'_, f64>) -> f64 {
        self.support_vectors
            .column_iter()
            .zip(self.alphas.iter().zip(&self.support_labels))
            .map(|(sv, (&a, &l))| a * sign(l) * rbf(self.gamma, sv, x))
            .sum::<f64>()
            + self.bias
    }
}

/// Non-negative decision values map to `Idiom`.
pub fn svm_classify(model: &SvmModel, x: DVectorView<'_, f64>) -> Label {
    if model.decision(x) >= 0.0 {
        Label::Idiom
    } else {
        Label::Literal
    }
}

pub fn fit_svm(x: &DMatrix<f64>, labels: &[Label], config: &SvmConfig) -> Result<SvmModel, ClassifyError> {
    fit_svm_observed(x, labels, config, |_, _| {})
}

/// Calls `observer(iteration, alphas)` after every pair update.
pub fn fit_svm_observed<F>(
    x: &DMatrix<f64>,
    labels: &[Label],
    config: &SvmConfig,
    mut observer: F,
) -> Result<SvmModel, ClassifyError>
where
    F: FnMut(usize, &[f64]),
{
    let (q, n) = x.shape();
    check_labels(n, labels)?;
    if n == 0 {
        return Err(ClassifyError::TooFewSamples { needed: 1, got: 0 });
    }
    let gamma = config.gamma.unwrap_or(1.0 / q.max(1) as f64);
    let c = config.c;

    // One class only: the equality constraint pins every α to 0.
    if labels.iter().all(|&l| l == labels[0]) {
        return Ok(SvmModel {
            support_vectors: DMatrix::zeros(q, 0),
            alphas: vec![],
            support_labels: vec![],
            bias: sign(labels[0]),
            gamma,
            c,
            iterations: 0,
            converged: true,
        });
    }

    let y: Vec<f64> = labels.iter().map(|&l| sign(l)).collect();
    let kernel = DMatrix::from_fn(n, n, |i, j| rbf(gamma, x.column(i), x.column(j)));
    let qm = |i: usize, j: usize| y[i] * y[j] * kernel[(i, j)];
    let mut alpha = vec![0.0f64; n];
    // Gradient of ½αᵗQα - eᵗα.
    let mut grad = vec![-1.0f64; n];
    let max_iter = config.max_iterations.unwrap_or(10 * n * n);
    const TAU: f64 = 1e-12;

    let in_up = |a: f64, yi: f64| (yi > 0.0 && a < c) || (yi < 0.0 && a > 0.0);
    let in_low = |a: f64, yi: f64| (yi > 0.0 && a > 0.0) || (yi < 0.0 && a < c);

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        let mut i = usize::MAX;
        let mut g_max = f64::NEG_INFINITY;
        let mut j = usize::MAX;
        let mut g_min = f64::INFINITY;
        for t in 0..n {
            let v = -y[t] * grad[t];
            if in_up(alpha[t], y[t]) && v > g_max {
                g_max = v;
                i = t;
            }
            if in_low(alpha[t], y[t]) && v < g_min {
                g_min = v;
                j = t;
            }
        }
        if i == usize::MAX || j == usize::MAX || g_max - g_min < config.tolerance {
            converged = true;
            break;
        }

        let (old_i, old_j) = (alpha[i], alpha[j]);
        if y[i] != y[j] {
            let quad = (kernel[(i, i)] + kernel[(j, j)] + 2.0 * qm(i, j)).max(TAU);
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let quad = (kernel[(i, i)] + kernel[(j, j)] - 2.0 * qm(i, j)).max(TAU);
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let (di, dj) = (alpha[i] - old_i, alpha[j] - old_j);
        for (t, g) in grad.iter_mut().enumerate() {
            *g += qm(t, i) * di + qm(t, j) * dj;
        }
        iterations += 1;
        observer(iterations, &alpha);
    }

    // b = -ρ, with ρ averaged over free multipliers.
    let (mut free_sum, mut free_n) = (0.0, 0usize);
    let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
    for t in 0..n {
        let yg = y[t] * grad[t];
        if alpha[t] > 0.0 && alpha[t] < c {
            free_sum += yg;
            free_n += 1;
        } else if (alpha[t] >= c && y[t] < 0.0) || (alpha[t] <= 0.0 && y[t] > 0.0) {
            ub = ub.min(yg);
        } else {
            lb = lb.max(yg);
        }
    }
    let rho = if free_n > 0 {
        free_sum / free_n as f64
    } else {
        (ub + lb) / 2.0
    };

    let sv: Vec<usize> = (0..n).filter(|&t| alpha[t] > 0.0).collect();
    let support_vectors = DMatrix::from_columns(
        &sv.iter()
            .map(|&t| x.column(t).into_owned())
            .collect::<Vec<DVector<f64>>>(),
    );
    let support_vectors = if sv.is_empty() {
        DMatrix::zeros(q, 0)
    } else {
        support_vectors
    };
    Ok(SvmModel {
        support_vectors,
        alphas: sv.iter().map(|&t| alpha[t]).collect(),
        support_labels: sv.iter().map(|&t| labels[t]).collect(),
        bias: -rho,
        gamma,
        c,
        iterations,
        converged,
    })
}
