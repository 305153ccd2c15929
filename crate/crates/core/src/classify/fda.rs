use std::io::{self, Write};

use nalgebra::{DMatrix, DVector, DVectorView};

use super::scatter::class_mean;
use super::{check_labels, knn, ClassifyError, ScatterSet};
use crate::corpus::Label;

/// `⌈n/5⌉` neighbours for `n` training samples.
pub fn knn_auto(n: usize) -> usize {
    n.div_ceil(5)
}

/// Two-class Fisher discriminant with stored training projections for the
/// nearest-neighbour vote.
#[derive(Debug, Clone, PartialEq)]
pub struct FdaModel {
    /// Unit-norm direction, oriented so that `wᵗ(m_idiom - m_literal) >= 0`.
    pub w: DVector<f64>,
    pub train_projections: Vec<f64>,
    pub train_labels: Vec<Label>,
    pub k_neighbors: usize,
    /// Ridge added to the within-class scatter before solving.
    pub ridge: f64,
}

impl FdaModel {
    pub fn project(&self, x: DVectorView<'_, f64>) -> f64 {
        self.w.dot(&x)
    }

    pub fn classify(&self, x: DVectorView<'_, f64>) -> Label {
        knn::knn_classify(self, self.project(x))
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k_neighbors = k.clamp(1, self.train_labels.len());
        self
    }

    /// Direction coordinates then training projections, 9 decimals.
    pub fn write_dump<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# w ({} coordinates)", self.w.len())?;
        for v in self.w.iter() {
            writeln!(out, "{v:.9}")?;
        }
        writeln!(out, "# projections (k = {})", self.k_neighbors)?;
        for (p, l) in self.train_projections.iter().zip(&self.train_labels) {
            writeln!(out, "{p:.9},{}", l.code())?;
        }
        Ok(())
    }
}

/// `(vᵗ S_b v) / (vᵗ S_w v)`
pub fn fisher_criterion(scatter: &ScatterSet, v: &DVector<f64>) -> f64 {
    let between = v.dot(&(&scatter.s_b * v));
    let within = v.dot(&(&scatter.s_w * v));
    between / within
}

/// Within-class deviations scaled so that `U Uᵗ = S_w`.
fn within_factor(x: &DMatrix<f64>, labels: &[Label], means: [&DVector<f64>; 2]) -> DMatrix<f64> {
    let scale = 1.0 / (x.ncols() as f64).sqrt();
    let mut u = x.clone();
    for (mut col, &l) in u.column_iter_mut().zip(labels) {
        let mean = if l == Label::Idiom { means[0] } else { means[1] };
        col -= mean;
        col *= scale;
    }
    u
}

fn solve_spd(a: DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    match a.clone().cholesky() {
        Some(ch) => ch.solve(b),
        None => a.lu().solve(b).expect("ridge keeps the system nonsingular"),
    }
}

/// `(U Uᵗ + εI) w = d` by a q×q factorization.
pub(crate) fn solve_primal(u: &DMatrix<f64>, d: &DVector<f64>, ridge: f64) -> DVector<f64> {
    let mut a = u * u.transpose();
    for i in 0..a.nrows() {
        a[(i, i)] += ridge;
    }
    solve_spd(a, d)
}

/// Same system through the n×n Woodbury form, for q much larger than n:
/// `w = (d - U (εI + UᵗU)⁻¹ Uᵗ d) / ε`.
pub(crate) fn solve_dual(u: &DMatrix<f64>, d: &DVector<f64>, ridge: f64) -> DVector<f64> {
    let mut g = u.transpose() * u;
    for i in 0..g.nrows() {
        g[(i, i)] += ridge;
    }
    let y = solve_spd(g, &(u.transpose() * d));
    (d - u * y) / ridge
}

/// Solves `(S_w + εI) w = m_idiom - m_literal` with
/// `ε = 1e-6 · trace(S_w) / q` (or `1e-6` when the trace vanishes).
pub fn fit_fda(x: &DMatrix<f64>, labels: &[Label]) -> Result<FdaModel, ClassifyError> {
    let (q, n) = x.shape();
    check_labels(n, labels)?;
    if q == 0 {
        return Err(ClassifyError::NoFeatures);
    }
    let (m_i, l_i) = class_mean(x, labels, Label::Idiom);
    let (m_l, l_l) = class_mean(x, labels, Label::Literal);
    if l_i == 0 {
        return Err(ClassifyError::DegenerateClass(Label::Idiom));
    }
    if l_l == 0 {
        return Err(ClassifyError::DegenerateClass(Label::Literal));
    }
    let u = within_factor(x, labels, [&m_i, &m_l]);
    let trace = u.norm_squared();
    let ridge = if trace > 0.0 { 1e-6 * trace / q as f64 } else { 1e-6 };
    let diff = &m_i - &m_l;
    if diff.amax() == 0.0 {
        return Err(ClassifyError::ZeroDirection);
    }

    let mut w = if q <= n {
        solve_primal(&u, &diff, ridge)
    } else {
        solve_dual(&u, &diff, ridge)
    };
    let norm = w.norm();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(ClassifyError::ZeroDirection);
    }
    w /= norm;
    if w.dot(&diff) < 0.0 {
        w.neg_mut();
    }
    let train_projections = x.column_iter().map(|c| w.dot(&c)).collect();
    Ok(FdaModel {
        w,
        train_projections,
        train_labels: labels.to_vec(),
        k_neighbors: knn_auto(n),
        ridge,
    })
}
