use super::FdaModel;
use crate::corpus::Label;

/// Majority label among the `k_neighbors` training projections nearest to
/// `query` (absolute difference). Equal distances go to the lower training
/// index; a tied vote goes to `Idiom`.
pub fn knn_classify(model: &FdaModel, query: f64) -> Label {
    let mut order: Vec<(f64, usize)> = model
        .train_projections
        .iter()
        .enumerate()
        .map(|(i, &p)| ((p - query).abs(), i))
        .collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let (idioms, literals) =
        order
            .iter()
            .take(model.k_neighbors)
            .fold((0usize, 0usize), |(i, l), &(_, idx)| match model.train_labels[idx] {
                Label::Idiom => (i + 1, l),
                _ => (i, l + 1),
            });
    if idioms >= literals {
        Label::Idiom
    } else {
        Label::Literal
    }
}
