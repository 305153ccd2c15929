use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::EvalError;
use crate::corpus::{Dataset, Label};

/// Indices into `Dataset::instances`. Training lists idioms first, then
/// literals; the test side keeps dataset order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Three quarters of the smaller class, per class.
pub fn default_split(dataset: &Dataset) -> (usize, usize) {
    let per_class = dataset.count(Label::Idiom).min(dataset.count(Label::Literal)) * 3 / 4;
    (per_class, per_class)
}

/// Samples `train_idioms` idioms and `train_literals` literals uniformly
/// without replacement; every other annotated instance is test data.
pub fn random_split(
    dataset: &Dataset,
    train_idioms: usize,
    train_literals: usize,
    seed: u64,
) -> Result<Split, EvalError> {
    if train_idioms + train_literals == 0 {
        return Err(EvalError::EmptyTrain);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut in_train = vec![false; dataset.len()];
    let mut train = Vec::with_capacity(train_idioms + train_literals);
    for (class, requested) in [(Label::Idiom, train_idioms), (Label::Literal, train_literals)] {
        let pool: Vec<usize> = (0..dataset.len())
            .filter(|&i| dataset.instances[i].label == class)
            .collect();
        if pool.len() < requested {
            return Err(EvalError::Insufficient {
                class,
                requested,
                available: pool.len(),
            });
        }
        let mut chosen: Vec<usize> = pool.choose_multiple(&mut rng, requested).copied().collect();
        chosen.sort_unstable();
        for &i in &chosen {
            in_train[i] = true;
        }
        train.extend(chosen);
    }
    let test: Vec<usize> = (0..dataset.len())
        .filter(|&i| !in_train[i] && dataset.instances[i].label.is_annotated())
        .collect();
    if test.is_empty() {
        return Err(EvalError::EmptyTest);
    }
    Ok(Split { train, test })
}
