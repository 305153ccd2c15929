use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::EvalError;
use crate::affect::AffectLexicon;
use crate::representation::TermDocMatrix;

/// Principal-component coordinates of each document column.
///
/// Columns are mean-centered and the eigenproblem is solved on the
/// document Gram matrix, so the cost depends on the number of documents
/// rather than the vocabulary size. Each component's term loading is
/// oriented so its largest-magnitude entry is positive.
pub fn projection_2d(matrix: &TermDocMatrix) -> Result<Vec<(f64, f64)>, EvalError> {
    project_columns(&matrix.entries)
}

pub(crate) fn project_columns(x: &DMatrix<f64>) -> Result<Vec<(f64, f64)>, EvalError> {
    let n = x.ncols();
    if n < 2 {
        return Err(EvalError::TooFewDocuments);
    }
    let mean = x.column_mean();
    let mut centered = x.clone();
    for mut col in centered.column_iter_mut() {
        col -= &mean;
    }
    let gram = centered.transpose() * &centered;
    let eig = SymmetricEigen::new(gram);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let top = eig.eigenvalues[order[0]].max(0.0);
    let scale_tol = 1e-12 * top.max(f64::MIN_POSITIVE) + 1e-300;

    let mut coords = [vec![0.0; n], vec![0.0; n]];
    for (k, coord) in coords.iter_mut().enumerate() {
        let lambda = eig.eigenvalues[order[k]];
        if lambda <= scale_tol || top == 0.0 {
            continue;
        }
        let u: DVector<f64> = eig.eigenvectors.column(order[k]).into_owned();
        let loading = &centered * &u / lambda.sqrt();
        let pivot = loading.iamax();
        let flip = if loading[pivot] < 0.0 { -1.0 } else { 1.0 };
        for (j, c) in coord.iter_mut().enumerate() {
            *c = flip * u[j] * lambda.sqrt();
        }
    }
    Ok((0..n).map(|j| (coords[0][j], coords[1][j])).collect())
}

/// Mean centered arousal of each document's in-lexicon tokens (0 for
/// documents with none), sorted ascending.
pub fn arousal_curve<D: AsRef<[String]>>(docs: &[D], lexicon: &AffectLexicon, mean: f64) -> Vec<f64> {
    let mut values: Vec<f64> = docs
        .iter()
        .map(|d| {
            let (sum, n) = d
                .as_ref()
                .iter()
                .filter_map(|t| lexicon.arousal(t))
                .fold((0.0, 0usize), |(s, n), a| (s + a - mean, n + 1));
            if n == 0 {
                0.0
            } else {
                sum / n as f64
            }
        })
        .collect();
    values.sort_by(f64::total_cmp);
    values
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dist(a: (f64, f64), b: (f64, f64)) -> f64 {
        ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt()
    }

    #[test]
    fn planar_data_keeps_distances() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = DMatrix::from_fn(2, 12, |i, _| rng.gen_range(-3.0..3.0) * (i + 1) as f64);
        let p = project_columns(&x).unwrap();
        for a in 0..12 {
            for b in 0..12 {
                let orig = (x.column(a) - x.column(b)).norm();
                assert!((dist(p[a], p[b]) - orig).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn identical_columns_collapse_to_origin() {
        let x = DMatrix::from_element(5, 4, 2.5);
        assert!(project_columns(&x).unwrap().iter().all(|&c| c == (0.0, 0.0)));
    }

    #[test]
    fn rank_one_has_zero_second_axis() {
        let x = DMatrix::from_fn(3, 5, |i, j| (i + 1) as f64 * j as f64);
        let p = project_columns(&x).unwrap();
        assert!(p.iter().all(|c| c.1 == 0.0));
        assert!(p.iter().any(|c| c.0 != 0.0));
    }

    #[test]
    fn clusters_stay_apart() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (q, per) = (20, 10);
        let x = DMatrix::from_fn(q, 2 * per, |i, j| {
            let center = if j < per {
                0.0
            } else if i < 5 {
                4.0
            } else {
                0.0
            };
            center + rng.gen_range(-0.5..0.5)
        });
        let p = project_columns(&x).unwrap();
        let centroid = |r: std::ops::Range<usize>| {
            let n = r.len() as f64;
            let (sx, sy) = r.clone().fold((0.0, 0.0), |a, j| (a.0 + p[j].0, a.1 + p[j].1));
            (sx / n, sy / n)
        };
        let (ca, cb) = (centroid(0..per), centroid(per..2 * per));
        let within = (0..per)
            .map(|j| dist(p[j], ca))
            .chain((per..2 * per).map(|j| dist(p[j], cb)))
            .sum::<f64>()
            / (2 * per) as f64;
        assert!(dist(ca, cb) >= within);
    }

    #[test]
    fn sign_convention_is_stable() {
        let x = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 6.0, 0.0, 1.0, 0.0]);
        let mut neg = x.clone();
        neg.neg_mut();
        // Reflecting the data flips the loadings, which the convention undoes.
        let a = project_columns(&x).unwrap();
        let b = project_columns(&neg).unwrap();
        for (pa, pb) in a.iter().zip(&b) {
            assert!((pa.0 + pb.0).abs() < 1e-9);
        }
        assert!(project_columns(&DMatrix::zeros(2, 1)).is_err());
    }

    #[test]
    fn arousal_curve_basics() {
        let lex = AffectLexicon::from_arousal([("calm", 4.0), ("hot", 4.5), ("cold", 3.5)]);
        let one = vec![vec!["calm".to_string()]];
        assert_eq!(arousal_curve(&one, &lex, 4.0), vec![0.0]);
        let docs = vec![
            vec!["hot".to_string()],
            vec!["cold".to_string(), "zzz".to_string()],
            vec!["zzz".to_string()],
        ];
        assert_eq!(arousal_curve(&docs, &lex, 4.0), vec![-0.5, 0.0, 0.5]);
    }
}
