use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::confusion;
use super::pipeline::{build_features, Contexts, FeatureSpace, TopicMode, TopicVocabulary};
use super::split::{default_split, random_split, Split};
use super::{ClassifierKind, Confusion, EvalError, Metrics, Representation};
use crate::affect::{AffectLexicon, AffectWeighting};
use crate::classify::{fit_fda, fit_svm, svm_classify, SvmConfig};
use crate::corpus::{ContextMode, Dataset, Label, Preprocessor, Stoplist};
use crate::representation::LocalWeight;
use crate::topics::{derive_seed, LdaConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub context_mode: ContextMode,
    pub representation: Representation,
    pub affect: bool,
    pub affect_weighting: AffectWeighting,
    pub classifier: ClassifierKind,
    pub lda: LdaConfig,
    pub topic_mode: TopicMode,
    pub topic_vocabulary: TopicVocabulary,
    pub local_weight: LocalWeight,
    pub keep_target: bool,
    /// Training idioms and literals per run; `None` uses [`default_split`].
    pub split: Option<(usize, usize)>,
    pub runs: usize,
    pub seed: u64,
    /// Neighbour count override; `None` means `⌈n/5⌉`.
    pub knn: Option<usize>,
    pub svm: SvmConfig,
}

impl ExperimentConfig {
    /// Two topics of ten terms for single paragraphs, four for three.
    pub fn new(representation: Representation, classifier: ClassifierKind, context_mode: ContextMode) -> Self {
        let topics = match context_mode {
            ContextMode::SingleParagraph => 2,
            ContextMode::MultiParagraph => 4,
        };
        ExperimentConfig {
            context_mode,
            representation,
            affect: false,
            affect_weighting: AffectWeighting::Indicator,
            classifier,
            lda: LdaConfig::new(topics, 10),
            topic_mode: TopicMode::PerDocument,
            topic_vocabulary: TopicVocabulary::PerClass,
            local_weight: LocalWeight::Raw,
            keep_target: true,
            split: None,
            runs: 10,
            seed: 0,
            knn: None,
            svm: SvmConfig::default(),
        }
    }

    pub fn preprocessor(&self, stoplist: &Stoplist) -> Preprocessor {
        Preprocessor {
            stoplist: stoplist.clone(),
            keep_target: self.keep_target,
            mode: self.context_mode,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub run: usize,
    pub seed: u64,
    pub confusion: Confusion,
    pub metrics: Metrics,
    /// Training contexts dropped because no topic could be extracted.
    pub skipped: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub runs: Vec<RunOutcome>,
    pub mean: Metrics,
}

/// Everything one run builds before a classifier is fitted.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub seed: u64,
    pub split: Split,
    pub train: Contexts,
    pub test: Contexts,
    pub lda: LdaConfig,
    pub space: FeatureSpace,
}

/// Split and feature construction for run `run`, seeded with `seed ^ run`.
pub fn prepare_run(
    dataset: &Dataset,
    config: &ExperimentConfig,
    pre: &Preprocessor,
    lexicon: Option<&AffectLexicon>,
    run: usize,
) -> crate::Result<RunArtifacts> {
    let (train_i, train_l) = config.split.unwrap_or_else(|| default_split(dataset));
    let seed = config.seed ^ run as u64;
    let split = random_split(dataset, train_i, train_l, seed)?;
    let train = Contexts::from_dataset(dataset, &split.train, pre);
    let test = Contexts::from_dataset(dataset, &split.test, pre);
    let lda = LdaConfig {
        seed: derive_seed(seed, config.lda.seed),
        ..config.lda.clone()
    };
    let space = build_features(config, &lda, &train, &test, lexicon)?;
    Ok(RunArtifacts {
        seed,
        split,
        train,
        test,
        lda,
        space,
    })
}

fn one_run(
    dataset: &Dataset,
    config: &ExperimentConfig,
    pre: &Preprocessor,
    lexicon: Option<&AffectLexicon>,
    run: usize,
) -> crate::Result<RunOutcome> {
    let RunArtifacts { seed, test, space, .. } = prepare_run(dataset, config, pre, lexicon, run)?;

    let predicted: Vec<Label> = match config.classifier {
        ClassifierKind::FdaKnn => {
            let mut model = fit_fda(&space.train.entries, &space.train_labels)?;
            if let Some(k) = config.knn {
                model = model.with_k(k);
            }
            space
                .test
                .entries
                .column_iter()
                .map(|c| model.classify(c.as_view()))
                .collect()
        }
        ClassifierKind::Svm => {
            let model = fit_svm(&space.train.entries, &space.train_labels, &config.svm)?;
            if !model.converged {
                log::warn!("run {run}: SMO stopped at the iteration cap");
            }
            space
                .test
                .entries
                .column_iter()
                .map(|c| svm_classify(&model, c.as_view()))
                .collect()
        }
    };
    let confusion = confusion(&predicted, &test.labels)?;
    Ok(RunOutcome {
        run,
        seed,
        metrics: confusion.metrics(),
        confusion,
        skipped: space.skipped,
    })
}

/// Repeats split, representation, fit and scoring `config.runs` times with
/// per-run seeds `seed ^ run`, and averages the metrics.
pub fn run_experiment(
    dataset: &Dataset,
    config: &ExperimentConfig,
    stoplist: &Stoplist,
    lexicon: Option<&AffectLexicon>,
) -> crate::Result<RunResult> {
    if config.runs == 0 {
        return Err(EvalError::NoRuns.into());
    }
    if config.affect && lexicon.is_none() {
        return Err(EvalError::MissingLexicon.into());
    }
    let pre = config.preprocessor(stoplist);
    let runs = (0..config.runs)
        .into_par_iter()
        .map(|r| one_run(dataset, config, &pre, lexicon, r))
        .collect::<crate::Result<Vec<_>>>()?;
    let per_run: Vec<Metrics> = runs.iter().map(|r| r.metrics).collect();
    Ok(RunResult {
        mean: Metrics::mean(&per_run),
        runs,
    })
}
