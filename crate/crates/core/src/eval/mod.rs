//! Experiment protocol: seeded class-stratified splits, repeated runs,
//! precision/recall/accuracy with idioms as the positive class, plus the
//! synthetic corpora and plot data used to check the pipeline at desk
//! scale.

mod experiment;
mod metrics;
mod pipeline;
mod plot;
mod report;
mod split;
mod synth;

pub use experiment::{prepare_run, run_experiment, ExperimentConfig, RunArtifacts, RunOutcome, RunResult};
pub use metrics::{compute_metrics, Confusion, Metrics};
pub use pipeline::{
    build_features, topic_documents, Contexts, FeatureSpace, TopicDocuments, TopicMode, TopicVocabulary,
};
pub use plot::{arousal_curve, projection_2d};
pub use report::{model_name, ResultsTable};
pub use split::{default_split, random_split, Split};
pub use synth::{gen_synthetic, gen_synthetic_lexicon, SynthConfig};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Label;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("requested {requested} training {class} examples but only {available} available")]
    Insufficient {
        class: Label,
        requested: usize,
        available: usize,
    },
    #[error("training split is empty")]
    EmptyTrain,
    #[error("nothing left to test after the split")]
    EmptyTest,
    #[error("{predicted} predictions for {gold} gold labels")]
    LengthMismatch { predicted: usize, gold: usize },
    #[error("the affect feature needs a lexicon")]
    MissingLexicon,
    #[error("runs must be at least 1")]
    NoRuns,
    #[error("projection needs at least two documents")]
    TooFewDocuments,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Representation {
    /// Raw context terms.
    Text,
    /// Top terms of per-document LDA topics.
    Topics,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassifierKind {
    FdaKnn,
    Svm,
}
