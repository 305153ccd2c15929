//! Topic-space classification of idiomatic versus literal occurrences of
//! verb-noun expressions.
//!
//! The pipeline re-represents each occurrence's paragraph context by the
//! top terms of its LDA topics, builds idf-weighted term-by-document
//! matrices over those topic terms, optionally adds centered arousal norms,
//! and classifies with a two-class Fisher discriminant followed by a
//! nearest-neighbour vote. A Gaussian-kernel SVM and the plain text
//! representation serve as baselines.
//!
//! ```
//! use topspace::eval::{gen_synthetic, run_experiment, ExperimentConfig, SynthConfig};
//! use topspace::{ClassifierKind, ContextMode, Representation, Stoplist};
//!
//! let data = gen_synthetic(&SynthConfig::new(30, 20, 7));
//! let mut config = ExperimentConfig::new(Representation::Topics, ClassifierKind::FdaKnn, ContextMode::SingleParagraph);
//! config.lda.iterations = 50;
//! config.split = Some((15, 15));
//! config.runs = 2;
//! let result = run_experiment(&data, &config, &Stoplist::default_english(), None).unwrap();
//! assert!(result.mean.accuracy > 0.8);
//! ```

pub mod affect;
pub mod classify;
pub mod corpus;
pub mod eval;
pub mod representation;
pub mod topics;

pub use affect::{AffectLexicon, ArousalContext, ColumnMap};
pub use classify::{FdaModel, ScatterSet, SvmModel};
pub use corpus::{ContextMode, Dataset, Instance, Label, Stoplist};
pub use eval::{ClassifierKind, Metrics, Representation, RunResult};
pub use representation::{TermDocMatrix, Vocabulary};
pub use topics::{LdaConfig, LdaModel, TopicSet};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Corpus(#[from] corpus::CorpusError),
    #[error(transparent)]
    Representation(#[from] representation::RepresentationError),
    #[error(transparent)]
    Lda(#[from] topics::LdaError),
    #[error(transparent)]
    Affect(#[from] affect::AffectError),
    #[error(transparent)]
    Classify(#[from] classify::ClassifyError),
    #[error(transparent)]
    Eval(#[from] eval::EvalError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
