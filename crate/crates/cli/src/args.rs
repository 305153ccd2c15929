use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use topspace::affect::{AffectWeighting, ColumnMap};
use topspace::eval::{TopicMode, TopicVocabulary};
use topspace::representation::LocalWeight;
use topspace::topics::LdaConfig;
use topspace::{ClassifierKind, ContextMode, Representation};

#[derive(Debug, Parser)]
#[command(name = "topspace", version, about = "Idiom vs literal classification in topic space")]
pub struct Cli {
    /// Plain key=value file of defaults; explicit flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: CliCommand,
}

pub const SUBCOMMANDS: &[&str] = &["evaluate", "topics", "project", "arousal-curve", "synth", "validate"];

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Run repeated split/fit/score experiments and write a results table.
    Evaluate(EvaluateArgs),
    /// Dump the per-document topics of every annotated context.
    Topics(TopicsArgs),
    /// Write 2-D coordinates of the training representation, per class.
    Project(ProjectArgs),
    /// Write sorted per-document centered arousal, per class.
    ArousalCurve(ArousalCurveArgs),
    /// Generate a synthetic corpus with known class vocabularies.
    Synth(SynthArgs),
    /// Check corpus, lexicon and stoplist files.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Context {
    Single,
    Multi,
}

impl From<Context> for ContextMode {
    fn from(c: Context) -> Self {
        match c {
            Context::Single => ContextMode::SingleParagraph,
            Context::Multi => ContextMode::MultiParagraph,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OnOff {
    On,
    Off,
}

impl OnOff {
    pub fn on(self) -> bool {
        self == OnOff::On
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReprChoice {
    Text,
    Topics,
    All,
}

impl ReprChoice {
    pub fn expand(self) -> Vec<Representation> {
        match self {
            ReprChoice::Text => vec![Representation::Text],
            ReprChoice::Topics => vec![Representation::Topics],
            ReprChoice::All => vec![Representation::Text, Representation::Topics],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassifierChoice {
    Fda,
    Svm,
    All,
}

impl ClassifierChoice {
    pub fn expand(self) -> Vec<ClassifierKind> {
        match self {
            ClassifierChoice::Fda => vec![ClassifierKind::FdaKnn],
            ClassifierChoice::Svm => vec![ClassifierKind::Svm],
            ClassifierChoice::All => vec![ClassifierKind::FdaKnn, ClassifierKind::Svm],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AffectChoice {
    On,
    Off,
    Both,
}

impl AffectChoice {
    pub fn expand(self) -> Vec<bool> {
        match self {
            AffectChoice::On => vec![true],
            AffectChoice::Off => vec![false],
            AffectChoice::Both => vec![false, true],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LdaMode {
    PerDocument,
    Collection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TopicVocab {
    PerClass,
    Shared,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Weight {
    Raw,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ArousalWeight {
    Indicator,
    Tf,
}

/// Context extraction and preprocessing.
#[derive(Debug, Clone, Args)]
pub struct ContextArgs {
    /// Target paragraph only, or the target paragraph with its neighbours.
    #[arg(long, value_enum, default_value_t = Context::Single)]
    pub context: Context,
    /// Keep the target expression's own tokens in its context.
    #[arg(long, value_enum, default_value_t = OnOff::On)]
    pub keep_target: OnOff,
    /// Stoplist file, one word per line; `#` starts a comment.
    #[arg(long, value_name = "FILE")]
    pub stoplist: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct LdaArgs {
    /// Topics per LDA fit [default: 2 for single, 4 for multi].
    #[arg(long)]
    pub topics: Option<usize>,
    /// Terms kept per topic.
    #[arg(long, default_value_t = 10)]
    pub terms: usize,
    /// Document-topic prior [default: 50 / topics].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Topic-word prior.
    #[arg(long, default_value_t = 0.1)]
    pub beta: f64,
    /// Gibbs sweeps.
    #[arg(long, default_value_t = 1000)]
    pub iterations: usize,
    /// One fit per context, or one fit per class over all its contexts.
    #[arg(long, value_enum, default_value_t = LdaMode::PerDocument)]
    pub lda_mode: LdaMode,
    /// Topics of the per-class fit in collection mode.
    #[arg(long, default_value_t = 10)]
    pub collection_topics: usize,
    /// Vocabulary each context's topics are drawn from.
    #[arg(long, value_enum, default_value_t = TopicVocab::PerClass)]
    pub topic_vocab: TopicVocab,
}

impl LdaArgs {
    pub fn config(&self, context: Context, seed: u64) -> LdaConfig {
        let m = self.topics.unwrap_or(match context {
            Context::Single => 2,
            Context::Multi => 4,
        });
        let mut cfg = LdaConfig::new(m, self.terms);
        if let Some(a) = self.alpha {
            cfg.alpha = a;
        }
        cfg.beta = self.beta;
        cfg.iterations = self.iterations;
        cfg.seed = seed;
        cfg
    }

    pub fn mode(&self) -> TopicMode {
        match self.lda_mode {
            LdaMode::PerDocument => TopicMode::PerDocument,
            LdaMode::Collection => TopicMode::Collection {
                topics: self.collection_topics,
            },
        }
    }

    pub fn vocabulary(&self) -> TopicVocabulary {
        match self.topic_vocab {
            TopicVocab::PerClass => TopicVocabulary::PerClass,
            TopicVocab::Shared => TopicVocabulary::Shared,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct LexiconArgs {
    /// Affective norms, comma or tab separated with a header row.
    #[arg(long, value_name = "FILE")]
    pub lexicon: Option<PathBuf>,
    #[arg(long, default_value = "Word")]
    pub lex_word_col: String,
    /// Set to an empty string to ignore valence.
    #[arg(long, default_value = "V.Mean.Sum")]
    pub lex_valence_col: String,
    #[arg(long, default_value = "A.Mean.Sum")]
    pub lex_arousal_col: String,
    /// Set to an empty string to ignore dominance.
    #[arg(long, default_value = "D.Mean.Sum")]
    pub lex_dominance_col: String,
}

impl LexiconArgs {
    pub fn columns(&self) -> ColumnMap {
        let opt = |s: &str| (!s.is_empty()).then(|| s.to_string());
        ColumnMap {
            word: self.lex_word_col.clone(),
            valence: opt(&self.lex_valence_col),
            arousal: self.lex_arousal_col.clone(),
            dominance: opt(&self.lex_dominance_col),
        }
    }
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Annotated corpus (JSON lines); repeat for several datasets.
    #[arg(long, required = true, value_name = "FILE")]
    pub corpus: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReprChoice::Topics)]
    pub repr: ReprChoice,
    #[arg(long, value_enum, default_value_t = ClassifierChoice::Fda)]
    pub classifier: ClassifierChoice,
    /// Add centered arousal to the features.
    #[arg(long, value_enum, default_value_t = AffectChoice::Off)]
    pub affect: AffectChoice,
    /// How arousal enters a cell: once per present term, or scaled by its count.
    #[arg(long, value_enum, default_value_t = ArousalWeight::Indicator)]
    pub affect_weighting: ArousalWeight,
    #[command(flatten)]
    pub lexicon: LexiconArgs,
    #[command(flatten)]
    pub context: ContextArgs,
    #[command(flatten)]
    pub lda: LdaArgs,
    /// Local weight applied to raw counts before idf.
    #[arg(long, value_enum, default_value_t = Weight::Raw)]
    pub local_weight: Weight,
    /// Training idioms per run [default: 3/4 of the smaller class].
    #[arg(long, requires = "train_literals")]
    pub train_idioms: Option<usize>,
    /// Training literals per run [default: 3/4 of the smaller class].
    #[arg(long, requires = "train_idioms")]
    pub train_literals: Option<usize>,
    #[arg(long, default_value_t = 10)]
    pub runs: usize,
    /// Base seed; run r uses seed XOR r.
    #[arg(long, env = "TOPSPACE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Use k = ceil(n/5) neighbours (the default).
    #[arg(long, overrides_with = "knn")]
    pub knn_auto: bool,
    /// Fixed neighbour count.
    #[arg(long, overrides_with = "knn_auto")]
    pub knn: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub svm_c: f64,
    /// RBF width [default: 1 / number of features].
    #[arg(long)]
    pub svm_gamma: Option<f64>,
    /// Results table path; a `.json` sidecar is written next to it.
    #[arg(long, short, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Directory for run-0 matrices, vocabularies and models.
    #[arg(long, value_name = "DIR")]
    pub dump_dir: Option<PathBuf>,
}

impl EvaluateArgs {
    pub fn local_weight(&self) -> LocalWeight {
        match self.local_weight {
            Weight::Raw => LocalWeight::Raw,
            Weight::Log => LocalWeight::Log,
        }
    }

    pub fn affect_weighting(&self) -> AffectWeighting {
        match self.affect_weighting {
            ArousalWeight::Indicator => AffectWeighting::Indicator,
            ArousalWeight::Tf => AffectWeighting::TermFrequency,
        }
    }
}

#[derive(Debug, Args)]
pub struct TopicsArgs {
    #[arg(long, value_name = "FILE")]
    pub corpus: PathBuf,
    #[command(flatten)]
    pub context: ContextArgs,
    #[command(flatten)]
    pub lda: LdaArgs,
    #[arg(long, env = "TOPSPACE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Output file [default: stdout].
    #[arg(long, short, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    #[arg(long, value_name = "FILE")]
    pub corpus: PathBuf,
    #[arg(long, value_enum, default_value_t = ReprArg::Topics)]
    pub repr: ReprArg,
    #[arg(long, value_enum, default_value_t = OnOff::Off)]
    pub affect: OnOff,
    #[command(flatten)]
    pub lexicon: LexiconArgs,
    #[command(flatten)]
    pub context: ContextArgs,
    #[command(flatten)]
    pub lda: LdaArgs,
    #[arg(long, env = "TOPSPACE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Writes PREFIX.idiom.txt and PREFIX.literal.txt.
    #[arg(long, short, value_name = "PREFIX")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReprArg {
    Text,
    Topics,
}

impl From<ReprArg> for Representation {
    fn from(r: ReprArg) -> Self {
        match r {
            ReprArg::Text => Representation::Text,
            ReprArg::Topics => Representation::Topics,
        }
    }
}

#[derive(Debug, Args)]
pub struct ArousalCurveArgs {
    #[arg(long, value_name = "FILE")]
    pub corpus: PathBuf,
    #[command(flatten)]
    pub lexicon: LexiconArgs,
    #[command(flatten)]
    pub context: ContextArgs,
    /// Writes PREFIX.idiom.txt and PREFIX.literal.txt.
    #[arg(long, short, value_name = "PREFIX")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 30)]
    pub idioms: usize,
    #[arg(long, default_value_t = 20)]
    pub literals: usize,
    /// Distinct words per class.
    #[arg(long, default_value_t = 40)]
    pub vocab_size: usize,
    /// Tokens per paragraph.
    #[arg(long, default_value_t = 80)]
    pub doc_len: usize,
    /// Fraction of each class vocabulary shared with the other class.
    #[arg(long, default_value_t = 0.0)]
    pub overlap: f64,
    #[arg(long, default_value_t = 3)]
    pub paragraphs: usize,
    #[arg(long, env = "TOPSPACE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Corpus output (JSON lines).
    #[arg(long, short, value_name = "FILE")]
    pub out: PathBuf,
    /// Also write a matching arousal lexicon.
    #[arg(long, value_name = "FILE")]
    pub lexicon_out: Option<PathBuf>,
    /// Added to the arousal of idiom-only words in the lexicon.
    #[arg(long, default_value_t = 1.0)]
    pub arousal_shift: f64,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Corpus files to check.
    #[arg(required = true, value_name = "FILE")]
    pub corpora: Vec<PathBuf>,
    #[command(flatten)]
    pub lexicon: LexiconArgs,
    #[arg(long, value_name = "FILE")]
    pub stoplist: Option<PathBuf>,
}
