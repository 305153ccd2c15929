//! Training and query matrices for one split.
//!
//! Topic pathway: per-class vocabularies from the training contexts, LDA
//! over each training context restricted to its class vocabulary, topic
//! documents from the top terms, and idf-weighted matrices over the topic
//! vocabulary. Query contexts are never run through LDA; their raw tokens
//! are weighted with the training vocabulary and idf.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ExperimentConfig;
use super::{EvalError, Representation};
use crate::affect::{add_affect, arousal_matrix, AffectLexicon, ArousalContext};
use crate::corpus::{Dataset, Label, Preprocessor};
use crate::representation::{build_vocabulary, query_matrix, training_matrix, TermDocMatrix, Vocabulary};
use crate::topics::{
    derive_seed, document_topics, extract_topics, fit_lda, fit_lda_corpus, topic_document, LdaConfig, LdaError,
    TopicSet,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TopicMode {
    /// One LDA fit per training context.
    #[default]
    PerDocument,
    /// One fit per class over all its training contexts with `topics`
    /// topics; each context keeps its most probable ones.
    Collection { topics: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum TopicVocabulary {
    /// Idiom contexts use the idiom-only vocabulary, literal contexts the
    /// literal-only one.
    #[default]
    PerClass,
    /// Both classes share the union vocabulary.
    Shared,
}

/// Topic documents of the training contexts that produced topics.
#[derive(Debug, Clone, PartialEq)]
pub struct TopicDocuments {
    /// Positions in the input of the contexts that were kept.
    pub kept: Vec<usize>,
    pub topic_sets: Vec<TopicSet>,
    pub docs: Vec<Vec<String>>,
    /// Positions with no in-vocabulary tokens.
    pub skipped: Vec<usize>,
}

fn class_vocabularies(docs: &[Vec<String>], labels: &[Label], mode: TopicVocabulary) -> [Option<Vocabulary>; 2] {
    let pick = |class: Option<Label>| {
        let group: Vec<&Vec<String>> = docs
            .iter()
            .zip(labels)
            .filter(|(_, &l)| class.is_none_or(|c| c == l))
            .map(|(d, _)| d)
            .collect();
        build_vocabulary(&group.iter().map(|d| d.as_slice()).collect::<Vec<_>>()).ok()
    };
    match mode {
        TopicVocabulary::PerClass => [pick(Some(Label::Idiom)), pick(Some(Label::Literal))],
        TopicVocabulary::Shared => {
            let v = pick(None);
            [v.clone(), v]
        }
    }
}

fn class_slot(label: Label) -> usize {
    usize::from(label != Label::Idiom)
}

/// Builds the topic document of every training context.
pub fn topic_documents(
    docs: &[Vec<String>],
    labels: &[Label],
    lda: &LdaConfig,
    mode: TopicMode,
    vocabulary: TopicVocabulary,
) -> crate::Result<TopicDocuments> {
    lda.validate()?;
    let vocabs = class_vocabularies(docs, labels, vocabulary);
    let k = lda.terms_per_topic;

    let sets: Vec<Option<TopicSet>> = match mode {
        TopicMode::PerDocument => docs
            .par_iter()
            .zip(labels.par_iter())
            .enumerate()
            .map(|(i, (doc, &label))| {
                let Some(vocab) = &vocabs[class_slot(label)] else {
                    return Ok(None);
                };
                let cfg = LdaConfig {
                    seed: derive_seed(lda.seed, i as u64),
                    ..lda.clone()
                };
                match fit_lda(doc, vocab, &cfg) {
                    Ok(model) => Ok(Some(extract_topics(&model, k))),
                    Err(LdaError::EmptyDocument) => Ok(None),
                    Err(e) => Err(e),
                }
            })
            .collect::<Result<_, _>>()?,
        TopicMode::Collection { topics } => {
            let mut sets = vec![None; docs.len()];
            let groups: Vec<Vec<usize>> = match vocabulary {
                TopicVocabulary::PerClass => [Label::Idiom, Label::Literal]
                    .iter()
                    .map(|&c| (0..docs.len()).filter(|&i| labels[i] == c).collect())
                    .collect(),
                TopicVocabulary::Shared => vec![(0..docs.len()).collect()],
            };
            for (g, members) in groups.iter().enumerate() {
                let Some(first) = members.first() else { continue };
                let Some(vocab) = &vocabs[class_slot(labels[*first])] else {
                    continue;
                };
                let cfg = LdaConfig {
                    num_topics: topics.max(1),
                    seed: derive_seed(lda.seed, g as u64),
                    ..lda.clone()
                };
                let group_docs: Vec<&[String]> = members.iter().map(|&i| docs[i].as_slice()).collect();
                let model = match fit_lda_corpus(&group_docs, vocab, &cfg) {
                    Ok(m) => m,
                    Err(LdaError::EmptyDocument) => continue,
                    Err(e) => return Err(e.into()),
                };
                for (local, &i) in members.iter().enumerate() {
                    if !model.tokens[local].is_empty() {
                        sets[i] = Some(document_topics(&model, local, lda.num_topics, k));
                    }
                }
            }
            sets
        }
    };

    let mut out = TopicDocuments {
        kept: Vec::new(),
        topic_sets: Vec::new(),
        docs: Vec::new(),
        skipped: Vec::new(),
    };
    for (i, set) in sets.into_iter().enumerate() {
        match set {
            Some(set) => {
                out.kept.push(i);
                out.docs.push(topic_document(&set));
                out.topic_sets.push(set);
            }
            None => {
                log::warn!("training context {i} has no in-vocabulary tokens; skipped");
                out.skipped.push(i);
            }
        }
    }
    Ok(out)
}

/// Preprocessed contexts with ids and gold labels.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Contexts {
    pub ids: Vec<String>,
    pub docs: Vec<Vec<String>>,
    pub labels: Vec<Label>,
}

impl Contexts {
    /// Preprocessed contexts of `dataset.instances[i]` for each `i` in `indices`.
    pub fn from_dataset(dataset: &Dataset, indices: &[usize], pre: &Preprocessor) -> Self {
        let mut c = Contexts::default();
        for &i in indices {
            let inst = &dataset.instances[i];
            c.ids.push(inst.id.clone());
            c.docs.push(pre.context(inst));
            c.labels.push(inst.label);
        }
        c
    }
}

/// Matrices ready for a classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpace {
    /// `M_D`, `M_D̂` or their `Θ` variants.
    pub train: TermDocMatrix,
    pub train_labels: Vec<Label>,
    /// `M_Q` or `Θ_Q`.
    pub test: TermDocMatrix,
    /// Training ids dropped because topic extraction found no tokens.
    pub skipped: Vec<String>,
    pub arousal_mean: Option<f64>,
    pub topics: Option<TopicDocuments>,
}

pub fn build_features(
    config: &ExperimentConfig,
    lda: &LdaConfig,
    train: &Contexts,
    test: &Contexts,
    lexicon: Option<&AffectLexicon>,
) -> crate::Result<FeatureSpace> {
    let (train_docs, train_ids, train_labels, topics, skipped) = match config.representation {
        Representation::Text => (
            train.docs.clone(),
            train.ids.clone(),
            train.labels.clone(),
            None,
            vec![],
        ),
        Representation::Topics => {
            let td = topic_documents(
                &train.docs,
                &train.labels,
                lda,
                config.topic_mode,
                config.topic_vocabulary,
            )?;
            let ids = td.kept.iter().map(|&i| train.ids[i].clone()).collect();
            let labels = td.kept.iter().map(|&i| train.labels[i]).collect();
            let skipped = td.skipped.iter().map(|&i| train.ids[i].clone()).collect();
            (td.docs.clone(), ids, labels, Some(td), skipped)
        }
    };
    if train_docs.is_empty() {
        return Err(EvalError::EmptyTrain.into());
    }
    let mut train_m = training_matrix(&train_docs, train_ids, config.local_weight)?;
    let mut test_m = query_matrix(&test.docs, test.ids.clone(), &train_m, config.local_weight);

    let mut arousal_mean = None;
    if config.affect {
        let lexicon = lexicon.ok_or(EvalError::MissingLexicon)?;
        // Centered on the raw training contexts that stayed in training.
        let kept_raw: Vec<&[String]> = match &topics {
            Some(td) => td.kept.iter().map(|&i| train.docs[i].as_slice()).collect(),
            None => train.docs.iter().map(Vec::as_slice).collect(),
        };
        let mut ctx = ArousalContext::from_training(&kept_raw, lexicon)?;
        ctx.weighting = config.affect_weighting;
        train_m = add_affect(&train_m, &arousal_matrix(&train_m, &ctx))?;
        test_m = add_affect(&test_m, &arousal_matrix(&test_m, &ctx))?;
        arousal_mean = Some(ctx.mean);
    }
    Ok(FeatureSpace {
        train: train_m,
        train_labels,
        test: test_m,
        skipped,
        arousal_mean,
        topics,
    })
}
