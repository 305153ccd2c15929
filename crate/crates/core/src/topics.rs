//! Latent Dirichlet allocation by collapsed Gibbs sampling, and the
//! topic-term documents built from its top terms.
//!
//! The sampler resamples each token's topic from
//!
//! ```text
//! p(z = t | rest) ∝ (n_dt + α) · (n_tw + β) / (n_t + |V|·β)
//! ```
//!
//! with the token's own assignment removed from the counts. After the last
//! sweep the topic-word table is `φ[t][w] = (n_tw + β) / (n_t + |V|β)` and
//! the document proportions are `θ[d][t] = (n_dt + α) / (N_d + mα)`.

use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::representation::Vocabulary;

#[derive(Debug, Error, PartialEq)]
pub enum LdaError {
    #[error("document has no tokens inside the vocabulary")]
    EmptyDocument,
    #[error("invalid LDA configuration: {0}")]
    InvalidConfig(&'static str),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LdaConfig {
    pub num_topics: usize,
    pub terms_per_topic: usize,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub seed: u64,
}

impl LdaConfig {
    /// `alpha = 50/m`, `beta = 0.1`, 1000 sweeps.
    pub fn new(num_topics: usize, terms_per_topic: usize) -> Self {
        LdaConfig {
            num_topics,
            terms_per_topic,
            alpha: 50.0 / num_topics.max(1) as f64,
            beta: 0.1,
            iterations: 1000,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), LdaError> {
        if self.num_topics == 0 {
            return Err(LdaError::InvalidConfig("num_topics must be >= 1"));
        }
        if self.terms_per_topic == 0 {
            return Err(LdaError::InvalidConfig("terms_per_topic must be >= 1"));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(LdaError::InvalidConfig("alpha must be positive"));
        }
        if !(self.beta > 0.0 && self.beta.is_finite()) {
            return Err(LdaError::InvalidConfig("beta must be positive"));
        }
        if self.iterations == 0 {
            return Err(LdaError::InvalidConfig("iterations must be >= 1"));
        }
        Ok(())
    }
}

/// SplitMix64 finalizer over `seed ^ index`, for per-document streams.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sufficient statistics of the sampler.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsCounts {
    /// `doc_topic[d][t]`
    pub doc_topic: Vec<Vec<u32>>,
    /// `topic_word[t][w]`
    pub topic_word: Vec<Vec<u32>>,
    pub topic_totals: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LdaModel {
    pub vocab: Vocabulary,
    /// `num_topics × |V|`
    pub phi: Vec<Vec<f64>>,
    /// `n_docs × num_topics`
    pub theta: Vec<Vec<f64>>,
    /// Vocabulary ids of the in-vocabulary tokens, per document.
    pub tokens: Vec<Vec<usize>>,
    /// Final topic of each token in `tokens`.
    pub assignments: Vec<Vec<usize>>,
}

impl LdaModel {
    pub fn num_topics(&self) -> usize {
        self.phi.len()
    }
}

/// Fits one document, as the per-document topic pathway does.
pub fn fit_lda(doc: &[String], vocab: &Vocabulary, config: &LdaConfig) -> Result<LdaModel, LdaError> {
    fit_lda_corpus(std::slice::from_ref(&doc.to_vec()), vocab, config)
}

pub fn fit_lda_corpus<D: AsRef<[String]>>(
    docs: &[D],
    vocab: &Vocabulary,
    config: &LdaConfig,
) -> Result<LdaModel, LdaError> {
    fit_lda_observed(docs, vocab, config, |_, _| {})
}

/// Like [`fit_lda_corpus`], calling `observer(sweep, counts)` after every
/// sweep.
pub fn fit_lda_observed<D, F>(
    docs: &[D],
    vocab: &Vocabulary,
    config: &LdaConfig,
    mut observer: F,
) -> Result<LdaModel, LdaError>
where
    D: AsRef<[String]>,
    F: FnMut(usize, &GibbsCounts),
{
    config.validate()?;
    let tokens: Vec<Vec<usize>> = docs.iter().map(|d| vocab.encode(d.as_ref())).collect();
    if tokens.iter().all(Vec::is_empty) {
        return Err(LdaError::EmptyDocument);
    }
    let m = config.num_topics;
    let v = vocab.len();
    let (alpha, beta) = (config.alpha, config.beta);
    let v_beta = v as f64 * beta;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut counts = GibbsCounts {
        doc_topic: vec![vec![0; m]; tokens.len()],
        topic_word: vec![vec![0; v]; m],
        topic_totals: vec![0; m],
    };
    let mut z: Vec<Vec<usize>> = Vec::with_capacity(tokens.len());
    for (d, doc) in tokens.iter().enumerate() {
        let zd: Vec<usize> = doc
            .iter()
            .map(|&w| {
                let t = rng.gen_range(0..m);
                counts.doc_topic[d][t] += 1;
                counts.topic_word[t][w] += 1;
                counts.topic_totals[t] += 1;
                t
            })
            .collect();
        z.push(zd);
    }

    let mut weights = vec![0.0f64; m];
    for sweep in 0..config.iterations {
        for (d, doc) in tokens.iter().enumerate() {
            for (i, &w) in doc.iter().enumerate() {
                let old = z[d][i];
                counts.doc_topic[d][old] -= 1;
                counts.topic_word[old][w] -= 1;
                counts.topic_totals[old] -= 1;

                let mut total = 0.0;
                for (t, weight) in weights.iter_mut().enumerate() {
                    *weight = (counts.doc_topic[d][t] as f64 + alpha) * (counts.topic_word[t][w] as f64 + beta)
                        / (counts.topic_totals[t] as f64 + v_beta);
                    total += *weight;
                }
                let mut u = rng.gen::<f64>() * total;
                let mut new = m - 1;
                for (t, &weight) in weights.iter().enumerate() {
                    if u < weight {
                        new = t;
                        break;
                    }
                    u -= weight;
                }

                z[d][i] = new;
                counts.doc_topic[d][new] += 1;
                counts.topic_word[new][w] += 1;
                counts.topic_totals[new] += 1;
            }
        }
        observer(sweep, &counts);
    }

    let phi = (0..m)
        .map(|t| {
            let denom = counts.topic_totals[t] as f64 + v_beta;
            counts.topic_word[t]
                .iter()
                .map(|&c| (c as f64 + beta) / denom)
                .collect()
        })
        .collect();
    let theta = counts
        .doc_topic
        .iter()
        .zip(&tokens)
        .map(|(row, doc)| {
            let denom = doc.len() as f64 + m as f64 * alpha;
            row.iter().map(|&c| (c as f64 + alpha) / denom).collect()
        })
        .collect();
    Ok(LdaModel {
        vocab: vocab.clone(),
        phi,
        theta,
        tokens,
        assignments: z,
    })
}

/// One topic: terms with their probabilities, most probable first.
pub type Topic = Vec<(String, f64)>;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TopicSet {
    pub topics: Vec<Topic>,
}

impl TopicSet {
    /// `topic_i: term:prob ...` per line, 6 decimals.
    pub fn write_dump<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (i, topic) in self.topics.iter().enumerate() {
            write!(out, "topic_{i}:")?;
            for (term, p) in topic {
                write!(out, " {term}:{p:.6}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

fn top_terms(model: &LdaModel, topic: usize, k: usize) -> Topic {
    let row = &model.phi[topic];
    let mut order: Vec<usize> = (0..row.len()).collect();
    // Stable sort keeps ascending term index among equal probabilities.
    order.sort_by(|&a, &b| row[b].total_cmp(&row[a]));
    order
        .into_iter()
        .take(k)
        .map(|w| (model.vocab.term(w).to_string(), row[w]))
        .collect()
}

/// The `k` most probable terms of every topic.
pub fn extract_topics(model: &LdaModel, k: usize) -> TopicSet {
    TopicSet {
        topics: (0..model.num_topics()).map(|t| top_terms(model, t, k)).collect(),
    }
}

/// The `m` topics with the largest share in document `doc` of a collection
/// model, each truncated to `k` terms.
pub fn document_topics(model: &LdaModel, doc: usize, m: usize, k: usize) -> TopicSet {
    let theta = &model.theta[doc];
    let mut order: Vec<usize> = (0..theta.len()).collect();
    order.sort_by(|&a, &b| theta[b].total_cmp(&theta[a]));
    TopicSet {
        topics: order.into_iter().take(m).map(|t| top_terms(model, t, k)).collect(),
    }
}

/// Concatenates the topics' terms in order. Terms shared between topics
/// appear once per topic.
pub fn topic_document(topics: &TopicSet) -> Vec<String> {
    topics
        .topics
        .iter()
        .flat_map(|t| t.iter().map(|(term, _)| term.clone()))
        .collect()
}
