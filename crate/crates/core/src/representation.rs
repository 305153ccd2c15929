//! Vocabularies and idf-weighted term-by-document matrices.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RepresentationError {
    #[error("vocabulary is empty: no tokens in any document")]
    EmptyVocabulary,
    #[error("weights have length {weights} but vocabulary has {vocab} terms")]
    Misaligned { vocab: usize, weights: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Sorted set of distinct terms with a reverse index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn from_terms<I, S>(terms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let sorted: BTreeSet<String> = terms.into_iter().map(Into::into).collect();
        let terms: Vec<String> = sorted.into_iter().collect();
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Vocabulary { terms, index }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn term(&self, i: usize) -> &str {
        &self.terms[i]
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.index.contains_key(term)
    }

    /// Token ids of `doc`, dropping out-of-vocabulary tokens.
    pub fn encode(&self, doc: &[String]) -> Vec<usize> {
        doc.iter().filter_map(|t| self.index_of(t)).collect()
    }
}

pub fn build_vocabulary<D: AsRef<[String]>>(docs: &[D]) -> Result<Vocabulary, RepresentationError> {
    let vocab = Vocabulary::from_terms(docs.iter().flat_map(|d| d.as_ref().iter().cloned()));
    if vocab.is_empty() {
        return Err(RepresentationError::EmptyVocabulary);
    }
    Ok(vocab)
}

/// `ln(n_docs / df)` per term; terms that never occur get weight 0.
pub fn idf_weights<D: AsRef<[String]>>(docs: &[D], vocab: &Vocabulary) -> DVector<f64> {
    let mut df = vec![0usize; vocab.len()];
    for doc in docs {
        let present: BTreeSet<usize> = vocab.encode(doc.as_ref()).into_iter().collect();
        for i in present {
            df[i] += 1;
        }
    }
    let n = docs.len() as f64;
    DVector::from_iterator(
        vocab.len(),
        df.into_iter().map(|d| if d == 0 { 0.0 } else { (n / d as f64).ln() }),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LocalWeight {
    /// Raw term frequency.
    #[default]
    Raw,
    /// `1 + ln(tf)` for `tf > 0`.
    Log,
}

impl LocalWeight {
    fn apply(self, tf: f64) -> f64 {
        match self {
            LocalWeight::Raw => tf,
            LocalWeight::Log if tf > 0.0 => 1.0 + tf.ln(),
            LocalWeight::Log => 0.0,
        }
    }
}

/// Terms are rows, documents are columns.
#[derive(Debug, Clone, PartialEq)]
pub struct TermDocMatrix {
    pub vocab: Vocabulary,
    pub entries: DMatrix<f64>,
    /// Raw occurrence counts backing `entries`.
    pub counts: DMatrix<f64>,
    pub global_weights: DVector<f64>,
    pub doc_ids: Vec<String>,
}

impl TermDocMatrix {
    pub fn n_docs(&self) -> usize {
        self.entries.ncols()
    }

    pub fn n_terms(&self) -> usize {
        self.entries.nrows()
    }

    pub fn column(&self, j: usize) -> DVector<f64> {
        self.entries.column(j).into_owned()
    }

    /// Delimited dump: a header of document ids, then `term,w1,...,wn`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        write!(out, "term")?;
        for id in &self.doc_ids {
            write!(out, ",{id}")?;
        }
        writeln!(out)?;
        for (i, term) in self.vocab.terms().iter().enumerate() {
            write!(out, "{term}")?;
            for j in 0..self.n_docs() {
                write!(out, ",{:.6}", self.entries[(i, j)])?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

fn count_matrix<D: AsRef<[String]>>(docs: &[D], vocab: &Vocabulary) -> DMatrix<f64> {
    let mut counts = DMatrix::zeros(vocab.len(), docs.len());
    for (j, doc) in docs.iter().enumerate() {
        for i in vocab.encode(doc.as_ref()) {
            counts[(i, j)] += 1.0;
        }
    }
    counts
}

pub fn term_doc_matrix<D: AsRef<[String]>>(
    docs: &[D],
    doc_ids: Vec<String>,
    vocab: &Vocabulary,
    global_weights: &DVector<f64>,
    local: LocalWeight,
) -> Result<TermDocMatrix, RepresentationError> {
    if global_weights.len() != vocab.len() {
        return Err(RepresentationError::Misaligned {
            vocab: vocab.len(),
            weights: global_weights.len(),
        });
    }
    assert_eq!(doc_ids.len(), docs.len(), "one id per document");
    let counts = count_matrix(docs, vocab);
    let mut entries = counts.map(|c| local.apply(c));
    for (i, mut row) in entries.row_iter_mut().enumerate() {
        row *= global_weights[i];
    }
    Ok(TermDocMatrix {
        vocab: vocab.clone(),
        entries,
        counts,
        global_weights: global_weights.clone(),
        doc_ids,
    })
}

/// Training matrix: vocabulary and idf both come from `docs`.
pub fn training_matrix<D: AsRef<[String]>>(
    docs: &[D],
    doc_ids: Vec<String>,
    local: LocalWeight,
) -> Result<TermDocMatrix, RepresentationError> {
    let vocab = build_vocabulary(docs)?;
    let idf = idf_weights(docs, &vocab);
    term_doc_matrix(docs, doc_ids, &vocab, &idf, local)
}

/// Query columns over the training vocabulary and idf. Unknown tokens are
/// ignored, so a query sharing nothing with training yields a zero column.
pub fn query_matrix<D: AsRef<[String]>>(
    query_docs: &[D],
    doc_ids: Vec<String>,
    train: &TermDocMatrix,
    local: LocalWeight,
) -> TermDocMatrix {
    term_doc_matrix(query_docs, doc_ids, &train.vocab, &train.global_weights, local)
        .expect("training matrix is aligned")
}

/// Writes the `.vocab` sidecar: `term,idf` per line, shortest round-trip
/// float formatting.
pub fn write_vocab<W: Write>(vocab: &Vocabulary, weights: &DVector<f64>, mut out: W) -> io::Result<()> {
    for (term, w) in vocab.terms().iter().zip(weights.iter()) {
        writeln!(out, "{term},{w:?}")?;
    }
    Ok(())
}

pub fn read_vocab<R: BufRead>(reader: R) -> Result<(Vocabulary, DVector<f64>), RepresentationError> {
    let mut pairs = Vec::new();
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let (term, w) = line.rsplit_once(',').ok_or_else(|| RepresentationError::Parse {
            line: n + 1,
            message: "expected term,idf".into(),
        })?;
        let w: f64 = w.parse().map_err(|e| RepresentationError::Parse {
            line: n + 1,
            message: format!("bad weight {w:?}: {e}"),
        })?;
        pairs.push((term.to_string(), w));
    }
    let vocab = Vocabulary::from_terms(pairs.iter().map(|(t, _)| t.clone()));
    if vocab.len() != pairs.len() {
        return Err(RepresentationError::Parse {
            line: 0,
            message: "duplicate terms".into(),
        });
    }
    let mut weights = DVector::zeros(vocab.len());
    for (t, w) in pairs {
        weights[vocab.index_of(&t).unwrap()] = w;
    }
    Ok((vocab, weights))
}

pub fn save_vocab(path: impl AsRef<Path>, vocab: &Vocabulary, weights: &DVector<f64>) -> io::Result<()> {
    let mut out = io::BufWriter::new(fs::File::create(path)?);
    write_vocab(vocab, weights, &mut out)?;
    out.flush()
}
