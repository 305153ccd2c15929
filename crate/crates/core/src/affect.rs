//! Arousal norms as an additive feature.
//!
//! Each term's arousal is centered by the mean arousal of the training
//! tokens, and the centered value is placed in the cells of the
//! term-by-document matrix where the term occurs. The result is added
//! to the weighted matrix: `Θ = M + A`.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::representation::TermDocMatrix;

#[derive(Debug, Error)]
pub enum AffectError {
    #[error("cannot read lexicon {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("lexicon header has no column {0:?}")]
    MissingColumn(String),
    #[error("lexicon line {line}: {message}")]
    Row { line: usize, message: String },
    #[error("no training token is covered by the lexicon")]
    NoCoverage,
    #[error("matrices are not aligned: {0}")]
    Misaligned(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Norms {
    pub valence: f64,
    pub arousal: f64,
    pub dominance: f64,
}

/// Names of the lexicon columns. Valence and dominance are optional since
/// only arousal is used.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMap {
    pub word: String,
    pub valence: Option<String>,
    pub arousal: String,
    pub dominance: Option<String>,
}

impl Default for ColumnMap {
    fn default() -> Self {
        ColumnMap {
            word: "Word".into(),
            valence: Some("V.Mean.Sum".into()),
            arousal: "A.Mean.Sum".into(),
            dominance: Some("D.Mean.Sum".into()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AffectLexicon {
    entries: HashMap<String, Norms>,
    /// Rows whose lemma had already been seen; the later row wins.
    pub duplicates: usize,
}

impl AffectLexicon {
    pub fn from_entries<I: IntoIterator<Item = (String, Norms)>>(entries: I) -> Self {
        let mut lex = AffectLexicon::default();
        for (w, n) in entries {
            lex.insert(w, n);
        }
        lex
    }

    /// Lexicon with only arousal values; valence and dominance are NaN.
    pub fn from_arousal<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        Self::from_entries(entries.into_iter().map(|(w, a)| {
            (
                w.into(),
                Norms {
                    valence: f64::NAN,
                    arousal: a,
                    dominance: f64::NAN,
                },
            )
        }))
    }

    fn insert(&mut self, word: String, norms: Norms) {
        if self.entries.insert(word.to_lowercase(), norms).is_some() {
            self.duplicates += 1;
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn norms(&self, lemma: &str) -> Option<&Norms> {
        self.entries.get(lemma)
    }

    pub fn arousal(&self, lemma: &str) -> Option<f64> {
        self.entries.get(lemma).map(|n| n.arousal)
    }

    /// Entries sorted by lemma.
    pub fn sorted_entries(&self) -> Vec<(&str, &Norms)> {
        let mut v: Vec<_> = self.entries.iter().map(|(w, n)| (w.as_str(), n)).collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    /// Comma-separated with the default column names.
    pub fn to_csv(&self) -> String {
        let cols = ColumnMap::default();
        let mut out = format!(
            "{},{},{},{}\n",
            cols.word,
            cols.valence.unwrap(),
            cols.arousal,
            cols.dominance.unwrap()
        );
        for (w, n) in self.sorted_entries() {
            out.push_str(&format!("{w},{},{},{}\n", n.valence, n.arousal, n.dominance));
        }
        out
    }

    /// Parses delimited text; the delimiter (tab or comma) is taken from
    /// the header line.
    pub fn parse(text: &str, columns: &ColumnMap) -> Result<Self, AffectError> {
        let header = text.lines().next().unwrap_or("");
        let delimiter = if header.contains('\t') { b'\t' } else { b',' };
        let mut reader = csv::ReaderBuilder::new()
            .delimiter(delimiter)
            .flexible(true)
            .from_reader(text.as_bytes());
        let headers = reader
            .headers()
            .map_err(|e| AffectError::Row {
                line: 1,
                message: e.to_string(),
            })?
            .clone();
        let find = |name: &str| {
            headers
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| AffectError::MissingColumn(name.to_string()))
        };
        let word_col = find(&columns.word)?;
        let arousal_col = find(&columns.arousal)?;
        let valence_col = columns.valence.as_deref().map(find).transpose()?;
        let dominance_col = columns.dominance.as_deref().map(find).transpose()?;

        let mut lex = AffectLexicon::default();
        for (i, record) in reader.records().enumerate() {
            let line = i + 2;
            let record = record.map_err(|e| AffectError::Row {
                line,
                message: e.to_string(),
            })?;
            let field = |col: usize, name: &str| -> Result<f64, AffectError> {
                let raw = record.get(col).unwrap_or("").trim();
                raw.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| AffectError::Row {
                        line,
                        message: format!("non-numeric {name} value {raw:?}"),
                    })
            };
            let word = record.get(word_col).unwrap_or("").trim();
            if word.is_empty() {
                return Err(AffectError::Row {
                    line,
                    message: "empty word".into(),
                });
            }
            let norms = Norms {
                arousal: field(arousal_col, "arousal")?,
                valence: valence_col
                    .map(|c| field(c, "valence"))
                    .transpose()?
                    .unwrap_or(f64::NAN),
                dominance: dominance_col
                    .map(|c| field(c, "dominance"))
                    .transpose()?
                    .unwrap_or(f64::NAN),
            };
            lex.insert(word.to_string(), norms);
        }
        if lex.duplicates > 0 {
            log::warn!("lexicon: {} duplicate lemmas, later rows kept", lex.duplicates);
        }
        Ok(lex)
    }
}

pub fn load_lexicon(path: impl AsRef<Path>, columns: &ColumnMap) -> Result<AffectLexicon, AffectError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| AffectError::Io {
        path: path.display().to_string(),
        source,
    })?;
    AffectLexicon::parse(&text, columns)
}

/// Mean arousal over every in-lexicon token occurrence of the training
/// documents.
pub fn training_mean<D: AsRef<[String]>>(train_docs: &[D], lexicon: &AffectLexicon) -> Result<f64, AffectError> {
    let (sum, n) = train_docs
        .iter()
        .flat_map(|d| d.as_ref().iter())
        .filter_map(|t| lexicon.arousal(t))
        .fold((0.0, 0usize), |(s, n), a| (s + a, n + 1));
    if n == 0 {
        return Err(AffectError::NoCoverage);
    }
    Ok(sum / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum AffectWeighting {
    /// Centered arousal wherever the term occurs.
    #[default]
    Indicator,
    /// Centered arousal times the term count.
    TermFrequency,
}

#[derive(Debug, Clone, Copy)]
pub struct ArousalContext<'a> {
    pub mean: f64,
    pub lexicon: &'a AffectLexicon,
    pub weighting: AffectWeighting,
}

impl<'a> ArousalContext<'a> {
    /// Centers on the training mean. Reuse the same context for queries.
    pub fn from_training<D: AsRef<[String]>>(
        train_docs: &[D],
        lexicon: &'a AffectLexicon,
    ) -> Result<Self, AffectError> {
        Ok(ArousalContext {
            mean: training_mean(train_docs, lexicon)?,
            lexicon,
            weighting: AffectWeighting::Indicator,
        })
    }

    pub fn centered(&self, lemma: &str) -> Option<f64> {
        self.lexicon.arousal(lemma).map(|a| a - self.mean)
    }
}

/// Centered-arousal matrix with the shape, vocabulary and documents of
/// `base`. Out-of-lexicon terms contribute 0.
pub fn arousal_matrix(base: &TermDocMatrix, ctx: &ArousalContext<'_>) -> TermDocMatrix {
    let mut entries = base.counts.clone();
    for (i, mut row) in entries.row_iter_mut().enumerate() {
        let centered = ctx.centered(base.vocab.term(i)).unwrap_or(0.0);
        for c in row.iter_mut() {
            *c = match (ctx.weighting, *c > 0.0) {
                (_, false) => 0.0,
                (AffectWeighting::Indicator, true) => centered,
                (AffectWeighting::TermFrequency, true) => centered * *c,
            };
        }
    }
    TermDocMatrix {
        entries,
        ..base.clone()
    }
}

/// Elementwise `M + A`.
pub fn add_affect(m: &TermDocMatrix, a: &TermDocMatrix) -> Result<TermDocMatrix, AffectError> {
    if m.entries.shape() != a.entries.shape() {
        return Err(AffectError::Misaligned("shape"));
    }
    if m.vocab != a.vocab {
        return Err(AffectError::Misaligned("vocabulary"));
    }
    if m.doc_ids != a.doc_ids {
        return Err(AffectError::Misaligned("document order"));
    }
    Ok(TermDocMatrix {
        entries: &m.entries + &a.entries,
        ..m.clone()
    })
}
