//! Labeled occurrences of a target expression and their paragraph contexts.
//!
//! A corpus file holds one JSON object per line:
//!
//! ```text
//! {"id":"bw-01","expression":"blow_whistle","label":"I",
//!  "paragraphs":[["referee","blow","whistle"]],"target_paragraph_index":0,"target_span":[1,3]}
//! ```
//!
//! Tokens are lemmas. They are lowercased on load.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::fs;
use std::io::{self, BufRead, BufReader, Write};
use std::ops::Range;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: malformed record: {message}")]
    Parse { line: usize, message: String },
    #[error("record {id}: {message}")]
    Invalid { id: String, message: String },
    #[error("dataset mixes expressions {first:?} and {other:?}")]
    MixedExpressions { first: String, other: String },
    #[error("duplicate instance id {0:?}")]
    DuplicateId(String),
    #[error("dataset is empty")]
    Empty,
}

/// Gold annotation of an occurrence. `Unknown` instances are kept in the
/// dataset but never used for training or testing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "I")]
    Idiom,
    #[serde(rename = "L")]
    Literal,
    #[serde(rename = "Q")]
    Unknown,
}

impl Label {
    pub fn code(self) -> &'static str {
        match self {
            Label::Idiom => "I",
            Label::Literal => "L",
            Label::Unknown => "Q",
        }
    }

    pub fn is_annotated(self) -> bool {
        self != Label::Unknown
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Idiom => "idiom",
            Label::Literal => "literal",
            Label::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub id: String,
    pub expression: String,
    pub label: Label,
    pub paragraphs: Vec<Vec<String>>,
    pub target_paragraph_index: usize,
    /// Half-open `[start, end)` token offsets inside the target paragraph.
    pub target_span: (usize, usize),
}

impl Instance {
    pub fn validate(&self) -> Result<(), CorpusError> {
        let invalid = |message: String| CorpusError::Invalid {
            id: self.id.clone(),
            message,
        };
        if self.paragraphs.is_empty() {
            return Err(invalid("no paragraphs".into()));
        }
        if let Some(i) = self.paragraphs.iter().position(Vec::is_empty) {
            return Err(invalid(format!("paragraph {i} is empty")));
        }
        if self.target_paragraph_index >= self.paragraphs.len() {
            return Err(invalid(format!(
                "target_paragraph_index {} out of range for {} paragraphs",
                self.target_paragraph_index,
                self.paragraphs.len()
            )));
        }
        let len = self.paragraphs[self.target_paragraph_index].len();
        let (start, end) = self.target_span;
        if start >= end || end > len {
            return Err(invalid(format!(
                "target_span [{start},{end}) outside target paragraph of {len} tokens"
            )));
        }
        Ok(())
    }

    fn lowercase(&mut self) {
        for paragraph in &mut self.paragraphs {
            for token in paragraph.iter_mut() {
                if token.chars().any(char::is_uppercase) {
                    *token = token.to_lowercase();
                }
            }
        }
    }

    pub fn target_tokens(&self) -> &[String] {
        let (start, end) = self.target_span;
        &self.paragraphs[self.target_paragraph_index][start..end]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub name: String,
    pub expression: String,
    pub instances: Vec<Instance>,
}

impl Dataset {
    /// Validates every instance, the shared expression and id uniqueness.
    pub fn new(name: impl Into<String>, mut instances: Vec<Instance>) -> Result<Self, CorpusError> {
        let first = instances.first().ok_or(CorpusError::Empty)?;
        let expression = first.expression.clone();
        let mut seen = HashSet::with_capacity(instances.len());
        for inst in &mut instances {
            inst.lowercase();
            inst.validate()?;
            if inst.expression != expression {
                return Err(CorpusError::MixedExpressions {
                    first: expression,
                    other: inst.expression.clone(),
                });
            }
            if !seen.insert(inst.id.clone()) {
                return Err(CorpusError::DuplicateId(inst.id.clone()));
            }
        }
        Ok(Dataset {
            name: name.into(),
            expression,
            instances,
        })
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Instances usable for training and testing (label I or L).
    pub fn annotated(&self) -> impl Iterator<Item = &Instance> {
        self.instances.iter().filter(|i| i.label.is_annotated())
    }

    pub fn count(&self, label: Label) -> usize {
        self.instances.iter().filter(|i| i.label == label).count()
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> io::Result<()> {
        for inst in &self.instances {
            serde_json::to_writer(&mut out, inst)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), CorpusError> {
        let path = path.as_ref();
        let io_err = |source| CorpusError::Io {
            path: path.display().to_string(),
            source,
        };
        let mut file = io::BufWriter::new(fs::File::create(path).map_err(io_err)?);
        self.write_jsonl(&mut file).map_err(io_err)?;
        file.flush().map_err(io_err)
    }
}

/// Parses line-delimited records. Blank lines are skipped; line numbers
/// in errors are 1-based.
pub fn read_dataset<R: BufRead>(name: &str, reader: R) -> Result<Dataset, CorpusError> {
    let mut instances = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| CorpusError::Io {
            path: name.to_string(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let inst: Instance = serde_json::from_str(&line).map_err(|e| CorpusError::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        instances.push(inst);
    }
    Dataset::new(name, instances)
}

/// Loads a corpus file. The dataset is named after the file stem.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset, CorpusError> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    read_dataset(&name, BufReader::new(file))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ContextMode {
    /// The target paragraph only.
    #[default]
    SingleParagraph,
    /// The target paragraph and its immediate neighbours, when present.
    MultiParagraph,
}

impl ContextMode {
    fn paragraph_range(self, inst: &Instance) -> Range<usize> {
        let t = inst.target_paragraph_index;
        match self {
            ContextMode::SingleParagraph => t..t + 1,
            ContextMode::MultiParagraph => t.saturating_sub(1)..(t + 2).min(inst.paragraphs.len()),
        }
    }
}

/// Concatenated tokens of the selected paragraphs together with the
/// position of the target expression inside them.
pub fn context_window_with_span(inst: &Instance, mode: ContextMode) -> (Vec<String>, Range<usize>) {
    let range = mode.paragraph_range(inst);
    let mut tokens = Vec::new();
    let mut span = 0..0;
    for p in range {
        if p == inst.target_paragraph_index {
            let (start, end) = inst.target_span;
            span = tokens.len() + start..tokens.len() + end;
        }
        tokens.extend(inst.paragraphs[p].iter().cloned());
    }
    (tokens, span)
}

pub fn context_window(inst: &Instance, mode: ContextMode) -> Vec<String> {
    context_window_with_span(inst, mode).0
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stoplist {
    words: BTreeSet<String>,
}

const DEFAULT_STOPLIST: &str = include_str!("../data/stoplist.txt");

impl Stoplist {
    pub fn new<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Stoplist {
            words: words.into_iter().map(|w| w.as_ref().to_lowercase()).collect(),
        }
    }

    /// Web-search function words with prepositions and particles removed,
    /// since those often belong to the expressions themselves.
    pub fn default_english() -> Self {
        Self::parse(DEFAULT_STOPLIST)
    }

    /// One lemma per line; `#` starts a comment.
    pub fn parse(text: &str) -> Self {
        Self::new(
            text.lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .filter(|l| !l.is_empty()),
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, CorpusError> {
        let path = path.as_ref();
        fs::read_to_string(path)
            .map(|text| Self::parse(&text))
            .map_err(|source| CorpusError::Io {
                path: path.display().to_string(),
                source,
            })
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.words.contains(lemma)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Lowercases and drops stoplist members, preserving order.
pub fn preprocess(tokens: &[String], stoplist: &Stoplist) -> Vec<String> {
    tokens
        .iter()
        .map(|t| t.to_lowercase())
        .filter(|t| !stoplist.contains(t))
        .collect()
}

/// Context extraction plus preprocessing as configured for an experiment.
#[derive(Debug, Clone)]
pub struct Preprocessor {
    pub stoplist: Stoplist,
    pub keep_target: bool,
    pub mode: ContextMode,
}

impl Preprocessor {
    pub fn new(stoplist: Stoplist, mode: ContextMode) -> Self {
        Preprocessor {
            stoplist,
            keep_target: true,
            mode,
        }
    }

    pub fn context(&self, inst: &Instance) -> Vec<String> {
        let (tokens, span) = context_window_with_span(inst, self.mode);
        let kept: Vec<String> = if self.keep_target {
            tokens
        } else {
            tokens
                .into_iter()
                .enumerate()
                .filter(|(i, _)| !span.contains(i))
                .map(|(_, t)| t)
                .collect()
        };
        preprocess(&kept, &self.stoplist)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn toks(words: &[&str]) -> Vec<String> {
        words.iter().map(|s| s.to_string()).collect()
    }

    fn instance(id: &str, paragraphs: &[&[&str]], target: usize, span: (usize, usize)) -> Instance {
        Instance {
            id: id.into(),
            expression: "blow_whistle".into(),
            label: Label::Idiom,
            paragraphs: paragraphs.iter().map(|p| toks(p)).collect(),
            target_paragraph_index: target,
            target_span: span,
        }
    }

    #[test]
    fn single_and_multi_windows() {
        let inst = instance("a", &[&["x", "y"], &["blow", "whistle", "z"], &["w"]], 1, (0, 2));
        assert_eq!(
            context_window(&inst, ContextMode::SingleParagraph),
            toks(&["blow", "whistle", "z"])
        );
        let (multi, span) = context_window_with_span(&inst, ContextMode::MultiParagraph);
        assert_eq!(multi, toks(&["x", "y", "blow", "whistle", "z", "w"]));
        assert_eq!(span, 2..4);
    }

    #[test]
    fn multi_window_at_edges() {
        let inst = instance("a", &[&["blow", "whistle"]], 0, (0, 2));
        assert_eq!(
            context_window(&inst, ContextMode::MultiParagraph),
            toks(&["blow", "whistle"])
        );
        let first = instance("b", &[&["blow", "whistle"], &["q"], &["r"]], 0, (0, 2));
        assert_eq!(
            context_window(&first, ContextMode::MultiParagraph),
            toks(&["blow", "whistle", "q"])
        );
    }

    #[test]
    fn stopword_removal() {
        let stop = Stoplist::new(["the"]);
        assert_eq!(
            preprocess(&toks(&["the", "sergeant", "hold", "fire"]), &stop),
            toks(&["sergeant", "hold", "fire"])
        );
        assert!(preprocess(&[], &stop).is_empty());
        assert!(preprocess(&toks(&["the", "The"]), &stop).is_empty());
    }

    #[test]
    fn target_tokens_can_be_dropped() {
        let inst = instance("a", &[&["the", "blow", "whistle", "loud"]], 0, (1, 3));
        let mut pre = Preprocessor::new(Stoplist::new(["the"]), ContextMode::SingleParagraph);
        assert_eq!(pre.context(&inst), toks(&["blow", "whistle", "loud"]));
        pre.keep_target = false;
        assert_eq!(pre.context(&inst), toks(&["loud"]));
    }

    #[test]
    fn default_stoplist_parses_comments() {
        let stop = Stoplist::default_english();
        assert!(stop.contains("the"));
        assert!(!stop.contains("on"), "prepositions are kept");
        assert!(!stop.words.iter().any(|w| w.contains('#')));
        let parsed = Stoplist::parse("# header\nfoo # trailing\n\n Bar\n");
        assert_eq!(parsed, Stoplist::new(["foo", "bar"]));
    }

    #[test]
    fn span_past_paragraph_is_rejected() {
        let inst = instance("bad", &[&["blow", "whistle"]], 0, (1, 3));
        match Dataset::new("d", vec![inst]) {
            Err(CorpusError::Invalid { id, .. }) => assert_eq!(id, "bad"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn empty_and_mixed_inputs() {
        assert!(matches!(read_dataset("d", "".as_bytes()), Err(CorpusError::Empty)));
        let a = instance("a", &[&["blow", "whistle"]], 0, (0, 2));
        let mut b = a.clone();
        b.id = "b".into();
        b.expression = "lose_head".into();
        assert!(matches!(
            Dataset::new("d", vec![a.clone(), b]),
            Err(CorpusError::MixedExpressions { .. })
        ));
        assert!(matches!(
            Dataset::new("d", vec![a.clone(), a]),
            Err(CorpusError::DuplicateId(_))
        ));
    }

    #[test]
    fn parse_error_names_line() {
        let good = r#"{"id":"a","expression":"e","label":"L","paragraphs":[["x","e"]],"target_paragraph_index":0,"target_span":[1,2]}"#;
        let text = format!("{good}\n\n{{not json\n");
        match read_dataset("d", text.as_bytes()) {
            Err(CorpusError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tokens_lowercased_and_unknown_kept() {
        let text = r#"{"id":"a","expression":"e","label":"Q","paragraphs":[["Big","E"]],"target_paragraph_index":0,"target_span":[1,2]}"#;
        let ds = read_dataset("d", text.as_bytes()).unwrap();
        assert_eq!(ds.instances[0].paragraphs[0], toks(&["big", "e"]));
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.annotated().count(), 0);
    }

    fn arb_tokens() -> impl Strategy<Value = Vec<String>> {
        prop::collection::vec(
            prop::sample::select(vec!["The", "a", "cat", "Sat", "on", "mat", "of"]),
            0..20,
        )
        .prop_map(|v| v.into_iter().map(String::from).collect())
    }

    fn arb_instance() -> impl Strategy<Value = Instance> {
        (
            prop::collection::vec(prop::collection::vec("[a-z]{1,6}", 1..6), 1..5),
            any::<prop::sample::Index>(),
            any::<prop::sample::Index>(),
        )
            .prop_map(|(paragraphs, t, s)| {
                let target = t.index(paragraphs.len());
                let len = paragraphs[target].len();
                let start = s.index(len);
                Instance {
                    id: "x".into(),
                    expression: "e".into(),
                    label: Label::Literal,
                    paragraphs,
                    target_paragraph_index: target,
                    target_span: (start, start + 1),
                }
            })
    }

    proptest! {
        #[test]
        fn preprocess_is_idempotent(tokens in arb_tokens()) {
            let stop = Stoplist::new(["the", "a", "of"]);
            let once = preprocess(&tokens, &stop);
            prop_assert_eq!(preprocess(&once, &stop), once);
        }

        #[test]
        fn single_window_inside_multi(inst in arb_instance()) {
            let single = context_window(&inst, ContextMode::SingleParagraph);
            let multi = context_window(&inst, ContextMode::MultiParagraph);
            prop_assert!(multi.windows(single.len()).any(|w| w == single.as_slice()));
        }

        #[test]
        fn jsonl_round_trip(insts in prop::collection::vec(arb_instance(), 1..6)) {
            let insts: Vec<Instance> = insts
                .into_iter()
                .enumerate()
                .map(|(i, mut inst)| { inst.id = format!("id{i}"); inst })
                .collect();
            let ds = Dataset::new("rt", insts).unwrap();
            let mut buf = Vec::new();
            ds.write_jsonl(&mut buf).unwrap();
            let back = read_dataset("rt", buf.as_slice()).unwrap();
            prop_assert_eq!(back, ds);
        }
    }
}
