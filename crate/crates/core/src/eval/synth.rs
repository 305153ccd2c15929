use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::affect::{AffectLexicon, Norms};
use crate::corpus::{Dataset, Instance, Label};

/// Shape of a generated corpus. Idiom contexts draw from one word set,
/// literal contexts from another, and `overlap_fraction` of each set is
/// shared between them.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n_idiom: usize,
    pub n_literal: usize,
    pub vocab_size_per_class: usize,
    /// Tokens per paragraph.
    pub doc_len: usize,
    pub overlap_fraction: f64,
    /// Paragraphs per instance; the target sits in the middle one.
    pub paragraphs: usize,
    pub seed: u64,
}

impl SynthConfig {
    pub fn new(n_idiom: usize, n_literal: usize, seed: u64) -> Self {
        SynthConfig {
            n_idiom,
            n_literal,
            vocab_size_per_class: 40,
            doc_len: 80,
            overlap_fraction: 0.0,
            paragraphs: 3,
            seed,
        }
    }

    fn shared_count(&self) -> usize {
        ((self.overlap_fraction.clamp(0.0, 1.0) * self.vocab_size_per_class as f64).round() as usize)
            .min(self.vocab_size_per_class)
    }

    /// Word sets of the idiom and literal classes.
    pub fn class_words(&self) -> (Vec<String>, Vec<String>) {
        let shared = self.shared_count();
        let own = self.vocab_size_per_class - shared;
        let common: Vec<String> = (0..shared).map(|i| format!("s{i:03}")).collect();
        let mut idiom = common.clone();
        idiom.extend((0..own).map(|i| format!("i{i:03}")));
        let mut literal = common;
        literal.extend((0..own).map(|i| format!("l{i:03}")));
        (idiom, literal)
    }
}

pub const SYNTHETIC_TARGET: [&str; 2] = ["blow", "whistle"];

pub fn gen_synthetic(cfg: &SynthConfig) -> Dataset {
    assert!(
        cfg.doc_len > SYNTHETIC_TARGET.len(),
        "doc_len must leave room for the target"
    );
    assert!(cfg.vocab_size_per_class > 0 && cfg.paragraphs > 0);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (idiom_words, literal_words) = cfg.class_words();
    let target_index = cfg.paragraphs / 2;
    let mut instances = Vec::with_capacity(cfg.n_idiom + cfg.n_literal);
    let classes =
        std::iter::repeat_n(Label::Idiom, cfg.n_idiom).chain(std::iter::repeat_n(Label::Literal, cfg.n_literal));
    for (n, label) in classes.enumerate() {
        let words = if label == Label::Idiom {
            &idiom_words
        } else {
            &literal_words
        };
        let mut draw =
            |len: usize| -> Vec<String> { (0..len).map(|_| words[rng.gen_range(0..words.len())].clone()).collect() };
        let mut paragraphs: Vec<Vec<String>> = (0..cfg.paragraphs)
            .map(|p| {
                if p == target_index {
                    draw(cfg.doc_len - SYNTHETIC_TARGET.len())
                } else {
                    draw(cfg.doc_len)
                }
            })
            .collect();
        let start = rng.gen_range(0..=paragraphs[target_index].len());
        let target = &mut paragraphs[target_index];
        for (k, w) in SYNTHETIC_TARGET.iter().enumerate() {
            target.insert(start + k, w.to_string());
        }
        instances.push(Instance {
            id: format!("syn-{n:04}"),
            expression: SYNTHETIC_TARGET.join("_"),
            label,
            paragraphs,
            target_paragraph_index: target_index,
            target_span: (start, start + SYNTHETIC_TARGET.len()),
        });
    }
    Dataset::new("synthetic", instances).expect("generated instances are valid")
}

/// Arousal norms for every generated word: uniform in `[3, 5]`, plus
/// `idiom_shift` for words only idiom contexts use.
pub fn gen_synthetic_lexicon(cfg: &SynthConfig, idiom_shift: f64) -> AffectLexicon {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xA5A5_A5A5);
    let (idiom_words, literal_words) = cfg.class_words();
    let mut entries = Vec::new();
    let mut push = |w: &str, shift: f64, rng: &mut ChaCha8Rng| {
        entries.push((
            w.to_string(),
            Norms {
                valence: 5.0,
                arousal: 3.0 + rng.gen_range(0.0..2.0) + shift,
                dominance: 5.0,
            },
        ))
    };
    for w in &idiom_words {
        let shift = if w.starts_with('i') { idiom_shift } else { 0.0 };
        push(w, shift, &mut rng);
    }
    for w in literal_words.iter().filter(|w| w.starts_with('l')) {
        push(w, 0.0, &mut rng);
    }
    for w in SYNTHETIC_TARGET {
        push(w, 0.0, &mut rng);
    }
    AffectLexicon::from_entries(entries)
}
