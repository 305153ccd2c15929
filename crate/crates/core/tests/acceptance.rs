//! Acceptance criteria for the library. Runs as a plain binary so each
//! criterion prints one PASS/FAIL line under `cargo test`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use topspace::affect::{add_affect, arousal_matrix, training_mean, AffectLexicon, AffectWeighting, ArousalContext};
use topspace::classify::{
    fisher_criterion, fit_fda, fit_svm_observed, knn_auto, scatter_matrices, svm_classify, SvmConfig,
};
use topspace::eval::{compute_metrics, gen_synthetic, random_split, run_experiment, ExperimentConfig, SynthConfig};
use topspace::representation::{training_matrix, LocalWeight, Vocabulary};
use topspace::topics::{extract_topics, fit_lda_corpus, fit_lda_observed, LdaConfig};
use topspace::{ClassifierKind, ContextMode, Label, Representation, Stoplist};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_two_class(rng: &mut ChaCha8Rng, q: usize, n: usize) -> (DMatrix<f64>, Vec<Label>) {
    let mut labels = vec![Label::Idiom, Label::Literal];
    labels.extend((2..n).map(|_| {
        if rng.gen_bool(0.5) {
            Label::Idiom
        } else {
            Label::Literal
        }
    }));
    let shift: Vec<f64> = (0..q).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let x = DMatrix::from_fn(q, n, |i, j| {
        rng.gen_range(-1.0..1.0) * (1.0 + i as f64 * 0.2) + if labels[j] == Label::Idiom { shift[i] } else { 0.0 }
    });
    (x, labels)
}

fn scatter_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let q = rng.gen_range(1..=10);
        let n = rng.gen_range(2..=50);
        let (x, labels) = random_two_class(&mut rng, q, n);
        let s = scatter_matrices(&x, &labels).map_err(|e| e.to_string())?;
        worst = worst.max((&s.s_m - (&s.s_w + &s.s_b)).amax());
    }
    ensure(worst < 1e-9, || format!("max residual {worst:e}"))?;
    let x = DMatrix::from_row_slice(1, 4, &[0.0, 2.0, 4.0, 6.0]);
    let s = scatter_matrices(&x, &[Label::Idiom, Label::Idiom, Label::Literal, Label::Literal])
        .map_err(|e| e.to_string())?;
    let hand = (s.s_w[(0, 0)], s.s_b[(0, 0)], s.s_m[(0, 0)]);
    ensure(hand == (1.0, 4.0, 5.0), || format!("1-D case gave {hand:?}"))?;
    Ok(format!("max residual {worst:.1e}; 1-D (S_w, S_b, S_m) = {hand:?}"))
}

fn fda_maximality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2002);
    let mut min_margin = f64::INFINITY;
    for _ in 0..20 {
        let q = rng.gen_range(2..=10);
        let n = rng.gen_range(q + 4..=50);
        let (x, labels) = random_two_class(&mut rng, q, n);
        let s = scatter_matrices(&x, &labels).map_err(|e| e.to_string())?;
        let model = fit_fda(&x, &labels).map_err(|e| e.to_string())?;
        let fitted = fisher_criterion(&s, &model.w);
        let best_random = (0..1000)
            .map(|_| {
                let v = DVector::from_fn(q, |_, _| rng.gen_range(-1.0..1.0)).normalize();
                fisher_criterion(&s, &v)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        ensure(fitted >= best_random - 1e-6, || {
            format!("J(w) = {fitted} < max J(v) = {best_random}")
        })?;
        min_margin = min_margin.min(fitted - best_random);
    }
    Ok(format!("smallest J(w) - max J(v) = {min_margin:.3e}"))
}

fn knn_rule() -> Outcome {
    let got: Vec<usize> = [10, 30, 40, 100].iter().map(|&n| knn_auto(n)).collect();
    ensure(got == [2, 6, 8, 20], || format!("got {got:?}"))?;
    Ok(format!("k for n = 10,30,40,100 -> {got:?}"))
}

/// Corpus from two disjoint ten-word topics mixed per document.
fn two_topic_corpus(seed: u64) -> (Vec<Vec<String>>, [Vec<String>; 2]) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let topic_a: Vec<String> = (0..10).map(|i| format!("a{i}")).collect();
    let topic_b: Vec<String> = (0..10).map(|i| format!("b{i}")).collect();
    let docs = (0..20)
        .map(|_| {
            let share_a: f64 = rng.gen_range(0.0..1.0);
            (0..200)
                .map(|_| {
                    let topic = if rng.gen_bool(share_a) { &topic_a } else { &topic_b };
                    topic[rng.gen_range(0..10)].clone()
                })
                .collect()
        })
        .collect();
    (docs, [topic_a, topic_b])
}

fn lda_recovery() -> Outcome {
    let mut worst = 10;
    for seed in 0..5u64 {
        let (docs, truth) = two_topic_corpus(300 + seed);
        let vocab = Vocabulary::from_terms(truth.iter().flatten().cloned());
        let cfg = LdaConfig {
            num_topics: 2,
            terms_per_topic: 10,
            alpha: 0.5,
            beta: 0.1,
            iterations: 500,
            seed,
        };
        let model = fit_lda_corpus(&docs, &vocab, &cfg).map_err(|e| e.to_string())?;
        let topics = extract_topics(&model, 10);
        for topic in &topics.topics {
            let overlap = truth
                .iter()
                .map(|gen| topic.iter().filter(|(w, _)| gen.contains(w)).count())
                .max()
                .unwrap();
            worst = worst.min(overlap);
        }
        // Each generating vocabulary must be claimed by a different topic.
        let owner = |t: &Vec<(String, f64)>| usize::from(t[0].0.starts_with('b'));
        ensure(owner(&topics.topics[0]) != owner(&topics.topics[1]), || {
            format!("seed {seed}: both topics match one vocabulary")
        })?;
    }
    ensure(worst >= 8, || format!("worst overlap {worst}/10"))?;
    Ok(format!("worst top-10 overlap over 5 seeds: {worst}/10"))
}

fn lda_normalization() -> Outcome {
    let (docs, truth) = two_topic_corpus(77);
    let docs: Vec<Vec<String>> = docs
        .into_iter()
        .take(4)
        .map(|d| d.into_iter().take(30).collect())
        .collect();
    let vocab = Vocabulary::from_terms(truth.iter().flatten().cloned());
    let mut freq = vec![0u32; vocab.len()];
    for d in &docs {
        for w in vocab.encode(d) {
            freq[w] += 1;
        }
    }
    let cfg = LdaConfig {
        iterations: 60,
        seed: 9,
        ..LdaConfig::new(3, 10)
    };
    let mut violations = 0;
    let mut sweeps = 0;
    let model = fit_lda_observed(&docs, &vocab, &cfg, |_, counts| {
        sweeps += 1;
        for (w, &f) in freq.iter().enumerate() {
            if counts.topic_word.iter().map(|row| row[w]).sum::<u32>() != f {
                violations += 1;
            }
        }
        let totals: u32 = counts.topic_totals.iter().sum();
        if totals != freq.iter().sum::<u32>() {
            violations += 1;
        }
    })
    .map_err(|e| e.to_string())?;
    ensure(violations == 0, || format!("{violations} conservation violations"))?;
    let mut worst = 0.0f64;
    for row in model.phi.iter().chain(&model.theta) {
        worst = worst.max((row.iter().sum::<f64>() - 1.0).abs());
    }
    ensure(worst <= 1e-9, || format!("row sum error {worst:e}"))?;
    Ok(format!("{sweeps} sweeps conserved; max row-sum error {worst:.1e}"))
}

fn arousal_centering() -> Outcome {
    let lex = AffectLexicon::from_arousal([("calm", 1.9), ("panic", 6.7), ("storm", 5.3), ("table", 3.1)]);
    let docs: Vec<Vec<String>> = [
        &["calm", "panic", "table", "xyz"][..],
        &["storm", "storm", "calm"],
        &["panic", "table", "table", "table"],
    ]
    .iter()
    .map(|d| d.iter().map(|s| s.to_string()).collect())
    .collect();
    let mean = training_mean(&docs, &lex).map_err(|e| e.to_string())?;
    let centered: Vec<f64> = docs
        .iter()
        .flatten()
        .filter_map(|t| lex.arousal(t))
        .map(|a| a - mean)
        .collect();
    let residual = (centered.iter().sum::<f64>() / centered.len() as f64).abs();
    ensure(residual <= 1e-9, || format!("centered mean {residual:e}"))?;

    let ids = (0..docs.len()).map(|i| i.to_string()).collect();
    let m = training_matrix(&docs, ids, LocalWeight::Raw).map_err(|e| e.to_string())?;
    let ctx = ArousalContext {
        mean,
        lexicon: &lex,
        weighting: AffectWeighting::Indicator,
    };
    let a = arousal_matrix(&m, &ctx);
    ensure(a.entries.iter().any(|&v| v != 0.0), || {
        "arousal matrix unexpectedly zero".into()
    })?;
    let mut zero = a.clone();
    zero.entries.fill(0.0);
    let theta = add_affect(&m, &zero).map_err(|e| e.to_string())?;
    ensure(theta == m, || "Θ with zero A differs from M".into())?;
    Ok(format!("centered mean {residual:.1e}; Θ(M, 0) == M"))
}

fn end_to_end_synthetic() -> Outcome {
    let data = gen_synthetic(&SynthConfig {
        doc_len: 80,
        overlap_fraction: 0.0,
        ..SynthConfig::new(30, 20, 2024)
    });
    let stop = Stoplist::default_english();
    let mut topics = ExperimentConfig::new(
        Representation::Topics,
        ClassifierKind::FdaKnn,
        ContextMode::SingleParagraph,
    );
    topics.runs = 10;
    topics.seed = 7;
    topics.split = Some((15, 15));
    let mut text = topics.clone();
    text.representation = Representation::Text;
    let t = run_experiment(&data, &topics, &stop, None).map_err(|e| e.to_string())?;
    let x = run_experiment(&data, &text, &stop, None).map_err(|e| e.to_string())?;
    let (ta, xa) = (t.mean.accuracy, x.mean.accuracy);
    ensure(ta >= 0.9, || format!("topic accuracy {ta:.3} < 0.9"))?;
    ensure(ta >= xa - 0.05, || {
        format!("topic accuracy {ta:.3} below text {xa:.3} - 0.05")
    })?;
    Ok(format!("Topics+FDA acc {ta:.3}, Text+FDA acc {xa:.3}"))
}

fn protocol_fidelity() -> Outcome {
    let data = gen_synthetic(&SynthConfig::new(27, 51, 88));
    for seed in 0..10u64 {
        let split = random_split(&data, 20, 20, seed).map_err(|e| e.to_string())?;
        let count = |l| split.test.iter().filter(|&&i| data.instances[i].label == l).count();
        let shape = (count(Label::Idiom), count(Label::Literal));
        ensure(shape == (7, 31), || format!("seed {seed}: test partition {shape:?}"))?;
    }
    let mut cfg = ExperimentConfig::new(
        Representation::Topics,
        ClassifierKind::FdaKnn,
        ContextMode::SingleParagraph,
    );
    cfg.split = Some((20, 20));
    cfg.seed = 31;
    let stop = Stoplist::default_english();
    let a = run_experiment(&data, &cfg, &stop, None).map_err(|e| e.to_string())?;
    let b = run_experiment(&data, &cfg, &stop, None).map_err(|e| e.to_string())?;
    ensure(a.runs.len() == 10, || format!("{} runs", a.runs.len()))?;
    let same_bits = a.mean.accuracy.to_bits() == b.mean.accuracy.to_bits()
        && a.mean.precision.to_bits() == b.mean.precision.to_bits()
        && a.mean.recall.to_bits() == b.mean.recall.to_bits();
    ensure(a == b && same_bits, || "repeated 10-run average differs".into())?;
    Ok(format!(
        "test partition (7, 31) for 10 seeds; 10-run mean acc {:.4} reproduced bit-exactly",
        a.mean.accuracy
    ))
}

fn svm_baseline() -> Outcome {
    let x = DMatrix::from_column_slice(2, 4, &[0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0, 0.0]);
    let labels = [Label::Idiom, Label::Idiom, Label::Literal, Label::Literal];
    let cfg = SvmConfig {
        gamma: Some(1.0),
        ..SvmConfig::default()
    };
    let mut steps = 0;
    let mut out_of_box = 0;
    let model = fit_svm_observed(&x, &labels, &cfg, |_, alphas| {
        steps += 1;
        out_of_box += alphas.iter().filter(|&&a| !(0.0..=cfg.c).contains(&a)).count();
    })
    .map_err(|e| e.to_string())?;
    let correct = x
        .column_iter()
        .zip(&labels)
        .filter(|(c, &l)| svm_classify(&model, c.as_view()) == l)
        .count();
    ensure(correct == 4, || format!("XOR training accuracy {correct}/4"))?;
    ensure(out_of_box == 0, || format!("{out_of_box} multipliers left [0, C]"))?;
    Ok(format!("XOR accuracy 1.0; {steps} SMO steps all within [0, C]"))
}

fn metrics_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4004);
    for case in 0..1000 {
        let n = rng.gen_range(1..40);
        let draw = |rng: &mut ChaCha8Rng| {
            if rng.gen_bool(0.4) {
                Label::Idiom
            } else {
                Label::Literal
            }
        };
        let pred: Vec<Label> = (0..n).map(|_| draw(&mut rng)).collect();
        let gold: Vec<Label> = (0..n).map(|_| draw(&mut rng)).collect();
        let mut cells = [[0usize; 2]; 2];
        for i in 0..n {
            cells[usize::from(pred[i] == Label::Idiom)][usize::from(gold[i] == Label::Idiom)] += 1;
        }
        let (tp, fp, fn_, tn) = (cells[1][1], cells[1][0], cells[0][1], cells[0][0]);
        let precision = if tp + fp == 0 {
            0.0
        } else {
            tp as f64 / (tp + fp) as f64
        };
        let recall = if tp + fn_ == 0 {
            0.0
        } else {
            tp as f64 / (tp + fn_) as f64
        };
        let accuracy = (tp + tn) as f64 / n as f64;
        let m = compute_metrics(&pred, &gold).map_err(|e| e.to_string())?;
        ensure(
            (m.precision, m.recall, m.accuracy) == (precision, recall, accuracy),
            || format!("case {case}: {m:?} vs ({precision}, {recall}, {accuracy})"),
        )?;
    }
    Ok("1000 random cases match brute-force counting exactly".into())
}

struct Criterion {
    id: u8,
    name: &'static str,
    limit: Option<Duration>,
    check: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "scatter identity",
            limit: Some(Duration::from_secs(1)),
            check: scatter_identity,
        },
        Criterion {
            id: 2,
            name: "FDA maximality",
            limit: Some(Duration::from_secs(5)),
            check: fda_maximality,
        },
        Criterion {
            id: 3,
            name: "kNN rule",
            limit: None,
            check: knn_rule,
        },
        Criterion {
            id: 4,
            name: "LDA recovery",
            limit: Some(Duration::from_secs(30)),
            check: lda_recovery,
        },
        Criterion {
            id: 5,
            name: "LDA normalization/conservation",
            limit: None,
            check: lda_normalization,
        },
        Criterion {
            id: 6,
            name: "arousal centering",
            limit: None,
            check: arousal_centering,
        },
        Criterion {
            id: 7,
            name: "end-to-end synthetic",
            limit: Some(Duration::from_secs(120)),
            check: end_to_end_synthetic,
        },
        Criterion {
            id: 8,
            name: "protocol fidelity",
            limit: None,
            check: protocol_fidelity,
        },
        Criterion {
            id: 9,
            name: "SVM baseline",
            limit: None,
            check: svm_baseline,
        },
        Criterion {
            id: 10,
            name: "metrics oracle",
            limit: None,
            check: metrics_oracle,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.check)();
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2} {}: {detail} [{elapsed:.2?}]", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {}: {why} [{elapsed:.2?}]", c.id, c.name);
            }
        }
    }
    println!(
        "{} of {} acceptance criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
